//! Contention resolution for a single offline vertex (a rank-one matroid).
//!
//! Element `t` of a fractional point `z` with `Σ z ≤ 1` is active
//! independently with probability `z_t`. The online scheme keeps the first
//! active element it sees with `q_t = 1/(2 − Σ_{s<t} z_s)`; the random-order
//! scheme keeps an active element arriving at time `y` with `exp(−y z)`.

use super::ProbingError;

/// Slack allowed on `Σ z ≤ 1`.
pub const POINT_TOL: f64 = 1e-9;
/// Largest `k` accepted by [`ocrs_exact_selectability`].
pub const EXACT_MAX_K: usize = 20;

/// `1 / (2 − prefix)`.
pub fn ocrs_accept_prob(prefix: f64) -> Result<f64, ProbingError> {
    if prefix > 1.0 + POINT_TOL || prefix < -POINT_TOL {
        return Err(ProbingError::InfeasiblePoint { total: prefix });
    }
    Ok(1.0 / (2.0 - prefix.clamp(0.0, 1.0)))
}

/// `exp(−y z)`.
pub fn rcrs_accept_prob(y: f64, z: f64) -> f64 {
    (-y * z).exp()
}

/// `P[i selected | i active]` for every element `i` of `z` when elements
/// arrive in `order`, by summing over all activation patterns of the other
/// elements.
pub fn ocrs_exact_selectability(z: &[f64], order: &[usize]) -> Result<Vec<f64>, ProbingError> {
    let k = z.len();
    if k > EXACT_MAX_K {
        return Err(ProbingError::TooLarge {
            size: k,
            max: EXACT_MAX_K,
        });
    }
    if !crate::graph::ArrivalModel::is_permutation(order, k) {
        return Err(ProbingError::Plan(format!("{order:?} is not an order of {k} elements")));
    }
    let total: f64 = z.iter().sum();
    if total > 1.0 + POINT_TOL || z.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(ProbingError::InfeasiblePoint { total });
    }
    let mut q = vec![0.0; k];
    let mut prefix = 0.0;
    for &i in order {
        q[i] = ocrs_accept_prob(prefix)?;
        prefix += z[i];
    }
    let mut out = vec![0.0; k];
    for (pos, &i) in order.iter().enumerate() {
        let earlier = &order[..pos];
        let mut sel = 0.0;
        for mask in 0u32..(1u32 << earlier.len()) {
            let mut pr = 1.0;
            let mut free = 1.0;
            for (j, &s) in earlier.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    pr *= z[s];
                    // first come: s is kept with q_s if nothing was kept before
                    free *= 1.0 - q[s];
                } else {
                    pr *= 1.0 - z[s];
                }
            }
            sel += pr * free;
        }
        out[i] = q[i] * sel;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accept_probabilities() {
        assert_eq!(ocrs_accept_prob(0.0).unwrap(), 0.5);
        assert_eq!(ocrs_accept_prob(1.0).unwrap(), 1.0);
        assert!((ocrs_accept_prob(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(ocrs_accept_prob(1.1), Err(ProbingError::InfeasiblePoint { .. })));
        assert_eq!(rcrs_accept_prob(0.0, 0.7), 1.0);
        assert_eq!(rcrs_accept_prob(0.3, 0.0), 1.0);
        assert!((rcrs_accept_prob(1.0, 1.0) - 0.36787944117144233).abs() < 1e-15);
    }

    #[test]
    fn small_cases() {
        assert_eq!(ocrs_exact_selectability(&[1.0], &[0]).unwrap(), vec![0.5]);
        let s = ocrs_exact_selectability(&[0.5, 0.5], &[0, 1]).unwrap();
        assert!((s[0] - 0.5).abs() < 1e-15);
        assert!((s[1] - (2.0 / 3.0) * 0.75).abs() < 1e-15);
        assert!(ocrs_exact_selectability(&vec![0.01; 21], &(0..21).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn enumeration_agrees_with_product_form() {
        let z = [0.1, 0.3, 0.05, 0.2, 0.25];
        let order = [3, 0, 4, 1, 2];
        let s = ocrs_exact_selectability(&z, &order).unwrap();
        let mut avail = 1.0;
        let mut prefix = 0.0;
        for &i in &order {
            let q = 1.0 / (2.0 - prefix);
            assert!((s[i] - q * avail).abs() < 1e-14);
            avail *= 1.0 - z[i] * q;
            prefix += z[i];
        }
    }
}
