//! JSON instance format and atomic file output.
//!
//! ```json
//! {
//!   "offline": ["u0", "u1"],
//!   "online": [
//!     {"id": "v0",
//!      "edges": [{"u": "u0", "w": 1.0, "p": 0.5}],
//!      "constraint": {"kind": "patience", "limit": 2}}
//!   ],
//!   "n": 3,
//!   "distributions": [[{"type": "v0", "prob": 1.0}], ...]
//! }
//! ```
//!
//! Constraint kinds are `patience` (`limit`, `null` or absent for unbounded),
//! `budget` (`budget` and one cost per edge) and `explicit` (`strings` of
//! local edge indices, completed under substrings and permutations). `n` and
//! `distributions` turn the graph into the type graph of a known i.d. input.
//! Unknown and duplicate keys are rejected.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{validate_graph, Edge, KnownIdInput, OnlineVertex, ProbingConstraint, StochasticGraph};

/// Longest explicit string accepted (closure completion is exponential).
const EXPLICIT_MAX_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    u: String,
    w: f64,
    p: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ConstraintJson {
    Patience {
        #[serde(default)]
        limit: Option<usize>,
    },
    Budget {
        budget: f64,
        costs: Vec<f64>,
    },
    Explicit {
        strings: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OnlineJson {
    id: String,
    edges: Vec<EdgeJson>,
    constraint: ConstraintJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassJson {
    #[serde(rename = "type")]
    type_id: String,
    prob: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    offline: Vec<String>,
    online: Vec<OnlineJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distributions: Option<Vec<Vec<MassJson>>>,
}

/// A parsed instance file.
#[derive(Clone, Debug)]
pub enum Instance {
    Graph(StochasticGraph),
    KnownId(KnownIdInput),
}

impl Instance {
    /// The instance as a known i.d. input (point masses for a graph).
    pub fn into_known_id(self) -> KnownIdInput {
        match self {
            Instance::Graph(g) => KnownIdInput::from_known_graph(g),
            Instance::KnownId(k) => k,
        }
    }

    pub fn graph(&self) -> &StochasticGraph {
        match self {
            Instance::Graph(g) => g,
            Instance::KnownId(k) => &k.type_graph,
        }
    }
}

fn index_of(ids: &[String], id: &str, what: &str) -> Result<usize, IoError> {
    ids.iter()
        .position(|x| x == id)
        .ok_or_else(|| IoError::Invalid(format!("unknown {what} id {id:?}")))
}

fn constraint_from_json(c: ConstraintJson) -> Result<ProbingConstraint, IoError> {
    Ok(match c {
        ConstraintJson::Patience { limit } => ProbingConstraint::patience(limit.unwrap_or(usize::MAX)),
        ConstraintJson::Budget { budget, costs } => ProbingConstraint::budget(budget, costs),
        ConstraintJson::Explicit { strings } => {
            if let Some(s) = strings.iter().find(|s| s.len() > EXPLICIT_MAX_LEN) {
                return Err(IoError::Invalid(format!(
                    "explicit string {s:?} is longer than {EXPLICIT_MAX_LEN}"
                )));
            }
            ProbingConstraint::explicit(strings)
        }
    })
}

fn constraint_to_json(c: &ProbingConstraint) -> Result<ConstraintJson, IoError> {
    Ok(match c {
        ProbingConstraint::Patience { limit } => ConstraintJson::Patience {
            limit: (*limit != usize::MAX).then_some(*limit),
        },
        ProbingConstraint::Budget { budget, costs } => ConstraintJson::Budget {
            budget: *budget,
            costs: costs.clone(),
        },
        ProbingConstraint::Explicit { strings } => ConstraintJson::Explicit {
            strings: strings.iter().map(|s| s.as_slice().to_vec()).collect(),
        },
        ProbingConstraint::OracleBacked(_) => {
            return Err(IoError::Invalid("oracle-backed constraints cannot be written".into()))
        }
    })
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    let mut online = Vec::with_capacity(raw.online.len());
    for v in raw.online {
        let edges = v
            .edges
            .iter()
            .map(|e| Ok(Edge::new(index_of(&raw.offline, &e.u, "offline")?, e.w, e.p)))
            .collect::<Result<Vec<_>, IoError>>()?;
        online.push(OnlineVertex::new(v.id, edges, constraint_from_json(v.constraint)?));
    }
    let g = StochasticGraph::new(raw.offline, online);
    let violations = validate_graph(&g);
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(IoError::Invalid(msg.join("; ")));
    }
    match (raw.n, raw.distributions) {
        (None, None) => Ok(Instance::Graph(g)),
        (Some(n), Some(rows)) => {
            if rows.len() != n {
                return Err(IoError::Invalid(format!("n = {n} but {} distribution rows", rows.len())));
            }
            let type_ids: Vec<String> = g.online.iter().map(|v| v.id.clone()).collect();
            let mut dists = Vec::with_capacity(n);
            for row in rows {
                let mut r = Vec::with_capacity(row.len());
                for m in row {
                    let b = index_of(&type_ids, &m.type_id, "type")?;
                    if r.iter().any(|&(c, _)| c == b) {
                        return Err(IoError::Invalid(format!("type {:?} repeated in a row", m.type_id)));
                    }
                    r.push((b, m.prob));
                }
                dists.push(r);
            }
            let input = KnownIdInput::new(g, dists);
            let violations = input.validate();
            if !violations.is_empty() {
                let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(IoError::Invalid(msg.join("; ")));
            }
            Ok(Instance::KnownId(input))
        }
        _ => Err(IoError::Invalid("`n` and `distributions` must be given together".into())),
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    parse_instance(&read_text(path)?)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn graph_json(g: &StochasticGraph) -> Result<InstanceJson, IoError> {
    let online = g
        .online
        .iter()
        .map(|v| {
            Ok(OnlineJson {
                id: v.id.clone(),
                edges: v
                    .edges
                    .iter()
                    .map(|e| EdgeJson {
                        u: g.offline[e.offline].clone(),
                        w: e.weight,
                        p: e.prob,
                    })
                    .collect(),
                constraint: constraint_to_json(&v.constraint)?,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(InstanceJson {
        offline: g.offline.clone(),
        online,
        n: None,
        distributions: None,
    })
}

pub fn graph_to_json(g: &StochasticGraph) -> Result<String, IoError> {
    Ok(serde_json::to_string_pretty(&graph_json(g)?)?)
}

pub fn known_id_to_json(input: &KnownIdInput) -> Result<String, IoError> {
    let mut j = graph_json(&input.type_graph)?;
    j.n = Some(input.arrivals());
    j.distributions = Some(
        input
            .distributions
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(b, r)| MassJson {
                        type_id: input.type_graph.online[b].id.clone(),
                        prob: r,
                    })
                    .collect()
            })
            .collect(),
    );
    Ok(serde_json::to_string_pretty(&j)?)
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let err = |source| IoError::File {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(err)?;
    f.write_all(bytes).map_err(err)?;
    f.sync_all().map_err(err)?;
    drop(f);
    fs::rename(&tmp, path).map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "offline": ["a", "b"],
        "online": [
            {"id": "x", "edges": [{"u": "a", "w": 1.0, "p": 0.5}, {"u": "b", "w": 2.0, "p": 0.25}],
             "constraint": {"kind": "patience", "limit": 1}},
            {"id": "y", "edges": [{"u": "b", "w": 1.5, "p": 1.0}],
             "constraint": {"kind": "patience"}}
        ]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let g = match parse_instance(SAMPLE).unwrap() {
            Instance::Graph(g) => g,
            other => panic!("{other:?}"),
        };
        assert_eq!(g.online[1].edges[0].offline, 1);
        assert!(g.online[1].constraint.is_unbounded_for(5));
        let back = match parse_instance(&graph_to_json(&g).unwrap()).unwrap() {
            Instance::Graph(g) => g,
            other => panic!("{other:?}"),
        };
        assert_eq!(graph_to_json(&back).unwrap(), graph_to_json(&g).unwrap());
    }

    #[test]
    fn rejects_duplicate_and_unknown_keys() {
        let dup = r#"{"offline": [], "offline": [], "online": []}"#;
        assert!(matches!(parse_instance(dup), Err(IoError::Json(_))));
        let unknown = r#"{"offline": [], "online": [], "extra": 1}"#;
        assert!(matches!(parse_instance(unknown), Err(IoError::Json(_))));
        let bad_p = SAMPLE.replace("\"p\": 0.5", "\"p\": 1.3");
        assert!(matches!(parse_instance(&bad_p), Err(IoError::Invalid(_))));
    }

    #[test]
    fn known_id_rows_drop_zero_mass_and_check_sums() {
        let text = SAMPLE.trim_end().trim_end_matches('}').to_string()
            + r#", "n": 2, "distributions": [[{"type": "x", "prob": 1.0}, {"type": "y", "prob": 0.0}],
                                             [{"type": "x", "prob": 0.5}, {"type": "y", "prob": 0.5}]]}"#;
        let input = match parse_instance(&text).unwrap() {
            Instance::KnownId(k) => k,
            other => panic!("{other:?}"),
        };
        assert_eq!(input.distributions[0], vec![(0, 1.0)]);
        let json = known_id_to_json(&input).unwrap();
        assert!(matches!(parse_instance(&json).unwrap(), Instance::KnownId(_)));
        let bad = text.replace("\"prob\": 0.5}, {\"type\": \"y\", \"prob\": 0.5", "\"prob\": 0.5}, {\"type\": \"y\", \"prob\": 0.4");
        assert!(matches!(parse_instance(&bad), Err(IoError::Invalid(_))));
    }

    #[test]
    fn explicit_constraints_are_completed() {
        let text = SAMPLE.replace(r#"{"kind": "patience", "limit": 1}"#, r#"{"kind": "explicit", "strings": [[0, 1]]}"#);
        let g = parse_instance(&text).unwrap();
        let v = &g.graph().online[0];
        assert!(v.admits(&[1, 0]).unwrap());
        assert!(v.admits(&[1]).unwrap());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
