//! Reading and writing instance files, including what validation rejects.

use probe_commit::io::{known_id_to_json, parse_instance, Instance};

const FILE: &str = r#"{
  "offline": ["u0", "u1"],
  "online": [
    {"id": "a", "edges": [{"u": "u0", "w": 1.0, "p": 0.5}, {"u": "u1", "w": 2.0, "p": 0.25}],
     "constraint": {"kind": "patience", "limit": 1}},
    {"id": "b", "edges": [{"u": "u1", "w": 1.0, "p": 0.9}],
     "constraint": {"kind": "explicit", "strings": [[0]]}}
  ],
  "n": 2,
  "distributions": [[{"type": "a", "prob": 0.5}, {"type": "b", "prob": 0.5}],
                    [{"type": "b", "prob": 1.0}]]
}"#;

fn main() {
    match parse_instance(FILE).expect("valid file") {
        Instance::KnownId(input) => {
            println!("{} arrivals over {} types", input.arrivals(), input.type_graph.online_count());
            println!("{}", known_id_to_json(&input).unwrap());
        }
        Instance::Graph(_) => unreachable!(),
    }
    for bad in [
        FILE.replace("\"p\": 0.9", "\"p\": 1.5"),
        FILE.replace("\"prob\": 1.0", "\"prob\": 0.7"),
        FILE.replace("\"w\": 1.0, \"p\": 0.5", "\"w\": 1.0, \"w\": 1.0, \"p\": 0.5"),
        FILE.replace("\"limit\": 1", "\"limit\": 1, \"extra\": 3"),
    ] {
        println!("rejected: {}", parse_instance(&bad).unwrap_err());
    }
}
