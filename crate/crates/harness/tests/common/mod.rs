// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::Path;

use serde_json::Value;
use vqoc_harness::ExperimentConfig;

pub fn parse(value: Value, base: &Path) -> vqoc_harness::Result<ExperimentConfig> {
    ExperimentConfig::from_json_str(&value.to_string(), base)
}

pub fn z_vqoc(iterations: usize) -> Value {
    serde_json::json!({
        "mode": "vqoc",
        "hamiltonian": { "kind": "terms", "qubits": 1, "terms": [[1.0, "Z"]] },
        "initial_state": "0",
        "vqoc": {
            "lambda": 0.0,
            "total_time": 3.0,
            "steps": 60,
            "iterations": iterations,
            "initial_pulse": { "kind": "random", "scale": 0.1 }
        }
    })
}

pub const BOND: &str = "qubits: 2
# units: hartree
-1.0523732 II
0.3979374 IZ
-0.3979374 ZI
-0.0112801 ZZ
0.1809312 XX
";

pub fn compare(depth: usize) -> Value {
    serde_json::json!({
        "mode": "compare",
        "hamiltonian": { "kind": "file", "path": "bond.ham" },
        "initial_state": "01",
        "ansatz": { "depth": depth },
        "vqoc": {
            "lambda": 0.0,
            "iterations": 5,
            "initial_pulse": { "kind": "random", "scale": 0.1 }
        },
        "spsa": { "iterations": 10 },
        "seed": 4
    })
}

pub fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}
