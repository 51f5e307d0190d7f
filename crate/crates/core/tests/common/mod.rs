#![allow(dead_code)]

use bjkit::cnf::{gen_random_3sat, CnfInstance};
use bjkit::coloring::ColoringInstance;

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn eight_var() -> CnfInstance {
    bjkit::cnf::parse_dimacs(&fixture("eight_var.cnf")).unwrap()
}

pub fn six_vertex() -> ColoringInstance {
    ColoringInstance::from_json(&fixture("six_vertex.json")).unwrap()
}

/// Seeded random 3-SAT over 4..=12 variables at ratios 2.0..=6.0.
pub fn small_3sat(seed: u64) -> CnfInstance {
    let n = 4 + (seed % 9) as u32;
    let ratio = 2.0 + (seed / 9 % 9) as f64 * 0.5;
    let m = (ratio * n as f64).round() as usize;
    gen_random_3sat(n, m, seed)
}

/// Every proper colouring in lexicographic order of colour indices
/// (vertex 1 most significant).
pub fn brute_force_colorings(inst: &ColoringInstance) -> Vec<Vec<usize>> {
    let n = inst.vertex_count();
    let k = inst.colors().len();
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        if inst
            .edges()
            .iter()
            .all(|&(x, y)| assign[x - 1] != assign[y - 1])
        {
            out.push(assign.clone());
        }
        // odometer, last vertex fastest
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
        }
    }
}
