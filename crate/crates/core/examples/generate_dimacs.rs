//! Seeded uniform random 3-SAT, written as DIMACS to stdout.
//!
//! cargo run --example generate_dimacs -- 100 430 42 > uf100.cnf

use bjkit::cnf::{emit_dimacs, gen_random_3sat};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("number")).collect();
    let n = *args.first().unwrap_or(&20) as u32;
    let m = *args.get(1).unwrap_or(&86) as usize;
    let seed = *args.get(2).unwrap_or(&0);
    print!("{}", emit_dimacs(&gen_random_3sat(n, m, seed)));
}
