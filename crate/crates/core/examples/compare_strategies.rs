//! Decisions, throws and jumps for each strategy on random 3-SAT.
//!
//! cargo run --release --example compare_strategies -- [vars] [clauses] [instances]

use std::time::Instant;

use bjkit::cnf::gen_random_3sat;
use bjkit::sat::{solve, SolverOptions, Strategy};

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let n = *args.first().unwrap_or(&75) as u32;
    let m = *args.get(1).unwrap_or(&323);
    let count = *args.get(2).unwrap_or(&10) as u64;

    println!("{:>5} {:>10} {:>6} {:>10} {:>10} {:>8} {:>8} {:>8}", "seed", "strategy", "sat", "decisions", "assign", "throws", "jumps", "ms");
    for seed in 0..count {
        let f = gen_random_3sat(n, m, seed);
        for s in Strategy::ALL {
            let t = Instant::now();
            let out = solve(&f, SolverOptions::with_strategy(s)).expect("generated instances are valid");
            let st = out.stats;
            println!(
                "{:>5} {:>10} {:>6} {:>10} {:>10} {:>8} {:>8} {:>8}",
                seed,
                s,
                out.status.is_sat(),
                st.decisions,
                st.assignments(),
                st.throws,
                st.jumps,
                t.elapsed().as_millis()
            );
        }
    }
}
