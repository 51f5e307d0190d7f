//! All models of a DIMACS file, with a count per strategy.
//!
//! cargo run --example enumerate_models -- formula.cnf

use bjkit::cnf::parse_dimacs;
use bjkit::sat::{enumerate_models, SolverOptions, Strategy};

fn main() -> anyhow::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => "p cnf 4 3\n1 2 0\n-2 3 0\n-3 -4 0\n".to_string(),
    };
    let inst = parse_dimacs(&text)?;

    for m in enumerate_models(&inst, SolverOptions::default())? {
        let lits: Vec<String> = m.to_dimacs().iter().map(i64::to_string).collect();
        println!("v {} 0", lits.join(" "));
    }
    for s in Strategy::ALL {
        let mut search = enumerate_models(&inst, SolverOptions::with_strategy(s))?;
        let mut n = 0;
        while search.next_model().is_some() {
            n += 1;
        }
        let st = search.stats();
        println!("{:>10}: {n} models, {} decisions, {} throws", s.name(), st.decisions, st.throws);
    }
    Ok(())
}
