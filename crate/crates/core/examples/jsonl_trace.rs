//! Streams the search trace as JSON lines and summarises it by event kind.
//!
//! cargo run --example jsonl_trace -- [strategy]

use std::collections::BTreeMap;

use bjkit::cnf::gen_random_3sat;
use bjkit::sat::{SatSearch, SolverOptions, Strategy};
use bjkit::trace::{JsonlTrace, TraceEvent};

fn main() -> anyhow::Result<()> {
    let strategy: Strategy = std::env::args().nth(1).as_deref().unwrap_or("first-uip").parse().map_err(anyhow::Error::msg)?;
    let inst = gen_random_3sat(30, 128, 3);

    let mut sink = JsonlTrace::new(Vec::new());
    let found = SatSearch::new(&inst, SolverOptions::with_strategy(strategy))?
        .with_trace(&mut sink)
        .next_model()
        .is_some();
    let bytes = sink.finish()?;
    let text = String::from_utf8(bytes)?;

    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for line in text.lines() {
        let e: TraceEvent = serde_json::from_str(line)?;
        let v = serde_json::to_value(&e.event)?;
        *kinds.entry(v["kind"].as_str().unwrap_or("?").to_string()).or_default() += 1;
    }
    for line in text.lines().take(5) {
        println!("{line}");
    }
    println!("...");
    println!("satisfiable: {found}");
    for (k, n) in kinds {
        println!("{k:>10} {n}");
    }
    Ok(())
}
