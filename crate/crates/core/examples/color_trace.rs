//! Backjumping graph colouring on a six-vertex graph, printing each
//! decision, throw and catch as it happens.
//!
//! cargo run --example color_trace

use bjkit::coloring::{ColoringInstance, ColoringSearch};
use bjkit::trace::{Event, TraceEvent};

fn main() {
    let inst = ColoringInstance::new(
        6,
        ["red", "green"],
        vec![(1, 3), (2, 5), (2, 6), (3, 6), (3, 4)],
    )
    .expect("valid graph");

    let mut events: Vec<TraceEvent> = Vec::new();
    let solution = ColoringSearch::new(&inst).with_trace(&mut events).next();

    for e in &events {
        match &e.event {
            Event::Decide { var, value, level } => println!("{:>3}  decide v{var} = {value:?} at level {level}", e.seq),
            Event::Conflict { vars } => println!("{:>3}  conflict on {vars:?}", e.seq),
            Event::Throw { target, jump, payload, .. } => {
                println!("{:>3}  throw to {target} (jump {jump}) carrying {payload:?}", e.seq)
            }
            Event::Catch { level } => println!("{:>3}  caught at {level}", e.seq),
            other => println!("{:>3}  {other:?}", e.seq),
        }
    }

    match solution {
        Some(s) => {
            let cols: Vec<String> = (1..=6).map(|v| format!("{v}={}", s.color_of(v))).collect();
            println!("solution: {}", cols.join(" "));
            println!("decisions {}  throws {}  jumps {}", s.stats.decisions, s.stats.throws, s.stats.jumps);
        }
        None => println!("no colouring"),
    }
}
