//! Every proper colouring of a cycle, each reported exactly once.
//!
//! cargo run --example color_enumerate -- [vertices] [colours]

use bjkit::coloring::{enumerate, ColoringInstance};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("number")).collect();
    let n = *args.first().unwrap_or(&5);
    let k = *args.get(1).unwrap_or(&3);
    let colors: Vec<String> = (0..k).map(|c| format!("c{c}")).collect();
    let edges: Vec<_> = (1..=n).map(|v| (v, v % n + 1)).collect();
    let inst = ColoringInstance::new(n, colors, edges).expect("valid cycle");

    let mut count = 0;
    for s in enumerate(&inst) {
        count += 1;
        println!("{}", s.assignment.join(" "));
    }
    // chromatic polynomial of the n-cycle
    let expected = (k as i64 - 1).pow(n as u32) + if n.is_multiple_of(2) { 1 } else { -1 } * (k as i64 - 1);
    println!("{count} colourings (expected {expected})");
}
