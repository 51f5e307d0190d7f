//! Conflict analysis on a small formula: the implication graph at the
//! first conflict, both learnt clauses, and the graph in DOT form.
//!
//! cargo run --example implication_graph > graph.dot

use bjkit::cnf::{CnfInstance, Lit};
use bjkit::sat::{analyse_conflict, export_dot, first_uip, Analysis, SatSearch, SolverOptions, Strategy};

fn show(clause: &[Lit]) -> String {
    clause.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() {
    let inst = CnfInstance::from_dimacs_clauses(
        8,
        [
            vec![-1, 8, -2],
            vec![-1, -3],
            vec![2, 3, 4],
            vec![-4, -5],
            vec![5, 6],
            vec![7, -4, -6],
        ],
    );
    let options = SolverOptions {
        strategy: Strategy::LastUip,
        decision_script: vec![(7, false), (8, false), (1, true)],
        ..SolverOptions::default()
    };
    let mut search = SatSearch::new(&inst, options).expect("valid").record();
    search.next_model();

    let graph = search.conflict_graph().expect("the script forces a conflict");
    for n in graph.ordered_nodes() {
        eprintln!("({}) x{} = {}  <- {:?}", n.level, n.var, n.value, n.reasons);
    }
    eprintln!("conflict on {:?}", graph.conflict());

    if let Analysis::Backjump { target, clause, .. } = analyse_conflict(graph, graph.conflict()) {
        eprintln!("last uip:  jump to {target}, learn [{}]", show(&clause));
    }
    if let Analysis::Backjump { target, clause, .. } = first_uip(graph, graph.conflict()) {
        eprintln!("first uip: jump to {target}, learn [{}]", show(&clause));
    }
    print!("{}", export_dot(graph));
}
