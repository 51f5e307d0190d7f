mod common;

use std::collections::HashSet;

use bjkit::coloring::{enumerate, solve, ColoringInstance, ColoringSearch, ConflictSet};
use bjkit::trace::{Event, ThrowOrigin, TraceEvent};
use proptest::prelude::*;

fn all_edges(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            out.push((a, b));
        }
    }
    out
}

fn subgraph(n: usize, k: usize, mask: u32) -> ColoringInstance {
    let edges = all_edges(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, e)| e);
    let colors = ["red", "green", "blue"];
    ColoringInstance::new(n, colors[..k].iter().copied(), edges).unwrap()
}

fn indices(inst: &ColoringInstance, labels: &[String]) -> Vec<usize> {
    labels
        .iter()
        .map(|l| inst.colors().iter().position(|c| c == l).unwrap())
        .collect()
}

#[test]
fn six_vertex_first_solution() {
    let out = solve(&common::six_vertex());
    let sol = out.solution.unwrap();
    assert_eq!(sol.assignment, ["red", "green", "green", "red", "red", "red"]);
    assert_eq!(out.stats.throws, 7);
}

#[test]
fn solve_matches_brute_force_on_four_vertices() {
    for k in 1..=3 {
        for mask in 0..1u32 << 6 {
            let inst = subgraph(4, k, mask);
            let oracle = common::brute_force_colorings(&inst);
            let sol = solve(&inst).solution;
            assert_eq!(sol.is_some(), !oracle.is_empty(), "k={k} mask={mask:b}");
            if let Some(s) = sol {
                assert!(inst.is_proper(&s.assignment));
            }
        }
    }
}

#[test]
fn enumeration_yields_every_colouring_once() {
    for k in 2..=3 {
        for mask in (0..1u32 << 10).step_by(7) {
            let inst = subgraph(5, k, mask);
            let got: Vec<Vec<usize>> = enumerate(&inst).map(|s| indices(&inst, &s.assignment)).collect();
            let distinct: HashSet<_> = got.iter().cloned().collect();
            assert_eq!(distinct.len(), got.len(), "k={k} mask={mask:b}: repeated colouring");
            let oracle: HashSet<_> = common::brute_force_colorings(&inst).into_iter().collect();
            assert_eq!(distinct, oracle, "k={k} mask={mask:b}");
        }
    }
}

#[test]
fn single_edge_enumerates_in_colour_order() {
    let inst = ColoringInstance::new(2, ["red", "green"], [(1, 2)]).unwrap();
    let sols: Vec<Vec<String>> = enumerate(&inst).map(|s| s.assignment).collect();
    assert_eq!(sols, vec![vec!["red".to_string(), "green".into()], vec!["green".into(), "red".into()]]);
}

/// Whether the partial colouring restricted to `keep` extends to a proper
/// colouring of the whole graph.
fn extends(inst: &ColoringInstance, assignment: &[Option<usize>], keep: &ConflictSet) -> bool {
    common::brute_force_colorings(inst).iter().any(|full| {
        keep.iter()
            .all(|id| assignment[id - 1].is_none_or(|c| full[id - 1] == c))
    })
}

#[test]
fn conflict_sets_are_sound() {
    // Up to the first solution, the colours a ball's ids carry when it is
    // raised cannot be completed. (After a solution is reported the
    // enumeration ball deliberately blames everything.)
    for mask in (0..1u32 << 10).step_by(3) {
        let inst = subgraph(5, 2, mask);
        let mut search = ColoringSearch::new(&inst).record_balls();
        search.next_solution();
        for raised in search.raised_balls() {
            if raised.origin != ThrowOrigin::Analysis {
                continue;
            }
            let ids = &raised.ball.payload;
            assert_eq!(Some(raised.ball.target), ids.max());
            assert!(!extends(&inst, &raised.assignment, ids), "mask={mask:b} ball {ids}");
        }
    }
}

#[test]
fn analysis_balls_target_their_maximum() {
    let inst = common::six_vertex();
    let mut search = ColoringSearch::new(&inst).record_balls();
    search.next_solution();
    let analysis: Vec<_> = search
        .raised_balls()
        .iter()
        .filter(|r| r.origin == ThrowOrigin::Analysis)
        .map(|r| (r.ball.target, r.ball.payload.to_vec()))
        .collect();
    assert_eq!(analysis, vec![(3, vec![2, 3]), (2, vec![1, 2])]);
}

#[test]
fn identical_runs_trace_identically() {
    let inst = common::six_vertex();
    let run = || {
        let mut sink: Vec<TraceEvent> = Vec::new();
        ColoringSearch::new(&inst).with_trace(&mut sink).next_solution();
        sink
    };
    let a = run();
    assert_eq!(a, run());
    let throws = a.iter().filter(|e| matches!(e.event, Event::Throw { .. })).count();
    let catches = a.iter().filter(|e| matches!(e.event, Event::Catch { .. })).count();
    assert_eq!(throws, catches);
}

proptest! {
    #[test]
    fn solutions_are_proper(n in 1usize..7, k in 1usize..4, mask in any::<u32>()) {
        let edges: Vec<_> = all_edges(n).into_iter().enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0).map(|(_, e)| e).collect();
        let colors = ["a", "b", "c"];
        let inst = ColoringInstance::new(n, colors[..k].iter().copied(), edges).unwrap();
        for s in enumerate(&inst).take(50) {
            prop_assert!(inst.is_proper(&s.assignment));
        }
    }
}
