//! Fixtures shared by the benchmarks.

use dglap::{DirectedGraph, UndirectedGraph};

/// The directed cycle `1 -> 2 -> ... -> n -> 1`.
pub fn directed_cycle(n: usize) -> DirectedGraph {
    let edges = (1..=n).map(|a| (a, a % n + 1)).collect();
    DirectedGraph::new(n, edges).expect("valid cycle")
}

/// The complete graph on `n` vertices, edges in lexicographic order.
pub fn complete(n: usize) -> UndirectedGraph {
    let edges = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect();
    UndirectedGraph::new(n, edges).expect("valid complete graph")
}
