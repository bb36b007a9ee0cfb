//! Directed and undirected multigraphs on labeled vertices with numbered edges.
//!
//! Vertices are 1-based; edges are numbered by their position in the edge
//! list, starting at 1. Loops and parallel edges are allowed. Every graph in
//! the space of graphs with `n` vertices and `k` edges has a 0-based rank, and
//! enumeration visits the space in rank order, which is lexicographic on the
//! flattened edge sequence.
//!
//! Text form: `n=3;1>2,2>3` for directed graphs and `n=3;1-2,2-3` for
//! undirected ones; an edgeless graph prints as `n=3;`.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::guard::Guards;

pub type VertexSet = BTreeSet<usize>;

/// Behaviour shared by both graph flavours.
pub trait Graph:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + FromStr<Err = Error>
    + Send
    + Sync
    + Sized
    + 'static
{
    const ORIENTED: bool;

    fn n(&self) -> usize;

    /// Edges as `(a, b)` pairs; undirected pairs are stored with `a <= b`.
    fn edges(&self) -> &[(usize, usize)];

    fn k(&self) -> usize {
        self.edges().len()
    }

    /// Builds a graph, validating endpoints and canonicalizing if needed.
    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self>;

    /// Number of graphs with `n` vertices and `k` edges, `None` on overflow.
    fn space_size(n: usize, k: usize) -> Option<u64>;

    fn rank(&self) -> u64;

    fn unrank(n: usize, k: usize, rank: u64) -> Result<Self>;

    fn is_loop(&self, i: usize) -> bool {
        let (a, b) = self.edges()[i];
        a == b
    }

    fn loop_count(&self) -> usize {
        self.edges().iter().filter(|(a, b)| a == b).count()
    }

    fn is_loopless(&self) -> bool {
        self.loop_count() == 0
    }

    /// The graph with every loop deleted, and the number of loops removed.
    /// Remaining edges keep their relative order; `n` is unchanged.
    fn strip_loops(&self) -> (Self, usize) {
        let kept: Vec<_> = self.edges().iter().copied().filter(|(a, b)| a != b).collect();
        let removed = self.k() - kept.len();
        (Self::from_edges(self.n(), kept).expect("subset of a valid graph"), removed)
    }

    /// The subgraph keeping the edges whose bit is set in `mask` (bit `i` is
    /// edge `i + 1`). Kept edges are renumbered consecutively in their
    /// original order; all `n` vertices stay.
    fn subgraph(&self, mask: u64) -> Self {
        let kept = self
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Self::from_edges(self.n(), kept).expect("subset of a valid graph")
    }

    /// All `2^k` subgraphs, keyed by edge mask, in increasing mask order.
    fn subgraphs(&self) -> Subgraphs<'_, Self> {
        assert!(self.k() < 64, "subgraph masks are limited to 63 edges");
        Subgraphs {
            graph: self,
            next: 0,
            end: 1u64 << self.k(),
        }
    }

    /// Weakly connected components over all `n` vertices (isolated vertices
    /// count as components).
    fn betti0(&self) -> usize {
        let mut dsu = DisjointSets::new(self.n());
        for &(a, b) in self.edges() {
            dsu.union(a - 1, b - 1);
        }
        dsu.components()
    }

    /// Vertices not incident to any edge.
    fn isolated_vertices(&self) -> VertexSet {
        let mut touched = vec![false; self.n() + 1];
        for &(a, b) in self.edges() {
            touched[a] = true;
            touched[b] = true;
        }
        (1..=self.n()).filter(|&v| !touched[v]).collect()
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

pub struct Subgraphs<'a, G> {
    graph: &'a G,
    next: u64,
    end: u64,
}

impl<G: Graph> Iterator for Subgraphs<'_, G> {
    type Item = (u64, G);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next == self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        Some((mask, self.graph.subgraph(mask)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

fn check_endpoints(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidGraph(format!(
                "edge {} = ({a}, {b}) has an endpoint outside 1..={n}",
                i + 1
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        check_endpoints(n, &edges)?;
        Ok(DirectedGraph { n, edges })
    }

    pub fn edgeless(n: usize) -> Self {
        assert!(n >= 1);
        DirectedGraph { n, edges: vec![] }
    }

    /// Drops edge orientations, keeping the numbering.
    pub fn forget(&self) -> UndirectedGraph {
        UndirectedGraph {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect(),
        }
    }

    pub fn reverse(&self) -> Self {
        DirectedGraph {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Replaces edge number `i` (1-based) by `[tail, head]`.
    pub fn replace_edge(&self, i: usize, tail: usize, head: usize) -> Result<Self> {
        if i == 0 || i > self.k() {
            return Err(Error::OutOfRange {
                index: i as u64,
                len: self.k() as u64,
            });
        }
        let mut edges = self.edges.clone();
        edges[i - 1] = (tail, head);
        DirectedGraph::new(self.n, edges)
    }

    /// Vertices with no outgoing edge. A loop counts as outgoing.
    pub fn sinks(&self) -> VertexSet {
        let mut has_out = vec![false; self.n + 1];
        for &(a, _) in &self.edges {
            has_out[a] = true;
        }
        (1..=self.n).filter(|&v| !has_out[v]).collect()
    }

    /// Strongly connected component id of each vertex (index `v - 1`).
    pub fn scc_ids(&self) -> Vec<usize> {
        strongly_connected(self.n, &self.edges)
    }

    /// No directed cycle; in particular no loop.
    pub fn is_acyclic(&self) -> bool {
        let comp = self.scc_ids();
        self.edges.iter().all(|&(a, b)| a != b && comp[a - 1] != comp[b - 1])
    }

    /// Every edge lies on a directed cycle. Vacuously true without edges.
    pub fn is_totally_cyclic(&self) -> bool {
        let comp = self.scc_ids();
        self.edges.iter().all(|&(a, b)| a == b || comp[a - 1] == comp[b - 1])
    }

    /// Rebuilds a graph from a loopless `self` and an edge mask: selected
    /// edges stay, every other edge `[a, b]` becomes the loop `[a, a]` in
    /// place. Stripping the loops of the result gives `self.subgraph(mask)`.
    pub fn loop_completion(&self, mask: u64) -> Result<Self> {
        if let Some(i) = self.edges.iter().position(|(a, b)| a == b) {
            return Err(Error::UnexpectedLoop { edge: i + 1 });
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (a, b) } else { (a, a) })
            .collect();
        Ok(DirectedGraph { n: self.n, edges })
    }
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        check_endpoints(n, &edges)?;
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        Ok(UndirectedGraph { n, edges })
    }

    pub fn edgeless(n: usize) -> Self {
        assert!(n >= 1);
        UndirectedGraph { n, edges: vec![] }
    }

    /// An orientation of `self`: edge `i` points from the smaller endpoint to
    /// the larger one unless bit `i` of `flips` is set.
    pub fn lift(&self, flips: u64) -> DirectedGraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if flips >> i & 1 == 1 { (b, a) } else { (a, b) })
            .collect();
        DirectedGraph { n: self.n, edges }
    }

    /// All `2^(k - |mask|)` ways to turn the unselected edges of a loopless
    /// graph into loops at one of their endpoints, in place.
    pub fn loop_completions(&self, mask: u64) -> Result<Vec<UndirectedGraph>> {
        if let Some(i) = self.edges.iter().position(|(a, b)| a == b) {
            return Err(Error::UnexpectedLoop { edge: i + 1 });
        }
        let free: Vec<usize> = (0..self.k()).filter(|i| mask >> i & 1 == 0).collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for choice in 0u64..(1 << free.len()) {
            let mut edges = self.edges.clone();
            for (bit, &i) in free.iter().enumerate() {
                let (a, b) = edges[i];
                let v = if choice >> bit & 1 == 0 { a } else { b };
                edges[i] = (v, v);
            }
            out.push(UndirectedGraph { n: self.n, edges });
        }
        Ok(out)
    }
}

impl Graph for DirectedGraph {
    const ORIENTED: bool = true;

    fn n(&self) -> usize {
        self.n
    }

    fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        DirectedGraph::new(n, edges)
    }

    fn space_size(n: usize, k: usize) -> Option<u64> {
        (n as u64).checked_pow(u32::try_from(2 * k).ok()?)
    }

    fn rank(&self) -> u64 {
        let base = self.n as u64;
        self.edges.iter().fold(0u64, |r, &(a, b)| {
            let r = r * base + (a as u64 - 1);
            r * base + (b as u64 - 1)
        })
    }

    fn unrank(n: usize, k: usize, rank: u64) -> Result<Self> {
        let size = Self::space_size(n, k).unwrap_or(u64::MAX);
        if n == 0 || rank >= size {
            return Err(Error::OutOfRange { index: rank, len: size });
        }
        let base = n as u64;
        let mut digits = vec![0usize; 2 * k];
        let mut r = rank;
        for d in digits.iter_mut().rev() {
            *d = (r % base) as usize + 1;
            r /= base;
        }
        let edges = digits.chunks(2).map(|c| (c[0], c[1])).collect();
        Ok(DirectedGraph { n, edges })
    }
}

/// Index of the unordered pair `{a, b}` (with `a <= b`) in lexicographic order.
fn pair_index(n: usize, a: usize, b: usize) -> u64 {
    let before: usize = (1..a).map(|t| n - t + 1).sum();
    (before + (b - a)) as u64
}

fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    for a in 1..=n {
        let row = n - a + 1;
        if idx < row {
            return (a, a + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

impl Graph for UndirectedGraph {
    const ORIENTED: bool = false;

    fn n(&self) -> usize {
        self.n
    }

    fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        UndirectedGraph::new(n, edges)
    }

    fn space_size(n: usize, k: usize) -> Option<u64> {
        let pairs = (n as u64).checked_mul(n as u64 + 1)? / 2;
        pairs.checked_pow(u32::try_from(k).ok()?)
    }

    fn rank(&self) -> u64 {
        let base = (self.n * (self.n + 1) / 2) as u64;
        self.edges
            .iter()
            .fold(0u64, |r, &(a, b)| r * base + pair_index(self.n, a, b))
    }

    fn unrank(n: usize, k: usize, rank: u64) -> Result<Self> {
        let size = Self::space_size(n, k).unwrap_or(u64::MAX);
        if n == 0 || rank >= size {
            return Err(Error::OutOfRange { index: rank, len: size });
        }
        let base = (n * (n + 1) / 2) as u64;
        let mut edges = vec![(0, 0); k];
        let mut r = rank;
        for e in edges.iter_mut().rev() {
            *e = pair_from_index(n, (r % base) as usize);
            r /= base;
        }
        Ok(UndirectedGraph { n, edges })
    }
}

/// Iterates a whole graph space in rank order.
pub struct GraphSpace<G> {
    n: usize,
    k: usize,
    next: u64,
    end: u64,
    _marker: std::marker::PhantomData<G>,
}

impl<G: Graph> GraphSpace<G> {
    pub fn new(n: usize, k: usize, guards: &Guards) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let what = format!(
            "enumerating {} graphs with n={n}, k={k}",
            if G::ORIENTED { "directed" } else { "undirected" }
        );
        let end = guards.check_graphs(&what, G::space_size(n, k))?;
        Ok(GraphSpace {
            n,
            k,
            next: 0,
            end,
            _marker: std::marker::PhantomData,
        })
    }

    pub fn len(&self) -> u64 {
        self.end
    }

    pub fn is_empty(&self) -> bool {
        self.end == 0
    }
}

impl<G: Graph> Iterator for GraphSpace<G> {
    type Item = G;

    fn next(&mut self) -> Option<G> {
        if self.next == self.end {
            return None;
        }
        let g = G::unrank(self.n, self.k, self.next).expect("rank within space");
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

pub fn enumerate_directed(n: usize, k: usize, guards: &Guards) -> Result<GraphSpace<DirectedGraph>> {
    GraphSpace::new(n, k, guards)
}

pub fn enumerate_undirected(
    n: usize,
    k: usize,
    guards: &Guards,
) -> Result<GraphSpace<UndirectedGraph>> {
    GraphSpace::new(n, k, guards)
}

struct DisjointSets {
    parent: Vec<usize>,
    sets: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.sets -= 1;
        }
    }

    fn components(&self) -> usize {
        self.sets
    }
}

/// Kosaraju's algorithm with explicit stacks. Returns a component id per
/// vertex (0-based vertex index).
fn strongly_connected(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut out = vec![Vec::new(); n];
    let mut inc = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a - 1].push(b - 1);
        inc[b - 1].push(a - 1);
    }

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some((v, next)) = stack.last_mut() {
            if let Some(&w) = out[*v].get(*next) {
                *next += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(*v);
                stack.pop();
            }
        }
    }

    let mut comp = vec![usize::MAX; n];
    let mut id = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = id;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &inc[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        id += 1;
    }
    comp
}

fn write_graph(f: &mut fmt::Formatter<'_>, n: usize, edges: &[(usize, usize)], sep: char) -> fmt::Result {
    write!(f, "n={n};")?;
    for (i, (a, b)) in edges.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}{sep}{b}")?;
    }
    Ok(())
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_graph(f, self.n, &self.edges, '>')
    }
}

impl fmt::Display for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_graph(f, self.n, &self.edges, '-')
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn eat(&mut self, c: u8) -> bool {
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "number too large"))
    }

    fn at_end(&self) -> bool {
        self.pos == self.s.len()
    }
}

fn parse_graph_text(text: &str, sep: u8) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    c.expect(b'n')?;
    c.expect(b'=')?;
    let n_pos = c.pos;
    let n = c.number()?;
    if n == 0 {
        return Err(Error::parse(n_pos, "vertex count must be positive"));
    }
    let mut edges = Vec::new();
    if c.eat(b';') && !c.at_end() {
        loop {
            let a_pos = c.pos;
            let a = c.number()?;
            if !c.eat(sep) {
                return Err(Error::parse(c.pos, format!("expected `{}`", sep as char)));
            }
            let b_pos = c.pos;
            let b = c.number()?;
            for (v, p) in [(a, a_pos), (b, b_pos)] {
                if v == 0 || v > n {
                    return Err(Error::parse(p, format!("vertex {v} outside 1..={n}")));
                }
            }
            edges.push((a, b));
            if !c.eat(b',') {
                break;
            }
        }
    }
    if !c.at_end() {
        return Err(Error::parse(c.pos, "unexpected trailing input"));
    }
    Ok((n, edges))
}

impl FromStr for DirectedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, edges) = parse_graph_text(s.trim(), b'>')?;
        DirectedGraph::new(n, edges)
    }
}

impl FromStr for UndirectedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, edges) = parse_graph_text(s.trim(), b'-')?;
        UndirectedGraph::new(n, edges)
    }
}
