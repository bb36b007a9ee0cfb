//! Formal linear combinations of graphs and the operators acting on them.
//!
//! A [`GraphVector`] is a finite sum of graphs with the same `n`, `k` and
//! orientedness, each carrying a nonzero polynomial coefficient. Terms are
//! keyed by graph rank so iteration and serialization follow enumeration
//! order.
//!
//! `B_i` fixes a graph whose edge `i` is not a loop and sends a graph whose
//! edge `i` is the loop `[a, a]` to `-sum_{m != a} R_{a,m;i} G`, where
//! `R_{a,m;i}` puts `[a, m]` at position `i`. The Laplace operator is the
//! product `B_1 ... B_k`. On undirected graphs it acts through any
//! orientation followed by forgetting orientations.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Graph, GraphSpace, UndirectedGraph, VertexSet};
use crate::guard::{interpolation_steps, Guards};
use crate::invariants::{at_y0_z1, bernardi, potts, potts_sokal};
use crate::poly::{factorial, sign_pow, MultiPoly, Rational, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphVector<G> {
    n: usize,
    k: usize,
    terms: BTreeMap<u64, MultiPoly>,
    _graph: PhantomData<G>,
}

impl<G: Graph> GraphVector<G> {
    pub fn new(n: usize, k: usize) -> Self {
        GraphVector {
            n,
            k,
            terms: BTreeMap::new(),
            _graph: PhantomData,
        }
    }

    /// Builds a vector from `(rank, coefficient)` pairs; repeated ranks add up.
    pub fn from_ranked(n: usize, k: usize, pairs: impl IntoIterator<Item = (u64, MultiPoly)>) -> Self {
        let mut v = GraphVector::new(n, k);
        for (rank, c) in pairs {
            v.add_ranked(rank, c);
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn oriented(&self) -> bool {
        G::ORIENTED
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_ranked(&mut self, rank: u64, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(rank) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_shape(&self, n: usize, k: usize) -> Result<()> {
        if (self.n, self.k) == (n, k) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "(n={}, k={}) vs (n={n}, k={k})",
                self.n, self.k
            )))
        }
    }

    /// Adds `c * g`.
    pub fn add_term(&mut self, g: &G, c: MultiPoly) -> Result<()> {
        self.check_shape(g.n(), g.k())?;
        self.add_ranked(g.rank(), c);
        Ok(())
    }

    pub fn coefficient(&self, g: &G) -> Option<&MultiPoly> {
        if (g.n(), g.k()) != (self.n, self.k) {
            return None;
        }
        self.terms.get(&g.rank())
    }

    /// Terms in rank order.
    pub fn terms(&self) -> impl Iterator<Item = (G, &MultiPoly)> + '_ {
        self.terms
            .iter()
            .map(|(&r, c)| (G::unrank(self.n, self.k, r).expect("stored rank"), c))
    }

    pub fn ranked_terms(&self) -> impl Iterator<Item = (u64, &MultiPoly)> + '_ {
        self.terms.iter().map(|(&r, c)| (r, c))
    }

    pub fn support(&self) -> Vec<G> {
        self.terms().map(|(g, _)| g).collect()
    }

    pub fn try_add(&self, other: &GraphVector<G>) -> Result<GraphVector<G>> {
        self.check_shape(other.n, other.k)?;
        let mut out = self.clone();
        for (&r, c) in &other.terms {
            out.add_ranked(r, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GraphVector<G>) -> Result<GraphVector<G>> {
        self.try_add(&other.scale_rational(&crate::poly::rat(-1)))
    }

    pub fn scale_rational(&self, c: &Rational) -> GraphVector<G> {
        self.map_coefficients(|p| Ok(p.scale(c))).expect("scaling cannot fail")
    }

    pub fn scale(&self, c: &MultiPoly) -> Result<GraphVector<G>> {
        self.map_coefficients(|p| p.try_mul(c))
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coefficients(
        &self,
        f: impl Fn(&MultiPoly) -> Result<MultiPoly>,
    ) -> Result<GraphVector<G>> {
        let mut out = GraphVector::new(self.n, self.k);
        for (&r, c) in &self.terms {
            out.add_ranked(r, f(c)?);
        }
        Ok(out)
    }

    /// The lowest-ranked graph whose coefficients differ, with both sides
    /// (`None` standing for zero).
    pub fn first_difference(
        &self,
        other: &GraphVector<G>,
    ) -> Option<(G, Option<MultiPoly>, Option<MultiPoly>)> {
        if (self.n, self.k) != (other.n, other.k) {
            panic!("comparing graph vectors of different shapes");
        }
        let mut ranks: Vec<u64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        ranks.sort_unstable();
        ranks.dedup();
        ranks.into_iter().find_map(|r| {
            let (a, b) = (self.terms.get(&r), other.terms.get(&r));
            (a != b).then(|| {
                (
                    G::unrank(self.n, self.k, r).expect("stored rank"),
                    a.cloned(),
                    b.cloned(),
                )
            })
        })
    }

    /// Text form: a header line, then one `(coefficient) graph` line per term.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse_text(text: &str, vars: VarSet) -> Result<GraphVector<G>> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse(0, "empty vector text"))?;
        let (n, k, oriented) = parse_header(header)?;
        if oriented != G::ORIENTED {
            return Err(Error::parse(0, "orientation in header does not match"));
        }
        let mut v = GraphVector::new(n, k);
        for line in lines {
            let line = line.trim();
            let body = line
                .strip_prefix('(')
                .and_then(|rest| rest.split_once(") "))
                .ok_or_else(|| Error::parse(0, format!("malformed term line `{line}`")))?;
            let c = MultiPoly::parse(body.0, vars)?;
            let g: G = body.1.parse()?;
            v.add_term(&g, c)?;
        }
        Ok(v)
    }
}

fn parse_header(line: &str) -> Result<(usize, usize, bool)> {
    let bad = || Error::parse(0, format!("malformed vector header `{line}`"));
    let parts: Vec<&str> = line.split_whitespace().collect();
    let [n, k, kind] = parts.as_slice() else {
        return Err(bad());
    };
    let n = n.strip_prefix("n=").and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let k = k.strip_prefix("k=").and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let oriented = match *kind {
        "directed" => true,
        "undirected" => false,
        _ => return Err(bad()),
    };
    Ok((n, k, oriented))
}

impl<G: Graph> fmt::Display for GraphVector<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if G::ORIENTED { "directed" } else { "undirected" };
        write!(f, "n={} k={} {kind}", self.n, self.k)?;
        for (g, c) in self.terms() {
            write!(f, "\n({c}) {g}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    graph: String,
    coefficient: MultiPoly,
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    n: usize,
    k: usize,
    oriented: bool,
    terms: Vec<TermJson>,
}

impl<G: Graph> Serialize for GraphVector<G> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorJson {
            n: self.n,
            k: self.k,
            oriented: G::ORIENTED,
            terms: self
                .terms()
                .map(|(g, c)| TermJson {
                    graph: g.to_string(),
                    coefficient: c.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, G: Graph> Deserialize<'de> for GraphVector<G> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = VectorJson::deserialize(deserializer)?;
        if raw.oriented != G::ORIENTED {
            return Err(D::Error::custom("orientation does not match"));
        }
        let mut v = GraphVector::new(raw.n, raw.k);
        for t in raw.terms {
            let g: G = t.graph.parse().map_err(D::Error::custom)?;
            v.add_term(&g, t.coefficient).map_err(D::Error::custom)?;
        }
        Ok(v)
    }
}

/// `[p, q]` in place of edge `i` (1-based).
pub fn replace_edge(g: &DirectedGraph, i: usize, p: usize, q: usize) -> Result<DirectedGraph> {
    g.replace_edge(i, p, q)
}

pub type DirectedVector = GraphVector<DirectedGraph>;
pub type UndirectedVector = GraphVector<UndirectedGraph>;

/// `B_i` extended linearly. Works on ranks directly: edge `i` of a graph in
/// `Γ(n, k)` occupies the base-`n` digits at weights `n^(2(k-i)+1)` (tail)
/// and `n^(2(k-i))` (head).
pub fn b_operator(i: usize, v: &DirectedVector) -> Result<DirectedVector> {
    let (n, k) = (v.n, v.k);
    if i == 0 || i > k {
        return Err(Error::OutOfRange {
            index: i as u64,
            len: k as u64,
        });
    }
    let base = n as u64;
    let head_weight = base.pow(2 * (k - i) as u32);
    let mut out = GraphVector::new(n, k);
    for (&rank, c) in &v.terms {
        let head = rank / head_weight % base;
        let tail = rank / (head_weight * base) % base;
        if head != tail {
            out.add_ranked(rank, c.clone());
            continue;
        }
        let neg = -c;
        for m in (0..base).filter(|&m| m != tail) {
            let moved = rank - head * head_weight + m * head_weight;
            out.add_ranked(moved, neg.clone());
        }
    }
    Ok(out)
}

/// `Δ = B_1 ... B_k`, applied edge position by edge position.
pub fn laplace(v: &DirectedVector) -> DirectedVector {
    (1..=v.k).fold(v.clone(), |acc, i| b_operator(i, &acc).expect("edge index in range"))
}

pub fn forget_vector(v: &DirectedVector) -> UndirectedVector {
    let mut out = GraphVector::new(v.n, v.k);
    for (g, c) in v.terms() {
        out.add_ranked(g.forget().rank(), c.clone());
    }
    out
}

/// Undirected Laplace operator through the lift `lift` (which must be an
/// orientation of its argument).
pub fn laplace_undirected_via(
    v: &UndirectedVector,
    lift: impl Fn(&UndirectedGraph) -> DirectedGraph,
) -> UndirectedVector {
    let mut directed = GraphVector::new(v.n, v.k);
    for (g, c) in v.terms() {
        let l = lift(&g);
        debug_assert_eq!(l.forget(), g);
        directed.add_ranked(l.rank(), c.clone());
    }
    forget_vector(&laplace(&directed))
}

/// Undirected Laplace operator with every edge lifted from its smaller
/// endpoint to its larger one.
pub fn laplace_undirected(v: &UndirectedVector) -> UndirectedVector {
    laplace_undirected_via(v, |g| g.lift(0))
}

fn batch_steps(count: u64, per_graph: Option<u64>) -> Option<u64> {
    count.checked_mul(per_graph?)
}

/// Computes `f(G)` for every graph in the space, in parallel, and collects
/// the nonzero results in rank order.
fn collect_space<G: Graph>(
    n: usize,
    k: usize,
    guards: &Guards,
    per_graph_steps: Option<u64>,
    what: &str,
    f: impl Fn(&G) -> Result<Option<MultiPoly>> + Sync,
) -> Result<GraphVector<G>> {
    let space = GraphSpace::<G>::new(n, k, guards)?;
    let count = space.len();
    guards.check_steps(what, batch_steps(count, per_graph_steps))?;
    let pairs: Vec<(u64, Option<MultiPoly>)> = (0..count)
        .into_par_iter()
        .map(|r| {
            let g = G::unrank(n, k, r)?;
            Ok((r, f(&g)?))
        })
        .collect::<Result<_>>()?;
    Ok(GraphVector::from_ranked(
        n,
        k,
        pairs.into_iter().filter_map(|(r, c)| c.map(|c| (r, c))),
    ))
}

/// `sum over G in Γ(n, k) of B_G G`.
pub fn universal_bernardi(n: usize, k: usize, guards: &Guards) -> Result<DirectedVector> {
    collect_space(n, k, guards, interpolation_steps(n), "universal Bernardi polynomial", |g| {
        bernardi(g, &Guards::unlimited()).map(Some)
    })
}

/// `sum over G in Γ(n, k) of [B_G]_k G`; only loopless graphs survive.
pub fn universal_truncated_bernardi(n: usize, k: usize, guards: &Guards) -> Result<DirectedVector> {
    collect_space(
        n,
        k,
        guards,
        interpolation_steps(n),
        "universal truncated Bernardi polynomial",
        |g| Ok(Some(bernardi(g, &Guards::unlimited())?.truncate_top(k))),
    )
}

/// The universal Bernardi polynomial (or its truncation, if `strict`) at
/// `y = 0`, `z = 1`.
pub fn universal_chi(n: usize, k: usize, strict: bool, guards: &Guards) -> Result<DirectedVector> {
    let b = if strict {
        universal_truncated_bernardi(n, k, guards)?
    } else {
        universal_bernardi(n, k, guards)?
    };
    b.map_coefficients(at_y0_z1)
}

/// Which formula computes the Potts polynomial of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PottsRoute {
    /// Through the full chromatic polynomial and the `(v + 1)` substitution.
    Chromatic,
    /// Through the subgraph expansion.
    Subgraph,
}

impl PottsRoute {
    fn steps(self, n: usize, k: usize) -> Option<u64> {
        match self {
            PottsRoute::Chromatic => interpolation_steps(n),
            PottsRoute::Subgraph => 1u64.checked_shl(u32::try_from(k).ok()?),
        }
    }

    pub fn potts(self, g: &UndirectedGraph) -> Result<MultiPoly> {
        let guards = Guards::unlimited();
        match self {
            PottsRoute::Chromatic => potts(g, &guards),
            PottsRoute::Subgraph => potts_sokal(g, &guards),
        }
    }
}

/// `sum over G in Υ(n, k) of Z_Ĝ G`, where `Ĝ` is `G` without loops.
pub fn universal_potts(n: usize, k: usize, route: PottsRoute, guards: &Guards) -> Result<UndirectedVector> {
    collect_space(n, k, guards, route.steps(n, k), "universal Potts polynomial", |g: &UndirectedGraph| {
        route.potts(&g.strip_loops().0).map(Some)
    })
}

/// `sum over loopless G in Υ(n, k) of Z_G G`.
pub fn universal_truncated_potts(
    n: usize,
    k: usize,
    route: PottsRoute,
    guards: &Guards,
) -> Result<UndirectedVector> {
    collect_space(
        n,
        k,
        guards,
        route.steps(n, k),
        "universal truncated Potts polynomial",
        |g: &UndirectedGraph| {
            if g.is_loopless() {
                route.potts(g).map(Some)
            } else {
                Ok(None)
            }
        },
    )
}

/// The Potts sums taken over directed graphs and pushed to undirected ones:
/// `forget(sum over G in Γ(n, k) of Z_forget(Ĝ) G)`, restricted to loopless
/// `G` if `truncated`.
pub fn universal_potts_pushforward(
    n: usize,
    k: usize,
    truncated: bool,
    route: PottsRoute,
    guards: &Guards,
) -> Result<UndirectedVector> {
    let per_undirected = if truncated {
        universal_truncated_potts(n, k, route, guards)?
    } else {
        universal_potts(n, k, route, guards)?
    };
    let directed = collect_space(
        n,
        k,
        guards,
        Some(1),
        "directed Potts sum",
        |g: &DirectedGraph| Ok(per_undirected.coefficient(&g.forget()).cloned()),
    )?;
    Ok(forget_vector(&directed))
}

fn constant(c: Rational) -> MultiPoly {
    MultiPoly::constant(VarSet::Q, c)
}

/// `((-1)^k / k!) sum over totally cyclic G of (-1)^b0(G) G`, optionally
/// restricted to graphs whose isolated vertices are exactly `isolated`.
fn totally_cyclic_sum(
    n: usize,
    k: usize,
    isolated: Option<&VertexSet>,
    guards: &Guards,
) -> Result<DirectedVector> {
    let scale = sign_pow(k) / factorial(k);
    collect_space(n, k, guards, Some(1), "totally cyclic sum", |g: &DirectedGraph| {
        let keep = g.is_totally_cyclic() && isolated.is_none_or(|i| &g.isolated_vertices() == i);
        Ok(keep.then(|| constant(&scale * sign_pow(g.betti0()))))
    })
}

pub fn det_element(n: usize, k: usize, guards: &Guards) -> Result<DirectedVector> {
    totally_cyclic_sum(n, k, None, guards)
}

/// Diagonal minor: the part of `det_element` on graphs whose isolated
/// vertices are exactly `isolated`.
pub fn det_minor(n: usize, k: usize, isolated: &VertexSet, guards: &Guards) -> Result<DirectedVector> {
    check_vertex_set(n, isolated)?;
    totally_cyclic_sum(n, k, Some(isolated), guards)
}

/// `sum of G` over acyclic graphs, optionally only those whose sinks are
/// exactly `sinks`.
pub fn acyclic_sum(
    n: usize,
    k: usize,
    sinks: Option<&VertexSet>,
    guards: &Guards,
) -> Result<DirectedVector> {
    if let Some(s) = sinks {
        check_vertex_set(n, s)?;
    }
    collect_space(n, k, guards, Some(1), "acyclic sum", |g: &DirectedGraph| {
        let keep = g.is_acyclic() && sinks.is_none_or(|s| &g.sinks() == s);
        Ok(keep.then(|| constant(crate::poly::rat(1))))
    })
}

fn check_vertex_set(n: usize, set: &VertexSet) -> Result<()> {
    match set.iter().find(|&&v| v == 0 || v > n) {
        Some(&v) => Err(Error::InvalidGraph(format!("vertex {v} outside 1..={n}"))),
        None => Ok(()),
    }
}

/// Every subset of `{1..n}`, ordered by bitmask.
pub fn vertex_subsets(n: usize) -> Vec<VertexSet> {
    (0u64..1 << n)
        .map(|mask| (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect())
        .collect()
}
