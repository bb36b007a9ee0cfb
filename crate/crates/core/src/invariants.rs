//! Per-graph polynomial invariants computed by coloring enumeration.
//!
//! For a directed graph `G` on `n` vertices the Bernardi polynomial sums
//! `y^i z^j` over all colorings `f: {1..n} -> {1..q}`, where `i` counts edges
//! `[a, b]` with `f(b) > f(a)` and `j` counts edges with `f(b) < f(a)`. It is
//! a polynomial in `q` of degree at most `n`, recovered here by exact
//! interpolation from the nodes `q = 1..=n+1`, with `q = n+2` as a witness.
//!
//! Subgraphs always keep all `n` vertices, so an edgeless subgraph on `n`
//! vertices has Bernardi polynomial `q^n` and Potts polynomial `q^n`.

use crate::error::Result;
use crate::graph::{DirectedGraph, Graph, UndirectedGraph};
use crate::guard::{interpolation_steps, Guards};
use crate::poly::{interpolate_q, rat, Monomial, MultiPoly, Var, VarSet};

/// Number of colorings `f: {1..n} -> {1..q}` with `i` strictly increasing
/// and `j` strictly decreasing edges, for one fixed `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringStats {
    q: u64,
    k: usize,
    counts: Vec<u64>,
}

impl ColoringStats {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn count(&self, increasing: usize, decreasing: usize) -> u64 {
        if increasing + decreasing > self.k {
            return 0;
        }
        self.counts[increasing * (self.k + 1) + decreasing]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let w = self.k + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(idx, &c)| (idx / w, idx % w, c))
    }

    /// `sum count(i, j) y^i z^j`.
    pub fn bernardi_value(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(VarSet::QYZ);
        for (i, j, c) in self.cells() {
            p.add_term(Monomial::new(&[0, i as u32, j as u32]), rat(c as i64));
        }
        p
    }

    /// `sum count(i, j) y^(i + j)`: every strict edge is an edge with
    /// distinct endpoint colors.
    pub fn chromatic_value(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(VarSet::QY);
        for (i, j, c) in self.cells() {
            p.add_term(Monomial::new(&[0, (i + j) as u32]), rat(c as i64));
        }
        p
    }
}

/// Enumerates all `q^n` colorings with an odometer, updating the strict-edge
/// counts only for edges at the vertex whose color changed.
pub fn coloring_stats(g: &DirectedGraph, q: u64) -> ColoringStats {
    assert!(q >= 1, "at least one color is needed");
    let n = g.n();
    let k = g.k();
    let width = k + 1;

    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        if a != b {
            incident[a - 1].push((a - 1, b - 1));
            incident[b - 1].push((a - 1, b - 1));
        }
    }

    let mut counts = vec![0u64; width * width];
    let mut color = vec![0u64; n];
    let (mut inc, mut dec) = (0usize, 0usize);

    loop {
        counts[inc * width + dec] += 1;

        let mut v = 0;
        loop {
            if v == n {
                return ColoringStats { q, k, counts };
            }
            for &(t, h) in &incident[v] {
                match color[h].cmp(&color[t]) {
                    std::cmp::Ordering::Greater => inc -= 1,
                    std::cmp::Ordering::Less => dec -= 1,
                    std::cmp::Ordering::Equal => {}
                }
            }
            color[v] = if color[v] + 1 == q { 0 } else { color[v] + 1 };
            for &(t, h) in &incident[v] {
                match color[h].cmp(&color[t]) {
                    std::cmp::Ordering::Greater => inc += 1,
                    std::cmp::Ordering::Less => dec += 1,
                    std::cmp::Ordering::Equal => {}
                }
            }
            if color[v] != 0 {
                break;
            }
            v += 1;
        }
    }
}

fn check_colorings(guards: &Guards, n: usize, q: u64) -> Result<()> {
    let steps = u32::try_from(n).ok().and_then(|e| q.checked_pow(e));
    guards.check_steps(&format!("coloring {n} vertices with {q} colors"), steps)?;
    Ok(())
}

fn check_interpolation(guards: &Guards, n: usize) -> Result<()> {
    guards.check_steps(
        &format!("interpolating a polynomial on {n} vertices"),
        interpolation_steps(n),
    )?;
    Ok(())
}

/// The Bernardi polynomial at a fixed positive integer `q`, as a polynomial
/// in `y` and `z` (over the `(q, y, z)` variable list, with no `q`).
pub fn bernardi_eval(g: &DirectedGraph, q: u64, guards: &Guards) -> Result<MultiPoly> {
    check_colorings(guards, g.n(), q)?;
    Ok(coloring_stats(g, q).bernardi_value())
}

/// Evaluates at `q = 1..=n+2` and interpolates with degree bound `n`. All
/// `n + 2` points go through [`interpolate_q`], so the last one is checked
/// against the interpolant.
fn interpolate_colorings(
    g: &DirectedGraph,
    guards: &Guards,
    value: impl Fn(&ColoringStats) -> MultiPoly,
) -> Result<MultiPoly> {
    check_interpolation(guards, g.n())?;
    let n = g.n();
    let points: Vec<(i64, MultiPoly)> = (1..=n as u64 + 2)
        .map(|q| (q as i64, value(&coloring_stats(g, q))))
        .collect();
    interpolate_q(&points, n)
}

pub fn bernardi(g: &DirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    interpolate_colorings(g, guards, ColoringStats::bernardi_value)
}

/// `C_G(q, y)`: colorings weighted by `y` per edge whose endpoints get
/// different colors.
pub fn full_chromatic(g: &UndirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    interpolate_colorings(&g.lift(0), guards, ColoringStats::chromatic_value)
}

/// Potts polynomial through the full chromatic polynomial,
/// `Z_G(q, v) = (v + 1)^k C_G(q, 1 / (v + 1))`.
pub fn potts(g: &UndirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    full_chromatic(g, guards)?.potts_substitute(g.k())
}

/// Potts polynomial through the subgraph expansion
/// `Z_G(q, v) = sum over edge subsets H of q^b0(H) v^e(H)`.
pub fn potts_sokal(g: &UndirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    let subsets = u32::try_from(g.k()).ok().and_then(|k| 1u64.checked_shl(k));
    guards.check_steps(&format!("expanding {} edge subsets", g.k()), subsets)?;
    let k = g.k();
    let mut tally = vec![0i64; (g.n() + 1) * (k + 1)];
    for (mask, h) in g.subgraphs() {
        tally[h.betti0() * (k + 1) + mask.count_ones() as usize] += 1;
    }
    let mut z = MultiPoly::zero(VarSet::QV);
    for (idx, &c) in tally.iter().enumerate() {
        let (b0, e) = (idx / (k + 1), idx % (k + 1));
        z.add_term(Monomial::new(&[b0 as u32, e as u32]), rat(c));
    }
    Ok(z)
}

/// `P(q, 0, 1)` as a polynomial in `q` alone.
pub fn at_y0_z1(p: &MultiPoly) -> Result<MultiPoly> {
    p.partial_eval(Var::Y, &rat(0))?
        .partial_eval(Var::Z, &rat(1))?
        .restrict(VarSet::Q)
}

/// `chi^>=_G(q) = B_G(q, 0, 1)`: colorings with `f(a) >= f(b)` on every edge
/// `[a, b]`.
pub fn chi_geq(g: &DirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    at_y0_z1(&bernardi(g, guards)?)
}

/// `chi^>_G(q) = [B_G]_k(q, 0, 1)`: colorings with `f(a) > f(b)` on every
/// edge `[a, b]`.
pub fn chi_gt(g: &DirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    at_y0_z1(&bernardi(g, guards)?.truncate_top(g.k()))
}

/// `sum over subgraphs F of G of [B_F]_{e(F)}(q, y - 1, z - 1)`, with every
/// subgraph kept on all `n` vertices. For a loopless `G` this equals `B_G`.
pub fn coupling_sum(g: &DirectedGraph, guards: &Guards) -> Result<MultiPoly> {
    let mut total = MultiPoly::zero(VarSet::QYZ);
    for (mask, sub) in g.subgraphs() {
        let top = bernardi(&sub, guards)?.truncate_top(mask.count_ones() as usize);
        total.add_assign_ref(&top.shift_yz()?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn d(s: &str) -> DirectedGraph {
        s.parse().unwrap()
    }

    fn u(s: &str) -> UndirectedGraph {
        s.parse().unwrap()
    }

    fn qyz(s: &str) -> MultiPoly {
        MultiPoly::parse(s, VarSet::QYZ).unwrap()
    }

    fn qv(s: &str) -> MultiPoly {
        MultiPoly::parse(s, VarSet::QV).unwrap()
    }

    fn q(s: &str) -> MultiPoly {
        MultiPoly::parse(s, VarSet::Q).unwrap()
    }

    /// Direct per-coloring scan, sharing nothing with the odometer.
    fn scan(g: &DirectedGraph, q: u64) -> Vec<(usize, usize)> {
        let n = g.n();
        let mut out = Vec::new();
        for code in 0..q.pow(n as u32) {
            let f: Vec<u64> = (0..n).map(|v| code / q.pow(v as u32) % q).collect();
            let inc = g.edges().iter().filter(|&&(a, b)| f[b - 1] > f[a - 1]).count();
            let dec = g.edges().iter().filter(|&&(a, b)| f[b - 1] < f[a - 1]).count();
            out.push((inc, dec));
        }
        out
    }

    #[test]
    fn odometer_matches_direct_scan() {
        for s in ["n=3;1>2,2>3,3>1", "n=3;1>2,1>2,2>2", "n=2;", "n=4;1>3,4>2,2>1"] {
            let g = d(s);
            for qq in 1..=4 {
                let stats = coloring_stats(&g, qq);
                let scanned = scan(&g, qq);
                assert_eq!(stats.total(), scanned.len() as u64);
                for i in 0..=g.k() {
                    for j in 0..=g.k() - i {
                        let want = scanned.iter().filter(|&&c| c == (i, j)).count() as u64;
                        assert_eq!(stats.count(i, j), want, "{s} q={qq} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn bernardi_eval_examples() {
        let gd = Guards::default();
        assert_eq!(bernardi_eval(&d("n=2;1>2"), 2, &gd).unwrap(), qyz("2 + y + z"));
        assert_eq!(bernardi_eval(&d("n=1;1>1"), 5, &gd).unwrap(), qyz("5"));
        assert_eq!(bernardi_eval(&DirectedGraph::edgeless(2), 3, &gd).unwrap(), qyz("9"));
        assert!(bernardi_eval(&d("n=4;"), 100, &Guards::new(10, 1000)).unwrap_err().is_guard());
    }

    #[test]
    fn bernardi_examples() {
        let gd = Guards::default();
        let single = bernardi(&d("n=2;1>2"), &gd).unwrap();
        assert_eq!(single, qyz("q + 1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z"));
        assert_eq!(bernardi(&d("n=2;1>1,2>2"), &gd).unwrap(), qyz("q^2"));

        let rev = bernardi(&d("n=2;2>1"), &gd).unwrap();
        assert_eq!(rev, single.swap_yz().unwrap());
        let out_star = d("n=3;1>2,1>3,2>2");
        let b = bernardi(&out_star, &gd).unwrap();
        // the color flip f -> q + 1 - f exchanges increasing and decreasing edges
        assert_eq!(b, b.swap_yz().unwrap());
        assert_eq!(bernardi(&out_star.reverse(), &gd).unwrap(), b.swap_yz().unwrap());

        // a 2-path: strict chains of length two among q colors
        let path = bernardi(&d("n=3;1>2,2>3"), &gd).unwrap();
        assert_eq!(path.truncate_top(2).coefficient(&[3, 2, 0]), ratio(1, 6));
    }

    #[test]
    fn chromatic_and_potts_examples() {
        let gd = Guards::default();
        let qy = |s| MultiPoly::parse(s, VarSet::QY).unwrap();
        assert_eq!(full_chromatic(&u("n=2;1-2"), &gd).unwrap(), qy("q + q^2*y - q*y"));
        assert_eq!(full_chromatic(&u("n=2;1-1,2-2"), &gd).unwrap(), qy("q^2"));

        assert_eq!(potts(&u("n=2;1-2"), &gd).unwrap(), qv("q^2 + q*v"));
        assert_eq!(potts(&UndirectedGraph::edgeless(3), &gd).unwrap(), qv("q^3"));
        assert_eq!(potts(&u("n=1;1-1"), &gd).unwrap(), qv("q*v + q"));

        assert_eq!(potts_sokal(&u("n=2;1-2"), &gd).unwrap(), qv("q^2 + q*v"));
        assert_eq!(potts_sokal(&UndirectedGraph::edgeless(2), &gd).unwrap(), qv("q^2"));
        assert_eq!(potts_sokal(&u("n=2;1-2,1-2"), &gd).unwrap(), qv("q^2 + 2*q*v + q*v^2"));
        assert_eq!(potts(&u("n=2;1-2,1-2"), &gd).unwrap(), qv("q^2 + 2*q*v + q*v^2"));
    }

    #[test]
    fn chromatic_specializations() {
        let gd = Guards::default();
        let g = d("n=2;1>2");
        assert_eq!(chi_geq(&g, &gd).unwrap(), q("q + 1/2*q^2 - 1/2*q"));
        assert_eq!(chi_gt(&g, &gd).unwrap(), q("1/2*q^2 - 1/2*q"));
        assert_eq!(chi_geq(&d("n=2;1>2,2>1"), &gd).unwrap(), q("q"));
        assert!(chi_gt(&d("n=2;1>1,1>2"), &gd).unwrap().is_zero());
        assert!(chi_gt(&d("n=1;1>1"), &gd).unwrap().is_zero());
        // chi^>= counts f(a) >= f(b); at q = 2 for [1,2] that is 3 colorings
        let at2 = chi_geq(&g, &gd).unwrap().eval_at(&[(Var::Q, rat(2))]).unwrap();
        assert_eq!(at2, rat(3));
    }

    #[test]
    fn coupling_sum_recovers_bernardi() {
        let gd = Guards::default();
        for s in ["n=2;1>2", "n=3;1>2,2>3", "n=3;1>2,2>1", "n=2;1>2,1>2"] {
            let g = d(s);
            assert_eq!(coupling_sum(&g, &gd).unwrap(), bernardi(&g, &gd).unwrap(), "{s}");
        }
    }
}
