//! Exact verification of the Laplace operator identities.
//!
//! Each verifier builds both sides of an identity through separate code
//! paths and compares them term by term. The left side of an operator
//! identity always goes through [`laplace`] or [`laplace_undirected`]; the
//! right side never does. For the Potts identity the left side uses the
//! chromatic route and the right side the subgraph expansion.
//!
//! The sign in the acyclic evaluation and in the determinant identities is
//! left open: those verifiers test both `(-1)^n` and `(-1)^k` and report
//! which one holds instead of assuming either.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Graph, GraphSpace, VertexSet};
use crate::guard::{interpolation_steps, Guards};
use crate::invariants::{bernardi, chi_geq, chi_gt, coupling_sum};
use crate::poly::{factorial, format_rational, rat, sign_pow, MultiPoly, Rational, Var};
use crate::space::{
    acyclic_sum, det_element, det_minor, laplace, laplace_undirected, universal_bernardi,
    universal_chi, universal_potts, universal_potts_pushforward, universal_truncated_bernardi,
    universal_truncated_potts, vertex_subsets, GraphVector, PottsRoute,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `Δ B_{n,k}(q, y, z) = B̂_{n,k}(q, y - 1, z - 1)`.
    Theorem1,
    /// `Δ Z_{n,k}(q, v) = (-1)^k Ẑ_{n,k}(q, -v)`.
    Theorem2,
    /// `Δ X^>=_{n,k} = (-1)^k X^>_{n,k}`.
    CorChrom,
    /// `chi^>=_G(-1)` is `(-1)^b0(G)` on totally cyclic graphs, else 0.
    PropSsc,
    /// `chi^>_G(-1)` is 0 on graphs with a cycle and `±1` on acyclic ones.
    PropAc,
    /// `Δ det_{n,k} = (±1 / k!) sum of acyclic graphs`.
    CorSumall,
    /// The same for each diagonal minor.
    CorMtt,
    /// Subgraph expansion of the Bernardi polynomial and its Möbius inverse.
    Coupling,
    /// Chromatic and subgraph routes to the Potts polynomial agree.
    PottsOracle,
    /// One sign convention holds across every diagnosed report.
    SignConvention,
}

impl Identity {
    pub const ALL: [Identity; 10] = [
        Identity::Theorem1,
        Identity::Theorem2,
        Identity::CorChrom,
        Identity::PropSsc,
        Identity::PropAc,
        Identity::CorSumall,
        Identity::CorMtt,
        Identity::Coupling,
        Identity::PottsOracle,
        Identity::SignConvention,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Theorem1 => "theorem1",
            Identity::Theorem2 => "theorem2",
            Identity::CorChrom => "cor-chrom",
            Identity::PropSsc => "prop-ssc",
            Identity::PropAc => "prop-ac",
            Identity::CorSumall => "cor-sumall",
            Identity::CorMtt => "cor-mtt",
            Identity::Coupling => "coupling",
            Identity::PottsOracle => "potts-oracle",
            Identity::SignConvention => "sign-convention",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::parse(0, format!("unknown identity `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Equal,
    Differ,
}

/// Which sign factor a diagnosed identity holds with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    #[serde(rename = "(-1)^n")]
    PowN,
    #[serde(rename = "(-1)^k")]
    PowK,
    #[serde(rename = "both")]
    Both,
    #[serde(rename = "neither")]
    Neither,
}

impl SignConvention {
    pub fn from_flags(pow_n: bool, pow_k: bool) -> Self {
        match (pow_n, pow_k) {
            (true, true) => SignConvention::Both,
            (true, false) => SignConvention::PowN,
            (false, true) => SignConvention::PowK,
            (false, false) => SignConvention::Neither,
        }
    }

    pub fn holds_pow_n(self) -> bool {
        matches!(self, SignConvention::PowN | SignConvention::Both)
    }

    pub fn holds_pow_k(self) -> bool {
        matches!(self, SignConvention::PowK | SignConvention::Both)
    }

    /// The conventions valid for both diagnoses.
    pub fn merge(self, other: SignConvention) -> SignConvention {
        SignConvention::from_flags(
            self.holds_pow_n() && other.holds_pow_n(),
            self.holds_pow_k() && other.holds_pow_k(),
        )
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::PowN => "(-1)^n",
            SignConvention::PowK => "(-1)^k",
            SignConvention::Both => "both",
            SignConvention::Neither => "neither",
        })
    }
}

/// The first graph (or instance) where the two sides disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub graph: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub status: Status,
    /// Reported but excluded from the overall verdict.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignConvention>,
    /// Graphs (or instances) compared.
    pub checked: u64,
    pub mismatches: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<Discrepancy>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl IdentityReport {
    fn new(identity: Identity, n: usize, k: usize) -> Self {
        IdentityReport {
            identity,
            n,
            k,
            subset: None,
            variant: None,
            status: Status::Equal,
            informational: false,
            sign: None,
            checked: 0,
            mismatches: 0,
            discrepancy: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn is_equal(&self) -> bool {
        self.status == Status::Equal
    }

    /// Whether this report should fail a run.
    pub fn is_failure(&self) -> bool {
        !self.is_equal() && !self.informational
    }

    fn record(&mut self, graph: impl fmt::Display, lhs: String, rhs: String) {
        self.mismatches += 1;
        self.status = Status::Differ;
        if self.discrepancy.is_none() {
            self.discrepancy = Some(Discrepancy {
                graph: graph.to_string(),
                lhs,
                rhs,
            });
        }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }
}

fn show(p: Option<&MultiPoly>) -> String {
    p.map_or_else(|| "0".to_string(), ToString::to_string)
}

/// Term-by-term comparison over the union of supports.
fn compare<G: Graph>(report: &mut IdentityReport, lhs: &GraphVector<G>, rhs: &GraphVector<G>) {
    let mut ranks: Vec<u64> = lhs
        .ranked_terms()
        .chain(rhs.ranked_terms())
        .map(|(r, _)| r)
        .collect();
    ranks.sort_unstable();
    ranks.dedup();
    let left: BTreeMap<u64, &MultiPoly> = lhs.ranked_terms().collect();
    let right: BTreeMap<u64, &MultiPoly> = rhs.ranked_terms().collect();
    report.checked = ranks.len() as u64;
    for r in ranks {
        let (a, b) = (left.get(&r).copied(), right.get(&r).copied());
        if a != b {
            let g = G::unrank(lhs.n(), lhs.k(), r).expect("rank from a vector");
            report.record(g, show(a), show(b));
        }
    }
}

/// `Δ B_{n,k}` against the shifted truncation `B̂_{n,k}(q, y - 1, z - 1)`.
pub fn verify_theorem1(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let lhs = laplace(&universal_bernardi(n, k, guards)?);
    let rhs = universal_truncated_bernardi(n, k, guards)?.map_coefficients(MultiPoly::shift_yz)?;
    let mut report = IdentityReport::new(Identity::Theorem1, n, k);
    compare(&mut report, &lhs, &rhs);
    Ok(report.timed(start))
}

/// How the Potts sums are indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem2Reading {
    /// Sums over undirected graphs.
    Undirected,
    /// Sums over directed graphs, pushed to undirected ones by forgetting
    /// orientations.
    DirectedPushforward,
}

impl Theorem2Reading {
    pub fn name(self) -> &'static str {
        match self {
            Theorem2Reading::Undirected => "undirected",
            Theorem2Reading::DirectedPushforward => "directed-pushforward",
        }
    }
}

impl FromStr for Theorem2Reading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undirected" => Ok(Theorem2Reading::Undirected),
            "directed-pushforward" => Ok(Theorem2Reading::DirectedPushforward),
            _ => Err(Error::parse(0, format!("unknown reading `{s}`"))),
        }
    }
}

/// `Δ Z_{n,k}(q, v)` against `(-1)^k Ẑ_{n,k}(q, -v)`. The left side uses
/// the chromatic route to `Z`, the right side the subgraph expansion.
///
/// The directed-pushforward reading is marked informational: each non-loop
/// edge is counted twice there, and the identity fails already for `n = 2`,
/// `k = 1`.
pub fn verify_theorem2(
    n: usize,
    k: usize,
    reading: Theorem2Reading,
    guards: &Guards,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let (z, z_hat) = match reading {
        Theorem2Reading::Undirected => (
            universal_potts(n, k, PottsRoute::Chromatic, guards)?,
            universal_truncated_potts(n, k, PottsRoute::Subgraph, guards)?,
        ),
        Theorem2Reading::DirectedPushforward => (
            universal_potts_pushforward(n, k, false, PottsRoute::Chromatic, guards)?,
            universal_potts_pushforward(n, k, true, PottsRoute::Subgraph, guards)?,
        ),
    };
    let lhs = laplace_undirected(&z);
    let sign = sign_pow(k);
    let rhs = z_hat.map_coefficients(|c| Ok(c.negate_v()?.scale(&sign)))?;
    let mut report = IdentityReport::new(Identity::Theorem2, n, k);
    report.variant = Some(reading.name().to_string());
    report.informational = reading == Theorem2Reading::DirectedPushforward;
    compare(&mut report, &lhs, &rhs);
    Ok(report.timed(start))
}

/// `Δ X^>=_{n,k}` against `(-1)^k X^>_{n,k}`.
pub fn verify_cor_chrom(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let lhs = laplace(&universal_chi(n, k, false, guards)?);
    let rhs = universal_chi(n, k, true, guards)?.scale_rational(&sign_pow(k));
    let mut report = IdentityReport::new(Identity::CorChrom, n, k);
    compare(&mut report, &lhs, &rhs);
    Ok(report.timed(start))
}

fn at_minus_one(p: &MultiPoly) -> Result<Rational> {
    p.eval_at(&[(Var::Q, rat(-1))])
}

/// Evaluates `f` on every graph of `Γ(n, k)` in parallel, in rank order.
fn per_graph<T: Send>(
    n: usize,
    k: usize,
    guards: &Guards,
    what: &str,
    steps_per_graph: Option<u64>,
    f: impl Fn(&DirectedGraph) -> Result<T> + Sync,
) -> Result<Vec<(DirectedGraph, T)>> {
    let space = GraphSpace::<DirectedGraph>::new(n, k, guards)?;
    let count = space.len();
    guards.check_steps(what, steps_per_graph.and_then(|s| s.checked_mul(count)))?;
    (0..count)
        .into_par_iter()
        .map(|r| {
            let g = DirectedGraph::unrank(n, k, r)?;
            let value = f(&g)?;
            Ok((g, value))
        })
        .collect()
}

/// `chi^>=_G(-1) = (-1)^b0(G)` for totally cyclic `G` and `0` otherwise, for
/// every `G` in `Γ(n, k)`.
pub fn verify_prop_ssc(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let values = per_graph(n, k, guards, "evaluating chi at -1", interpolation_steps(n), |g| {
        at_minus_one(&chi_geq(g, &Guards::unlimited())?)
    })?;
    let mut report = IdentityReport::new(Identity::PropSsc, n, k);
    report.checked = values.len() as u64;
    for (g, value) in values {
        let expected = if g.is_totally_cyclic() {
            sign_pow(g.betti0())
        } else {
            rat(0)
        };
        if value != expected {
            report.record(&g, format_rational(&value), format_rational(&expected));
        }
    }
    Ok(report.timed(start))
}

/// `chi^>_G(-1) = 0` exactly when `G` has a directed cycle (a loop counts);
/// on acyclic `G` the value is tested against both `(-1)^n` and `(-1)^k`.
///
/// The report is `equal` when the zero side holds and at least one sign
/// convention fits every acyclic graph; `sign` says which.
pub fn verify_prop_ac(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let values = per_graph(n, k, guards, "evaluating chi at -1", interpolation_steps(n), |g| {
        at_minus_one(&chi_gt(g, &Guards::unlimited())?)
    })?;
    let (pow_n, pow_k) = (sign_pow(n), sign_pow(k));
    let mut report = IdentityReport::new(Identity::PropAc, n, k);
    report.checked = values.len() as u64;
    let (mut holds_n, mut holds_k) = (true, true);
    let mut first_sign_miss = None;
    for (g, value) in values {
        if !g.is_acyclic() {
            if value != rat(0) {
                report.record(&g, format_rational(&value), "0".to_string());
            }
            continue;
        }
        holds_n &= value == pow_n;
        holds_k &= value == pow_k;
        if value != pow_n && value != pow_k {
            report.record(&g, format_rational(&value), "±1".to_string());
        } else if value != pow_n || value != pow_k {
            first_sign_miss.get_or_insert((g, value));
        }
    }
    let sign = SignConvention::from_flags(holds_n, holds_k);
    report.sign = Some(sign);
    if sign == SignConvention::Neither && report.mismatches == 0 {
        // every value is ±1, but neither sign is uniform
        let (g, value) = first_sign_miss.expect("a mixed sign needs a witness");
        report.record(&g, format_rational(&value), "a uniform sign".to_string());
    }
    Ok(report.timed(start))
}

/// Compares `Δ det` with the acyclic sum under both normalizations
/// `(-1)^n / k!` and `(-1)^k / k!`.
fn diagnose_det(
    report: &mut IdentityReport,
    lhs: &GraphVector<DirectedGraph>,
    acyclic: &GraphVector<DirectedGraph>,
) {
    let (n, k) = (lhs.n(), lhs.k());
    let rhs_n = acyclic.scale_rational(&(sign_pow(n) / factorial(k)));
    let rhs_k = acyclic.scale_rational(&(sign_pow(k) / factorial(k)));
    let sign = SignConvention::from_flags(lhs == &rhs_n, lhs == &rhs_k);
    report.sign = Some(sign);
    match sign {
        SignConvention::Neither => compare(report, lhs, &rhs_n),
        _ => {
            let mut scratch = report.clone();
            compare(&mut scratch, lhs, if sign.holds_pow_n() { &rhs_n } else { &rhs_k });
            report.checked = scratch.checked;
        }
    }
}

/// `Δ det_{n,k} = (±1 / k!) sum over acyclic G of G`, with the sign
/// diagnosed.
pub fn verify_cor_sumall(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let lhs = laplace(&det_element(n, k, guards)?);
    let acyclic = acyclic_sum(n, k, None, guards)?;
    let mut report = IdentityReport::new(Identity::CorSumall, n, k);
    diagnose_det(&mut report, &lhs, &acyclic);
    Ok(report.timed(start))
}

/// The diagonal `I`-minor version of [`verify_cor_sumall`]: isolated set
/// `I` on the left, sink set `I` on the right.
pub fn verify_cor_mtt(n: usize, k: usize, subset: &VertexSet, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let lhs = laplace(&det_minor(n, k, subset, guards)?);
    let acyclic = acyclic_sum(n, k, Some(subset), guards)?;
    let mut report = IdentityReport::new(Identity::CorMtt, n, k);
    report.subset = Some(subset.iter().copied().collect());
    diagnose_det(&mut report, &lhs, &acyclic);
    Ok(report.timed(start))
}

fn lattice(k: usize, values: &BTreeMap<u64, MultiPoly>) -> Result<Vec<MultiPoly>> {
    let size = u32::try_from(k)
        .ok()
        .and_then(|k| 1usize.checked_shl(k))
        .ok_or(Error::IncompleteLattice {
            got: values.len(),
            expected: usize::MAX,
        })?;
    let complete = values.len() == size && values.keys().enumerate().all(|(i, &m)| i as u64 == m);
    if !complete {
        return Err(Error::IncompleteLattice {
            got: values.len(),
            expected: size,
        });
    }
    Ok(values.values().cloned().collect())
}

/// Adds or subtracts, along each edge bit, the value without that edge.
fn transform(k: usize, mut v: Vec<MultiPoly>, subtract: bool) -> Result<Vec<MultiPoly>> {
    for bit in 0..k {
        for mask in 0..v.len() {
            if mask >> bit & 1 == 1 {
                let lower = &v[mask ^ (1 << bit)];
                v[mask] = if subtract {
                    v[mask].try_sub(lower)?
                } else {
                    v[mask].try_add(lower)?
                };
            }
        }
    }
    Ok(v)
}

fn to_map(v: Vec<MultiPoly>) -> BTreeMap<u64, MultiPoly> {
    v.into_iter().enumerate().map(|(m, p)| (m as u64, p)).collect()
}

/// Subset sums over the edge lattice of a `k`-edge graph:
/// `h(H) = sum over F ⊆ H of f(F)`, with subgraphs keyed by edge mask.
pub fn subset_sum(k: usize, values: &BTreeMap<u64, MultiPoly>) -> Result<BTreeMap<u64, MultiPoly>> {
    Ok(to_map(transform(k, lattice(k, values)?, false)?))
}

/// Inverse of [`subset_sum`]:
/// `f(H) = sum over F ⊆ H of (-1)^(e(H) - e(F)) h(F)`.
pub fn moebius_invert(k: usize, values: &BTreeMap<u64, MultiPoly>) -> Result<BTreeMap<u64, MultiPoly>> {
    Ok(to_map(transform(k, lattice(k, values)?, true)?))
}

/// For every loopless `G` in `Γ(n, k)`: the subgraph expansion of `B_G`
/// holds, and Möbius inversion of `H -> B_H` recovers the shifted
/// truncations `[B_H]_{e(H)}(q, y - 1, z - 1)` on every subgraph.
pub fn verify_coupling(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let subsets = u32::try_from(k).ok().and_then(|k| 1u64.checked_shl(k));
    let steps = interpolation_steps(n).zip(subsets).and_then(|(a, b)| a.checked_mul(b));
    let unlimited = Guards::unlimited();
    let outcomes = per_graph(n, k, guards, "subgraph expansions", steps, |g| {
        if !g.is_loopless() {
            return Ok(None);
        }
        let b = bernardi(g, &unlimited)?;
        let expanded = coupling_sum(g, &unlimited)?;
        if expanded != b {
            return Ok(Some(("expansion".to_string(), expanded.to_string(), b.to_string())));
        }
        let mut h = BTreeMap::new();
        let mut f = BTreeMap::new();
        for (mask, sub) in g.subgraphs() {
            let bs = bernardi(&sub, &unlimited)?;
            f.insert(mask, bs.truncate_top(mask.count_ones() as usize).shift_yz()?);
            h.insert(mask, bs);
        }
        let recovered = moebius_invert(k, &h)?;
        Ok(recovered
            .iter()
            .find(|(m, p)| f.get(m) != Some(p))
            .map(|(m, p)| (format!("mask {m:#b}"), p.to_string(), show(f.get(m)))))
    })?;
    let mut report = IdentityReport::new(Identity::Coupling, n, k);
    for (g, outcome) in outcomes {
        if !g.is_loopless() {
            continue;
        }
        report.checked += 1;
        if let Some((part, lhs, rhs)) = outcome {
            report.record(format!("{g} ({part})"), lhs, rhs);
        }
    }
    Ok(report.timed(start))
}

/// Chromatic-route and subgraph-route Potts polynomials agree on every
/// graph of `Υ(n, k)`.
pub fn verify_potts_oracle(n: usize, k: usize, guards: &Guards) -> Result<IdentityReport> {
    let start = Instant::now();
    let lhs = universal_potts(n, k, PottsRoute::Chromatic, guards)?;
    let rhs = universal_potts(n, k, PottsRoute::Subgraph, guards)?;
    let mut report = IdentityReport::new(Identity::PottsOracle, n, k);
    compare(&mut report, &lhs, &rhs);
    Ok(report.timed(start))
}

/// The conventions valid across every diagnosed report.
pub fn aggregate_sign(reports: &[IdentityReport]) -> Option<SignConvention> {
    reports
        .iter()
        .filter_map(|r| r.sign)
        .reduce(SignConvention::merge)
}

/// The outcome of [`verify_all`].
#[derive(Debug, Clone)]
pub struct VerifyRun {
    /// In order of identity, then `n`, `k` and subset.
    pub reports: Vec<IdentityReport>,
    /// Instances the guards refused, as `(identity, n, k)`.
    pub skipped: Vec<(Identity, usize, usize)>,
}

impl VerifyRun {
    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| r.is_failure()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

#[derive(Debug, Clone)]
struct Task {
    identity: Identity,
    n: usize,
    k: usize,
    subset: Option<VertexSet>,
    reading: Option<Theorem2Reading>,
}

impl Task {
    fn run(&self, guards: &Guards) -> Result<IdentityReport> {
        let (n, k) = (self.n, self.k);
        match self.identity {
            Identity::Theorem1 => verify_theorem1(n, k, guards),
            Identity::Theorem2 => verify_theorem2(n, k, self.reading.expect("reading"), guards),
            Identity::CorChrom => verify_cor_chrom(n, k, guards),
            Identity::PropSsc => verify_prop_ssc(n, k, guards),
            Identity::PropAc => verify_prop_ac(n, k, guards),
            Identity::CorSumall => verify_cor_sumall(n, k, guards),
            Identity::CorMtt => verify_cor_mtt(n, k, self.subset.as_ref().expect("subset"), guards),
            Identity::Coupling => verify_coupling(n, k, guards),
            Identity::PottsOracle => verify_potts_oracle(n, k, guards),
            Identity::SignConvention => unreachable!("aggregated, not run"),
        }
    }
}

fn tasks(n_max: usize, k_max: usize) -> Vec<Task> {
    let mut out = Vec::new();
    for identity in Identity::ALL {
        for n in 1..=n_max {
            for k in 0..=k_max {
                let task = |subset, reading| Task {
                    identity,
                    n,
                    k,
                    subset,
                    reading,
                };
                match identity {
                    Identity::SignConvention => {}
                    Identity::Theorem2 => {
                        out.push(task(None, Some(Theorem2Reading::Undirected)));
                        out.push(task(None, Some(Theorem2Reading::DirectedPushforward)));
                    }
                    Identity::CorMtt => {
                        out.extend(vertex_subsets(n).into_iter().map(|s| task(Some(s), None)));
                    }
                    _ => out.push(task(None, None)),
                }
            }
        }
    }
    out
}

/// Runs every verifier for `1 <= n <= n_max` and `0 <= k <= k_max`, every
/// reading of the Potts identity and every vertex subset for the minors.
/// Instances the guards refuse are skipped and listed. A final
/// `sign-convention` report states the sign valid across all diagnosed
/// instances.
pub fn verify_all(n_max: usize, k_max: usize, guards: &Guards) -> Result<VerifyRun> {
    let outcomes: Vec<(Task, Result<IdentityReport>)> = tasks(n_max, k_max)
        .into_par_iter()
        .map(|t| {
            let r = t.run(guards);
            (t, r)
        })
        .collect();
    let mut run = VerifyRun {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    for (task, outcome) in outcomes {
        match outcome {
            Ok(report) => run.reports.push(report),
            Err(e) if e.is_guard() => {
                if !run.skipped.contains(&(task.identity, task.n, task.k)) {
                    run.skipped.push((task.identity, task.n, task.k));
                }
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(sign) = aggregate_sign(&run.reports) {
        let mut summary = IdentityReport::new(Identity::SignConvention, n_max, k_max);
        summary.variant = Some("aggregate".to_string());
        summary.sign = Some(sign);
        summary.checked = run.reports.iter().filter(|r| r.sign.is_some()).count() as u64;
        if sign == SignConvention::Neither {
            summary.status = Status::Differ;
            summary.mismatches = 1;
        }
        run.reports.push(summary);
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;

    fn gd() -> Guards {
        Guards::default()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn theorem1_small_cases() {
        for (n, k) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let r = verify_theorem1(n, k, &gd()).unwrap();
            assert!(r.is_equal(), "{r:?}");
        }
        assert_eq!(verify_theorem1(1, 1, &gd()).unwrap().checked, 0);
    }

    #[test]
    fn theorem2_readings() {
        let u = verify_theorem2(2, 1, Theorem2Reading::Undirected, &gd()).unwrap();
        assert!(u.is_equal() && !u.informational);
        let d = verify_theorem2(2, 1, Theorem2Reading::DirectedPushforward, &gd()).unwrap();
        assert_eq!(d.status, Status::Differ);
        assert!(d.informational && !d.is_failure());
        let disc = d.discrepancy.unwrap();
        assert_eq!(disc.graph, "n=2;1-2");
        assert_eq!(disc.lhs, "2*q*v");
        assert_eq!(disc.rhs, "-2*q^2 + 2*q*v");
        assert!(verify_theorem2(1, 1, Theorem2Reading::Undirected, &gd()).unwrap().is_equal());
    }

    #[test]
    fn chromatic_corollary_and_propositions() {
        assert!(verify_cor_chrom(2, 1, &gd()).unwrap().is_equal());
        assert!(verify_cor_chrom(1, 2, &gd()).unwrap().is_equal());
        let ssc = verify_prop_ssc(2, 2, &gd()).unwrap();
        assert!(ssc.is_equal());
        assert_eq!(ssc.checked, 16);
        let ac = verify_prop_ac(2, 1, &gd()).unwrap();
        assert!(ac.is_equal());
        assert_eq!(ac.sign, Some(SignConvention::PowN));
        assert_eq!(verify_prop_ac(2, 2, &gd()).unwrap().sign, Some(SignConvention::Both));
    }

    #[test]
    fn determinant_corollaries() {
        let r = verify_cor_sumall(2, 1, &gd()).unwrap();
        assert!(r.is_equal());
        assert_eq!(r.sign, Some(SignConvention::PowN));
        assert_eq!(verify_cor_sumall(1, 1, &gd()).unwrap().sign, Some(SignConvention::Both));
        let m = verify_cor_mtt(2, 1, &set(&[2]), &gd()).unwrap();
        assert_eq!(m.sign, Some(SignConvention::PowN));
        assert_eq!(m.subset, Some(vec![2]));
        assert_eq!(verify_cor_mtt(2, 1, &set(&[]), &gd()).unwrap().sign, Some(SignConvention::Both));
    }

    #[test]
    fn sign_merging() {
        use SignConvention::*;
        assert_eq!(Both.merge(PowN), PowN);
        assert_eq!(PowN.merge(PowK), Neither);
        assert_eq!(Both.merge(Both), Both);
        assert_eq!(serde_json::to_string(&PowN).unwrap(), "\"(-1)^n\"");
    }

    fn consts(values: &[i64]) -> BTreeMap<u64, MultiPoly> {
        values
            .iter()
            .enumerate()
            .map(|(m, &c)| (m as u64, MultiPoly::int(VarSet::Q, c)))
            .collect()
    }

    #[test]
    fn moebius_examples() {
        // constant h on a one-edge lattice
        let f = moebius_invert(1, &consts(&[5, 5])).unwrap();
        assert_eq!(f, consts(&[5, 0]));
        let h = consts(&[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(subset_sum(3, &moebius_invert(3, &h).unwrap()).unwrap(), h);
        assert_eq!(
            moebius_invert(2, &consts(&[1, 2, 3])),
            Err(Error::IncompleteLattice { got: 3, expected: 4 })
        );
    }

    #[test]
    fn coupling_and_oracle() {
        let r = verify_coupling(2, 2, &gd()).unwrap();
        assert!(r.is_equal(), "{r:?}");
        assert_eq!(r.checked, 4);
        assert!(verify_potts_oracle(2, 2, &gd()).unwrap().is_equal());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_theorem1(2, 1, &gd()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"identity":"theorem1","n":2,"k":1,"status":"equal","checked":2,"mismatches":0}"#
        );
        let back: IdentityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.identity, Identity::Theorem1);
    }

    #[test]
    fn all_small() {
        let run = verify_all(2, 2, &gd()).unwrap();
        assert!(run.passed(), "{:?}", run.reports.iter().filter(|r| r.is_failure()).collect::<Vec<_>>());
        assert!(run.skipped.is_empty());
        let last = run.reports.last().unwrap();
        assert_eq!(last.identity, Identity::SignConvention);
        assert_eq!(last.sign, Some(SignConvention::PowN));
        let ordered: Vec<Identity> = run.reports.iter().map(|r| r.identity).collect();
        let mut sorted = ordered.clone();
        sorted.sort();
        assert_eq!(ordered, sorted);
    }

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("theorem3".parse::<Identity>().is_err());
    }
}
