//! Exact multivariate polynomials over the rationals.
//!
//! A polynomial lives over one of a few fixed variable lists, always starting
//! with `q`: `(q)`, `(q, y)`, `(q, y, z)` or `(q, v)`. Terms are kept in a
//! map from exponent vectors to nonzero coefficients, so structural equality
//! is exact equality. Canonical output lists monomials in descending graded
//! lexicographic order, e.g. `q^2 + q*v` or `1/2*q^2*y - 1/2*q*y + q`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` as a rational.
pub fn sign_pow(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        rat(1)
    } else {
        rat(-1)
    }
}

pub fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Q,
    Y,
    Z,
    V,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::Y => "y",
            Var::Z => "z",
            Var::V => "v",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "q" => Some(Var::Q),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            "v" => Some(Var::V),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarSet {
    Q,
    QY,
    QYZ,
    QV,
}

impl VarSet {
    pub fn vars(self) -> &'static [Var] {
        match self {
            VarSet::Q => &[Var::Q],
            VarSet::QY => &[Var::Q, Var::Y],
            VarSet::QYZ => &[Var::Q, Var::Y, Var::Z],
            VarSet::QV => &[Var::Q, Var::V],
        }
    }

    pub fn arity(self) -> usize {
        self.vars().len()
    }

    pub fn index_of(self, var: Var) -> Option<usize> {
        self.vars().iter().position(|&v| v == var)
    }

    pub fn from_vars(vars: &[Var]) -> Option<VarSet> {
        [VarSet::Q, VarSet::QY, VarSet::QYZ, VarSet::QV]
            .into_iter()
            .find(|vs| vs.vars() == vars)
    }

    fn index(self, var: Var) -> Result<usize> {
        self.index_of(var).ok_or_else(|| Error::UnknownVariable {
            var: var.name().into(),
            vars: self.to_string(),
        })
    }

    fn is_prefix_of(self, other: VarSet) -> bool {
        other.vars().starts_with(self.vars())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.vars().iter().map(|v| v.name()).collect();
        write!(f, "({})", names.join(","))
    }
}

/// Exponent vector; slots past the arity of the variable set stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; 3]);

impl Monomial {
    pub fn new(exps: &[u32]) -> Monomial {
        let mut m = [0; 3];
        m[..exps.len()].copy_from_slice(exps);
        Monomial(m)
    }

    pub fn exps(&self) -> &[u32; 3] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }
}

/// Graded lexicographic: total degree first, then exponents left to right.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: VarSet) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSet, c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn one(vars: VarSet) -> Self {
        MultiPoly::constant(vars, rat(1))
    }

    pub fn int(vars: VarSet, c: i64) -> Self {
        MultiPoly::constant(vars, rat(c))
    }

    pub fn var(vars: VarSet, var: Var) -> Result<Self> {
        let idx = vars.index(var)?;
        let mut exps = [0; 3];
        exps[idx] = 1;
        let mut p = MultiPoly::zero(vars);
        p.add_term(Monomial(exps), rat(1));
        Ok(p)
    }

    /// `coeff * prod(var_i ^ exps_i)`; `exps` has one entry per variable.
    pub fn term(vars: VarSet, exps: &[u32], coeff: Rational) -> Result<Self> {
        if exps.len() != vars.arity() {
            return Err(Error::VariableMismatch {
                left: vars.to_string(),
                right: format!("{} exponents", exps.len()),
            });
        }
        let mut p = MultiPoly::zero(vars);
        p.add_term(Monomial::new(exps), coeff);
        Ok(p)
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.vars.to_string(),
                right: other.vars.to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_vars(other)?;
        let mut out = MultiPoly::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// In-place `self += other`. Panics if the variable sets differ.
    pub fn add_assign_ref(&mut self, other: &MultiPoly) {
        self.same_vars(other).expect("adding polynomials");
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.vars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn degree_in(&self, var: Var) -> Result<u32> {
        let i = self.vars.index(var)?;
        Ok(self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
    }

    /// Sum of the exponents of every variable except `q`, per term.
    fn top_degree(m: &Monomial) -> u32 {
        m.0[1] + m.0[2]
    }

    /// Largest total degree in the non-`q` variables.
    pub fn top_degree_max(&self) -> u32 {
        self.terms.keys().map(Self::top_degree).max().unwrap_or(0)
    }

    /// The terms whose degree in the non-`q` variables is exactly `k`.
    pub fn truncate_top(&self, k: usize) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Self::top_degree(m) as usize == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `var -> var + delta` and expands.
    pub fn shift(&self, var: Var, delta: &Rational) -> Result<MultiPoly> {
        let idx = self.vars.index(var)?;
        let mut out = MultiPoly::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            // (x + d)^e = sum_j C(e, j) x^j d^(e - j)
            let mut binom = BigInt::one();
            for j in 0..=e {
                let mut mono = *m;
                mono.0[idx] = j;
                let d_pow = pow_rational(delta, e - j);
                out.add_term(mono, c * Rational::from_integer(binom.clone()) * d_pow);
                binom = binom * BigInt::from(e - j) / BigInt::from(j + 1);
            }
        }
        Ok(out)
    }

    /// `y -> y - 1`, `z -> z - 1`.
    pub fn shift_yz(&self) -> Result<MultiPoly> {
        self.shift(Var::Y, &rat(-1))?.shift(Var::Z, &rat(-1))
    }

    /// `y -> y + 1`, `z -> z + 1`; inverse of [`MultiPoly::shift_yz`].
    pub fn unshift_yz(&self) -> Result<MultiPoly> {
        self.shift(Var::Y, &rat(1))?.shift(Var::Z, &rat(1))
    }

    /// Exchanges `y` and `z`.
    pub fn swap_yz(&self) -> Result<MultiPoly> {
        let (iy, iz) = (self.vars.index(Var::Y)?, self.vars.index(Var::Z)?);
        Ok(MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut s = *m;
                    s.0.swap(iy, iz);
                    (s, c.clone())
                })
                .collect(),
        })
    }

    /// `v -> -v`.
    pub fn negate_v(&self) -> Result<MultiPoly> {
        let idx = self.vars.index(Var::V)?;
        Ok(MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.0[idx] % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        })
    }

    /// Substitutes a value for one variable, keeping the variable set.
    pub fn partial_eval(&self, var: Var, value: &Rational) -> Result<MultiPoly> {
        let idx = self.vars.index(var)?;
        let mut out = MultiPoly::zero(self.vars);
        for (m, c) in &self.terms {
            let mut mono = *m;
            let e = mono.0[idx];
            mono.0[idx] = 0;
            out.add_term(mono, c * pow_rational(value, e));
        }
        Ok(out)
    }

    /// Full evaluation. Every variable occurring in the polynomial needs a value.
    pub fn eval_at(&self, values: &[(Var, Rational)]) -> Result<Rational> {
        let mut p = self.clone();
        for (var, value) in values {
            p = p.partial_eval(*var, value)?;
        }
        for m in p.terms.keys() {
            if let Some(i) = m.0.iter().position(|&e| e > 0) {
                return Err(Error::Unassigned {
                    var: self.vars.vars()[i].name().into(),
                });
            }
        }
        Ok(p.coefficient(&[]))
    }

    /// Moves to a shorter variable list that is a prefix of the current one.
    /// Fails if a dropped variable actually occurs.
    pub fn restrict(&self, target: VarSet) -> Result<MultiPoly> {
        let mismatch = || Error::VariableMismatch {
            left: self.vars.to_string(),
            right: target.to_string(),
        };
        if !target.is_prefix_of(self.vars) {
            return Err(mismatch());
        }
        if self.terms.keys().any(|m| m.0[target.arity()..].iter().any(|&e| e > 0)) {
            return Err(mismatch());
        }
        Ok(MultiPoly {
            vars: target,
            terms: self.terms.clone(),
        })
    }

    /// Reinterprets over a longer variable list extending the current one.
    pub fn extend(&self, target: VarSet) -> Result<MultiPoly> {
        if !self.vars.is_prefix_of(target) {
            return Err(Error::VariableMismatch {
                left: self.vars.to_string(),
                right: target.to_string(),
            });
        }
        Ok(MultiPoly {
            vars: target,
            terms: self.terms.clone(),
        })
    }

    /// Turns a full chromatic polynomial `C(q, y)` of a graph with `k` edges
    /// into the Potts polynomial `(v + 1)^k C(q, 1 / (v + 1))`: each
    /// `q^s y^i` becomes `q^s (v + 1)^(k - i)`.
    pub fn potts_substitute(&self, k: usize) -> Result<MultiPoly> {
        if self.vars != VarSet::QY {
            return Err(Error::VariableMismatch {
                left: self.vars.to_string(),
                right: VarSet::QY.to_string(),
            });
        }
        let degree = self.degree_in(Var::Y)?;
        if degree as usize > k {
            return Err(Error::DegreeTooHigh { degree, k });
        }
        let v_plus_one = MultiPoly::var(VarSet::QV, Var::V)? + MultiPoly::one(VarSet::QV);
        let powers: Vec<MultiPoly> = (0..=k as u32).map(|e| v_plus_one.pow(e)).collect();
        let mut out = MultiPoly::zero(VarSet::QV);
        for (m, c) in &self.terms {
            let q_part = MultiPoly::term(VarSet::QV, &[m.0[0], 0], c.clone())?;
            out.add_assign_ref(&(&q_part * &powers[k - m.0[1] as usize]));
        }
        Ok(out)
    }

    /// Parses the canonical text form over the given variables.
    pub fn parse(text: &str, vars: VarSet) -> Result<MultiPoly> {
        PolyParser {
            s: text.as_bytes(),
            pos: 0,
            vars,
        }
        .parse()
    }
}

fn pow_rational(base: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= base;
    }
    out
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.try_add(&rhs).expect("adding polynomials")
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("adding polynomials")
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("subtracting polynomials")
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("multiplying polynomials")
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Interpolates in `q` through `(q_j, P_j)` pairs, where each `P_j` is free
/// of `q`. The first `degree + 1` points determine the result; any further
/// points must agree with it.
pub fn interpolate_q(points: &[(i64, MultiPoly)], degree: usize) -> Result<MultiPoly> {
    let need = degree + 1;
    if points.len() < need {
        return Err(Error::Interpolation(format!(
            "{} points cannot determine a polynomial of degree {degree}",
            points.len()
        )));
    }
    let vars = points[0].1.vars();
    let mut seen = BTreeSet::new();
    for (x, p) in points {
        p.same_vars(&points[0].1)?;
        if !seen.insert(*x) {
            return Err(Error::Interpolation(format!("node q={x} given twice")));
        }
        if p.terms.keys().any(|m| m.0[0] > 0) {
            return Err(Error::Interpolation(format!("value at q={x} depends on q")));
        }
    }

    let nodes: Vec<i64> = points[..need].iter().map(|(x, _)| *x).collect();
    let basis = lagrange_basis(&nodes);
    let monomials: BTreeSet<Monomial> = points[..need]
        .iter()
        .flat_map(|(_, p)| p.terms.keys().copied())
        .collect();

    let mut out = MultiPoly::zero(vars);
    for m in monomials {
        for (j, (_, p)) in points[..need].iter().enumerate() {
            let Some(value) = p.terms.get(&m) else { continue };
            for (s, b) in basis[j].iter().enumerate() {
                let mut mono = m;
                mono.0[0] = s as u32;
                out.add_term(mono, value * b);
            }
        }
    }

    for (x, p) in &points[need..] {
        let at = out.partial_eval(Var::Q, &rat(*x))?;
        if &at != p {
            return Err(Error::Interpolation(format!(
                "extra node q={x} disagrees with the degree-{degree} interpolant: expected {p}, got {at}"
            )));
        }
    }
    Ok(out)
}

/// Coefficients (ascending powers) of each Lagrange basis polynomial.
fn lagrange_basis(nodes: &[i64]) -> Vec<Vec<Rational>> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let mut coeffs = vec![rat(1)];
            let mut denom = rat(1);
            for (m, &xm) in nodes.iter().enumerate() {
                if m == j {
                    continue;
                }
                // multiply by (q - xm)
                let mut next = vec![Rational::zero(); coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * rat(xm);
                }
                coeffs = next;
                denom *= rat(xj - xm);
            }
            coeffs.into_iter().map(|c| c / &denom).collect()
        })
        .collect()
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: VarSet, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, var) in vars.vars().iter().enumerate() {
        let e = m.0[i];
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(var.name())?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, self.vars, m)?;
            }
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: VarSet,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.vars);
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return Err(Error::parse(self.pos, "empty polynomial")),
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negative { -c } else { c });
            match self.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(ch) => {
                    return Err(Error::parse(self.pos, format!("unexpected `{}`", ch as char)))
                }
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::default();
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let num = self.integer()?;
                    let value = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let at = self.pos;
                        let den = self.integer()?;
                        if den.is_zero() {
                            return Err(Error::parse(at, "zero denominator"));
                        }
                        Rational::new(num, den)
                    } else {
                        Rational::from_integer(num)
                    };
                    coeff *= value;
                }
                Some(ch) if ch.is_ascii_alphabetic() => {
                    let at = self.pos;
                    self.pos += 1;
                    let name = (ch as char).to_string();
                    let idx = Var::from_name(&name)
                        .and_then(|v| self.vars.index_of(v))
                        .ok_or_else(|| {
                            Error::parse(at, format!("unknown variable `{name}` for {}", self.vars))
                        })?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let at = self.pos;
                        e = self
                            .integer()?
                            .try_into()
                            .map_err(|_| Error::parse(at, "exponent too large"))?;
                    }
                    mono.0[idx] += e;
                }
                _ => return Err(Error::parse(self.pos, "expected a coefficient or a variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((mono, coeff));
            }
        }
    }
}

/// Prints `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::parse(0, format!("`{s}` is not a rational number"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    coefficient: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    variables: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let arity = self.vars.arity();
        PolyJson {
            variables: self.vars.vars().iter().map(|v| v.name().to_string()).collect(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    exponents: m.0[..arity].to_vec(),
                    coefficient: format_rational(c),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(deserializer)?;
        let vars: Vec<Var> = raw
            .variables
            .iter()
            .map(|s| Var::from_name(s).ok_or_else(|| D::Error::custom(format!("unknown variable {s}"))))
            .collect::<std::result::Result<_, _>>()?;
        let vars = VarSet::from_vars(&vars)
            .ok_or_else(|| D::Error::custom(format!("unsupported variables {:?}", raw.variables)))?;
        let mut p = MultiPoly::zero(vars);
        for t in raw.terms {
            if t.exponents.len() != vars.arity() {
                return Err(D::Error::custom("exponent vector has the wrong length"));
            }
            let c = parse_rational(&t.coefficient).map_err(D::Error::custom)?;
            p.add_term(Monomial::new(&t.exponents), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, vars: VarSet) -> MultiPoly {
        MultiPoly::parse(s, vars).unwrap()
    }

    fn qyz(s: &str) -> MultiPoly {
        p(s, VarSet::QYZ)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(qyz("q + y") + qyz("q - y"), qyz("2*q"));
        assert_eq!(qyz("y + z") * qyz("y - z"), qyz("y^2 - z^2"));
        assert!(qyz("q").scale(&rat(0)).is_zero());
        assert!(qyz("q").try_add(&p("q", VarSet::QV)).is_err());
    }

    #[test]
    fn truncation_examples() {
        let b = qyz("q + 1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z");
        assert_eq!(b.truncate_top(1), qyz("1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z"));
        assert_eq!(b.truncate_top(0), qyz("q"));
        assert!(qyz("q^3*y*z^2").truncate_top(2).is_zero());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(qyz("y + z").shift_yz().unwrap(), qyz("y + z - 2"));
        assert_eq!(qyz("q").shift_yz().unwrap(), qyz("q"));
        assert_eq!(qyz("y*z").shift_yz().unwrap(), qyz("y*z - y - z + 1"));
        assert_eq!(qyz("y^3").shift_yz().unwrap(), qyz("y^3 - 3*y^2 + 3*y - 1"));
        assert!(p("q", VarSet::QV).shift_yz().is_err());
    }

    #[test]
    fn substitution_examples() {
        let qv = |s| p(s, VarSet::QV);
        assert_eq!(qv("q^2 + q*v").negate_v().unwrap(), qv("q^2 - q*v"));
        let b = qyz("q + 1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z");
        let at = b.partial_eval(Var::Y, &rat(0)).unwrap().partial_eval(Var::Z, &rat(1)).unwrap();
        assert_eq!(at, qyz("q + 1/2*q^2 - 1/2*q"));
        assert_eq!(qyz("q^2").eval_at(&[(Var::Q, rat(-1))]).unwrap(), rat(1));
        assert!(matches!(qyz("q*y").eval_at(&[(Var::Q, rat(2))]), Err(Error::Unassigned { .. })));
        assert!(matches!(
            qyz("q").partial_eval(Var::V, &rat(1)),
            Err(Error::UnknownVariable { .. })
        ));
    }

    #[test]
    fn interpolation_examples() {
        let c = |x: i64| MultiPoly::int(VarSet::Q, x);
        let sq = interpolate_q(&[(1, c(1)), (2, c(4)), (3, c(9))], 2).unwrap();
        assert_eq!(sq, p("q^2", VarSet::Q));
        let k = interpolate_q(&[(1, c(5)), (2, c(5)), (3, c(5)), (4, c(5))], 2).unwrap();
        assert_eq!(k, c(5));
        // extra node inconsistent with degree 1
        let err = interpolate_q(&[(1, c(1)), (2, c(4)), (3, c(9))], 1).unwrap_err();
        assert!(matches!(err, Error::Interpolation(_)));
        assert!(interpolate_q(&[(1, c(1))], 1).is_err());
        assert!(interpolate_q(&[(1, c(1)), (1, c(1))], 1).is_err());
    }

    #[test]
    fn interpolation_of_polynomial_values() {
        // The 2-vertex single-edge coloring sums at q = 1, 2, 3: 1, 2+y+z, 3+3y+3z.
        let pts = [(1, qyz("1")), (2, qyz("2 + y + z")), (3, qyz("3 + 3*y + 3*z"))];
        let b = interpolate_q(&pts, 2).unwrap();
        assert_eq!(b, qyz("q + 1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z"));
    }

    #[test]
    fn potts_substitution_examples() {
        let qy = |s| p(s, VarSet::QY);
        let qv = |s| p(s, VarSet::QV);
        assert_eq!(qy("q + q^2*y - q*y").potts_substitute(1).unwrap(), qv("q^2 + q*v"));
        assert_eq!(qy("q^3").potts_substitute(0).unwrap(), qv("q^3"));
        assert!(matches!(
            qy("q*y^2").potts_substitute(1),
            Err(Error::DegreeTooHigh { degree: 2, k: 1 })
        ));
        // at v = 0 the substitution agrees with C at y = 1
        let c = qy("q + 2*q^2*y - 3*q*y^2 + q^3*y^2");
        let z = c.potts_substitute(2).unwrap().partial_eval(Var::V, &rat(0)).unwrap();
        let at1 = c.partial_eval(Var::Y, &rat(1)).unwrap();
        assert_eq!(z.restrict(VarSet::Q).unwrap(), at1.restrict(VarSet::Q).unwrap());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("q*v + q^2", VarSet::QV).to_string(), "q^2 + q*v");
        assert_eq!(
            qyz("q + 1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z").to_string(),
            "1/2*q^2*y + 1/2*q^2*z - 1/2*q*y - 1/2*q*z + q"
        );
        assert_eq!(qyz("-1").to_string(), "-1");
        assert_eq!(MultiPoly::zero(VarSet::Q).to_string(), "0");
        assert_eq!(qyz("2*3/4*q").to_string(), "3/2*q");
        assert!(matches!(
            MultiPoly::parse("q + w", VarSet::QYZ),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(MultiPoly::parse("", VarSet::Q).is_err());
        assert!(MultiPoly::parse("q +", VarSet::Q).is_err());
        assert!(MultiPoly::parse("1/0", VarSet::Q).is_err());
    }

    #[test]
    fn json_form() {
        let b = p("q^2 + q*v", VarSet::QV);
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(
            json,
            r#"{"variables":["q","v"],"terms":[{"exponents":[2,0],"coefficient":"1"},{"exponents":[1,1],"coefficient":"1"}]}"#
        );
        let back: MultiPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
        let half = qyz("-1/2*q*y");
        let back: MultiPoly = serde_json::from_str(&serde_json::to_string(&half).unwrap()).unwrap();
        assert_eq!(back, half);
    }

    #[test]
    fn restrict_and_extend() {
        let a = qyz("q^2 - 1");
        assert_eq!(a.restrict(VarSet::Q).unwrap().extend(VarSet::QYZ).unwrap(), a);
        assert!(qyz("q*z").restrict(VarSet::QY).is_err());
        assert!(a.restrict(VarSet::QV).is_err());
    }

    #[test]
    fn small_helpers() {
        assert_eq!(factorial(4), rat(24));
        assert_eq!(factorial(0), rat(1));
        assert_eq!(sign_pow(3), rat(-1));
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert!(parse_rational("x").is_err());
    }
}
