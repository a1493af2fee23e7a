//! Sparse multivariate polynomials over Q(ζ_d) in the projective coordinates
//! `x0..xN`, optionally extended by a fiber variable `T`.
//!
//! `T` is an ordinary commuting variable carrying weight `n`, so that an entry
//! `α·T + g(x)` with `deg g = n` is homogeneous of weight `n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use thiserror::Error;

use crate::exactfield::{CycloField, CycloScalar, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("incompatible polynomial rings: {0} vs {1}")]
    ShapeMismatch(String, String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not homogeneous{}", expected.map(|d| format!(" of degree {d}")).unwrap_or_default())]
    NonHomogeneous { expected: Option<u32> },
}

/// Exponent vector. The `T` exponent, when present, is the last entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// All exponent vectors of `num_vars` variables summing to `n`, in
/// graded-lexicographic order (`x0^n` first).
pub fn monomials_of_degree(num_vars: usize, n: u32) -> Vec<Monomial> {
    fn rec(rest: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rest == 1 {
            prefix.push(n);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=n).rev() {
            prefix.push(e);
            rec(rest - 1, n - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if num_vars == 0 {
        if n == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(num_vars, n, &mut Vec::with_capacity(num_vars), &mut out);
    out
}

/// Ambient ring: coefficient field, number of `x` variables and the weight of
/// `T` (absent when `None`).
#[derive(Clone, Debug)]
pub struct PolyRing {
    field: Arc<CycloField>,
    num_vars: usize,
    t_weight: Option<u32>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.num_vars == other.num_vars && self.t_weight == other.t_weight
    }
}

impl Eq for PolyRing {}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ{})[x0..x{}", self.field.order(), self.num_vars.saturating_sub(1))?;
        if let Some(w) = self.t_weight {
            write!(f, ", T:{w}")?;
        }
        write!(f, "]")
    }
}

impl PolyRing {
    pub fn new(field: Arc<CycloField>, num_vars: usize) -> Self {
        PolyRing { field, num_vars, t_weight: None }
    }

    /// Rational ring in `num_vars` coordinates.
    pub fn rational(num_vars: usize) -> Self {
        Self::new(CycloField::rationals(), num_vars)
    }

    /// Same coordinates and field, plus `T` of the given weight.
    pub fn with_t(&self, weight: u32) -> Self {
        PolyRing { t_weight: Some(weight), ..self.clone() }
    }

    pub fn without_t(&self) -> Self {
        PolyRing { t_weight: None, ..self.clone() }
    }

    pub fn with_field(&self, field: &Arc<CycloField>) -> Self {
        PolyRing { field: field.clone(), ..self.clone() }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn has_t(&self) -> bool {
        self.t_weight.is_some()
    }

    pub fn t_weight(&self) -> Option<u32> {
        self.t_weight
    }

    fn exp_len(&self) -> usize {
        self.num_vars + usize::from(self.has_t())
    }

    pub fn weighted_degree(&self, m: &Monomial) -> u32 {
        let x: u32 = m.0[..self.num_vars].iter().sum();
        match self.t_weight {
            Some(w) => x + w * m.0[self.num_vars],
            None => x,
        }
    }

    /// Canonical term order: weighted degree descending, then `T` exponent
    /// descending, then `x0, x1, …` exponents lexicographically descending.
    pub fn term_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let deg = self.weighted_degree(b).cmp(&self.weighted_degree(a));
        let t = if self.has_t() { b.0[self.num_vars].cmp(&a.0[self.num_vars]) } else { Ordering::Equal };
        deg.then(t).then_with(|| b.0[..self.num_vars].cmp(&a.0[..self.num_vars]))
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(&self, c: CycloScalar) -> MultiPoly {
        self.term(Monomial::one(self.exp_len()), c)
    }

    pub fn one(&self) -> MultiPoly {
        self.constant(CycloScalar::one(&self.field))
    }

    pub fn int(&self, n: i64) -> MultiPoly {
        self.constant(CycloScalar::from_int(&self.field, n))
    }

    /// `c · m`; `m` must have this ring's exponent length.
    pub fn term(&self, m: Monomial, c: CycloScalar) -> MultiPoly {
        assert_eq!(m.0.len(), self.exp_len(), "monomial length does not match ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { ring: self.clone(), terms }
    }

    /// The monomial `x^e` (in the `x` variables only) with coefficient one.
    pub fn monomial(&self, x_exps: &[u32]) -> MultiPoly {
        assert_eq!(x_exps.len(), self.num_vars);
        let mut e = x_exps.to_vec();
        if self.has_t() {
            e.push(0);
        }
        self.term(Monomial(e), CycloScalar::one(&self.field))
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        assert!(i < self.num_vars, "variable x{i} out of range");
        let mut e = vec![0; self.exp_len()];
        e[i] = 1;
        self.term(Monomial(e), CycloScalar::one(&self.field))
    }

    /// The fiber variable `T`. Panics when the ring has none.
    pub fn t(&self) -> MultiPoly {
        assert!(self.has_t(), "ring has no T variable");
        let mut e = vec![0; self.exp_len()];
        e[self.num_vars] = 1;
        self.term(Monomial(e), CycloScalar::one(&self.field))
    }

    pub fn parse(&self, text: &str) -> Result<MultiPoly, PolyError> {
        PolyParser::new(text, self).parse()
    }

    /// Parses and requires a homogeneous result (of `degree`, when given).
    /// The zero polynomial is accepted in every degree.
    pub fn parse_homogeneous(&self, text: &str, degree: Option<u32>) -> Result<MultiPoly, PolyError> {
        let p = self.parse(text)?;
        p.require_homogeneous(degree)?;
        Ok(p)
    }

    /// Random homogeneous polynomial of the given `x`-degree with integer
    /// coefficients in `-bound..=bound`.
    pub fn random_form<R: Rng + ?Sized>(&self, degree: u32, bound: i64, rng: &mut R) -> MultiPoly {
        let mut p = self.zero();
        for m in monomials_of_degree(self.num_vars, degree) {
            let c = rng.gen_range(-bound..=bound);
            if c != 0 {
                p = p + self.monomial(&m.0).scale(&CycloScalar::from_int(&self.field, c));
            }
        }
        p
    }
}

/// A polynomial together with its ring. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, CycloScalar>,
}

impl MultiPoly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CycloScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> CycloScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| CycloScalar::zero(self.ring.field()))
    }

    /// Terms in canonical order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &CycloScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.term_cmp(a.0, b.0));
        v
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::ShapeMismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_assign_unchecked(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(existing) => {
                    existing.add_assign_unchecked(c);
                    if existing.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }

    /// `self += a * b` without allocating the intermediate product polynomial.
    pub(crate) fn add_product_assign(&mut self, a: &Self, b: &Self) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                let c = ca.mul_unchecked(cb);
                match self.terms.get_mut(&m) {
                    Some(existing) => {
                        existing.add_assign_unchecked(&c);
                        if existing.is_zero() {
                            self.terms.remove(&m);
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            self.terms.insert(m, c);
                        }
                    }
                }
            }
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = self.ring.zero();
        out.add_product_assign(self, other);
        out
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        if c.is_zero() {
            return self.ring.zero();
        }
        let c = c.embed(self.ring.field()).expect("scalar from a different field");
        let terms =
            self.terms.iter().map(|(m, x)| (m.clone(), x.mul_unchecked(&c))).filter(|(_, x)| !x.is_zero()).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Highest weighted degree among the terms; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.weighted_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| self.ring.weighted_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn require_homogeneous(&self, degree: Option<u32>) -> Result<(), PolyError> {
        let ok = self.is_homogeneous()
            && match (degree, self.degree()) {
                (Some(want), Some(have)) => want == have,
                _ => true,
            };
        if ok {
            Ok(())
        } else {
            Err(PolyError::NonHomogeneous { expected: degree })
        }
    }

    /// Coefficient of `T^1` and the `T`-free part, when the polynomial is
    /// affine-linear in `T`. `None` if some term has `T`-degree above one.
    pub fn split_linear_t(&self) -> Option<(CycloScalar, MultiPoly)> {
        let nv = self.ring.num_vars;
        if !self.ring.has_t() {
            return Some((CycloScalar::zero(self.ring.field()), self.clone()));
        }
        let mut alpha = CycloScalar::zero(self.ring.field());
        let mut rest = self.ring.zero();
        for (m, c) in &self.terms {
            match m.0[nv] {
                0 => {
                    rest.terms.insert(m.clone(), c.clone());
                }
                1 if m.0[..nv].iter().all(|&e| e == 0) => alpha = c.clone(),
                _ => return None,
            }
        }
        Some((alpha, rest))
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            let c2 = c.scale(&BigRational::from_integer(BigInt::from(e)));
            out.terms.insert(m2, c2);
        }
        out
    }

    /// Evaluates at `x = point` (and `T = t` when the ring has `T`).
    pub fn eval(&self, point: &[CycloScalar], t: Option<&CycloScalar>) -> CycloScalar {
        let field = self.ring.field();
        let mut acc = CycloScalar::zero(field);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i < self.ring.num_vars { &point[i] } else { t.expect("T value required") };
                v = v.mul_unchecked(&base.pow(e as u64));
            }
            acc.add_assign_unchecked(&v);
        }
        acc
    }

    /// Moves coefficients into another field (rational polynomials embed
    /// everywhere).
    pub fn embed(&self, field: &Arc<CycloField>) -> Result<Self, PolyError> {
        let ring = self.ring.with_field(field);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.embed(field)?);
        }
        Ok(MultiPoly { ring, terms })
    }

    /// Re-homes a `T`-free polynomial into the ring with `T` of weight `w`.
    pub fn with_t(&self, w: u32) -> Self {
        if self.ring.has_t() {
            assert_eq!(self.ring.t_weight, Some(w), "T weight mismatch");
            return self.clone();
        }
        let ring = self.ring.with_t(w);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.push(0);
                (Monomial(e), c.clone())
            })
            .collect();
        MultiPoly { ring, terms }
    }

    /// Drops the `T` slot; panics when a term involves `T`.
    pub fn without_t(&self) -> Self {
        if !self.ring.has_t() {
            return self.clone();
        }
        let nv = self.ring.num_vars;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                assert_eq!(m.0[nv], 0, "polynomial involves T");
                (Monomial(m.0[..nv].to_vec()), c.clone())
            })
            .collect();
        MultiPoly { ring: self.ring.without_t(), terms }
    }
}

impl std::ops::Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self.check(&rhs).expect("adding polynomials from different rings");
        self.add_assign_unchecked(&rhs);
        self
    }
}

impl std::ops::Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self.check(&rhs).expect("subtracting polynomials from different rings");
        self.add_assign_unchecked(&rhs.neg());
        self
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("multiplying polynomials from different rings")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let nv = self.ring.num_vars;
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let (negative, mag) = match c.as_rational() {
                Some(q) if q < &BigRational::from_integer(0.into()) => (true, c.neg()),
                _ => (false, c.clone()),
            };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = m.0.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const {
                if mag.as_rational().is_some() {
                    factors.push(mag.to_string());
                } else {
                    factors.push(format!("({})", mag));
                }
            }
            if self.ring.has_t() {
                push_power(&mut factors, "T".to_string(), m.0[nv]);
            }
            for i in 0..nv {
                push_power(&mut factors, format!("x{i}"), m.0[i]);
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn push_power(out: &mut Vec<String>, name: String, e: u32) {
    match e {
        0 => {}
        1 => out.push(name),
        _ => out.push(format!("{name}^{e}")),
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

struct PolyParser<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    idx: usize,
    ring: &'a PolyRing,
}

impl<'a> PolyParser<'a> {
    fn new(text: &'a str, ring: &'a PolyRing) -> Self {
        PolyParser { text, chars: text.char_indices().collect(), idx: 0, ring }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map(|c| c.0).unwrap_or(self.text.len())
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse { pos: self.pos(), msg: msg.into() }
    }

    fn peek(&mut self) -> Option<char> {
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if c.is_whitespace() {
                self.idx += 1;
            } else {
                return Some(c);
            }
        }
        None
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.idx += 1;
                Some(false)
            }
            Some('-') | Some('−') => {
                self.idx += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn parse(mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.ring.zero();
        let mut negative = self.sign().unwrap_or(false);
        loop {
            let mut t = self.term()?;
            if negative {
                t = t.neg();
            }
            acc.add_assign_unchecked(&t);
            match self.sign() {
                Some(s) => negative = s,
                None => break,
            }
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected character"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.idx += 1;
            let f = self.factor()?;
            acc = acc.mul_unchecked(&f);
        }
        Ok(acc)
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.peek();
        let start = self.idx;
        while self.chars.get(self.idx).is_some_and(|c| c.1.is_ascii_digit()) {
            self.idx += 1;
        }
        if start == self.idx {
            return Err(self.err("expected digits"));
        }
        let (a, b) = (self.chars[start].0, self.pos());
        Ok(self.text[a..b].parse().expect("digits"))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.idx += 1;
        let e = self.uint()?;
        u32::try_from(e).map_err(|_| self.err("exponent too large"))
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyError> {
        let field = self.ring.field().clone();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.peek() == Some('/') {
                    self.idx += 1;
                    let d = self.uint()?;
                    if d == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(self.ring.constant(CycloScalar::from_rational(&field, BigRational::new(num, den))))
            }
            Some('(') => {
                let open = self.idx;
                let close = (open..self.chars.len())
                    .find(|&k| self.chars[k].1 == ')')
                    .ok_or_else(|| self.err("unclosed '('"))?;
                let (a, b) = (self.chars[open].0 + 1, self.chars[close].0);
                let inner = self.text[a..b].replace('−', "-");
                let s = CycloScalar::parse(&inner, &field).map_err(|e| match e {
                    FieldError::Parse { pos, msg } => PolyError::Parse { pos: a + pos, msg },
                    other => PolyError::Field(other),
                })?;
                self.idx = close + 1;
                Ok(self.ring.constant(s))
            }
            Some('x') => {
                self.idx += 1;
                let i = self.uint()?;
                let i = usize::try_from(i).ok().filter(|&i| i < self.ring.num_vars);
                let i = i.ok_or_else(|| {
                    self.err(format!("variable index out of range (ring has {} coordinates)", self.ring.num_vars))
                })?;
                let e = self.exponent()?;
                Ok(self.ring.var(i).pow(e))
            }
            Some('T') => {
                if !self.ring.has_t() {
                    return Err(self.err("T is not available in this ring"));
                }
                self.idx += 1;
                let e = self.exponent()?;
                Ok(self.ring.t().pow(e))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn difference_of_squares() {
        let r = PolyRing::rational(2);
        let (x, y) = (r.var(0), r.var(1));
        let p = &(x.clone() + y.clone()) * &(x - y);
        assert_eq!(p.to_string(), "x0^2 - x1^2");
    }

    #[test]
    fn scaling_by_zero_annihilates() {
        let r = PolyRing::rational(2);
        let p = r.var(0).pow(2).scale(&CycloScalar::from_int(r.field(), 0));
        assert!(p.is_zero());
        assert!(p.terms().is_empty());
    }

    #[test]
    fn cube_sum_splits_over_eisenstein_field() {
        let f = CycloField::new(3).unwrap();
        let r = PolyRing::new(f.clone(), 2);
        let (x, y) = (r.var(0), r.var(1));
        let z = CycloScalar::zeta(&f);
        let l1 = x.clone() + y.scale(&z);
        let l2 = x.clone() + y.scale(&z.pow(2));
        let l3 = x + y;
        let p = &(&l1 * &l2) * &l3;
        assert_eq!(p, r.parse("x0^3 + x1^3").unwrap());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = PolyRing::rational(2).var(0);
        let b = PolyRing::rational(3).var(0);
        assert!(matches!(a.try_add(&b), Err(PolyError::ShapeMismatch(..))));
        let c = PolyRing::rational(2).with_t(1).t();
        assert!(matches!(a.try_mul(&c), Err(PolyError::ShapeMismatch(..))));
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials_of_degree(2, 2);
        assert_eq!(m, vec![Monomial(vec![2, 0]), Monomial(vec![1, 1]), Monomial(vec![0, 2])]);
        let m = monomials_of_degree(3, 1);
        assert_eq!(m, vec![Monomial(vec![1, 0, 0]), Monomial(vec![0, 1, 0]), Monomial(vec![0, 0, 1])]);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial(vec![0, 0])]);
    }

    #[test]
    fn monomial_counts_match_binomials() {
        fn binom(n: u64, k: u64) -> u64 {
            (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
        }
        for nv in 1..=5usize {
            for n in 0..=6u32 {
                let count = monomials_of_degree(nv, n).len() as u64;
                assert_eq!(count, binom(nv as u64 - 1 + n as u64, nv as u64 - 1));
            }
        }
    }

    #[test]
    fn parse_basic_and_errors() {
        let r = PolyRing::rational(3);
        let p = r.parse("x0^2 + 2*x1*x2").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.to_string(), "x0^2 + 2*x1*x2");
        match r.parse_homogeneous("x0 + x1^2", None) {
            Err(PolyError::NonHomogeneous { .. }) => {}
            other => panic!("expected NonHomogeneous, got {other:?}"),
        }
        assert!(r.parse_homogeneous("x0*x1", Some(3)).is_err());
        match r.parse("x0 + * x1") {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(r.parse("x3").is_err());
        assert!(r.parse("T").is_err());
        assert!(r.parse("1/0*x0").is_err());
    }

    #[test]
    fn parse_unicode_minus_and_cyclotomic_coefficients() {
        let f = CycloField::new(3).unwrap();
        let r = PolyRing::new(f.clone(), 2).with_t(1);
        let p = r.parse("T^3 − (1 + z)*x0^2*x1 - 1/2*x1^3").unwrap();
        assert_eq!(p.to_string(), "T^3 + (-1 - z)*x0^2*x1 - 1/2*x1^3");
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), Some(3));
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn t_weight_enters_degree() {
        let r = PolyRing::rational(2).with_t(2);
        let p = r.parse("T + x0*x1").unwrap();
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), Some(2));
        let (alpha, g) = p.split_linear_t().unwrap();
        assert!(alpha.is_one());
        assert_eq!(g.to_string(), "x0*x1");
        assert!(r.parse("T^2").unwrap().split_linear_t().is_none());
    }

    #[test]
    fn derivative_and_eval() {
        let r = PolyRing::rational(3);
        let p = r.parse("x0^3 + x0*x1*x2").unwrap();
        assert_eq!(p.derivative(0).to_string(), "3*x0^2 + x1*x2");
        let f = r.field();
        let pt: Vec<_> = [1, 2, 3].iter().map(|&v| CycloScalar::from_int(f, v)).collect();
        assert_eq!(p.eval(&pt, None), CycloScalar::from_int(f, 7));
    }

    #[test]
    fn parse_format_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = CycloField::new(5).unwrap();
        let r = PolyRing::new(f.clone(), 3).with_t(2);
        for _ in 0..100 {
            let mut p = r.zero();
            for _ in 0..rng.gen_range(0..6) {
                let e: Vec<u32> = (0..4).map(|_| rng.gen_range(0..3)).collect();
                let coeffs = (0..4)
                    .map(|_| BigRational::new(rng.gen_range(-9..10).into(), rng.gen_range(1..5).into()))
                    .collect();
                p = p + r.term(Monomial(e), CycloScalar::from_poly(&f, coeffs));
            }
            let text = p.to_string();
            let back = r.parse(&text).unwrap();
            assert_eq!(back, p, "{text}");
            assert_eq!(back.to_string(), text);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = MultiPoly> {
            prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..6), 0..5).prop_map(|ts| {
                let r = PolyRing::rational(3);
                ts.into_iter()
                    .fold(r.zero(), |acc, (e, c)| acc + r.term(Monomial(e), CycloScalar::from_int(r.field(), c)))
            })
        }

        fn form(deg: u32) -> impl Strategy<Value = MultiPoly> {
            prop::collection::vec(-4i64..5, monomials_of_degree(3, deg).len()).prop_map(move |cs| {
                let r = PolyRing::rational(3);
                monomials_of_degree(3, deg)
                    .into_iter()
                    .zip(cs)
                    .fold(r.zero(), |acc, (m, c)| acc + r.term(m, CycloScalar::from_int(r.field(), c)))
            })
        }

        proptest! {
            #[test]
            fn mul_commutes_and_associates(a in poly(), b in poly(), c in poly()) {
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            }

            #[test]
            fn degrees_add(a in form(2), b in form(3)) {
                prop_assume!(!a.is_zero() && !b.is_zero());
                let p = &a * &b;
                prop_assert!(p.is_homogeneous());
                prop_assert_eq!(p.degree(), Some(5));
            }
        }
    }
}
