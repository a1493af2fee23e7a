//! Exact arithmetic over Q and the cyclotomic fields Q(ζ_d) = Q[z]/Φ_d(z).
//!
//! A [`CycloField`] carries the modulus Φ_d and is shared between its
//! elements through an `Arc`. Elements ([`CycloScalar`]) are coordinate
//! vectors in the power basis `1, z, …, z^{φ(d)-1}`. Orders 1 and 2 give
//! plain Q with ζ = 1 and ζ = −1 respectively.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cyclotomic order must be at least 1")]
    ZeroOrder,
    #[error("field order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// The d-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Computed as `(z^d - 1) / ∏_{e | d, e < d} Φ_e(z)`.
pub fn cyclotomic_polynomial(d: u32) -> Vec<BigInt> {
    assert!(d >= 1, "cyclotomic_polynomial needs d >= 1");
    let d = d as usize;
    let mut numerator = vec![BigInt::zero(); d + 1];
    numerator[0] = BigInt::from(-1);
    numerator[d] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            numerator = div_exact_monic(&numerator, &cyclotomic_polynomial(e as u32));
        }
    }
    numerator
}

// Exact division by a monic integer polynomial whose quotient is known to be integral.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Euler's totient.
pub fn euler_phi(d: u32) -> u32 {
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The field Q(ζ_d).
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u32,
    /// Monic Φ_d, low degree first.
    modulus: Vec<BigRational>,
}

impl CycloField {
    pub fn new(order: u32) -> Result<Arc<Self>, FieldError> {
        if order == 0 {
            return Err(FieldError::ZeroOrder);
        }
        let modulus = cyclotomic_polynomial(order).into_iter().map(BigRational::from_integer).collect();
        Ok(Arc::new(CycloField { order, modulus }))
    }

    /// Q, represented as the order-1 cyclotomic field.
    pub fn rationals() -> Arc<Self> {
        Self::new(1).expect("order 1 is valid")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(d), the dimension over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }
}

/// An element of Q(ζ_d).
#[derive(Clone, PartialEq, Eq)]
pub struct CycloScalar {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl CycloScalar {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloScalar { field: field.clone(), coeffs: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Arc<CycloField>, q: BigRational) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(field: &Arc<CycloField>, p: i64, q: i64) -> Self {
        Self::from_rational(field, BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Builds an element from power-basis coordinates of any length; the
    /// polynomial is reduced modulo Φ_d.
    pub fn from_poly(field: &Arc<CycloField>, poly: Vec<BigRational>) -> Self {
        CycloScalar { field: field.clone(), coeffs: reduce_mod(poly, &field.modulus) }
    }

    /// ζ_d, the class of z.
    pub fn zeta(field: &Arc<CycloField>) -> Self {
        Self::from_poly(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// ζ_d^k for any integer k.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let d = field.order() as i64;
        let e = k.rem_euclid(d) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(field, poly)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Moves the element into `target`. Rational elements embed into every
    /// field; anything else needs the same order.
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<Self, FieldError> {
        if self.field.order == target.order {
            return Ok(CycloScalar { field: target.clone(), coeffs: self.coeffs.clone() });
        }
        match self.as_rational() {
            Some(q) => Ok(Self::from_rational(target, q.clone())),
            None => Err(FieldError::OrderMismatch(self.field.order, target.order)),
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field.order == other.field.order {
            Ok(())
        } else {
            Err(FieldError::OrderMismatch(self.field.order, other.field.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_d.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        // Invariant: s_k * a ≡ r_k (mod Φ).
        let mut r0 = self.field.modulus.clone();
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            debug_assert!(!r1.is_empty(), "Φ_d is irreducible, gcd must be a unit");
        }
        let c = r1[0].recip();
        let s: Vec<BigRational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::from_poly(&self.field, s))
    }

    pub fn neg(&self) -> Self {
        CycloScalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloScalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    // The `*_unchecked` forms assume equal orders; callers inside the crate
    // only combine scalars drawn from one ring.
    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field.order, other.field.order);
        CycloScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field.order, other.field.order);
        CycloScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field.order, other.field.order);
        if self.coeffs.len() == 1 {
            return CycloScalar { field: self.field.clone(), coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        Self::from_poly(&self.field, poly_mul(&self.coeffs, &other.coeffs))
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Parses the text form `c0 + c1*z + c2*z^2 + …` (coefficients `p` or
    /// `p/q`, optional surrounding parentheses).
    pub fn parse(text: &str, field: &Arc<CycloField>) -> Result<Self, FieldError> {
        let mut p = ScalarParser { src: text.as_bytes(), pos: 0 };
        p.skip_ws();
        let wrapped = p.eat(b'(');
        let value = p.sum(field)?;
        if wrapped && !p.eat(b')') {
            return Err(p.err("expected ')'"));
        }
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(value)
    }
}

impl fmt::Display for CycloScalar {
    /// Rational elements print as `p` or `p/q`; others as `c0 + c1*z + …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => write!(f, "z")?,
                (_, false) => write!(f, "{}*z", mag)?,
            }
            if k >= 2 {
                write!(f, "^{}", k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.field.order)
    }
}

struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ScalarParser<'_> {
    fn err(&self, msg: &str) -> FieldError {
        FieldError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn sum(&mut self, field: &Arc<CycloField>) -> Result<CycloScalar, FieldError> {
        let mut poly: Vec<BigRational> = vec![];
        let mut first = true;
        loop {
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                break;
            };
            first = false;
            let (c, k) = self.term()?;
            if poly.len() <= k {
                poly.resize(k + 1, BigRational::zero());
            }
            if negative {
                poly[k] -= c;
            } else {
                poly[k] += c;
            }
            self.skip_ws();
            if !matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                break;
            }
        }
        Ok(CycloScalar::from_poly(field, poly))
    }

    // coeff | coeff*z(^k)? | z(^k)?
    fn term(&mut self) -> Result<(BigRational, usize), FieldError> {
        let coeff = match self.uint() {
            Some(num) => {
                let den = if self.eat(b'/') {
                    let d = self.uint().ok_or_else(|| self.err("expected denominator"))?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                let c = BigRational::new(num, den);
                if !self.eat(b'*') {
                    return Ok((c, 0));
                }
                c
            }
            None => BigRational::one(),
        };
        if !self.eat(b'z') {
            return Err(self.err("expected number or 'z'"));
        }
        let k = if self.eat(b'^') {
            let e = self.uint().ok_or_else(|| self.err("expected exponent"))?;
            usize::try_from(e).map_err(|_| self.err("exponent too large"))?
        } else {
            1
        };
        Ok((coeff, k))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

/// Division with remainder; `b` must be trimmed and nonzero.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = &rem[rem.len() - 1] * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

// Reduce modulo a monic modulus; result has exactly deg(modulus) coordinates.
fn reduce_mod(mut p: Vec<BigRational>, modulus: &[BigRational]) -> Vec<BigRational> {
    let dm = modulus.len() - 1;
    while p.len() > dm {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = p.len() - dm;
        for (j, mj) in modulus[..dm].iter().enumerate() {
            p[k + j] -= &top * mj;
        }
    }
    p.resize(dm, BigRational::zero());
    p
}
