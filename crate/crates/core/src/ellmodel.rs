//! Weierstrass model `y² = x³ + Ax + B` with functions graded by their pole
//! order at the point at infinity `O`.
//!
//! `H⁰(L(kO))` has basis `x^a·y^b` with `2a + 3b ≤ k`, `b ≤ 1`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactfield::{CycloField, CycloScalar};
use crate::linear::{ExactMatrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllError {
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    Singular,
    #[error("function is not in the image of the multiplication map")]
    NotInImage,
    #[error("function has pole order {order} above the bound {bound}")]
    PoleOrderTooLarge { order: u32, bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: BigRational,
    b: BigRational,
}

impl WeierstrassCurve {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self, EllError> {
        let c = WeierstrassCurve { a, b };
        if c.discriminant().is_zero() {
            return Err(EllError::Singular);
        }
        Ok(c)
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, EllError> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// `4A³ + 27B²`.
    pub fn discriminant(&self) -> BigRational {
        let four = BigRational::from_integer(4.into());
        let tw7 = BigRational::from_integer(27.into());
        four * &self.a * &self.a * &self.a + tw7 * &self.b * &self.b
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})*x + ({})", self.a, self.b)
    }
}

/// `x^a · y^b` with `b ≤ 1`. Ordered by pole order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PoleMonomial {
    pub x: u32,
    pub y: u32,
}

impl PoleMonomial {
    pub fn pole_order(&self) -> u32 {
        2 * self.x + 3 * self.y
    }
}

impl Ord for PoleMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pole_order().cmp(&other.pole_order()).then(self.y.cmp(&other.y))
    }
}

impl PartialOrd for PoleMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PoleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (0, 0) => write!(f, "1"),
            (0, _) => write!(f, "y"),
            (1, 0) => write!(f, "x"),
            (a, 0) => write!(f, "x^{a}"),
            (1, _) => write!(f, "x*y"),
            (a, _) => write!(f, "x^{a}*y"),
        }
    }
}

/// Basis of `H⁰(L(kO))`, ordered by pole order.
pub fn pole_basis(_curve: &WeierstrassCurve, k: u32) -> Vec<PoleMonomial> {
    (0..=k)
        .filter_map(|p| match p {
            1 => None,
            p if p % 2 == 0 => Some(PoleMonomial { x: p / 2, y: 0 }),
            p => Some(PoleMonomial { x: (p - 3) / 2, y: 1 }),
        })
        .collect()
}

/// A regular function on the affine curve, kept reduced (`y`-degree ≤ 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionElement {
    terms: BTreeMap<PoleMonomial, BigRational>,
}

impl FunctionElement {
    pub fn zero() -> Self {
        FunctionElement { terms: BTreeMap::new() }
    }

    pub fn monomial(m: PoleMonomial) -> Self {
        assert!(m.y <= 1, "unreduced monomial");
        Self::term(m, BigRational::one())
    }

    pub fn term(m: PoleMonomial, c: BigRational) -> Self {
        let mut f = Self::zero();
        f.add_term(m, c);
        f
    }

    pub fn x() -> Self {
        Self::monomial(PoleMonomial { x: 1, y: 0 })
    }

    pub fn y() -> Self {
        Self::monomial(PoleMonomial { x: 0, y: 1 })
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(PoleMonomial { x: 0, y: 0 }, c)
    }

    fn add_term(&mut self, m: PoleMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<PoleMonomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pole_order(&self) -> Option<u32> {
        self.terms.keys().next_back().map(PoleMonomial::pole_order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Coordinates in `pole_basis(k)`.
    pub fn coordinates(&self, curve: &WeierstrassCurve, k: u32) -> Result<Vec<BigRational>, EllError> {
        if let Some(order) = self.pole_order().filter(|&o| o > k) {
            return Err(EllError::PoleOrderTooLarge { order, bound: k });
        }
        Ok(pole_basis(curve, k).iter().map(|m| self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)).collect())
    }

    pub fn from_coordinates(curve: &WeierstrassCurve, k: u32, coords: &[BigRational]) -> Self {
        let mut out = Self::zero();
        for (m, c) in pole_basis(curve, k).into_iter().zip(coords) {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl fmt::Display for FunctionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_one = m.x == 0 && m.y == 0;
            if mag.is_one() && !is_one {
                write!(f, "{m}")?;
            } else if is_one {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Product of two reduced functions, re-reduced with `y² = x³ + Ax + B`.
pub fn ell_multiply(curve: &WeierstrassCurve, f: &FunctionElement, g: &FunctionElement) -> FunctionElement {
    let mut out = FunctionElement::zero();
    for (m1, c1) in &f.terms {
        for (m2, c2) in &g.terms {
            let c = c1 * c2;
            let x = m1.x + m2.x;
            match m1.y + m2.y {
                2 => {
                    out.add_term(PoleMonomial { x: x + 3, y: 0 }, c.clone());
                    out.add_term(PoleMonomial { x: x + 1, y: 0 }, &c * &curve.a);
                    out.add_term(PoleMonomial { x, y: 0 }, c * &curve.b);
                }
                y => out.add_term(PoleMonomial { x, y }, c),
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllImageReport {
    pub source: Vec<PoleMonomial>,
    pub target: Vec<PoleMonomial>,
    pub image_dim: usize,
    pub image_basis: Vec<FunctionElement>,
    /// Basis monomials complementing the image.
    pub cokernel: Vec<PoleMonomial>,
}

impl EllImageReport {
    pub fn target_dim(&self) -> usize {
        self.target.len()
    }

    pub fn surjective(&self) -> bool {
        self.cokernel.is_empty()
    }
}

fn to_scalars(q: &std::sync::Arc<CycloField>, v: Vec<BigRational>) -> Vec<CycloScalar> {
    v.into_iter().map(|c| CycloScalar::from_rational(q, c)).collect()
}

fn from_scalars(v: &[CycloScalar]) -> Vec<BigRational> {
    v.iter().map(|c| c.as_rational().expect("rational").clone()).collect()
}

fn products(curve: &WeierstrassCurve, k: u32, m: u32) -> Vec<(Vec<PoleMonomial>, FunctionElement)> {
    pole_basis(curve, k)
        .into_iter()
        .combinations_with_replacement(m as usize)
        .map(|combo| {
            let prod = combo.iter().fold(FunctionElement::constant(BigRational::one()), |acc, &b| {
                ell_multiply(curve, &acc, &FunctionElement::monomial(b))
            });
            (combo, prod)
        })
        .collect()
}

/// Image of `H⁰(L(kO))^{⊗m} → H⁰(L(mkO))`.
pub fn multmap_image_ell(curve: &WeierstrassCurve, k: u32, m: u32) -> EllImageReport {
    let q = CycloField::rationals();
    let target = pole_basis(curve, m * k);
    let vectors = products(curve, k, m)
        .into_iter()
        .map(|(_, p)| to_scalars(&q, p.coordinates(curve, m * k).expect("pole order adds")))
        .collect();
    let image = Subspace::span(&q, target.len(), vectors);
    let image_basis = (0..image.dim())
        .map(|i| FunctionElement::from_coordinates(curve, m * k, &from_scalars(image.basis().row(i))))
        .collect();
    let cokernel = image.non_pivots().into_iter().map(|j| target[j]).collect();
    EllImageReport { source: pole_basis(curve, k), target, image_dim: image.dim(), image_basis, cokernel }
}

/// Writes `s` as a combination of `m`-fold products of basis functions of
/// pole order at most `k`, or reports [`EllError::NotInImage`].
pub fn decompose_ell(
    curve: &WeierstrassCurve,
    k: u32,
    m: u32,
    s: &FunctionElement,
) -> Result<Vec<(BigRational, Vec<PoleMonomial>)>, EllError> {
    let q = CycloField::rationals();
    let prods = products(curve, k, m);
    let columns: Vec<Vec<CycloScalar>> =
        prods.iter().map(|(_, p)| to_scalars(&q, p.coordinates(curve, m * k).expect("pole order adds"))).collect();
    let target_dim = pole_basis(curve, m * k).len();
    let a = ExactMatrix::from_rows(&q, target_dim, columns).transpose();
    let b = to_scalars(&q, s.coordinates(curve, m * k)?);
    let x = a.solve(&b).expect("dimensions agree").ok_or(EllError::NotInImage)?;
    Ok(prods
        .into_iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|((combo, _), c)| (c.as_rational().expect("rational").clone(), combo))
        .collect())
}

/// `L(kO)` is globally generated: some section is a unit away from `O`
/// (the constant `1`) and some section has its full pole at `O`.
pub fn globally_generated(curve: &WeierstrassCurve, k: u32) -> bool {
    let basis = pole_basis(curve, k);
    basis.contains(&PoleMonomial { x: 0, y: 0 }) && basis.iter().any(|m| m.pole_order() == k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn curves() -> Vec<WeierstrassCurve> {
        [(0, 1), (1, 0), (-1, 1), (2, -3), (-4, 5), (7, 11)]
            .iter()
            .map(|&(a, b)| WeierstrassCurve::from_ints(a, b).unwrap())
            .collect()
    }

    #[test]
    fn singular_curves_rejected() {
        assert_eq!(WeierstrassCurve::from_ints(0, 0), Err(EllError::Singular));
        assert_eq!(WeierstrassCurve::from_ints(-3, 2), Err(EllError::Singular));
    }

    #[test]
    fn pole_basis_examples() {
        let c = WeierstrassCurve::from_ints(0, 1).unwrap();
        let show = |k| pole_basis(&c, k).iter().map(|m| m.to_string()).collect::<Vec<_>>();
        assert_eq!(show(0), ["1"]);
        assert_eq!(show(2), ["1", "x"]);
        assert_eq!(show(4), ["1", "x", "y", "x^2"]);
        for k in 1..30 {
            assert_eq!(pole_basis(&c, k).len(), k as usize);
        }
    }

    #[test]
    fn multiplication_reduces() {
        let c = WeierstrassCurve::from_ints(2, 5).unwrap();
        let yy = ell_multiply(&c, &FunctionElement::y(), &FunctionElement::y());
        assert_eq!(yy.to_string(), "x^3 + 2*x + 5");
        let xx = ell_multiply(&c, &FunctionElement::x(), &FunctionElement::x());
        assert_eq!(xx.to_string(), "x^2");
        let s = FunctionElement::x().add(&FunctionElement::y());
        let p = ell_multiply(&c, &s, &FunctionElement::y());
        assert_eq!(p.to_string(), "x^3 + x*y + 2*x + 5");
    }

    #[test]
    fn degree_two_is_not_normally_generated() {
        for c in curves() {
            let r = multmap_image_ell(&c, 2, 2);
            assert_eq!((r.image_dim, r.target_dim()), (3, 4));
            assert_eq!(r.cokernel, vec![PoleMonomial { x: 0, y: 1 }]);
            assert!(globally_generated(&c, 2));
            let s = FunctionElement::y().add(&FunctionElement::x().scale(&rat(3)));
            assert_eq!(decompose_ell(&c, 2, 2, &s), Err(EllError::NotInImage));
        }
    }

    #[test]
    fn other_degrees() {
        let c = WeierstrassCurve::from_ints(-1, 1).unwrap();
        let r = multmap_image_ell(&c, 2, 1);
        assert_eq!((r.image_dim, r.target_dim()), (2, 2));
        let r = multmap_image_ell(&c, 3, 2);
        assert_eq!((r.image_dim, r.target_dim()), (6, 6));
        assert!(!globally_generated(&c, 1));
    }

    #[test]
    fn decomposition_round_trip() {
        let c = WeierstrassCurve::from_ints(3, -2).unwrap();
        let x2 = ell_multiply(&c, &FunctionElement::x(), &FunctionElement::x());
        let s = x2.add(&FunctionElement::constant(rat(-7))).add(&FunctionElement::x());
        let dec = decompose_ell(&c, 2, 2, &s).unwrap();
        let mut back = FunctionElement::zero();
        for (coef, combo) in dec {
            let prod = combo
                .iter()
                .fold(FunctionElement::constant(coef), |acc, &m| ell_multiply(&c, &acc, &FunctionElement::monomial(m)));
            back = back.add(&prod);
        }
        assert_eq!(back, s);
        assert!(matches!(
            decompose_ell(&c, 2, 2, &ell_multiply(&c, &x2, &FunctionElement::x())),
            Err(EllError::PoleOrderTooLarge { order: 6, bound: 4 })
        ));
    }
}
