//! Graded pieces of the coordinate rings of P^N and of complete
//! intersections, computed degree by degree with linear algebra.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::exactfield::{CycloField, CycloScalar};
use crate::linear::{ExactMatrix, LinearError, Subspace};
use crate::polyring::{monomials_of_degree, Monomial, MultiPoly, PolyError, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("negative degree {0}")]
    DegreeNegative(i64),
    #[error("section is not in the image of the multiplication map")]
    NotInImage,
    #[error("degree mismatch: expected {expected}, got {got:?}")]
    DegreeMismatch { expected: u32, got: Option<u32> },
    #[error("forms have different degrees")]
    MixedDegrees,
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyKind {
    ProjectiveSpace,
    CompleteIntersection { forms: Vec<MultiPoly>, degrees: Vec<u32> },
}

/// P^N or a complete intersection in P^N, with coordinates `x0..xN`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseVariety {
    ambient_dim: usize,
    ring: PolyRing,
    kind: VarietyKind,
}

impl BaseVariety {
    pub fn projective_space(n: usize) -> Self {
        Self::projective_space_over(n, &CycloField::rationals())
    }

    pub fn projective_space_over(n: usize, field: &Arc<CycloField>) -> Self {
        BaseVariety { ambient_dim: n, ring: PolyRing::new(field.clone(), n + 1), kind: VarietyKind::ProjectiveSpace }
    }

    /// Zero locus of `forms` in P^N. The forms must be nonzero, homogeneous,
    /// `T`-free, live in `N + 1` variables, and number at most `N − 1`.
    pub fn complete_intersection(n: usize, forms: Vec<MultiPoly>) -> Result<Self, GeomError> {
        if forms.is_empty() {
            return Ok(Self::projective_space(n));
        }
        if forms.len() + 1 > n {
            return Err(GeomError::InvalidVariety(format!("{} equations in P^{n} leave no curve", forms.len())));
        }
        let ring = forms[0].ring().clone();
        let mut degrees = Vec::with_capacity(forms.len());
        for f in &forms {
            if f.ring() != &ring || ring.has_t() || ring.num_vars() != n + 1 {
                return Err(GeomError::InvalidVariety(format!("form {f} is not in the coordinate ring of P^{n}")));
            }
            f.require_homogeneous(None)?;
            match f.degree() {
                Some(d) if d >= 1 => degrees.push(d),
                _ => return Err(GeomError::InvalidVariety("defining forms must have positive degree".into())),
            }
        }
        Ok(BaseVariety { ambient_dim: n, ring, kind: VarietyKind::CompleteIntersection { forms, degrees } })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_vars(&self) -> usize {
        self.ambient_dim + 1
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.ring.field()
    }

    pub fn kind(&self) -> &VarietyKind {
        &self.kind
    }

    pub fn forms(&self) -> &[MultiPoly] {
        match &self.kind {
            VarietyKind::ProjectiveSpace => &[],
            VarietyKind::CompleteIntersection { forms, .. } => forms,
        }
    }

    /// Same variety with coefficients moved into `field`.
    pub fn over(&self, field: &Arc<CycloField>) -> Result<Self, GeomError> {
        if self.field() == field {
            return Ok(self.clone());
        }
        let ring = self.ring.with_field(field);
        let kind = match &self.kind {
            VarietyKind::ProjectiveSpace => VarietyKind::ProjectiveSpace,
            VarietyKind::CompleteIntersection { forms, degrees } => VarietyKind::CompleteIntersection {
                forms: forms.iter().map(|f| f.embed(field)).collect::<Result<_, _>>()?,
                degrees: degrees.clone(),
            },
        };
        Ok(BaseVariety { ambient_dim: self.ambient_dim, ring, kind })
    }
}

/// The degree-`n` piece of the coordinate ring, with a monomial basis and
/// the projection onto it along the ideal.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    variety: BaseVariety,
    degree: u32,
    ambient: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    // Ideal piece, stored with coordinates in reversed monomial order so that
    // the non-pivot monomials form the graded-lex-earliest complement.
    ideal: Subspace,
    basis: Vec<usize>,
    basis_pos: Vec<Option<usize>>,
}

impl GradedPiece {
    pub fn variety(&self) -> &BaseVariety {
        &self.variety
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of degree-`n` monomials in `N + 1` variables.
    pub fn ambient_dim(&self) -> usize {
        self.ambient.len()
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal.dim()
    }

    pub fn basis(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|&i| &self.ambient[i]).collect()
    }

    pub fn basis_polys(&self) -> Vec<MultiPoly> {
        self.basis().into_iter().map(|m| self.variety.ring.monomial(&m.0)).collect()
    }

    fn field(&self) -> &Arc<CycloField> {
        self.variety.field()
    }

    fn reduce_ambient(&self, v: Vec<CycloScalar>) -> Vec<CycloScalar> {
        let len = v.len();
        let rev: Vec<CycloScalar> = v.into_iter().rev().collect();
        let res = self.ideal.residual(&rev);
        let mut out = vec![CycloScalar::zero(self.field()); self.dim()];
        for (k, c) in res.into_iter().enumerate() {
            if !c.is_zero() {
                let pos = self.basis_pos[len - 1 - k].expect("residual supported on the basis");
                out[pos] = c;
            }
        }
        out
    }

    /// Basis coordinates of a degree-`n` monomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Vec<CycloScalar> {
        let i = self.index[m];
        if let Some(pos) = self.basis_pos[i] {
            let mut out = vec![CycloScalar::zero(self.field()); self.dim()];
            out[pos] = CycloScalar::one(self.field());
            return out;
        }
        let mut v = vec![CycloScalar::zero(self.field()); self.ambient.len()];
        v[i] = CycloScalar::one(self.field());
        self.reduce_ambient(v)
    }

    /// Basis coordinates of a homogeneous polynomial of this degree.
    pub fn reduce(&self, p: &MultiPoly) -> Result<Vec<CycloScalar>, GeomError> {
        if p.ring() != &self.variety.ring {
            return Err(PolyError::ShapeMismatch(p.ring().to_string(), self.variety.ring.to_string()).into());
        }
        if !p.is_homogeneous() || p.degree().is_some_and(|d| d != self.degree) {
            return Err(GeomError::DegreeMismatch { expected: self.degree, got: p.degree() });
        }
        let mut v = vec![CycloScalar::zero(self.field()); self.ambient.len()];
        for (m, c) in p.terms() {
            v[self.index[m]] = c.clone();
        }
        Ok(self.reduce_ambient(v))
    }

    /// The polynomial with the given basis coordinates.
    pub fn lift(&self, coords: &[CycloScalar]) -> MultiPoly {
        let ring = &self.variety.ring;
        let mut p = ring.zero();
        for (&i, c) in self.basis.iter().zip(coords) {
            if !c.is_zero() {
                p = p + ring.term(self.ambient[i].clone(), c.clone());
            }
        }
        p
    }
}

fn monomial_vector(
    field: &Arc<CycloField>,
    index: &HashMap<Monomial, usize>,
    len: usize,
    p: &MultiPoly,
) -> Vec<CycloScalar> {
    let mut v = vec![CycloScalar::zero(field); len];
    for (m, c) in p.terms() {
        v[len - 1 - index[m]] = c.clone();
    }
    v
}

/// Degree-`n` piece of `v` with its graded-lex-earliest monomial basis.
pub fn quotient_basis(v: &BaseVariety, n: i64) -> Result<GradedPiece, GeomError> {
    if n < 0 {
        return Err(GeomError::DegreeNegative(n));
    }
    let n = n as u32;
    let field = v.field().clone();
    let ambient = monomials_of_degree(v.num_vars(), n);
    let index: HashMap<Monomial, usize> = ambient.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let len = ambient.len();
    let mut rows = Vec::new();
    for f in v.forms() {
        let a = f.degree().unwrap_or(0);
        if a > n {
            continue;
        }
        for mu in monomials_of_degree(v.num_vars(), n - a) {
            let g = &v.ring.monomial(&mu.0) * f;
            rows.push(monomial_vector(&field, &index, len, &g));
        }
    }
    let ideal = Subspace::span(&field, len, rows);
    let basis: Vec<usize> = ideal.non_pivots().into_iter().rev().map(|k| len - 1 - k).collect();
    let mut basis_pos = vec![None; len];
    for (pos, &i) in basis.iter().enumerate() {
        basis_pos[i] = Some(pos);
    }
    Ok(GradedPiece { variety: v.clone(), degree: n, ambient, index, ideal, basis, basis_pos })
}

// One representative multiset (as basis indices of the source piece) per
// distinct product monomial, in graded-lex product order.
fn product_generators(source: &GradedPiece, m: u32) -> Vec<(Vec<usize>, Monomial)> {
    let basis = source.basis();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for combo in (0..basis.len()).combinations_with_replacement(m as usize) {
        let mut prod = Monomial::one(source.variety.num_vars());
        for &i in &combo {
            prod = prod.mul(basis[i]);
        }
        if seen.insert(prod.clone()) {
            out.push((combo, prod));
        }
    }
    out
}

/// Image of the `m`-fold multiplication map from the degree-`n` piece,
/// as a subspace of the degree-`m·n` piece (in its basis coordinates).
pub fn multmap_image(v: &BaseVariety, n: u32, m: u32) -> Subspace {
    let source = quotient_basis(v, n as i64).expect("nonnegative degree");
    let target = quotient_basis(v, (m * n) as i64).expect("nonnegative degree");
    let vectors = product_generators(&source, m).iter().map(|(_, prod)| target.reduce_monomial(prod)).collect();
    Subspace::span(v.field(), target.dim(), vectors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub image_dim: usize,
    pub target_dim: usize,
}

impl SurjectivityReport {
    pub fn surjective(&self) -> bool {
        self.image_dim == self.target_dim
    }
}

pub fn is_surjective(v: &BaseVariety, n: u32, m: u32) -> SurjectivityReport {
    let image = multmap_image(v, n, m);
    SurjectivityReport { image_dim: image.dim(), target_dim: image.ambient_dim() }
}

/// `s = Σ_k a^1_k ⋯ a^d_k` with every `a^j_k` homogeneous of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub d: u32,
    pub n: u32,
    pub terms: Vec<Vec<MultiPoly>>,
}

impl ProductDecomposition {
    pub fn new(d: u32, n: u32, terms: Vec<Vec<MultiPoly>>) -> Result<Self, GeomError> {
        let dec = ProductDecomposition { d, n, terms };
        dec.validate()?;
        Ok(dec)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        let ring = self.terms.first().and_then(|t| t.first()).map(|a| a.ring().clone());
        for term in &self.terms {
            if term.len() != self.d as usize {
                return Err(GeomError::DegreeMismatch { expected: self.d, got: Some(term.len() as u32) });
            }
            for a in term {
                if Some(a.ring()) != ring.as_ref() {
                    return Err(PolyError::ShapeMismatch(a.ring().to_string(), format!("{ring:?}")).into());
                }
                if !a.is_homogeneous() || a.degree().is_some_and(|e| e != self.n) {
                    return Err(GeomError::DegreeMismatch { expected: self.n, got: a.degree() });
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Option<&PolyRing> {
        self.terms.first().and_then(|t| t.first()).map(|a| a.ring())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `Σ_k ∏_j a^j_k`; the zero polynomial of `ring` for an empty sum.
    pub fn expand_in(&self, ring: &PolyRing) -> MultiPoly {
        let mut s = ring.zero();
        for term in &self.terms {
            let mut prod = ring.one();
            for a in term {
                prod = &prod * a;
            }
            s = s + prod;
        }
        s
    }

    pub fn expand(&self) -> Option<MultiPoly> {
        self.ring().map(|r| self.expand_in(r))
    }

    /// Rewrites the expansion with few terms: a greedy cover of its monomials
    /// by divisors of degree `(d − 1)·n`, each divisor split into `d − 1`
    /// monomial factors and the cofactors summed into the last factor. The
    /// expansion is unchanged.
    pub fn compact(&self) -> ProductDecomposition {
        let Some(ring) = self.ring().cloned() else {
            return self.clone();
        };
        let s = self.expand_in(&ring);
        let vars = ring.num_vars();
        let key_degree = (self.d - 1) * self.n;
        let mut uncovered: Vec<(Vec<u32>, CycloScalar)> =
            s.terms().iter().map(|(m, c)| (m.0[..vars].to_vec(), c.clone())).collect();
        let mut terms = Vec::new();
        while !uncovered.is_empty() {
            let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
            for (m, _) in &uncovered {
                for k in divisors_of_degree(m, key_degree) {
                    *counts.entry(k).or_default() += 1;
                }
            }
            let key = counts
                .into_iter()
                .max_by(|(ka, ca), (kb, cb)| ca.cmp(cb).then_with(|| ka.cmp(kb)))
                .map(|(k, _)| k)
                .expect("every monomial has a divisor of the key degree");
            let mut free = ring.zero();
            uncovered.retain(|(m, c)| {
                if m.iter().zip(&key).all(|(a, b)| a >= b) {
                    let rest: Vec<u32> = m.iter().zip(&key).map(|(a, b)| a - b).collect();
                    free = free.clone() + ring.monomial(&rest).scale(c);
                    false
                } else {
                    true
                }
            });
            let mut letters = Vec::new();
            for (i, &e) in key.iter().enumerate() {
                letters.extend(std::iter::repeat_n(i, e as usize));
            }
            let mut term: Vec<MultiPoly> = letters
                .chunks(self.n.max(1) as usize)
                .map(|chunk| {
                    let mut exps = vec![0u32; vars];
                    for &i in chunk {
                        exps[i] += 1;
                    }
                    ring.monomial(&exps)
                })
                .collect();
            if self.n == 0 {
                term = vec![ring.one(); self.d as usize - 1];
            }
            term.push(free);
            terms.push(term);
        }
        ProductDecomposition { d: self.d, n: self.n, terms }
    }

    /// Every distinct factor appearing in some term.
    pub fn factors(&self) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for a in self.terms.iter().flatten() {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        out
    }
}

fn divisors_of_degree(m: &[u32], k: u32) -> Vec<Vec<u32>> {
    fn go(m: &[u32], k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&first, rest)) = m.split_first() else {
            if k == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        let rest_total: u32 = rest.iter().sum();
        for e in k.saturating_sub(rest_total)..=first.min(k) {
            prefix.push(e);
            go(rest, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, k, &mut Vec::with_capacity(m.len()), &mut out);
    out
}

/// Writes `s` (degree `d·n`) as a combination of `d`-fold products of
/// degree-`n` basis monomials, folding each coefficient into the first
/// factor. On a complete intersection the expansion agrees with `s` modulo
/// the ideal.
pub fn decompose_in_image(v: &BaseVariety, n: u32, d: u32, s: &MultiPoly) -> Result<ProductDecomposition, GeomError> {
    let v = v.over(s.ring().field())?;
    if s.ring() != v.ring() {
        return Err(PolyError::ShapeMismatch(s.ring().to_string(), v.ring().to_string()).into());
    }
    if !s.is_homogeneous() || s.degree().is_some_and(|e| e != d * n) {
        return Err(GeomError::DegreeMismatch { expected: d * n, got: s.degree() });
    }
    let source = quotient_basis(&v, n as i64)?;
    let target = quotient_basis(&v, (d * n) as i64)?;
    let gens = product_generators(&source, d);
    let columns: Vec<Vec<CycloScalar>> = gens.iter().map(|(_, prod)| target.reduce_monomial(prod)).collect();
    let a = ExactMatrix::from_rows(v.field(), target.dim(), columns).transpose();
    let b = target.reduce(s)?;
    let x = a.solve(&b)?.ok_or(GeomError::NotInImage)?;
    let basis = source.basis_polys();
    let mut terms = Vec::new();
    for ((combo, _), c) in gens.iter().zip(x) {
        if c.is_zero() {
            continue;
        }
        let mut term: Vec<MultiPoly> = combo.iter().map(|&i| basis[i].clone()).collect();
        term[0] = term[0].scale(&c);
        terms.push(term);
    }
    Ok(ProductDecomposition { d, n, terms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationVerdict {
    CertifiedEmpty(u32),
    Inconclusive,
}

/// Searches for a degree `D ≤ d_max` in which the ideal of the (equal
/// degree) forms contains every monomial; such a `D` proves the forms have
/// no common projective zero.
pub fn elimination_certificate(forms: &[MultiPoly], d_max: u32) -> Result<EliminationVerdict, GeomError> {
    let degs: BTreeSet<Option<u32>> = forms.iter().map(MultiPoly::degree).collect();
    if degs.len() > 1 || forms.iter().any(|f| !f.is_homogeneous()) {
        return Err(GeomError::MixedDegrees);
    }
    Ok(elimination_certificate_mixed(forms, d_max))
}

/// As [`elimination_certificate`], allowing forms of different degrees.
pub fn elimination_certificate_mixed(forms: &[MultiPoly], d_max: u32) -> EliminationVerdict {
    let forms: Vec<&MultiPoly> = forms.iter().filter(|f| !f.is_zero()).collect();
    let Some(start) = forms.iter().filter_map(|f| f.degree()).min() else {
        return EliminationVerdict::Inconclusive;
    };
    let ring = forms[0].ring().clone();
    for big_d in start..=d_max {
        let ambient = monomials_of_degree(ring.num_vars(), big_d);
        let index: HashMap<Monomial, usize> = ambient.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for f in &forms {
            let a = f.degree().unwrap_or(0);
            if a > big_d {
                continue;
            }
            for mu in monomials_of_degree(ring.num_vars(), big_d - a) {
                rows.push(monomial_vector(ring.field(), &index, ambient.len(), &(&ring.monomial(&mu.0) * f)));
            }
        }
        if rows.len() >= ambient.len() && Subspace::span(ring.field(), ambient.len(), rows).is_full() {
            return EliminationVerdict::CertifiedEmpty(big_d);
        }
    }
    EliminationVerdict::Inconclusive
}

/// Smoothness certificate for the hypersurface `Z(s) ⊂ P^N`: the partial
/// derivatives of `s` have no common zero.
pub fn jacobian_certificate(s: &MultiPoly, d_max: u32) -> EliminationVerdict {
    let partials: Vec<MultiPoly> = (0..s.ring().num_vars()).map(|i| s.derivative(i)).collect();
    elimination_certificate_mixed(&partials, d_max)
}

/// Base-point-freeness certificate for the sections appearing in a
/// decomposition, taken together with the defining forms of `v`.
pub fn base_point_free_certificate(v: &BaseVariety, dec: &ProductDecomposition, d_max: u32) -> EliminationVerdict {
    let mut forms = dec.factors();
    if let Some(ring) = dec.ring() {
        forms.extend(v.forms().iter().filter_map(|f| f.embed(ring.field()).ok()));
    }
    elimination_certificate_mixed(&forms, d_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quadric_surface() -> BaseVariety {
        let ring = PolyRing::rational(4);
        BaseVariety::complete_intersection(3, vec![ring.parse("x0^2 + x1^2 + x2^2 + x3^2").unwrap()]).unwrap()
    }

    fn plane_cubic() -> BaseVariety {
        let ring = PolyRing::rational(3);
        BaseVariety::complete_intersection(2, vec![ring.parse("x1^2*x2 - x0^3 - x0*x2^2").unwrap()]).unwrap()
    }

    #[test]
    fn graded_piece_dimensions() {
        assert_eq!(quotient_basis(&BaseVariety::projective_space(2), 2).unwrap().dim(), 6);
        assert_eq!(quotient_basis(&quadric_surface(), 2).unwrap().dim(), 9);
        assert_eq!(quotient_basis(&plane_cubic(), 3).unwrap().dim(), 9);
        assert_eq!(quotient_basis(&plane_cubic(), 2).unwrap().dim(), 6);
        assert_eq!(quotient_basis(&plane_cubic(), 4).unwrap().dim(), 12);
        assert_eq!(quotient_basis(&BaseVariety::projective_space(2), -1).unwrap_err(), GeomError::DegreeNegative(-1));
    }

    #[test]
    fn basis_is_earliest_complement() {
        let piece = quotient_basis(&quadric_surface(), 2).unwrap();
        // x0^2 is the only pivot of the single relation read from the back,
        // so the latest monomial x3^2 is dropped.
        let ring = PolyRing::rational(4);
        assert!(!piece.basis().contains(&&Monomial(vec![0, 0, 0, 2])));
        assert!(piece.basis().contains(&&Monomial(vec![2, 0, 0, 0])));
        let x3sq = piece.reduce(&ring.parse("x3^2").unwrap()).unwrap();
        let back = piece.lift(&x3sq);
        assert_eq!(back, ring.parse("-x0^2 - x1^2 - x2^2").unwrap());
        for (k, m) in piece.basis().into_iter().enumerate() {
            let coords = piece.reduce_monomial(m);
            assert!(coords.iter().enumerate().all(|(j, c)| if j == k { c.is_one() } else { c.is_zero() }));
        }
    }

    #[test]
    fn reduction_kills_the_ideal() {
        let v = plane_cubic();
        let f = &v.forms()[0];
        let piece = quotient_basis(&v, 5).unwrap();
        let ring = v.ring();
        let g = &ring.parse("3*x0^2 - x1*x2").unwrap() * f;
        assert!(piece.reduce(&g).unwrap().iter().all(CycloScalar::is_zero));
    }

    #[test]
    fn projective_space_multiplication_is_surjective() {
        for big_n in 1..=3usize {
            let v = BaseVariety::projective_space(big_n);
            for n in 1..=2u32 {
                for m in 1..=3u32 {
                    let r = is_surjective(&v, n, m);
                    let expected = binomial(big_n + (m * n) as usize, big_n);
                    assert_eq!((r.image_dim, r.target_dim), (expected, expected));
                }
            }
        }
        let p1 = BaseVariety::projective_space(1);
        assert_eq!(is_surjective(&p1, 0, 2), SurjectivityReport { image_dim: 1, target_dim: 1 });
        assert_eq!(multmap_image(&p1, 1, 2).dim(), 3);
    }

    #[test]
    fn quadric_two_fold_image() {
        let r = is_surjective(&quadric_surface(), 1, 2);
        assert_eq!(r, SurjectivityReport { image_dim: 9, target_dim: 9 });
    }

    #[test]
    fn decompose_examples() {
        let v = BaseVariety::projective_space(2);
        let ring = v.ring().clone();
        let s = ring.parse("x0^2 + x1*x2").unwrap();
        let dec = decompose_in_image(&v, 1, 2, &s).unwrap();
        let expected = vec![vec![ring.var(0), ring.var(0)], vec![ring.var(1), ring.var(2)]];
        assert_eq!(dec.terms, expected);

        let p1 = BaseVariety::projective_space(1);
        let r1 = p1.ring().clone();
        let s = r1.parse("x0^3 + x1^3").unwrap();
        let dec = decompose_in_image(&p1, 1, 3, &s).unwrap();
        assert_eq!(dec.expand().unwrap(), s);

        let bad = ring.parse("x0^3").unwrap();
        assert!(matches!(decompose_in_image(&v, 1, 2, &bad), Err(GeomError::DegreeMismatch { expected: 2, .. })));
    }

    #[test]
    fn decompose_over_cyclotomic_field() {
        let f3 = CycloField::new(3).unwrap();
        let v = BaseVariety::projective_space(2);
        let ring = PolyRing::new(f3.clone(), 3);
        let s = ring.parse("(1 + z)*x0^3 - x1*x2^2 + (2*z)*x0*x1*x2").unwrap();
        let dec = decompose_in_image(&v, 1, 3, &s).unwrap();
        assert_eq!(dec.expand().unwrap(), s);
    }

    #[test]
    fn decompose_random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = BaseVariety::projective_space(2);
        for d in [2u32, 3] {
            for _ in 0..100 {
                let s = v.ring().random_form(d, 5, &mut rng);
                let dec = decompose_in_image(&v, 1, d, &s).unwrap();
                dec.validate().unwrap();
                assert_eq!(dec.expand_in(v.ring()), s);
            }
        }
    }

    #[test]
    fn compaction_preserves_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let v = BaseVariety::projective_space(2);
        for (d, bound) in [(2u32, 3usize), (3, 4)] {
            for _ in 0..20 {
                let s = v.ring().random_form(d, 5, &mut rng);
                let dec = decompose_in_image(&v, 1, d, &s).unwrap();
                let small = dec.compact();
                small.validate().unwrap();
                assert!(small.terms.len() <= bound);
                assert_eq!(small.expand_in(v.ring()), s);
            }
        }
        let ring = v.ring();
        let x = |i| ring.var(i);
        let three = CycloScalar::from_int(ring.field(), 3);
        let dec = ProductDecomposition::new(
            2,
            1,
            vec![vec![x(0), x(1)], vec![x(0).scale(&three), x(1)], vec![x(2), ring.zero()]],
        )
        .unwrap();
        assert_eq!(dec.compact().terms, vec![vec![x(0), x(1).scale(&CycloScalar::from_int(ring.field(), 4))]]);
        let s = ring.parse("x0^2 + x1*x2").unwrap();
        let dec = decompose_in_image(&v, 1, 2, &s).unwrap().compact();
        assert_eq!(dec.terms, vec![vec![x(0), x(0)], vec![x(1), x(2)]]);
        let p1 = BaseVariety::projective_space(1);
        let s = p1.ring().parse("x0^4 - x0^2*x1^2 + 5*x1^4").unwrap();
        let dec = decompose_in_image(&p1, 2, 2, &s).unwrap().compact();
        assert_eq!(dec.expand_in(p1.ring()), s);
        assert!(dec.terms.len() <= 2);
    }

    #[test]
    fn decompose_on_quadric_agrees_modulo_ideal() {
        let v = quadric_surface();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let target = quotient_basis(&v, 2).unwrap();
        for _ in 0..20 {
            let s = v.ring().random_form(2, 4, &mut rng);
            let dec = decompose_in_image(&v, 1, 2, &s).unwrap();
            let diff = dec.expand_in(v.ring()) - s.clone();
            assert!(target.reduce(&diff).unwrap().iter().all(CycloScalar::is_zero));
        }
    }

    #[test]
    fn cubic_image_closed_under_products() {
        let v = plane_cubic();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let img1 = multmap_image(&v, 1, 2);
        let img2 = multmap_image(&v, 1, 4);
        let p2 = quotient_basis(&v, 2).unwrap();
        let p4 = quotient_basis(&v, 4).unwrap();
        for _ in 0..5 {
            let a = v.ring().random_form(2, 3, &mut rng);
            let b = v.ring().random_form(2, 3, &mut rng);
            assert!(img1.contains(&p2.reduce(&a).unwrap()));
            let ab = &a * &b;
            assert!(img2.contains(&p4.reduce(&ab).unwrap()));
        }
    }

    #[test]
    fn elimination_examples() {
        let ring = PolyRing::rational(3);
        let vars: Vec<MultiPoly> = (0..3).map(|i| ring.var(i)).collect();
        assert_eq!(elimination_certificate(&vars, 3).unwrap(), EliminationVerdict::CertifiedEmpty(1));
        let squares: Vec<MultiPoly> = (0..3).map(|i| ring.var(i).pow(2)).collect();
        assert_eq!(elimination_certificate(&squares, 3).unwrap(), EliminationVerdict::Inconclusive);
        assert_eq!(elimination_certificate(&squares, 6).unwrap(), EliminationVerdict::CertifiedEmpty(4));
        let p1 = PolyRing::rational(2);
        let forms = vec![p1.var(0), p1.var(0).pow(2)];
        assert_eq!(elimination_certificate(&forms, 8), Err(GeomError::MixedDegrees));
        assert_eq!(elimination_certificate_mixed(&forms, 8), EliminationVerdict::Inconclusive);
    }

    #[test]
    fn elimination_certificate_is_sound() {
        // Direct count: a certified degree has the full monomial count in
        // the span of multiples.
        let ring = PolyRing::rational(3);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let forms: Vec<MultiPoly> = (0..3).map(|_| ring.random_form(2, 3, &mut rng)).collect();
            if let EliminationVerdict::CertifiedEmpty(big_d) = elimination_certificate(&forms, 6).unwrap() {
                let mut rows = Vec::new();
                for f in &forms {
                    for mu in monomials_of_degree(3, big_d - 2) {
                        let g = &ring.monomial(&mu.0) * f;
                        rows.push(monomials_of_degree(3, big_d).iter().map(|m| g.coeff(m)).collect());
                    }
                }
                let dim = monomials_of_degree(3, big_d).len();
                assert_eq!(Subspace::span(ring.field(), dim, rows).dim(), dim);
            }
        }
    }

    #[test]
    fn jacobian_and_base_points() {
        let ring = PolyRing::rational(3);
        let fermat = ring.parse("x0^3 + x1^3 + x2^3").unwrap();
        assert!(matches!(jacobian_certificate(&fermat, 6), EliminationVerdict::CertifiedEmpty(_)));
        let nodal = ring.parse("x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        assert_eq!(jacobian_certificate(&nodal, 6), EliminationVerdict::Inconclusive);
        let v = BaseVariety::projective_space(2);
        let dec = decompose_in_image(&v, 1, 3, &fermat).unwrap();
        assert!(matches!(base_point_free_certificate(&v, &dec, 4), EliminationVerdict::CertifiedEmpty(1)));
    }

    #[test]
    fn invalid_varieties() {
        let ring = PolyRing::rational(3);
        let f = ring.parse("x0^2 + x1*x2").unwrap();
        let g = ring.parse("x0").unwrap();
        assert!(BaseVariety::complete_intersection(2, vec![f.clone(), g]).is_err());
        assert!(BaseVariety::complete_intersection(2, vec![ring.parse("x0 + x1^2").unwrap()]).is_err());
        assert!(BaseVariety::complete_intersection(3, vec![f]).is_err());
    }
}
