//! Matrix roots of `T^d − s`: cyclic single-term roots, the tensor
//! (generalized Clifford) construction for sums of products, the 2×2 double
//! cover pair, and an exact verifier.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactfield::{CycloField, CycloScalar, FieldError};
use crate::gradedgeom::{decompose_in_image, BaseVariety, GeomError, ProductDecomposition};
use crate::linear::ExactMatrix;
use crate::polyring::{MultiPoly, PolyError, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatfacError {
    #[error("degree mismatch: expected {expected}, got {got:?}")]
    DegreeMismatch { expected: u32, got: Option<u32> },
    #[error("decomposition has no terms")]
    EmptyDecomposition,
    #[error("every sampled point annihilates the target")]
    AllSamplesSingular,
    #[error("matrix shape error: {0}")]
    Shape(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Matrix with polynomial entries from a single ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ring: PolyRing,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &PolyRing, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, ring: ring.clone(), entries: vec![ring.zero(); rows * cols] }
    }

    pub fn scalar_identity(f: &MultiPoly, n: usize) -> Self {
        let mut m = Self::zeros(f.ring(), n, n);
        for i in 0..n {
            m.set(i, i, f.clone());
        }
        m
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Self {
        Self::scalar_identity(&ring.one(), n)
    }

    pub fn diagonal(ring: &PolyRing, diag: &[CycloScalar]) -> Self {
        let mut m = Self::zeros(ring, diag.len(), diag.len());
        for (i, c) in diag.iter().enumerate() {
            m.set(i, i, ring.constant(c.clone()));
        }
        m
    }

    pub fn from_rows(ring: &PolyRing, rows: Vec<Vec<MultiPoly>>) -> Result<Self, MatfacError> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MatfacError::Shape("ragged rows".into()));
            }
            for p in row {
                if p.ring() != ring {
                    return Err(PolyError::ShapeMismatch(p.ring().to_string(), ring.to_string()).into());
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { rows: n, cols, ring: ring.clone(), entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        assert_eq!(p.ring(), &self.ring, "entry from a different ring");
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[MultiPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|p| !p.is_zero()).count()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let support: Vec<Vec<usize>> =
            (0..other.rows).map(|k| (0..other.cols).filter(|&j| !other.get(k, j).is_zero()).collect()).collect();
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for (k, cols) in support.iter().enumerate() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in cols {
                    out.entries[i * other.cols + j].add_product_assign(a, other.get(k, j));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes differ");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect();
        PolyMatrix { entries, ..self.clone() }
    }

    pub fn scale(&self, c: &CycloScalar) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(|p| p.scale(c)).collect(), ..self.clone() }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(&self.ring, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.entries[(i * other.rows + k) * c + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> PolyMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Self::identity(&self.ring, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Entrywise evaluation at `x = point`, `T = t`.
    pub fn eval(&self, point: &[CycloScalar], t: Option<&CycloScalar>) -> ExactMatrix {
        let field = self.ring.field();
        let rows = (0..self.rows).map(|i| self.row(i).iter().map(|p| p.eval(point, t)).collect()).collect();
        ExactMatrix::from_rows(field, self.cols, rows)
    }

    /// Positions where `self` differs from `f · I`.
    pub fn scalar_identity_defects(&self, f: &MultiPoly) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                let ok = if i == j { p == f } else { p.is_zero() };
                if !ok {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_scalar_identity(&self, f: &MultiPoly) -> bool {
        self.rows == self.cols && self.scalar_identity_defects(f).is_empty()
    }

    /// Determinant by expansion over column subsets; exponential in the
    /// size, intended for sizes up to about 12.
    pub fn determinant(&self) -> MultiPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let m = self.rows;
        assert!(m <= 16, "symbolic determinant limited to size 16");
        // dp[mask] = signed sum over injective maps from the first |mask|
        // rows onto the columns in mask.
        let mut dp: Vec<Option<MultiPoly>> = vec![None; 1 << m];
        dp[0] = Some(self.ring.one());
        for mask in 0usize..(1 << m) {
            let Some(cur) = dp[mask].take() else { continue };
            let row = mask.count_ones() as usize;
            if row == m {
                dp[mask] = Some(cur);
                continue;
            }
            for col in 0..m {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let a = self.get(row, col);
                if a.is_zero() {
                    continue;
                }
                // sign: number of already-used columns to the right of `col`
                let inversions = (mask >> (col + 1)).count_ones();
                let mut term = &cur * a;
                if inversions % 2 == 1 {
                    term = term.neg();
                }
                let next = mask | (1 << col);
                dp[next] = Some(match dp[next].take() {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
        }
        dp[(1 << m) - 1].take().unwrap_or_else(|| self.ring.zero())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|p| p.to_string()).collect()).collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

/// `d × d` matrix `N` with `N[j][(j+1) mod d] = a_j`, so that
/// `N^d = (∏ a_j)·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicRoot {
    pub forms: Vec<MultiPoly>,
    pub matrix: PolyMatrix,
}

impl CyclicRoot {
    pub fn d(&self) -> usize {
        self.forms.len()
    }

    pub fn product(&self) -> MultiPoly {
        let ring = self.matrix.ring();
        self.forms.iter().fold(ring.one(), |acc, a| &acc * a)
    }

    pub fn check(&self) -> bool {
        self.matrix.pow(self.d() as u32).is_scalar_identity(&self.product())
    }
}

fn common_degree(forms: &[MultiPoly]) -> Result<Option<u32>, MatfacError> {
    let mut deg = None;
    for f in forms {
        if !f.is_homogeneous() {
            return Err(MatfacError::DegreeMismatch { expected: deg.unwrap_or(0), got: None });
        }
        match (deg, f.degree()) {
            (_, None) => {}
            (None, Some(e)) => deg = Some(e),
            (Some(a), Some(e)) if a != e => return Err(MatfacError::DegreeMismatch { expected: a, got: Some(e) }),
            _ => {}
        }
    }
    Ok(deg)
}

pub fn cyclic_root(forms: &[MultiPoly]) -> Result<CyclicRoot, MatfacError> {
    let Some(first) = forms.first() else {
        return Err(MatfacError::Shape("cyclic root of zero forms".into()));
    };
    common_degree(forms)?;
    let ring = first.ring().clone();
    let d = forms.len();
    let mut m = PolyMatrix::zeros(&ring, d, d);
    for (j, a) in forms.iter().enumerate() {
        if a.ring() != &ring {
            return Err(PolyError::ShapeMismatch(a.ring().to_string(), ring.to_string()).into());
        }
        m.set(j, (j + 1) % d, a.clone());
    }
    Ok(CyclicRoot { forms: forms.to_vec(), matrix: m })
}

/// `diag(1, ζ, …, ζ^{d−1})` over the ring's field.
pub fn clock_matrix(ring: &PolyRing, d: u32) -> PolyMatrix {
    let field = ring.field();
    let diag: Vec<CycloScalar> = (0..d).map(|k| CycloScalar::zeta_pow(field, k as i64)).collect();
    PolyMatrix::diagonal(ring, &diag)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootFactors {
    /// `Q` with `Q^d = f·I`.
    Power(PolyMatrix),
    /// `B_1, …, B_d` with `B_1 ⋯ B_d = f·I`.
    Product(Vec<PolyMatrix>),
}

/// A `d`-fold matrix factorization of the target `f = T^d − s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRoot {
    pub d: u32,
    pub n: u32,
    pub target: MultiPoly,
    pub term_count: usize,
    pub factors: RootFactors,
}

impl MatrixRoot {
    pub fn size(&self) -> usize {
        self.first_factor().rows()
    }

    pub fn field_order(&self) -> u32 {
        self.target.ring().field().order()
    }

    pub fn ring(&self) -> &PolyRing {
        self.target.ring()
    }

    /// `Q` for a power root, `B_1` for a product.
    pub fn first_factor(&self) -> &PolyMatrix {
        match &self.factors {
            RootFactors::Power(q) => q,
            RootFactors::Product(bs) => &bs[0],
        }
    }

    pub fn factor_list(&self) -> Vec<&PolyMatrix> {
        match &self.factors {
            RootFactors::Power(q) => vec![q; self.d as usize],
            RootFactors::Product(bs) => bs.iter().collect(),
        }
    }

    /// Rank of the bundle presented by the cokernel of one factor.
    pub fn ulrich_rank(&self) -> usize {
        self.size() / self.d as usize
    }

    /// `B_1 ⋯ B_d` (or `Q^d`).
    pub fn product(&self) -> PolyMatrix {
        match &self.factors {
            RootFactors::Power(q) => q.pow(self.d),
            RootFactors::Product(bs) => {
                let mut acc = bs[0].clone();
                for b in &bs[1..] {
                    acc = acc.mul(b);
                }
                acc
            }
        }
    }

    /// The branch section `s = T^d − f`.
    pub fn branch(&self) -> MultiPoly {
        (self.ring().t().pow(self.d) - self.target.clone()).without_t()
    }
}

fn t_ring(dec_ring: &PolyRing, d: u32, n: u32) -> Result<PolyRing, MatfacError> {
    let field = CycloField::new(d)?;
    Ok(dec_ring.without_t().with_field(&field).with_t(n))
}

fn lift_factor(a: &MultiPoly, ring: &PolyRing) -> Result<MultiPoly, MatfacError> {
    let w = ring.t_weight().expect("ring with T");
    Ok(a.embed(ring.field())?.with_t(w))
}

/// Blocks `E_0, …, E_r` with `E_i = D^{⊗i} ⊗ N_i ⊗ I^{⊗(r−i)}`, where `N_0`
/// is the cyclic root of `(T, …, T)` and `N_i` that of the `i`-th term with
/// its first factor negated.
pub fn clifford_blocks(dec: &ProductDecomposition) -> Result<Vec<PolyMatrix>, MatfacError> {
    let Some(dec_ring) = dec.ring() else {
        return Err(MatfacError::EmptyDecomposition);
    };
    dec.validate()?;
    let (d, n) = (dec.d, dec.n);
    let ring = t_ring(dec_ring, d, n)?;
    let r = dec.terms.len();
    let clock = clock_matrix(&ring, d);
    let eye = PolyMatrix::identity(&ring, d as usize);
    let mut cyclics = vec![cyclic_root(&vec![ring.t(); d as usize])?.matrix];
    for term in &dec.terms {
        let mut forms = term.iter().map(|a| lift_factor(a, &ring)).collect::<Result<Vec<_>, _>>()?;
        forms[0] = forms[0].neg();
        cyclics.push(cyclic_root(&forms)?.matrix);
    }
    let mut blocks = Vec::with_capacity(r + 1);
    for (i, nmat) in cyclics.into_iter().enumerate() {
        let mut e = PolyMatrix::identity(&ring, 1);
        for _ in 0..i {
            e = e.kron(&clock);
        }
        e = e.kron(&nmat);
        for _ in i..r {
            e = e.kron(&eye);
        }
        blocks.push(e);
    }
    Ok(blocks)
}

fn target_of(dec: &ProductDecomposition, ring: &PolyRing) -> Result<MultiPoly, MatfacError> {
    let dec_ring = dec.ring().ok_or(MatfacError::EmptyDecomposition)?;
    let s = dec.expand_in(dec_ring);
    Ok(ring.t().pow(dec.d) - lift_factor(&s, ring)?)
}

/// Root of size `d^{r+1}` with `Q^d = (T^d − Σ_i ∏_j a^j_i)·I`.
pub fn clifford_root(dec: &ProductDecomposition) -> Result<MatrixRoot, MatfacError> {
    let blocks = clifford_blocks(dec)?;
    let mut q = blocks[0].clone();
    for e in &blocks[1..] {
        q = q.add(e);
    }
    let target = target_of(dec, q.ring())?;
    Ok(MatrixRoot { d: dec.d, n: dec.n, target, term_count: dec.terms.len(), factors: RootFactors::Power(q) })
}

/// `B_1 = [[T, a], [b, T]]`, `B_2 = [[T, −a], [−b, T]]` with
/// `B_1 B_2 = (T² − ab)·I_2`. `a`, `b` must lie in a ring with `T`.
pub fn double_cover_mf(a: &MultiPoly, b: &MultiPoly) -> Result<(PolyMatrix, PolyMatrix), MatfacError> {
    common_degree(&[a.clone(), b.clone()])?;
    let ring = a.ring().clone();
    if !ring.has_t() {
        return Err(MatfacError::Shape("double cover entries need a ring with T".into()));
    }
    let t = ring.t();
    let b1 = PolyMatrix::from_rows(&ring, vec![vec![t.clone(), a.clone()], vec![b.clone(), t.clone()]])?;
    let b2 = PolyMatrix::from_rows(&ring, vec![vec![t.clone(), a.neg()], vec![b.neg(), t]])?;
    Ok((b1, b2))
}

/// The double-cover pair for a one-term decomposition with `d = 2`.
pub fn double_cover_root(dec: &ProductDecomposition) -> Result<MatrixRoot, MatfacError> {
    if dec.d != 2 || dec.terms.len() != 1 {
        return Err(MatfacError::Shape("double cover needs d = 2 and one term".into()));
    }
    let dec_ring = dec.ring().ok_or(MatfacError::EmptyDecomposition)?;
    let ring = t_ring(dec_ring, 2, dec.n)?;
    let a = lift_factor(&dec.terms[0][0], &ring)?;
    let b = lift_factor(&dec.terms[0][1], &ring)?;
    let (b1, b2) = double_cover_mf(&a, &b)?;
    let target = target_of(dec, &ring)?;
    Ok(MatrixRoot { d: 2, n: dec.n, target, term_count: 1, factors: RootFactors::Product(vec![b1, b2]) })
}

/// Entry position; `factor` indexes `B_k` for product roots and is 0 for
/// power roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EntryPos {
    pub factor: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for EntryPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}[{}][{}]", self.factor + 1, self.row, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeViolation {
    pub pos: EntryPos,
    pub entry: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// Positions of the product where it differs from `f·I`.
    pub identity_violations: Vec<(usize, usize)>,
    /// Entries not of the form `αT + g` with `g` of degree `n`.
    pub shape_violations: Vec<ShapeViolation>,
    /// Problems with the target itself (not `T^d − s`, wrong degree).
    pub target_issues: Vec<String>,
    /// Single entries whose change alone can repair the identity.
    pub suspects: Vec<EntryPos>,
    pub degenerate: bool,
    pub log: Vec<String>,
}

impl VerificationReport {
    pub fn identity_ok(&self) -> bool {
        self.identity_violations.is_empty()
    }

    pub fn shape_ok(&self) -> bool {
        self.shape_violations.is_empty() && self.target_issues.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.identity_ok() && self.shape_ok()
    }

    /// 0 on success, 3 for shape violations, 2 for identity violations.
    pub fn exit_code(&self) -> i32 {
        if !self.shape_ok() {
            3
        } else if !self.identity_ok() {
            2
        } else {
            0
        }
    }
}

fn entry_shape_ok(p: &MultiPoly, n: u32) -> bool {
    match p.split_linear_t() {
        Some((_, g)) => g.is_homogeneous() && g.degree().is_none_or(|e| e == n),
        None => false,
    }
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-40i64..=40)), BigInt::from(rng.gen_range(1i64..=7)))
}

fn random_point<R: Rng + ?Sized>(field: &Arc<CycloField>, vars: usize, rng: &mut R) -> (Vec<CycloScalar>, CycloScalar) {
    let x = (0..vars).map(|_| CycloScalar::from_rational(field, random_rational(rng))).collect();
    (x, CycloScalar::from_rational(field, random_rational(rng)))
}

fn random_integer_point<R: Rng + ?Sized>(
    field: &Arc<CycloField>,
    vars: usize,
    rng: &mut R,
) -> (Vec<CycloScalar>, CycloScalar) {
    let mut draw = || CycloScalar::from_int(field, rng.gen_range(-40i64..=40));
    let x = (0..vars).map(|_| draw()).collect();
    (x, draw())
}

pub fn verify_root(root: &MatrixRoot) -> VerificationReport {
    verify_root_seeded(root, 0x5eed)
}

/// As [`verify_root`], with an explicit seed for the sampling used to
/// localize faults.
pub fn verify_root_seeded(root: &MatrixRoot, seed: u64) -> VerificationReport {
    let mut log = Vec::new();
    let ring = root.ring();
    let mut target_issues = Vec::new();
    let factors = root.factor_list();
    let m = root.size();
    if ring.t_weight() != Some(root.n) {
        target_issues.push(format!("ring {ring} does not give T weight {}", root.n));
    }
    if factors.len() != root.d as usize {
        target_issues.push(format!("{} factors for d = {}", factors.len(), root.d));
    }
    let mut degenerate = false;
    if ring.has_t() {
        let s = ring.t().pow(root.d) - root.target.clone();
        match s.split_linear_t() {
            Some((alpha, rest)) if alpha.is_zero() && s.terms().keys().all(|k| k.0[ring.num_vars()] == 0) => {
                if !rest.is_homogeneous() || rest.degree().is_some_and(|e| e != root.d * root.n) {
                    target_issues.push(format!("branch {rest} is not homogeneous of degree {}", root.d * root.n));
                }
                degenerate = rest.is_zero();
            }
            _ => target_issues.push(format!("target {} is not T^{} minus a T-free form", root.target, root.d)),
        }
    }
    if degenerate {
        log.push("degenerate branch: s = 0".to_string());
    }
    let mut shape_violations = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        if f.rows() != m || f.cols() != m {
            target_issues.push(format!("factor {} is {}x{}, expected {m}x{m}", k + 1, f.rows(), f.cols()));
            continue;
        }
        if matches!(root.factors, RootFactors::Power(_)) && k > 0 {
            continue;
        }
        for i in 0..m {
            for j in 0..m {
                let p = f.get(i, j);
                if !entry_shape_ok(p, root.n) {
                    shape_violations
                        .push(ShapeViolation { pos: EntryPos { factor: k, row: i, col: j }, entry: p.to_string() });
                }
            }
        }
    }
    if !target_issues.is_empty() {
        log.extend(target_issues.iter().cloned());
        return VerificationReport {
            identity_violations: Vec::new(),
            shape_violations,
            target_issues,
            suspects: Vec::new(),
            degenerate,
            log,
        };
    }
    let product = root.product();
    let identity_violations = product.scalar_identity_defects(&root.target);
    log.push(format!("product of {} factors of size {m}: {} defective positions", root.d, identity_violations.len()));
    log.push(format!("entry shape: {} violations", shape_violations.len()));
    let suspects = if identity_violations.is_empty() {
        Vec::new()
    } else {
        let s = localize(root, seed);
        log.push(format!("localized to {} candidate entries", s.len()));
        s
    };
    VerificationReport { identity_violations, shape_violations, target_issues, suspects, degenerate, log }
}

mod upoly {
    use crate::exactfield::CycloScalar;

    fn trim(mut p: Vec<CycloScalar>) -> Vec<CycloScalar> {
        while p.last().is_some_and(CycloScalar::is_zero) {
            p.pop();
        }
        p
    }

    fn rem(a: Vec<CycloScalar>, b: &[CycloScalar]) -> Vec<CycloScalar> {
        let mut a = trim(a);
        let lead_inv = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = a.last().unwrap().mul_unchecked(&lead_inv);
            for (k, bk) in b.iter().enumerate() {
                a[shift + k] = a[shift + k].sub_unchecked(&c.mul_unchecked(bk));
            }
            a = trim(a);
        }
        a
    }

    /// Whether the polynomials (coefficient lists, lowest degree first)
    /// share a root: either all vanish or their gcd has positive degree.
    pub fn have_common_root<I: IntoIterator<Item = Vec<CycloScalar>>>(polys: I) -> bool {
        let mut g: Option<Vec<CycloScalar>> = None;
        for p in polys {
            let p = trim(p);
            if p.is_empty() {
                continue;
            }
            let mut a = p;
            let mut b = match g.take() {
                None => {
                    if a.len() == 1 {
                        return false;
                    }
                    g = Some(a);
                    continue;
                }
                Some(b) => b,
            };
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            while !b.is_empty() {
                let r = rem(a, &b);
                a = b;
                b = r;
            }
            if a.len() == 1 {
                return false;
            }
            g = Some(a);
        }
        true
    }
}

fn vec_sub(a: &[CycloScalar], b: &[CycloScalar]) -> Vec<CycloScalar> {
    a.iter().zip(b).map(|(x, y)| x.sub_unchecked(y)).collect()
}

// One sampled test: returns the plausible single-entry faults at a random
// point, or `None` if the defect is invisible there.
#[allow(clippy::needless_range_loop)]
fn localize_once<R: Rng + ?Sized>(root: &MatrixRoot, rng: &mut R) -> Option<Vec<EntryPos>> {
    let ring = root.ring();
    let field = ring.field().clone();
    let m = root.size();
    let d = root.d as usize;
    let (x, t) = random_point(&field, ring.num_vars(), rng);
    let phi = root.target.eval(&x, Some(&t));
    let w: Vec<CycloScalar> = (0..m).map(|_| CycloScalar::from_rational(&field, random_rational(rng))).collect();
    let phi_w: Vec<CycloScalar> = w.iter().map(|c| c.mul_unchecked(&phi)).collect();
    let mut out = Vec::new();
    match &root.factors {
        RootFactors::Power(q) => {
            let mq = q.eval(&x, Some(&t));
            // powers[a] = M^a for a < d; pw[b] = M^b w for b ≤ d
            let mut powers = vec![ExactMatrix::identity(&field, m)];
            for a in 1..d {
                powers.push(powers[a - 1].mul(&mq));
            }
            let mut pw = vec![w.clone()];
            for b in 1..=d {
                pw.push(mq.mul_vec(&pw[b - 1]));
            }
            let r0 = vec_sub(&pw[d], &phi_w);
            if r0.iter().all(CycloScalar::is_zero) {
                return None;
            }
            let zero = CycloScalar::zero(&field);
            for i in 0..m {
                for j in 0..m {
                    // (M + tE_ij)^d w expanded in t: words with k copies of
                    // E_ij contribute col_i(M^a0) · H_k(d − k − a0).
                    let q_a: Vec<&CycloScalar> = (0..d).map(|a| powers[a].get(j, i)).collect();
                    let s_b: Vec<&CycloScalar> = (0..d).map(|b| &pw[b][j]).collect();
                    let mut h: Vec<Vec<CycloScalar>> = vec![Vec::new(); d + 1];
                    h[1] = s_b.iter().map(|c| (*c).clone()).collect();
                    for k in 2..=d {
                        h[k] = (0..d)
                            .map(|rem| {
                                let mut acc = zero.clone();
                                for a in 0..=rem {
                                    if !q_a[a].is_zero() && !h[k - 1][rem - a].is_zero() {
                                        acc.add_assign_unchecked(&q_a[a].mul_unchecked(&h[k - 1][rem - a]));
                                    }
                                }
                                acc
                            })
                            .collect();
                    }
                    let comps = (0..m).map(|row| {
                        let mut poly = vec![r0[row].clone()];
                        for k in 1..=d {
                            let mut c = zero.clone();
                            for a0 in 0..=(d - k) {
                                let col = powers[a0].get(row, i);
                                let hk = &h[k][d - k - a0];
                                if !col.is_zero() && !hk.is_zero() {
                                    c.add_assign_unchecked(&col.mul_unchecked(hk));
                                }
                            }
                            poly.push(c);
                        }
                        poly
                    });
                    if upoly::have_common_root(comps) {
                        out.push(EntryPos { factor: 0, row: i, col: j });
                    }
                }
            }
        }
        RootFactors::Product(bs) => {
            let mats: Vec<ExactMatrix> = bs.iter().map(|b| b.eval(&x, Some(&t))).collect();
            // right[k] = M_k ⋯ M_d w, left[k] = M_1 ⋯ M_{k-1}
            let mut right = vec![w.clone(); d + 1];
            for k in (0..d).rev() {
                right[k] = mats[k].mul_vec(&right[k + 1]);
            }
            let r0 = vec_sub(&right[0], &phi_w);
            if r0.iter().all(CycloScalar::is_zero) {
                return None;
            }
            let mut left = ExactMatrix::identity(&field, m);
            for (k, mk) in mats.iter().enumerate() {
                for i in 0..m {
                    for j in 0..m {
                        let sigma = &right[k + 1][j];
                        let comps = (0..m).map(|row| vec![r0[row].clone(), left.get(row, i).mul_unchecked(sigma)]);
                        if upoly::have_common_root(comps) {
                            out.push(EntryPos { factor: k, row: i, col: j });
                        }
                    }
                }
                left = left.mul(mk);
            }
        }
    }
    Some(out)
}

fn localize(root: &MatrixRoot, seed: u64) -> Vec<EntryPos> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut result: Option<Vec<EntryPos>> = None;
    let mut rounds = 0;
    for _ in 0..12 {
        if let Some(found) = localize_once(root, &mut rng) {
            result = Some(match result {
                None => found,
                Some(prev) => prev.into_iter().filter(|p| found.contains(p)).collect(),
            });
            rounds += 1;
            if rounds == 2 {
                break;
            }
        }
    }
    result.unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminantReport {
    /// `m / d`.
    pub exponent: u32,
    pub samples_used: usize,
    pub samples_skipped: usize,
    /// The common ratio `det(Q(p)) / f(p)^{m/d}`, when all samples agree.
    pub ratio: Option<CycloScalar>,
    /// The ratio raised to `lcm(2, d)` is rational.
    pub ratio_unit_times_rational: bool,
    /// Exact comparison `det(Q) = c·f^{m/d}`, done for sizes up to 9.
    pub symbolic: Option<bool>,
}

impl DeterminantReport {
    pub fn passed(&self) -> bool {
        self.ratio.is_some() && self.ratio_unit_times_rational && self.symbolic != Some(false)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Checks `det(Q) = c · f^{m/d}` for a fixed scalar `c`, on random points
/// and (for sizes up to 9) symbolically.
pub fn determinant_check<R: Rng + ?Sized>(
    root: &MatrixRoot,
    samples: usize,
    rng: &mut R,
) -> Result<DeterminantReport, MatfacError> {
    let q = root.first_factor();
    let m = q.rows();
    let exponent = (m / root.d as usize) as u32;
    let ring = root.ring();
    let field = ring.field().clone();
    let mut ratio: Option<CycloScalar> = None;
    let mut consistent = true;
    let mut used = 0;
    let mut skipped = 0;
    for _ in 0..samples.max(1) {
        let (x, t) = random_integer_point(&field, ring.num_vars(), rng);
        let fp = root.target.eval(&x, Some(&t));
        if fp.is_zero() {
            skipped += 1;
            continue;
        }
        used += 1;
        let det = q.eval(&x, Some(&t)).determinant();
        let c = det.try_div(&fp.pow(exponent as u64))?;
        match &ratio {
            None => ratio = Some(c),
            Some(prev) if *prev != c => consistent = false,
            _ => {}
        }
    }
    if used == 0 {
        return Err(MatfacError::AllSamplesSingular);
    }
    let ratio = if consistent { ratio } else { None };
    let unit = ratio.as_ref().is_some_and(|c| !c.is_zero() && c.pow(lcm(2, root.d) as u64).as_rational().is_some());
    let symbolic = if m <= 9 {
        let det = q.determinant();
        let fpow = root.target.pow(exponent);
        Some(match &ratio {
            Some(c) => det == fpow.scale(c),
            None => false,
        })
    } else {
        None
    };
    Ok(DeterminantReport {
        exponent,
        samples_used: used,
        samples_skipped: skipped,
        ratio,
        ratio_unit_times_rational: unit,
        symbolic,
    })
}

#[derive(Clone, Debug)]
pub struct UlrichOptions {
    /// Use the 2×2 pair when `d = 2` and the decomposition has one term.
    pub specialize: bool,
    /// Merge decomposition terms sharing all but one factor.
    pub compact: bool,
    pub det_samples: usize,
    pub seed: u64,
}

impl Default for UlrichOptions {
    fn default() -> Self {
        UlrichOptions { specialize: true, compact: true, det_samples: 5, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct UlrichCertificate {
    pub base: BaseVariety,
    pub n: u32,
    pub d: u32,
    pub decomposition: ProductDecomposition,
    pub root: MatrixRoot,
    pub rank: usize,
    pub verified: bool,
    pub log: Vec<String>,
}

/// Decomposes `s`, builds a matrix root of `T^d − s`, and verifies it.
pub fn ulrich_certificate(
    base: &BaseVariety,
    n: u32,
    d: u32,
    s: &MultiPoly,
    opts: &UlrichOptions,
) -> Result<UlrichCertificate, MatfacError> {
    let field = CycloField::new(d)?;
    let s = s.embed(&field)?;
    let mut log = Vec::new();
    let mut dec = decompose_in_image(base, n, d, &s)?;
    if opts.compact {
        dec = dec.compact();
    }
    log.push(format!("decomposed branch into {} products of {d} forms of degree {n}", dec.terms.len()));
    if dec.terms.is_empty() {
        return Err(MatfacError::EmptyDecomposition);
    }
    let expanded = dec.expand_in(s.ring());
    if expanded != s {
        log.push("decomposition agrees with the branch modulo the defining ideal".to_string());
    }
    let root = if opts.specialize && d == 2 && dec.terms.len() == 1 {
        log.push("using the 2x2 double cover pair".to_string());
        double_cover_root(&dec)?
    } else {
        clifford_root(&dec)?
    };
    log.push(format!("matrix root of size {}", root.size()));
    let report = verify_root_seeded(&root, opts.seed);
    log.extend(report.log.iter().cloned());
    if !report.passed() {
        return Err(MatfacError::VerificationFailed(log.join("; ")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let det = determinant_check(&root, opts.det_samples, &mut rng)?;
    log.push(format!(
        "determinant law: exponent {}, {} samples, ratio {}, symbolic {:?}",
        det.exponent,
        det.samples_used,
        det.ratio.as_ref().map_or("inconsistent".to_string(), |c| c.to_string()),
        det.symbolic
    ));
    if !det.passed() {
        return Err(MatfacError::VerificationFailed(log.join("; ")));
    }
    let rank = root.ulrich_rank();
    log.push(format!("rank {rank}"));
    Ok(UlrichCertificate { base: base.clone(), n, d, decomposition: dec, root, rank, verified: true, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedgeom::BaseVariety;

    fn ring_t(vars: usize, d: u32, n: u32) -> PolyRing {
        PolyRing::new(CycloField::new(d).unwrap(), vars).with_t(n)
    }

    fn dec_of(vars: usize, d: u32, n: u32, terms: &[&[&str]]) -> ProductDecomposition {
        let ring = PolyRing::rational(vars);
        let terms = terms.iter().map(|t| t.iter().map(|a| ring.parse(a).unwrap()).collect()).collect();
        ProductDecomposition::new(d, n, terms).unwrap()
    }

    #[test]
    fn cyclic_roots() {
        let ring = ring_t(2, 3, 1);
        let forms: Vec<MultiPoly> = ["x0", "x1", "x0 - 2*x1"].iter().map(|s| ring.parse(s).unwrap()).collect();
        let c = cyclic_root(&forms).unwrap();
        assert!(c.check());
        let two = cyclic_root(&forms[..2]).unwrap();
        assert_eq!(two.matrix.to_strings(), [["0", "x0"], ["x1", "0"]]);
        assert!(two.check());
        let x = ring.var(0);
        let cube = cyclic_root(&[x.clone(), x.clone(), x.clone()]).unwrap();
        assert!(cube.matrix.pow(3).is_scalar_identity(&x.pow(3)));
        let bad = [ring.parse("x0").unwrap(), ring.parse("x0^2").unwrap()];
        assert!(matches!(cyclic_root(&bad), Err(MatfacError::DegreeMismatch { .. })));
    }

    #[test]
    fn weyl_pair_commutation() {
        for d in 2..=6u32 {
            let ring = ring_t(2, d, 1);
            let clock = clock_matrix(&ring, d);
            let forms: Vec<MultiPoly> = (0..d).map(|k| ring.parse(&format!("x0 + {}*x1", k + 1)).unwrap()).collect();
            let shift = cyclic_root(&forms).unwrap().matrix;
            let zeta = CycloScalar::zeta(ring.field());
            assert_eq!(shift.mul(&clock), clock.mul(&shift).scale(&zeta));
            assert!(clock.pow(d).is_scalar_identity(&ring.one()));
        }
    }

    #[test]
    fn clifford_block_identities() {
        let dec = dec_of(3, 3, 1, &[&["x0", "x1", "x2"], &["x0 + x1", "x2", "x1 - x0"]]);
        let blocks = clifford_blocks(&dec).unwrap();
        let zeta = CycloScalar::zeta(blocks[0].ring().field());
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                assert_eq!(blocks[i].mul(&blocks[j]), blocks[j].mul(&blocks[i]).scale(&zeta));
            }
        }
        let ring = blocks[0].ring().clone();
        assert!(blocks[0].pow(3).is_scalar_identity(&ring.t().pow(3)));
        let prod = ring.parse("x0*x1*x2").unwrap().neg();
        assert!(blocks[1].pow(3).is_scalar_identity(&prod));
    }

    #[test]
    fn clifford_root_examples() {
        let dec = dec_of(3, 2, 1, &[&["x0", "x1"]]);
        let root = clifford_root(&dec).unwrap();
        assert_eq!(root.size(), 4);
        assert_eq!(root.target.to_string(), "T^2 - x0*x1");
        assert!(verify_root(&root).passed());

        let dec = dec_of(2, 2, 1, &[&["-x0", "x0"], &["-x1", "x1"]]);
        let root = clifford_root(&dec).unwrap();
        assert_eq!(root.size(), 8);
        assert_eq!(root.target.to_string(), "T^2 + x0^2 + x1^2");
        assert!(verify_root(&root).passed());

        let dec = dec_of(2, 3, 1, &[&["x0", "x1", "x0 + x1"]]);
        let root = clifford_root(&dec).unwrap();
        assert_eq!(root.size(), 9);
        assert!(root.product().is_scalar_identity(&root.target));
        for k in 0..root.size() {
            for l in 0..root.size() {
                assert!(entry_shape_ok(root.first_factor().get(k, l), 1));
            }
        }
    }

    #[test]
    fn double_cover_pairs() {
        let ring = ring_t(3, 2, 1);
        let a = ring.parse("x0 + x1").unwrap();
        let b = ring.parse("x2 - 3*x0").unwrap();
        let (b1, b2) = double_cover_mf(&a, &b).unwrap();
        let f = ring.t().pow(2) - &a * &b;
        assert!(b1.mul(&b2).is_scalar_identity(&f));
        assert_eq!(b1.determinant(), f);
        let (z1, z2) = double_cover_mf(&a, &ring.zero()).unwrap();
        assert!(z1.mul(&z2).is_scalar_identity(&ring.t().pow(2)));
        let c = ring.parse("x0^2").unwrap();
        assert!(double_cover_mf(&a, &c).is_err());
    }

    #[test]
    fn subset_determinant_matches_elimination() {
        let ring = ring_t(2, 3, 1);
        let dec = dec_of(2, 3, 1, &[&["x0", "x1", "x0 - x1"]]);
        let q = clifford_root(&dec).unwrap().first_factor().clone();
        let field = ring.field().clone();
        let x = vec![CycloScalar::from_int(&field, 2), CycloScalar::from_ratio(&field, -1, 3)];
        let t = CycloScalar::from_int(&field, 5);
        assert_eq!(q.determinant().eval(&x, Some(&t)), q.eval(&x, Some(&t)).determinant());
    }

    #[test]
    fn determinant_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dec = dec_of(3, 2, 1, &[&["x0", "x1 + x2"]]);
        let root = clifford_root(&dec).unwrap();
        let rep = determinant_check(&root, 5, &mut rng).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.exponent, 2);
        assert_eq!(rep.symbolic, Some(true));
        assert!(rep.ratio.unwrap().is_one());

        let dec = dec_of(2, 3, 1, &[&["x0", "x1", "x0 + 2*x1"]]);
        let rep = determinant_check(&clifford_root(&dec).unwrap(), 5, &mut rng).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.exponent, 3);

        let dc = double_cover_root(&dec_of(2, 2, 1, &[&["x0", "x1"]])).unwrap();
        let rep = determinant_check(&dc, 5, &mut rng).unwrap();
        assert_eq!((rep.exponent, rep.symbolic), (1, Some(true)));
    }

    #[test]
    fn singular_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut root = clifford_root(&dec_of(2, 2, 1, &[&["x0", "x1"]])).unwrap();
        root.target = root.ring().zero();
        assert_eq!(determinant_check(&root, 4, &mut rng), Err(MatfacError::AllSamplesSingular));
    }

    #[test]
    fn faults_are_localized() {
        let dec = dec_of(3, 3, 1, &[&["x0", "x1", "x2"], &["x1", "x1 - x2", "x0"]]);
        let mut root = clifford_root(&dec).unwrap();
        let RootFactors::Power(q) = &mut root.factors else { unreachable!() };
        let bump = q.ring().var(0);
        let e = q.get(4, 7).clone() + bump;
        q.set(4, 7, e);
        let rep = verify_root(&root);
        assert_eq!(rep.exit_code(), 2);
        assert_eq!(rep.suspects, vec![EntryPos { factor: 0, row: 4, col: 7 }]);

        let mut dc = double_cover_root(&dec_of(2, 2, 1, &[&["x0", "x1"]])).unwrap();
        let RootFactors::Product(bs) = &mut dc.factors else { unreachable!() };
        let e = bs[1].get(1, 0).clone() + bs[1].ring().var(1);
        bs[1].set(1, 0, e);
        let rep = verify_root(&dc);
        assert!(rep.suspects.contains(&EntryPos { factor: 1, row: 1, col: 0 }));
    }

    #[test]
    fn shape_faults() {
        let mut root = clifford_root(&dec_of(2, 2, 1, &[&["x0", "x1"]])).unwrap();
        let RootFactors::Power(q) = &mut root.factors else { unreachable!() };
        let e = q.get(0, 1).clone() + q.ring().var(0).pow(2);
        q.set(0, 1, e);
        let rep = verify_root(&root);
        assert_eq!(rep.exit_code(), 3);
        assert_eq!(rep.shape_violations[0].pos, EntryPos { factor: 0, row: 0, col: 1 });
    }

    #[test]
    fn certificates() {
        let p2 = BaseVariety::projective_space(2);
        let s = p2.ring().parse("x0^2 + x1*x2").unwrap();
        let cert = ulrich_certificate(&p2, 1, 2, &s, &UlrichOptions::default()).unwrap();
        assert_eq!((cert.rank, cert.root.size()), (4, 8));
        assert!(cert.verified);

        let p1 = BaseVariety::projective_space(1);
        let s = p1.ring().parse("x0*x1").unwrap();
        let cert = ulrich_certificate(&p1, 1, 2, &s, &UlrichOptions::default()).unwrap();
        assert_eq!(cert.rank, 1);
        let opts = UlrichOptions { specialize: false, ..Default::default() };
        assert_eq!(ulrich_certificate(&p1, 1, 2, &s, &opts).unwrap().rank, 2);

        assert_eq!(
            ulrich_certificate(&p1, 1, 2, &p1.ring().zero(), &opts).unwrap_err(),
            MatfacError::EmptyDecomposition
        );
    }
}
