//! Dense exact linear algebra over Q(ζ_d).

use std::sync::Arc;

use thiserror::Error;

use crate::exactfield::{CycloField, CycloScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not in the span")]
    NotInSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Arc<CycloField>,
    entries: Vec<CycloScalar>,
}

impl ExactMatrix {
    pub fn zeros(field: &Arc<CycloField>, rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, field: field.clone(), entries: vec![CycloScalar::zero(field); rows * cols] }
    }

    pub fn identity(field: &Arc<CycloField>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, CycloScalar::one(field));
        }
        m
    }

    /// Rows must all have length `cols`.
    pub fn from_rows(field: &Arc<CycloField>, cols: usize, rows: Vec<Vec<CycloScalar>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r);
        }
        ExactMatrix { rows: n, cols, field: field.clone(), entries }
    }

    pub fn from_ints(field: &Arc<CycloField>, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| CycloScalar::from_int(field, v)).collect()).collect();
        Self::from_rows(field, cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    // row[target] -= factor * row[source]
    fn eliminate(&mut self, target: usize, source: usize, factor: &CycloScalar, from_col: usize) {
        for j in from_col..self.cols {
            let s = &self.entries[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let delta = factor.mul_unchecked(s);
            let t = &mut self.entries[target * self.cols + j];
            *t = t.sub_unchecked(&delta);
        }
    }

    /// Reduces in place to reduced row-echelon form and returns the pivot
    /// columns. Pivot choice is the first nonzero entry at or below the
    /// current row, scanning columns left to right.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = &self.entries[r * self.cols + j];
                if !v.is_zero() {
                    self.entries[r * self.cols + j] = v.mul_unchecked(&inv);
                }
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let factor = self.get(i, c).clone();
                    self.eliminate(i, r, &factor, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Row space as a [`Subspace`], together with the rank.
    pub fn rref(&self) -> (Subspace, usize) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        m.entries.truncate(rank * m.cols);
        m.rows = rank;
        (Subspace { ambient_dim: self.cols, basis: m, pivots }, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// A particular solution of `self · x = b` (free variables set to zero),
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[CycloScalar]) -> Result<Option<Vec<CycloScalar>>, LinearError> {
        if b.len() != self.rows {
            return Err(LinearError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut aug = Self::zeros(&self.field, self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![CycloScalar::zero(&self.field); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Determinant by fraction-reducing elimination.
    pub fn determinant(&self) -> CycloScalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = CycloScalar::one(&self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return CycloScalar::zero(&self.field);
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul_unchecked(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            let support: Vec<usize> = (c..n).filter(|&j| !m.get(c, j).is_zero()).collect();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).mul_unchecked(&inv);
                for &j in &support {
                    let delta = factor.mul_unchecked(m.get(c, j));
                    let t = &mut m.entries[i * n + j];
                    *t = t.sub_unchecked(&delta);
                }
            }
        }
        det
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j].add_assign_unchecked(&a.mul_unchecked(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = CycloScalar::zero(&self.field);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign_unchecked(&a.mul_unchecked(b));
                    }
                }
                acc
            })
            .collect()
    }
}

/// A subspace of `field^ambient_dim`, stored as a basis in reduced
/// row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors.
    pub fn span(field: &Arc<CycloField>, ambient_dim: usize, vectors: Vec<Vec<CycloScalar>>) -> Self {
        ExactMatrix::from_rows(field, ambient_dim, vectors).rref().0
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Coordinates of `v` with respect to the stored basis rows.
    pub fn solve_membership(&self, v: &[CycloScalar]) -> Result<Vec<CycloScalar>, LinearError> {
        if v.len() != self.ambient_dim {
            return Err(LinearError::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        // In reduced echelon form the coordinate on row k is v[pivot_k].
        let coords: Vec<CycloScalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if self.residual(v).iter().all(CycloScalar::is_zero) {
            Ok(coords)
        } else {
            Err(LinearError::NotInSpan)
        }
    }

    pub fn contains(&self, v: &[CycloScalar]) -> bool {
        self.solve_membership(v).is_ok()
    }

    /// `v` minus its projection along the pivot coordinates; zero exactly
    /// when `v` lies in the subspace. The pivot entries of the result are
    /// always zero.
    pub fn residual(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        let mut out = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(k).iter().enumerate() {
                if !b.is_zero() {
                    out[j] = out[j].sub_unchecked(&c.mul_unchecked(b));
                }
            }
        }
        out
    }

    /// Coordinates outside the pivot set; their unit vectors complement the
    /// subspace.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&j| !is_pivot[j]).collect()
    }
}
