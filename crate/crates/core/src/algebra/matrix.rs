//! Dense matrices over a finite field, with exact elimination.
//!
//! Every matrix owns a single [`FieldSpec`]; entries are validated to share
//! it at construction. Elimination is deterministic (leftmost pivot, topmost
//! row), so reduced forms are canonical and usable for code equality.

use std::sync::Arc;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl Matrix {
    pub fn new(
        field: Arc<FieldSpec>,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != &field) {
            return Err(Error::OwnerMismatch);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(field: &Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        Matrix {
            field: Arc::clone(field),
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Arc<FieldSpec>, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    /// Build from rows of element indices (convenience for tests and fixtures).
    pub fn from_rows_of_indices(field: &Arc<FieldSpec>, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&i| field.from_index(i)))
            .collect();
        Matrix::new(Arc::clone(field), r, c, entries)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElement {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn col(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::OwnerMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zero(&self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let prod = a * rhs.at(k, c);
                    *out.at_mut(r, c) = out.at(r, c) + &prod;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v` has length `rows`, result length `cols`.
    pub fn row_vec_mul(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "row vector of length {} times {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![self.field.zero(); self.cols];
        for (r, coef) in v.iter().enumerate() {
            if coef.field() != &self.field {
                return Err(Error::OwnerMismatch);
            }
            if coef.is_zero() {
                continue;
            }
            for (c, acc) in out.iter_mut().enumerate() {
                *acc = &*acc + &(coef * self.at(r, c));
            }
        }
        Ok(out)
    }

    /// Stack the rows of `self` on top of the rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field || self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack shape".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix::new(
            Arc::clone(&self.field),
            self.rows + other.rows,
            self.cols,
            entries,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Entry-wise embedding into an extension field.
    pub fn embed_into(&self, target: &Arc<FieldSpec>) -> Result<Matrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed_into(target))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(Arc::clone(target), self.rows, self.cols, entries)
    }

    /// Reduced row-echelon form: leftmost pivots, topmost rows, pivots
    /// scaled to one, all other pivot-column entries cleared.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(src) = found else { continue };
            if src != pivot_row {
                for c in 0..m.cols {
                    let tmp = m.at(src, c).clone();
                    *m.at_mut(src, c) = m.at(pivot_row, c).clone();
                    *m.at_mut(pivot_row, c) = tmp;
                }
            }
            let inv = m.at(pivot_row, col).inv().expect("pivot nonzero");
            for c in 0..m.cols {
                *m.at_mut(pivot_row, c) = m.at(pivot_row, c) * &inv;
            }
            for r in 0..m.rows {
                if r == pivot_row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in 0..m.cols {
                    let sub = &factor * m.at(pivot_row, c);
                    *m.at_mut(r, c) = m.at(r, c) - &sub;
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
        Rref {
            matrix: m,
            rank: pivot_cols.len(),
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel {v : M·v = 0}, returned as the columns of
    /// an cols×(cols−rank) matrix. Free columns are taken in ascending order,
    /// so the basis is deterministic.
    pub fn null_space(&self) -> Matrix {
        let Rref {
            matrix: r,
            rank,
            pivot_cols,
        } = self.rref();
        let nullity = self.cols - rank;
        let mut out = Matrix::zero(&self.field, self.cols, nullity);
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        for (j, &fc) in free_cols.iter().enumerate() {
            *out.at_mut(fc, j) = self.field.one();
            for (pi, &pc) in pivot_cols.iter().enumerate() {
                // Row pi of the rref reads v[pc] + sum over free cols = 0.
                *out.at_mut(pc, j) = r.at(pi, fc).neg();
            }
        }
        out
    }
}

/// Solve `e · A = s` for the unique row vector `e` (A: R×C, s: length C).
///
/// Errors with [`Error::NoSolution`] when the system is inconsistent and
/// [`Error::AmbiguousSolution`] when A is not of full row rank (so the
/// solution would not be unique).
pub fn solve_row_system(a: &Matrix, s: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if s.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} vs {} columns",
            s.len(),
            a.cols()
        )));
    }
    // Transpose to the column problem Aᵀ·eᵀ = sᵀ and eliminate the augmented
    // matrix [Aᵀ | sᵀ].
    let at = a.transpose();
    let field = Arc::clone(a.field());
    let mut entries = Vec::with_capacity(at.rows() * (at.cols() + 1));
    for (row, rhs) in at.rows_iter().zip(s) {
        entries.extend(row.iter().cloned());
        entries.push(rhs.clone());
    }
    let aug = Matrix::new(Arc::clone(&field), at.rows(), at.cols() + 1, entries)?;
    let Rref {
        matrix: red,
        rank: _,
        pivot_cols,
    } = aug.rref();
    if pivot_cols.contains(&at.cols()) {
        return Err(Error::NoSolution);
    }
    let coeff_rank = pivot_cols.len();
    if coeff_rank < a.rows() {
        return Err(Error::AmbiguousSolution);
    }
    let mut e = vec![field.zero(); a.rows()];
    for (pi, &pc) in pivot_cols.iter().enumerate() {
        e[pc] = red.at(pi, at.cols()).clone();
    }
    Ok(e)
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| format!("{e:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
