//! Dense matrices over an exact field, with Gauss-Jordan elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, GaloisField};

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    pub reduced: Matrix<F>,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn from_vec(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|e| !field.contains(e)) {
            return Err(Error::SpecMismatch(format!(
                "{bad:?} is not an element of {field:?}"
            )));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn scalar(field: F, n: usize, c: F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Column vector.
    pub fn column(field: F, v: Vec<F::Elem>) -> Result<Self> {
        let n = v.len();
        Self::from_vec(field, n, 1, v)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<F::Elem> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        self.field.is_one(e)
                    } else {
                        self.field.is_zero(e)
                    }
                })
            })
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch(format!(
                "{:?} vs {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without field or shape validation; callers guarantee both.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    let a = &self.data[i * self.cols + k];
                    if f.is_zero(a) {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(a, &other.data[k * other.cols + j]));
                }
                data.push(acc);
            }
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// `self * v` for a vector of matching length.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        debug_assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(
                "subtraction of differently shaped matrices".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self - I`, whose kernel is the fixed space of `self`.
    pub fn minus_identity(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "fixed space of a non-square matrix".into(),
            ));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let d = out.get(i, i).clone();
            out.set(i, i, self.field.sub(&d, &self.field.one()));
        }
        Ok(out)
    }

    pub fn echelon(&self) -> Echelon<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space `{v : A v = 0}`, one vector per free
    /// column: the vector has a 1 at its free column and 0 at the others.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(r, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        let mut out = Matrix::zeros(f.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, reduced.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn map_entries<G: Field>(&self, field: G, f: impl Fn(&F::Elem) -> G::Elem) -> Matrix<G> {
        Matrix {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_text(&self) -> Vec<String> {
        self.data
            .iter()
            .map(|e| self.field.format_elem(e))
            .collect()
    }
}

impl Matrix<GaloisField> {
    pub fn lift(&self, emb: &Embedding) -> Result<Matrix<GaloisField>> {
        if &self.field != emb.base() {
            return Err(Error::SpecIncompatible(format!(
                "matrix over {:?}, embedding from {:?}",
                self.field,
                emb.base()
            )));
        }
        Ok(self.map_entries(emb.ext().clone(), |e| emb.map(e)))
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.format_elem(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Elementary matrix `E_{rc}` (1-based indices), the single-entry matrix.
pub fn elementary<F: Field>(field: F, n: usize, r: usize, c: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(field, n, n);
    let one = m.field.one();
    m.set(r - 1, c - 1, one);
    m
}
