//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! Vectors are plain `Vec<Scalar>` columns. Subspaces are stored as an RREF
//! basis, so two subspaces are equal exactly when their bases are.

use std::fmt;

use thiserror::Error;

use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entries belong to {found}, matrix is over {expected}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },
}

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: FieldSpec, n: usize) -> Vector {
    vec![Scalar::zero(field); n]
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = Scalar::one(field);
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `a + c * b`
pub(crate) fn axpy(a: &mut [Scalar], c: &Scalar, b: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = &*x + &(c * y);
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn diagonal(field: FieldSpec, diag: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries over `field`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vector>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for x in &row {
                if x.field() != field {
                    return Err(LinalgError::FieldMismatch {
                        expected: field,
                        found: x.field(),
                    });
                }
            }
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[Vector]) -> Result<Self, LinalgError> {
        Ok(Matrix::from_rows(field, rows, cols.to_vec())?.transpose())
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_i64(x, field)).collect())
            .collect();
        Matrix::from_rows(field, cols, rows).expect("ragged integer matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    let v = cur + &(a * rhs.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, LinalgError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.row_vectors();
        let pivots = rref_in_place(&mut rows);
        rows.truncate(pivots.len());
        let m = Matrix::from_rows(self.field, self.cols, rows).expect("rref keeps shape");
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = unit_vector(self.field, self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span(self.field, self.cols, &vectors).expect("kernel vectors have ambient length")
    }

    pub fn trace(&self) -> Result<Scalar, LinalgError> {
        self.require_square()?;
        Ok((0..self.rows).fold(Scalar::zero(self.field), |acc, i| &acc + self.get(i, i)))
    }

    /// `ad - bc` for a 2x2 matrix.
    pub fn det2(&self) -> Result<Scalar, LinalgError> {
        if (self.rows, self.cols) != (2, 2) {
            return Err(LinalgError::DimensionMismatch {
                expected: 4,
                found: self.rows * self.cols,
            });
        }
        Ok(&(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)))
    }

    /// Determinant by elimination.
    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut rows = self.row_vectors();
        let mut det = Scalar::one(self.field);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return Ok(Scalar::zero(self.field));
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let factor = -(&rows[r][col] * &inv);
                let (top, bottom) = rows.split_at_mut(r);
                axpy(&mut bottom[0], &factor, &top[col]);
            }
        }
        Ok(det)
    }

    /// Exact inverse, `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Some(self.clone()));
        }
        let mut rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vector(self.field, n, i));
                r
            })
            .collect();
        let pivots = rref_in_place(&mut rows);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        let inv_rows = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Some(Matrix::from_rows(self.field, n, inv_rows)?))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Solves `self * x = b`; free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut rows: Vec<Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref_in_place(&mut rows);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vector(self.field, self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = rows[row][self.cols].clone();
        }
        Ok(Some(x))
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// The matrix of a linear map restricted to an invariant subspace,
    /// expressed in the subspace's RREF basis. `None` if `s` is not invariant.
    pub fn restrict(&self, s: &Subspace) -> Result<Option<Matrix>, LinalgError> {
        self.require_square()?;
        if s.ambient_dim() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: s.ambient_dim(),
            });
        }
        let mut cols = Vec::with_capacity(s.dim());
        for b in s.basis_vectors() {
            let image = self.mul_vec(&b)?;
            match s.coordinates(&image) {
                Some(c) => cols.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(self.field, s.dim(), &cols)?))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>[", self.field)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Gauss-Jordan elimination in place; zero rows end up at the bottom.
fn rref_in_place(rows: &mut [Vector]) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        rows[r] = scale_vector(&inv, &rows[r]);
        for i in 0..n_rows {
            if i != r && !rows[i][c].is_zero() {
                let factor = -rows[i][c].clone();
                let pivot_row = rows[r].clone();
                axpy(&mut rows[i], &factor, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A linear subspace of `K^n`, stored as an RREF basis without zero rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<Self, LinalgError> {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec())?;
        let (basis, pivots) = m.rref();
        Ok(Subspace { ambient, basis, pivots })
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    /// Coordinates of `v` in the RREF basis, `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = zero_vector(self.field(), self.ambient);
        for (i, c) in coords.iter().enumerate() {
            axpy(&mut rebuilt, c, self.basis.row(i));
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            })
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Subspace::span(self.field(), self.ambient, &vectors)
    }

    /// Lattice meet, via the kernel of `[S^T | -T^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let field = self.field();
        let (ds, dt) = (self.dim(), other.dim());
        let mut system = Matrix::zeros(field, self.ambient, ds + dt);
        for k in 0..self.ambient {
            for i in 0..ds {
                system.set(k, i, self.basis.get(i, k).clone());
            }
            for j in 0..dt {
                system.set(k, ds + j, -other.basis.get(j, k));
            }
        }
        let vectors: Vec<Vector> = system
            .kernel()
            .basis_vectors()
            .iter()
            .map(|sol| {
                let mut v = zero_vector(field, self.ambient);
                for (i, c) in sol[..ds].iter().enumerate() {
                    axpy(&mut v, c, self.basis.row(i));
                }
                v
            })
            .collect();
        Subspace::span(field, self.ambient, &vectors)
    }

    /// Invertible matrix whose first rows are this subspace's RREF basis,
    /// completed greedily by the lowest-index standard vectors not yet spanned.
    pub fn extend_to_full_basis(&self) -> Matrix {
        let field = self.field();
        let mut rows = self.basis_vectors();
        let mut current = self.clone();
        for i in 0..self.ambient {
            if current.is_full() {
                break;
            }
            let e = unit_vector(field, self.ambient, i);
            if !current.contains(&e) {
                rows.push(e);
                current = Subspace::span(field, self.ambient, &rows).expect("same ambient");
            }
        }
        Matrix::from_rows(field, self.ambient, rows).expect("square basis")
    }

    /// The standard vectors chosen by [`Subspace::extend_to_full_basis`].
    pub fn complement_vectors(&self) -> Vec<Vector> {
        self.extend_to_full_basis().row_vectors()[self.dim()..].to_vec()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient, self.basis)
    }
}
