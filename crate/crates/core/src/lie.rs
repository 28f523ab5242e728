//! Lie algebras given by structure constants.
//!
//! `[e_i, e_j] = sum_k c[i][j][k] e_k` over a fixed [`FieldSpec`].

use std::fmt;

use thiserror::Error;

use crate::linalg::{axpy, is_zero_vector, unit_vector, zero_vector, LinalgError, Matrix, Subspace, Vector};
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("not a Lie algebra: {0}")]
    Invalid(AxiomViolation),
    #[error("vector length {found} does not match algebra dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("change-of-basis matrix is singular or has the wrong size")]
    SingularBasis,
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("subspace is not closed under the bracket")]
    NotSubalgebra,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The first axiom failure found by [`StructureTensor::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `[e_i, e_i]` has a nonzero `e_k` component.
    NotAlternating { i: usize, k: usize },
    /// `c[i][j][k] != -c[j][i][k]`.
    NotAntisymmetric { i: usize, j: usize, k: usize },
    /// The cyclic sum for the triple `(i, j, k)` is `residual`, not zero.
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        residual: Vec<Scalar>,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::NotAlternating { i, k } => {
                write!(f, "[b{i},b{i}] has nonzero b{k} coefficient")
            }
            AxiomViolation::NotAntisymmetric { i, j, k } => {
                write!(f, "[b{i},b{j}] and [b{j},b{i}] disagree in the b{k} coefficient")
            }
            AxiomViolation::Jacobi { i, j, k, residual } => {
                let r: Vec<String> = residual.iter().map(|x| x.to_string()).collect();
                write!(
                    f,
                    "Jacobi identity fails on ({i},{j},{k}); cyclic sum = ({})",
                    r.join(", ")
                )
            }
        }
    }
}

/// Structure constants of an `n`-dimensional algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StructureTensor {
    field: FieldSpec,
    dim: usize,
    coeffs: Vec<Scalar>,
}

impl StructureTensor {
    /// The abelian (all-zero) tensor.
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        StructureTensor {
            field,
            dim,
            coeffs: vec![Scalar::zero(field); dim * dim * dim],
        }
    }

    /// Builds a tensor from `n^3` raw coefficients in `[i][j][k]` order.
    /// Axioms are not checked here.
    pub fn from_coefficients(field: FieldSpec, dim: usize, coeffs: Vec<Scalar>) -> Result<Self, LieError> {
        if coeffs.len() != dim * dim * dim {
            return Err(LieError::LengthMismatch {
                expected: dim * dim * dim,
                found: coeffs.len(),
            });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(LieError::FieldMismatch(field, bad.field()));
        }
        Ok(StructureTensor { field, dim, coeffs })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.coeffs[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let idx = self.idx(i, j, k);
        self.coeffs[idx] = v;
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Sets `[e_i, e_j] = value` and `[e_j, e_i] = -value`.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: &[Scalar]) {
        assert_eq!(value.len(), self.dim);
        for (k, v) in value.iter().enumerate() {
            self.set(i, j, k, v.clone());
            self.set(j, i, k, -v);
        }
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        let start = self.idx(i, j, 0);
        self.coeffs[start..start + self.dim].to_vec()
    }

    pub fn is_abelian(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Checks alternation, antisymmetry and the Jacobi identity on basis
    /// triples; reports the first failure.
    pub fn validate(&self) -> Result<(), AxiomViolation> {
        let n = self.dim;
        for i in 0..n {
            for k in 0..n {
                if !self.get(i, i, k).is_zero() {
                    return Err(AxiomViolation::NotAlternating { i, k });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if *self.get(i, j, k) != -self.get(j, i, k) {
                        return Err(AxiomViolation::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        // Jacobi is alternating once the bracket is, so i < j < k suffices.
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let ei = unit_vector(self.field, n, i);
                    let ej = unit_vector(self.field, n, j);
                    let ek = unit_vector(self.field, n, k);
                    let mut sum = self.raw_bracket(&ei, &self.basis_bracket(j, k));
                    let t2 = self.raw_bracket(&ej, &self.basis_bracket(k, i));
                    let t3 = self.raw_bracket(&ek, &self.basis_bracket(i, j));
                    axpy(&mut sum, &Scalar::one(self.field), &t2);
                    axpy(&mut sum, &Scalar::one(self.field), &t3);
                    if !is_zero_vector(&sum) {
                        return Err(AxiomViolation::Jacobi { i, j, k, residual: sum });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn require_valid(&self) -> Result<(), LieError> {
        self.validate().map_err(LieError::Invalid)
    }

    fn check_len(&self, v: &[Scalar]) -> Result<(), LieError> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(LieError::LengthMismatch {
                expected: self.dim,
                found: v.len(),
            })
        }
    }

    pub(crate) fn raw_bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim;
        let mut out = zero_vector(self.field, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                let start = self.idx(i, j, 0);
                axpy(&mut out, &c, &self.coeffs[start..start + n]);
            }
        }
        out
    }

    /// Bilinear bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, LieError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.raw_bracket(x, y))
    }

    /// The same algebra written in the basis `{P e_i}` (columns of `p`).
    pub fn change_of_basis(&self, p: &Matrix) -> Result<StructureTensor, LieError> {
        if p.rows() != self.dim || p.field() != self.field {
            return Err(LieError::SingularBasis);
        }
        let inv = p.inverse()?.ok_or(LieError::SingularBasis)?;
        let cols = p.columns();
        let mut out = StructureTensor::zero(self.field, self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let image = self.raw_bracket(&cols[i], &cols[j]);
                let coords = inv.mul_vec(&image)?;
                out.set_bracket(i, j, &coords);
            }
        }
        Ok(out)
    }

    /// Span of all `[e_i, e_j]`.
    pub fn commutator(&self) -> Result<Subspace, LieError> {
        self.require_valid()?;
        Ok(self.commutator_unchecked())
    }

    fn commutator_unchecked(&self) -> Subspace {
        self.bracket_span(&Subspace::full(self.field, self.dim))
    }

    /// `[S, S]` for the span of the RREF basis of `s`.
    fn bracket_span(&self, s: &Subspace) -> Subspace {
        let basis = s.basis_vectors();
        let mut vectors = Vec::new();
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let v = self.raw_bracket(&basis[a], &basis[b]);
                if !is_zero_vector(&v) {
                    vectors.push(v);
                }
            }
        }
        Subspace::span(self.field, self.dim, &vectors).expect("ambient length")
    }

    /// `D^0 = L, D^{k+1} = [D^k, D^k]`, stopping once a term repeats.
    pub fn derived_series(&self) -> Result<Vec<Subspace>, LieError> {
        self.require_valid()?;
        let mut series = vec![Subspace::full(self.field, self.dim)];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_span(last);
            if &next == last {
                break;
            }
            series.push(next);
        }
        Ok(series)
    }

    pub fn derived_dims(&self) -> Result<Vec<usize>, LieError> {
        Ok(self.derived_series()?.iter().map(Subspace::dim).collect())
    }

    pub fn is_solvable(&self) -> Result<bool, LieError> {
        Ok(self.derived_series()?.last().is_some_and(Subspace::is_zero))
    }

    /// Joint kernel of all `ad(e_j)`.
    pub fn center(&self) -> Result<Subspace, LieError> {
        self.require_valid()?;
        let n = self.dim;
        // row (j, k), column i: coefficient of e_k in [e_i, e_j]
        let mut stacked = Matrix::zeros(self.field, n * n, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    stacked.set(j * n + k, i, self.get(i, j, k).clone());
                }
            }
        }
        Ok(stacked.kernel())
    }

    /// Matrix of `ad(x) = [x, .]`; column `j` is `[x, e_j]`.
    pub fn ad(&self, x: &[Scalar]) -> Result<Matrix, LieError> {
        self.check_len(x)?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.raw_bracket(x, &unit_vector(self.field, self.dim, j)))
            .collect();
        Ok(Matrix::from_columns(self.field, self.dim, &cols)?)
    }

    /// `ad(x)` restricted to an invariant subspace, in its RREF basis.
    pub fn restricted_ad(&self, x: &[Scalar], s: &Subspace) -> Result<Option<Matrix>, LieError> {
        Ok(self.ad(x)?.restrict(s)?)
    }

    pub fn is_ideal(&self, s: &Subspace) -> Result<bool, LieError> {
        if s.ambient_dim() != self.dim {
            return Err(LieError::LengthMismatch {
                expected: self.dim,
                found: s.ambient_dim(),
            });
        }
        let basis = s.basis_vectors();
        Ok((0..self.dim).all(|i| {
            let ei = unit_vector(self.field, self.dim, i);
            basis.iter().all(|v| s.contains(&self.raw_bracket(&ei, v)))
        }))
    }

    /// The bracket restricted to a subalgebra, in coordinates of its RREF basis.
    pub fn subalgebra(&self, s: &Subspace) -> Result<StructureTensor, LieError> {
        if s.ambient_dim() != self.dim {
            return Err(LieError::LengthMismatch {
                expected: self.dim,
                found: s.ambient_dim(),
            });
        }
        let basis = s.basis_vectors();
        let m = basis.len();
        let mut out = StructureTensor::zero(self.field, m);
        for a in 0..m {
            for b in a + 1..m {
                let v = self.raw_bracket(&basis[a], &basis[b]);
                let coords = s.coordinates(&v).ok_or(LieError::NotSubalgebra)?;
                out.set_bracket(a, b, &coords);
            }
        }
        Ok(out)
    }

    /// Induced bracket on `L / I`, on the greedy standard-vector complement of
    /// `I`, together with the projection `K^n -> K^(n - dim I)`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient, LieError> {
        self.require_valid()?;
        if !self.is_ideal(ideal)? {
            return Err(LieError::NotIdeal);
        }
        let n = self.dim;
        let d = ideal.dim();
        let m = n - d;
        let basis = ideal.extend_to_full_basis();
        // x = basis^T c  =>  c = (basis^T)^{-1} x
        let to_coords = basis.transpose().inverse()?.expect("extended basis is invertible");
        let proj_rows: Vec<Vector> = (d..n).map(|r| to_coords.row(r).to_vec()).collect();
        let projection = Matrix::from_rows(self.field, n, proj_rows)?;
        let complement = &basis.row_vectors()[d..];
        let mut tensor = StructureTensor::zero(self.field, m);
        for a in 0..m {
            for b in a + 1..m {
                let v = self.raw_bracket(&complement[a], &complement[b]);
                tensor.set_bracket(a, b, &projection.mul_vec(&v)?);
            }
        }
        Ok(Quotient { tensor, projection })
    }

    /// True when both the ideal (as a subalgebra) and the quotient are solvable.
    pub fn solvable_by_extension(&self, ideal: &Subspace) -> Result<bool, LieError> {
        let q = self.quotient(ideal)?;
        let sub = self.subalgebra(ideal)?;
        Ok(sub.is_solvable()? && q.tensor.is_solvable()?)
    }

    /// Direct sum with `other`; coordinates of `self` come first.
    pub fn direct_sum(&self, other: &StructureTensor) -> Result<StructureTensor, LieError> {
        if self.field != other.field {
            return Err(LieError::FieldMismatch(self.field, other.field));
        }
        let (m, n) = (self.dim, other.dim);
        let mut out = StructureTensor::zero(self.field, m + n);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    out.set(i, j, k, self.get(i, j, k).clone());
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.set(m + i, m + j, m + k, other.get(i, j, k).clone());
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensor<{}; dim {}>{{", self.field, self.dim)?;
        let mut first = true;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.basis_bracket(i, j);
                if is_zero_vector(&v) {
                    continue;
                }
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[b{i},b{j}]=({})", v.join(","))?;
            }
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub tensor: StructureTensor,
    pub projection: Matrix,
}

/// A claimed isomorphism `source -> target`. Column `i` of `matrix` is the
/// image of the `i`-th source basis vector in target coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub source: StructureTensor,
    pub target: StructureTensor,
    pub matrix: Matrix,
}

impl IsoWitness {
    pub fn new(source: StructureTensor, target: StructureTensor, matrix: Matrix) -> Self {
        IsoWitness { source, target, matrix }
    }

    pub fn identity(t: &StructureTensor) -> Self {
        IsoWitness::new(t.clone(), t.clone(), Matrix::identity(t.field(), t.dim()))
    }

    /// True iff the matrix is invertible and `P [e_i, e_j] = [P e_i, P e_j]`
    /// for every basis pair.
    pub fn check(&self) -> bool {
        let n = self.source.dim();
        if self.target.dim() != n
            || self.source.field() != self.target.field()
            || self.matrix.field() != self.source.field()
            || self.matrix.rows() != n
            || !self.matrix.is_invertible()
        {
            return false;
        }
        let cols = self.matrix.columns();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.matrix.mul_vec(&self.source.basis_bracket(i, j)).expect("square");
                let rhs = self.target.raw_bracket(&cols[i], &cols[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// The inverse isomorphism `target -> source`.
    pub fn inverse(&self) -> Option<IsoWitness> {
        let inv = self.matrix.inverse().ok()??;
        Some(IsoWitness::new(self.target.clone(), self.source.clone(), inv))
    }

    /// `other ∘ self`, defined when `self.target == other.source`.
    pub fn then(&self, other: &IsoWitness) -> Option<IsoWitness> {
        if self.target != other.source {
            return None;
        }
        let m = other.matrix.mul(&self.matrix).ok()?;
        Some(IsoWitness::new(self.source.clone(), other.target.clone(), m))
    }
}

/// Checks that a witness is a valid isomorphism.
pub fn witness_check(w: &IsoWitness) -> bool {
    w.check()
}
