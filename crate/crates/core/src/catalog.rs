//! Representatives of every isomorphism class of solvable Lie algebras of
//! dimension at most three, plus the product constructions that produce them.

use std::fmt;

use thiserror::Error;

use crate::lie::{IsoWitness, LieError, StructureTensor};
use crate::linalg::{unit_vector, zero_vector, LinalgError, Matrix, Subspace, Vector};
use crate::scalars::{square_class_rep, FieldSpec, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("family parameter alpha must be nonzero")]
    ZeroParameter,
    #[error("map {index} is not a derivation of the target algebra")]
    NotDerivation { index: usize },
    #[error("action is not a Lie homomorphism on the pair ({i},{j})")]
    NotHomomorphism { i: usize, j: usize },
    #[error("action needs {expected} maps of size {size}x{size}, got {found}")]
    ActionShape { expected: usize, size: usize, found: usize },
    #[error("dimension {0} is out of range for this construction")]
    BadDimension(usize),
    #[error("subspace is not a codimension-one ideal")]
    NotCodimOneIdeal,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One of the classification outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    Abelian(usize),
    Affine2,
    Heisenberg3,
    AffinePlusAbelian3,
    Hyperbolic3,
    /// `[b0,b1]=b2, [b0,b2]=alpha b1`
    FamilyBeta0(Scalar),
    /// `[b0,b1]=b2, [b0,b2]=alpha b1 + b2`
    FamilyBeta1(Scalar),
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::Abelian(_) => "Abelian",
            ClassLabel::Affine2 => "Affine2",
            ClassLabel::Heisenberg3 => "Heisenberg3",
            ClassLabel::AffinePlusAbelian3 => "AffinePlusAbelian3",
            ClassLabel::Hyperbolic3 => "Hyperbolic3",
            ClassLabel::FamilyBeta0(_) => "FamilyBeta0",
            ClassLabel::FamilyBeta1(_) => "FamilyBeta1",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ClassLabel::Abelian(n) => *n,
            ClassLabel::Affine2 => 2,
            _ => 3,
        }
    }

    /// The family parameter alpha, if any.
    pub fn param(&self) -> Option<&Scalar> {
        match self {
            ClassLabel::FamilyBeta0(a) | ClassLabel::FamilyBeta1(a) => Some(a),
            _ => None,
        }
    }

    /// The beta of a family label (0 or 1).
    pub fn family_beta(&self, field: FieldSpec) -> Option<Scalar> {
        match self {
            ClassLabel::FamilyBeta0(_) => Some(Scalar::zero(field)),
            ClassLabel::FamilyBeta1(_) => Some(Scalar::one(field)),
            _ => None,
        }
    }

    /// Parameter normalized to its isomorphism class: the square class of
    /// alpha for `FamilyBeta0`, alpha itself for `FamilyBeta1`.
    pub fn canonical_param(&self) -> Option<Scalar> {
        match self {
            ClassLabel::FamilyBeta0(a) => square_class_rep(a).ok(),
            ClassLabel::FamilyBeta1(a) => Some(a.clone()),
            _ => None,
        }
    }

    /// Same constructor, ignoring parameters.
    pub fn same_kind(&self, other: &ClassLabel) -> bool {
        match (self, other) {
            (ClassLabel::Abelian(a), ClassLabel::Abelian(b)) => a == b,
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }

    /// Every label over a finite field, families swept over all nonzero alpha.
    /// `None` over Q.
    pub fn enumerate(field: FieldSpec) -> Option<Vec<ClassLabel>> {
        let elements = field.elements()?;
        let mut out = vec![
            ClassLabel::Abelian(1),
            ClassLabel::Abelian(2),
            ClassLabel::Affine2,
            ClassLabel::Abelian(3),
            ClassLabel::Heisenberg3,
            ClassLabel::AffinePlusAbelian3,
            ClassLabel::Hyperbolic3,
        ];
        let nonzero: Vec<Scalar> = elements.into_iter().filter(|a| !a.is_zero()).collect();
        out.extend(nonzero.iter().cloned().map(ClassLabel::FamilyBeta0));
        out.extend(nonzero.into_iter().map(ClassLabel::FamilyBeta1));
        Some(out)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Abelian(n) => write!(f, "Abelian({n})"),
            ClassLabel::FamilyBeta0(a) => write!(f, "FamilyBeta0({a})"),
            ClassLabel::FamilyBeta1(a) => write!(f, "FamilyBeta1({a})"),
            other => write!(f, "{}", other.name()),
        }
    }
}

fn ints(field: FieldSpec, xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::from_i64(x, field)).collect()
}

/// The abelian algebra `K^n`.
pub fn mk_abelian(field: FieldSpec, n: usize) -> StructureTensor {
    StructureTensor::zero(field, n)
}

/// `F_{alpha,beta}`: `[b0,b1]=b2, [b0,b2]=alpha b1 + beta b2`.
pub fn family(alpha: &Scalar, beta: &Scalar) -> Result<StructureTensor, CatalogError> {
    let field = alpha.field();
    beta.ensure_field(field)?;
    if alpha.is_zero() {
        return Err(CatalogError::ZeroParameter);
    }
    let mut t = StructureTensor::zero(field, 3);
    t.set_bracket(0, 1, &ints(field, &[0, 0, 1]));
    t.set_bracket(0, 2, &[Scalar::zero(field), alpha.clone(), beta.clone()]);
    Ok(t)
}

/// The tensor with exactly the listed nonzero brackets for `label`.
pub fn representative(label: &ClassLabel, field: FieldSpec) -> Result<StructureTensor, CatalogError> {
    let mut t;
    match label {
        ClassLabel::Abelian(n) => return Ok(mk_abelian(field, *n)),
        ClassLabel::Affine2 => {
            t = StructureTensor::zero(field, 2);
            t.set_bracket(0, 1, &ints(field, &[0, 1]));
        }
        ClassLabel::Heisenberg3 => {
            t = StructureTensor::zero(field, 3);
            t.set_bracket(1, 2, &ints(field, &[1, 0, 0]));
        }
        ClassLabel::AffinePlusAbelian3 => {
            t = StructureTensor::zero(field, 3);
            t.set_bracket(1, 2, &ints(field, &[0, 1, 0]));
        }
        ClassLabel::Hyperbolic3 => {
            t = StructureTensor::zero(field, 3);
            t.set_bracket(0, 1, &ints(field, &[0, 1, 0]));
            t.set_bracket(0, 2, &ints(field, &[0, 0, 1]));
        }
        ClassLabel::FamilyBeta0(a) => {
            a.ensure_field(field)?;
            t = family(a, &Scalar::zero(field))?;
        }
        ClassLabel::FamilyBeta1(a) => {
            a.ensure_field(field)?;
            t = family(a, &Scalar::one(field))?;
        }
    }
    Ok(t)
}

/// `[b0,b1]=b2, [b1,b2]=b0, [b2,b0]=b1`; never solvable.
pub fn cross_product(field: FieldSpec) -> StructureTensor {
    let mut t = StructureTensor::zero(field, 3);
    t.set_bracket(0, 1, &ints(field, &[0, 0, 1]));
    t.set_bracket(1, 2, &ints(field, &[1, 0, 0]));
    t.set_bracket(2, 0, &ints(field, &[0, 1, 0]));
    t
}

/// Leibniz rule `D[x,y] = [Dx,y] + [x,Dy]` on all basis pairs.
pub fn derivation_check(target: &StructureTensor, d: &Matrix) -> Result<bool, CatalogError> {
    let n = target.dim();
    if d.rows() != n || d.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: d.rows().max(d.cols()),
        }
        .into());
    }
    let cols = d.columns();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.mul_vec(&target.basis_bracket(i, j))?;
            let ei = unit_vector(target.field(), n, i);
            let ej = unit_vector(target.field(), n, j);
            let a = target.raw_bracket(&cols[i], &ej);
            let b = target.raw_bracket(&ei, &cols[j]);
            let rhs: Vector = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An action of `domain` on `target` by derivations: `maps[i]` is the image
/// of the `i`-th basis vector of `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationAction {
    pub domain: StructureTensor,
    pub target: StructureTensor,
    pub maps: Vec<Matrix>,
}

impl DerivationAction {
    pub fn new(domain: StructureTensor, target: StructureTensor, maps: Vec<Matrix>) -> Self {
        DerivationAction { domain, target, maps }
    }

    /// The zero action.
    pub fn trivial(domain: StructureTensor, target: StructureTensor) -> Self {
        let maps = vec![Matrix::zeros(target.field(), target.dim(), target.dim()); domain.dim()];
        DerivationAction { domain, target, maps }
    }

    /// Image of an arbitrary domain element.
    pub fn apply(&self, x: &[Scalar]) -> Matrix {
        let n = self.target.dim();
        let field = self.target.field();
        let mut acc = Matrix::zeros(field, n, n);
        for (xi, m) in x.iter().zip(&self.maps) {
            if xi.is_zero() {
                continue;
            }
            acc = acc.add(&m.scale(xi)).expect("same shape");
        }
        acc
    }

    /// Checks shapes, the derivation property of every map, and that the
    /// action is a Lie homomorphism into the derivation algebra.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let (m, n) = (self.domain.dim(), self.target.dim());
        if self.domain.field() != self.target.field() {
            return Err(LieError::FieldMismatch(self.domain.field(), self.target.field()).into());
        }
        if self.maps.len() != m || self.maps.iter().any(|d| d.rows() != n || d.cols() != n) {
            return Err(CatalogError::ActionShape {
                expected: m,
                size: n,
                found: self.maps.len(),
            });
        }
        self.domain.validate().map_err(LieError::Invalid)?;
        self.target.validate().map_err(LieError::Invalid)?;
        for (index, d) in self.maps.iter().enumerate() {
            if !derivation_check(&self.target, d)? {
                return Err(CatalogError::NotDerivation { index });
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                let lhs = self.apply(&self.domain.basis_bracket(i, j));
                let rhs = self.maps[i]
                    .mul(&self.maps[j])?
                    .sub(&self.maps[j].mul(&self.maps[i])?)?;
                if lhs != rhs {
                    return Err(CatalogError::NotHomomorphism { i, j });
                }
            }
        }
        Ok(())
    }
}

/// `L ⋉_φ J` on coordinates `(L-part, J-part)`:
/// `[(x1,x2),(y1,y2)] = ([x1,y1]_L, [x2,y2]_J + φ(x1)y2 - φ(y1)x2)`.
pub fn semidirect(act: &DerivationAction) -> Result<StructureTensor, CatalogError> {
    act.validate()?;
    let (m, n) = (act.domain.dim(), act.target.dim());
    let field = act.domain.field();
    let mut out = act.domain.direct_sum(&act.target)?;
    for i in 0..m {
        for j in 0..n {
            // [e_i (in L), f_j (in J)] = φ(e_i) f_j
            let col = act.maps[i].column(j);
            let mut full = zero_vector(field, m + n);
            full[m..].clone_from_slice(&col);
            out.set_bracket(i, m + j, &full);
        }
    }
    Ok(out)
}

/// Block direct sum; the same as [`semidirect`] with the zero action.
pub fn direct_sum(a: &StructureTensor, b: &StructureTensor) -> Result<StructureTensor, CatalogError> {
    Ok(a.direct_sum(b)?)
}

/// `aff(K^n) = End(K^n) ⋉ K^n`, dimension `n^2 + n`. The `End` part uses the
/// matrix units `E_ab` in row-major order.
pub fn aff_n(n: usize, field: FieldSpec) -> Result<StructureTensor, CatalogError> {
    if n == 0 {
        return Err(CatalogError::BadDimension(n));
    }
    let units: Vec<Matrix> = (0..n * n)
        .map(|u| {
            let mut e = Matrix::zeros(field, n, n);
            e.set(u / n, u % n, Scalar::one(field));
            e
        })
        .collect();
    let mut gl = StructureTensor::zero(field, n * n);
    for x in 0..n * n {
        for y in x + 1..n * n {
            let comm = units[x].mul(&units[y])?.sub(&units[y].mul(&units[x])?)?;
            let coords: Vector = (0..n * n).map(|u| comm.get(u / n, u % n).clone()).collect();
            gl.set_bracket(x, y, &coords);
        }
    }
    semidirect(&DerivationAction::new(gl, mk_abelian(field, n), units))
}

/// `hyp_n = K ⋉ K^(n-1)` with the identity action.
pub fn hyp_n(n: usize, field: FieldSpec) -> Result<StructureTensor, CatalogError> {
    if n < 2 {
        return Err(CatalogError::BadDimension(n));
    }
    let act = DerivationAction::new(
        mk_abelian(field, 1),
        mk_abelian(field, n - 1),
        vec![Matrix::identity(field, n - 1)],
    );
    semidirect(&act)
}

/// Outcome of the search for a codimension-one abelian ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlmostAbelian {
    Found(Subspace),
    /// The search was exhaustive and found nothing.
    NotAlmostAbelian,
    /// Over an infinite field with more than a one-parameter family of
    /// candidate hyperplanes; no verdict.
    Inconclusive,
}

impl AlmostAbelian {
    pub fn ideal(&self) -> Option<&Subspace> {
        match self {
            AlmostAbelian::Found(s) => Some(s),
            _ => None,
        }
    }
}

fn is_abelian_subspace(t: &StructureTensor, s: &Subspace) -> bool {
    let b = s.basis_vectors();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| t.raw_bracket(&b[i], &b[j]).iter().all(Scalar::is_zero)))
}

/// Looks for an abelian ideal of codimension one.
///
/// Every hyperplane containing the commutator is an ideal, so only those are
/// examined. With `k = codim(commutator)`: `k = 0` has none, `k = 1` has only
/// the commutator, `k = 2` is a one-parameter family decided by a linear
/// solve. Larger `k` is enumerated exhaustively over `F_p` and reported as
/// inconclusive over Q.
pub fn almost_abelian_check(t: &StructureTensor) -> Result<AlmostAbelian, CatalogError> {
    let comm = t.commutator()?;
    let field = t.field();
    let n = t.dim();
    let k = n - comm.dim();
    let found = |s: Subspace| Ok(AlmostAbelian::Found(s));
    if n > 0 && comm.is_zero() {
        // every hyperplane of an abelian algebra is an abelian ideal
        let units: Vec<Vector> = (0..n - 1).map(|i| unit_vector(field, n, i)).collect();
        return found(Subspace::span(field, n, &units)?);
    }
    match k {
        0 => Ok(AlmostAbelian::NotAlmostAbelian),
        1 => {
            if is_abelian_subspace(t, &comm) {
                found(comm)
            } else {
                Ok(AlmostAbelian::NotAlmostAbelian)
            }
        }
        2 => {
            if !is_abelian_subspace(t, &comm) {
                return Ok(AlmostAbelian::NotAlmostAbelian);
            }
            let u = comm.complement_vectors();
            let c = comm.basis_vectors();
            // H = C + span(u0 + s u1): need [u0, c] + s [u1, c] = 0 for all c.
            let mut a_terms: Vector = Vec::new();
            let mut b_terms: Vector = Vec::new();
            for ci in &c {
                a_terms.extend(t.raw_bracket(&u[0], ci));
                b_terms.extend(t.raw_bracket(&u[1], ci));
            }
            let system = Matrix::from_columns(field, a_terms.len(), &[b_terms.clone()])?;
            let rhs: Vector = a_terms.iter().map(|x| -x).collect();
            if let Some(s) = system.solve(&rhs)? {
                let w: Vector = u[0].iter().zip(&u[1]).map(|(x, y)| x + &(&s[0] * y)).collect();
                let mut vs = c.clone();
                vs.push(w);
                return found(Subspace::span(field, n, &vs)?);
            }
            // the one hyperplane not of that form: C + span(u1)
            if b_terms.iter().all(Scalar::is_zero) {
                let mut vs = c;
                vs.push(u[1].clone());
                return found(Subspace::span(field, n, &vs)?);
            }
            Ok(AlmostAbelian::NotAlmostAbelian)
        }
        _ => match field {
            FieldSpec::Rationals => Ok(AlmostAbelian::Inconclusive),
            FieldSpec::Prime(_) => exhaustive_hyperplanes(t, &comm),
        },
    }
}

/// Every hyperplane containing `comm`, as kernels of functionals on the
/// complement coordinates (normalized so the first nonzero entry is 1), in
/// lexicographic order.
pub(crate) fn exhaustive_hyperplanes(t: &StructureTensor, comm: &Subspace) -> Result<AlmostAbelian, CatalogError> {
    let field = t.field();
    let n = t.dim();
    let elements = field.elements().expect("finite field");
    let p = elements.len();
    let u = comm.complement_vectors();
    let k = u.len();
    let total = p.pow(k as u32);
    for code in 1..total {
        let mut digits = Vec::with_capacity(k);
        let mut rest = code;
        for _ in 0..k {
            digits.push(rest % p);
            rest /= p;
        }
        digits.reverse();
        let lead = digits.iter().position(|&d| d != 0).expect("nonzero code");
        if digits[lead] != 1 {
            continue;
        }
        let functional: Vector = digits.iter().map(|&d| elements[d].clone()).collect();
        // kernel of the functional inside span(u)
        let row = Matrix::from_rows(field, k, vec![functional])?;
        let mut vectors = comm.basis_vectors();
        for coeffs in row.kernel().basis_vectors() {
            let mut w = zero_vector(field, n);
            for (c, ui) in coeffs.iter().zip(&u) {
                crate::linalg::axpy(&mut w, c, ui);
            }
            vectors.push(w);
        }
        let h = Subspace::span(field, n, &vectors)?;
        if is_abelian_subspace(t, &h) {
            return Ok(AlmostAbelian::Found(h));
        }
    }
    Ok(AlmostAbelian::NotAlmostAbelian)
}

/// Splits `t` along a codimension-one ideal as `K ⋉_φ I`.
///
/// `x` is the first greedy standard vector outside `ideal`, and `φ(1)` is
/// `ad(x)` restricted to `ideal` in its RREF basis. The returned witness maps
/// `t` to `semidirect(action)`.
pub fn codim1_split(t: &StructureTensor, ideal: &Subspace) -> Result<(DerivationAction, IsoWitness), CatalogError> {
    t.validate().map_err(LieError::Invalid)?;
    let field = t.field();
    let n = t.dim();
    if ideal.dim() + 1 != n || !t.is_ideal(ideal)? {
        return Err(CatalogError::NotCodimOneIdeal);
    }
    let x = ideal.complement_vectors().remove(0);
    let phi = t.restricted_ad(&x, ideal)?.ok_or(CatalogError::NotCodimOneIdeal)?;
    let action = DerivationAction::new(mk_abelian(field, 1), t.subalgebra(ideal)?, vec![phi]);
    let product = semidirect(&action)?;
    let mut cols = vec![x];
    cols.extend(ideal.basis_vectors());
    let to_t = Matrix::from_columns(field, n, &cols)?;
    let matrix = to_t.inverse()?.expect("x lies outside the ideal");
    let witness = IsoWitness::new(t.clone(), product, matrix);
    Ok((action, witness))
}
