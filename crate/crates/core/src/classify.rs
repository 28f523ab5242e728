//! Classification of Lie algebras of dimension at most three (solvable in
//! dimension three) by constructing an adapted basis.
//!
//! Every branch builds a basis `B` (columns in source coordinates), checks
//! that the structure constants in that basis are exactly those of the
//! catalog representative, and returns `B^{-1}` as the witness. A failed
//! check is an [`ClassifyError::Internal`] error, never a silent mislabel.

use thiserror::Error;

use crate::catalog::{representative, CatalogError, ClassLabel};
use crate::lie::{AxiomViolation, IsoWitness, LieError, StructureTensor};
use crate::linalg::{is_zero_vector, scale_vector, unit_vector, LinalgError, Matrix, Subspace, Vector};
use crate::scalars::{sqrt_in_field, FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("not a Lie algebra: {0}")]
    Invalid(AxiomViolation),
    #[error("dimension {0} is not supported (only 1, 2 and 3)")]
    UnsupportedDimension(usize),
    #[error("input is not solvable")]
    NotSolvable,
    #[error("family parameter alpha must be nonzero")]
    ZeroParameter,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<LieError> for ClassifyError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::Invalid(v) => ClassifyError::Invalid(v),
            other => ClassifyError::Internal(other.to_string()),
        }
    }
}

impl From<LinalgError> for ClassifyError {
    fn from(e: LinalgError) -> Self {
        ClassifyError::Internal(e.to_string())
    }
}

impl From<CatalogError> for ClassifyError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::ZeroParameter => ClassifyError::ZeroParameter,
            other => ClassifyError::Internal(other.to_string()),
        }
    }
}

fn internal(msg: impl Into<String>) -> ClassifyError {
    ClassifyError::Internal(msg.into())
}

/// A label together with a witness from the input to `representative(label)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub label: ClassLabel,
    pub witness: IsoWitness,
}

/// Result of [`classify`]: non-solvable three-dimensional input is an
/// ordinary verdict rather than an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Classified(Classification),
    NotSolvable { derived_dims: Vec<usize> },
}

impl Verdict {
    pub fn classification(&self) -> Option<&Classification> {
        match self {
            Verdict::Classified(c) => Some(c),
            Verdict::NotSolvable { .. } => None,
        }
    }

    pub fn into_classification(self) -> Result<Classification, ClassifyError> {
        match self {
            Verdict::Classified(c) => Ok(c),
            Verdict::NotSolvable { .. } => Err(ClassifyError::NotSolvable),
        }
    }
}

/// Decides the class of `t` and constructs a verified witness.
pub fn classify(t: &StructureTensor) -> Result<Verdict, ClassifyError> {
    t.validate().map_err(ClassifyError::Invalid)?;
    let field = t.field();
    let (label, basis) = match t.dim() {
        1 => (ClassLabel::Abelian(1), Matrix::identity(field, 1)),
        2 => classify_dim2(t)?,
        3 => {
            if !t.is_solvable()? {
                return Ok(Verdict::NotSolvable {
                    derived_dims: t.derived_dims()?,
                });
            }
            classify_dim3(t)?
        }
        n => return Err(ClassifyError::UnsupportedDimension(n)),
    };
    let target = representative(&label, field)?;
    let adapted = t.change_of_basis(&basis)?;
    if adapted != target {
        return Err(internal(format!(
            "adapted basis for {label} gives {adapted:?}, expected {target:?}"
        )));
    }
    let matrix = basis.inverse()?.ok_or_else(|| internal("adapted basis is singular"))?;
    let witness = IsoWitness::new(t.clone(), target, matrix);
    if !witness.check() {
        return Err(internal(format!("witness for {label} failed verification")));
    }
    Ok(Verdict::Classified(Classification { label, witness }))
}

fn columns(field: FieldSpec, n: usize, cols: &[Vector]) -> Result<Matrix, ClassifyError> {
    let m = Matrix::from_columns(field, n, cols)?;
    if !m.is_invertible() {
        return Err(internal("constructed basis vectors are dependent"));
    }
    Ok(m)
}

/// Some `x` with `[x, c] = λ c`, `λ != 0`; returns `(x, λ)`.
fn eigen_partner(t: &StructureTensor, c: &[Scalar], line: &Subspace) -> Result<(Vector, Scalar), ClassifyError> {
    let field = t.field();
    let n = t.dim();
    for i in 0..n {
        let x = unit_vector(field, n, i);
        let image = t.raw_bracket(&x, c);
        if is_zero_vector(&image) {
            continue;
        }
        let coords = line
            .coordinates(&image)
            .ok_or_else(|| internal("[x, c] left the commutator line"))?;
        // line has the single basis vector `c` up to scale; express image = λ c
        let pivot = line.pivots()[0];
        let lambda = image[pivot]
            .div(&c[pivot])
            .ok_or_else(|| internal("commutator generator has zero pivot"))?;
        debug_assert_eq!(coords.len(), 1);
        return Ok((x, lambda));
    }
    Err(internal("commutator line is central"))
}

fn classify_dim2(t: &StructureTensor) -> Result<(ClassLabel, Matrix), ClassifyError> {
    let field = t.field();
    let comm = t.commutator()?;
    match comm.dim() {
        0 => Ok((ClassLabel::Abelian(2), Matrix::identity(field, 2))),
        1 => {
            let c = comm.basis_vectors().remove(0);
            let (x, lambda) = eigen_partner(t, &c, &comm)?;
            let b0 = scale_vector(&lambda.inv().expect("nonzero"), &x);
            Ok((ClassLabel::Affine2, columns(field, 2, &[b0, c])?))
        }
        d => Err(internal(format!(
            "2-dimensional algebra with {d}-dimensional commutator"
        ))),
    }
}

fn classify_dim3(t: &StructureTensor) -> Result<(ClassLabel, Matrix), ClassifyError> {
    let field = t.field();
    let comm = t.commutator()?;
    match comm.dim() {
        0 => Ok((ClassLabel::Abelian(3), Matrix::identity(field, 3))),
        1 => commutator_line(t, &comm),
        2 => commutator_plane(t, &comm),
        d => Err(internal(format!(
            "solvable 3-dimensional algebra with {d}-dimensional commutator"
        ))),
    }
}

fn commutator_line(t: &StructureTensor, comm: &Subspace) -> Result<(ClassLabel, Matrix), ClassifyError> {
    let field = t.field();
    let n = 3;
    let c = comm.basis_vectors().remove(0);
    let central = (0..n).all(|i| is_zero_vector(&t.raw_bracket(&unit_vector(field, n, i), &c)));
    if central {
        let extended = comm.extend_to_full_basis().row_vectors();
        let (y1, y2) = (extended[1].clone(), extended[2].clone());
        let b0 = t.raw_bracket(&y1, &y2);
        if is_zero_vector(&b0) {
            return Err(internal("complement of a central commutator brackets to zero"));
        }
        return Ok((ClassLabel::Heisenberg3, columns(field, n, &[b0, y1, y2])?));
    }
    let center = t.center()?;
    let z = center
        .basis_vectors()
        .into_iter()
        .find(|v| !comm.contains(v))
        .ok_or_else(|| internal("non-central commutator line but center inside commutator"))?;
    let (x, lambda) = eigen_partner(t, &c, comm)?;
    // [c, -x/λ] = (1/λ)[x, c] = c
    let b2 = scale_vector(&-lambda.inv().expect("nonzero"), &x);
    Ok((ClassLabel::AffinePlusAbelian3, columns(field, n, &[z, c, b2])?))
}

/// Greedy `x` outside the commutator plane and the action of `ad(x)` on it.
fn plane_action(t: &StructureTensor, comm: &Subspace) -> Result<(Vector, Matrix), ClassifyError> {
    if !t.subalgebra(comm)?.is_abelian() {
        return Err(internal("2-dimensional commutator is not abelian"));
    }
    let x = comm.complement_vectors().remove(0);
    let a = t
        .restricted_ad(&x, comm)?
        .ok_or_else(|| internal("commutator is not ad-invariant"))?;
    Ok((x, a))
}

fn scalar_of(a: &Matrix) -> Option<Scalar> {
    let mu = a.get(0, 0).clone();
    let scalar = Matrix::identity(a.field(), a.rows()).scale(&mu);
    (*a == scalar).then_some(mu)
}

fn commutator_plane(t: &StructureTensor, comm: &Subspace) -> Result<(ClassLabel, Matrix), ClassifyError> {
    let field = t.field();
    let (x, a) = plane_action(t, comm)?;
    if a.det2()?.is_zero() {
        return Err(internal("ad(x) is singular on a 2-dimensional commutator"));
    }
    let cb = comm.basis_vectors();
    if let Some(mu) = scalar_of(&a) {
        let b0 = scale_vector(&mu.inv().expect("invertible action"), &x);
        return Ok((
            ClassLabel::Hyperbolic3,
            columns(field, 3, &[b0, cb[0].clone(), cb[1].clone()])?,
        ));
    }
    // cyclic vector for the action, in commutator coordinates
    let candidates = [
        vec![Scalar::one(field), Scalar::zero(field)],
        vec![Scalar::zero(field), Scalar::one(field)],
        vec![Scalar::one(field), Scalar::one(field)],
    ];
    let (u, au) = candidates
        .iter()
        .map(|u| (u.clone(), a.mul_vec(u).expect("2x2")))
        .find(|(u, au)| {
            Matrix::from_columns(field, 2, &[u.clone(), au.clone()])
                .map(|m| m.is_invertible())
                .unwrap_or(false)
        })
        .ok_or_else(|| internal("non-scalar action without a cyclic vector"))?;
    // A(Au) = alpha u + beta Au
    let frame = Matrix::from_columns(field, 2, &[u.clone(), au.clone()])?;
    let coeffs = frame
        .solve(&a.mul_vec(&au)?)?
        .ok_or_else(|| internal("A^2 u outside span(u, Au)"))?;
    let (alpha, beta) = (coeffs[0].clone(), coeffs[1].clone());
    if alpha.is_zero() {
        return Err(internal("family parameter alpha vanished"));
    }
    let embed = |w: &[Scalar]| -> Vector {
        let mut v = scale_vector(&w[0], &cb[0]);
        crate::linalg::axpy(&mut v, &w[1], &cb[1]);
        v
    };
    let b1 = embed(&u);
    let b2 = embed(&au);
    if beta.is_zero() {
        return Ok((ClassLabel::FamilyBeta0(alpha), columns(field, 3, &[x, b1, b2])?));
    }
    // rescale b0 and b2 by γ = 1/β: alpha -> alpha / beta^2, beta -> 1
    let gamma = beta.inv().expect("nonzero");
    let b0 = scale_vector(&gamma, &x);
    let b2 = scale_vector(&gamma, &b2);
    let alpha = &alpha * &gamma.square();
    Ok((ClassLabel::FamilyBeta1(alpha), columns(field, 3, &[b0, b1, b2])?))
}

/// For a 3-dimensional algebra with abelian 2-dimensional commutator: the
/// scalar `μ` if `ad(x)` acts on the commutator as `μ·I` for `x` outside it.
///
/// The answer does not depend on the choice of `x`: shifting `x` by the
/// (abelian) commutator leaves the action unchanged and scaling `x` scales it.
pub fn scalar_action_invariant(t: &StructureTensor) -> Result<Option<Scalar>, ClassifyError> {
    t.validate().map_err(ClassifyError::Invalid)?;
    if t.dim() != 3 {
        return Err(ClassifyError::Precondition("dimension must be 3"));
    }
    let comm = t.commutator()?;
    if comm.dim() != 2 {
        return Err(ClassifyError::Precondition("commutator must be 2-dimensional"));
    }
    if !t.subalgebra(&comm)?.is_abelian() {
        return Err(ClassifyError::Precondition("commutator must be abelian"));
    }
    let (_, a) = plane_action(t, &comm)?;
    Ok(scalar_of(&a))
}

/// A nonzero `γ` with `alpha = γ² alpha'` and `beta = γ beta'`, if any.
pub fn params_equivalent(
    alpha: &Scalar,
    beta: &Scalar,
    alpha2: &Scalar,
    beta2: &Scalar,
) -> Result<Option<Scalar>, ClassifyError> {
    if alpha.is_zero() || alpha2.is_zero() {
        return Err(ClassifyError::ZeroParameter);
    }
    Ok(match (beta.is_zero(), beta2.is_zero()) {
        (true, true) => sqrt_in_field(&alpha.div(alpha2).expect("nonzero")),
        (false, false) => {
            let gamma = beta.div(beta2).expect("nonzero");
            (*alpha == &gamma.square() * alpha2).then_some(gamma)
        }
        _ => None,
    })
}

/// Decides whether two solvable algebras of dimension at most three are
/// isomorphic, returning a verified witness `t1 -> t2` when they are.
pub fn iso_decide(t1: &StructureTensor, t2: &StructureTensor) -> Result<Option<IsoWitness>, ClassifyError> {
    if t1.field() != t2.field() {
        return Err(ClassifyError::Precondition("algebras are over different fields"));
    }
    let c1 = classify(t1)?.into_classification()?;
    let c2 = classify(t2)?.into_classification()?;
    if !c1.label.same_kind(&c2.label) {
        return Ok(None);
    }
    let field = t1.field();
    let n = t1.dim();
    let rescale = match (c1.label.param(), c2.label.param()) {
        (Some(a1), Some(a2)) => {
            let b1 = c1.label.family_beta(field).expect("family");
            let b2 = c2.label.family_beta(field).expect("family");
            match params_equivalent(a1, &b1, a2, &b2)? {
                Some(gamma) => family_rescaling(&gamma),
                None => return Ok(None),
            }
        }
        _ => Matrix::identity(field, n),
    };
    let middle = IsoWitness::new(c1.witness.target.clone(), c2.witness.target.clone(), rescale);
    let back = c2
        .witness
        .inverse()
        .ok_or_else(|| internal("classification witness not invertible"))?;
    let composed = c1
        .witness
        .then(&middle)
        .and_then(|w| w.then(&back))
        .ok_or_else(|| internal("witnesses do not compose"))?;
    if !composed.check() {
        return Err(internal("composed isomorphism failed verification"));
    }
    Ok(Some(composed))
}

/// `b0 -> γ b0, b1 -> b1, b2 -> γ b2`, mapping `F(γ²α', γβ')` onto `F(α', β')`.
pub fn family_rescaling(gamma: &Scalar) -> Matrix {
    let field = gamma.field();
    Matrix::diagonal(field, &[gamma.clone(), Scalar::one(field), gamma.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cross_product, family};
    use crate::lie::witness_check;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F5: FieldSpec = FieldSpec::Prime(5);

    fn classified(t: &StructureTensor) -> Classification {
        classify(t).unwrap().into_classification().unwrap()
    }

    #[test]
    fn representatives_classify_to_themselves() {
        let h = representative(&ClassLabel::Heisenberg3, Q).unwrap();
        let c = classified(&h);
        assert_eq!(c.label, ClassLabel::Heisenberg3);
        assert_eq!(c.witness.matrix, Matrix::identity(Q, 3));
    }

    #[test]
    fn conjugated_hyperbolic_over_f5() {
        let hyp = representative(&ClassLabel::Hyperbolic3, F5).unwrap();
        let p = Matrix::from_ints(F5, &[&[2, 1, 0], &[0, 3, 4], &[1, 0, 2]]);
        let t = hyp.change_of_basis(&p).unwrap();
        let c = classified(&t);
        assert_eq!(c.label, ClassLabel::Hyperbolic3);
        assert!(witness_check(&c.witness));
    }

    #[test]
    fn family_canonical_parameter() {
        let t = representative(&ClassLabel::FamilyBeta0(Scalar::from_i64(8, Q)), Q).unwrap();
        let c = classified(&t);
        assert_eq!(c.label, ClassLabel::FamilyBeta0(Scalar::from_i64(8, Q)));
        assert_eq!(c.label.canonical_param(), Some(Scalar::from_i64(2, Q)));
    }

    #[test]
    fn beta_normalization() {
        // F(α, β) with β != 0 lands on FamilyBeta1(α / β²)
        let (a, b) = (Scalar::from_i64(6, Q), Scalar::from_i64(3, Q));
        let c = classified(&family(&a, &b).unwrap());
        assert_eq!(c.label, ClassLabel::FamilyBeta1(Scalar::rational(2, 3)));
        assert!(witness_check(&c.witness));
    }

    #[test]
    fn low_dimensions() {
        let k = StructureTensor::zero(Q, 1);
        assert_eq!(classified(&k).label, ClassLabel::Abelian(1));
        let aff = representative(&ClassLabel::Affine2, Q).unwrap();
        let p = Matrix::from_ints(Q, &[&[3, 1], &[-1, 2]]);
        let c = classified(&aff.change_of_basis(&p).unwrap());
        assert_eq!(c.label, ClassLabel::Affine2);
        assert!(witness_check(&c.witness));
        assert_eq!(classified(&StructureTensor::zero(Q, 2)).label, ClassLabel::Abelian(2));
    }

    #[test]
    fn error_paths() {
        assert_eq!(
            classify(&StructureTensor::zero(Q, 4)),
            Err(ClassifyError::UnsupportedDimension(4))
        );
        assert!(matches!(
            classify(&cross_product(Q)).unwrap(),
            Verdict::NotSolvable { .. }
        ));
        let mut bad = StructureTensor::zero(Q, 2);
        bad.set(0, 1, 0, Scalar::one(Q));
        assert!(matches!(classify(&bad), Err(ClassifyError::Invalid(_))));
        assert_eq!(
            iso_decide(&cross_product(Q), &cross_product(Q)),
            Err(ClassifyError::NotSolvable)
        );
    }

    #[test]
    fn scalar_action_examples() {
        let hyp = representative(&ClassLabel::Hyperbolic3, Q).unwrap();
        assert_eq!(scalar_action_invariant(&hyp).unwrap(), Some(Scalar::one(Q)));
        for (a, b) in [(1, 0), (-1, 0), (2, 1), (3, -5)] {
            let f = family(&Scalar::from_i64(a, Q), &Scalar::from_i64(b, Q)).unwrap();
            assert_eq!(scalar_action_invariant(&f).unwrap(), None);
        }
        let p = Matrix::from_ints(Q, &[&[1, 0, 2], &[1, 1, 0], &[0, 3, 1]]);
        let mu = scalar_action_invariant(&hyp.change_of_basis(&p).unwrap()).unwrap();
        assert!(mu.is_some_and(|m| !m.is_zero()));
        let heis = representative(&ClassLabel::Heisenberg3, Q).unwrap();
        assert!(matches!(
            scalar_action_invariant(&heis),
            Err(ClassifyError::Precondition(_))
        ));
    }

    #[test]
    fn params_equivalent_examples() {
        let s = |v| Scalar::residue(v, 5);
        assert_eq!(params_equivalent(&s(2), &s(0), &s(3), &s(0)).unwrap(), Some(s(2)));
        let q = |v| Scalar::from_i64(v, Q);
        assert_eq!(params_equivalent(&q(1), &q(0), &q(2), &q(0)).unwrap(), None);
        assert_eq!(params_equivalent(&q(7), &q(3), &q(7), &q(3)).unwrap(), Some(q(1)));
        assert_eq!(params_equivalent(&q(4), &q(2), &q(1), &q(1)).unwrap(), Some(q(2)));
        assert_eq!(params_equivalent(&q(4), &q(0), &q(1), &q(1)).unwrap(), None);
        assert_eq!(
            params_equivalent(&q(0), &q(0), &q(1), &q(0)),
            Err(ClassifyError::ZeroParameter)
        );
    }

    #[test]
    fn params_equivalent_matches_exhaustive_gamma_search() {
        for p in [2u64, 3, 5, 7] {
            let els = FieldSpec::Prime(p).elements().unwrap();
            let nonzero: Vec<_> = els.iter().filter(|x| !x.is_zero()).cloned().collect();
            for a in &nonzero {
                for a2 in &nonzero {
                    for b in &els {
                        for b2 in &els {
                            let brute = nonzero.iter().any(|g| *a == &g.square() * a2 && *b == g * b2);
                            let got = params_equivalent(a, b, a2, b2).unwrap();
                            assert_eq!(got.is_some(), brute, "p={p} {a:?} {b:?} {a2:?} {b2:?}");
                            if let Some(g) = got {
                                assert_eq!(*a, &g.square() * a2);
                                assert_eq!(*b, &g * b2);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn iso_decide_examples() {
        let heis = representative(&ClassLabel::Heisenberg3, Q).unwrap();
        let apa = representative(&ClassLabel::AffinePlusAbelian3, Q).unwrap();
        assert_eq!(iso_decide(&heis, &apa).unwrap(), None);

        let f = |a: u64| representative(&ClassLabel::FamilyBeta0(Scalar::residue(a, 5)), F5).unwrap();
        let w = iso_decide(&f(2), &f(3)).unwrap().unwrap();
        assert!(witness_check(&w));
        assert_eq!(w.matrix, family_rescaling(&Scalar::residue(2, 5)));
        assert_eq!(iso_decide(&f(1), &f(2)).unwrap(), None);

        let hyp = representative(&ClassLabel::Hyperbolic3, Q).unwrap();
        for (a, b) in [(1, 0), (1, 1), (-1, 2), (4, 4)] {
            let t = family(&Scalar::from_i64(a, Q), &Scalar::from_i64(b, Q)).unwrap();
            assert_eq!(iso_decide(&hyp, &t).unwrap(), None);
        }
        assert_eq!(iso_decide(&heis, &StructureTensor::zero(Q, 2)).unwrap(), None);
    }
}
