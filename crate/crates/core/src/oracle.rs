//! Brute-force ground truth: exhaustive isomorphism search over `GL_n(F_p)`
//! and seeded random basis changes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::{representative, ClassLabel};
use crate::classify::{iso_decide, ClassifyError};
use crate::lie::{IsoWitness, LieError, StructureTensor};
use crate::linalg::Matrix;
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration of GL_{n}(F_{p}) needs {needed} matrices, budget is {budget}")]
    BudgetExceeded { n: usize, p: u64, needed: u64, budget: u64 },
    #[error("brute force needs a finite field, got {0}")]
    NotFinite(FieldSpec),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("no invertible matrix after {0} attempts")]
    RetriesExhausted(usize),
    #[error("brute force and classifier disagree on {0} vs {1}")]
    Disagreement(String, String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Upper bound on the number of invertible matrices one query may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    /// `|GL_3(F_3)|`: enough for every sweep over F2 and F3.
    pub const DEFAULT: Budget = Budget(11_232);
    /// `|GL_3(F_5)|`, for single-pair queries.
    pub const EXTENDED: Budget = Budget(1_488_000);
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// `|GL_n(F_p)| = prod_{k<n} (p^n - p^k)`, saturating.
pub fn gl_order(n: usize, p: u64) -> u64 {
    let q = p.saturating_pow(n as u32);
    (0..n as u32).fold(1u64, |acc, k| acc.saturating_mul(q - p.pow(k)))
}

fn check_budget(n: usize, p: u64, budget: Budget) -> Result<(), OracleError> {
    let needed = gl_order(n, p);
    if needed > budget.0 {
        return Err(OracleError::BudgetExceeded {
            n,
            p,
            needed,
            budget: budget.0,
        });
    }
    Ok(())
}

fn det_mod(m: &[u64], n: usize, p: u64) -> u64 {
    let mut a = m.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = (p - det) % p;
        }
        let d = a[col * n + col];
        det = det * d % p;
        let inv = pow_mod(d, p - 2, p);
        for r in col + 1..n {
            let f = a[r * n + col] * inv % p;
            if f == 0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] = (a[r * n + c] + p * p - f * a[col * n + c] % p) % p;
            }
        }
    }
    det
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-major residues of every invertible `n x n` matrix, as `I + M` over
/// `M` in lexicographic order, so the identity comes first.
struct RawGl {
    n: usize,
    p: u64,
    counter: Vec<u64>,
    done: bool,
}

impl RawGl {
    fn new(n: usize, p: u64) -> Self {
        RawGl {
            n,
            p,
            counter: vec![0; n * n],
            done: false,
        }
    }

    fn advance(&mut self) {
        for digit in self.counter.iter_mut().rev() {
            *digit += 1;
            if *digit < self.p {
                return;
            }
            *digit = 0;
        }
        self.done = true;
    }
}

impl Iterator for RawGl {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        while !self.done {
            let mut m = self.counter.clone();
            for i in 0..self.n {
                m[i * self.n + i] = (m[i * self.n + i] + 1) % self.p;
            }
            self.advance();
            if det_mod(&m, self.n, self.p) != 0 {
                return Some(m);
            }
        }
        None
    }
}

fn to_matrix(raw: &[u64], n: usize, p: u64) -> Matrix {
    let field = FieldSpec::Prime(p);
    let rows = raw
        .chunks(n)
        .map(|r| r.iter().map(|&v| Scalar::residue(v, p)).collect())
        .collect();
    Matrix::from_rows(field, n, rows).expect("square rows")
}

/// Every invertible `n x n` matrix over `F_p`, each exactly once, identity first.
pub fn invertible_matrices(n: usize, p: u64, budget: Budget) -> Result<impl Iterator<Item = Matrix>, OracleError> {
    FieldSpec::prime(p).map_err(|_| OracleError::NotFinite(FieldSpec::Rationals))?;
    check_budget(n, p, budget)?;
    Ok(RawGl::new(n, p).map(move |raw| to_matrix(&raw, n, p)))
}

fn raw_tensor(t: &StructureTensor) -> Vec<u64> {
    t.coefficients()
        .iter()
        .map(|c| c.as_residue().expect("prime field tensor"))
        .collect()
}

/// `P [e_i, e_j]_1 == [P e_i, P e_j]_2` for all `i < j`, on residues.
fn raw_is_witness(c1: &[u64], c2: &[u64], m: &[u64], n: usize, p: u64) -> bool {
    let at = |c: &[u64], i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut lhs = 0u64;
                for l in 0..n {
                    lhs = (lhs + m[k * n + l] * at(c1, i, j, l)) % p;
                }
                let mut rhs = 0u64;
                for a in 0..n {
                    let pa = m[a * n + i];
                    if pa == 0 {
                        continue;
                    }
                    for b in 0..n {
                        let pb = m[b * n + j];
                        if pb == 0 {
                            continue;
                        }
                        rhs = (rhs + pa * pb % p * at(c2, a, b, k)) % p;
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// The first enumerated isomorphism `t1 -> t2`, confirmed by the exact check.
pub fn brute_force_iso(
    t1: &StructureTensor,
    t2: &StructureTensor,
    budget: Budget,
) -> Result<Option<IsoWitness>, OracleError> {
    if t1.field() != t2.field() {
        return Err(OracleError::FieldMismatch(t1.field(), t2.field()));
    }
    if t1.dim() != t2.dim() {
        return Err(OracleError::DimensionMismatch(t1.dim(), t2.dim()));
    }
    let FieldSpec::Prime(p) = t1.field() else {
        return Err(OracleError::NotFinite(t1.field()));
    };
    let n = t1.dim();
    check_budget(n, p, budget)?;
    let (c1, c2) = (raw_tensor(t1), raw_tensor(t2));
    for raw in RawGl::new(n, p) {
        if raw_is_witness(&c1, &c2, &raw, n, p) {
            let w = IsoWitness::new(t1.clone(), t2.clone(), to_matrix(&raw, n, p));
            if w.check() {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn random_matrix(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Matrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| match field {
                    FieldSpec::Rationals => Scalar::from_i64(rng.random_range(-3..=3), field),
                    FieldSpec::Prime(p) => Scalar::residue(rng.random_range(0..p), p),
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, n, rows).expect("square rows")
}

const MAX_ATTEMPTS: usize = 1000;

/// A seeded random invertible `P` and `change_of_basis(t, P)`.
pub fn random_conjugate(t: &StructureTensor, seed: u64) -> Result<(StructureTensor, Matrix), OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_invertible_with(&mut rng, t.field(), t.dim())
        .ok_or(OracleError::RetriesExhausted(MAX_ATTEMPTS))
        .and_then(|p| Ok((t.change_of_basis(&p)?, p)))
}

/// A seeded random invertible `n x n` matrix.
pub fn random_invertible(field: FieldSpec, n: usize, seed: u64) -> Result<Matrix, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_invertible_with(&mut rng, field, n).ok_or(OracleError::RetriesExhausted(MAX_ATTEMPTS))
}

fn random_invertible_with(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Option<Matrix> {
    (0..MAX_ATTEMPTS)
        .map(|_| random_matrix(rng, field, n))
        .find(|m| m.is_invertible())
}

/// One ordered pair of the pairwise sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub left: ClassLabel,
    pub right: ClassLabel,
    pub brute_force: bool,
    pub classifier: bool,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.brute_force == self.classifier
    }
}

/// Compares [`brute_force_iso`] with [`iso_decide`] on every ordered pair of
/// same-dimension catalog representatives over `F_p`. Both witnesses, when
/// present, are verified; a failed verification is an error.
pub fn oracle_sweep(p: u64, budget: Budget) -> Result<Vec<SweepRow>, OracleError> {
    let field = FieldSpec::prime(p).map_err(|_| OracleError::NotFinite(FieldSpec::Rationals))?;
    let labels = ClassLabel::enumerate(field).expect("finite field");
    let reps = labels
        .iter()
        .map(|l| Ok((l.clone(), representative(l, field).map_err(ClassifyError::from)?)))
        .collect::<Result<Vec<_>, OracleError>>()?;
    let mut rows = Vec::new();
    for (l1, t1) in &reps {
        for (l2, t2) in &reps {
            if t1.dim() != t2.dim() {
                continue;
            }
            let brute = brute_force_iso(t1, t2, budget)?;
            let decided = iso_decide(t1, t2)?;
            for w in brute.iter().chain(decided.iter()) {
                if !w.check() {
                    return Err(OracleError::Disagreement(l1.to_string(), l2.to_string()));
                }
            }
            rows.push(SweepRow {
                left: l1.clone(),
                right: l2.clone(),
                brute_force: brute.is_some(),
                classifier: decided.is_some(),
            });
        }
    }
    Ok(rows)
}
