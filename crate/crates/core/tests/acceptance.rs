//! Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liesolv::catalog::{
    almost_abelian_check, codim1_split, cross_product, derivation_check, direct_sum, family, mk_abelian,
    representative, semidirect, ClassLabel, DerivationAction,
};
use liesolv::classify::{classify, family_rescaling, iso_decide, params_equivalent, Verdict};
use liesolv::frontend::parse_presentation;
use liesolv::lie::{witness_check, StructureTensor};
use liesolv::linalg::{Matrix, Subspace};
use liesolv::oracle::{brute_force_iso, oracle_sweep, random_conjugate, Budget};
use liesolv::scalars::{FieldSpec, Scalar};

const Q: FieldSpec = FieldSpec::Rationals;
const FIELDS: [FieldSpec; 5] = [
    FieldSpec::Rationals,
    FieldSpec::Prime(2),
    FieldSpec::Prime(3),
    FieldSpec::Prime(5),
    FieldSpec::Prime(7),
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

/// Labels per field: all nonzero alpha over F_p, a fixed sample over Q.
fn labels(field: FieldSpec) -> Vec<ClassLabel> {
    ClassLabel::enumerate(field).unwrap_or_else(|| {
        let mut v = vec![
            ClassLabel::Abelian(1),
            ClassLabel::Abelian(2),
            ClassLabel::Affine2,
            ClassLabel::Abelian(3),
            ClassLabel::Heisenberg3,
            ClassLabel::AffinePlusAbelian3,
            ClassLabel::Hyperbolic3,
        ];
        let alphas = [
            Scalar::from_i64(1, Q),
            Scalar::from_i64(-1, Q),
            Scalar::from_i64(2, Q),
            Scalar::from_i64(-2, Q),
            Scalar::from_i64(8, Q),
            Scalar::rational(1, 2),
        ];
        v.extend(alphas.iter().cloned().map(ClassLabel::FamilyBeta0));
        v.extend(alphas.into_iter().map(ClassLabel::FamilyBeta1));
        v
    })
}

/// Antisymmetry and Jacobi by direct expansion over every ordered triple,
/// written against the raw coefficients rather than the library's checker.
fn naive_is_lie(t: &StructureTensor) -> bool {
    let n = t.dim();
    let f = t.field();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if *t.get(i, j, k) != -t.get(j, i, k).clone() {
                    return false;
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for m in 0..n {
                    // sum_l c_bc^l c_al^m + c_ca^l c_bl^m + c_ab^l c_cl^m
                    let mut s = Scalar::zero(f);
                    for l in 0..n {
                        s = s + t.get(b, c, l) * t.get(a, l, m);
                        s = s + t.get(c, a, l) * t.get(b, l, m);
                        s = s + t.get(a, b, l) * t.get(c, l, m);
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn rep(l: &ClassLabel, f: FieldSpec) -> Result<StructureTensor, String> {
    ok(representative(l, f), "representative")
}

fn criterion_1() -> Outcome {
    let mut count = 0;
    for f in FIELDS {
        for l in labels(f) {
            let t = rep(&l, f)?;
            ensure!(t.validate().is_ok(), "{l} over {f} fails validate");
            ensure!(naive_is_lie(&t), "{l} over {f} fails the expansion check");
            count += 1;
        }
    }
    Ok(format!("{count} representatives valid over Q, F2, F3, F5, F7"))
}

fn params_match(a: &ClassLabel, b: &ClassLabel, f: FieldSpec) -> Result<bool, String> {
    if !a.same_kind(b) {
        return Ok(false);
    }
    match (a.param(), b.param()) {
        (Some(x), Some(y)) => {
            let (bx, by) = (a.family_beta(f).unwrap(), b.family_beta(f).unwrap());
            Ok(ok(params_equivalent(x, &bx, y, &by), "params_equivalent")?.is_some())
        }
        _ => Ok(true),
    }
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for f in FIELDS {
        for (li, l) in labels(f).iter().enumerate() {
            let t = rep(l, f)?;
            for s in 0..200u64 {
                let seed = (li as u64) << 32 | s;
                let (conj, _) = ok(random_conjugate(&t, seed), "random_conjugate")?;
                let c = ok(classify(&conj), "classify")?;
                let Verdict::Classified(c) = c else {
                    return Err(format!("{l} over {f} seed {seed}: NotSolvable"));
                };
                ensure!(
                    params_match(&c.label, l, f)?,
                    "{l} over {f} seed {seed}: got {}",
                    c.label
                );
                ensure!(witness_check(&c.witness), "{l} over {f} seed {seed}: witness rejected");
                ensure!(
                    c.witness.source == conj && c.witness.target == rep(&c.label, f)?,
                    "{l} over {f} seed {seed}: witness endpoints"
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} conjugates classified, all witnesses verified"))
}

fn criterion_3() -> Outcome {
    let mut pairs = 0;
    for p in [2u64, 3] {
        let rows = ok(oracle_sweep(p, Budget::DEFAULT), "oracle_sweep")?;
        if let Some(bad) = rows.iter().find(|r| !r.agrees()) {
            return Err(format!(
                "F{p}: {} vs {}: brute force {} classifier {}",
                bad.left, bad.right, bad.brute_force, bad.classifier
            ));
        }
        let field = FieldSpec::Prime(p);
        let iso = |a: &ClassLabel, b: &ClassLabel| {
            rows.iter()
                .find(|r| &r.left == a && &r.right == b)
                .map(|r| r.brute_force)
        };
        ensure!(
            iso(&ClassLabel::Heisenberg3, &ClassLabel::AffinePlusAbelian3) == Some(false),
            "F{p}: heis3 vs aff+K"
        );
        for l in labels(field).into_iter().filter(|l| l.param().is_some()) {
            ensure!(iso(&ClassLabel::Hyperbolic3, &l) == Some(false), "F{p}: hyp3 vs {l}");
        }
        pairs += rows.len();
    }
    Ok(format!(
        "{pairs} ordered pairs over F2 and F3, brute force agrees everywhere"
    ))
}

fn criterion_4() -> Outcome {
    let fam = |a: u64, b: u64| family(&Scalar::residue(a, 5), &Scalar::residue(b, 5)).map_err(|e| format!("{e:?}"));
    let w = ok(iso_decide(&fam(2, 0)?, &fam(3, 0)?), "iso_decide")?.ok_or("F(2,0) and F(3,0) not isomorphic")?;
    ensure!(witness_check(&w), "witness rejected");
    ensure!(
        w.matrix == family_rescaling(&Scalar::residue(2, 5)),
        "witness is not the gamma = 2 rescaling"
    );
    ensure!(
        ok(iso_decide(&fam(1, 0)?, &fam(2, 0)?), "iso_decide")?.is_none(),
        "F(1,0) and F(2,0) isomorphic"
    );

    let start = Instant::now();
    let brute = ok(
        brute_force_iso(&fam(2, 1)?, &fam(3, 1)?, Budget::EXTENDED),
        "brute force",
    )?;
    let decided = ok(iso_decide(&fam(2, 1)?, &fam(3, 1)?), "iso_decide")?;
    ensure!(
        brute.is_some() == decided.is_some(),
        "brute force and classifier disagree on F(2,1) vs F(3,1)"
    );
    let c2 = ClassLabel::FamilyBeta1(Scalar::residue(2, 5)).canonical_param();
    let c3 = ClassLabel::FamilyBeta1(Scalar::residue(3, 5)).canonical_param();
    ensure!(
        (c2 == c3) == brute.is_some(),
        "canonical_param disagrees with brute force"
    );
    Ok(format!(
        "gamma = 2 witness verified; F(2,1) vs F(3,1) over F5 isomorphic = {} by exhaustive search ({:.1}s), canonical rule agrees",
        brute.is_some(),
        start.elapsed().as_secs_f64()
    ))
}

fn sample_scalar(rng: &mut ChaCha8Rng, f: FieldSpec, nonzero: bool) -> Scalar {
    loop {
        let s = match f {
            FieldSpec::Rationals => Scalar::rational(rng.random_range(-9..=9), rng.random_range(1..=5)),
            FieldSpec::Prime(p) => Scalar::residue(rng.random_range(0..p), p),
        };
        if !(nonzero && s.is_zero()) {
            return s;
        }
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for f in FIELDS {
        for _ in 0..20 {
            let alpha = sample_scalar(&mut rng, f, true);
            let beta = sample_scalar(&mut rng, f, false);
            let t = ok(family(&alpha, &beta), "family")?;
            let comm = ok(t.commutator(), "commutator")?;
            let e0 = vec![Scalar::one(f), Scalar::zero(f), Scalar::zero(f)];
            let a = ok(t.restricted_ad(&e0, &comm), "restricted_ad")?.ok_or("commutator not invariant")?;
            ensure!(ok(a.trace(), "trace")? == beta, "trace over {f} for ({alpha},{beta})");
            ensure!(
                ok(a.det2(), "det")? == -alpha.clone(),
                "determinant over {f} for ({alpha},{beta})"
            );
        }
    }
    Ok("trace beta and determinant -alpha on 100 samples".into())
}

fn criterion_6() -> Outcome {
    let expected: [(ClassLabel, &[usize]); 8] = [
        (ClassLabel::Abelian(1), &[1, 0]),
        (ClassLabel::Affine2, &[2, 1, 0]),
        (ClassLabel::Abelian(3), &[3, 0]),
        (ClassLabel::Heisenberg3, &[3, 1, 0]),
        (ClassLabel::AffinePlusAbelian3, &[3, 1, 0]),
        (ClassLabel::Hyperbolic3, &[3, 2, 0]),
        (ClassLabel::FamilyBeta0(Scalar::from_i64(1, Q)), &[3, 2, 0]),
        (ClassLabel::FamilyBeta1(Scalar::from_i64(1, Q)), &[3, 2, 0]),
    ];
    for f in FIELDS {
        for (l, dims) in &expected {
            let l = match l {
                ClassLabel::FamilyBeta0(_) => ClassLabel::FamilyBeta0(Scalar::one(f)),
                ClassLabel::FamilyBeta1(_) => ClassLabel::FamilyBeta1(Scalar::one(f)),
                other => other.clone(),
            };
            let got = ok(rep(&l, f)?.derived_dims(), "derived_dims")?;
            ensure!(got == *dims, "{l} over {f}: {got:?}");
        }
    }
    for f in [Q, FieldSpec::Prime(5)] {
        let v = ok(classify(&cross_product(f)), "classify")?;
        ensure!(
            matches!(v, Verdict::NotSolvable { .. }),
            "cross product over {f} classified as solvable"
        );
    }
    Ok("derived series profiles match; cross product is NotSolvable over Q and F5".into())
}

fn block(f: FieldSpec, n: usize, range: std::ops::Range<usize>) -> Subspace {
    let vs: Vec<Vec<Scalar>> = range.map(|i| liesolv::linalg::unit_vector(f, n, i)).collect();
    Subspace::span(f, n, &vs).expect("unit vectors")
}

fn random_action(rng: &mut ChaCha8Rng, f: FieldSpec) -> Result<DerivationAction, String> {
    let n = |r: &mut ChaCha8Rng| sample_scalar(r, f, false);
    match rng.random_range(0..4) {
        // K acting on an abelian J by any matrix
        0 => {
            let d = rng.random_range(1..=3);
            let rows = (0..d).map(|_| (0..d).map(|_| n(rng)).collect()).collect();
            let m = ok(Matrix::from_rows(f, d, rows), "matrix")?;
            Ok(DerivationAction::new(mk_abelian(f, 1), mk_abelian(f, d), vec![m]))
        }
        // K acting on a catalog algebra by an inner derivation
        1 => {
            let choices = [ClassLabel::Affine2, ClassLabel::Heisenberg3, ClassLabel::Hyperbolic3];
            let j = rep(&choices[rng.random_range(0..choices.len())], f)?;
            let x: Vec<Scalar> = (0..j.dim()).map(|_| n(rng)).collect();
            let d = ok(j.ad(&x), "ad")?;
            Ok(DerivationAction::new(mk_abelian(f, 1), j, vec![d]))
        }
        // aff(K) acting on K: b1 must act by zero
        2 => {
            let c = n(rng);
            let maps = vec![Matrix::diagonal(f, &[c]), Matrix::zeros(f, 1, 1)];
            Ok(DerivationAction::new(
                rep(&ClassLabel::Affine2, f)?,
                mk_abelian(f, 1),
                maps,
            ))
        }
        // K^2 acting on K^2 by commuting diagonal matrices
        _ => {
            let maps = (0..2).map(|_| Matrix::diagonal(f, &[n(rng), n(rng)])).collect();
            Ok(DerivationAction::new(mk_abelian(f, 2), mk_abelian(f, 2), maps))
        }
    }
}

fn criterion_7() -> Outcome {
    for f in FIELDS {
        let small = [
            mk_abelian(f, 1),
            rep(&ClassLabel::Affine2, f)?,
            rep(&ClassLabel::Heisenberg3, f)?,
            mk_abelian(f, 2),
        ];
        for l in &small {
            for j in &small {
                let s = ok(
                    semidirect(&DerivationAction::trivial(l.clone(), j.clone())),
                    "semidirect",
                )?;
                ensure!(
                    s == ok(direct_sum(l, j), "direct_sum")?,
                    "zero action differs from direct sum over {f}"
                );
            }
        }
        let id = DerivationAction::new(mk_abelian(f, 1), mk_abelian(f, 2), vec![Matrix::identity(f, 2)]);
        ensure!(
            ok(semidirect(&id), "semidirect")? == rep(&ClassLabel::Hyperbolic3, f)?,
            "K x| K^2 != hyp3 over {f}"
        );

        let six = [
            ClassLabel::Abelian(3),
            ClassLabel::Heisenberg3,
            ClassLabel::AffinePlusAbelian3,
            ClassLabel::Hyperbolic3,
            ClassLabel::FamilyBeta0(Scalar::one(f)),
            ClassLabel::FamilyBeta1(Scalar::one(f)),
        ];
        for l in &six {
            let t = rep(l, f)?;
            let ideal = ok(almost_abelian_check(&t), "almost_abelian_check")?
                .ideal()
                .cloned()
                .ok_or(format!("{l} over {f}: no abelian ideal"))?;
            let (act, w) = ok(codim1_split(&t, &ideal), "codim1_split")?;
            let s = ok(semidirect(&act), "semidirect")?;
            ensure!(
                w.source == t && w.target == s && witness_check(&w),
                "{l} over {f}: split witness"
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..50 {
        let f = FIELDS[k % FIELDS.len()];
        let act = random_action(&mut rng, f)?;
        for d in &act.maps {
            ensure!(
                ok(derivation_check(&act.target, d), "derivation_check")?,
                "sample {k}: not a derivation"
            );
        }
        let s = ok(semidirect(&act), "semidirect")?;
        let (m, n) = (act.domain.dim(), act.target.dim());
        ensure!(naive_is_lie(&s), "sample {k}: product violates the axioms");
        let j_block = block(f, m + n, m..m + n);
        let l_block = block(f, m + n, 0..m);
        ensure!(
            ok(s.is_ideal(&j_block), "is_ideal")?,
            "sample {k}: J block is not an ideal"
        );
        ensure!(
            ok(s.subalgebra(&j_block), "subalgebra")? == act.target,
            "sample {k}: J block differs from J"
        );
        ensure!(
            ok(s.subalgebra(&l_block), "subalgebra")? == act.domain,
            "sample {k}: L block differs from L"
        );
        let quotient = ok(s.quotient(&j_block), "quotient")?;
        ensure!(
            quotient.tensor == act.domain,
            "sample {k}: quotient by J differs from L"
        );
    }
    Ok("zero action = direct sum, K x|_id K^2 = hyp3, six splits verified, 50 random actions".into())
}

fn is_abelian_ideal_hyperplane(t: &StructureTensor, h: &Subspace) -> bool {
    let b = h.basis_vectors();
    let abelian = b
        .iter()
        .all(|x| b.iter().all(|y| t.bracket(x, y).unwrap().iter().all(Scalar::is_zero)));
    h.dim() + 1 == t.dim() && abelian && t.is_ideal(h).unwrap()
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    for f in FIELDS {
        for (li, l) in labels(f).iter().enumerate() {
            let t = rep(l, f)?;
            for s in 0..10u64 {
                let subject = if s == 0 {
                    t.clone()
                } else {
                    ok(random_conjugate(&t, (li as u64) << 16 | s), "conjugate")?.0
                };
                let found = ok(almost_abelian_check(&subject), "almost_abelian_check")?;
                let h = found.ideal().ok_or(format!("{l} over {f}: {found:?}"))?;
                ensure!(
                    is_abelian_ideal_hyperplane(&subject, h),
                    "{l} over {f}: returned subspace is not an abelian ideal"
                );
                checked += 1;
            }
        }
    }
    let cross = ok(
        almost_abelian_check(&cross_product(FieldSpec::Prime(5))),
        "almost_abelian_check",
    )?;
    ensure!(cross.ideal().is_none(), "cross product over F5 reported almost abelian");
    Ok(format!(
        "{checked} representatives and conjugates almost abelian; cross product over F5 is not"
    ))
}

fn criterion_9() -> Outcome {
    let mut seen = 0;
    for k in 0..100u64 {
        let f = FIELDS[(k as usize) % FIELDS.len()];
        let ls = labels(f);
        let l = &ls[(k as usize * 7) % ls.len()];
        let (t, _) = ok(random_conjugate(&rep(l, f)?, 9000 + k), "conjugate")?;
        let comm = ok(t.commutator(), "commutator")?;
        ensure!(
            ok(t.solvable_by_extension(&comm), "solvable_by_extension")?,
            "{l} over {f}: extension test false"
        );
        ensure!(ok(t.is_solvable(), "is_solvable")?, "{l} over {f}: not solvable");
        seen += 1;
    }
    Ok(format!(
        "{seen} conjugates: solvable by extension and solvable, no counterexample"
    ))
}

fn data(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(sub)
}

fn files(sub: &str, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(data(sub))
        .map(|d| d.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    v.retain(|p| p.extension().is_some_and(|e| e == ext));
    v.sort();
    v
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_liesolv");
    let golden = files("golden", "lie");
    let table = [
        "abelian1_q",
        "abelian2_q",
        "affine2_q",
        "abelian3_q",
        "heisenberg3_q",
        "affine_plus_abelian3_q",
        "hyperbolic3_q",
        "family_beta0_8_q",
        "family_beta1_half_q",
    ];
    for name in table {
        ensure!(
            golden.iter().any(|p| p.file_stem().unwrap() == name),
            "missing golden file {name}"
        );
    }
    for lie in &golden {
        let expected = fs::read_to_string(lie.with_extension("json")).map_err(|e| e.to_string())?;
        let out = Command::new(bin)
            .args(["classify", "--json"])
            .arg(lie)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.stdout == expected.as_bytes(),
            "golden mismatch for {}",
            lie.display()
        );
    }
    let corpus = files("roundtrip", "lie");
    ensure!(corpus.len() == 30, "round-trip corpus has {} files", corpus.len());
    for lie in &corpus {
        let text = fs::read_to_string(lie).map_err(|e| e.to_string())?;
        let p = ok(parse_presentation(&text), "parse")?;
        ensure!(
            ok(parse_presentation(&p.render()), "reparse")? == p,
            "round trip fails on {}",
            lie.display()
        );
    }
    let bad = files("malformed", "lie");
    for lie in &bad {
        let expect = fs::read_to_string(lie.with_extension("expect")).map_err(|e| e.to_string())?;
        let out = Command::new(bin)
            .arg("verify")
            .arg(lie)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.code() == Some(2),
            "{}: exit {:?}",
            lie.display(),
            out.status.code()
        );
        let stderr = String::from_utf8_lossy(&out.stderr);
        let needle = match expect.trim().strip_prefix("jacobi ") {
            Some(triple) => triple.to_string(),
            None => format!(":{}:", expect.trim()),
        };
        ensure!(
            stderr.contains(&needle),
            "{}: diagnostic `{}` lacks `{needle}`",
            lie.display(),
            stderr.trim()
        );
    }
    Ok(format!(
        "{} golden files, {} round-trip files, {} malformed files with positions",
        golden.len(),
        corpus.len(),
        bad.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom suite", criterion_1),
        ("round-trip classification", criterion_2),
        ("non-redundancy vs oracle", criterion_3),
        ("iso_iff reproduction", criterion_4),
        ("trace/determinant invariant", criterion_5),
        ("solvability and series", criterion_6),
        ("semidirect laws", criterion_7),
        ("almost-abelian", criterion_8),
        ("quotient-solvability", criterion_9),
        ("frontend", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
