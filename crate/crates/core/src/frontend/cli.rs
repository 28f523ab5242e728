//! The `liesolv` command line.
//!
//! Exit codes: 0 success or isomorphic, 1 not isomorphic or not solvable,
//! 2 input error, 3 internal invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::report::{to_json, ClassifyReport, InvariantsReport, IsoReport};
use super::{parse_matrix_blocks, parse_presentation, Presentation};
use crate::catalog::{family, representative, semidirect, CatalogError, ClassLabel, DerivationAction};
use crate::classify::{classify, iso_decide, ClassifyError, Verdict};
use crate::lie::StructureTensor;
use crate::oracle::{brute_force_iso, oracle_sweep, Budget, OracleError};
use crate::scalars::{parse_scalar, FieldSpec, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "liesolv",
    version,
    about = "Classify solvable Lie algebras of dimension at most three"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the algebra in a `.lie` file.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the Lie algebra axioms.
    Verify { file: PathBuf },
    /// Print structural invariants as JSON.
    Invariants { file: PathBuf },
    /// Decide isomorphism of two algebras.
    Iso {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Cross-check by exhaustive search over GL_n(F_p), p <= 5.
        #[arg(long)]
        oracle: bool,
    },
    /// Compare the classifier with brute force on all catalog pairs over F_p.
    OracleSweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
        p: u64,
    },
    /// Semidirect product L ⋉ J from a file of derivation matrices.
    Semidirect {
        file_l: PathBuf,
        file_j: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Print a catalog representative as a `.lie` presentation.
    Catalog {
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        field: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::Internal(_) => EXIT_INTERNAL,
            ClassifyError::NotSolvable => EXIT_NEGATIVE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Lie(_) | CatalogError::Linalg(_) => Failure::internal(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Classify(c) => c.into(),
            OracleError::Disagreement(..) | OracleError::Lie(_) => Failure::internal(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

type Outcome = Result<(i32, String), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, Failure> {
    parse_presentation(&read(path)?).map_err(|e| Failure::input(format!("{}:{e}", path.display())))
}

fn load(path: &Path) -> Result<StructureTensor, Failure> {
    load_presentation(path)?
        .to_tensor()
        .map_err(|v| Failure::input(format!("{}: not a Lie algebra: {v}", path.display())))
}

fn internal_lie(e: impl std::fmt::Display) -> Failure {
    Failure::internal(e.to_string())
}

fn cmd_classify(file: &Path, json: bool) -> Outcome {
    let t = load(file)?;
    let verdict = classify(&t)?;
    let code = match verdict {
        Verdict::Classified(_) => EXIT_OK,
        Verdict::NotSolvable { .. } => EXIT_NEGATIVE,
    };
    if json {
        let report = ClassifyReport::new(&t, &verdict).map_err(internal_lie)?;
        return Ok((code, to_json(&report)));
    }
    let text = match &verdict {
        Verdict::Classified(c) => {
            let mut s = format!("{}\n", c.label);
            if let Some(canon) = c.label.canonical_param() {
                s.push_str(&format!("canonical parameter: {canon}\n"));
            }
            s.push_str("witness:\n");
            for i in 0..c.witness.matrix.rows() {
                let row: Vec<String> = c.witness.matrix.row(i).iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("  {}\n", row.join(" ")));
            }
            s
        }
        Verdict::NotSolvable { derived_dims } => {
            format!("NotSolvable\nderived series dimensions: {derived_dims:?}\n")
        }
    };
    Ok((code, text))
}

fn cmd_verify(file: &Path) -> Outcome {
    let t = load(file)?;
    Ok((
        EXIT_OK,
        format!("ok: Lie algebra of dimension {} over {}\n", t.dim(), t.field()),
    ))
}

fn cmd_invariants(file: &Path) -> Outcome {
    let t = load(file)?;
    let report = InvariantsReport::new(&t)?;
    Ok((EXIT_OK, to_json(&report)))
}

fn cmd_iso(a: &Path, b: &Path, oracle: bool) -> Outcome {
    let (t1, t2) = (load(a)?, load(b)?);
    if t1.field() != t2.field() {
        return Err(Failure::input(format!(
            "fields differ: {} vs {}",
            t1.field(),
            t2.field()
        )));
    }
    let decided = iso_decide(&t1, &t2)?;
    let mut out = String::new();
    let mut method = "classifier";
    if oracle {
        method = "classifier+brute-force";
        let brute = if t1.dim() == t2.dim() {
            brute_force_iso(&t1, &t2, Budget::EXTENDED)?
        } else {
            None
        };
        if brute.is_some() != decided.is_some() {
            return Err(Failure::internal(format!(
                "classifier says {}, brute force says {}",
                decided.is_some(),
                brute.is_some()
            )));
        }
    }
    out.push_str(&to_json(&IsoReport::new(&t1, decided.as_ref(), method)));
    Ok((if decided.is_some() { EXIT_OK } else { EXIT_NEGATIVE }, out))
}

fn cmd_sweep(p: u64) -> Outcome {
    let rows = oracle_sweep(p, Budget::DEFAULT)?;
    let mut out = String::new();
    let mut disagreements = 0;
    for r in &rows {
        let mark = if r.agrees() { "ok" } else { "MISMATCH" };
        if !r.agrees() {
            disagreements += 1;
        }
        out.push_str(&format!(
            "{mark} {} ~ {}: brute-force={} classifier={}\n",
            r.left, r.right, r.brute_force, r.classifier
        ));
    }
    out.push_str(&format!(
        "{} pairs over F{p}, {disagreements} disagreements\n",
        rows.len()
    ));
    Ok((if disagreements == 0 { EXIT_OK } else { EXIT_INTERNAL }, out))
}

fn cmd_semidirect(file_l: &Path, file_j: &Path, phi: &Path) -> Outcome {
    let (l, j) = (load(file_l)?, load(file_j)?);
    if l.field() != j.field() {
        return Err(Failure::input(format!("fields differ: {} vs {}", l.field(), j.field())));
    }
    let maps =
        parse_matrix_blocks(&read(phi)?, l.field()).map_err(|e| Failure::input(format!("{}:{e}", phi.display())))?;
    let act = DerivationAction::new(l, j, maps);
    let t = semidirect(&act)?;
    Ok((EXIT_OK, Presentation::from_tensor(&t).render()))
}

fn scalar_arg(name: &str, text: Option<&str>, field: FieldSpec) -> Result<Option<Scalar>, Failure> {
    text.map(|s| parse_scalar(s, field).map_err(|e| Failure::input(format!("--{name}: {e}"))))
        .transpose()
}

fn cmd_catalog(label: &str, alpha: Option<&str>, beta: Option<&str>, field: &str) -> Outcome {
    let field: FieldSpec = field.parse().map_err(|e| Failure::input(format!("--field: {e}")))?;
    let alpha = scalar_arg("alpha", alpha, field)?;
    let beta = scalar_arg("beta", beta, field)?;
    let key: String = label
        .chars()
        .filter(|c| *c != '-' && *c != '_')
        .collect::<String>()
        .to_ascii_lowercase();
    let need_alpha = || {
        alpha
            .clone()
            .ok_or_else(|| Failure::input(format!("{label} needs --alpha")))
    };
    let t = match key.as_str() {
        "abelian1" => representative(&ClassLabel::Abelian(1), field)?,
        "abelian2" => representative(&ClassLabel::Abelian(2), field)?,
        "abelian3" => representative(&ClassLabel::Abelian(3), field)?,
        "affine2" => representative(&ClassLabel::Affine2, field)?,
        "heisenberg3" => representative(&ClassLabel::Heisenberg3, field)?,
        "affineplusabelian3" => representative(&ClassLabel::AffinePlusAbelian3, field)?,
        "hyperbolic3" => representative(&ClassLabel::Hyperbolic3, field)?,
        "familybeta0" => representative(&ClassLabel::FamilyBeta0(need_alpha()?), field)?,
        "familybeta1" => representative(&ClassLabel::FamilyBeta1(need_alpha()?), field)?,
        "family" => family(&need_alpha()?, &beta.clone().unwrap_or_else(|| Scalar::zero(field)))?,
        _ => return Err(Failure::input(format!("unknown catalog label `{label}`"))),
    };
    Ok((EXIT_OK, Presentation::from_tensor(&t).render()))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Classify { file, json } => cmd_classify(file, *json),
        Command::Verify { file } => cmd_verify(file),
        Command::Invariants { file } => cmd_invariants(file),
        Command::Iso { file_a, file_b, oracle } => cmd_iso(file_a, file_b, *oracle),
        Command::OracleSweep { p } => cmd_sweep(*p),
        Command::Semidirect { file_l, file_j, phi } => cmd_semidirect(file_l, file_j, phi),
        Command::Catalog {
            label,
            alpha,
            beta,
            field,
        } => cmd_catalog(label, alpha.as_deref(), beta.as_deref(), field),
    };
    match outcome {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
