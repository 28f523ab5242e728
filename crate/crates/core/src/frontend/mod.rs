//! The `.lie` presentation format, JSON reports and the command-line driver.

pub mod cli;
mod parser;
pub mod report;

use std::fmt::Write as _;

use thiserror::Error;

use crate::lie::{AxiomViolation, StructureTensor};
use crate::linalg::{is_zero_vector, Matrix};
use crate::scalars::{parse_scalar, FieldSpec, Scalar};

pub use parser::{parse_presentation, ParseError, ParseErrorKind};

/// One bracket relation `[b_i, b_j] = rhs` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub i: usize,
    pub j: usize,
    pub rhs: Vec<Scalar>,
}

/// A field, a dimension and the listed brackets; omitted pairs are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub dim: usize,
    pub relations: Vec<Relation>,
}

impl Presentation {
    /// Nonzero brackets of `t` for `i < j`, in lexicographic order.
    pub fn from_tensor(t: &StructureTensor) -> Self {
        let n = t.dim();
        let relations = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| Relation {
                i,
                j,
                rhs: t.basis_bracket(i, j),
            })
            .filter(|r| !is_zero_vector(&r.rhs))
            .collect();
        Presentation {
            field: t.field(),
            dim: n,
            relations,
        }
    }

    /// Pretty-prints in the grammar accepted by [`parse_presentation`].
    pub fn render(&self) -> String {
        let mut out = format!("field {}\ndim {}\n", self.field.tag(), self.dim);
        for r in &self.relations {
            let _ = writeln!(out, "[b{},b{}] = {}", r.i, r.j, render_lincomb(&r.rhs));
        }
        out
    }

    /// The structure tensor with antisymmetric completion, validated.
    pub fn to_tensor(&self) -> Result<StructureTensor, AxiomViolation> {
        let mut t = StructureTensor::zero(self.field, self.dim);
        for r in &self.relations {
            t.set_bracket(r.i, r.j, &r.rhs);
        }
        t.validate()?;
        Ok(t)
    }
}

fn is_negative(c: &Scalar) -> bool {
    c.as_rational()
        .is_some_and(|q| q < &num_rational::BigRational::from_integer(0.into()))
}

fn render_lincomb(rhs: &[Scalar]) -> String {
    let mut out = String::new();
    for (k, c) in rhs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (sign, mag) = if out.is_empty() {
            ("", c.clone())
        } else if is_negative(c) {
            (" - ", -c.clone())
        } else {
            (" + ", c.clone())
        };
        out.push_str(sign);
        if !mag.is_one() {
            let _ = write!(out, "{mag}*");
        }
        let _ = write!(out, "b{k}");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Error in a matrix file, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct MatrixFileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Square matrices, one row per line, blocks separated by blank lines.
pub fn parse_matrix_blocks(text: &str, field: FieldSpec) -> Result<Vec<Matrix>, MatrixFileError> {
    let mut blocks: Vec<Vec<Vec<Scalar>>> = vec![Vec::new()];
    let mut starts = vec![1];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            if !blocks.last().expect("nonempty").is_empty() {
                blocks.push(Vec::new());
                starts.push(idx + 2);
            }
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0;
        for tok in line.split_whitespace() {
            let at = line[col..].find(tok).expect("token from this line") + col;
            col = at + tok.len();
            let s = parse_scalar(tok, field).map_err(|e| MatrixFileError {
                line: idx + 1,
                column: at + 1,
                message: e.to_string(),
            })?;
            row.push(s);
        }
        let block = blocks.last_mut().expect("nonempty");
        if let Some(first) = block.first() {
            if first.len() != row.len() {
                return Err(MatrixFileError {
                    line: idx + 1,
                    column: 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        block.push(row);
    }
    if blocks.last().is_some_and(|b| b.is_empty()) {
        blocks.pop();
        starts.pop();
    }
    blocks
        .into_iter()
        .zip(starts)
        .map(|(rows, start)| {
            let n = rows.len();
            if rows[0].len() != n {
                return Err(MatrixFileError {
                    line: start,
                    column: 1,
                    message: format!("block is {}x{}, expected a square matrix", n, rows[0].len()),
                });
            }
            Ok(Matrix::from_rows(field, n, rows).expect("checked shape"))
        })
        .collect()
}
