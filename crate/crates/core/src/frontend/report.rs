//! Stable-schema JSON for classification, invariants and isomorphism results.

use serde::Serialize;

use crate::catalog::{almost_abelian_check, AlmostAbelian, CatalogError};
use crate::classify::Verdict;
use crate::lie::{IsoWitness, LieError, StructureTensor};
use crate::linalg::Matrix;

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|s| s.to_string()).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub class: String,
    pub param: Option<String>,
    pub canonical_param: Option<String>,
    pub dim_commutator: usize,
    pub dim_center: usize,
    pub solvable: bool,
    pub witness: Option<Vec<Vec<String>>>,
    pub field: String,
    pub dim: usize,
}

impl ClassifyReport {
    pub fn new(t: &StructureTensor, verdict: &Verdict) -> Result<Self, LieError> {
        let (class, param, canonical, witness) = match verdict {
            Verdict::Classified(c) => (
                c.label.name().to_string(),
                c.label.param().map(|a| a.to_string()),
                c.label.canonical_param().map(|a| a.to_string()),
                Some(matrix_strings(&c.witness.matrix)),
            ),
            Verdict::NotSolvable { .. } => ("NotSolvable".to_string(), None, None, None),
        };
        Ok(ClassifyReport {
            class,
            param,
            canonical_param: canonical,
            dim_commutator: t.commutator()?.dim(),
            dim_center: t.center()?.dim(),
            solvable: t.is_solvable()?,
            witness,
            field: t.field().to_string(),
            dim: t.dim(),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct InvariantsReport {
    pub dim: usize,
    pub dim_commutator: usize,
    pub dim_center: usize,
    pub derived_dims: Vec<usize>,
    pub solvable: bool,
    pub almost_abelian: Option<bool>,
    pub field: String,
}

impl InvariantsReport {
    pub fn new(t: &StructureTensor) -> Result<Self, CatalogError> {
        let almost_abelian = match almost_abelian_check(t)? {
            AlmostAbelian::Found(_) => Some(true),
            AlmostAbelian::NotAlmostAbelian => Some(false),
            AlmostAbelian::Inconclusive => None,
        };
        Ok(InvariantsReport {
            dim: t.dim(),
            dim_commutator: t.commutator()?.dim(),
            dim_center: t.center()?.dim(),
            derived_dims: t.derived_dims()?,
            solvable: t.is_solvable()?,
            almost_abelian,
            field: t.field().to_string(),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    pub witness: Option<Vec<Vec<String>>>,
    pub method: &'static str,
    pub field: String,
}

impl IsoReport {
    pub fn new(t: &StructureTensor, w: Option<&IsoWitness>, method: &'static str) -> Self {
        IsoReport {
            isomorphic: w.is_some(),
            witness: w.map(|w| matrix_strings(&w.matrix)),
            method,
            field: t.field().to_string(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{representative, ClassLabel};
    use crate::classify::classify;
    use crate::scalars::{FieldSpec, Scalar};
    use serde_json::Value;

    fn report(t: &StructureTensor) -> Value {
        let r = ClassifyReport::new(t, &classify(t).unwrap()).unwrap();
        serde_json::from_str(&to_json(&r)).unwrap()
    }

    #[test]
    fn hyperbolic_report() {
        let t = representative(&ClassLabel::Hyperbolic3, FieldSpec::Rationals).unwrap();
        let v = report(&t);
        assert_eq!(v["class"], "Hyperbolic3");
        assert_eq!(v["param"], Value::Null);
        assert_eq!(v["dim_commutator"], 2);
        assert_eq!(v["dim_center"], 0);
        assert_eq!(v["solvable"], true);
    }

    #[test]
    fn abelian_line_report() {
        let v = report(&StructureTensor::zero(FieldSpec::Rationals, 1));
        assert_eq!(v["class"], "Abelian");
        assert_eq!(v["param"], Value::Null);
        assert_eq!(v["dim_commutator"], 0);
        assert_eq!(v["witness"], serde_json::json!([["1"]]));
    }

    #[test]
    fn family_report_and_key_order() {
        let q = FieldSpec::Rationals;
        let t = representative(&ClassLabel::FamilyBeta0(Scalar::from_i64(8, q)), q).unwrap();
        let v = report(&t);
        assert_eq!(v["param"], "8");
        assert_eq!(v["canonical_param"], "2");
        let text = to_json(&ClassifyReport::new(&t, &classify(&t).unwrap()).unwrap());
        let keys = [
            "class",
            "param",
            "canonical_param",
            "dim_commutator",
            "dim_center",
            "solvable",
            "witness",
            "field",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}
