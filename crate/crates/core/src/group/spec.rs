//! JSON group-spec documents.
//!
//! ```json
//! {
//!   "name": "z2",
//!   "order": 2,
//!   "mul": [0, 1, 1, 0],
//!   "irreps": [
//!     { "label": "chi0", "dim": 1, "matrices": [[[1, 0]], [[1, 0]]] },
//!     { "label": "chi1", "dim": 1, "matrices": [[[1, 0]], [[-1, 0]]] }
//!   ]
//! }
//! ```
//!
//! Each entry of `matrices` is one element's matrix as a row-major list of
//! `[re, im]` pairs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupTable, Irrep, IrrepTable, Representation};
use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub mul: Vec<usize>,
    pub irreps: Vec<IrrepSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepSpec {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

/// Validates the table, each irrep and the completeness of the irrep list.
pub fn load_group(spec: &GroupSpec, tol: f64) -> Result<FiniteGroup> {
    let table = Arc::new(GroupTable::new(spec.order, spec.mul.clone())?);
    let mut irreps = Vec::with_capacity(spec.irreps.len());
    for (idx, ir) in spec.irreps.iter().enumerate() {
        let field = |reason: String| Error::InvalidRepresentation {
            label: ir.label.clone(),
            reason: format!("irreps[{idx}]: {reason}"),
        };
        if ir.dim == 0 {
            return Err(field("dim must be positive".into()));
        }
        if ir.matrices.len() != spec.order {
            return Err(field(format!(
                "matrices has {} entries, expected one per element ({})",
                ir.matrices.len(),
                spec.order
            )));
        }
        let mut mats = Vec::with_capacity(spec.order);
        for (g, entries) in ir.matrices.iter().enumerate() {
            if entries.len() != ir.dim * ir.dim {
                return Err(field(format!(
                    "matrices[{g}] has {} entries, expected {}",
                    entries.len(),
                    ir.dim * ir.dim
                )));
            }
            mats.push(ComplexMatrix::from_row_iterator(
                ir.dim,
                ir.dim,
                entries.iter().map(|&[re, im]| c64(re, im)),
            ));
        }
        let rep = Representation::new(table.clone(), &ir.label, mats, tol)?;
        irreps.push(Irrep {
            label: ir.label.clone(),
            rep,
        });
    }
    let irreps = IrrepTable::new(table.clone(), irreps, tol)?;
    Ok(FiniteGroup {
        name: spec.name.clone().unwrap_or_else(|| "custom".into()),
        table,
        irreps,
    })
}

pub fn load_group_json(text: &str, tol: f64) -> Result<FiniteGroup> {
    let spec: GroupSpec = serde_json::from_str(text)?;
    load_group(&spec, tol)
}

impl FiniteGroup {
    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            name: Some(self.name.clone()),
            order: self.table.order(),
            mul: self.table.table().to_vec(),
            irreps: self
                .irreps
                .iter()
                .map(|i| IrrepSpec {
                    label: i.label.clone(),
                    dim: i.rep.dim(),
                    matrices: i
                        .rep
                        .matrices()
                        .iter()
                        .map(|m| {
                            // row-major
                            m.transpose().iter().map(|z| [z.re, z.im]).collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2: &str = r#"{
        "order": 2, "mul": [0, 1, 1, 0],
        "irreps": [
            {"label": "chi0", "dim": 1, "matrices": [[[1, 0]], [[1, 0]]]},
            {"label": "chi1", "dim": 1, "matrices": [[[1, 0]], [[-1, 0]]]}
        ]
    }"#;

    #[test]
    fn parses_minimal_document() {
        let g = load_group_json(Z2, 1e-9).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.irreps.labels(), vec!["chi0", "chi1"]);
    }

    #[test]
    fn missing_irrep_is_rejected() {
        let mut spec: GroupSpec = serde_json::from_str(Z2).unwrap();
        spec.irreps.pop();
        let err = load_group(&spec, 1e-9).unwrap_err();
        assert!(err.to_string().contains("sum of squared"), "{err}");
    }

    #[test]
    fn wrong_entry_count_names_the_field() {
        let mut spec: GroupSpec = serde_json::from_str(Z2).unwrap();
        spec.irreps[1].matrices[1].push([0.0, 0.0]);
        let err = load_group(&spec, 1e-9).unwrap_err();
        assert!(err.to_string().contains("irreps[1]: matrices[1]"), "{err}");
    }

    #[test]
    fn row_major_round_trip() {
        let g = super::super::catalog_group("s3").unwrap();
        let spec = g.to_spec();
        let back = load_group(&spec, 1e-9).unwrap();
        for (a, b) in g.irreps.iter().zip(back.irreps.iter()) {
            for (x, y) in a.rep.matrices().iter().zip(b.rep.matrices()) {
                assert_eq!(x, y);
            }
        }
    }
}
