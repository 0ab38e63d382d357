//! JSON file formats for fields, matrices, codes and repair families.
//!
//! Elements are little-endian coefficient vectors of length `e`; family
//! coordinates are 1-based on disk and 0-based in memory.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::construct::ConstructionPlan;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::locality::RepairFamily;
use crate::matgf::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub e: usize,
    pub modulus: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldJson,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "G")]
    pub g: MatrixJson,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<ConstructionPlan>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl From<&FieldSpec> for FieldJson {
    fn from(f: &FieldSpec) -> Self {
        Self {
            p: f.characteristic(),
            e: f.degree(),
            modulus: f.modulus().to_vec(),
        }
    }
}

impl FieldJson {
    pub fn to_field(&self) -> Result<FieldSpec> {
        let f = FieldSpec::with_modulus(self.p, self.modulus.clone())?;
        if f.degree() != self.e {
            return Err(Error::Format(format!(
                "e = {} but the modulus has degree {}",
                self.e,
                f.degree()
            )));
        }
        Ok(f)
    }
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        let data = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).coeffs()).collect())
            .collect();
        Self {
            field: m.field().into(),
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix> {
        let field = self.field.to_field()?;
        if self.data.len() != self.rows || self.data.iter().any(|row| row.len() != self.cols) {
            return Err(Error::Format(format!(
                "data does not have shape {} x {}",
                self.rows, self.cols
            )));
        }
        let values = self
            .data
            .iter()
            .flatten()
            .map(|c| field.element(c).map(|x| x.value()))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_values(&field, self.rows, self.cols, values)
    }
}

impl From<&LinearCode> for CodeJson {
    fn from(c: &LinearCode) -> Self {
        Self {
            field: c.field().into(),
            n: c.n(),
            k: c.k(),
            g: c.generator().into(),
            h: Some(c.parity_check().into()),
            plan: None,
        }
    }
}

impl CodeJson {
    pub fn with_plan(code: &LinearCode, plan: &ConstructionPlan) -> Self {
        Self {
            plan: Some(plan.clone()),
            ..code.into()
        }
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let field = self.field.to_field()?;
        let g = self.g.to_matrix()?;
        if g.field() != &field {
            return Err(Error::Format("G is over a different field".into()));
        }
        let code = match &self.h {
            Some(h) => {
                let h = h.to_matrix()?;
                if h.field() != &field {
                    return Err(Error::Format("H is over a different field".into()));
                }
                LinearCode::from_pair(&g, &h)?
            }
            None => LinearCode::from_generator(&g)?,
        };
        if code.n() != self.n || code.k() != self.k {
            return Err(Error::Format(format!(
                "declared [{}, {}] but the matrices give [{}, {}]",
                self.n,
                self.k,
                code.n(),
                code.k()
            )));
        }
        Ok(code)
    }
}

impl From<&RepairFamily> for FamilyJson {
    fn from(f: &RepairFamily) -> Self {
        let blocks = f
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&x| x + 1).collect())
            .collect();
        Self { n: f.n(), blocks }
    }
}

impl FamilyJson {
    pub fn to_family(&self) -> Result<RepairFamily> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&x| {
                        if x == 0 {
                            Err(Error::Format("family coordinates are 1-based".into()))
                        } else {
                            Ok(x - 1)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        RepairFamily::new(self.n, blocks)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}
