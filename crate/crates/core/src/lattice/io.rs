use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{Boundary, FamilyTag, LatticeCode, ShapeLayout, StabilizerShape};
use crate::error::{Error, Result};

/// On-disk form of a [`LatticeCode`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    #[serde(rename = "H")]
    pub height: usize,
    #[serde(rename = "L")]
    pub width: usize,
    pub boundary: Boundary,
    /// `uniform` (one shape on every row where it fits) or `per_row`.
    pub layout: String,
    /// Shapes as `(down, right)` offset lists, bottom anchor row first.
    pub row_shapes: Vec<Vec<(i32, i32)>>,
    /// Column range of each row, bottom first. Present for planar codes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_ranges: Option<Vec<(i32, i32)>>,
    pub n: usize,
    pub k: usize,
    /// Each check as the sorted list of qubits it acts on.
    pub parity_check: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyTag>,
}

impl From<&LatticeCode> for CodeFile {
    fn from(code: &LatticeCode) -> Self {
        let (layout, shapes) = match code.layout() {
            ShapeLayout::Uniform(s) => ("uniform", vec![s.clone()]),
            ShapeLayout::PerRow(v) => ("per_row", v.clone()),
        };
        let rectangular = code
            .row_ranges()
            .iter()
            .all(|&r| r == (0, code.width() as i32));
        CodeFile {
            height: code.height(),
            width: code.width(),
            boundary: code.boundary(),
            layout: layout.into(),
            row_shapes: shapes.iter().map(|s| s.offsets()).collect(),
            row_ranges: (!rectangular).then(|| code.row_ranges().to_vec()),
            n: code.n(),
            k: code.k(),
            parity_check: code.checks().iter().map(|c| c.support.clone()).collect(),
            family: code.family().cloned(),
        }
    }
}

impl CodeFile {
    /// Rebuilds the code and checks it against the stored parity checks.
    pub fn to_code(&self) -> Result<LatticeCode> {
        let shapes = self
            .row_shapes
            .iter()
            .map(|cells| StabilizerShape::from_cells(cells))
            .collect::<Result<Vec<_>>>()?;
        let layout = match self.layout.as_str() {
            "uniform" => match shapes.as_slice() {
                [s] => ShapeLayout::Uniform(s.clone()),
                _ => return Err(Error::Parse("uniform layout needs exactly one shape".into())),
            },
            "per_row" => ShapeLayout::PerRow(shapes),
            other => return Err(Error::Parse(format!("unknown layout `{other}`"))),
        };
        let ranges = self
            .row_ranges
            .clone()
            .unwrap_or_else(|| vec![(0, self.width as i32); self.height]);
        if ranges.len() != self.height {
            return Err(Error::Parse(format!(
                "row_ranges has {} entries for height {}",
                ranges.len(),
                self.height
            )));
        }
        let mut code =
            LatticeCode::with_rows(self.height, self.width, layout, self.boundary, ranges)?;
        code.family = self.family.clone();
        let rebuilt: Vec<Vec<usize>> = code.checks().iter().map(|c| c.support.clone()).collect();
        if rebuilt != self.parity_check || code.n() != self.n || code.k() != self.k {
            return Err(Error::Parse(
                "parity_check does not match the code rebuilt from its shapes".into(),
            ));
        }
        Ok(code)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a code file; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            Error::Parse(format!("code file field `{field}`: {}", e.into_inner()))
        })
    }
}

/// Sparse parity-check export: a `checks qubits` header, then one line per
/// check listing its 0-based qubit indices.
pub fn write_alist<W: Write>(code: &LatticeCode, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", code.num_checks(), code.n())?;
    for check in code.checks() {
        let line: Vec<String> = check.support.iter().map(|q| q.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
