use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{FitPoint, MCResult};
use crate::error::{Error, Result};
use crate::noise::NoiseKind;

/// One line of a sweep table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: String,
    /// The swept physical parameter (`p` or `kappa_1/kappa_2`).
    pub params: f64,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub shots: u64,
    pub failures: u64,
    pub p_tot: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl SweepRow {
    pub fn model_name(kind: NoiseKind) -> &'static str {
        match kind {
            NoiseKind::Phenomenological => "phen",
            NoiseKind::GenericCircuit => "generic",
            NoiseKind::CatCircuit => "cat",
        }
    }

    pub fn fit_point(&self) -> FitPoint {
        FitPoint { x: self.params, d: self.d, p_tot: self.p_tot, std_err: self.stderr }
    }
}

impl From<&MCResult> for SweepRow {
    fn from(r: &MCResult) -> Self {
        Self {
            model: Self::model_name(r.model.kind).into(),
            params: r.model.abscissa(),
            d: r.d,
            n: r.n,
            k: r.k,
            shots: r.shots,
            failures: r.failing_shots,
            p_tot: r.p_tot,
            stderr: r.std_err,
            seed: r.seed,
        }
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sweep table; a malformed cell is reported with its column name.
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let row = record.deserialize(Some(&headers)).map_err(|e| {
            let column = match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => {
                    err.field().and_then(|i| headers.get(i as usize))
                }
                _ => None,
            };
            let line = record.position().map_or(0, |p| p.line());
            match column {
                Some(c) => Error::Parse(format!("sweep line {line}, field `{c}`: {e}")),
                None => Error::Parse(format!("sweep line {line}: {e}")),
            }
        })?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_documented_columns() {
        let row = SweepRow {
            model: "phen".into(),
            params: 0.01,
            d: 3,
            n: 3,
            k: 1,
            shots: 1000,
            failures: 100,
            p_tot: 0.1,
            stderr: 0.01,
            seed: 7,
        };
        let mut buf = Vec::new();
        write_sweep_csv(std::slice::from_ref(&row), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "model,params,d,n,k,shots,failures,p_tot,stderr,seed"
        );
        assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), vec![row]);
    }

    #[test]
    fn malformed_cell_names_its_column() {
        let text = "model,params,d,n,k,shots,failures,p_tot,stderr,seed\nphen,0.01,three,3,1,10,1,0.1,0.01,7\n";
        let err = read_sweep_csv(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("field `d`"), "{err}");
    }
}
