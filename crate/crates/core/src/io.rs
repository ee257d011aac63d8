//! File formats.
//!
//! State files are JSON objects
//! `{"dims": [dA, dB] | [d], "matrix": [[[re, im], ...], ...]}` with the
//! matrix row-major. Every real number this crate writes, in JSON or CSV,
//! uses 17 significant digits (`{:.16e}`), enough to round-trip any `f64`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::mub::MubSet;
use crate::qmath::{BipartiteState, ComplexMatrix, DensityMatrix};
use crate::scan::SweepRow;
use crate::{Error, Result};

/// `x` with 17 significant digits in scientific notation.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// An `f64` that serializes as a 17-significant-digit JSON number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number"));
        }
        let raw = RawValue::from_string(fmt_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn ser_sig17<S: Serializer>(x: &f64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    Sig17(*x).serialize(serializer)
}

pub fn ser_sig17_opt<S: Serializer>(x: &Option<f64>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    x.map(Sig17).serialize(serializer)
}

pub fn ser_sig17_vec<S: Serializer>(xs: &[f64], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(xs.iter().map(|&x| Sig17(x)))
}

/// Contents of a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Single(DensityMatrix),
    Bipartite(BipartiteState),
}

impl LoadedState {
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Self::Single(r) => vec![r.dim()],
            Self::Bipartite(s) => vec![s.dim_a(), s.dim_b()],
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            Self::Single(r) => r.matrix(),
            Self::Bipartite(s) => s.matrix(),
        }
    }
}

#[derive(Deserialize)]
struct StateFileIn {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct StateFileOut {
    dims: Vec<usize>,
    matrix: Vec<Vec<[Sig17; 2]>>,
}

pub fn parse_state(text: &str) -> Result<LoadedState> {
    let file: StateFileIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = file.matrix.len();
    let expected: usize = file.dims.iter().product();
    if file.dims.is_empty() || file.dims.len() > 2 {
        return Err(Error::Parse(format!("dims must have one or two entries, got {:?}", file.dims)));
    }
    if expected != n {
        return Err(Error::Parse(format!("dims {:?} do not match {n} matrix rows", file.dims)));
    }
    if let Some(row) = file.matrix.iter().find(|r| r.len() != n) {
        return Err(Error::Parse(format!("row of length {} in a {n}x{n} matrix", row.len())));
    }
    let data = file
        .matrix
        .iter()
        .flatten()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let mat = ComplexMatrix::from_vec(n, n, data)?;
    Ok(match file.dims[..] {
        [_] => LoadedState::Single(DensityMatrix::new(mat)?),
        [a, b] => LoadedState::Bipartite(BipartiteState::new(a, b, mat)?),
        _ => unreachable!(),
    })
}

pub fn read_state(mut reader: impl Read) -> Result<LoadedState> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::Parse(e.to_string()))?;
    parse_state(&text)
}

pub fn state_to_json(dims: &[usize], mat: &ComplexMatrix) -> Result<String> {
    let out = StateFileOut {
        dims: dims.to_vec(),
        matrix: (0..mat.rows())
            .map(|r| {
                (0..mat.cols())
                    .map(|c| [Sig17(mat[(r, c)].re), Sig17(mat[(r, c)].im)])
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&out).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_state(mut writer: impl Write, dims: &[usize], mat: &ComplexMatrix) -> Result<()> {
    let json = state_to_json(dims, mat)?;
    writeln!(writer, "{json}").map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize)]
struct MubJson {
    d: usize,
    bases: Vec<Vec<Vec<[Sig17; 2]>>>,
}

/// `{"d": d, "bases": [[[[re, im], ...d amplitudes], ...d vectors], ...d+1 bases]}`.
pub fn mubs_to_json(set: &MubSet) -> Result<String> {
    let out = MubJson {
        d: set.dim(),
        bases: set
            .bases()
            .iter()
            .map(|b| {
                b.vectors()
                    .iter()
                    .map(|v| v.iter().map(|z| [Sig17(z.re), Sig17(z.im)]).collect())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&out).map_err(|e| Error::Parse(e.to_string()))
}

pub const SWEEP_HEADER: [&str; 8] = ["x", "c_na", "c_na_tilde", "bound", "e_t", "e_m", "e_f", "log_inv_c"];

fn opt_field(x: Option<f64>) -> String {
    x.map(fmt_sig17).unwrap_or_default()
}

/// Writes sweep rows as CSV with [`SWEEP_HEADER`] and LF line endings.
pub fn write_sweep_csv(writer: impl Write, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(SWEEP_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            fmt_sig17(r.x),
            fmt_sig17(r.c_na),
            fmt_sig17(r.c_na_tilde),
            fmt_sig17(r.bound),
            opt_field(r.e_t),
            opt_field(r.e_m),
            opt_field(r.e_f),
            opt_field(r.log_inv_c),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_sweep_csv(reader: impl Read) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != SWEEP_HEADER.len() {
                return Err(Error::Parse(format!("row with {} fields", rec.len())));
            }
            Ok(SweepRow {
                x: num(&rec[0])?,
                c_na: num(&rec[1])?,
                c_na_tilde: num(&rec[2])?,
                bound: num(&rec[3])?,
                e_t: opt(&rec[4])?,
                e_m: opt(&rec[5])?,
                e_f: opt(&rec[6])?,
                log_inv_c: opt(&rec[7])?,
            })
        })
        .collect()
}
