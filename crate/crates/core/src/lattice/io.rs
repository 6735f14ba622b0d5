//! CSV field files (`index,x,re,im`) and their JSON sidecars.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelKind;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub index: usize,
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

impl FieldRow {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Parameters describing one saved field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub model: ModelKind,
    pub z: f64,
    pub m: f64,
    pub a: f64,
    pub t: f64,
    pub residual: f64,
    /// Generators applied to the seed, first applied first.
    #[serde(default)]
    pub generators: Vec<String>,
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("i/o: {e}"))
}

pub fn write_csv<W: Write>(w: W, points: impl IntoIterator<Item = (f64, Complex64)>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (index, (x, v)) in points.into_iter().enumerate() {
        out.serialize(FieldRow { index, x, re: v.re, im: v.im }).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<FieldRow>> {
    let mut rows: Vec<FieldRow> =
        csv::Reader::from_reader(r).deserialize().collect::<std::result::Result<_, _>>().map_err(io_err)?;
    rows.sort_by_key(|r| r.index);
    Ok(rows)
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn save_field(
    dir: &Path,
    stem: &str,
    points: impl IntoIterator<Item = (f64, Complex64)>,
    meta: &FieldMeta,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err)?;
    write_csv(std::fs::File::create(dir.join(format!("{stem}.csv"))).map_err(io_err)?, points)?;
    let json = serde_json::to_string_pretty(meta).map_err(io_err)?;
    std::fs::write(dir.join(format!("{stem}.json")), json).map_err(io_err)
}
