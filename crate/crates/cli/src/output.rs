//! Number formatting and file writers.
//!
//! Every floating-point number, in JSON and CSV alike, is written as
//! `d.dddddddddddddddde±x`: seventeen significant digits in scientific
//! notation. Seventeen digits identify an `f64` uniquely, so parsing the text
//! returns the exact bits that were written. Non-finite values become `null`
//! in JSON and empty fields in CSV.

use std::io::{self, Write};
use std::path::Path;

use dbr::wco::{HsResult, NormEstimate, SweepTable};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// Pretty JSON with [`fmt17`] numbers.
struct Json17<'a>(PrettyFormatter<'a>);

impl Formatter for Json17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt17(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Json17(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| CliError::Io(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
}

fn io_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// One row per `(level, angle)`: `k, r, theta_index, integral`.
pub fn write_sweep_csv(path: &Path, table: &SweepTable<f64>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(io_err(path))?;
    w.write_record(["k", "r", "theta_index", "integral"]).map_err(io_err(path))?;
    for row in &table.rows {
        for (j, v) in row.values.iter().enumerate() {
            w.write_record([row.k.to_string(), fmt17(row.r), j.to_string(), fmt17(*v)]).map_err(io_err(path))?;
        }
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// `method, parameter, value`: the integral at each kernel floor, then the
/// partial sums `S_n` of the series.
pub fn write_hs_csv(path: &Path, hs: &HsResult<f64>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(io_err(path))?;
    w.write_record(["method", "parameter", "value"]).map_err(io_err(path))?;
    for (floor, v) in &hs.integral_evidence {
        w.write_record(["integral".into(), fmt17(*floor), fmt17(*v)]).map_err(io_err(path))?;
    }
    for (n, v) in hs.series.iter().enumerate() {
        w.write_record(["series".into(), n.to_string(), fmt17(*v)]).map_err(io_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// `n, sigma_max`.
pub fn write_matrix_csv(path: &Path, est: &NormEstimate<f64>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(io_err(path))?;
    w.write_record(["n", "sigma_max"]).map_err(io_err(path))?;
    for (n, s) in est.sizes.iter().zip(&est.sigma_max) {
        w.write_record([n.to_string(), fmt17(*s)]).map_err(io_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Write with a header row only, for evidence that was not computed.
pub fn write_empty_csv(path: &Path, header: &[&str]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(io_err(path))?;
    w.write_record(header).map_err(io_err(path))?;
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
