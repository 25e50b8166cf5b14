//! CSV and JSON writers. Every float is printed with 17 significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qfsieve_core::dynamics::Trajectory;
use qfsieve_core::sieve::LandscapePoint;
use qfsieve_core::Mat2;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use crate::error::Result;

pub const VERSION: &str = concat!("qfsieve ", env!("CARGO_PKG_VERSION"));

pub const TRAJECTORY_HEADER: &str = "t,x1,x2,S11,S12,S22,area,lin_entropy,entropy_rate";
pub const LANDSCAPE_HEADER: &str = "aleph,theta,rate";
pub const WIGNER_HEADER: &str = "x1,x2,f";

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` with full-precision floats; non-finite floats become `null`.
pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser).expect("serializing a Value cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Adds the version tag and prints the document, optionally also to a file.
pub fn emit_json(mut doc: Value, path: Option<&Path>) -> Result<()> {
    if let Value::Object(map) = &mut doc {
        map.insert("version".into(), json!(VERSION));
    }
    let text = to_json_string(&doc) + "\n";
    if let Some(path) = path {
        std::fs::write(path, &text)?;
    }
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

pub fn mat_json(m: &Mat2) -> Value {
    json!([m.get(0, 0), m.get(0, 1), m.get(1, 1)])
}

fn write_rows<I, R>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.as_ref().iter().map(|&x| fmt_f64(x)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let rows = traj.samples.iter().map(|s| {
        let m = &s.state.sigma;
        [
            s.t,
            s.state.mean[0],
            s.state.mean[1],
            m.get(0, 0),
            m.get(0, 1),
            m.get(1, 1),
            s.entropy.area,
            s.entropy.lin_entropy,
            s.entropy.entropy_rate,
        ]
    });
    write_rows(path, TRAJECTORY_HEADER, rows)
}

pub fn write_landscape(path: &Path, points: &[LandscapePoint]) -> Result<()> {
    write_rows(path, LANDSCAPE_HEADER, points.iter().map(|p| [p.aleph, p.theta, p.rate]))
}

pub fn write_wigner(path: &Path, table: &[(f64, f64, f64)]) -> Result<()> {
    write_rows(path, WIGNER_HEADER, table.iter().map(|&(x1, x2, f)| [x1, x2, f]))
}
