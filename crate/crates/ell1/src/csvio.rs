//! CSV formats for streams and regret traces. Reals are written as
//! `{:.16e}`, i.e. 17 significant digits, which round-trips every `f64`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ell1_core::{RegretTrace, Round};

use crate::error::{HarnessError, Result};

pub const TRACE_HEADER: [&str; 8] = ["t", "y", "yhat", "loss", "cumloss", "comploss", "regret", "bound"];

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

/// Header `t,y,x_1..x_d`, one row per round, `t` starting at 1.
pub fn write_stream<W: Write>(out: W, rounds: &[Round]) -> Result<()> {
    let d = rounds.first().map_or(0, Round::dim);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "y".to_string()];
    header.extend((1..=d).map(|j| format!("x_{j}")));
    w.write_record(&header)?;
    for (t, r) in rounds.iter().enumerate() {
        let mut row = vec![(t + 1).to_string(), real(r.y)];
        row.extend(r.x.iter().map(|&v| real(v)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| HarnessError::io("<stream>", e))?;
    Ok(())
}

pub fn read_stream<R: Read>(input: R, origin: &Path) -> Result<Vec<Round>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let parse_err = |line: usize, message: String| HarnessError::Parse { path: origin.to_path_buf(), line, message };
    if header.len() < 3 || &header[0] != "t" || &header[1] != "y" {
        return Err(parse_err(1, "expected header t,y,x_1..x_d".into()));
    }
    for (j, name) in header.iter().skip(2).enumerate() {
        if name != format!("x_{}", j + 1) {
            return Err(parse_err(1, format!("unexpected column `{name}`")));
        }
    }
    let mut rounds = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let values = record
            .iter()
            .skip(1)
            .map(|f| f.trim().parse::<f64>().map_err(|e| parse_err(line, format!("`{f}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if values.len() + 1 != header.len() {
            return Err(parse_err(line, format!("expected {} fields", header.len())));
        }
        rounds.push(Round::new(values[1..].to_vec(), values[0])?);
    }
    if rounds.is_empty() {
        return Err(ell1_core::Error::EmptyStream.into());
    }
    Ok(rounds)
}

pub fn read_stream_file(path: &Path) -> Result<Vec<Round>> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_stream(file, path)
}

/// One row per round. `comploss` and `bound` repeat the trace-level values
/// and are empty when unset; `regret` is `cumloss - comploss`.
pub fn write_trace<W: Write>(out: W, trace: &RegretTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    let comp = trace.comparator_loss();
    let bound = optional(trace.bound());
    for t in 0..trace.len() {
        let cum = trace.cumulative()[t];
        w.write_record([
            (t + 1).to_string(),
            real(trace.observations()[t]),
            real(trace.predictions()[t]),
            real(trace.losses()[t]),
            real(cum),
            optional(comp),
            optional(comp.map(|c| cum - c)),
            bound.clone(),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::io("<trace>", e))?;
    Ok(())
}

pub fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| HarnessError::io(path, e))
}
