//! CSV output for plotting and CSV input of sampled initial data.
//!
//! Numbers are written as `{:.16e}` so that files round-trip bit for bit.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::explicit::ControlSignal;
use crate::wavecore::{GridFunction, InitialData, StateSnapshot};

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Generic numeric table.
pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::InvalidGrid(format!(
                "row of {} values for {} columns",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row.into_iter().map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

/// `t,value` at the sample points.
pub fn write_grid_csv(path: &Path, f: &GridFunction) -> Result<()> {
    write_table(path, &["t", "value"], f.points().zip(f.values()).map(|(t, v)| vec![t, *v]))
}

/// `t,u` over all windows.
pub fn write_control_csv(path: &Path, u: &ControlSignal) -> Result<()> {
    write_table(path, &["t", "u"], u.samples().map(|(t, v)| vec![t, v]))
}

/// `x,y,yx,yt`.
pub fn write_snapshot_csv(path: &Path, s: &StateSnapshot) -> Result<()> {
    let rows = (0..s.y.len()).map(|j| {
        vec![s.y.point(j), s.y.values()[j], s.yx.values()[j], s.yt.values()[j]]
    });
    write_table(path, &["x", "y", "yx", "yt"], rows)
}

/// Read sampled data with header `x,y0,dy0,y1`, one row per midpoint
/// `x_j = (j + ½)/m` in order. If every `dy0` cell is empty the derivative is
/// obtained by finite differences.
pub fn read_datum_csv(path: &Path) -> Result<InitialData> {
    let file = std::fs::File::open(path)?;
    read_datum(file)
}

pub fn read_datum(reader: impl Read) -> Result<InitialData> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidGrid(format!("datum file lacks a `{name}` column")))
    };
    let (cx, cy0, cdy0, cy1) = (col("x")?, col("y0")?, col("dy0")?, col("y1")?);

    let parse = |s: &str, what: &str, row: usize| -> Result<f64> {
        let v: f64 = s
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("row {row}: cannot parse {what} = {s:?}")))?;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("row {row}: {what}")));
        }
        Ok(v)
    };

    let (mut xs, mut y0, mut dy0, mut y1) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut missing_dy0 = 0usize;
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let get = |c: usize| rec.get(c).unwrap_or("");
        xs.push(parse(get(cx), "x", row)?);
        y0.push(parse(get(cy0), "y0", row)?);
        y1.push(parse(get(cy1), "y1", row)?);
        if get(cdy0).is_empty() {
            missing_dy0 += 1;
            dy0.push(0.0);
        } else {
            dy0.push(parse(get(cdy0), "dy0", row)?);
        }
    }
    let m = xs.len();
    if m == 0 {
        return Err(Error::InvalidGrid("datum file has no rows".into()));
    }
    let h = 1.0 / m as f64;
    for (j, x) in xs.iter().enumerate() {
        let expected = (j as f64 + 0.5) * h;
        if (x - expected).abs() > 1e-9 * h {
            return Err(Error::InvalidGrid(format!(
                "row {j}: x = {x} is not the midpoint {expected} of a uniform {m}-cell grid"
            )));
        }
    }
    let dy0 = match missing_dy0 {
        0 => Some(GridFunction::new(0.0, 1.0, dy0)?),
        n if n == m => None,
        _ => return Err(Error::InvalidGrid("dy0 must be given on every row or on none".into())),
    };
    InitialData::new(GridFunction::new(0.0, 1.0, y0)?, GridFunction::new(0.0, 1.0, y1)?, dy0)
}
