//! Text snapshots of node fields.
//!
//! Layout: a header `# nx ny x_lo x_hi y_lo y_hi t`, then `ny` lines of `nx`
//! comma-separated values (row-major, `i` fastest).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Node values on a rectangular sample grid, with the time they were taken.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub nx: usize,
    pub ny: usize,
    pub bounds: [f64; 4],
    pub time: f64,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn from_field(field: &super::ScalarField, time: f64) -> Self {
        let d = field.grid.domain;
        Self {
            nx: field.grid.nx,
            ny: field.grid.ny,
            bounds: [d.x_lo, d.x_hi, d.y_lo, d.y_hi],
            time,
            values: field.values.clone(),
        }
    }
}

pub fn write_snapshot<W: Write>(out: &mut W, snap: &Snapshot) -> Result<()> {
    let [x_lo, x_hi, y_lo, y_hi] = snap.bounds;
    writeln!(
        out,
        "# {} {} {:e} {:e} {:e} {:e} {:e}",
        snap.nx, snap.ny, x_lo, x_hi, y_lo, y_hi, snap.time
    )?;
    for row in snap.values.chunks(snap.nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(input: R) -> Result<Snapshot> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty snapshot".into()))??;
    let fields: Vec<&str> = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Format("missing '#' header".into()))?
        .split_whitespace()
        .collect();
    if fields.len() != 7 {
        return Err(Error::Format(format!("header has {} fields, want 7", fields.len())));
    }
    let bad = |s: &str| Error::Format(format!("bad header value '{s}'"));
    let nx: usize = fields[0].parse().map_err(|_| bad(fields[0]))?;
    let ny: usize = fields[1].parse().map_err(|_| bad(fields[1]))?;
    let mut nums = [0.0; 5];
    for (slot, s) in nums.iter_mut().zip(&fields[2..]) {
        *slot = s.parse().map_err(|_| bad(s))?;
    }
    let mut values = Vec::with_capacity(nx * ny);
    for line in lines {
        let line = line?;
        for tok in line.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            values.push(
                tok.parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad value '{tok}'")))?,
            );
        }
    }
    if values.len() != nx * ny {
        return Err(Error::Format(format!("{} values, header says {}", values.len(), nx * ny)));
    }
    Ok(Snapshot {
        nx,
        ny,
        bounds: [nums[0], nums[1], nums[2], nums[3]],
        time: nums[4],
        values,
    })
}
