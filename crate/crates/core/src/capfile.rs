//! Cap files: one JSON object per line,
//! `{"dim": 4, "n": 3, "points": ["00001", "00010", "00100"]}`,
//! points normalized and listed in ascending index order.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::caps::{first_collinear_triple, Cap};
use crate::error::{Error, Result};
use crate::geometry::GeometryTables;
use crate::mask::Mask;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CapRecord {
    pub dim: usize,
    pub n: usize,
    pub points: Vec<String>,
}

impl CapRecord {
    pub fn from_cap(cap: &Cap) -> CapRecord {
        CapRecord { dim: cap.geometry().dim(), n: cap.size(), points: cap.point_strings() }
    }

    /// Validates the record; errors name the first collinear triple.
    pub fn to_cap(&self) -> Result<Cap> {
        let geom = GeometryTables::shared(self.dim)?;
        let mut members = Mask::EMPTY;
        for s in &self.points {
            let p = geom.parse_point(s)?;
            if members.contains(p) {
                return Err(Error::Domain(format!("point {s} repeated")));
            }
            members.insert(p);
        }
        if members.len() != self.n {
            return Err(Error::Domain(format!("n = {} but {} points listed", self.n, members.len())));
        }
        if let Some((a, b, c)) = first_collinear_triple(&geom, &members) {
            return Err(Error::Domain(format!(
                "collinear triple {} {} {}",
                geom.point_string(a),
                geom.point_string(b),
                geom.point_string(c)
            )));
        }
        Cap::from_mask(geom, members)
    }
}

/// One parsed line, or the reason it was rejected.
pub type Line = std::result::Result<Cap, Error>;

/// Reads every non-blank line. Malformed lines are returned as errors
/// prefixed with their 1-based line number so callers can report all of
/// them.
pub fn read_lines<R: BufRead>(reader: R) -> Result<Vec<(usize, Line)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<CapRecord>(&line)
            .map_err(|e| Error::Parse(e.to_string()))
            .and_then(|r| r.to_cap())
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)));
        out.push((i + 1, parsed));
    }
    Ok(out)
}

/// Reads a cap file, failing on the first bad line.
pub fn read_caps<R: BufRead>(reader: R) -> Result<Vec<Cap>> {
    read_lines(reader)?.into_iter().map(|(_, c)| c).collect()
}

pub fn write_caps<W: Write>(mut w: W, caps: &[Cap]) -> Result<()> {
    for c in caps {
        serde_json::to_writer(&mut w, &CapRecord::from_cap(c))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
