//! CSV interchange formats (RFC-4180 subset, no quoting): energy tables and
//! configurations, lossless at 17 significant digits.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{Configuration, UnitVector, Vec3};
use crate::kernel::{convert_energy, ConvertDirection};
use crate::table::EnergyTable;

/// Formats an f64 with 17 significant digits, enough to round-trip exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

const TABLE_HEADER: &str = "N,s,energy,provenance";
const TABLE_HEADER_CONVENTIONAL: &str = "N,s,conventional_energy,provenance";

/// Writes an energy table as `N,s,energy,provenance` rows.
pub fn write_energy_table(table: &EnergyTable, path: &Path) -> Result<()> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for (&n, row) in table.rows() {
        out.push_str(&format!(
            "{n},{},{},{}\n",
            format_f64(table.s()),
            format_f64(row.v),
            row.provenance
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads an energy table. The header selects the column semantics: a
/// `conventional_energy` column is converted to standardized averages on
/// load. A missing provenance field defaults to "external". A
/// non-contiguous N-range is accepted (derivative operations will refuse it
/// later).
pub fn read_energy_table(path: &Path) -> Result<EnergyTable> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty table file".into()))?
        .trim();
    let conventional = match header {
        TABLE_HEADER => false,
        TABLE_HEADER_CONVENTIONAL => true,
        other => {
            return Err(Error::Format(format!(
                "bad header {other:?}: expected {TABLE_HEADER:?} or {TABLE_HEADER_CONVENTIONAL:?}"
            )))
        }
    };
    let mut table: Option<EnergyTable> = None;
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(Error::Format(format!("line {}: need N,s,energy", lineno + 2)));
        }
        let n: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad N", lineno + 2)))?;
        let s: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad s", lineno + 2)))?;
        let raw: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad energy", lineno + 2)))?;
        let provenance = if fields.len() >= 4 && !fields[3].trim().is_empty() {
            fields[3].trim().to_string()
        } else {
            "external".to_string()
        };
        let table = table.get_or_insert_with(|| EnergyTable::new(s));
        if table.s() != s {
            return Err(Error::Format(format!(
                "line {}: mixed exponents {} and {}",
                lineno + 2,
                table.s(),
                s
            )));
        }
        let v = if conventional {
            convert_energy(s, n, raw, ConvertDirection::ConventionalToStandardized)
        } else {
            raw
        };
        table.insert(n, v, &provenance);
    }
    table.ok_or_else(|| Error::Format("table file has no rows".into()))
}

/// Writes a configuration: first line N, then N lines `x,y,z`.
pub fn write_configuration(c: &Configuration, path: &Path) -> Result<()> {
    let mut out = format!("{}\n", c.len());
    for p in c.points() {
        let v = p.as_vec();
        out.push_str(&format!(
            "{},{},{}\n",
            format_f64(v.x),
            format_f64(v.y),
            format_f64(v.z)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a configuration. Points off the sphere by at most 1e-8 in norm are
/// renormalized; larger deviations are format errors.
pub fn read_configuration(path: &Path) -> Result<Configuration> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Format("empty configuration file".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::Format("first line must be the point count".into()))?;
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Format(format!("expected {n} points, found {k}")))?;
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!("point line {}: need x,y,z", k + 2)));
        }
        let coord = |i: usize| -> Result<f64> {
            fields[i]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("point line {}: bad coordinate", k + 2)))
        };
        let v = Vec3::new(coord(0)?, coord(1)?, coord(2)?);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::Format(format!(
                "point line {}: norm {norm} deviates from 1 by more than 1e-8",
                k + 2
            )));
        }
        pts.push(UnitVector::normalize(v)?);
    }
    Configuration::new(pts)
}
