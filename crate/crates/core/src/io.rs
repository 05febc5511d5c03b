//! File formats: CSV for curves and nodal data, JSON for weights and reports.
//!
//! All floating-point output uses Rust's shortest-roundtrip formatting, so a
//! given configuration and seed always produce byte-identical files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::mesh::{GridFunction, Mesh1D};
use crate::weight::{Weight, WeightClassParams};
use crate::{Error, Result};

/// Writes a grid function as `x,u` rows.
pub fn write_grid_csv(path: &Path, u: &GridFunction) -> Result<()> {
    let mut out = String::from("x,u\n");
    for (i, x) in u.mesh().nodes().enumerate() {
        out.push_str(&format!("{},{}\n", x, u.values()[i]));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a grid function from `x,u` rows on a uniform grid of `(0,1)`.
pub fn read_grid_csv(path: &Path) -> Result<GridFunction> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
            continue;
        }
        let mut parts = line.split(',');
        let (x, u) = (parts.next(), parts.next());
        let u = u
            .ok_or_else(|| Error::Config(format!("line {}: expected `x,u`", lineno + 1)))?
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        let _ = x;
        values.push(u);
    }
    if values.len() < 3 {
        return Err(Error::Config("need at least 3 nodal values".into()));
    }
    let mesh = Mesh1D::new(values.len() - 1)?;
    GridFunction::new(mesh, values)
}

/// Generic `x,y` rows with a custom header.
pub fn write_pairs_csv(path: &Path, header: &str, pairs: &[(f64, f64)]) -> Result<()> {
    let mut out = String::with_capacity(16 * pairs.len());
    out.push_str(header);
    out.push('\n');
    for (x, y) in pairs {
        out.push_str(&format!("{},{}\n", x, y));
    }
    fs::write(path, out)?;
    Ok(())
}

/// On-disk weight format.
#[derive(Serialize, Deserialize)]
struct WeightFile {
    beta: f64,
    m0: f64,
    cells: Vec<f64>,
}

pub fn write_weight_json(path: &Path, m: &Weight) -> Result<()> {
    let file = WeightFile {
        beta: m.params().beta,
        m0: m.params().m0,
        cells: m.cell_values().to_vec(),
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn read_weight_json(path: &Path) -> Result<Weight> {
    let file: WeightFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let params = WeightClassParams::new(file.beta, file.m0)?;
    let mesh = Mesh1D::new(file.cells.len())?;
    Weight::from_cells(mesh, file.cells, params)
}

/// Writes the weight as `cell,value` rows.
pub fn write_weight_csv(path: &Path, m: &Weight) -> Result<()> {
    let mut out = String::from("cell,value\n");
    for (i, v) in m.cell_values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, v));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Pretty-printed JSON for any serializable payload.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}
