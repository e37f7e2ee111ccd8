//! JSON and CSV serialization for grid data, dilatation fields, welding
//! bundles and operator sections, plus an atomic file writer.
//!
//! Floating-point values survive a JSON or CSV round trip bit-exactly:
//! both paths format with the shortest representation that parses back to
//! the same bits.

use crate::cauchy::OperatorMatrix;
use crate::error::{Error, Result};
use crate::grid::{make_grid, Domain, GridFunction};
use crate::quasiconformal::BeltramiField;
use crate::welding::WeldingResult;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

/// Write bytes atomically: stage in a sibling temp file, then rename over
/// the destination.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let stem = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("not a file path: {}", path.display())))?;
    let mut tmp = std::ffi::OsString::from(".");
    tmp.push(stem);
    tmp.push(format!(".tmp.{}", std::process::id()));
    let tmp_path = match dir {
        Some(d) => d.join(&tmp),
        None => std::path::PathBuf::from(&tmp),
    };
    fs::write(&tmp_path, bytes)?;
    fs::rename(&tmp_path, path)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct GridFunctionRecord {
    domain: Domain,
    n: usize,
    /// nodes sit at half-offset angles `2 pi (j + 1/2) / n`
    offset: bool,
    values: Vec<[f64; 2]>,
}

pub fn grid_function_to_json(f: &GridFunction) -> Result<String> {
    let record = GridFunctionRecord {
        domain: f.domain(),
        n: f.n(),
        offset: true,
        values: f.values().iter().map(|z| [z.re, z.im]).collect(),
    };
    Ok(serde_json::to_string_pretty(&record)?)
}

pub fn grid_function_from_json(text: &str) -> Result<GridFunction> {
    let record: GridFunctionRecord = serde_json::from_str(text)?;
    if !record.offset {
        return Err(Error::Malformed("only half-offset grids are supported".into()));
    }
    if record.values.len() != record.n {
        return Err(Error::Malformed(format!(
            "declared n = {} but {} values present",
            record.n,
            record.values.len()
        )));
    }
    let grid = make_grid(record.n)?;
    GridFunction::new(
        grid,
        record.domain,
        record.values.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
    )
}

/// CSV rows `node,re,im`; the node column holds the angle (circle) or the
/// real coordinate (line).
pub fn grid_function_to_csv(f: &GridFunction) -> String {
    let mut out = String::from("node,re,im\n");
    let grid = f.grid();
    for (j, z) in f.values().iter().enumerate() {
        let node = match f.domain() {
            Domain::Circle => grid.theta(j),
            Domain::Line => grid.line_node(j),
        };
        out.push_str(&format!("{},{},{}\n", node, z.re, z.im));
    }
    out
}

pub fn grid_function_from_csv(text: &str, domain: Domain) -> Result<GridFunction> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line.trim() != "node,re,im" {
                return Err(Error::Malformed(format!("unexpected CSV header: {line}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Malformed(format!("row {idx}: expected 3 fields")));
        }
        let re: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("row {idx}: bad real part")))?;
        let im: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("row {idx}: bad imaginary part")))?;
        values.push(Complex64::new(re, im));
    }
    let grid = make_grid(values.len())?;
    GridFunction::new(grid, domain, values)
}

#[derive(Serialize, Deserialize)]
struct BeltramiRecord {
    x: Vec<f64>,
    y: Vec<f64>,
    /// row-major over (y, x), `[re, im]` pairs
    mu: Vec<[f64; 2]>,
}

pub fn beltrami_to_json(field: &BeltramiField) -> Result<String> {
    let record = BeltramiRecord {
        x: field.x().to_vec(),
        y: field.y().to_vec(),
        mu: field.values().iter().map(|z| [z.re, z.im]).collect(),
    };
    Ok(serde_json::to_string(&record)?)
}

pub fn beltrami_from_json(text: &str) -> Result<BeltramiField> {
    let record: BeltramiRecord = serde_json::from_str(text)?;
    BeltramiField::new(
        record.x,
        record.y,
        record.mu.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
    )
}

#[derive(Serialize)]
struct WeldingRecord {
    n: usize,
    residual: f64,
    h: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    log_h_deriv: Vec<[f64; 2]>,
}

/// One-way JSON bundle of a welding computation (the maps are emitted as
/// node samples).
pub fn welding_to_json(w: &WeldingResult) -> Result<String> {
    let record = WeldingRecord {
        n: w.h.grid().n(),
        residual: w.residual,
        h: w.h.values().to_vec(),
        f1: w.f1.values().to_vec(),
        f2: w.f2.values().to_vec(),
        log_h_deriv: w.log_h_deriv.values().iter().map(|z| [z.re, z.im]).collect(),
    };
    Ok(serde_json::to_string(&record)?)
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    m: usize,
    /// row-major, `[re, im]` pairs
    entries: Vec<[f64; 2]>,
}

pub fn operator_matrix_to_json(a: &OperatorMatrix) -> Result<String> {
    let record = MatrixRecord {
        m: a.m,
        entries: a.entries.iter().map(|z| [z.re, z.im]).collect(),
    };
    Ok(serde_json::to_string(&record)?)
}

pub fn operator_matrix_from_json(text: &str) -> Result<OperatorMatrix> {
    let record: MatrixRecord = serde_json::from_str(text)?;
    let dim = 2 * record.m + 1;
    if record.entries.len() != dim * dim {
        return Err(Error::Malformed(format!(
            "matrix of section size {} needs {} entries, found {}",
            record.m,
            dim * dim,
            record.entries.len()
        )));
    }
    Ok(OperatorMatrix {
        m: record.m,
        entries: record.entries.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn json_round_trip_is_bit_exact() {
        let grid = make_grid(64).unwrap();
        let f = GridFunction::from_circle_fn(grid, |t| {
            Complex64::new(t.cos() / 3.0, (2.0 * t).sin() * 1e-7)
        });
        let back = grid_function_from_json(&grid_function_to_json(&f).unwrap()).unwrap();
        assert_eq!(back.domain(), f.domain());
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let grid = make_grid(32).unwrap();
        let f = GridFunction::from_line_fn(grid, |x| Complex64::new(1.0 / (1.0 + x * x), 0.1 * x.atan()));
        let back = grid_function_from_csv(&grid_function_to_csv(&f), Domain::Line).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn malformed_inputs_reported() {
        assert!(grid_function_from_json("{\"domain\":\"circle\",\"n\":4,\"offset\":true,\"values\":[[0,0]]}").is_err());
        assert!(grid_function_from_csv("wrong,header,row\n1,2,3\n", Domain::Circle).is_err());
        assert!(grid_function_from_csv("node,re,im\n1,2\n", Domain::Circle).is_err());
    }

    #[test]
    fn beltrami_round_trip() {
        let x: Vec<f64> = (0..8).map(|i| i as f64 * 0.25).collect();
        let y: Vec<f64> = (1..5).map(|i| i as f64 * 0.1).collect();
        let field = BeltramiField::from_fn(x.clone(), y.clone(), |x, y| {
            Complex64::new(0.1 * (x - y).sin(), 0.05 * x.cos())
        })
        .unwrap();
        let back = beltrami_from_json(&beltrami_to_json(&field).unwrap()).unwrap();
        for (a, b) in back.values().iter().zip(field.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
        }
    }

    #[test]
    fn matrix_round_trip_and_atomic_write() {
        let a = OperatorMatrix {
            m: 1,
            entries: (0..9).map(|i| Complex64::new(i as f64 / 7.0, -(i as f64) / 11.0)).collect(),
        };
        let text = operator_matrix_to_json(&a).unwrap();
        let back = operator_matrix_from_json(&text).unwrap();
        assert_eq!(back.entries, a.entries);

        let dir = std::env::temp_dir().join(format!("wpcurves-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("matrix.json");
        atomic_write(&path, text.as_bytes()).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
