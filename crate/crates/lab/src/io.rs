//! Field files.
//!
//! * point cloud: CSV with header `x,y`, one point per row; the rectangle is
//!   not stored, callers pass it in.
//! * bit field: `n` lines of `m` characters in `{0,1}`, row `j = 0` first.
//! * weight field: headerless CSV of nonnegative integers, `n` rows of `m`.
//!
//! Floats are written in Rust's shortest round-trip form, so every file
//! reads back to an equal value.

use std::fs;
use std::io::Write;
use std::path::Path;

use gappath_core::{validate_cloud, BitField, ModelError, Point, PointCloud, TwTable, WeightField};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed {what}, line {line}: {msg}")]
    Malformed { what: &'static str, line: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn malformed(what: &'static str, line: usize, msg: impl Into<String>) -> IoError {
    IoError::Malformed {
        what,
        line,
        msg: msg.into(),
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    let io = |source| IoError::Write {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}

pub fn cloud_to_string(cloud: &PointCloud) -> String {
    let mut s = String::from("x,y\n");
    for p in cloud.points() {
        s.push_str(&format!("{},{}\n", p.x, p.y));
    }
    s
}

pub fn parse_cloud(text: &str, width: f64, height: f64) -> Result<PointCloud, IoError> {
    const WHAT: &str = "point cloud";
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| malformed(WHAT, 1, e.to_string()))?;
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(malformed(WHAT, 1, "expected header x,y"));
    }
    let mut pts = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| malformed(WHAT, line, e.to_string()))?;
        let num = |k: usize| -> Result<f64, IoError> {
            rec[k].parse().map_err(|_| malformed(WHAT, line, format!("not a number: {:?}", &rec[k])))
        };
        pts.push(Point::new(num(0)?, num(1)?));
    }
    Ok(validate_cloud(pts, width, height)?)
}

pub fn bitfield_to_string(field: &BitField) -> String {
    let mut s = String::with_capacity((field.m() + 1) * field.n());
    for j in 0..field.n() {
        s.extend(field.row(j).iter().map(|&b| if b != 0 { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn parse_bitfield(text: &str) -> Result<BitField, IoError> {
    const WHAT: &str = "bit field";
    let rows: Vec<&str> = text.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
    let Some(first) = rows.first() else {
        return Err(malformed(WHAT, 1, "empty field"));
    };
    let m = first.len();
    let mut bits = Vec::with_capacity(m * rows.len());
    for (j, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(malformed(WHAT, j + 1, format!("expected {m} characters, got {}", row.len())));
        }
        for c in row.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(malformed(WHAT, j + 1, format!("unexpected character {c:?}"))),
            }
        }
    }
    Ok(BitField::from_vec(m, rows.len(), bits)?)
}

pub fn weights_to_string(field: &WeightField) -> String {
    let mut s = String::new();
    for j in 0..field.n() {
        let row: Vec<String> = field.row(j).iter().map(u32::to_string).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn parse_weights(text: &str) -> Result<WeightField, IoError> {
    const WHAT: &str = "weight field";
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut m = None;
    let mut weights = Vec::new();
    let mut n = 0;
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| malformed(WHAT, row + 1, e.to_string()))?;
        if *m.get_or_insert(rec.len()) != rec.len() {
            return Err(malformed(WHAT, row + 1, "ragged row"));
        }
        for v in rec.iter() {
            weights.push(v.parse().map_err(|_| malformed(WHAT, row + 1, format!("not a count: {v:?}")))?);
        }
        n += 1;
    }
    let Some(m) = m else {
        return Err(malformed(WHAT, 1, "empty field"));
    };
    Ok(WeightField::from_vec(m, n, weights)?)
}

pub fn read_cloud(path: &Path, width: f64, height: f64) -> Result<PointCloud, IoError> {
    parse_cloud(&read_text(path)?, width, height)
}

pub fn read_bitfield(path: &Path) -> Result<BitField, IoError> {
    parse_bitfield(&read_text(path)?)
}

pub fn read_weights(path: &Path) -> Result<WeightField, IoError> {
    parse_weights(&read_text(path)?)
}

/// A Tracy-Widom CDF table: CSV rows `x,F(x)`, one optional header line.
pub fn read_tw_table(path: &Path) -> Result<TwTable, IoError> {
    TwTable::parse_csv(&read_text(path)?).map_err(|e| malformed("Tracy-Widom table", 0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gappath_core::{sample_bernoulli, sample_geometric, sample_poisson, Intensity, SeedSpec};

    #[test]
    fn cloud_round_trip() {
        let cloud = sample_poisson(3.5, 2.0, Intensity::new(4.0).unwrap(), SeedSpec::new(1, 0)).unwrap();
        let back = parse_cloud(&cloud_to_string(&cloud), 3.5, 2.0).unwrap();
        assert_eq!(back, cloud);
    }

    #[test]
    fn bitfield_round_trip_and_orientation() {
        let f = sample_bernoulli(7, 4, 0.4, SeedSpec::new(2, 0)).unwrap();
        assert_eq!(parse_bitfield(&bitfield_to_string(&f)).unwrap(), f);
        let g = parse_bitfield("100\n000\n").unwrap();
        assert_eq!((g.m(), g.n()), (3, 2));
        assert!(g.get(0, 0));
        assert!(!g.get(0, 1));
    }

    #[test]
    fn weights_round_trip() {
        let w = sample_geometric(5, 3, 0.5, SeedSpec::new(3, 0)).unwrap();
        assert_eq!(parse_weights(&weights_to_string(&w)).unwrap(), w);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse_bitfield("10\n1\n").is_err());
        assert!(parse_bitfield("1x\n").is_err());
        assert!(parse_bitfield("").is_err());
        assert!(parse_weights("1,2\n3\n").is_err());
        assert!(parse_weights("1,-2\n").is_err());
        assert!(parse_cloud("a,b\n1,1\n", 2.0, 2.0).is_err());
        assert!(parse_cloud("x,y\n3,1\n", 2.0, 2.0).is_err());
        assert!(parse_cloud("x,y\n1,1\n1,1.5\n", 2.0, 2.0).is_err());
    }
}
