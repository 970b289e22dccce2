//! Point-cloud files.
//!
//! Two encodings are accepted: CSV with the header `x,y,z` and one point per row, or a
//! JSON array of `[x, y, z]` arrays. Writers print 16 significant digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Point3, PointCloud};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    Csv,
    Json,
}

impl CloudFormat {
    /// `.json` files are JSON; everything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => CloudFormat::Json,
            _ => CloudFormat::Csv,
        }
    }

    fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('[') {
            CloudFormat::Json
        } else {
            CloudFormat::Csv
        }
    }
}

fn parse_coord<T: Real>(field: &str, row: usize, axis: &str) -> Result<T> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        row,
        message: format!("cannot parse {axis} coordinate {field:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            row,
            message: format!("non-finite {axis} coordinate {field:?}"),
        });
    }
    T::from_f64(v).ok_or_else(|| Error::Parse {
        row,
        message: format!("{axis} coordinate {field:?} out of range"),
    })
}

/// Parses CSV text. Rows are numbered from 1 for the first data row.
pub fn parse_csv<T: Real>(text: &str) -> Result<PointCloud<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        row: 0,
        message: e.to_string(),
    })?;
    let names: Vec<&str> = header.iter().collect();
    if names != ["x", "y", "z"] {
        return Err(Error::Parse {
            row: 0,
            message: format!("expected header x,y,z, found {}", names.join(",")),
        });
    }
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(Error::Parse {
                row,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        points.push(Point3::new(
            parse_coord(&record[0], row, "x")?,
            parse_coord(&record[1], row, "y")?,
            parse_coord(&record[2], row, "z")?,
        ));
    }
    PointCloud::new(points)
}

/// Parses a JSON array of 3-element arrays. Rows are numbered from 1.
pub fn parse_json<T: Real>(text: &str) -> Result<PointCloud<T>> {
    let rows: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| Error::Parse {
        row: 0,
        message: e.to_string(),
    })?;
    let mut points = Vec::with_capacity(rows.len());
    for (i, value) in rows.iter().enumerate() {
        let row = i + 1;
        let coords = value.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::Parse {
            row,
            message: format!("expected [x, y, z], found {value}"),
        })?;
        let mut xyz = [T::zero(); 3];
        for (slot, (c, axis)) in xyz.iter_mut().zip(coords.iter().zip(["x", "y", "z"])) {
            let v = c.as_f64().ok_or_else(|| Error::Parse {
                row,
                message: format!("{axis} coordinate {c} is not a number"),
            })?;
            *slot = parse_coord(&v.to_string(), row, axis)?;
        }
        points.push(Point3::from_array(xyz));
    }
    PointCloud::new(points)
}

pub fn parse_cloud<T: Real>(text: &str, format: CloudFormat) -> Result<PointCloud<T>> {
    match format {
        CloudFormat::Csv => parse_csv(text),
        CloudFormat::Json => parse_json(text),
    }
}

/// Reads a cloud file; the format follows the extension, or the content for unknown ones.
pub fn read_cloud<T: Real>(path: &Path) -> Result<PointCloud<T>> {
    let text = fs::read_to_string(path)?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => CloudFormat::Json,
        Some(ext) if ext.eq_ignore_ascii_case("csv") => CloudFormat::Csv,
        _ => CloudFormat::sniff(&text),
    };
    parse_cloud(&text, format)
}

pub fn write_csv<T: Real, W: Write>(cloud: &PointCloud<T>, mut out: W) -> Result<()> {
    writeln!(out, "x,y,z")?;
    for p in cloud {
        writeln!(out, "{:.15e},{:.15e},{:.15e}", p.x, p.y, p.z)?;
    }
    Ok(())
}

pub fn write_json<T: Real, W: Write>(cloud: &PointCloud<T>, mut out: W) -> Result<()> {
    writeln!(out, "[")?;
    let n = cloud.len();
    for (i, p) in cloud.iter().enumerate() {
        let sep = if i + 1 < n { "," } else { "" };
        writeln!(out, "  [{:.15e}, {:.15e}, {:.15e}]{sep}", p.x, p.y, p.z)?;
    }
    writeln!(out, "]")?;
    Ok(())
}

pub fn write_cloud<T: Real>(cloud: &PointCloud<T>, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    match CloudFormat::from_path(path) {
        CloudFormat::Csv => write_csv(cloud, &mut buf)?,
        CloudFormat::Json => write_json(cloud, &mut buf)?,
    }
    fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_basic() {
        let c: PointCloud<f64> = parse_csv("x,y,z\n1,2,3\n-0.5, 1e-3 ,4\n").unwrap();
        assert_eq!(c.points(), &[Point3::new(1., 2., 3.), Point3::new(-0.5, 1e-3, 4.)]);
    }

    #[test]
    fn csv_errors_name_the_row() {
        let err = parse_csv::<f64>("x,y,z\n1,2,3\n1,abc,3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }), "{err}");
        assert!(err.to_string().contains("row 2"));

        let err = parse_csv::<f64>("x,y,z\n1,2,3\n4,5,6\n7,8\n").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }), "{err}");

        let err = parse_csv::<f64>("a,b,c\n1,2,3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 0, .. }));

        let err = parse_csv::<f64>("x,y,z\nnan,0,0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));
    }

    #[test]
    fn json_basic_and_errors() {
        let c: PointCloud<f64> = parse_json("[[1, 2, 3], [4.5, -1, 0]]").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.points()[1], Point3::new(4.5, -1., 0.));
        let err = parse_json::<f64>("[[1,2,3],[1,2]]").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }));
        let err = parse_json::<f64>("[[1,2,3],[1,\"a\",2]]").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }));
    }

    #[test]
    fn writer_emits_enough_digits() {
        let c = PointCloud::new(vec![Point3::new(1.5f64, 0.1, -7.0)]).unwrap();
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        for field in row.split(',') {
            let mantissa = field.split('e').next().unwrap();
            let digits = mantissa.chars().filter(|ch| ch.is_ascii_digit()).count();
            assert!(digits >= 15, "{field}");
        }
    }

    fn coord() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6..1e6f64, -1.0..1.0f64]
    }

    proptest! {
        #[test]
        fn written_clouds_parse_back(pts in prop::collection::vec((coord(), coord(), coord()), 0..30), json: bool) {
            let cloud = PointCloud::new(pts.iter().map(|&(x, y, z)| Point3::new(x, y, z)).collect()).unwrap();
            let mut buf = Vec::new();
            if json { write_json(&cloud, &mut buf).unwrap() } else { write_csv(&cloud, &mut buf).unwrap() }
            let text = String::from_utf8(buf).unwrap();
            let back: PointCloud<f64> = parse_cloud(&text, if json { CloudFormat::Json } else { CloudFormat::Csv }).unwrap();
            prop_assert_eq!(back.len(), cloud.len());
            for (a, b) in back.iter().zip(&cloud) {
                for k in 0..3 {
                    prop_assert!((a[k] - b[k]).abs() <= 1e-15 * b[k].abs().max(1e-300));
                }
            }
        }
    }
}
