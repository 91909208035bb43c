//! Matrix file I/O and scalar parsing.
//!
//! JSON schema: `{"dim": n, "entries": [[re, im], ...]}` row-major.
//! CSV: one row per matrix row, entries as `a+bi` / `a-bi` / bare reals,
//! '.' decimal separator, no locale. Writers emit shortest round-trip
//! decimals, so write-then-parse is bit-exact.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qrange_core::{CMat, Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

/// Parse one complex scalar: `1`, `-2.5`, `3i`, `-i`, `1+2i`, `1.5e-3-2e-4i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    if !s.ends_with('i') && !s.ends_with('I') {
        let re: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad real literal '{s}'")))?;
        return Ok(Complex64::new(re, 0.0));
    }
    let body = &s[..s.len() - 1];
    // Split at the last +/- that starts the imaginary part (not a leading
    // sign, not an exponent sign).
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re: f64 = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad complex literal '{s}'")))?
    };
    let im: f64 = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse()
            .map_err(|_| Error::Parse(format!("bad complex literal '{s}'")))?,
    };
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatrixFormat {
    Json,
    Csv,
}

fn detect_format(path: &Path, forced: Option<MatrixFormat>) -> Result<MatrixFormat> {
    if let Some(f) = forced {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Ok(MatrixFormat::Json),
        Some("csv") => Ok(MatrixFormat::Csv),
        other => Err(Error::Parse(format!(
            "cannot infer matrix format from extension {other:?}; pass --matrix-format"
        ))),
    }
}

pub fn read_matrix(path: &Path, forced: Option<MatrixFormat>) -> Result<CMat> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    match detect_format(path, forced)? {
        MatrixFormat::Json => parse_matrix_json(&text),
        MatrixFormat::Csv => parse_matrix_csv(&text),
    }
}

pub fn parse_matrix_json(text: &str) -> Result<CMat> {
    let m: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad matrix JSON: {e}")))?;
    let entries = m
        .entries
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    CMat::new(m.dim, entries)
}

pub fn parse_matrix_csv(text: &str) -> Result<CMat> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Result<Vec<Complex64>> = line.split(',').map(parse_complex).collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix file".into()));
    }
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!(
            "matrix is not square: {dim} rows but row lengths differ"
        )));
    }
    CMat::new(dim, rows.concat())
}

pub fn matrix_to_json(m: &CMat) -> String {
    let doc = MatrixJson {
        dim: m.dim(),
        entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("matrix serializes")
}

pub fn matrix_to_csv(m: &CMat) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse a comma-separated list of real q values in [0, 1].
pub fn parse_q_grid(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let q: f64 = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad q value '{part}'")))?;
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Config(format!("q = {q} outside [0, 1]")));
        }
        out.push(q);
    }
    if out.is_empty() {
        return Err(Error::Config("empty q grid".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_round_trip() {
        for (s, re, im) in [
            ("1", 1.0, 0.0),
            ("-2.5", -2.5, 0.0),
            ("3i", 0.0, 3.0),
            ("-i", 0.0, -1.0),
            ("i", 0.0, 1.0),
            ("1+2i", 1.0, 2.0),
            ("1-2i", 1.0, -2.0),
            ("1.5e-3-2e-4i", 1.5e-3, -2e-4),
            ("-0.25+0.75i", -0.25, 0.75),
        ] {
            let z = parse_complex(s).unwrap();
            assert_eq!((z.re, z.im), (re, im), "{s}");
        }
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let m = CMat::from_rows(&[
            vec![
                Complex64::new(1.0 / 3.0, -2.0 / 7.0),
                Complex64::new(0.0, 1e-17),
            ],
            vec![Complex64::new(-5.5, 0.0), Complex64::new(2.0, 2.0)],
        ])
        .unwrap();
        let text = matrix_to_csv(&m);
        let back = parse_matrix_csv(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m = CMat::from_rows(&[
            vec![Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.0)],
            vec![Complex64::new(1e300, -1e-300), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        let back = parse_matrix_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }
}
