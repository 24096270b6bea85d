//! Dataset export (CSV, ARFF) and small file helpers.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{LabeledPattern, Scenario};

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// `printf("%.9g")`: nine significant digits, trailing zeros trimmed.
pub fn format_sig9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Csv,
    Arff,
}

impl std::str::FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DatasetFormat::Csv),
            "arff" => Ok(DatasetFormat::Arff),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

pub fn csv_header(dimension: usize) -> String {
    let mut h = String::from("t");
    for i in 1..=dimension {
        let _ = write!(h, ",x{i}");
    }
    h.push_str(",class,component");
    h
}

pub fn csv_row(p: &LabeledPattern) -> String {
    let mut row = p.t.to_string();
    for v in &p.x {
        row.push(',');
        row.push_str(&format_sig9(*v));
    }
    let _ = write!(
        row,
        ",{},{}:{}",
        p.class_label, p.component_id.class, p.component_id.component
    );
    row
}

pub fn arff_header(s: &Scenario) -> String {
    let mut h = format!("@relation '{}'\n\n", s.name().replace('\'', "\\'"));
    for i in 1..=s.dimension() {
        let _ = writeln!(h, "@attribute x{i} numeric");
    }
    let _ = writeln!(h, "@attribute class {{{}}}", s.class_names().join(","));
    h.push_str("\n@data\n");
    h
}

pub fn arff_row(p: &LabeledPattern) -> String {
    let mut row: Vec<String> = p.x.iter().map(|v| format_sig9(*v)).collect();
    row.push(p.class_label.clone());
    row.join(",")
}

/// Renders the full stream for `seed` in `format`.
pub fn render_dataset(s: &Scenario, seed: u64, format: DatasetFormat) -> String {
    let mut out = String::with_capacity(s.length() * (12 * (s.dimension() + 1) + 8));
    match format {
        DatasetFormat::Csv => {
            out.push_str(&csv_header(s.dimension()));
            out.push('\n');
            for p in s.stream(seed) {
                out.push_str(&csv_row(&p));
                out.push('\n');
            }
        }
        DatasetFormat::Arff => {
            out.push_str(&arff_header(s));
            for p in s.stream(seed) {
                out.push_str(&arff_row(&p));
                out.push('\n');
            }
        }
    }
    out
}

pub fn write_dataset(s: &Scenario, seed: u64, format: DatasetFormat, path: &Path) -> Result<()> {
    write_atomic(path, render_dataset(s, seed, format).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(-2.5), "-2.5");
        assert_eq!(format_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig9(123456.789012), "123456.789");
        assert_eq!(format_sig9(1.5e-7), "1.5e-07");
        assert_eq!(format_sig9(0.000123456789123), "0.000123456789");
        assert_eq!(format_sig9(9.87654321987e12), "9.87654322e+12");
        assert_eq!(format_sig9(999999999.6), "1e+09");
    }

    #[test]
    fn header_lists_every_feature() {
        assert_eq!(csv_header(2), "t,x1,x2,class,component");
        assert_eq!(csv_header(5), "t,x1,x2,x3,x4,x5,class,component");
    }
}
