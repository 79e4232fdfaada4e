//! Numeric CSV tables with a fixed 12-significant-digit text form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Formats `v` with 12 significant digits, `%g` style, trailing zeros trimmed.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.11e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

/// Rounds `v` to what its CSV text encodes.
pub fn quantize(v: f64) -> f64 {
    fmt_sig(v).parse().unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Every value replaced by its 12-digit text form, so the in-memory table
    /// equals what re-parsing the CSV yields.
    pub fn quantized(&self) -> Self {
        Self {
            header: self.header.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| quantize(v)).collect())
                .collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "{}", fmt_sig(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?;
        let header: Vec<String> = header_line
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", lineno + 2)))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 2,
                    header.len(),
                    row.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(0.271_737_212_145_375_4), "0.271737212145");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(123456.789), "123456.789");
        assert_eq!(fmt_sig(1.23e-7), "1.23e-7");
        assert_eq!(fmt_sig(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_sig(-1e-300), "-1e-300");
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        assert!(CsvTable::parse("a,b\n1,2\n3\n").is_err());
        assert!(CsvTable::parse("a\nx\n").is_err());
        assert!(CsvTable::parse("").is_err());
    }

    #[test]
    fn column_lookup() {
        let mut t = CsvTable::new(["x", "y"]);
        t.push(vec![1.0, 2.0]);
        t.push(vec![3.0, 4.0]);
        assert_eq!(t.column("y"), Some(vec![2.0, 4.0]));
        assert_eq!(t.column("z"), None);
        assert_eq!(t.to_csv(), "x,y\n1,2\n3,4\n");
    }
}
