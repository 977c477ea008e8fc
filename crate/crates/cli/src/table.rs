//! Plot-ready CSV tables.
//!
//! Floats are printed with 9 significant digits in `%g` style (trailing
//! zeros dropped), so a parsed table re-emits byte-identically.

use std::fmt;
use std::io::Write;

use anyhow::{bail, Context};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl Cell {
    fn parse(s: &str) -> Cell {
        if s.is_empty() {
            Cell::Empty
        } else if let Ok(i) = s.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(f) = s.parse::<f64>() {
            Cell::Float(f)
        } else {
            Cell::Text(s.to_owned())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Float(f) => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => f.write_str(&format_sig(*x, 9)),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

/// `printf("%.{digits}g")`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = digits.max(1);
    // exponent after rounding to p significant digits
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        OutputTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn parse_csv(text: &str) -> anyhow::Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header: Vec<String> = r.headers().context("reading header")?.iter().map(str::to_owned).collect();
        let mut table = OutputTable::new(header);
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != table.header.len() {
                bail!("row has {} fields, header has {}", rec.len(), table.header.len());
            }
            table.rows.push(rec.iter().map(Cell::parse).collect());
        }
        Ok(table)
    }
}

/// Writes tables back to back, separated by one blank line.
pub fn write_tables<W: Write>(tables: &[OutputTable], mut out: W) -> anyhow::Result<()> {
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.write_all(b"\n")?;
        }
        t.write_csv(&mut out)?;
    }
    out.flush()?;
    Ok(())
}

/// Splits output of [`write_tables`] back into tables.
pub fn parse_tables(text: &str) -> anyhow::Result<Vec<OutputTable>> {
    text.split("\n\n")
        .filter(|chunk| !chunk.trim().is_empty())
        .map(OutputTable::parse_csv)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig(0.5, 9), "0.5");
        assert_eq!(format_sig(6.0 / 11.0, 9), "0.545454545");
        assert_eq!(format_sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_sig(3.0 / 7.0, 9), "0.428571429");
        assert_eq!(format_sig(1.0, 9), "1");
        assert_eq!(format_sig(40.0, 9), "40");
        assert_eq!(format_sig(5.5125940593238, 9), "5.51259406");
        assert_eq!(format_sig(1e-5, 9), "1e-05");
        assert_eq!(format_sig(1.5e10, 9), "1.5e+10");
        assert_eq!(format_sig(123456789.0, 9), "123456789");
        assert_eq!(format_sig(-0.000123, 9), "-0.000123");
        assert_eq!(format_sig(0.0, 9), "0");
    }

    #[test]
    fn round_trip() {
        let mut t = OutputTable::new(["scheme", "K", "x", "ref"]);
        t.push(vec!["ria".into(), 3usize.into(), (1.0 / 3.0).into(), Cell::Empty]);
        t.push(vec!["tdma".into(), 3usize.into(), 1.0.into(), 2.5e-7.into()]);
        let text = t.to_csv();
        assert_eq!(text, "scheme,K,x,ref\nria,3,0.333333333,\ntdma,3,1,2.5e-07\n");
        assert_eq!(OutputTable::parse_csv(&text).unwrap().to_csv(), text);
    }

    #[test]
    fn multi_table_round_trip() {
        let mut a = OutputTable::new(["a"]);
        a.push(vec![1usize.into()]);
        let mut b = OutputTable::new(["b", "c"]);
        b.push(vec![0.25.into(), "x".into()]);
        let mut buf = Vec::new();
        write_tables(&[a, b], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let tables = parse_tables(&text).unwrap();
        assert_eq!(tables.len(), 2);
        let mut again = Vec::new();
        write_tables(&tables, &mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
    }
}
