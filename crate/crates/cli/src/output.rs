//! Deterministic rendering: compact JSON with every float printed to 17
//! significant digits, or CSV for tabular results.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

/// `1.2345678901234567e0` style floats; everything else as serde_json's
/// compact formatter.
struct Scientific;

impl Formatter for Scientific {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", float(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Float text shared by JSON and CSV output.
pub fn float(v: f64) -> String {
    if v == 0.0 {
        // keep the sign of -0.0 out of the output
        "0.0000000000000000e0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Scientific);
    value.serialize(&mut ser).expect("report types serialize");
    out.push(b'\n');
    out
}

/// Rows of already formatted cells under a header.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory write")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_17_digits() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: Vec<f64>,
            c: Option<f64>,
        }
        let s = S {
            a: 0.1,
            b: vec![-2.5, 1e-300],
            c: Some(f64::NAN),
        };
        let text = String::from_utf8(json(&s)).unwrap();
        assert_eq!(
            text,
            "{\"a\":1.0000000000000001e-1,\"b\":[-2.5000000000000000e0,1.0000000000000000e-300],\"c\":null}\n"
        );
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn negative_zero_prints_as_zero() {
        assert_eq!(float(-0.0), float(0.0));
    }

    #[test]
    fn csv_has_header_first() {
        let mut t = Table::new(["k", "value"]);
        t.push(vec!["0".into(), float(1.5)]);
        assert_eq!(
            String::from_utf8(t.to_csv()).unwrap(),
            "k,value\n0,1.5000000000000000e0\n"
        );
    }
}
