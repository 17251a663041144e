use std::io::Write;

use serde::{Serialize, Serializer};

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::linalg::CycVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Float formatting shared by both output formats.
#[derive(Debug, Clone, Copy)]
pub struct Fmt {
    pub precision: usize,
}

impl Fmt {
    pub fn float(&self, x: f64) -> String {
        if x.is_nan() {
            "nan".into()
        } else if x == f64::INFINITY {
            "inf".into()
        } else if x == f64::NEG_INFINITY {
            "-inf".into()
        } else {
            let s = format!("{:.*}", self.precision, x);
            // no "-0.000"
            if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
                s.trim_start_matches('-').to_string()
            } else {
                s
            }
        }
    }

    pub fn num(&self, x: f64) -> Num {
        if x.is_finite() {
            Num::Finite(self.float(x).parse().unwrap_or(x))
        } else {
            Num::Special(self.float(x))
        }
    }
}

/// JSON float rounded to the output precision; non-finite values become strings.
#[derive(Debug, Clone, PartialEq)]
pub enum Num {
    Finite(f64),
    Special(String),
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Finite(x) => s.serialize_f64(*x),
            Num::Special(t) => s.serialize_str(t),
        }
    }
}

pub fn ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact value: `p/q` when rational, the cyclotomic literal otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct Exact {
    pub exact: String,
    pub rational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub den: Option<String>,
    pub float: Num,
    #[serde(skip)]
    pub float_text: String,
}

impl Exact {
    pub fn new(c: &Cyclotomic, fmt: &Fmt) -> Self {
        let f = c.to_f64();
        match c.as_rational() {
            Ok(r) => Exact {
                exact: ratio(&r),
                rational: true,
                num: Some(r.numer().to_string()),
                den: Some(r.denom().to_string()),
                float: fmt.num(f),
                float_text: fmt.float(f),
            },
            Err(_) => Exact {
                exact: c.to_string(),
                rational: false,
                num: None,
                den: None,
                float: fmt.num(f),
                float_text: fmt.float(f),
            },
        }
    }

    pub fn from_rational(r: &Rational, fmt: &Fmt) -> Self {
        let f = crate::walk::ln_rational(r).exp();
        let f = if r.numer().sign() == num_bigint::Sign::Minus { -f } else { f };
        Exact {
            exact: ratio(r),
            rational: true,
            num: Some(r.numer().to_string()),
            den: Some(r.denom().to_string()),
            float: fmt.num(f),
            float_text: fmt.float(f),
        }
    }

    /// `exact, num, den, float` columns.
    pub fn columns(&self) -> [String; 4] {
        [
            self.exact.clone(),
            self.num.clone().unwrap_or_default(),
            self.den.clone().unwrap_or_default(),
            self.float_text.clone(),
        ]
    }
}

pub fn vector_text(v: &CycVector) -> Vec<String> {
    v.entries().iter().map(|c| c.to_string()).collect()
}

/// Rows for CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub trait Render: Serialize {
    fn table(&self) -> Table;
}

pub fn write_output<W: Write, R: Render>(out: W, report: &R, format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            out.write_all(b"\n")?;
            out.flush()
        }
        Format::Csv => {
            let table = report.table();
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(&table.headers)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()
        }
    }
}
