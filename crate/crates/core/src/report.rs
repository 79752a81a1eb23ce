//! Stable text formats: fixed `%.12e` floats in JSON, rationals as `"p/q"`
//! strings, and the sweep CSV / plot-data layouts.

use std::fmt::Write as _;
use std::io;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::poly::{format_rational, Rational};
use crate::spectral::SweepRecord;

/// JSON schema version written into every report.
pub const SCHEMA: u32 = 1;

/// C-style `%.12e`: `5.773502691896e-01`.
pub fn fmt_sci(x: f64) -> String {
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mant}e{sign}{digits:0>2}")
}

/// A float that serializes as a bare `%.12e` number, or `null` when not finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_sci(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    Sci(*x).serialize(s)
}

pub fn ser_f64_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    x.map(Sci).serialize(s)
}

pub fn ser_f64_vec<S: Serializer>(x: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|&v| Sci(v)))
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn ser_rational_opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_rational_pair<S: Serializer>(r: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([format_rational(&r.0), format_rational(&r.1)])
}

/// Pretty JSON with a trailing newline. Key order follows struct field order.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub const CSV_HEADER: &str = "lambda,mu_min,n_used,converged,residual";

pub fn csv_row(r: &SweepRecord) -> String {
    format!(
        "{},{},{},{},{}",
        fmt_sci(r.lambda),
        fmt_sci(r.mu_min),
        r.n_used,
        r.converged,
        fmt_sci(r.residual)
    )
}

pub fn write_csv<W: io::Write>(mut w: W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", csv_row(r))?;
    }
    Ok(())
}

/// Two whitespace-separated columns `lambda mu_min` for log-log plotting.
pub fn plot_data(records: &[SweepRecord]) -> String {
    let mut s = String::from("# lambda mu_min\n");
    for r in records {
        let _ = writeln!(s, "{} {}", fmt_sci(r.lambda), fmt_sci(r.mu_min));
    }
    s
}
