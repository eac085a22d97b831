//! Report rows, `%.17g` formatting, CSV/JSON emission and `(x, y)` column files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const COLUMNS: [&str; 6] = ["experiment_id", "params", "measured", "reference", "rel_err", "verdict"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Inconclusive => "inconclusive",
        }
    }

    /// Worst of a set: fail over inconclusive over pass.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        })
    }

    /// 0 pass, 2 fail, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::Fail => 2,
            Self::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment_id: String,
    pub params: String,
    #[serde(with = "lossless")]
    pub measured: f64,
    #[serde(with = "lossless")]
    pub reference: f64,
    #[serde(with = "lossless")]
    pub rel_err: f64,
    pub verdict: Verdict,
}

impl ReportRow {
    pub fn new(id: impl Into<String>, params: impl Into<String>, measured: f64, reference: f64, verdict: Verdict) -> Self {
        Self {
            experiment_id: id.into(),
            params: params.into(),
            measured,
            reference,
            rel_err: rel_err(measured, reference),
            verdict,
        }
    }
}

pub fn rel_err(measured: f64, reference: f64) -> f64 {
    (measured - reference).abs() / reference.abs().max(1e-300)
}

/// Fixed row order: experiment id, then parameter tuple.
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| a.experiment_id.cmp(&b.experiment_id).then_with(|| a.params.cmp(&b.params)));
}

/// C's `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mant.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn csv_string(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            r.experiment_id.as_str(),
            r.params.as_str(),
            &fmt_g17(r.measured),
            &fmt_g17(r.reference),
            &fmt_g17(r.rel_err),
            r.verdict.as_str(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub rows: Vec<ReportRow>,
}

pub fn json_string(rows: &[ReportRow]) -> Result<String> {
    let doc = ReportDocument { schema_version: SCHEMA_VERSION, rows: rows.to_vec() };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(s: &str) -> Result<ReportDocument> {
    let doc: ReportDocument = serde_json::from_str(s)?;
    anyhow::ensure!(doc.schema_version == SCHEMA_VERSION, "unsupported schema version {}", doc.schema_version);
    Ok(doc)
}

/// Writes whichever of the CSV and JSON reports has a path.
pub fn emit_report(rows: &[ReportRow], csv_path: Option<&Path>, json_path: Option<&Path>) -> Result<()> {
    if let Some(p) = csv_path {
        write_file(p, &csv_string(rows)?)?;
    }
    if let Some(p) = json_path {
        write_file(p, &json_string(rows)?)?;
    }
    Ok(())
}

/// Whitespace-separated `x y` columns for external plotters.
pub fn xy_string(header: (&str, &str), points: &[(f64, f64)]) -> String {
    let mut s = format!("# {} {}\n", header.0, header.1);
    for (x, y) in points {
        let _ = writeln!(s, "{} {}", fmt_g17(*x), fmt_g17(*y));
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Finite numbers as JSON numbers, the rest as `"inf"`, `"-inf"`, `"nan"`.
mod lossless {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&super::fmt_g17(*x))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}
