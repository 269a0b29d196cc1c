//! File formats shared by the CLI and external tools: linear codes and
//! search parameters as JSON, decode payloads, corruption-trace lines,
//! simulation reports, and the curve table as CSV or JSON. Rates and
//! distortions always travel as exact "p/q" strings; decimal columns are
//! renderings, never inputs.

use serde::{Deserialize, Serialize};

use crate::adversary::{DistortionReport, Strategy, TraceRecord};
use crate::bounds::NamedCurve;
use crate::code::VpecParams;
use crate::gf::{field_build, Symbol};
use crate::lincode::{GrsParams, LinearCode, LmdsReport};
use crate::ratio::{format_rational, parse_rational, to_decimal, Distortion, Rational};
use crate::{Error, Result};

const DECIMAL_DIGITS: usize = 12;

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// A linear code on disk: field as prime, extension degree, and order
/// (redundant on purpose, as a consistency check), plus the generator
/// matrix with elements as indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub generator: Vec<Vec<Symbol>>,
}

impl CodeFile {
    pub fn from_code(code: &LinearCode) -> CodeFile {
        let f = code.field();
        CodeFile {
            q: f.order(),
            p: f.characteristic(),
            m: f.degree(),
            n: code.n(),
            k: code.k(),
            generator: code.generator().to_vec(),
        }
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let field = field_build(self.p, self.m)?;
        if field.order() != self.q {
            return Err(Error::Parse(format!(
                "field order mismatch: q = {} but p^m = {}",
                self.q,
                field.order()
            )));
        }
        if self.generator.len() != self.k {
            return Err(Error::Parse(format!(
                "generator has {} rows, header says k = {}",
                self.generator.len(),
                self.k
            )));
        }
        if self.generator.iter().any(|row| row.len() != self.n) {
            return Err(Error::Parse(format!(
                "generator rows must all have n = {} entries",
                self.n
            )));
        }
        LinearCode::from_generator(field, self.generator.clone())
    }

    pub fn from_json(s: &str) -> Result<CodeFile> {
        serde_json::from_str(s).map_err(parse_err)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// Output of the generator search: the parameters that rebuild the code,
/// with the verification transcript alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFile {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub eval_points: Vec<Symbol>,
    pub multipliers: Vec<Symbol>,
    pub verification: SearchTranscript,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTranscript {
    /// Checked list-decoding radius, exact.
    pub radius: String,
    pub list_size: usize,
    pub min_distance: usize,
    pub mds: bool,
    pub iterations: u64,
    pub seed: u64,
}

impl SearchFile {
    pub fn new(
        field_p: u32,
        field_m: u32,
        n: usize,
        k: usize,
        params: &GrsParams,
        report: &LmdsReport,
        seed: u64,
    ) -> Result<SearchFile> {
        let field = field_build(field_p, field_m)?;
        Ok(SearchFile {
            q: field.order(),
            p: field_p,
            m: field_m,
            n,
            k,
            eval_points: params.eval_points.clone(),
            multipliers: params.multipliers.clone(),
            verification: SearchTranscript {
                radius: format!("{}/{}", report.tau.0, report.tau.1),
                list_size: report.list_size,
                min_distance: report.min_distance,
                mds: report.mds,
                iterations: report.iterations,
                seed,
            },
        })
    }

    pub fn params(&self) -> GrsParams {
        GrsParams {
            eval_points: self.eval_points.clone(),
            multipliers: self.multipliers.clone(),
        }
    }

    pub fn from_json(s: &str) -> Result<SearchFile> {
        serde_json::from_str(s).map_err(parse_err)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// Received word for a packet-indexed decoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketsPayload {
    pub packets: Vec<Vec<Symbol>>,
}

/// Received word for the column construction, given as array rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayPayload {
    pub array: Vec<Vec<Symbol>>,
}

/// Decoder output: the reconstruction with erasures as nulls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordPayload {
    pub word: Vec<Option<Symbol>>,
}

pub fn payload_from_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(parse_err)
}

pub fn payload_to_json<T: Serialize>(payload: &T) -> String {
    let mut s = serde_json::to_string(payload).expect("plain data");
    s.push('\n');
    s
}

/// One corruption case as a JSON line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub msg: Vec<Symbol>,
    pub altered: Vec<usize>,
    pub values: Vec<Vec<Symbol>>,
    pub output: Vec<Option<Symbol>>,
    pub distortion: String,
}

impl TraceLine {
    pub fn from_record(rec: &TraceRecord) -> TraceLine {
        TraceLine {
            msg: rec.message.to_vec(),
            altered: rec.altered.to_vec(),
            values: rec.values.to_vec(),
            output: rec.output.clone(),
            distortion: rec.distortion.to_string(),
        }
    }

    pub fn to_json_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json_line(s: &str) -> Result<TraceLine> {
        serde_json::from_str(s).map_err(parse_err)
    }

    pub fn distortion_value(&self) -> Result<Distortion> {
        if self.distortion == "inf" {
            Ok(Distortion::Infinite)
        } else {
            Ok(Distortion::Finite(parse_rational(&self.distortion)?))
        }
    }
}

/// Summary of an adversary run against one construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub construction: String,
    pub params: ParamsJson,
    pub adversary: String,
    pub trials_or_space_size: u64,
    pub worst_distortion: String,
    pub mean_distortion: String,
    pub wrong_symbol_events: u64,
    pub max_erasures: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub packets: usize,
    pub message_len: usize,
    pub rate: String,
    pub distortion: String,
    pub errors: usize,
}

impl ParamsJson {
    pub fn from_params(p: &VpecParams) -> ParamsJson {
        ParamsJson {
            packets: p.packets,
            message_len: p.message_len,
            rate: format_rational(&p.rate),
            distortion: format_rational(&p.distortion),
            errors: p.errors,
        }
    }
}

pub fn strategy_name(strategy: &Strategy) -> &'static str {
    match strategy {
        Strategy::Exhaustive => "exhaustive",
        Strategy::Random { .. } => "random",
        Strategy::SwapToCodeword { .. } => "swap",
    }
}

impl SimulateReport {
    pub fn new(
        construction: &str,
        params: &VpecParams,
        strategy: &Strategy,
        report: &DistortionReport,
        elapsed_ms: u64,
    ) -> SimulateReport {
        let mean = match report.mean() {
            Some(m) => format_rational(&m),
            None => "inf".into(),
        };
        SimulateReport {
            construction: construction.into(),
            params: ParamsJson::from_params(params),
            adversary: strategy_name(strategy).into(),
            trials_or_space_size: report.cases,
            worst_distortion: report.worst.to_string(),
            mean_distortion: mean,
            wrong_symbol_events: report.wrong_symbol_events,
            max_erasures: report.max_erasures,
            elapsed_ms,
        }
    }

    pub fn from_json(s: &str) -> Result<SimulateReport> {
        serde_json::from_str(s).map_err(parse_err)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// Renders curves as CSV: comment lines first, then the fixed header,
/// then one row per point with exact and 12-digit decimal columns.
pub fn curves_to_csv(comments: &[String], curves: &[NamedCurve]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("curve,R_exact,D_exact,R_dec,D_dec\n");
    for nc in curves {
        for p in nc.curve.points() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                nc.name,
                format_rational(&p.r),
                format_rational(&p.d),
                to_decimal(&p.r, DECIMAL_DIGITS),
                to_decimal(&p.d, DECIMAL_DIGITS),
            ));
        }
    }
    out
}

/// The same table as JSON: an object with the comments and one row per
/// point mirroring the CSV columns.
pub fn curves_to_json(comments: &[String], curves: &[NamedCurve]) -> String {
    #[derive(Serialize)]
    struct Row<'a> {
        curve: &'a str,
        #[serde(rename = "R_exact")]
        r_exact: String,
        #[serde(rename = "D_exact")]
        d_exact: String,
        #[serde(rename = "R_dec")]
        r_dec: String,
        #[serde(rename = "D_dec")]
        d_dec: String,
    }
    #[derive(Serialize)]
    struct Table<'a> {
        comments: &'a [String],
        rows: Vec<Row<'a>>,
    }
    let rows = curves
        .iter()
        .flat_map(|nc| {
            nc.curve.points().iter().map(|p| Row {
                curve: &nc.name,
                r_exact: format_rational(&p.r),
                d_exact: format_rational(&p.d),
                r_dec: to_decimal(&p.r, DECIMAL_DIGITS),
                d_dec: to_decimal(&p.d, DECIMAL_DIGITS),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Table { comments, rows }).expect("plain data");
    s.push('\n');
    s
}

/// Parses a distortion string as emitted in reports: "p/q" or "inf".
pub fn parse_distortion(s: &str) -> Result<Distortion> {
    if s == "inf" {
        Ok(Distortion::Infinite)
    } else {
        Ok(Distortion::Finite(parse_rational(s)?))
    }
}

/// Formats a possibly-infinite distortion for reports.
pub fn format_distortion(d: &Distortion) -> String {
    d.to_string()
}

/// Exact mean over finitely many rationals; used by report assembly.
pub fn rational_mean(sum: &Rational, count: u64) -> Option<Rational> {
    if count == 0 {
        None
    } else {
        Some(sum / Rational::from_integer(count.into()))
    }
}
