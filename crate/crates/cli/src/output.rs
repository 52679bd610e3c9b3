//! CSV and JSON serialisation of reports.
//!
//! Every number is rounded to the configured count of significant digits
//! and then written in its shortest round-trip form, so the text depends
//! only on the rounded value and never on the locale.

use std::io::Write;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::AppError;
use crate::run::{cosmology_echo, RunReport};
use crate::sweep::SweepRow;

pub const CSV_COLUMNS: [&str; 20] = [
    "scenario",
    "k",
    "m",
    "epsilon",
    "sigma",
    "T",
    "cutoff",
    "z",
    "omega_in",
    "omega_out",
    "mean_work",
    "adiabatic_work",
    "inner_friction",
    "mean_created",
    "mean_entropy",
    "kl_classical",
    "kl_quantum",
    "crooks_dev",
    "leakage",
    "flags",
];

pub fn round_to(x: f64, digits: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let text = format!("{:.*e}", digits.saturating_sub(1), x);
    text.parse().expect("formatted float parses")
}

/// One report as a flat record, in schema order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub scenario: &'static str,
    pub k: Option<f64>,
    pub m: Option<f64>,
    pub epsilon: Option<f64>,
    pub sigma: Option<f64>,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub cutoff: usize,
    pub z: Option<f64>,
    pub omega_in: Option<f64>,
    pub omega_out: Option<f64>,
    pub mean_work: Option<f64>,
    pub adiabatic_work: Option<f64>,
    pub inner_friction: Option<f64>,
    pub mean_created: Option<f64>,
    pub mean_entropy: Option<f64>,
    pub kl_classical: Option<f64>,
    pub kl_quantum: Option<f64>,
    pub crooks_dev: Option<f64>,
    pub leakage: Option<f64>,
    pub flags: String,
}

impl Record {
    pub fn from_report(r: &RunReport) -> Self {
        let p = r.config.precision;
        let round = |x: f64| Some(round_to(x, p));
        let opt = |x: Option<f64>| x.map(|v| round_to(v, p));
        let mut record = Self::echo(&r.config);
        record.z = round(r.z);
        record.omega_in = round(r.omega_in);
        record.omega_out = round(r.omega_out);
        record.mean_work = round(r.mean_work);
        record.adiabatic_work = round(r.adiabatic_work);
        record.inner_friction = round(r.inner_friction);
        record.mean_created = round(r.mean_created);
        record.mean_entropy = opt(r.mean_entropy);
        record.kl_classical = opt(r.kl_classical);
        record.kl_quantum = opt(r.kl_quantum);
        record.crooks_dev = opt(r.crooks_dev);
        record.leakage = round(r.weighted_leakage);
        record.flags = r.flags();
        record
    }

    /// The configuration columns alone, for rows that failed.
    pub fn echo(config: &RunConfig) -> Self {
        let p = config.precision;
        let [k, m, epsilon, sigma] = cosmology_echo(config).map(|v| v.map(|x| round_to(x, p)));
        Self {
            scenario: config.scenario.name(),
            k,
            m,
            epsilon,
            sigma,
            temperature: round_to(config.temperature, p),
            cutoff: config.cutoff,
            z: None,
            omega_in: None,
            omega_out: None,
            mean_work: None,
            adiabatic_work: None,
            inner_friction: None,
            mean_created: None,
            mean_entropy: None,
            kl_classical: None,
            kl_quantum: None,
            crooks_dev: None,
            leakage: None,
            flags: String::new(),
        }
    }
}

/// A sweep record: the report columns plus the error message, if any.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(flatten)]
    pub record: Record,
    pub error: Option<String>,
}

impl SweepRecord {
    pub fn from_row(row: &SweepRow) -> Self {
        match &row.result {
            Ok(report) => Self {
                record: Record::from_report(report),
                error: None,
            },
            Err(message) => Self {
                record: Record::echo(&row.config),
                error: Some(message.clone()),
            },
        }
    }
}

fn out_err(e: impl std::fmt::Display) -> AppError {
    AppError::Output(e.to_string())
}

pub fn report_json(report: &RunReport) -> Result<String, AppError> {
    serde_json::to_string_pretty(&Record::from_report(report)).map_err(out_err)
}

pub fn report_csv(report: &RunReport) -> Result<String, AppError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(out_err)?;
    w.write_record(fields(&Record::from_report(report))).map_err(out_err)?;
    finish(w)
}

pub fn sweep_json(rows: &[SweepRow]) -> Result<String, AppError> {
    let records: Vec<SweepRecord> = rows.iter().map(SweepRecord::from_row).collect();
    serde_json::to_string_pretty(&records).map_err(out_err)
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, AppError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    header.push("error");
    w.write_record(&header).map_err(out_err)?;
    for row in rows {
        let r = SweepRecord::from_row(row);
        let mut line = fields(&r.record);
        line.push(r.error.unwrap_or_default());
        w.write_record(&line).map_err(out_err)?;
    }
    finish(w)
}

fn fields(r: &Record) -> Vec<String> {
    let num = |x: Option<f64>| x.map(float_text).unwrap_or_default();
    vec![
        r.scenario.to_string(),
        num(r.k),
        num(r.m),
        num(r.epsilon),
        num(r.sigma),
        float_text(r.temperature),
        r.cutoff.to_string(),
        num(r.z),
        num(r.omega_in),
        num(r.omega_out),
        num(r.mean_work),
        num(r.adiabatic_work),
        num(r.inner_friction),
        num(r.mean_created),
        num(r.mean_entropy),
        num(r.kl_classical),
        num(r.kl_quantum),
        num(r.crooks_dev),
        num(r.leakage),
        r.flags.clone(),
    ]
}

/// Same text as the JSON writer produces for a finite float.
fn float_text(x: f64) -> String {
    serde_json::to_string(&x).expect("finite floats serialise")
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, AppError> {
    let bytes = w.into_inner().map_err(out_err)?;
    String::from_utf8(bytes).map_err(out_err)
}

pub fn write_text(out: &mut impl Write, text: &str) -> Result<(), AppError> {
    out.write_all(text.as_bytes()).map_err(out_err)?;
    if !text.ends_with('\n') {
        out.write_all(b"\n").map_err(out_err)?;
    }
    Ok(())
}
