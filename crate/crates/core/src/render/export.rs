use std::fmt::Write as _;

use serde::Serialize;

use crate::lti::PidGains;
use crate::objective::ObjectiveValue;
use crate::search::{EvaluationRecord, SearchConfig, SearchTrace};

pub const CSV_HEADER: &str =
    "index,kp,ki,kd,total,rise_time,rise_term,deviation,rose,improved,best_so_far";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    Json,
}

/// 17 significant digits, enough for any `f64` to parse back bit-exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn export_trace(trace: &SearchTrace, format: TraceFormat) -> Vec<u8> {
    match format {
        TraceFormat::Csv => trace_csv(trace).into_bytes(),
        TraceFormat::Json => trace_json(trace),
    }
}

fn trace_csv(trace: &SearchTrace) -> String {
    let mut out = String::with_capacity(64 + trace.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &trace.records {
        let o = &r.objective;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            fmt_f64(r.gains.kp),
            fmt_f64(r.gains.ki),
            fmt_f64(r.gains.kd),
            fmt_f64(o.total),
            fmt_f64(o.rise_time),
            fmt_f64(o.rise_term),
            fmt_f64(o.deviation),
            o.rose,
            r.improved,
            fmt_f64(r.best_so_far),
        );
    }
    out
}

#[derive(Serialize)]
struct JsonRecord {
    index: usize,
    kp: f64,
    ki: f64,
    kd: f64,
    total: f64,
    rise_time: f64,
    rise_term: f64,
    deviation: f64,
    rose: bool,
    improved: bool,
    best_so_far: f64,
}

impl From<&EvaluationRecord> for JsonRecord {
    fn from(r: &EvaluationRecord) -> Self {
        let o = &r.objective;
        Self {
            index: r.index,
            kp: r.gains.kp,
            ki: r.gains.ki,
            kd: r.gains.kd,
            total: o.total,
            rise_time: o.rise_time,
            rise_term: o.rise_term,
            deviation: o.deviation,
            rose: o.rose,
            improved: r.improved,
            best_so_far: r.best_so_far,
        }
    }
}

#[derive(Serialize)]
struct JsonIncumbent<'a> {
    gains: &'a PidGains,
    objective: &'a ObjectiveValue,
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    config: &'a SearchConfig,
    records: Vec<JsonRecord>,
    incumbent: JsonIncumbent<'a>,
    termination: &'static str,
}

fn trace_json(trace: &SearchTrace) -> Vec<u8> {
    let doc = JsonTrace {
        config: &trace.config,
        records: trace.records.iter().map(JsonRecord::from).collect(),
        incumbent: JsonIncumbent {
            gains: &trace.incumbent,
            objective: &trace.incumbent_value,
        },
        termination: trace.termination.as_str(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("trace values serialize");
    bytes.push(b'\n');
    bytes
}
