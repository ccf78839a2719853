//! The report envelope every subcommand emits.

use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a field of [`Report`] changes meaning or goes away.
pub const REPORT_SCHEMA: &str = "linset-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Histograms only.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub check: &'static str,
    pub params: Value,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub status: Status,
    pub result: Value,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    #[serde(skip)]
    histograms: Vec<(&'static str, BTreeMap<u64, u64>)>,
}

impl Report {
    pub fn new(check: &'static str, params: Value) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            check,
            params,
            exhaustive: false,
            seed: None,
            status: Status::Pass,
            result: Value::Null,
            witnesses: Vec::new(),
            wall_time_ms: None,
            histograms: Vec::new(),
        }
    }

    pub fn exhaustive(mut self, yes: bool) -> Self {
        self.exhaustive = yes;
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn witnesses(mut self, w: Vec<Value>) -> Self {
        self.witnesses = w;
        self
    }

    /// Registers a histogram for CSV output.
    pub fn histogram(mut self, name: &'static str, h: BTreeMap<u64, u64>) -> Self {
        self.histograms.push((name, h));
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                if self.histograms.is_empty() {
                    bail!("--format csv: `{}` reports carry no histogram", self.check);
                }
                let mut s = String::from("histogram,size,count\n");
                for (name, h) in &self.histograms {
                    for (size, count) in h {
                        writeln!(s, "{name},{size},{count}")?;
                    }
                }
                Ok(s)
            }
        }
    }
}
