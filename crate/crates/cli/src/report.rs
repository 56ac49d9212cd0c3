//! Run reports in JSON, TSV and human-readable form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON schema for [`Report`], also printed by `alcs schema`.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Found,
    NoSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub string_index_1based: usize,
    pub name: String,
    pub start_1based: usize,
    /// Inclusive; `start_1based - 1` for an empty occurrence.
    pub end_1based: usize,
    pub distance: u32,
    pub occurrence: String,
    /// The whole answer was deleted within budget.
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputString {
    pub name: String,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub status: Status,
    pub problem: String,
    pub metric: String,
    pub solver: String,
    pub k: u32,
    pub t: usize,
    pub m: usize,
    pub indeterminate: bool,
    pub length: usize,
    pub answer: Option<String>,
    pub source_index_1based: Option<usize>,
    pub source_offset_1based: Option<usize>,
    pub maximizers: usize,
    pub witnesses: Vec<Witness>,
    pub strings: Vec<InputString>,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Key/value header lines prefixed with `#`, then one row per witness.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        let _ = writeln!(out, "#status\t{}", self.status_word());
        let _ = writeln!(out, "#problem\t{}", self.problem);
        let _ = writeln!(out, "#metric\t{}", self.metric);
        let _ = writeln!(out, "#solver\t{}", self.solver);
        let _ = writeln!(out, "#k\t{}", self.k);
        let _ = writeln!(out, "#t\t{}", self.t);
        let _ = writeln!(out, "#length\t{}", self.length);
        let _ = writeln!(out, "#answer\t{}", self.answer.as_deref().unwrap_or("-"));
        let _ = writeln!(out, "#source_index_1based\t{}", opt(self.source_index_1based));
        let _ = writeln!(out, "#source_offset_1based\t{}", opt(self.source_offset_1based));
        let _ = writeln!(out, "string_index_1based\tname\tstart_1based\tend_1based\tdistance\toccurrence");
        for w in &self.witnesses {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                w.string_index_1based, w.name, w.start_1based, w.end_1based, w.distance, w.occurrence
            );
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} on {} strings, {} distance, k = {}, t = {} ({} solver)",
            self.problem, self.m, self.metric, self.k, self.t, self.solver
        );
        match self.status {
            Status::NoSolution => {
                let _ = writeln!(out, "no solution");
            }
            Status::Found => {
                let _ = writeln!(
                    out,
                    "length {}: {}",
                    self.length,
                    self.answer.as_deref().unwrap_or("")
                );
                if let (Some(i), Some(p)) = (self.source_index_1based, self.source_offset_1based) {
                    let _ = writeln!(out, "taken from string {i} at position {p}");
                }
                for w in &self.witnesses {
                    let _ = writeln!(
                        out,
                        "  {} [{}..{}] distance {}: {}",
                        w.name,
                        w.start_1based,
                        w.end_1based,
                        w.distance,
                        if w.empty { "(empty occurrence)" } else { &w.occurrence }
                    );
                }
                if self.maximizers > 1 {
                    let _ = writeln!(out, "{} optimal choices", self.maximizers);
                }
            }
        }
        let _ = writeln!(out, "{:.3} ms", self.wall_time_ms);
        out
    }

    fn status_word(&self) -> &'static str {
        match self.status {
            Status::Found => "found",
            Status::NoSolution => "no_solution",
        }
    }
}
