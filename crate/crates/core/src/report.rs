//! Run summaries and their CSV, JSON and plain-text renderings.
//!
//! A [`BenchReport`] row records every setting needed to repeat the run, so
//! a report file doubles as a provenance record. CSV and JSON renderings use
//! shortest round-trip float formatting and parse back to identical values.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{mean_std, InitMethod, PipelineConfig, RunOutcome, Space};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub dataset: String,
    pub n_samples: usize,
    pub k: usize,
    pub init: InitMethod,
    /// Discard count; empty for random seeding.
    pub m: Option<usize>,
    /// `m` requested on the command line (`auto` or an integer).
    pub m_policy: String,
    pub columns: String,
    pub standardized: bool,
    pub pca: Option<usize>,
    pub init_space: Space,
    pub lloyd_space: Space,
    pub hull: bool,
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    // Quality scores: single values for one run, means over restarts otherwise.
    pub error_percent: Option<f64>,
    pub error_percent_std: Option<f64>,
    pub misclassified: Option<f64>,
    pub rand_score: Option<f64>,
    pub rand_score_std: Option<f64>,
    pub ccpi: Option<f64>,
    pub ccpi_std: Option<f64>,
    pub iterations: f64,
    pub iterations_std: f64,
    pub distance_evals: f64,
    pub cost: f64,
    pub cost_std: f64,
    /// Error of the lowest-cost restart (earliest on ties).
    pub best_cost_error_percent: Option<f64>,
}

fn summary(values: Vec<f64>) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let (m, s) = mean_std(&values);
    (Some(m), Some(s))
}

impl BenchReport {
    /// Aggregates runs of one configuration, in restart order.
    pub fn summarise(cfg: &PipelineConfig, n_samples: usize, runs: &[RunOutcome]) -> Self {
        let metric = |f: &dyn Fn(&crate::metrics::MetricReport) -> Option<f64>| -> Vec<f64> {
            runs.iter().filter_map(|r| r.metrics.as_ref().and_then(f)).collect()
        };
        let scored = runs.iter().all(|r| r.metrics.is_some());
        let (error_percent, error_percent_std) = if scored {
            summary(metric(&|m| Some(m.error_percent)))
        } else {
            (None, None)
        };
        let (rand_score, rand_score_std) = if scored {
            summary(metric(&|m| Some(m.rand_score)))
        } else {
            (None, None)
        };
        let misclassified = error_percent.and(summary(metric(&|m| Some(m.misclassified as f64))).0);
        let ccpis = metric(&|m| m.ccpi);
        let (ccpi, ccpi_std) = if scored && ccpis.len() == runs.len() {
            summary(ccpis)
        } else {
            (None, None)
        };
        let iters: Vec<f64> = runs.iter().map(|r| r.model.iterations as f64).collect();
        let costs: Vec<f64> = runs.iter().map(|r| r.model.cost).collect();
        let evals: Vec<f64> = runs.iter().map(|r| r.model.distance_evals as f64).collect();
        let (iterations, iterations_std) = mean_std(&iters);
        let (cost, cost_std) = mean_std(&costs);
        let best = runs
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.model.cost.total_cmp(&b.model.cost).then(i.cmp(j)))
            .and_then(|(_, r)| r.metrics.as_ref())
            .map(|m| m.error_percent);

        BenchReport {
            dataset: cfg.dataset.label(),
            n_samples,
            k: cfg.k,
            init: cfg.init,
            m: runs.first().and_then(|r| r.m),
            m_policy: cfg.m.to_string(),
            columns: cfg.columns_label(),
            standardized: cfg.standardize,
            pca: cfg.pca,
            init_space: cfg.init_space,
            lloyd_space: cfg.lloyd_space,
            hull: cfg.hull,
            seed: cfg.seed,
            restarts: runs.len(),
            max_iter: cfg.lloyd.max_iter,
            tol: cfg.lloyd.tol,
            error_percent,
            error_percent_std,
            misclassified,
            rand_score,
            rand_score_std,
            ccpi,
            ccpi_std,
            iterations,
            iterations_std,
            distance_evals: mean_std(&evals).0,
            cost,
            cost_std,
            best_cost_error_percent: if scored { best } else { None },
        }
    }
}

pub fn to_csv(rows: &[BenchReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::ShapeError(format!("csv encoding: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::ShapeError(format!("csv encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn from_csv(text: &str) -> Result<Vec<BenchReport>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::ParseError {
                path: "<report>".into(),
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn to_json(rows: &[BenchReport]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Vec<BenchReport>> {
    serde_json::from_str(text).map_err(|e| Error::ParseError {
        path: "<report>".into(),
        line: e.line(),
        message: e.to_string(),
    })
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

fn with_std(v: Option<f64>, s: Option<f64>, digits: usize, restarts: usize) -> String {
    match (v, s) {
        (Some(v), Some(s)) if restarts > 1 => format!("{v:.digits$} ± {s:.digits$}"),
        _ => cell(v, digits),
    }
}

/// Human-readable aligned table.
pub fn to_table(rows: &[BenchReport]) -> String {
    let header = ["dataset", "init", "K", "M", "runs", "error %", "rand", "ccpi", "iterations", "best-cost error %"];
    let body: Vec<[String; 10]> = rows
        .iter()
        .map(|r| {
            [
                r.dataset.clone(),
                r.init.to_string(),
                r.k.to_string(),
                r.m.map_or_else(|| "-".into(), |m| m.to_string()),
                r.restarts.to_string(),
                with_std(r.error_percent, r.error_percent_std, 2, r.restarts),
                with_std(r.rand_score, r.rand_score_std, 4, r.restarts),
                with_std(r.ccpi, r.ccpi_std, 4, r.restarts),
                with_std(Some(r.iterations), Some(r.iterations_std), 2, r.restarts),
                cell(r.best_cost_error_percent, 2),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| {
                let pad = w - c.chars().count();
                if i == 0 || i == 1 {
                    format!("{c}{}", " ".repeat(pad))
                } else {
                    format!("{}{c}", " ".repeat(pad))
                }
            })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header.to_vec());
    line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for row in &body {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
