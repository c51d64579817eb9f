// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;

use sentinel_core::corpus::{self, DatasetManifest, SplitMode};
use sentinel_core::export::import_predictions;
use sentinel_core::metrics::{self, MetricsError};
use sentinel_core::{
    analyze_file, AnalysisReport, Config, ContractAnalysis, Objective, RiskLevel, SentinelError,
};

/// Where machine-readable results go.
pub struct Output {
    json: Option<String>,
}

impl Output {
    pub fn new(json: Option<String>) -> Self {
        Self { json }
    }

    /// Writes `value` as JSON if requested; prints the human summary unless
    /// stdout is taken by the JSON.
    fn emit<T: Serialize>(&self, value: &T, human: impl FnOnce() -> String) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        match self.json.as_deref() {
            Some("-") => print!("{text}"),
            Some(path) => {
                fs::write(path, text).map_err(SentinelError::io(path))?;
                print!("{}", human());
            }
            None => print!("{}", human()),
        }
        Ok(())
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, text).map_err(SentinelError::io(path))?;
    Ok(())
}

fn summarize(report: &AnalysisReport) -> String {
    let mut s = String::new();
    let mut by_level: BTreeMap<std::cmp::Reverse<RiskLevel>, usize> = BTreeMap::new();
    for a in &report.assessments {
        *by_level.entry(std::cmp::Reverse(a.risk)).or_default() += 1;
    }
    let counts: Vec<String> = by_level
        .iter()
        .map(|(level, n)| format!("{} {n}", level.0))
        .collect();
    let _ = writeln!(
        s,
        "{} ({}): {:?}, {} path(s){}{}, {:.2} ms",
        report.contract_id,
        report.contract_name,
        report.verdict,
        report.assessments.len(),
        if counts.is_empty() {
            String::new()
        } else {
            format!(" [{}]", counts.join(", "))
        },
        if report.truncated { ", truncated" } else { "" },
        report.timing_ms
    );
    for a in &report.assessments {
        let rules: Vec<&str> = a.matched_rules.iter().map(|m| m.rule_id.as_str()).collect();
        let _ = writeln!(
            s,
            "  #{:<3} {:<6} {} -> {}  taint {:.4}{}",
            a.path.id,
            a.risk,
            a.source_span,
            a.sink_span,
            a.path.sink_taint,
            if rules.is_empty() {
                String::new()
            } else {
                format!("  rules: {}", rules.join(", "))
            }
        );
    }
    s
}

pub fn analyze(files: &[PathBuf], config: &Config, out: &Output) -> anyhow::Result<()> {
    let results: Vec<_> = files.par_iter().map(|f| analyze_file(f, config)).collect();
    let mut reports = Vec::new();
    let mut first_error = None;
    for (file, result) in files.iter().zip(results) {
        match result {
            Ok(list) => reports.extend(list.into_iter().map(|a| a.report)),
            Err(e) => {
                if files.len() > 1 {
                    log::error!("{}: {e}", file.display());
                }
                first_error.get_or_insert(e);
            }
        }
    }
    out.emit(&reports, || reports.iter().map(summarize).collect())?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct Skipped {
    file: String,
    error: String,
}

#[derive(Serialize)]
struct CorpusSummary {
    files: usize,
    contracts: usize,
    skipped: Vec<Skipped>,
    total_ms: f64,
    mean_ms: f64,
    features: String,
}

fn sol_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(SentinelError::io(dir))? {
        let path = entry.map_err(SentinelError::io(dir))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "sol") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn corpus(
    dir: &Path,
    manifest: Option<&Path>,
    features: &Path,
    preds: Option<&Path>,
    config: &Config,
    out: &Output,
) -> anyhow::Result<()> {
    let inputs: Vec<(PathBuf, Option<bool>)> = match manifest {
        Some(m) => DatasetManifest::load(m)
            .map_err(SentinelError::from)?
            .entries
            .into_iter()
            .map(|e| (dir.join(&e.file), Some(e.vulnerable)))
            .collect(),
        None => sol_files(dir)?.into_iter().map(|f| (f, None)).collect(),
    };
    let results: Vec<Result<Vec<ContractAnalysis>, SentinelError>> =
        inputs.par_iter().map(|(f, _)| analyze_file(f, config)).collect();

    let mut feature_out = BufWriter::new(File::create(features).map_err(SentinelError::io(features))?);
    let mut pred_out = match preds {
        Some(p) => Some(BufWriter::new(File::create(p).map_err(SentinelError::io(p))?)),
        None => None,
    };
    let mut summary = CorpusSummary {
        files: 0,
        contracts: 0,
        skipped: Vec::new(),
        total_ms: 0.0,
        mean_ms: 0.0,
        features: features.display().to_string(),
    };
    for ((file, label), result) in inputs.iter().zip(results) {
        let analyses = match result {
            Ok(a) => a,
            Err(e) => {
                log::warn!("skipping {}: {e}", file.display());
                summary.skipped.push(Skipped {
                    file: file.display().to_string(),
                    error: e.to_string(),
                });
                continue;
            }
        };
        summary.files += 1;
        for a in analyses {
            let record = a.record(*label)?;
            serde_json::to_writer(&mut feature_out, &record)?;
            feature_out.write_all(b"\n").map_err(SentinelError::io(features))?;
            if let Some(w) = pred_out.as_mut() {
                serde_json::to_writer(&mut *w, &a.rule_prediction())?;
                w.write_all(b"\n")?;
            }
            summary.contracts += 1;
            summary.total_ms += a.report.timing_ms;
        }
    }
    feature_out.flush().map_err(SentinelError::io(features))?;
    if let Some(w) = pred_out.as_mut() {
        w.flush()?;
    }
    if summary.contracts == 0 {
        bail!("no contracts processed in {}", dir.display());
    }
    summary.mean_ms = summary.total_ms / summary.contracts as f64;
    out.emit(&summary, || {
        format!(
            "wrote {} record(s) from {} file(s) to {}, {} skipped, mean {:.3} ms/contract\n",
            summary.contracts,
            summary.files,
            summary.features,
            summary.skipped.len(),
            summary.mean_ms
        )
    })
}

pub fn score(
    preds_path: &Path,
    labels_path: &Path,
    threshold: f64,
    objective: Option<Objective>,
    metrics_out: Option<&Path>,
    out: &Output,
) -> anyhow::Result<()> {
    let file = File::open(preds_path).map_err(SentinelError::io(preds_path))?;
    let preds = import_predictions(BufReader::new(file)).map_err(|source| SentinelError::Schema {
        path: preds_path.to_path_buf(),
        source,
    })?;
    let manifest = DatasetManifest::load(labels_path).map_err(SentinelError::from)?;
    let truth: BTreeMap<&str, _> = manifest
        .entries
        .iter()
        .map(|e| (e.contract_id.as_str(), e))
        .collect();

    let mut scores = Vec::with_capacity(preds.len());
    let mut labels = Vec::with_capacity(preds.len());
    let (mut risk_pred, mut risk_true) = (Vec::new(), Vec::new());
    for p in &preds {
        let entry = truth
            .get(p.contract_id.as_str())
            .ok_or_else(|| SentinelError::from(MetricsError::MissingLabel(p.contract_id.clone())))?;
        scores.push(p.score);
        labels.push(entry.vulnerable);
        for r in &p.path_risks {
            match entry.expected_path_risks.get(r.path_id) {
                Some(&t) if t != RiskLevel::Safe => {
                    risk_pred.push(r.predicted);
                    risk_true.push(t);
                }
                _ => {}
            }
        }
    }
    let pra = if risk_pred.is_empty() {
        None
    } else {
        Some(metrics::path_risk_accuracy(&risk_pred, &risk_true).map_err(SentinelError::from)?)
    };
    let mut report = match objective {
        Some(o) => metrics::optimize_threshold(&scores, &labels, o).map(|(_, r)| r),
        None => metrics::report_at(&scores, &labels, threshold, None),
    }
    .map_err(SentinelError::from)?;
    report.pra = pra;

    if let Some(path) = metrics_out {
        write_json(path, &report)?;
    }
    out.emit(&report, || {
        let cm = &report.cm;
        format!(
            "precision {:.3}  recall {:.3}  f1 {:.3}  auc {:.3}{}  threshold {}\ntp {}  fn {}  fp {}  tn {}\n",
            report.precision,
            report.recall,
            report.f1,
            report.auc_roc,
            report.pra.map(|p| format!("  pra {p:.3}")).unwrap_or_default(),
            report.threshold,
            cm.tp,
            cm.fn_,
            cm.fp,
            cm.tn
        )
    })
}

fn parse_split(spec: &str) -> anyhow::Result<SplitMode> {
    let (name, ratio) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r.parse::<f64>().context("split ratio")?)),
        None => (spec, None),
    };
    match (name.to_ascii_lowercase().as_str(), ratio) {
        ("balanced", None) => Ok(SplitMode::Balanced),
        ("imbalanced", r) => Ok(SplitMode::Imbalanced(r.unwrap_or(SplitMode::DEFAULT_IMBALANCE))),
        _ => bail!("unknown split `{spec}`, expected balanced or imbalanced[:RATIO]"),
    }
}

#[derive(Serialize)]
struct GenSummary {
    dir: String,
    seed: u64,
    entries: usize,
    vulnerable: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    train: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    test: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unused: Option<usize>,
}

pub fn generate(
    dir: &Path,
    counts: &str,
    seed: u64,
    split: Option<&str>,
    test_fraction: f64,
    out: &Output,
) -> anyhow::Result<()> {
    let counts = corpus::parse_counts(counts).map_err(SentinelError::from)?;
    let mode = split.map(parse_split).transpose()?;
    let manifest = corpus::write_corpus(dir, seed, &counts).map_err(SentinelError::from)?;
    let mut summary = GenSummary {
        dir: dir.display().to_string(),
        seed,
        entries: manifest.entries.len(),
        vulnerable: manifest.entries.iter().filter(|e| e.vulnerable).count(),
        train: None,
        test: None,
        unused: None,
    };
    if let Some(mode) = mode {
        let parts = corpus::split(&manifest, mode, test_fraction, seed).map_err(SentinelError::from)?;
        parts.train.write(&dir.join("train.json")).map_err(SentinelError::from)?;
        parts.test.write(&dir.join("test.json")).map_err(SentinelError::from)?;
        summary.train = Some(parts.train.entries.len());
        summary.test = Some(parts.test.entries.len());
        summary.unused = Some(parts.unused.len());
    }
    out.emit(&summary, || {
        let mut s = format!(
            "generated {} contract(s), {} vulnerable, in {}\n",
            summary.entries, summary.vulnerable, summary.dir
        );
        if let (Some(train), Some(test)) = (summary.train, summary.test) {
            let _ = writeln!(s, "split: {train} train, {test} test");
        }
        s
    })
}

pub fn export(files: &[PathBuf], dir: &Path, label: Option<bool>, config: &Config) -> anyhow::Result<()> {
    fs::create_dir_all(dir).map_err(SentinelError::io(dir))?;
    for file in files {
        for a in analyze_file(file, config)? {
            let id = a.report.contract_id.replace(':', "_");
            write_json(&dir.join(format!("{id}.graph.json")), &a.graph_document())?;
            write_json(&dir.join(format!("{id}.record.json")), &a.record(label)?)?;
            println!("{id}: {} node(s), {} path(s)", a.graph.nodes.len(), a.report.assessments.len());
        }
    }
    Ok(())
}
