// SPDX-License-Identifier: Apache-2.0

//! Classification metrics over prediction/label pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::export::{PredictionRecord, SCHEMA_VERSION};
use crate::risk::RiskLevel;

/// Minimum precision for [`Objective::RecallAtPrecisionFloor`].
pub const PRECISION_FLOOR: f64 = 0.5;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no ground-truth label for contract {0}")]
    MissingLabel(String),
    #[error("labels contain only one class")]
    DegenerateLabels,
    #[error("no paths to score")]
    EmptyPaths,
    #[error("length mismatch: {0} predictions vs {1} labels")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fn_: u64, fp: u64, tn: u64) -> Self {
        Self { tp, fn_, fp, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }

    fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (false, true) => self.fn_ += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc_roc: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pra: Option<f64>,
    pub threshold: f64,
    pub cm: ConfusionMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    F1,
    RecallAtPrecisionFloor,
}

/// Confusion counts of scored records against ground truth by contract id.
pub fn confusion(
    preds: &[PredictionRecord],
    truth: &BTreeMap<String, bool>,
    threshold: f64,
) -> Result<ConfusionMatrix, MetricsError> {
    let mut cm = ConfusionMatrix::default();
    for p in preds {
        let actual = *truth
            .get(&p.contract_id)
            .ok_or_else(|| MetricsError::MissingLabel(p.contract_id.clone()))?;
        cm.add(p.score >= threshold, actual);
    }
    Ok(cm)
}

pub fn confusion_from_scores(scores: &[f64], labels: &[bool], threshold: f64) -> ConfusionMatrix {
    let mut cm = ConfusionMatrix::default();
    for (&s, &y) in scores.iter().zip(labels) {
        cm.add(s >= threshold, y);
    }
    cm
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision, recall and their harmonic mean; empty denominators give 0.
pub fn precision_recall_f1(cm: &ConfusionMatrix) -> (f64, f64, f64) {
    let p = ratio(cm.tp, cm.tp + cm.fp);
    let r = ratio(cm.tp, cm.tp + cm.fn_);
    let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
    (p, r, f1)
}

fn check_classes(labels: &[bool]) -> Result<(), MetricsError> {
    let pos = labels.iter().filter(|&&y| y).count();
    if pos == 0 || pos == labels.len() {
        Err(MetricsError::DegenerateLabels)
    } else {
        Ok(())
    }
}

/// Area under the ROC curve as the Mann-Whitney statistic with tied
/// scores sharing their average rank.
pub fn auc_roc(scores: &[f64], labels: &[bool]) -> Result<f64, MetricsError> {
    if scores.len() != labels.len() {
        return Err(MetricsError::LengthMismatch(scores.len(), labels.len()));
    }
    check_classes(labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Ranks i+1..=j+1 averaged.
        let avg = (i + j + 2) as f64 / 2.0;
        rank_sum += avg * order[i..=j].iter().filter(|&&k| labels[k]).count() as f64;
        i = j + 1;
    }
    let pos = labels.iter().filter(|&&y| y).count() as f64;
    let neg = labels.len() as f64 - pos;
    Ok((rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg))
}

/// Fraction of paths whose predicted risk class equals the reference.
pub fn path_risk_accuracy(pred: &[RiskLevel], truth: &[RiskLevel]) -> Result<f64, MetricsError> {
    if pred.len() != truth.len() {
        return Err(MetricsError::LengthMismatch(pred.len(), truth.len()));
    }
    if pred.is_empty() {
        return Err(MetricsError::EmptyPaths);
    }
    let hits = pred.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / pred.len() as f64)
}

/// Full report at a fixed threshold.
pub fn report_at(
    scores: &[f64],
    labels: &[bool],
    threshold: f64,
    pra: Option<f64>,
) -> Result<MetricsReport, MetricsError> {
    let auc = auc_roc(scores, labels)?;
    let cm = confusion_from_scores(scores, labels, threshold);
    let (precision, recall, f1) = precision_recall_f1(&cm);
    Ok(MetricsReport {
        schema_version: SCHEMA_VERSION.to_string(),
        precision,
        recall,
        f1,
        auc_roc: auc,
        pra,
        threshold,
        cm,
    })
}

/// Midpoints between consecutive distinct scores, plus 0.05 and 0.5, ascending.
pub fn candidate_thresholds(scores: &[f64]) -> Vec<f64> {
    let mut uniq: Vec<f64> = scores.to_vec();
    uniq.sort_by(f64::total_cmp);
    uniq.dedup();
    let mut out: Vec<f64> = uniq.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    out.extend([0.05, DEFAULT_THRESHOLD]);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Sweeps [`candidate_thresholds`] and keeps the best, ties going to the
/// lower threshold.
///
/// `RecallAtPrecisionFloor` maximizes recall among thresholds whose precision
/// reaches [`PRECISION_FLOOR`]; when none does, it maximizes precision.
pub fn optimize_threshold(
    scores: &[f64],
    labels: &[bool],
    objective: Objective,
) -> Result<(f64, MetricsReport), MetricsError> {
    if scores.len() != labels.len() {
        return Err(MetricsError::LengthMismatch(scores.len(), labels.len()));
    }
    check_classes(labels)?;
    let candidates = candidate_thresholds(scores);
    let stats: Vec<(f64, (f64, f64, f64))> = candidates
        .iter()
        .map(|&t| (t, precision_recall_f1(&confusion_from_scores(scores, labels, t))))
        .collect();
    let floor_met = stats.iter().any(|(_, (p, _, _))| *p >= PRECISION_FLOOR);
    let value = |(p, r, f1): (f64, f64, f64)| match objective {
        Objective::F1 => f1,
        Objective::RecallAtPrecisionFloor if floor_met => {
            if p >= PRECISION_FLOOR {
                r
            } else {
                -1.0
            }
        }
        Objective::RecallAtPrecisionFloor => p,
    };
    let mut best = stats[0];
    for &s in &stats[1..] {
        if value(s.1) > value(best.1) {
            best = s;
        }
    }
    let report = report_at(scores, labels, best.0, None)?;
    Ok((best.0, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn confusion_examples() {
        let preds = vec![
            PredictionRecord::new("v", 0.9, 0.5, vec![]),
            PredictionRecord::new("s", 0.2, 0.5, vec![]),
        ];
        let truth = BTreeMap::from([("v".to_string(), true), ("s".to_string(), false)]);
        assert_eq!(confusion(&preds, &truth, 0.5).unwrap(), ConfusionMatrix::new(1, 0, 0, 1));
        let missing = BTreeMap::from([("v".to_string(), true)]);
        assert_eq!(
            confusion(&preds, &missing, 0.5),
            Err(MetricsError::MissingLabel("s".into()))
        );
        let cm = confusion_from_scores(&[0.0; 7], &[true; 7], 0.5);
        assert_eq!(cm.fn_, 7);
    }

    #[test]
    fn tool_comparison_rows() {
        let rows = [
            ((37, 5, 4, 20), (0.902, 0.881, 0.892)),
            ((46, 203, 101, 514), (0.313, 0.185, 0.232)),
            ((43, 206, 72, 543), (0.374, 0.172, 0.236)),
            ((29, 12, 25, 598), (0.537, 0.707, 0.611)),
        ];
        for ((tp, fn_, fp, tn), (ep, er, ef)) in rows {
            let (p, r, f1) = precision_recall_f1(&ConfusionMatrix::new(tp, fn_, fp, tn));
            assert!(close(p, ep, 1e-3) && close(r, er, 1e-3) && close(f1, ef, 1e-3), "{p} {r} {f1}");
        }
        assert_eq!(precision_recall_f1(&ConfusionMatrix::new(0, 0, 0, 10)), (0.0, 0.0, 0.0));
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc_roc(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]), Ok(1.0));
        assert_eq!(auc_roc(&[0.1, 0.2, 0.8, 0.9], &[true, true, false, false]), Ok(0.0));
        assert_eq!(auc_roc(&[0.4; 6], &[true, false, true, false, false, true]), Ok(0.5));
        assert_eq!(auc_roc(&[0.3, 0.7], &[true, true]), Err(MetricsError::DegenerateLabels));
        // One positive tied with one of two negatives: (1 + 0.5) / 2.
        assert_eq!(auc_roc(&[0.2, 0.5, 0.5], &[false, false, true]), Ok(0.75));
    }

    /// Trapezoidal integration of the ROC curve over distinct thresholds.
    fn auc_trapezoid(scores: &[f64], labels: &[bool]) -> f64 {
        let mut cuts: Vec<f64> = scores.to_vec();
        cuts.sort_by(|a, b| b.total_cmp(a));
        cuts.dedup();
        let pos = labels.iter().filter(|&&y| y).count() as f64;
        let neg = labels.len() as f64 - pos;
        let mut points = vec![(0.0, 0.0)];
        for t in cuts {
            let cm = confusion_from_scores(scores, labels, t);
            points.push((cm.fp as f64 / neg, cm.tp as f64 / pos));
        }
        points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
            .sum()
    }

    #[test]
    fn auc_matches_trapezoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = 20;
            // Coarse scores force ties.
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 8.0).collect();
            let mut labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            labels[0] = true;
            labels[1] = false;
            let a = auc_roc(&scores, &labels).unwrap();
            assert!(close(a, auc_trapezoid(&scores, &labels), 1e-9));
        }
    }

    #[test]
    fn pra_examples() {
        use RiskLevel::*;
        assert_eq!(path_risk_accuracy(&[High, Low], &[High, Low]), Ok(1.0));
        assert_eq!(
            path_risk_accuracy(&[High, Low, Medium, High], &[High, Low, Medium, Low]),
            Ok(0.75)
        );
        assert_eq!(path_risk_accuracy(&[], &[]), Err(MetricsError::EmptyPaths));
        assert_eq!(
            path_risk_accuracy(&[High], &[]),
            Err(MetricsError::LengthMismatch(1, 0))
        );
    }

    #[test]
    fn separable_threshold() {
        let scores = [0.1, 0.2, 0.3, 0.7, 0.8];
        let labels = [false, false, false, true, true];
        let (t, rep) = optimize_threshold(&scores, &labels, Objective::F1).unwrap();
        assert!(t > 0.3 && t <= 0.7);
        assert_eq!(rep.f1, 1.0);
    }

    #[test]
    fn sweep_matches_exhaustive_oracle() {
        let scores = [0.05, 0.12, 0.33, 0.33, 0.41, 0.58, 0.62, 0.77, 0.9, 0.95];
        let labels = [false, true, false, true, false, true, false, true, true, false];
        let (t, rep) = optimize_threshold(&scores, &labels, Objective::F1).unwrap();
        // Oracle: every midpoint of the sorted distinct scores, plus 0.05 and 0.5.
        let mut best = (f64::NAN, -1.0);
        let mut cuts: Vec<f64> = vec![0.05, 0.5];
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                let (a, b) = (scores[i], scores[j]);
                if a < b && !scores.iter().any(|&s| s > a && s < b) {
                    cuts.push((a + b) / 2.0);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        for c in cuts {
            let tp = (0..10).filter(|&k| scores[k] >= c && labels[k]).count() as f64;
            let fp = (0..10).filter(|&k| scores[k] >= c && !labels[k]).count() as f64;
            let fn_ = (0..10).filter(|&k| scores[k] < c && labels[k]).count() as f64;
            let f1 = 2.0 * tp / (2.0 * tp + fp + fn_);
            if f1 > best.1 {
                best = (c, f1);
            }
        }
        assert_eq!(t, best.0);
        assert!(close(rep.f1, best.1, 1e-12));
    }

    #[test]
    fn objectives_disagree() {
        // Max F1 sits at 0.75 (2 TP, 0 FP); recall with precision >= 0.5
        // reaches 1.0 only by admitting the 0.6 negative at 0.35.
        let scores = [0.2, 0.3, 0.4, 0.6, 0.8, 0.9];
        let labels = [false, false, true, false, true, true];
        let (tf, f) = optimize_threshold(&scores, &labels, Objective::F1).unwrap();
        let (tr, r) = optimize_threshold(&scores, &labels, Objective::RecallAtPrecisionFloor).unwrap();
        assert_ne!(tf, tr);
        assert!(tr < tf);
        assert_eq!(r.recall, 1.0);
        assert!(r.precision >= PRECISION_FLOOR);
        assert!(f.f1 >= r.f1);
    }

    #[test]
    fn recall_objective_falls_back_to_precision() {
        let scores = [0.9, 0.8, 0.7, 0.1];
        let labels = [false, false, false, true];
        let (t, rep) = optimize_threshold(&scores, &labels, Objective::RecallAtPrecisionFloor).unwrap();
        assert!(rep.precision < PRECISION_FLOOR);
        assert!(t <= 0.4);
        assert_eq!(rep.precision, 0.25);
    }

    #[test]
    fn degenerate_optimization() {
        assert_eq!(
            optimize_threshold(&[0.2, 0.4], &[false, false], Objective::F1).unwrap_err(),
            MetricsError::DegenerateLabels
        );
    }

    #[test]
    fn report_json_uses_fn_key() {
        let rep = report_at(&[0.9, 0.1], &[true, false], 0.5, Some(1.0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["cm"]["fn"], 0);
        assert_eq!(v["pra"], 1.0);
    }

    fn scored() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
        (2usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec(0.0f64..=1.0, n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn bounded_and_consistent((scores, labels) in scored(), t in 0.0f64..=1.0) {
            let cm = confusion_from_scores(&scores, &labels, t);
            prop_assert_eq!(cm.total() as usize, scores.len());
            let (p, r, f1) = precision_recall_f1(&cm);
            for v in [p, r, f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            let alt = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn_);
            prop_assert!((f1 - alt).abs() <= 1e-12);
        }

        #[test]
        fn auc_invariant_under_monotone_maps((scores, labels) in scored()) {
            prop_assume!(labels.iter().any(|&y| y) && labels.iter().any(|&y| !y));
            let a = auc_roc(&scores, &labels).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            let mapped: Vec<f64> = scores.iter().map(|s| (3.0 * s).exp() + 1.0).collect();
            prop_assert!((a - auc_roc(&mapped, &labels).unwrap()).abs() <= 1e-12);
        }
    }
}
