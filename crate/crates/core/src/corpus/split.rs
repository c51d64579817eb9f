// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CorpusError, DatasetManifest, ManifestEntry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SplitMode {
    /// Equal vulnerable and safe counts in both parts.
    Balanced,
    /// Both parts hold this fraction of vulnerable entries.
    Imbalanced(f64),
}

impl SplitMode {
    pub const DEFAULT_IMBALANCE: f64 = 0.08;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub train: DatasetManifest,
    pub test: DatasetManifest,
    /// Entries left out to reach the requested class ratio.
    pub unused: Vec<ManifestEntry>,
}

fn round(x: f64) -> usize {
    x.round().max(0.0) as usize
}

/// Stratified, disjoint train/test split. `test_fraction` applies per class.
pub fn split(
    manifest: &DatasetManifest,
    mode: SplitMode,
    test_fraction: f64,
    seed: u64,
) -> Result<SplitResult, CorpusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut vuln, mut safe): (Vec<ManifestEntry>, Vec<ManifestEntry>) =
        manifest.entries.iter().cloned().partition(|e| e.vulnerable);
    vuln.shuffle(&mut rng);
    safe.shuffle(&mut rng);

    let (keep_vuln, keep_safe) = match mode {
        SplitMode::Balanced => {
            let k = vuln.len().min(safe.len());
            (k, k)
        }
        SplitMode::Imbalanced(ratio) => {
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(CorpusError::InvalidManifest(format!(
                    "vulnerable ratio {ratio} must lie strictly between 0 and 1"
                )));
            }
            let total = vuln.len() + safe.len();
            if (vuln.len() as f64) > ratio * total as f64 {
                (round(ratio * safe.len() as f64 / (1.0 - ratio)).min(vuln.len()), safe.len())
            } else {
                (vuln.len(), round(vuln.len() as f64 * (1.0 - ratio) / ratio).min(safe.len()))
            }
        }
    };

    let parts = |class: &'static str, list: &[ManifestEntry], keep: usize| {
        let test = round(keep as f64 * test_fraction);
        if keep < 2 || test == 0 || test == keep {
            return Err(CorpusError::InsufficientClass {
                class,
                needed: 2,
                available: list.len(),
            });
        }
        Ok((list[..test].to_vec(), list[test..keep].to_vec(), list[keep..].to_vec()))
    };
    let (v_test, v_train, v_rest) = parts("vulnerable", &vuln, keep_vuln)?;
    let (s_test, s_train, s_rest) = parts("safe", &safe, keep_safe)?;

    let ordered = |mut list: Vec<ManifestEntry>| {
        list.sort_by(|a, b| a.contract_id.cmp(&b.contract_id));
        list
    };
    let part = |a: Vec<ManifestEntry>, b: Vec<ManifestEntry>| {
        DatasetManifest::new(manifest.seed, ordered(a.into_iter().chain(b).collect()))
    };
    Ok(SplitResult {
        train: part(v_train, s_train),
        test: part(v_test, s_test),
        unused: ordered(v_rest.into_iter().chain(s_rest).collect()),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn manifest(vuln: usize, safe: usize) -> DatasetManifest {
        let entry = |i: usize, vulnerable: bool| ManifestEntry {
            contract_id: format!("{}_{i:04}", if vulnerable { "v" } else { "s" }),
            file: String::new(),
            vulnerable,
            expected_path_risks: Vec::new(),
            category: None,
        };
        DatasetManifest::new(
            0,
            (0..vuln)
                .map(|i| entry(i, true))
                .chain((0..safe).map(|i| entry(i, false)))
                .collect(),
        )
    }

    fn count(m: &DatasetManifest) -> (usize, usize) {
        let v = m.entries.iter().filter(|e| e.vulnerable).count();
        (v, m.entries.len() - v)
    }

    fn ids(list: &[ManifestEntry]) -> BTreeSet<String> {
        list.iter().map(|e| e.contract_id.clone()).collect()
    }

    #[test]
    fn balanced_is_stratified() {
        let s = split(&manifest(100, 100), SplitMode::Balanced, 0.2, 1).unwrap();
        assert_eq!(count(&s.train), (80, 80));
        assert_eq!(count(&s.test), (20, 20));
        assert!(s.unused.is_empty());
    }

    #[test]
    fn balanced_drops_surplus() {
        let s = split(&manifest(30, 50), SplitMode::Balanced, 0.2, 1).unwrap();
        assert_eq!(count(&s.train), (24, 24));
        assert_eq!(count(&s.test), (6, 6));
        assert_eq!(s.unused.len(), 20);
    }

    #[test]
    fn imbalanced_ratio() {
        let s = split(&manifest(40, 400), SplitMode::Imbalanced(0.08), 0.2, 1).unwrap();
        let (v, n) = count(&s.test);
        let frac = v as f64 / (v + n) as f64;
        // One item either way.
        assert!((frac - 0.08).abs() <= 1.0 / (v + n) as f64, "{v}/{}", v + n);
        let (v, n) = count(&s.train);
        assert!((v as f64 / (v + n) as f64 - 0.08).abs() <= 1.0 / (v + n) as f64);
    }

    #[test]
    fn disjoint_exhaustive_and_deterministic() {
        let m = manifest(37, 90);
        let s = split(&m, SplitMode::Imbalanced(0.2), 0.25, 5).unwrap();
        let (a, b, c) = (ids(&s.train.entries), ids(&s.test.entries), ids(&s.unused));
        assert!(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c));
        assert_eq!(a.len() + b.len() + c.len(), m.entries.len());
        assert_eq!(s, split(&m, SplitMode::Imbalanced(0.2), 0.25, 5).unwrap());
        assert_ne!(s, split(&m, SplitMode::Imbalanced(0.2), 0.25, 6).unwrap());
    }

    #[test]
    fn insufficient_class() {
        assert!(matches!(
            split(&manifest(0, 10), SplitMode::Balanced, 0.2, 0),
            Err(CorpusError::InsufficientClass { class: "vulnerable", .. })
        ));
        assert!(matches!(
            split(&manifest(1, 10), SplitMode::Balanced, 0.5, 0),
            Err(CorpusError::InsufficientClass { .. })
        ));
        assert!(split(&manifest(10, 10), SplitMode::Imbalanced(1.5), 0.2, 0).is_err());
    }
}
