// SPDX-License-Identifier: Apache-2.0

//! Deterministic labelled corpus of template contracts.

mod split;
mod templates;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::export::SCHEMA_VERSION;
use crate::risk::RiskLevel;

pub use split::{split, SplitMode, SplitResult};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error("not enough {class} entries: need {needed}, have {available}")]
    InsufficientClass {
        class: &'static str,
        needed: usize,
        available: usize,
    },
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("bad counts spec `{0}`, expected name=N[,name=N...]")]
    BadCounts(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    VulnModulo,
    #[serde(rename = "VulnKeccakRNG")]
    VulnKeccakRng,
    VulnLottery,
    VulnBlockhash,
    SafeTimeLock,
    SafeLogging,
    SafeCooldown,
    NeutralArithmetic,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::VulnModulo,
        Category::VulnKeccakRng,
        Category::VulnLottery,
        Category::VulnBlockhash,
        Category::SafeTimeLock,
        Category::SafeLogging,
        Category::SafeCooldown,
        Category::NeutralArithmetic,
    ];

    pub fn snake_name(self) -> &'static str {
        match self {
            Category::VulnModulo => "vuln_modulo",
            Category::VulnKeccakRng => "vuln_keccak_rng",
            Category::VulnLottery => "vuln_lottery",
            Category::VulnBlockhash => "vuln_blockhash",
            Category::SafeTimeLock => "safe_timelock",
            Category::SafeLogging => "safe_logging",
            Category::SafeCooldown => "safe_cooldown",
            Category::NeutralArithmetic => "neutral_arithmetic",
        }
    }

    pub fn is_vulnerable(self) -> bool {
        matches!(
            self,
            Category::VulnModulo | Category::VulnKeccakRng | Category::VulnLottery | Category::VulnBlockhash
        )
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.snake_name())
    }
}

impl FromStr for Category {
    type Err = CorpusError;

    /// Accepts the snake-case name or the variant name, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "");
        Category::ALL
            .into_iter()
            .find(|c| c.snake_name().replace('_', "") == key || format!("{c:?}").to_ascii_lowercase() == key)
            .ok_or_else(|| CorpusError::UnknownCategory(s.to_string()))
    }
}

/// Parses `vuln_modulo=3,safe_timelock=2`. An empty spec means nothing.
pub fn parse_counts(spec: &str) -> Result<BTreeMap<Category, usize>, CorpusError> {
    let mut out = BTreeMap::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, n) = part
            .split_once('=')
            .ok_or_else(|| CorpusError::BadCounts(spec.to_string()))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CorpusError::BadCounts(spec.to_string()))?;
        *out.entry(name.parse()?).or_insert(0) += n;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub contract_id: String,
    #[serde(default)]
    pub file: String,
    pub vulnerable: bool,
    /// Risk of each path, indexed by path id.
    #[serde(default)]
    pub expected_path_risks: Vec<RiskLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub counts: BTreeMap<Category, usize>,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(seed: u64, entries: Vec<ManifestEntry>) -> Self {
        let mut counts = BTreeMap::new();
        for e in &entries {
            if let Some(c) = e.category {
                *counts.entry(c).or_insert(0) += 1;
            }
        }
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            seed,
            counts,
            entries,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let manifest: Self = serde_json::from_str(&text).map_err(|source| CorpusError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if manifest.schema_version != SCHEMA_VERSION {
            return Err(CorpusError::InvalidManifest(format!(
                "unsupported schema_version {:?}",
                manifest.schema_version
            )));
        }
        Ok(manifest)
    }

    pub fn write(&self, path: &Path) -> Result<(), CorpusError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes") + "\n";
        fs::write(path, text).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Ground truth by contract id.
    pub fn labels(&self) -> BTreeMap<String, bool> {
        self.entries
            .iter()
            .map(|e| (e.contract_id.clone(), e.vulnerable))
            .collect()
    }

    /// Checks that counts add up and, given the corpus root, that files exist.
    pub fn validate(&self, root: Option<&Path>) -> Result<(), CorpusError> {
        let counted: usize = self.counts.values().sum();
        if !self.counts.is_empty() && counted != self.entries.len() {
            return Err(CorpusError::InvalidManifest(format!(
                "counts sum to {counted} but there are {} entries",
                self.entries.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(&e.contract_id) {
                return Err(CorpusError::InvalidManifest(format!(
                    "duplicate contract_id {}",
                    e.contract_id
                )));
            }
            if let Some(root) = root {
                if !root.join(&e.file).is_file() {
                    return Err(CorpusError::InvalidManifest(format!("missing file {}", e.file)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedContract {
    pub entry: ManifestEntry,
    pub source: String,
}

/// Renders every requested contract in category order. Equal seeds give
/// identical output.
pub fn generate(seed: u64, counts: &BTreeMap<Category, usize>) -> Vec<GeneratedContract> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for category in Category::ALL {
        for index in 0..counts.get(&category).copied().unwrap_or(0) {
            let rendered = templates::render(category, &mut rng);
            let contract_id = format!("{}_{index:04}", category.snake_name());
            let vulnerable = rendered.expected_path_risks.contains(&RiskLevel::High);
            debug_assert_eq!(vulnerable, category.is_vulnerable());
            out.push(GeneratedContract {
                entry: ManifestEntry {
                    file: format!("{contract_id}.sol"),
                    contract_id,
                    vulnerable,
                    expected_path_risks: rendered.expected_path_risks,
                    category: Some(category),
                },
                source: rendered.source,
            });
        }
    }
    out
}

/// Writes the generated sources and `manifest.json` into `dir`.
pub fn write_corpus(
    dir: &Path,
    seed: u64,
    counts: &BTreeMap<Category, usize>,
) -> Result<DatasetManifest, CorpusError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CorpusError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let generated = generate(seed, counts);
    let mut entries = Vec::with_capacity(generated.len());
    for g in generated {
        let path = dir.join(&g.entry.file);
        fs::write(&path, &g.source).map_err(io(&path))?;
        entries.push(g.entry);
    }
    let mut manifest = DatasetManifest::new(seed, entries);
    manifest.counts = Category::ALL
        .into_iter()
        .map(|c| (c, counts.get(&c).copied().unwrap_or(0)))
        .collect();
    manifest.write(&dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}
