//! Experiment harness: dataset ingestion, distribution factory, attack runs
//! across dimensions, and report emission.
//!
//! A declarative config names a CSV dataset, one or more dimension setups
//! (domain size plus source columns), and the query distributions to attack
//! under. Each (distribution, dimension) cell ingests the data, builds the
//! distribution, runs the attack, and contributes one row per constraint
//! round to the report. Reports serialize as a fixed-column CSV plus a JSON
//! mirror carrying plot-ready series.

use crate::attack::{run_attack, AttackConfig, FrequencySource, SelectorKind};
use crate::domain::{Database, DomainSpec, RecordId, Value};
use crate::error::{Error, Result};
use crate::flatten::flatten_equidistant;
use crate::prob::{sample_leakage, QueryDistribution};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Query distribution families used in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    /// Every query issued with equal probability.
    Uniform,
    /// Every query given a seeded random integer weight from 1 through 10.
    Random,
    /// Equidistant-pair flattening applied to the uniform distribution.
    Flattened,
}

impl DistributionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistributionKind::Uniform => "uniform",
            DistributionKind::Random => "random",
            DistributionKind::Flattened => "flattened",
        }
    }
}

impl std::str::FromStr for DistributionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(DistributionKind::Uniform),
            "random" => Ok(DistributionKind::Random),
            "flattened" => Ok(DistributionKind::Flattened),
            other => Err(Error::Config(format!("unknown distribution `{other}`"))),
        }
    }
}

/// Builds one of the experiment distributions over a domain. `seed` only
/// matters for [`DistributionKind::Random`]; identical seeds reproduce
/// identical weights.
pub fn make_distribution(
    kind: DistributionKind,
    domain: DomainSpec,
    seed: u64,
    cap: u128,
) -> Result<QueryDistribution> {
    match kind {
        DistributionKind::Uniform => QueryDistribution::uniform(domain, cap),
        DistributionKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let weights: Vec<_> = crate::domain::query_universe(&domain, cap)?
                .into_iter()
                .map(|q| {
                    let w: i64 = rng.gen_range(1..=10);
                    (q, BigRational::from_integer(BigInt::from(w)))
                })
                .collect();
            QueryDistribution::new(domain, weights)
        }
        DistributionKind::Flattened => {
            let uniform = QueryDistribution::uniform(domain, cap)?;
            flatten_equidistant(&uniform, cap)
        }
    }
}

/// How raw column values map to grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discretization {
    /// Equal-width bins over the column's observed `[min, max]`:
    /// `bin(x) = clamp(ceil((x - min) / (max - min) * N), 1, N)`. A constant
    /// column collapses to bin 1.
    #[default]
    EqualWidth,
}

fn bin_value(d: Discretization, x: f64, min: f64, max: f64, n: u32) -> u32 {
    match d {
        Discretization::EqualWidth => {
            if max <= min {
                return 1;
            }
            let raw = ((x - min) / (max - min) * n as f64).ceil() as i64;
            raw.clamp(1, n as i64) as u32
        }
    }
}

/// Loads a CSV dataset into a database: selected columns are discretized per
/// dimension, rows with already-seen value vectors are skipped, and ingestion
/// stops after `record_cap` distinct records. Record ids carry the 1-based
/// data row number. Returns the database and any warnings (constant columns,
/// fewer distinct rows than requested).
pub fn ingest_dataset(
    path: &Path,
    columns: &[String],
    domain: DomainSpec,
    record_cap: usize,
    discretization: Discretization,
) -> Result<(Database, Vec<String>)> {
    if columns.len() != domain.k {
        return Err(Error::Config(format!(
            "{} columns selected for a {}-dimensional domain",
            columns.len(),
            domain.k
        )));
    }
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let mut indices = Vec::with_capacity(columns.len());
    for col in columns {
        let idx = headers
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| Error::MissingColumn(col.clone()))?;
        indices.push(idx);
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        let mut parsed = Vec::with_capacity(indices.len());
        for (&idx, col) in indices.iter().zip(columns) {
            let cell = record.get(idx).unwrap_or("");
            let x: f64 = cell.trim().parse().map_err(|_| Error::NonNumericCell {
                column: col.clone(),
                value: cell.to_string(),
                row: row_no + 1,
            })?;
            parsed.push(x);
        }
        rows.push(parsed);
    }

    let mut warnings = Vec::new();
    let mut ranges = Vec::with_capacity(columns.len());
    for (dim, col) in columns.iter().enumerate() {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for r in &rows {
            min = min.min(r[dim]);
            max = max.max(r[dim]);
        }
        if !rows.is_empty() && max <= min {
            warnings.push(format!("column `{col}` is constant; all rows bin to 1"));
        }
        ranges.push((min, max));
    }

    let mut entries: Vec<(RecordId, Value)> = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for (row_no, r) in rows.iter().enumerate() {
        if entries.len() >= record_cap {
            break;
        }
        let coords: Vec<u32> = r
            .iter()
            .zip(&ranges)
            .map(|(&x, &(min, max))| bin_value(discretization, x, min, max, domain.n))
            .collect();
        if seen.insert(coords.clone()) {
            entries.push((format!("r{:05}", row_no + 1), Value::new(coords)));
        }
    }
    if entries.len() < record_cap {
        warnings.push(format!(
            "dataset yielded {} distinct records, fewer than the requested {record_cap}",
            entries.len()
        ));
    }
    if entries.is_empty() {
        return Err(Error::Config("dataset produced no records".into()));
    }
    let db = Database::new(domain, entries)?;
    Ok((db, warnings))
}

// --- database files: `id,coord_1,...,coord_k` CSV with header -----------

pub fn write_database(path: &Path, db: &Database) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["id".to_string()];
    for i in 1..=db.domain().k {
        header.push(format!("coord_{i}"));
    }
    w.write_record(&header)?;
    for (id, v) in db.iter() {
        let mut row = vec![id.clone()];
        row.extend(v.coords().iter().map(u32::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_database(path: &Path, domain: DomainSpec) -> Result<Database> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut entries = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != domain.k + 1 {
            return Err(Error::Parse {
                line: row_no + 2,
                msg: format!("expected id plus {} coordinates", domain.k),
            });
        }
        let id = record.get(0).unwrap().to_string();
        let mut coords = Vec::with_capacity(domain.k);
        for i in 0..domain.k {
            let cell = record.get(i + 1).unwrap();
            let c: u32 = cell.trim().parse().map_err(|_| Error::Parse {
                line: row_no + 2,
                msg: format!("bad coordinate `{cell}`"),
            })?;
            coords.push(c);
        }
        entries.push((id, Value::checked(coords, &domain)?));
    }
    Database::new(domain, entries)
}

// --- experiment configuration -------------------------------------------

fn default_record_cap() -> usize {
    10
}

fn default_selector() -> SelectorKind {
    SelectorKind::Full
}

fn default_epsilon() -> String {
    "1/1000".to_string()
}

/// One domain setup: the per-axis size and the dataset columns feeding each
/// dimension (`k` is the number of columns).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionConfig {
    pub n: u32,
    pub columns: Vec<String>,
}

/// Frequency mode for the attack.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeConfig {
    #[default]
    Exact,
    Empirical {
        samples: usize,
        #[serde(default = "default_epsilon")]
        epsilon: String,
        #[serde(default)]
        seed: u64,
    },
}

/// Declarative experiment description, usually loaded from a TOML file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub distributions: Vec<DistributionKind>,
    pub dimensions: Vec<DimensionConfig>,
    #[serde(default = "default_record_cap")]
    pub record_cap: usize,
    #[serde(default = "default_selector")]
    pub selector: SelectorKind,
    /// Constraint rounds to run; defaults to `2k` per cell.
    #[serde(default)]
    pub t_max: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default)]
    pub output_csv: Option<PathBuf>,
    #[serde(default)]
    pub output_json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Hash of the canonical JSON form, recorded in reports for provenance.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex_string(&digest)
    }

    pub fn validate(&self) -> Result<()> {
        if self.distributions.is_empty() || self.dimensions.is_empty() {
            return Err(Error::Config(
                "need at least one distribution and one dimension".into(),
            ));
        }
        for dim in &self.dimensions {
            if dim.columns.is_empty() {
                return Err(Error::Config("dimension with no columns".into()));
            }
            if let Some(t) = self.t_max {
                if t > 2 * dim.columns.len() {
                    return Err(Error::Config(format!(
                        "t_max {t} exceeds 2k = {} for a {}-dimensional cell",
                        2 * dim.columns.len(),
                        dim.columns.len()
                    )));
                }
            }
        }
        if let ModeConfig::Empirical {
            samples, epsilon, ..
        } = &self.mode
        {
            if *samples == 0 {
                return Err(Error::Config("empirical mode needs samples >= 1".into()));
            }
            parse_rational(epsilon)?;
        }
        Ok(())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Config(format!("bad rational `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

// --- report ---------------------------------------------------------------

/// One emitted row: a (distribution, dimension, round) measurement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub distribution: String,
    pub k: usize,
    pub t: usize,
    pub matches: u128,
    /// Exact count, or `>bound` when the solver overflowed.
    pub reconstructions: String,
    pub elapsed_ms: u128,
}

/// Per-cell outcome; failed cells carry the error and keep whatever rows
/// completed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellResult {
    pub distribution: String,
    pub k: usize,
    pub n: u32,
    pub record_count: usize,
    pub rows: Vec<ReportRow>,
    pub error: Option<String>,
}

/// Full experiment outcome with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config_hash: String,
    pub seed: u64,
    pub cells: Vec<CellResult>,
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    pub fn rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.cells.iter().flat_map(|c| c.rows.iter())
    }

    /// Rows with timings stripped, for determinism comparisons.
    pub fn canonical_rows(&self) -> Vec<(String, usize, usize, u128, String)> {
        self.rows()
            .map(|r| {
                (
                    r.distribution.clone(),
                    r.k,
                    r.t,
                    r.matches,
                    r.reconstructions.clone(),
                )
            })
            .collect()
    }

    /// Fixed-column CSV: distribution,k,t,matches,reconstructions,elapsed_ms.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("distribution,k,t,matches,reconstructions,elapsed_ms\n");
        for r in self.rows() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.distribution, r.k, r.t, r.matches, r.reconstructions, r.elapsed_ms
            ));
        }
        out
    }

    /// JSON mirror: the report itself plus per-cell `t -> reconstructions`
    /// series ready for plotting.
    pub fn to_json_string(&self) -> String {
        let series: Vec<serde_json::Value> = self
            .cells
            .iter()
            .map(|c| {
                serde_json::json!({
                    "label": format!("{}/k={}", c.distribution, c.k),
                    "points": c.rows.iter().map(|r| {
                        serde_json::json!({"t": r.t, "matches": r.matches,
                                           "reconstructions": r.reconstructions})
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "config_hash": self.config_hash,
            "seed": self.seed,
            "cells": self.cells,
            "series": series,
            "warnings": self.warnings,
        });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

/// Writes the report to the given paths (either may be absent). Emission is
/// deterministic: the same report always produces identical bytes.
pub fn emit_report(
    report: &ExperimentReport,
    csv_path: Option<&Path>,
    json_path: Option<&Path>,
) -> Result<()> {
    if let Some(p) = csv_path {
        let mut f = std::fs::File::create(p)?;
        f.write_all(report.to_csv_string().as_bytes())?;
    }
    if let Some(p) = json_path {
        let mut f = std::fs::File::create(p)?;
        f.write_all(report.to_json_string().as_bytes())?;
    }
    Ok(())
}

/// Runs every (dimension, distribution) cell: ingests the dataset, builds
/// the distribution, runs the attack, and collects one row per round. A
/// failing cell is flagged and the remaining cells still run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let config_hash = cfg.hash();
    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    let attack_config = AttackConfig::default();

    for dim in &cfg.dimensions {
        let k = dim.columns.len();
        let domain = DomainSpec::new(dim.n, k)?;
        let ingested = ingest_dataset(
            &cfg.dataset,
            &dim.columns,
            domain,
            cfg.record_cap,
            cfg.discretization,
        );
        let (db, mut ingest_warnings) = match ingested {
            Ok(x) => x,
            Err(e) => {
                for d in &cfg.distributions {
                    cells.push(CellResult {
                        distribution: d.as_str().to_string(),
                        k,
                        n: dim.n,
                        record_count: 0,
                        rows: Vec::new(),
                        error: Some(e.to_string()),
                    });
                }
                continue;
            }
        };
        warnings.append(&mut ingest_warnings);

        for &dist in &cfg.distributions {
            match run_cell(cfg, &attack_config, dist, domain, &db) {
                Ok(rows) => cells.push(CellResult {
                    distribution: dist.as_str().to_string(),
                    k,
                    n: dim.n,
                    record_count: db.len(),
                    rows,
                    error: None,
                }),
                Err(e) => cells.push(CellResult {
                    distribution: dist.as_str().to_string(),
                    k,
                    n: dim.n,
                    record_count: db.len(),
                    rows: Vec::new(),
                    error: Some(e.to_string()),
                }),
            }
        }
    }

    Ok(ExperimentReport {
        config_hash,
        seed: cfg.seed,
        cells,
        warnings,
    })
}

fn run_cell(
    cfg: &ExperimentConfig,
    attack_config: &AttackConfig,
    dist: DistributionKind,
    domain: DomainSpec,
    db: &Database,
) -> Result<Vec<ReportRow>> {
    let qd = make_distribution(dist, domain, cfg.seed, attack_config.query_cap)?;
    let t_max = cfg.t_max.unwrap_or(2 * domain.k);
    let report = match &cfg.mode {
        ModeConfig::Exact => {
            let source = FrequencySource::Exact { db };
            run_attack(&qd, &source, cfg.selector, t_max, attack_config)?
        }
        ModeConfig::Empirical {
            samples,
            epsilon,
            seed,
        } => {
            let trace = sample_leakage(&qd, db, *samples, *seed)?;
            let source = FrequencySource::Empirical {
                trace: &trace,
                epsilon: parse_rational(epsilon)?,
            };
            run_attack(&qd, &source, cfg.selector, t_max, attack_config)?
        }
    };
    Ok(report
        .rounds
        .iter()
        .map(|r| ReportRow {
            distribution: dist.as_str().to_string(),
            k: domain.k,
            t: r.t,
            matches: r.matches,
            reconstructions: r.reconstructions.to_string(),
            elapsed_ms: r.elapsed_ms,
        })
        .collect())
}
