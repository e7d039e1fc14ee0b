//! Deterministic release builds and release diffing.
//!
//! A build runs validate -> freeze references -> score -> analyze -> emit.
//! Every output is canonical JSON or CSV; the manifest records a SHA-256
//! digest per file plus the dataset and config hashes, so two builds from
//! identical inputs are byte-identical and verifiable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::canonical::{self, fmt_num, fmt_opt, sha256_hex};
use crate::config::RunConfig;
use crate::error::Error;
use crate::model::{CodeValue, Dataset, Pillar};
use crate::normalize::CountReferenceTable;
use crate::parse::parse_dataset;
use crate::reliability::reliability_report;
use crate::score::{check_floors, score_dataset, FloorVerdict, ScoredDataset, SubjectScore};
use crate::sensitivity::sensitivity_report;
use crate::validate::{error_count, validate_dataset, Violation};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseManifest {
    pub version: String,
    pub cutoff_date: chrono::NaiveDate,
    pub config_hash: String,
    pub dataset_hash: String,
    pub tool_version: String,
    pub seed_registry: BTreeMap<String, u64>,
    /// file name -> SHA-256 hex digest, for every emitted file but this one.
    pub files: BTreeMap<String, String>,
}

/// Everything a build produces, before any file is written.
pub struct ReleaseOutput {
    pub manifest: ReleaseManifest,
    pub scored: ScoredDataset,
    pub violations: Vec<Violation>,
    pub floor_verdicts: Vec<FloorVerdict>,
    files: BTreeMap<String, Vec<u8>>,
}

/// Validate, freeze, score, analyze. Fails without touching the filesystem
/// when the dataset has blocking violations.
pub fn compute_release(dataset_dir: &Path, config: &RunConfig) -> Result<ReleaseOutput, Error> {
    config.check()?;
    let dataset = parse_dataset(dataset_dir)?;
    let violations = validate_dataset(&dataset, config.cutoff_date);
    let n_errors = error_count(&violations);
    if n_errors > 0 {
        return Err(Error::ValidationFailed { n_errors });
    }
    compute_release_from(&dataset, config, violations, None)
}

/// Same as [`compute_release`] but scoring against a frozen reference table
/// from a prior release.
pub fn compute_rescore(
    dataset_dir: &Path,
    config: &RunConfig,
    frozen: CountReferenceTable,
) -> Result<ReleaseOutput, Error> {
    config.check()?;
    let dataset = parse_dataset(dataset_dir)?;
    let violations = validate_dataset(&dataset, config.cutoff_date);
    let n_errors = error_count(&violations);
    if n_errors > 0 {
        return Err(Error::ValidationFailed { n_errors });
    }
    compute_release_from(&dataset, config, violations, Some(frozen))
}

fn compute_release_from(
    dataset: &Dataset,
    config: &RunConfig,
    violations: Vec<Violation>,
    frozen: Option<CountReferenceTable>,
) -> Result<ReleaseOutput, Error> {
    let scored = score_dataset(dataset, frozen)?;

    let indicator_ids: Vec<String> = dataset.indicators.iter().map(|i| i.id.clone()).collect();
    let floor_verdicts: Vec<FloorVerdict> = scored
        .subject_scores
        .iter()
        .map(|s| check_floors(s, &config.floors, &scored.values[&s.subject_id], &indicator_ids))
        .collect::<Result<_, _>>()?;

    let reliability = reliability_report(
        dataset,
        &scored.c_ref,
        config.sample_fraction,
        config.sampling_seed,
    )?;
    let sensitivity = sensitivity_report(
        dataset,
        &scored,
        config.n_resamples,
        config.bootstrap_seed,
        config.n_bins,
    )?;

    let mut files: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut put = |name: &str, bytes: Vec<u8>| {
        files.insert(name.to_string(), bytes);
    };
    put("c_ref.json", canonical::to_canonical_string(&scored.c_ref)?.into_bytes());
    put(
        "scores.json",
        canonical::to_canonical_string(&scored.subject_scores)?.into_bytes(),
    );
    put("scores.csv", scores_csv(&scored.subject_scores).into_bytes());
    put(
        "providers.json",
        canonical::to_canonical_string(&scored.provider_scores)?.into_bytes(),
    );
    put(
        "floor_verdicts.json",
        canonical::to_canonical_string(&floor_verdicts)?.into_bytes(),
    );
    put(
        "reliability.json",
        canonical::to_canonical_string(&reliability)?.into_bytes(),
    );
    put(
        "sensitivity.json",
        canonical::to_canonical_string(&sensitivity)?.into_bytes(),
    );
    put(
        "coverage_dependence.csv",
        coverage_csv(&sensitivity.coverage_dependence).into_bytes(),
    );
    put(
        "violations.json",
        canonical::to_canonical_string(&violations)?.into_bytes(),
    );
    put(
        "adjudicated.json",
        canonical::to_canonical_string(&scored.adjudicated)?.into_bytes(),
    );

    let dataset_hash = sha256_hex(canonical::to_canonical_string(dataset)?.as_bytes());
    let config_hash = sha256_hex(canonical::to_canonical_string(config)?.as_bytes());
    let manifest = ReleaseManifest {
        version: config.version.clone(),
        cutoff_date: config.cutoff_date,
        config_hash,
        dataset_hash,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed_registry: [
            ("sampling".to_string(), config.sampling_seed),
            ("bootstrap".to_string(), config.bootstrap_seed),
        ]
        .into_iter()
        .collect(),
        files: files
            .iter()
            .map(|(name, bytes)| (name.clone(), sha256_hex(bytes)))
            .collect(),
    };

    Ok(ReleaseOutput {
        manifest,
        scored,
        violations,
        floor_verdicts,
        files,
    })
}

/// Build a release directory. Validation errors abort before anything is
/// written; rerunning over an existing directory overwrites with identical
/// bytes.
pub fn build_release(
    dataset_dir: &Path,
    out_dir: &Path,
    config: &RunConfig,
) -> Result<ReleaseManifest, Error> {
    let output = compute_release(dataset_dir, config)?;
    write_release(&output, out_dir)?;
    Ok(output.manifest)
}

pub fn write_release(output: &ReleaseOutput, out_dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(out_dir)?;
    for (name, bytes) in &output.files {
        fs::write(out_dir.join(name), bytes)?;
    }
    canonical::write_canonical(&out_dir.join(MANIFEST_FILE), &output.manifest)?;
    Ok(())
}

fn scores_csv(scores: &[SubjectScore]) -> String {
    let mut out = String::from(
        "subject_id,pillar,s_evid,s_known,s_opt,coverage,coverage_min,coverage_max,n_indicators,n_known\n",
    );
    for s in scores {
        for p in &s.pillars {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                s.subject_id,
                p.pillar,
                fmt_num(p.s_evid),
                fmt_opt(p.s_known),
                fmt_num(p.s_opt),
                fmt_num(p.coverage),
                fmt_num(p.coverage_min),
                fmt_num(p.coverage_max),
                p.n_indicators,
                p.n_known,
            ));
        }
        let n_total: usize = s.pillars.iter().map(|p| p.n_indicators).sum();
        let n_known: usize = s.pillars.iter().map(|p| p.n_known).sum();
        out.push_str(&format!(
            "{},overall,{},{},{},{},{},{},{},{}\n",
            s.subject_id,
            fmt_num(s.aipi_evid),
            fmt_opt(s.aipi_known),
            fmt_num(s.aipi_opt),
            fmt_num(s.mean_coverage()),
            fmt_num(s.pillars.iter().map(|p| p.coverage_min).sum::<f64>() / 4.0),
            fmt_num(s.pillars.iter().map(|p| p.coverage_max).sum::<f64>() / 4.0),
            n_total,
            n_known,
        ));
    }
    out
}

fn coverage_csv(bins: &[crate::sensitivity::CoverageBin]) -> String {
    let mut out = String::from("bin,count,mean_evid,mean_known\n");
    for b in bins {
        out.push_str(&format!(
            "{},{},{},{}\n",
            b.bin,
            b.count,
            fmt_opt(b.mean_evid),
            fmt_opt(b.mean_known),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// release diffing

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorChange {
    pub subject_id: String,
    pub indicator_id: String,
    pub from: Option<CodeValue>,
    pub to: Option<CodeValue>,
    pub evidence_refs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreDelta {
    pub subject_id: String,
    /// Pillar id or "overall".
    pub level: String,
    /// "evid", "known", or "opt".
    pub treatment: String,
    pub from: Option<f64>,
    pub to: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageDelta {
    pub subject_id: String,
    pub pillar: Pillar,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseDiff {
    pub version_a: String,
    pub version_b: String,
    pub metadata_changes: Vec<String>,
    pub indicator_changes: Vec<IndicatorChange>,
    pub score_deltas: Vec<ScoreDelta>,
    pub coverage_deltas: Vec<CoverageDelta>,
}

impl ReleaseDiff {
    pub fn is_empty(&self) -> bool {
        self.metadata_changes.is_empty()
            && self.indicator_changes.is_empty()
            && self.score_deltas.is_empty()
            && self.coverage_deltas.is_empty()
    }
}

fn load_manifest(dir: &Path) -> Result<ReleaseManifest, Error> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    Ok(serde_json::from_str(&text)?)
}

/// Verify a release directory against its manifest.
pub fn verify_release(dir: &Path) -> Result<ReleaseManifest, Error> {
    let manifest = load_manifest(dir)?;
    for (name, expected) in &manifest.files {
        let bytes = fs::read(dir.join(name)).map_err(|_| Error::Tampered {
            path: dir.display().to_string(),
            detail: format!("listed file {name} is missing"),
        })?;
        let actual = sha256_hex(&bytes);
        if &actual != expected {
            return Err(Error::Tampered {
                path: dir.display().to_string(),
                detail: format!("digest mismatch for {name}"),
            });
        }
    }
    Ok(manifest)
}

fn load_json<T: serde::de::DeserializeOwned>(dir: &Path, name: &str) -> Result<T, Error> {
    let text = fs::read_to_string(dir.join(name))?;
    Ok(serde_json::from_str(&text)?)
}

/// Structural diff between two verified releases; equal releases produce an
/// empty diff.
pub fn diff_releases(dir_a: &Path, dir_b: &Path) -> Result<ReleaseDiff, Error> {
    let manifest_a = verify_release(dir_a)?;
    let manifest_b = verify_release(dir_b)?;
    if manifest_a.version == manifest_b.version
        && manifest_a.dataset_hash != manifest_b.dataset_hash
    {
        return Err(Error::Tampered {
            path: dir_b.display().to_string(),
            detail: format!(
                "version {} reused across different datasets",
                manifest_b.version
            ),
        });
    }

    let mut metadata_changes = Vec::new();
    if manifest_a.version != manifest_b.version {
        metadata_changes.push(format!(
            "version: {} -> {}",
            manifest_a.version, manifest_b.version
        ));
    }
    if manifest_a.cutoff_date != manifest_b.cutoff_date {
        metadata_changes.push(format!(
            "cutoff_date: {} -> {}",
            manifest_a.cutoff_date, manifest_b.cutoff_date
        ));
    }
    if manifest_a.config_hash != manifest_b.config_hash {
        metadata_changes.push("config changed".to_string());
    }
    if manifest_a.tool_version != manifest_b.tool_version {
        metadata_changes.push(format!(
            "tool_version: {} -> {}",
            manifest_a.tool_version, manifest_b.tool_version
        ));
    }

    // indicator-level changes from the adjudicated datasets
    let adj_a: Vec<crate::model::AdjudicatedCode> = load_json(dir_a, "adjudicated.json")?;
    let adj_b: Vec<crate::model::AdjudicatedCode> = load_json(dir_b, "adjudicated.json")?;
    let key = |c: &crate::model::AdjudicatedCode| (c.subject_id.clone(), c.indicator_id.clone());
    let map_a: BTreeMap<_, _> = adj_a.iter().map(|c| (key(c), c.clone())).collect();
    let map_b: BTreeMap<_, _> = adj_b.iter().map(|c| (key(c), c.clone())).collect();
    let mut indicator_changes = Vec::new();
    let all_keys: std::collections::BTreeSet<_> = map_a.keys().chain(map_b.keys()).collect();
    for k in all_keys {
        let a = map_a.get(k);
        let b = map_b.get(k);
        let va = a.map(|c| c.value);
        let vb = b.map(|c| c.value);
        if va != vb {
            indicator_changes.push(IndicatorChange {
                subject_id: k.0.clone(),
                indicator_id: k.1.clone(),
                from: va,
                to: vb,
                evidence_refs: b.or(a).map(|c| c.evidence_refs.clone()).unwrap_or_default(),
            });
        }
    }

    // score and coverage deltas on the published (rounded) values
    let scores_a: Vec<SubjectScore> = load_json(dir_a, "scores.json")?;
    let scores_b: Vec<SubjectScore> = load_json(dir_b, "scores.json")?;
    let by_id =
        |v: &[SubjectScore]| -> BTreeMap<String, SubjectScore> {
            v.iter().map(|s| (s.subject_id.clone(), s.clone())).collect()
        };
    let a_map = by_id(&scores_a);
    let b_map = by_id(&scores_b);
    let mut score_deltas = Vec::new();
    let mut coverage_deltas = Vec::new();
    let subjects: std::collections::BTreeSet<_> = a_map.keys().chain(b_map.keys()).collect();
    for sid in subjects {
        match (a_map.get(sid), b_map.get(sid)) {
            (Some(a), Some(b)) => {
                for (pa, pb) in a.pillars.iter().zip(&b.pillars) {
                    push_delta(&mut score_deltas, sid, &pa.pillar.to_string(), "evid", Some(pa.s_evid), Some(pb.s_evid));
                    push_delta(&mut score_deltas, sid, &pa.pillar.to_string(), "known", pa.s_known, pb.s_known);
                    push_delta(&mut score_deltas, sid, &pa.pillar.to_string(), "opt", Some(pa.s_opt), Some(pb.s_opt));
                    if pa.coverage != pb.coverage {
                        coverage_deltas.push(CoverageDelta {
                            subject_id: sid.clone(),
                            pillar: pa.pillar,
                            from: pa.coverage,
                            to: pb.coverage,
                        });
                    }
                }
                push_delta(&mut score_deltas, sid, "overall", "evid", Some(a.aipi_evid), Some(b.aipi_evid));
                push_delta(&mut score_deltas, sid, "overall", "known", a.aipi_known, b.aipi_known);
                push_delta(&mut score_deltas, sid, "overall", "opt", Some(a.aipi_opt), Some(b.aipi_opt));
            }
            (a, b) => {
                metadata_changes.push(format!(
                    "subject {sid} {}",
                    if a.is_none() { "added" } else { "removed" }
                ));
                let present = a.or(b).unwrap();
                push_delta(
                    &mut score_deltas,
                    sid,
                    "overall",
                    "evid",
                    a.map(|_| present.aipi_evid),
                    b.map(|_| present.aipi_evid),
                );
            }
        }
    }

    Ok(ReleaseDiff {
        version_a: manifest_a.version,
        version_b: manifest_b.version,
        metadata_changes,
        indicator_changes,
        score_deltas,
        coverage_deltas,
    })
}

fn push_delta(
    deltas: &mut Vec<ScoreDelta>,
    subject_id: &str,
    level: &str,
    treatment: &str,
    from: Option<f64>,
    to: Option<f64>,
) {
    if from != to {
        deltas.push(ScoreDelta {
            subject_id: subject_id.to_string(),
            level: level.to_string(),
            treatment: treatment.to_string(),
            from,
            to,
        });
    }
}

/// Load a frozen reference table emitted by a prior release.
pub fn load_c_ref(path: &Path) -> Result<CountReferenceTable, Error> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
