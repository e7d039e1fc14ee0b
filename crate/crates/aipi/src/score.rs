//! Pillar and overall scoring under the three Unknown treatments.
//!
//! Per pillar: the evidence score treats Unknown as 0 (lower bound), the
//! known-only score averages over indicators with evidence (undefined at
//! zero coverage), and the optimistic score treats Unknown as 1 (upper
//! bound). Overall scores are the unweighted mean of the four pillars;
//! provider scores the unweighted mean over the provider's systems.
//!
//! Scores are kept at full f64 precision internally; rounding happens once,
//! at canonical emission.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::merge::merge_codes;
use crate::model::{
    AdjudicatedCode, Dataset, EvidenceClass, IndicatorDef, Pillar, RawCode, Subject, SubjectKind,
};
use crate::normalize::{compute_c_ref, normalize_code, CountReferenceTable, NormalizedValue};
use crate::parallel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PillarScore {
    pub pillar: Pillar,
    pub s_evid: f64,
    pub s_known: Option<f64>,
    pub s_opt: f64,
    pub coverage: f64,
    pub coverage_min: f64,
    pub coverage_max: f64,
    pub n_indicators: usize,
    pub n_known: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectScore {
    pub subject_id: String,
    /// One entry per pillar, in PG, ID, TR, AC order.
    pub pillars: Vec<PillarScore>,
    pub aipi_evid: f64,
    pub aipi_known: Option<f64>,
    pub aipi_opt: f64,
}

impl SubjectScore {
    pub fn pillar(&self, p: Pillar) -> &PillarScore {
        self.pillars.iter().find(|ps| ps.pillar == p).expect("all four pillars present")
    }

    /// Mean pillar coverage.
    pub fn mean_coverage(&self) -> f64 {
        self.pillars.iter().map(|p| p.coverage).sum::<f64>() / self.pillars.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderScore {
    pub provider_id: String,
    pub aipi_evid: f64,
    pub aipi_known: Option<f64>,
    pub aipi_opt: f64,
    pub k_systems: usize,
}

/// Estimator-guidance floors for procurement-grade use of the lower-bound
/// score. The shipped defaults are NON-NORMATIVE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloorPolicy {
    pub min_overall_evid: f64,
    pub min_pillar_evid: f64,
    pub min_pillar_coverage: f64,
    pub min_mean_coverage: f64,
    /// Indicator ids that must have a known, positive value: the
    /// vulnerability-disclosure, redress-channel, and model-card indicators.
    pub required_artifacts: Vec<String>,
}

impl Default for FloorPolicy {
    fn default() -> Self {
        FloorPolicy {
            min_overall_evid: 0.25,
            min_pillar_evid: 0.15,
            min_pillar_coverage: 0.25,
            min_mean_coverage: 0.30,
            required_artifacts: vec![
                "AC-01".to_string(),
                "AC-02".to_string(),
                "TR-01".to_string(),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorReason {
    pub code: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorVerdict {
    pub subject_id: String,
    pub pass: bool,
    pub reasons: Vec<FloorReason>,
}

/// Score one pillar from its indicators' normalized values.
///
/// `values` must contain an entry for every indicator of the pillar
/// (possibly unknown); `classes` carries the evidence class of known values.
pub fn pillar_scores(
    pillar: Pillar,
    values: &BTreeMap<String, NormalizedValue>,
    defs: &[&IndicatorDef],
    classes: &BTreeMap<String, EvidenceClass>,
) -> Result<PillarScore, Error> {
    if defs.is_empty() {
        return Err(Error::EmptyPillar {
            pillar: pillar.to_string(),
        });
    }
    let n = defs.len();
    let mut sum_known = 0.0;
    let mut n_known = 0usize;
    let mut n_attributable = 0usize;
    for def in defs {
        debug_assert_eq!(def.pillar, pillar);
        let v = values.get(&def.id).copied().unwrap_or(NormalizedValue::Unknown);
        if let Some(x) = v.known() {
            sum_known += x;
            n_known += 1;
            if classes.get(&def.id) == Some(&EvidenceClass::PrimaryAttributable) {
                n_attributable += 1;
            }
        }
    }
    let n_f = n as f64;
    let s_evid = sum_known / n_f;
    let s_known = (n_known > 0).then(|| sum_known / n_known as f64);
    let s_opt = (sum_known + (n - n_known) as f64) / n_f;
    Ok(PillarScore {
        pillar,
        s_evid,
        s_known,
        s_opt,
        coverage: n_known as f64 / n_f,
        coverage_min: n_attributable as f64 / n_f,
        coverage_max: n_known as f64 / n_f,
        n_indicators: n,
        n_known,
    })
}

/// Combine the four pillar scores into overall triples. `aipi_known` is
/// undefined as soon as any pillar's known-only score is undefined.
pub fn subject_score(subject_id: &str, pillars: Vec<PillarScore>) -> Result<SubjectScore, Error> {
    for p in Pillar::ALL {
        if !pillars.iter().any(|ps| ps.pillar == p) {
            return Err(Error::MissingPillar {
                pillar: p.to_string(),
            });
        }
    }
    let mut ordered: Vec<PillarScore> = Vec::with_capacity(4);
    for p in Pillar::ALL {
        ordered.push(pillars.iter().find(|ps| ps.pillar == p).unwrap().clone());
    }
    let aipi_evid = ordered.iter().map(|p| p.s_evid).sum::<f64>() / 4.0;
    let aipi_opt = ordered.iter().map(|p| p.s_opt).sum::<f64>() / 4.0;
    let aipi_known = ordered
        .iter()
        .map(|p| p.s_known)
        .collect::<Option<Vec<f64>>>()
        .map(|ks| ks.iter().sum::<f64>() / 4.0);
    Ok(SubjectScore {
        subject_id: subject_id.to_string(),
        pillars: ordered,
        aipi_evid,
        aipi_known,
        aipi_opt,
    })
}

/// Roll system scores up to their provider: the unweighted mean over K
/// systems, or the provider's own score unchanged when it has none.
pub fn provider_score(
    provider: &Subject,
    systems: &[&SubjectScore],
    own: &SubjectScore,
) -> Result<ProviderScore, Error> {
    debug_assert_eq!(provider.kind, SubjectKind::Provider);
    if systems.is_empty() {
        return Ok(ProviderScore {
            provider_id: provider.subject_id.clone(),
            aipi_evid: own.aipi_evid,
            aipi_known: own.aipi_known,
            aipi_opt: own.aipi_opt,
            k_systems: 0,
        });
    }
    let k = systems.len() as f64;
    let aipi_evid = systems.iter().map(|s| s.aipi_evid).sum::<f64>() / k;
    let aipi_opt = systems.iter().map(|s| s.aipi_opt).sum::<f64>() / k;
    let aipi_known = systems
        .iter()
        .map(|s| s.aipi_known)
        .collect::<Option<Vec<f64>>>()
        .map(|ks| ks.iter().sum::<f64>() / k);
    Ok(ProviderScore {
        provider_id: provider.subject_id.clone(),
        aipi_evid,
        aipi_known,
        aipi_opt,
        k_systems: systems.len(),
    })
}

/// Evaluate the estimator-guidance floors for one subject.
pub fn check_floors(
    report: &SubjectScore,
    policy: &FloorPolicy,
    values: &BTreeMap<String, NormalizedValue>,
    indicator_ids: &[String],
) -> Result<FloorVerdict, Error> {
    for req in &policy.required_artifacts {
        if !indicator_ids.contains(req) {
            return Err(Error::UnknownRequiredId {
                indicator: req.clone(),
            });
        }
    }
    let mut reasons = Vec::new();
    if report.aipi_evid < policy.min_overall_evid {
        reasons.push(FloorReason {
            code: "OVERALL_BELOW_FLOOR".to_string(),
            detail: format!(
                "aipi_evid {:.9} < {:.9}",
                report.aipi_evid, policy.min_overall_evid
            ),
        });
    }
    for p in &report.pillars {
        if p.s_evid < policy.min_pillar_evid {
            reasons.push(FloorReason {
                code: "PILLAR_BELOW_FLOOR".to_string(),
                detail: format!("{} s_evid {:.9} < {:.9}", p.pillar, p.s_evid, policy.min_pillar_evid),
            });
        }
        if p.coverage < policy.min_pillar_coverage {
            reasons.push(FloorReason {
                code: "PILLAR_COVERAGE_BELOW_FLOOR".to_string(),
                detail: format!(
                    "{} coverage {:.9} < {:.9}",
                    p.pillar, p.coverage, policy.min_pillar_coverage
                ),
            });
        }
    }
    let mean_cov = report.mean_coverage();
    if mean_cov < policy.min_mean_coverage {
        reasons.push(FloorReason {
            code: "MEAN_COVERAGE_BELOW_FLOOR".to_string(),
            detail: format!("mean coverage {:.9} < {:.9}", mean_cov, policy.min_mean_coverage),
        });
    }
    for req in &policy.required_artifacts {
        let present = values
            .get(req)
            .and_then(NormalizedValue::known)
            .map(|v| v > 0.0)
            .unwrap_or(false);
        if !present {
            reasons.push(FloorReason {
                code: "REQ_ARTIFACT_MISSING".to_string(),
                detail: format!("required indicator {req} has no known positive value"),
            });
        }
    }
    Ok(FloorVerdict {
        subject_id: report.subject_id.clone(),
        pass: reasons.is_empty(),
        reasons,
    })
}

/// Everything the scoring stage produces for one dataset, with the value
/// matrix retained for the sensitivity analyses.
#[derive(Debug, Clone)]
pub struct ScoredDataset {
    pub adjudicated: Vec<AdjudicatedCode>,
    pub c_ref: CountReferenceTable,
    /// subject_id -> indicator_id -> normalized value (every pair present).
    pub values: BTreeMap<String, BTreeMap<String, NormalizedValue>>,
    /// subject_id -> indicator_id -> evidence class of the known value.
    pub classes: BTreeMap<String, BTreeMap<String, EvidenceClass>>,
    /// Every subject, sorted by subject_id.
    pub subject_scores: Vec<SubjectScore>,
    /// Every provider, sorted by provider_id.
    pub provider_scores: Vec<ProviderScore>,
}

impl ScoredDataset {
    pub fn subject(&self, id: &str) -> Option<&SubjectScore> {
        self.subject_scores.iter().find(|s| s.subject_id == id)
    }
}

/// Merge, normalize, and score a validated dataset. Pass a frozen reference
/// table to rescore on a prior release's scale; otherwise references are
/// computed from this dataset.
pub fn score_dataset(
    d: &Dataset,
    frozen: Option<CountReferenceTable>,
) -> Result<ScoredDataset, Error> {
    let adjudicated = adjudicate_all(d)?;

    if let Some(table) = &frozen {
        for def in &d.indicators {
            if def.kind == crate::model::IndicatorKind::Count && table.get(&def.id).is_none() {
                return Err(Error::MissingCref {
                    indicator: def.id.clone(),
                });
            }
        }
    }
    let c_ref = frozen.unwrap_or_else(|| compute_c_ref(d, &adjudicated));

    let mut values: BTreeMap<String, BTreeMap<String, NormalizedValue>> = BTreeMap::new();
    let mut classes: BTreeMap<String, BTreeMap<String, EvidenceClass>> = BTreeMap::new();
    for s in &d.subjects {
        values.insert(s.subject_id.clone(), BTreeMap::new());
        classes.insert(s.subject_id.clone(), BTreeMap::new());
    }
    for code in &adjudicated {
        let def = d.indicator(&code.indicator_id).expect("validated");
        let v = normalize_code(code, def, &c_ref)?;
        values
            .get_mut(&code.subject_id)
            .expect("validated")
            .insert(code.indicator_id.clone(), v);
        if let Some(class) = code.evidence_class {
            if !v.is_unknown() {
                classes
                    .get_mut(&code.subject_id)
                    .expect("validated")
                    .insert(code.indicator_id.clone(), class);
            }
        }
    }
    // absent (subject, indicator) pairs are Unknown
    for s in &d.subjects {
        let m = values.get_mut(&s.subject_id).unwrap();
        for def in &d.indicators {
            m.entry(def.id.clone()).or_insert(NormalizedValue::Unknown);
        }
    }

    let by_pillar = d.indicators_by_pillar();
    let subject_ids: Vec<String> = {
        let mut ids: Vec<String> = d.subjects.iter().map(|s| s.subject_id.clone()).collect();
        ids.sort();
        ids
    };
    let subject_scores: Vec<SubjectScore> = parallel::map_indexed(subject_ids, |sid| {
        let vals = &values[&sid];
        let cls = &classes[&sid];
        let pillars: Vec<PillarScore> = Pillar::ALL
            .iter()
            .map(|&p| pillar_scores(p, vals, &by_pillar[&p], cls))
            .collect::<Result<_, _>>()?;
        subject_score(&sid, pillars)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let mut provider_scores = Vec::new();
    for provider in d.providers() {
        let own = subject_scores
            .iter()
            .find(|s| s.subject_id == provider.subject_id)
            .expect("every subject scored");
        let systems: Vec<&SubjectScore> = d
            .systems_of(&provider.subject_id)
            .iter()
            .map(|sys| {
                subject_scores
                    .iter()
                    .find(|s| s.subject_id == sys.subject_id)
                    .expect("every subject scored")
            })
            .collect();
        provider_scores.push(provider_score(provider, &systems, own)?);
    }

    Ok(ScoredDataset {
        adjudicated,
        c_ref,
        values,
        classes,
        subject_scores,
        provider_scores,
    })
}

/// Merge every (subject, indicator) group of raw codes, in canonical order.
pub fn adjudicate_all(d: &Dataset) -> Result<Vec<AdjudicatedCode>, Error> {
    let mut groups: BTreeMap<(String, String), Vec<RawCode>> = BTreeMap::new();
    for code in &d.codes {
        groups
            .entry((code.subject_id.clone(), code.indicator_id.clone()))
            .or_default()
            .push(code.clone());
    }
    groups.values().map(|g| merge_codes(g)).collect()
}
