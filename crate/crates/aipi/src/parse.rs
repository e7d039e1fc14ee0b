//! Strict ingestion of a dataset directory.
//!
//! Parsing is all-or-nothing: the first structural problem aborts with a
//! machine-coded error. Schemas are closed (unknown fields rejected) and the
//! result does not depend on input ordering.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::canonical;
use crate::error::Error;
use crate::model::{
    CodeValue, Dataset, EvidenceArtifact, IndicatorDef, IndicatorKind, RawCode, Subject,
    SubjectKind,
};

pub const INDICATORS_FILE: &str = "indicators.json";
pub const SUBJECTS_FILE: &str = "subjects.json";
pub const ARTIFACTS_FILE: &str = "artifacts.json";
pub const CODES_FILE: &str = "codes.json";

fn read_doc<T: serde::de::DeserializeOwned>(dir: &Path, name: &str) -> Result<T, Error> {
    let path = dir.join(name);
    let text = fs::read_to_string(&path).map_err(|e| Error::Syntax {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Syntax {
        path: path.display().to_string(),
        message: e.to_string(), // serde_json includes line and column
    })
}

fn check_unique<'a, I>(path: &str, ids: I) -> Result<(), Error>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicateKey {
                path: path.to_string(),
                key: id.to_string(),
            });
        }
    }
    Ok(())
}

/// Parse and fully link a dataset directory containing `indicators.json`,
/// `subjects.json`, `artifacts.json`, and `codes.json`.
pub fn parse_dataset(dir: &Path) -> Result<Dataset, Error> {
    let mut indicators: Vec<IndicatorDef> = read_doc(dir, INDICATORS_FILE)?;
    let mut subjects: Vec<Subject> = read_doc(dir, SUBJECTS_FILE)?;
    let mut artifacts: Vec<EvidenceArtifact> = read_doc(dir, ARTIFACTS_FILE)?;
    let mut codes: Vec<RawCode> = read_doc(dir, CODES_FILE)?;

    check_unique(INDICATORS_FILE, indicators.iter().map(|i| i.id.as_str()))?;
    check_unique(SUBJECTS_FILE, subjects.iter().map(|s| s.subject_id.as_str()))?;
    check_unique(
        ARTIFACTS_FILE,
        artifacts.iter().map(|a| a.artifact_id.as_str()),
    )?;
    check_unique(
        CODES_FILE,
        codes
            .iter()
            .map(|c| {
                format!("{}/{}/{}", c.subject_id, c.indicator_id, c.coder_id)
            })
            .collect::<Vec<_>>()
            .iter()
            .map(|s| s.as_str()),
    )?;

    // canonical ordering: inputs may arrive in any order
    indicators.sort_by(|a, b| a.id.cmp(&b.id));
    subjects.sort_by(|a, b| a.subject_id.cmp(&b.subject_id));
    artifacts.sort_by(|a, b| a.artifact_id.cmp(&b.artifact_id));
    codes.sort_by(|a, b| {
        (&a.subject_id, &a.indicator_id, &a.coder_id).cmp(&(
            &b.subject_id,
            &b.indicator_id,
            &b.coder_id,
        ))
    });

    let dataset = Dataset {
        indicators,
        subjects,
        artifacts,
        codes,
    };
    if let Some(err) = link_errors(&dataset).into_iter().next() {
        return Err(err);
    }

    // reinterpret numeric code values against their indicator kind
    let mut dataset = dataset;
    for code in &mut dataset.codes {
        let kind = dataset
            .indicators
            .iter()
            .find(|i| i.id == code.indicator_id)
            .map(|i| i.kind)
            .expect("checked above");
        if kind == IndicatorKind::Ordinal3 {
            if let CodeValue::Count(v) = code.value {
                code.value = CodeValue::Ordinal(v as u8);
            }
        }
    }
    Ok(dataset)
}

/// Structural and referential checks over a linked dataset, in collecting
/// form. Parsing aborts on the first entry; validation reports them all.
pub(crate) fn link_errors(d: &Dataset) -> Vec<Error> {
    let mut errors = Vec::new();
    for ind in &d.indicators {
        let expected_prefix = format!("{}-", ind.pillar);
        if !ind.id.starts_with(&expected_prefix) {
            errors.push(Error::ValueDomain {
                indicator: ind.id.clone(),
                kind: "id".to_string(),
                value: format!("pillar prefix does not match pillar {}", ind.pillar),
            });
        }
    }

    for s in &d.subjects {
        match (s.kind, &s.provider_id) {
            (SubjectKind::System, Some(pid)) => match d.subject(pid) {
                None => errors.push(Error::DanglingRef {
                    path: SUBJECTS_FILE.to_string(),
                    reference: pid.clone(),
                    context: format!("subject {}", s.subject_id),
                }),
                Some(owner) if owner.kind != SubjectKind::Provider => {
                    errors.push(Error::DanglingRef {
                        path: SUBJECTS_FILE.to_string(),
                        reference: pid.clone(),
                        context: format!(
                            "subject {} (provider_id must name a provider)",
                            s.subject_id
                        ),
                    });
                }
                Some(_) => {}
            },
            (SubjectKind::System, None) => {
                errors.push(Error::DanglingRef {
                    path: SUBJECTS_FILE.to_string(),
                    reference: "provider_id".to_string(),
                    context: format!("system {} missing provider_id", s.subject_id),
                });
            }
            (SubjectKind::Provider, Some(_)) => {
                errors.push(Error::DanglingRef {
                    path: SUBJECTS_FILE.to_string(),
                    reference: "provider_id".to_string(),
                    context: format!("provider {} must not carry provider_id", s.subject_id),
                });
            }
            (SubjectKind::Provider, None) => {}
        }
    }

    for code in &d.codes {
        let context = format!(
            "({}, {}, {})",
            code.subject_id, code.indicator_id, code.coder_id
        );
        if d.subject(&code.subject_id).is_none() {
            errors.push(Error::DanglingRef {
                path: CODES_FILE.to_string(),
                reference: code.subject_id.clone(),
                context: context.clone(),
            });
        }
        match d.indicator(&code.indicator_id) {
            None => errors.push(Error::DanglingRef {
                path: CODES_FILE.to_string(),
                reference: code.indicator_id.clone(),
                context: context.clone(),
            }),
            Some(ind) => {
                if let Err(e) = check_value_against_kind(code, ind.kind, &context) {
                    errors.push(e);
                }
            }
        }
        for r in &code.evidence_refs {
            if d.artifact(r).is_none() {
                errors.push(Error::DanglingRef {
                    path: CODES_FILE.to_string(),
                    reference: r.clone(),
                    context: context.clone(),
                });
            }
        }
        if !code.value.is_unknown() && code.evidence_refs.is_empty() {
            errors.push(Error::MissingEvidence {
                context: context.clone(),
            });
        }
        if code.value.is_unknown() && !code.evidence_refs.is_empty() {
            errors.push(Error::MissingEvidence {
                context: format!("{context} (unknown value must carry no evidence refs)"),
            });
        }
        if !code.value.is_unknown() && code.evidence_class.is_none() {
            errors.push(Error::MissingEvidence {
                context: format!("{context} (non-unknown value must carry an evidence class)"),
            });
        }
    }
    errors
}

fn check_value_against_kind(
    code: &RawCode,
    kind: IndicatorKind,
    context: &str,
) -> Result<(), Error> {
    match (code.value, kind) {
        (CodeValue::Unknown, _) => Ok(()),
        (CodeValue::Yes | CodeValue::No, IndicatorKind::Binary) => Ok(()),
        (CodeValue::Count(v), IndicatorKind::Ordinal3) => {
            if v <= 2 {
                Ok(())
            } else {
                Err(Error::ValueDomain {
                    indicator: code.indicator_id.clone(),
                    kind: "ordinal3".to_string(),
                    value: v.to_string(),
                })
            }
        }
        (CodeValue::Ordinal(v), IndicatorKind::Ordinal3) => {
            if v <= 2 {
                Ok(())
            } else {
                Err(Error::ValueDomain {
                    indicator: code.indicator_id.clone(),
                    kind: "ordinal3".to_string(),
                    value: v.to_string(),
                })
            }
        }
        (CodeValue::Count(_), IndicatorKind::Count) => Ok(()),
        _ => Err(Error::KindMismatch {
            context: context.to_string(),
        }),
    }
}

/// Serialize a dataset back into the four canonical documents. Inverse of
/// [`parse_dataset`] on valid datasets.
pub fn serialize_dataset(d: &Dataset, dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    canonical::write_canonical(&dir.join(INDICATORS_FILE), &d.indicators)?;
    canonical::write_canonical(&dir.join(SUBJECTS_FILE), &d.subjects)?;
    canonical::write_canonical(&dir.join(ARTIFACTS_FILE), &d.artifacts)?;
    canonical::write_canonical(&dir.join(CODES_FILE), &d.codes)?;
    Ok(())
}
