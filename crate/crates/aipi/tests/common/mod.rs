//! Shared helpers for the integration and acceptance suites.
#![allow(dead_code)]

use std::path::PathBuf;

use chrono::NaiveDate;

use aipi::model::{
    CodeValue, Dataset, EvidenceArtifact, EvidenceClass, IndicatorDef, IndicatorKind, Pillar,
    RawCode, SourceKind, Subject, SubjectKind,
};
use aipi::rng::SplitMix64;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/cohort")
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn random_value(rng: &mut SplitMix64, kind: IndicatorKind) -> CodeValue {
    if rng.gen_range(4) == 0 {
        return CodeValue::Unknown;
    }
    match kind {
        IndicatorKind::Binary => {
            if rng.gen_range(2) == 0 {
                CodeValue::No
            } else {
                CodeValue::Yes
            }
        }
        IndicatorKind::Ordinal3 => CodeValue::Ordinal(rng.gen_range(3) as u8),
        IndicatorKind::Count => CodeValue::Count(rng.gen_range(41)),
    }
}

/// A random, structurally valid dataset: 1-3 indicators per pillar of mixed
/// kinds, 2-4 providers with 0-2 systems each, multi-coder codes with a
/// mix of unknowns, staleness, and absent (subject, indicator) pairs.
pub fn random_dataset(rng: &mut SplitMix64) -> Dataset {
    let kinds = [
        IndicatorKind::Binary,
        IndicatorKind::Ordinal3,
        IndicatorKind::Count,
    ];
    let mut indicators = Vec::new();
    for p in Pillar::ALL {
        let n = 1 + rng.gen_range(3) as usize;
        for i in 1..=n {
            indicators.push(IndicatorDef {
                id: format!("{p}-{i:02}"),
                pillar: p,
                kind: kinds[rng.gen_range(3) as usize],
                title: format!("{p} indicator {i}"),
            });
        }
    }

    let mut subjects = Vec::new();
    let n_providers = 2 + rng.gen_range(3);
    for pi in 1..=n_providers {
        let pid = format!("P{pi:02}");
        subjects.push(Subject {
            subject_id: pid.clone(),
            name: pid.clone(),
            kind: SubjectKind::Provider,
            provider_id: None,
        });
        for si in 1..=rng.gen_range(3) {
            let sid = format!("{pid}-S{si}");
            subjects.push(Subject {
                subject_id: sid.clone(),
                name: sid,
                kind: SubjectKind::System,
                provider_id: Some(pid.clone()),
            });
        }
    }
    subjects.sort_by(|a, b| a.subject_id.cmp(&b.subject_id));

    let artifacts = vec![EvidenceArtifact {
        artifact_id: "A-001".to_string(),
        url: "https://example.org/policy".to_string(),
        published_date: Some(date(2025, 6, 1)),
        retrieved_date: date(2025, 9, 1),
        archive_url: None,
        source_kind: SourceKind::Policy,
    }];

    let mut codes = Vec::new();
    for s in &subjects {
        for def in &indicators {
            if rng.gen_range(10) < 2 {
                continue; // absent pair; scoring must treat it as unknown
            }
            let n_coders = 1 + (rng.gen_range(4) == 0) as usize;
            for c in 0..n_coders {
                let value = random_value(rng, def.kind);
                let unknown = value.is_unknown();
                codes.push(RawCode {
                    subject_id: s.subject_id.clone(),
                    indicator_id: def.id.clone(),
                    coder_id: format!("c{}", c + 1),
                    value,
                    evidence_refs: if unknown {
                        vec![]
                    } else {
                        vec!["A-001".to_string()]
                    },
                    evidence_class: (!unknown).then(|| {
                        if rng.gen_range(2) == 0 {
                            EvidenceClass::PrimaryAttributable
                        } else {
                            EvidenceClass::ThirdPartyNeutral
                        }
                    }),
                    stale: rng.gen_range(10) == 0,
                    coded_date: date(2025, 9, 2),
                });
            }
        }
    }

    Dataset {
        indicators,
        subjects,
        artifacts,
        codes,
    }
}
