//! Conservative adjudication of multi-coder codes.
//!
//! When public claims conflict, the merged code takes the more conservative
//! interpretation: the minimum over the natural value order. Unknown entries
//! are ignored whenever any coder found evidence; evidence class and
//! staleness ride with the codes attaining the minimum, so the merged value
//! is always defensible by the evidence that justifies it.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::model::{AdjudicatedCode, CodeValue, EvidenceClass, RawCode};

/// Merge all codes for one (subject, indicator) into a single adjudicated
/// code. Order-insensitive and idempotent.
pub fn merge_codes(codes: &[RawCode]) -> Result<AdjudicatedCode, Error> {
    assert!(!codes.is_empty(), "merge_codes requires at least one code");
    let subject_id = codes[0].subject_id.clone();
    let indicator_id = codes[0].indicator_id.clone();
    for c in codes {
        if c.subject_id != subject_id || c.indicator_id != indicator_id {
            return Err(Error::KindMismatch {
                context: format!(
                    "merge across ({}, {}) and ({}, {})",
                    subject_id, indicator_id, c.subject_id, c.indicator_id
                ),
            });
        }
    }

    let mut contributing: Vec<String> = codes.iter().map(|c| c.coder_id.clone()).collect();
    contributing.sort();
    contributing.dedup();

    let known: Vec<&RawCode> = codes.iter().filter(|c| !c.value.is_unknown()).collect();
    if known.is_empty() {
        return Ok(AdjudicatedCode {
            subject_id,
            indicator_id,
            value: CodeValue::Unknown,
            evidence_class: None,
            stale: false,
            contributing_coders: contributing,
            conflict_resolved: false,
            evidence_refs: Vec::new(),
        });
    }

    // all non-unknown variants must agree in kind (yes/no are both binary)
    fn kind_group(v: &CodeValue) -> u8 {
        match v {
            CodeValue::Yes | CodeValue::No => 0,
            CodeValue::Ordinal(_) => 1,
            CodeValue::Count(_) => 2,
            CodeValue::Unknown => 3,
        }
    }
    let first = kind_group(&known[0].value);
    if known.iter().any(|c| kind_group(&c.value) != first) {
        return Err(Error::KindMismatch {
            context: format!("({subject_id}, {indicator_id})"),
        });
    }

    let min_rank = known
        .iter()
        .map(|c| c.value.natural_rank().expect("known value"))
        .min()
        .expect("non-empty");
    let attaining: Vec<&&RawCode> = known
        .iter()
        .filter(|c| c.value.natural_rank() == Some(min_rank))
        .collect();

    let value = attaining[0].value;
    let evidence_class = attaining
        .iter()
        .filter_map(|c| c.evidence_class)
        .max_by_key(EvidenceClass::strength);
    let stale = attaining.iter().all(|c| c.stale);
    let distinct_known: BTreeSet<u64> = known
        .iter()
        .map(|c| c.value.natural_rank().expect("known value"))
        .collect();
    let mut evidence_refs: Vec<String> = attaining
        .iter()
        .flat_map(|c| c.evidence_refs.iter().cloned())
        .collect();
    evidence_refs.sort();
    evidence_refs.dedup();

    Ok(AdjudicatedCode {
        subject_id,
        indicator_id,
        value,
        evidence_class,
        stale,
        contributing_coders: contributing,
        conflict_resolved: distinct_known.len() >= 2,
        evidence_refs,
    })
}
