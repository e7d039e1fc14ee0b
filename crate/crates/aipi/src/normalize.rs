//! Normalization of adjudicated codes onto [0,1].
//!
//! Binary codes map yes/no to 1/0, ordinal codes {0,1,2} to {0, 0.5, 1}, and
//! counts go through the tempered logarithmic transform
//! `s(c) = min(1, ln(1+c) / ln(1+c_ref))` anchored at a frozen per-release
//! reference count. Stale evidence is capped at 0.5 (one rubric level down).
//! Values are rounded once here, to 9 decimals half-even, so downstream
//! aggregates are decimal-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canonical::round9;
use crate::error::Error;
use crate::model::{AdjudicatedCode, CodeValue, Dataset, IndicatorDef, IndicatorKind};

/// A normalized indicator value, or the unknown marker (serialized as null).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizedValue {
    Known(f64),
    Unknown,
}

impl Serialize for NormalizedValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            NormalizedValue::Known(v) => s.serialize_f64(*v),
            NormalizedValue::Unknown => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for NormalizedValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Option<f64> = Option::deserialize(d)?;
        Ok(match v {
            Some(x) => NormalizedValue::Known(x),
            None => NormalizedValue::Unknown,
        })
    }
}

impl NormalizedValue {
    pub fn known(&self) -> Option<f64> {
        match self {
            NormalizedValue::Known(v) => Some(*v),
            NormalizedValue::Unknown => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, NormalizedValue::Unknown)
    }
}

/// Frozen reference counts, one per count-kind indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountReferenceTable {
    pub refs: BTreeMap<String, f64>,
}

impl CountReferenceTable {
    pub fn get(&self, indicator_id: &str) -> Option<f64> {
        self.refs.get(indicator_id).copied()
    }
}

/// Nearest-rank 95th percentile of the non-unknown adjudicated counts for
/// each count indicator, floored at 1.
pub fn compute_c_ref(d: &Dataset, adjudicated: &[AdjudicatedCode]) -> CountReferenceTable {
    let mut refs = BTreeMap::new();
    for def in &d.indicators {
        if def.kind != IndicatorKind::Count {
            continue;
        }
        let mut counts: Vec<u64> = adjudicated
            .iter()
            .filter(|c| c.indicator_id == def.id)
            .filter_map(|c| match c.value {
                CodeValue::Count(v) => Some(v),
                _ => None,
            })
            .collect();
        counts.sort_unstable();
        let c_ref = if counts.is_empty() {
            1.0
        } else {
            let rank = ((0.95 * counts.len() as f64).ceil() as usize).max(1);
            (counts[rank - 1] as f64).max(1.0)
        };
        refs.insert(def.id.clone(), c_ref);
    }
    CountReferenceTable { refs }
}

/// Map one adjudicated code to [0,1] or the unknown marker.
pub fn normalize_code(
    code: &AdjudicatedCode,
    def: &IndicatorDef,
    refs: &CountReferenceTable,
) -> Result<NormalizedValue, Error> {
    let raw = match (code.value, def.kind) {
        (CodeValue::Unknown, _) => return Ok(NormalizedValue::Unknown),
        (CodeValue::Yes, IndicatorKind::Binary) => 1.0,
        (CodeValue::No, IndicatorKind::Binary) => 0.0,
        (CodeValue::Ordinal(v), IndicatorKind::Ordinal3) => v as f64 / 2.0,
        (CodeValue::Count(c), IndicatorKind::Count) => {
            let c_ref = refs.get(&def.id).ok_or_else(|| Error::MissingCref {
                indicator: def.id.clone(),
            })?;
            ((1.0 + c as f64).ln() / (1.0 + c_ref).ln()).min(1.0)
        }
        _ => {
            return Err(Error::KindMismatch {
                context: format!("({}, {})", code.subject_id, code.indicator_id),
            })
        }
    };
    let capped = if code.stale { raw.min(0.5) } else { raw };
    Ok(NormalizedValue::Known(round9(capped.clamp(0.0, 1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pillar;

    fn def(kind: IndicatorKind) -> IndicatorDef {
        IndicatorDef {
            id: "PG-01".to_string(),
            pillar: Pillar::PG,
            kind,
            title: String::new(),
        }
    }

    fn adjudicated(value: CodeValue, stale: bool) -> AdjudicatedCode {
        AdjudicatedCode {
            subject_id: "S1".to_string(),
            indicator_id: "PG-01".to_string(),
            value,
            evidence_class: None,
            stale,
            contributing_coders: vec!["c1".to_string()],
            conflict_resolved: false,
            evidence_refs: vec![],
        }
    }

    fn count_dataset(counts: &[u64]) -> (Dataset, Vec<AdjudicatedCode>) {
        let d = Dataset {
            indicators: vec![def(IndicatorKind::Count)],
            subjects: vec![],
            artifacts: vec![],
            codes: vec![],
        };
        let adj = counts
            .iter()
            .map(|&c| adjudicated(CodeValue::Count(c), false))
            .collect();
        (d, adj)
    }

    #[test]
    fn c_ref_nearest_rank() {
        // n = 20, rank = ceil(0.95 * 20) = 19, sorted value at rank 19 is 18
        let counts: Vec<u64> = (0..20).collect();
        let (d, adj) = count_dataset(&counts);
        let refs = compute_c_ref(&d, &adj);
        assert_eq!(refs.get("PG-01"), Some(18.0));
    }

    #[test]
    fn c_ref_floor_on_zero_sample() {
        let (d, adj) = count_dataset(&[0, 0, 0]);
        assert_eq!(compute_c_ref(&d, &adj).get("PG-01"), Some(1.0));
        let (d, adj) = count_dataset(&[]);
        assert_eq!(compute_c_ref(&d, &adj).get("PG-01"), Some(1.0));
    }

    #[test]
    fn c_ref_singleton() {
        let (d, adj) = count_dataset(&[7]);
        assert_eq!(compute_c_ref(&d, &adj).get("PG-01"), Some(7.0));
    }

    #[test]
    fn ordinal_midpoint() {
        let refs = CountReferenceTable { refs: BTreeMap::new() };
        let v = normalize_code(
            &adjudicated(CodeValue::Ordinal(1), false),
            &def(IndicatorKind::Ordinal3),
            &refs,
        )
        .unwrap();
        assert_eq!(v.known(), Some(0.5));
    }

    #[test]
    fn count_endpoints_and_interior() {
        let refs = CountReferenceTable {
            refs: [("PG-01".to_string(), 7.0)].into_iter().collect(),
        };
        let d = def(IndicatorKind::Count);
        let at = |c: u64| {
            normalize_code(&adjudicated(CodeValue::Count(c), false), &d, &refs)
                .unwrap()
                .known()
                .unwrap()
        };
        assert_eq!(at(0), 0.0);
        assert_eq!(at(7), 1.0);
        // ln(4)/ln(8) = 2/3 exactly in the reals; 9-decimal rounded
        assert!((at(3) - 2.0 / 3.0).abs() < 1e-9);
        assert_eq!(at(3), 0.666666667);
        // clamp beyond the reference
        assert_eq!(at(100), 1.0);
    }

    #[test]
    fn staleness_caps_at_half() {
        let refs = CountReferenceTable { refs: BTreeMap::new() };
        let v = normalize_code(
            &adjudicated(CodeValue::Yes, true),
            &def(IndicatorKind::Binary),
            &refs,
        )
        .unwrap();
        assert_eq!(v.known(), Some(0.5));
        // cap never raises
        let lo = normalize_code(
            &adjudicated(CodeValue::No, true),
            &def(IndicatorKind::Binary),
            &refs,
        )
        .unwrap();
        assert_eq!(lo.known(), Some(0.0));
    }

    #[test]
    fn unknown_passes_through() {
        let refs = CountReferenceTable { refs: BTreeMap::new() };
        let v = normalize_code(
            &adjudicated(CodeValue::Unknown, false),
            &def(IndicatorKind::Binary),
            &refs,
        )
        .unwrap();
        assert!(v.is_unknown());
    }

    #[test]
    fn kind_mismatch_rejected() {
        let refs = CountReferenceTable { refs: BTreeMap::new() };
        let err = normalize_code(
            &adjudicated(CodeValue::Yes, false),
            &def(IndicatorKind::Count),
            &refs,
        )
        .unwrap_err();
        assert_eq!(err.code(), "E_KIND_MISMATCH");
    }
}
