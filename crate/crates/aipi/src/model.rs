//! Domain types for the evidence graph: subjects, indicators, artifacts,
//! codes, and the fully linked dataset.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// The four equally weighted pillars.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Pillar {
    PG,
    ID,
    TR,
    AC,
}

impl Pillar {
    pub const ALL: [Pillar; 4] = [Pillar::PG, Pillar::ID, Pillar::TR, Pillar::AC];

    pub fn as_str(&self) -> &'static str {
        match self {
            Pillar::PG => "PG",
            Pillar::ID => "ID",
            Pillar::TR => "TR",
            Pillar::AC => "AC",
        }
    }
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How an indicator is coded.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorKind {
    Binary,
    Ordinal3,
    Count,
}

impl IndicatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndicatorKind::Binary => "binary",
            IndicatorKind::Ordinal3 => "ordinal3",
            IndicatorKind::Count => "count",
        }
    }
}

/// One measurable practice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndicatorDef {
    pub id: String,
    pub pillar: Pillar,
    pub kind: IndicatorKind,
    pub title: String,
}

/// Provenance class of the evidence backing a code.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceClass {
    PrimaryAttributable,
    ThirdPartyNeutral,
}

impl EvidenceClass {
    /// primary_attributable outranks third_party_neutral.
    pub fn strength(&self) -> u8 {
        match self {
            EvidenceClass::PrimaryAttributable => 1,
            EvidenceClass::ThirdPartyNeutral => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Policy,
    ModelCard,
    Datasheet,
    AuditReport,
    RegistryEntry,
    ConsultationRecord,
    ReleaseNote,
    Other,
}

/// A dated, linked public artifact backing one or more codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceArtifact {
    pub artifact_id: String,
    pub url: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_date: Option<NaiveDate>,
    pub retrieved_date: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive_url: Option<String>,
    pub source_kind: SourceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubjectKind {
    Provider,
    System,
}

/// A scored unit: a provider, or a system family within one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subject {
    pub subject_id: String,
    pub name: String,
    pub kind: SubjectKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider_id: Option<String>,
}

/// A coded value. The variant must match the indicator's kind; `Unknown`
/// records the absence of qualifying public evidence, not a zero judgment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeValue {
    Yes,
    No,
    Ordinal(u8),
    Count(u64),
    Unknown,
}

impl CodeValue {
    pub fn is_unknown(&self) -> bool {
        matches!(self, CodeValue::Unknown)
    }

    /// Natural conservative order within one kind: no < yes, 0 < 1 < 2,
    /// integer order for counts. `None` when the variants are not comparable.
    pub fn natural_rank(&self) -> Option<u64> {
        match self {
            CodeValue::No => Some(0),
            CodeValue::Yes => Some(1),
            CodeValue::Ordinal(v) => Some(*v as u64),
            CodeValue::Count(c) => Some(*c),
            CodeValue::Unknown => None,
        }
    }

    /// Whether this variant is admissible for the given indicator kind,
    /// ignoring domain bounds.
    pub fn matches_kind(&self, kind: IndicatorKind) -> bool {
        match (self, kind) {
            (CodeValue::Unknown, _) => true,
            (CodeValue::Yes | CodeValue::No, IndicatorKind::Binary) => true,
            (CodeValue::Ordinal(_), IndicatorKind::Ordinal3) => true,
            (CodeValue::Count(_), IndicatorKind::Count) => true,
            _ => false,
        }
    }
}

impl fmt::Display for CodeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeValue::Yes => f.write_str("yes"),
            CodeValue::No => f.write_str("no"),
            CodeValue::Ordinal(v) => write!(f, "{v}"),
            CodeValue::Count(c) => write!(f, "{c}"),
            CodeValue::Unknown => f.write_str("unknown"),
        }
    }
}

impl Serialize for CodeValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CodeValue::Yes => s.serialize_str("yes"),
            CodeValue::No => s.serialize_str("no"),
            CodeValue::Unknown => s.serialize_str("unknown"),
            CodeValue::Ordinal(v) => s.serialize_u64(*v as u64),
            CodeValue::Count(c) => s.serialize_u64(*c),
        }
    }
}

impl<'de> Deserialize<'de> for CodeValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = CodeValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"yes\", \"no\", \"unknown\", or a non-negative integer")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<CodeValue, E> {
                match v {
                    "yes" => Ok(CodeValue::Yes),
                    "no" => Ok(CodeValue::No),
                    "unknown" => Ok(CodeValue::Unknown),
                    other => Err(E::custom(format!("unrecognized code value `{other}`"))),
                }
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<CodeValue, E> {
                // Disambiguated against the indicator kind during linking:
                // small integers may be ordinal levels or counts.
                Ok(CodeValue::Count(v))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<CodeValue, E> {
                u64::try_from(v)
                    .map(CodeValue::Count)
                    .map_err(|_| E::custom("code values must be non-negative"))
            }
        }

        d.deserialize_any(Visitor)
    }
}

/// One coder's value for a (subject, indicator) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCode {
    pub subject_id: String,
    pub indicator_id: String,
    pub coder_id: String,
    pub value: CodeValue,
    #[serde(default)]
    pub evidence_refs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence_class: Option<EvidenceClass>,
    #[serde(default)]
    pub stale: bool,
    pub coded_date: NaiveDate,
}

/// The conservative merge of all coders' values for one (subject, indicator).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjudicatedCode {
    pub subject_id: String,
    pub indicator_id: String,
    pub value: CodeValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence_class: Option<EvidenceClass>,
    pub stale: bool,
    pub contributing_coders: Vec<String>,
    pub conflict_resolved: bool,
    #[serde(default)]
    pub evidence_refs: Vec<String>,
}

/// The fully linked evidence graph for one release.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub indicators: Vec<IndicatorDef>,
    pub subjects: Vec<Subject>,
    pub artifacts: Vec<EvidenceArtifact>,
    pub codes: Vec<RawCode>,
}

impl Dataset {
    pub fn indicator(&self, id: &str) -> Option<&IndicatorDef> {
        self.indicators.iter().find(|i| i.id == id)
    }

    pub fn subject(&self, id: &str) -> Option<&Subject> {
        self.subjects.iter().find(|s| s.subject_id == id)
    }

    pub fn artifact(&self, id: &str) -> Option<&EvidenceArtifact> {
        self.artifacts.iter().find(|a| a.artifact_id == id)
    }

    /// Indicator definitions grouped by pillar, in pillar order.
    pub fn indicators_by_pillar(&self) -> BTreeMap<Pillar, Vec<&IndicatorDef>> {
        let mut map: BTreeMap<Pillar, Vec<&IndicatorDef>> = BTreeMap::new();
        for p in Pillar::ALL {
            map.insert(p, Vec::new());
        }
        for def in &self.indicators {
            map.get_mut(&def.pillar).unwrap().push(def);
        }
        map
    }

    /// Providers in canonical (id-sorted) order.
    pub fn providers(&self) -> Vec<&Subject> {
        let mut v: Vec<&Subject> = self
            .subjects
            .iter()
            .filter(|s| s.kind == SubjectKind::Provider)
            .collect();
        v.sort_by(|a, b| a.subject_id.cmp(&b.subject_id));
        v
    }

    /// Systems owned by a provider, in canonical order.
    pub fn systems_of(&self, provider_id: &str) -> Vec<&Subject> {
        let mut v: Vec<&Subject> = self
            .subjects
            .iter()
            .filter(|s| {
                s.kind == SubjectKind::System && s.provider_id.as_deref() == Some(provider_id)
            })
            .collect();
        v.sort_by(|a, b| a.subject_id.cmp(&b.subject_id));
        v
    }
}
