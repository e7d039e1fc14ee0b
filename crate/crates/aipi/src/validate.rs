//! Semantic validation of a parsed dataset against a release cutoff.
//!
//! Violations are the return value, not errors; `error`-severity entries
//! block scoring, `warning`-severity entries do not.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::model::Dataset;
use crate::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub severity: Severity,
    pub code: String,
    pub file: String,
    pub context: String,
    pub message: String,
}

impl Violation {
    fn error(code: &str, file: &str, context: String, message: String) -> Self {
        Violation {
            severity: Severity::Error,
            code: code.to_string(),
            file: file.to_string(),
            context,
            message,
        }
    }

    fn warning(code: &str, file: &str, context: String, message: String) -> Self {
        Violation {
            severity: Severity::Warning,
            code: code.to_string(),
            file: file.to_string(),
            context,
            message,
        }
    }
}

/// Check every dataset invariant plus the cutoff rule. Returns all
/// violations sorted by (file, context, code); empty iff the dataset is
/// eligible for scoring.
pub fn validate_dataset(d: &Dataset, cutoff: NaiveDate) -> Vec<Violation> {
    let mut violations = Vec::new();

    // structural invariants, reported in full rather than fail-fast
    for err in parse::link_errors(d) {
        violations.push(Violation::error(
            err.code(),
            "dataset",
            String::new(),
            err.to_string(),
        ));
    }

    for a in &d.artifacts {
        let ctx = a.artifact_id.clone();
        if !has_public_scheme(&a.url) {
            violations.push(Violation::error(
                "E_URL_SCHEME",
                parse::ARTIFACTS_FILE,
                ctx.clone(),
                format!("url `{}` must use http or https", a.url),
            ));
        }
        if let Some(archive) = &a.archive_url {
            if !has_public_scheme(archive) {
                violations.push(Violation::error(
                    "E_URL_SCHEME",
                    parse::ARTIFACTS_FILE,
                    ctx.clone(),
                    format!("archive_url `{archive}` must use http or https"),
                ));
            }
        }
        if a.retrieved_date > cutoff {
            violations.push(Violation::error(
                "E_AFTER_CUTOFF",
                parse::ARTIFACTS_FILE,
                ctx.clone(),
                format!(
                    "retrieved_date {} is after the release cutoff {cutoff}",
                    a.retrieved_date
                ),
            ));
        }
        if a.published_date.is_none() {
            violations.push(Violation::warning(
                "W_NO_PUB_DATE",
                parse::ARTIFACTS_FILE,
                ctx,
                "artifact has no published_date".to_string(),
            ));
        }
    }

    for code in &d.codes {
        if code.coded_date > cutoff {
            violations.push(Violation::error(
                "E_AFTER_CUTOFF",
                parse::CODES_FILE,
                format!(
                    "({}, {}, {})",
                    code.subject_id, code.indicator_id, code.coder_id
                ),
                format!("coded_date {} is after the release cutoff {cutoff}", code.coded_date),
            ));
        }
    }

    violations.sort_by(|a, b| {
        (&a.file, &a.context, &a.code).cmp(&(&b.file, &b.context, &b.code))
    });
    violations
}

/// Count of blocking violations.
pub fn error_count(violations: &[Violation]) -> usize {
    violations
        .iter()
        .filter(|v| v.severity == Severity::Error)
        .count()
}

fn has_public_scheme(url: &str) -> bool {
    let lower = url.to_ascii_lowercase();
    (lower.starts_with("http://") || lower.starts_with("https://"))
        && url.len() > "https://".len()
}
