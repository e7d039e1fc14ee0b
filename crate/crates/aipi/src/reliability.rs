//! Double-coding sample selection and inter-rater agreement.
//!
//! Krippendorff's alpha is computed from the coincidence-matrix formulation
//! over pairable values; the nominal metric serves binary codes and the
//! interval metric serves ordinal and count codes on their normalized [0,1]
//! scale. Percent agreement is reported alongside as a transparency
//! companion.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{CodeValue, Dataset, IndicatorKind};
use crate::normalize::CountReferenceTable;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Nominal,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityReport {
    pub alpha_overall: Option<f64>,
    pub alpha_by_kind: BTreeMap<String, Option<f64>>,
    pub percent_agreement: f64,
    pub n_items: usize,
    pub n_coders: usize,
    pub sample_fraction: f64,
    pub seed: u64,
    pub sample_manifest: Vec<(String, String)>,
}

/// Select the stratified double-coding sample: strata are pillar x indicator
/// kind; within each stratum items are sorted, permuted by a seeded
/// generator, and the first `ceil(fraction * stratum size)` taken.
pub fn select_sample(
    d: &Dataset,
    fraction: f64,
    seed: u64,
) -> Result<Vec<(String, String)>, Error> {
    assert!(fraction > 0.0 && fraction <= 1.0, "fraction must be in (0, 1]");
    if d.subjects.is_empty() || d.indicators.is_empty() {
        return Err(Error::Empty);
    }
    let mut strata: BTreeMap<(crate::model::Pillar, IndicatorKind), Vec<(String, String)>> =
        BTreeMap::new();
    for def in &d.indicators {
        for s in &d.subjects {
            strata
                .entry((def.pillar, def.kind))
                .or_default()
                .push((s.subject_id.clone(), def.id.clone()));
        }
    }
    let mut selected = Vec::new();
    for (idx, (_, mut items)) in strata.into_iter().enumerate() {
        items.sort();
        let take = ((fraction * items.len() as f64).ceil() as usize).min(items.len());
        let mut rng = SplitMix64::derive(seed, idx as u64);
        rng.shuffle(&mut items);
        selected.extend(items.into_iter().take(take));
    }
    selected.sort();
    Ok(selected)
}

/// Krippendorff's alpha over an item x coder matrix; `None` entries are
/// missing. Returns `None` (undefined) when fewer than two items have two or
/// more codes, or when expected disagreement is zero (constant data).
pub fn krippendorff_alpha(matrix: &[Vec<Option<f64>>], metric: Metric) -> Option<f64> {
    // distinct values as categories
    let mut categories: Vec<u64> = matrix
        .iter()
        .flatten()
        .flatten()
        .map(|v| v.to_bits())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    categories.sort_unstable();
    let index: BTreeMap<u64, usize> = categories
        .iter()
        .enumerate()
        .map(|(i, b)| (*b, i))
        .collect();
    let m = categories.len();
    if m == 0 {
        return None;
    }

    let pairable_units = matrix
        .iter()
        .filter(|unit| unit.iter().flatten().count() >= 2)
        .count();
    if pairable_units < 2 {
        return None;
    }

    // coincidence matrix: each ordered pair within a unit contributes
    // 1 / (m_u - 1)
    let mut coincidence = vec![vec![0.0f64; m]; m];
    for unit in matrix {
        let values: Vec<usize> = unit
            .iter()
            .flatten()
            .map(|v| index[&v.to_bits()])
            .collect();
        let mu = values.len();
        if mu < 2 {
            continue;
        }
        let w = 1.0 / (mu as f64 - 1.0);
        for (i, &a) in values.iter().enumerate() {
            for (j, &b) in values.iter().enumerate() {
                if i != j {
                    coincidence[a][b] += w;
                }
            }
        }
    }

    let totals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = totals.iter().sum();
    if n <= 1.0 {
        return None;
    }

    let delta = |a: usize, b: usize| -> f64 {
        match metric {
            Metric::Nominal => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
            Metric::Interval => {
                let va = f64::from_bits(categories[a]);
                let vb = f64::from_bits(categories[b]);
                (va - vb) * (va - vb)
            }
        }
    };

    let mut d_o = 0.0;
    let mut d_e = 0.0;
    for a in 0..m {
        for b in 0..m {
            d_o += coincidence[a][b] * delta(a, b);
            d_e += totals[a] * totals[b] * delta(a, b);
        }
    }
    d_o /= n;
    d_e /= n * (n - 1.0);
    if d_e == 0.0 {
        return None;
    }
    Some(1.0 - d_o / d_e)
}

/// Fraction of coder pairs with exactly equal values, averaged over items
/// with two or more codes.
pub fn percent_agreement(matrix: &[Vec<Option<f64>>]) -> Result<f64, Error> {
    let mut per_item = Vec::new();
    for unit in matrix {
        let values: Vec<f64> = unit.iter().flatten().copied().collect();
        if values.len() < 2 {
            continue;
        }
        let mut pairs = 0usize;
        let mut equal = 0usize;
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                pairs += 1;
                if values[i].to_bits() == values[j].to_bits() {
                    equal += 1;
                }
            }
        }
        per_item.push(equal as f64 / pairs as f64);
    }
    if per_item.is_empty() {
        return Err(Error::NoPairs);
    }
    Ok(per_item.iter().sum::<f64>() / per_item.len() as f64)
}

/// Per-coder raw value mapped onto the comparison scale for its kind.
fn comparison_value(value: CodeValue, kind: IndicatorKind, c_ref: Option<f64>) -> Option<f64> {
    match (value, kind) {
        (CodeValue::Unknown, _) => None,
        (CodeValue::Yes, IndicatorKind::Binary) => Some(1.0),
        (CodeValue::No, IndicatorKind::Binary) => Some(0.0),
        (CodeValue::Ordinal(v), IndicatorKind::Ordinal3) => Some(v as f64 / 2.0),
        (CodeValue::Count(c), IndicatorKind::Count) => {
            let r = c_ref.unwrap_or(1.0);
            Some(((1.0 + c as f64).ln() / (1.0 + r).ln()).min(1.0))
        }
        _ => None,
    }
}

/// Build item x coder matrices from the raw multi-coder codes and compute
/// the full reliability report.
pub fn reliability_report(
    d: &Dataset,
    c_ref: &CountReferenceTable,
    fraction: f64,
    seed: u64,
) -> Result<ReliabilityReport, Error> {
    let sample_manifest = select_sample(d, fraction, seed)?;

    let mut coders: Vec<String> = d.codes.iter().map(|c| c.coder_id.clone()).collect();
    coders.sort();
    coders.dedup();
    let coder_index: BTreeMap<&str, usize> = coders
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();

    // (subject, indicator) -> row of per-coder values, per kind and overall
    let mut overall: BTreeMap<(String, String), Vec<Option<f64>>> = BTreeMap::new();
    let mut by_kind: BTreeMap<IndicatorKind, BTreeMap<(String, String), Vec<Option<f64>>>> =
        BTreeMap::new();
    for code in &d.codes {
        let def = d.indicator(&code.indicator_id).expect("validated");
        let key = (code.subject_id.clone(), code.indicator_id.clone());
        let v = comparison_value(code.value, def.kind, c_ref.get(&def.id));
        let ci = coder_index[code.coder_id.as_str()];
        overall
            .entry(key.clone())
            .or_insert_with(|| vec![None; coders.len()])[ci] = v;
        by_kind
            .entry(def.kind)
            .or_default()
            .entry(key)
            .or_insert_with(|| vec![None; coders.len()])[ci] = v;
    }

    let overall_matrix: Vec<Vec<Option<f64>>> = overall.into_values().collect();
    let alpha_overall = krippendorff_alpha(&overall_matrix, Metric::Interval);

    let mut alpha_by_kind = BTreeMap::new();
    for (kind, items) in by_kind {
        let matrix: Vec<Vec<Option<f64>>> = items.into_values().collect();
        let metric = match kind {
            IndicatorKind::Binary => Metric::Nominal,
            IndicatorKind::Ordinal3 | IndicatorKind::Count => Metric::Interval,
        };
        alpha_by_kind.insert(kind.as_str().to_string(), krippendorff_alpha(&matrix, metric));
    }

    let n_items = overall_matrix
        .iter()
        .filter(|unit| unit.iter().flatten().count() >= 2)
        .count();
    let percent = percent_agreement(&overall_matrix).unwrap_or(1.0);

    Ok(ReliabilityReport {
        alpha_overall,
        alpha_by_kind,
        percent_agreement: percent,
        n_items,
        n_coders: coders.len(),
        sample_fraction: fraction,
        seed,
        sample_manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_coders(rows: &[(Option<f64>, Option<f64>)]) -> Vec<Vec<Option<f64>>> {
        rows.iter().map(|(a, b)| vec![*a, *b]).collect()
    }

    #[test]
    fn perfect_agreement_is_one() {
        let rows: Vec<(Option<f64>, Option<f64>)> = (0..10)
            .map(|i| {
                let v = if i % 2 == 0 { 1.0 } else { 0.0 };
                (Some(v), Some(v))
            })
            .collect();
        let a = krippendorff_alpha(&two_coders(&rows), Metric::Nominal).unwrap();
        assert!((a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn systematic_disagreement_is_negative() {
        // balanced 50/50 value distribution, disagreement on every item
        let rows: Vec<(Option<f64>, Option<f64>)> = (0..10)
            .map(|i| {
                if i % 2 == 0 {
                    (Some(1.0), Some(0.0))
                } else {
                    (Some(0.0), Some(1.0))
                }
            })
            .collect();
        let a = krippendorff_alpha(&two_coders(&rows), Metric::Nominal).unwrap();
        assert!(a < 0.0, "alpha = {a}");
    }

    #[test]
    fn constant_data_is_undefined() {
        let rows: Vec<(Option<f64>, Option<f64>)> =
            (0..8).map(|_| (Some(1.0), Some(1.0))).collect();
        assert_eq!(krippendorff_alpha(&two_coders(&rows), Metric::Nominal), None);
        assert_eq!(krippendorff_alpha(&two_coders(&rows), Metric::Interval), None);
    }

    #[test]
    fn single_coded_items_are_undefined() {
        let rows = two_coders(&[(Some(1.0), None), (Some(0.0), None)]);
        assert_eq!(krippendorff_alpha(&rows, Metric::Nominal), None);
    }

    #[test]
    fn alpha_invariant_under_item_permutation_and_coder_relabel() {
        let rows = two_coders(&[
            (Some(1.0), Some(1.0)),
            (Some(0.0), Some(1.0)),
            (Some(0.0), Some(0.0)),
            (Some(1.0), Some(0.0)),
            (Some(1.0), Some(1.0)),
        ]);
        let a = krippendorff_alpha(&rows, Metric::Nominal).unwrap();
        let mut permuted = rows.clone();
        permuted.reverse();
        let b = krippendorff_alpha(&permuted, Metric::Nominal).unwrap();
        assert!((a - b).abs() < 1e-15);
        // swap coder columns
        let swapped: Vec<Vec<Option<f64>>> =
            rows.iter().map(|r| vec![r[1], r[0]]).collect();
        let c = krippendorff_alpha(&swapped, Metric::Nominal).unwrap();
        assert!((a - c).abs() < 1e-15);
    }

    #[test]
    fn percent_agreement_basics() {
        let rows = two_coders(&[(Some(1.0), Some(1.0)), (Some(0.0), Some(1.0))]);
        assert_eq!(percent_agreement(&rows).unwrap(), 0.5);
        // three coders, one dissenter per item: 1 agreeing pair of 3
        let rows = vec![vec![Some(1.0), Some(1.0), Some(0.0)]];
        assert!((percent_agreement(&rows).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let err = percent_agreement(&two_coders(&[(Some(1.0), None)])).unwrap_err();
        assert_eq!(err.code(), "E_NO_PAIRS");
    }
}
