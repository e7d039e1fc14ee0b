//! Rank-stability analyses: Kendall's tau-b between alternative score
//! vectors, leave-one-pillar-out and leave-one-indicator-out checks, weight
//! perturbations, stratified indicator bootstrap intervals, and the
//! AIPI-versus-coverage dependence table with rank-flip detection.
//!
//! All analyses rank provider-level scores, the unit the index publishes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{Dataset, Pillar};
use crate::normalize::NormalizedValue;
use crate::parallel;
use crate::rng::SplitMix64;
use crate::score::ScoredDataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub subject_id: String,
    pub score: f64,
    /// Ties share the mean rank (1-based, descending by score).
    pub rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankVector {
    pub entries: Vec<RankEntry>,
}

/// Rank scores descending; tied scores share the mean rank. Entries are
/// sorted by descending score, ties broken by subject_id for display only.
pub fn rank_vector(scores: &[(String, f64)]) -> RankVector {
    let mut ordered: Vec<(String, f64)> = scores.to_vec();
    ordered.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("scores are finite")
            .then_with(|| a.0.cmp(&b.0))
    });
    let mut entries: Vec<RankEntry> = Vec::with_capacity(ordered.len());
    let mut i = 0;
    while i < ordered.len() {
        let mut j = i;
        while j < ordered.len() && ordered[j].1 == ordered[i].1 {
            j += 1;
        }
        // positions i..j share the mean of ranks i+1 ..= j
        let mean_rank = (i + 1 + j) as f64 / 2.0;
        for item in &ordered[i..j] {
            entries.push(RankEntry {
                subject_id: item.0.clone(),
                score: item.1,
                rank: mean_rank,
            });
        }
        i = j;
    }
    RankVector { entries }
}

/// Tie-corrected Kendall's tau-b between two score vectors over the same
/// subjects. `Ok(None)` when either vector is constant.
///
/// Computed by the sort-and-merge formulation: discordant pairs are counted
/// as inversions while merge-sorting by the second key, tie terms from run
/// lengths. The O(n^2) pair enumeration lives in the test suite as the
/// independent oracle.
pub fn kendall_tau(a: &RankVector, b: &RankVector) -> Result<Option<f64>, Error> {
    let mut score_a: BTreeMap<&str, f64> = BTreeMap::new();
    for e in &a.entries {
        score_a.insert(&e.subject_id, e.score);
    }
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(b.entries.len());
    for e in &b.entries {
        match score_a.remove(e.subject_id.as_str()) {
            Some(x) => pairs.push((x, e.score)),
            None => return Err(Error::SubjectMismatch),
        }
    }
    if !score_a.is_empty() {
        return Err(Error::SubjectMismatch);
    }
    let n = pairs.len();
    assert!(n >= 2, "kendall_tau requires at least two subjects");

    pairs.sort_by(|p, q| {
        p.0.partial_cmp(&q.0)
            .expect("finite")
            .then(p.1.partial_cmp(&q.1).expect("finite"))
    });

    let n0 = n as u64 * (n as u64 - 1) / 2;
    let tie_pairs = |counts: &[u64]| -> u64 { counts.iter().map(|&t| t * (t - 1) / 2).sum() };

    // ties in x and joint ties, from runs of the (x, y)-sorted order
    let mut x_runs = Vec::new();
    let mut xy_runs = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        x_runs.push((j - i) as u64);
        let mut k = i;
        while k < j {
            let mut l = k;
            while l < j && pairs[l].1 == pairs[k].1 {
                l += 1;
            }
            xy_runs.push((l - k) as u64);
            k = l;
        }
        i = j;
    }
    let n1 = tie_pairs(&x_runs);
    let n3 = tie_pairs(&xy_runs);

    // discordant pairs = inversions on y once sorted by x
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let swaps = count_inversions(&mut ys);

    // ties in y, from the now fully sorted y values
    let mut y_runs = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && ys[j] == ys[i] {
            j += 1;
        }
        y_runs.push((j - i) as u64);
        i = j;
    }
    let n2 = tie_pairs(&y_runs);

    let denom_x = n0 - n1; // pairs not tied in x
    let denom_y = n0 - n2; // pairs not tied in y
    if denom_x == 0 || denom_y == 0 {
        return Ok(None);
    }
    let numerator = n0 as i64 - n1 as i64 - n2 as i64 + n3 as i64 - 2 * swaps as i64;
    Ok(Some(
        numerator as f64 / (denom_x as f64 * denom_y as f64).sqrt(),
    ))
}

/// Merge sort counting inversions; leaves `values` sorted.
fn count_inversions(values: &mut [f64]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = values.split_at_mut(mid);
    let mut swaps = count_inversions(left) + count_inversions(right);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            merged.push(left[i]);
            i += 1;
        } else {
            swaps += (left.len() - i) as u64;
            merged.push(right[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&left[i..]);
    merged.extend_from_slice(&right[j..]);
    values.copy_from_slice(&merged);
    swaps
}

/// Recomputes provider-level evidence scores under modified indicator sets
/// and pillar weights.
pub struct ScoreEngine<'a> {
    dataset: &'a Dataset,
    scored: &'a ScoredDataset,
}

impl<'a> ScoreEngine<'a> {
    pub fn new(dataset: &'a Dataset, scored: &'a ScoredDataset) -> Self {
        ScoreEngine { dataset, scored }
    }

    /// Indicator ids per pillar, in canonical order.
    pub fn indicator_sets(&self) -> BTreeMap<Pillar, Vec<String>> {
        let mut sets: BTreeMap<Pillar, Vec<String>> = BTreeMap::new();
        for p in Pillar::ALL {
            sets.insert(p, Vec::new());
        }
        for def in &self.dataset.indicators {
            sets.get_mut(&def.pillar).unwrap().push(def.id.clone());
        }
        sets
    }

    /// Evidence pillar score for one subject over an explicit indicator
    /// multiset (unknown values count as zero).
    fn subject_pillar_evid(&self, subject_id: &str, indicators: &[String]) -> f64 {
        let vals = &self.scored.values[subject_id];
        let sum: f64 = indicators
            .iter()
            .map(|id| {
                vals.get(id)
                    .copied()
                    .unwrap_or(NormalizedValue::Unknown)
                    .known()
                    .unwrap_or(0.0)
            })
            .sum();
        sum / indicators.len() as f64
    }

    fn subject_evid(
        &self,
        subject_id: &str,
        sets: &BTreeMap<Pillar, Vec<String>>,
        weights: &BTreeMap<Pillar, f64>,
    ) -> f64 {
        let total: f64 = weights.values().sum();
        sets.iter()
            .filter(|(_, inds)| !inds.is_empty())
            .map(|(p, inds)| weights[p] / total * self.subject_pillar_evid(subject_id, inds))
            .sum()
    }

    /// Provider-level evidence scores under the given indicator multisets
    /// and pillar weights, in canonical provider order. Pillars with an
    /// empty indicator set are excluded (their weight renormalizes away).
    pub fn provider_evid(
        &self,
        sets: &BTreeMap<Pillar, Vec<String>>,
        weights: &BTreeMap<Pillar, f64>,
    ) -> Vec<(String, f64)> {
        self.dataset
            .providers()
            .iter()
            .map(|provider| {
                let systems = self.dataset.systems_of(&provider.subject_id);
                let score = if systems.is_empty() {
                    self.subject_evid(&provider.subject_id, sets, weights)
                } else {
                    systems
                        .iter()
                        .map(|s| self.subject_evid(&s.subject_id, sets, weights))
                        .sum::<f64>()
                        / systems.len() as f64
                };
                (provider.subject_id.clone(), score)
            })
            .collect()
    }

    pub fn uniform_weights() -> BTreeMap<Pillar, f64> {
        Pillar::ALL.iter().map(|&p| (p, 0.25)).collect()
    }

    /// Baseline provider evidence ranking.
    pub fn baseline(&self) -> Vec<(String, f64)> {
        self.provider_evid(&self.indicator_sets(), &Self::uniform_weights())
    }
}

/// For each pillar, recompute the overall score from the remaining three
/// pillars and report tau against the full-index ranking.
pub fn leave_one_pillar_out(
    dataset: &Dataset,
    scored: &ScoredDataset,
) -> Result<BTreeMap<Pillar, Option<f64>>, Error> {
    let engine = ScoreEngine::new(dataset, scored);
    let sets = engine.indicator_sets();
    let baseline = rank_vector(&engine.baseline());
    let mut result = BTreeMap::new();
    for drop in Pillar::ALL {
        let weights: BTreeMap<Pillar, f64> = Pillar::ALL
            .iter()
            .map(|&p| (p, if p == drop { 0.0 } else { 1.0 / 3.0 }))
            .collect();
        let alternative = rank_vector(&engine.provider_evid(&sets, &weights));
        result.insert(drop, kendall_tau(&baseline, &alternative)?);
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JackknifeSummary {
    pub min: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
    /// Indicator whose removal destabilizes the ranking most.
    pub argmin_indicator: Option<String>,
    /// Indicators skipped because their pillar would be left empty.
    pub skipped: Vec<String>,
}

/// Leave-one-indicator-out tau summary. Indicators whose pillar has a single
/// indicator are skipped (reported, not dropped silently).
pub fn indicator_jackknife(
    dataset: &Dataset,
    scored: &ScoredDataset,
) -> Result<JackknifeSummary, Error> {
    let engine = ScoreEngine::new(dataset, scored);
    let sets = engine.indicator_sets();
    let baseline = rank_vector(&engine.baseline());
    let weights = ScoreEngine::uniform_weights();

    let mut taus: Vec<(String, Option<f64>)> = Vec::new();
    let mut skipped = Vec::new();
    for def in &dataset.indicators {
        if sets[&def.pillar].len() < 2 {
            // W_PILLAR_MIN: removal would empty the pillar
            skipped.push(def.id.clone());
            continue;
        }
        let mut reduced = sets.clone();
        reduced
            .get_mut(&def.pillar)
            .unwrap()
            .retain(|id| id != &def.id);
        let alternative = rank_vector(&engine.provider_evid(&reduced, &weights));
        taus.push((def.id.clone(), kendall_tau(&baseline, &alternative)?));
    }

    let defined: Vec<(&String, f64)> = taus
        .iter()
        .filter_map(|(id, t)| t.map(|t| (id, t)))
        .collect();
    let (min, mean, max, argmin) = if defined.is_empty() {
        (None, None, None, None)
    } else {
        let min = defined
            .iter()
            .fold(f64::INFINITY, |acc, (_, t)| acc.min(*t));
        let max = defined
            .iter()
            .fold(f64::NEG_INFINITY, |acc, (_, t)| acc.max(*t));
        let mean = defined.iter().map(|(_, t)| t).sum::<f64>() / defined.len() as f64;
        let argmin = defined
            .iter()
            .filter(|(_, t)| *t == min)
            .map(|(id, _)| (*id).clone())
            .min();
        (Some(min), Some(mean), Some(max), argmin)
    };
    Ok(JackknifeSummary {
        min,
        mean,
        max,
        argmin_indicator: argmin,
        skipped,
    })
}

/// The +-10% weight reallocation grid: for each ordered pillar pair (p, q),
/// move a tenth of the uniform weight from q to p and report tau against
/// the baseline ranking.
pub fn weight_perturbations(
    dataset: &Dataset,
    scored: &ScoredDataset,
) -> Result<BTreeMap<String, Option<f64>>, Error> {
    let engine = ScoreEngine::new(dataset, scored);
    let sets = engine.indicator_sets();
    let baseline = rank_vector(&engine.baseline());
    let mut result = BTreeMap::new();
    for gain in Pillar::ALL {
        for lose in Pillar::ALL {
            if gain == lose {
                continue;
            }
            let delta = 0.25 * 0.10;
            let weights: BTreeMap<Pillar, f64> = Pillar::ALL
                .iter()
                .map(|&p| {
                    let w = if p == gain {
                        0.25 + delta
                    } else if p == lose {
                        0.25 - delta
                    } else {
                        0.25
                    };
                    (p, w)
                })
                .collect();
            let alternative = rank_vector(&engine.provider_evid(&sets, &weights));
            result.insert(
                format!("{gain}+10pct_{lose}-10pct"),
                kendall_tau(&baseline, &alternative)?,
            );
        }
    }
    Ok(result)
}

/// Percentile bootstrap over within-pillar indicator resamples. Each
/// resample redraws every pillar's indicator multiset with replacement
/// (preserving its size, shared across subjects) and recomputes the
/// provider evidence scores. Deterministic given the seed; resamples reduce
/// into seed-indexed slots, so parallel execution matches sequential.
pub fn bootstrap_intervals(
    dataset: &Dataset,
    scored: &ScoredDataset,
    n_resamples: usize,
    seed: u64,
) -> BTreeMap<String, (f64, f64)> {
    bootstrap_intervals_at(dataset, scored, n_resamples, seed, 0.025, 0.975)
}

pub fn bootstrap_intervals_at(
    dataset: &Dataset,
    scored: &ScoredDataset,
    n_resamples: usize,
    seed: u64,
    q_lo: f64,
    q_hi: f64,
) -> BTreeMap<String, (f64, f64)> {
    assert!(n_resamples >= 1);
    let engine = ScoreEngine::new(dataset, scored);
    let sets = engine.indicator_sets();
    let weights = ScoreEngine::uniform_weights();

    let resample_results: Vec<Vec<(String, f64)>> =
        parallel::map_indexed((0..n_resamples as u64).collect(), |r| {
            let mut rng = SplitMix64::derive(seed, r);
            let mut drawn: BTreeMap<Pillar, Vec<String>> = BTreeMap::new();
            for (&p, inds) in &sets {
                let mut sample = Vec::with_capacity(inds.len());
                for _ in 0..inds.len() {
                    sample.push(inds[rng.gen_range(inds.len() as u64) as usize].clone());
                }
                drawn.insert(p, sample);
            }
            engine.provider_evid(&drawn, &weights)
        });

    let providers: Vec<String> = dataset
        .providers()
        .iter()
        .map(|p| p.subject_id.clone())
        .collect();
    let mut intervals = BTreeMap::new();
    for (idx, pid) in providers.iter().enumerate() {
        let mut stats: Vec<f64> = resample_results
            .iter()
            .map(|r| {
                debug_assert_eq!(&r[idx].0, pid);
                r[idx].1
            })
            .collect();
        stats.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let lo = percentile_nearest_rank(&stats, q_lo);
        let hi = percentile_nearest_rank(&stats, q_hi);
        intervals.insert(pid.clone(), (lo, hi));
    }
    intervals
}

/// Nearest-rank percentile over a sorted sample.
fn percentile_nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageBin {
    pub bin: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean_evid: Option<f64>,
    pub mean_known: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFlip {
    pub subject_a: String,
    pub subject_b: String,
    pub condition: String,
}

/// Equal-width coverage bins with per-bin mean scores, plus the provider
/// pairs whose order differs between the evidence and known-only rankings.
pub fn coverage_dependence(
    dataset: &Dataset,
    scored: &ScoredDataset,
    n_bins: usize,
) -> (Vec<CoverageBin>, Vec<RankFlip>) {
    assert!(n_bins >= 2);

    // provider-level coverage, evid, known
    let mut rows: Vec<(String, f64, f64, Option<f64>)> = Vec::new();
    for provider in dataset.providers() {
        let systems = dataset.systems_of(&provider.subject_id);
        let units: Vec<&str> = if systems.is_empty() {
            vec![provider.subject_id.as_str()]
        } else {
            systems.iter().map(|s| s.subject_id.as_str()).collect()
        };
        let coverage = units
            .iter()
            .map(|u| scored.subject(u).expect("scored").mean_coverage())
            .sum::<f64>()
            / units.len() as f64;
        let ps = scored
            .provider_scores
            .iter()
            .find(|p| p.provider_id == provider.subject_id)
            .expect("scored");
        rows.push((provider.subject_id.clone(), coverage, ps.aipi_evid, ps.aipi_known));
    }

    let mut bins = Vec::with_capacity(n_bins);
    for b in 0..n_bins {
        let lo = b as f64 / n_bins as f64;
        let hi = (b + 1) as f64 / n_bins as f64;
        let members: Vec<&(String, f64, f64, Option<f64>)> = rows
            .iter()
            .filter(|(_, cov, _, _)| {
                let idx = ((cov * n_bins as f64).floor() as usize).min(n_bins - 1);
                idx == b
            })
            .collect();
        let count = members.len();
        let mean_evid =
            (count > 0).then(|| members.iter().map(|m| m.2).sum::<f64>() / count as f64);
        let known: Vec<f64> = members.iter().filter_map(|m| m.3).collect();
        let mean_known =
            (!known.is_empty()).then(|| known.iter().sum::<f64>() / known.len() as f64);
        bins.push(CoverageBin {
            bin: format!("[{lo:.2},{hi:.2})"),
            lo,
            hi,
            count,
            mean_evid,
            mean_known,
        });
    }

    // rank flips between evid and known-only orderings
    let mut flips = Vec::new();
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            if let (Some(ka), Some(kb)) = (a.3, b.3) {
                let evid_order = a.2 - b.2;
                let known_order = ka - kb;
                if evid_order * known_order < 0.0 {
                    flips.push(RankFlip {
                        subject_a: a.0.clone(),
                        subject_b: b.0.clone(),
                        condition: "evid_vs_known".to_string(),
                    });
                }
            }
        }
    }
    (bins, flips)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub tau_leave_one_pillar_out: BTreeMap<Pillar, Option<f64>>,
    pub tau_indicator_jackknife: JackknifeSummary,
    pub weight_perturbation: BTreeMap<String, Option<f64>>,
    pub bootstrap: BTreeMap<String, (f64, f64)>,
    pub coverage_dependence: Vec<CoverageBin>,
    pub rank_flips: Vec<RankFlip>,
    /// Per-provider min/max rank across all sensitivity conditions
    /// (operational reading of published rank intervals).
    pub rank_intervals: BTreeMap<String, (f64, f64)>,
    pub n_resamples: usize,
    pub bootstrap_seed: u64,
    pub n_bins: usize,
}

/// Run every sensitivity analysis.
pub fn sensitivity_report(
    dataset: &Dataset,
    scored: &ScoredDataset,
    n_resamples: usize,
    seed: u64,
    n_bins: usize,
) -> Result<SensitivityReport, Error> {
    let engine = ScoreEngine::new(dataset, scored);
    let sets = engine.indicator_sets();
    let baseline_scores = engine.baseline();

    let tau_lopo = leave_one_pillar_out(dataset, scored)?;
    let jackknife = indicator_jackknife(dataset, scored)?;
    let perturbation = weight_perturbations(dataset, scored)?;
    let bootstrap = bootstrap_intervals(dataset, scored, n_resamples, seed);
    let (bins, flips) = coverage_dependence(dataset, scored, n_bins);

    // rank intervals across every condition examined above
    let mut conditions: Vec<Vec<(String, f64)>> = vec![baseline_scores.clone()];
    for drop in Pillar::ALL {
        let weights: BTreeMap<Pillar, f64> = Pillar::ALL
            .iter()
            .map(|&p| (p, if p == drop { 0.0 } else { 1.0 / 3.0 }))
            .collect();
        conditions.push(engine.provider_evid(&sets, &weights));
    }
    for def in &dataset.indicators {
        if sets[&def.pillar].len() < 2 {
            continue;
        }
        let mut reduced = sets.clone();
        reduced
            .get_mut(&def.pillar)
            .unwrap()
            .retain(|id| id != &def.id);
        conditions.push(engine.provider_evid(&reduced, &ScoreEngine::uniform_weights()));
    }
    let mut rank_intervals: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for condition in &conditions {
        for entry in rank_vector(condition).entries {
            let slot = rank_intervals
                .entry(entry.subject_id)
                .or_insert((entry.rank, entry.rank));
            slot.0 = slot.0.min(entry.rank);
            slot.1 = slot.1.max(entry.rank);
        }
    }

    Ok(SensitivityReport {
        tau_leave_one_pillar_out: tau_lopo,
        tau_indicator_jackknife: jackknife,
        weight_perturbation: perturbation,
        bootstrap,
        coverage_dependence: bins,
        rank_flips: flips,
        rank_intervals,
        n_resamples,
        bootstrap_seed: seed,
        n_bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(scores: &[f64]) -> RankVector {
        let named: Vec<(String, f64)> = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| (format!("S{i:02}"), s))
            .collect();
        rank_vector(&named)
    }

    #[test]
    fn identical_rankings_tau_one() {
        let a = rv(&[0.9, 0.5, 0.3, 0.1]);
        assert_eq!(kendall_tau(&a, &a).unwrap(), Some(1.0));
    }

    #[test]
    fn reversed_rankings_tau_minus_one() {
        let a = rv(&[1.0, 2.0, 3.0, 4.0]);
        let b = rv(&[4.0, 3.0, 2.0, 1.0]);
        assert_eq!(kendall_tau(&a, &b).unwrap(), Some(-1.0));
    }

    #[test]
    fn known_third_case() {
        // a = (1,2,3,4), b = (2,1,4,3): C = 4, D = 2, tau = 1/3
        let a = rv(&[1.0, 2.0, 3.0, 4.0]);
        let b = rv(&[2.0, 1.0, 4.0, 3.0]);
        let tau = kendall_tau(&a, &b).unwrap().unwrap();
        assert!((tau - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_vector_undefined() {
        let a = rv(&[1.0, 2.0, 3.0]);
        let b = rv(&[5.0, 5.0, 5.0]);
        assert_eq!(kendall_tau(&a, &b).unwrap(), None);
    }

    #[test]
    fn subject_mismatch_rejected() {
        let a = rv(&[1.0, 2.0]);
        let b = rank_vector(&[("X".to_string(), 1.0), ("Y".to_string(), 2.0)]);
        assert_eq!(kendall_tau(&a, &b).unwrap_err().code(), "E_SUBJECT_MISMATCH");
    }

    #[test]
    fn mean_ranks_for_ties() {
        let v = rv(&[0.5, 0.9, 0.5, 0.1]);
        let by_id: BTreeMap<&str, f64> = v
            .entries
            .iter()
            .map(|e| (e.subject_id.as_str(), e.rank))
            .collect();
        assert_eq!(by_id["S01"], 1.0);
        assert_eq!(by_id["S00"], 2.5);
        assert_eq!(by_id["S02"], 2.5);
        assert_eq!(by_id["S03"], 4.0);
    }

    #[test]
    fn percentile_nearest_rank_endpoints() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(percentile_nearest_rank(&v, 0.025), 3.0);
        assert_eq!(percentile_nearest_rank(&v, 0.975), 98.0);
        assert_eq!(percentile_nearest_rank(&[7.0], 0.5), 7.0);
    }
}
