//! Parallel vs. sequential throughput on the data-parallel inner loops:
//! subject scoring and the indicator bootstrap.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use aipi::model::{Dataset, IndicatorDef, IndicatorKind, Pillar, Subject, SubjectKind};
use aipi::normalize::NormalizedValue;
use aipi::rng::SplitMix64;
use aipi::score::{score_dataset, ScoredDataset};
use aipi::sensitivity::{bootstrap_intervals, ScoreEngine};

fn synthetic_dataset(n_subjects: usize, per_pillar: usize) -> Dataset {
    let mut indicators = Vec::new();
    for p in Pillar::ALL {
        for i in 1..=per_pillar {
            indicators.push(IndicatorDef {
                id: format!("{p}-{i:02}"),
                pillar: p,
                kind: IndicatorKind::Binary,
                title: String::new(),
            });
        }
    }
    let subjects = (0..n_subjects)
        .map(|i| Subject {
            subject_id: format!("P{i:03}"),
            name: format!("P{i:03}"),
            kind: SubjectKind::Provider,
            provider_id: None,
        })
        .collect();
    Dataset {
        indicators,
        subjects,
        artifacts: vec![],
        codes: vec![],
    }
}

fn with_random_values(dataset: &Dataset, seed: u64) -> ScoredDataset {
    let mut scored = score_dataset(dataset, None).unwrap();
    let mut rng = SplitMix64::new(seed);
    for values in scored.values.values_mut() {
        for v in values.values_mut() {
            *v = if rng.next_f64() < 0.3 {
                NormalizedValue::Unknown
            } else {
                NormalizedValue::Known((rng.next_u64() % 3) as f64 / 2.0)
            };
        }
    }
    scored
}

fn bench_bootstrap(c: &mut Criterion) {
    let dataset = synthetic_dataset(24, 8);
    let scored = with_random_values(&dataset, 7);
    let mut group = c.benchmark_group("bootstrap_1000_resamples");
    group.bench_function(BenchmarkId::from_parameter("map_indexed"), |b| {
        b.iter(|| bootstrap_intervals(&dataset, &scored, 1000, 42))
    });
    group.bench_function(BenchmarkId::from_parameter("sequential"), |b| {
        b.iter(|| bootstrap_sequential(&dataset, &scored, 1000, 42))
    });
    group.finish();
}

/// Hand-rolled sequential bootstrap, mirroring the library path without the
/// parallel map, as the comparison baseline.
fn bootstrap_sequential(
    dataset: &Dataset,
    scored: &ScoredDataset,
    n_resamples: usize,
    seed: u64,
) -> BTreeMap<String, (f64, f64)> {
    let engine = ScoreEngine::new(dataset, scored);
    let sets = engine.indicator_sets();
    let weights = ScoreEngine::uniform_weights();
    let results: Vec<Vec<(String, f64)>> = (0..n_resamples as u64)
        .map(|r| {
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
        })
        .collect();
    let mut intervals = BTreeMap::new();
    for (idx, provider) in dataset.providers().iter().enumerate() {
        let mut stats: Vec<f64> = results.iter().map(|r| r[idx].1).collect();
        stats.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lo = stats[((0.025 * stats.len() as f64).ceil() as usize).clamp(1, stats.len()) - 1];
        let hi = stats[((0.975 * stats.len() as f64).ceil() as usize).clamp(1, stats.len()) - 1];
        intervals.insert(provider.subject_id.clone(), (lo, hi));
    }
    intervals
}

fn bench_scoring(c: &mut Criterion) {
    let dataset = synthetic_dataset(200, 10);
    c.bench_function("score_200_subjects", |b| {
        b.iter(|| score_dataset(&dataset, None).unwrap())
    });
}

criterion_group!(benches, bench_bootstrap, bench_scoring);
criterion_main!(benches);
