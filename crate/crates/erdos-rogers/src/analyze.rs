//! Monte Carlo experiments and censuses over built graphs: subset clique
//! probes, monochromatic clique counts, multi-colour pair density, and the
//! per-scheme-class K_t census with exact crude predictions.

use std::collections::BTreeSet;
use std::time::Instant;

use num::rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::contains_clique;
use crate::construct::{cores_per_edge, run_pipeline, verify_ktfree, KtRecord};
use crate::error::{Error, Result};
use crate::exponents::{exponents, ConstructionParams, ExponentSet, PairClass};
use crate::graph::{ColouredGraph, Edge, Stage};
use crate::ratio::{format_ratio, int, pow_u32, to_f64};
use crate::rng::{purpose, stream_rng};
use crate::schemes::{canonical_form, enumerate_schemes, scheme_value};

/// Samples `trials` uniform `a`-subsets of the final graph and counts how
/// many induce a K_s. Per-trial RNG streams make the result independent of
/// scheduling; `trials = 0` returns `(0, 0)` without sampling.
pub fn subset_ks_probe(
    g: &ColouredGraph,
    a: usize,
    trials: usize,
    s: u32,
    seed: u64,
) -> Result<(usize, usize)> {
    if g.stage() != Stage::G {
        return Err(Error::WrongStage {
            expected: Stage::G,
            got: g.stage(),
        });
    }
    if a > g.n() || a == 0 {
        return Err(Error::BadSize { a, n: g.n() });
    }
    if trials == 0 {
        return Ok((0, 0));
    }
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut rng = stream_rng(seed, purpose::PROBE, trial as u64);
            let subset: Vec<u32> = rand::seq::index::sample(&mut rng, g.n(), a)
                .iter()
                .map(|i| i as u32)
                .collect();
            induced_contains_ks(g, &subset, s)
        })
        .count();
    Ok((successes, trials))
}

fn induced_contains_ks(g: &ColouredGraph, subset: &[u32], s: u32) -> bool {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if g.has_edge(sorted[i], sorted[j]) {
                edges.insert((i as u32, j as u32));
            }
        }
    }
    contains_clique(sorted.len(), &edges, s as usize).is_some()
}

/// Counts the classes that give a monochromatic K_s inside `subset`: classes
/// with s members of the subset in s distinct parts whose pairs all survive
/// in G1.
pub fn monochromatic_ks_census(g1: &ColouredGraph, subset: &[u32], s: u32) -> Result<usize> {
    if g1.stage() != Stage::G1 {
        return Err(Error::WrongStage {
            expected: Stage::G1,
            got: g1.stage(),
        });
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let count = g1
        .classes()
        .iter()
        .filter(|class| {
            // Members of the subset grouped by part.
            let mut by_part: Vec<Vec<u32>> = vec![Vec::new(); g1.s() as usize];
            for (idx, &v) in class.members.iter().enumerate() {
                if sorted.binary_search(&v).is_ok() {
                    by_part[(class.parts[idx] - 1) as usize].push(v);
                }
            }
            if by_part.iter().any(Vec::is_empty) || s > g1.s() {
                return false;
            }
            // One vertex per part, pairwise adjacent in G1.
            fn pick(g1: &ColouredGraph, by_part: &[Vec<u32>], chosen: &mut Vec<u32>) -> bool {
                let Some(part) = by_part.first() else {
                    return true;
                };
                for &v in part {
                    if chosen.iter().all(|&u| g1.has_edge(u, v)) {
                        chosen.push(v);
                        if pick(g1, &by_part[1..], chosen) {
                            return true;
                        }
                        chosen.pop();
                    }
                }
                false
            }
            pick(g1, &by_part, &mut Vec::new())
        })
        .count();
    Ok(count)
}

/// Exact fraction of vertex pairs in `subset` whose endpoints share two or
/// more classes.
pub fn multicolour_pair_density(g: &ColouredGraph, subset: &[u32]) -> Result<BigRational> {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Err(Error::EmptySubset { len: sorted.len() });
    }
    let colours = g.vertex_colours();
    let mut multi = 0i64;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let a = &colours[sorted[i] as usize];
            let b = &colours[sorted[j] as usize];
            let mut shared = 0;
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        shared += 1;
                        if shared >= 2 {
                            break;
                        }
                        x += 1;
                        y += 1;
                    }
                }
            }
            if shared >= 2 {
                multi += 1;
            }
        }
    }
    let k = sorted.len() as i64;
    Ok(int(multi) / int(k * (k - 1) / 2))
}

/// One row of the K_t census: a scheme class with its observed count and the
/// crude expected-count bound `n^t m^b gamma^l` evaluated exactly at the
/// run's parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub class: usize,
    pub b: usize,
    pub l: usize,
    /// Exact per-edge count exponent (the scheme value) as "p/q".
    pub value: String,
    pub observed: usize,
    /// Exact `n^t m^b gamma^l` as "p/q".
    pub predicted: String,
    /// The same prediction as a float, for readability.
    pub predicted_approx: f64,
}

/// Groups K_t records by scheme isomorphism class (indexed as in
/// [`enumerate_schemes`]) and attaches exact predictions.
pub fn scheme_census(
    kts: &[KtRecord],
    e: &ExponentSet,
    params: &ConstructionParams,
) -> Result<Vec<CensusRow>> {
    let pair = e.pair();
    let classes = enumerate_schemes(pair.s(), pair.t())?;
    let forms: Vec<_> = classes.iter().map(canonical_form).collect();
    let mut observed = vec![0usize; classes.len()];
    for record in kts {
        let form = canonical_form(&record.scheme);
        let class = forms
            .iter()
            .position(|f| *f == form)
            .expect("every extracted scheme is an enumerated class");
        observed[class] += 1;
    }
    let n = int(params.n as i64);
    let m = int(params.m as i64);
    Ok(classes
        .iter()
        .enumerate()
        .map(|(class, q)| {
            let value = scheme_value(q, e).expect("enumerated at the same pair");
            let predicted = pow_u32(&n, pair.t())
                * pow_u32(&m, q.b() as u32)
                * pow_u32(&params.gamma, q.l() as u32);
            CensusRow {
                class,
                b: q.b(),
                l: q.l(),
                value: format_ratio(&value),
                observed: observed[class],
                predicted: format_ratio(&predicted),
                predicted_approx: to_f64(&predicted),
            }
        })
        .collect())
}

/// Knobs for [`full_experiment`] beyond the construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExperimentOptions {
    /// Subset probe trials per seed.
    pub probe_trials: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions { probe_trials: 50 }
    }
}

/// All metrics from one seeded run. Wall time is kept out of this struct so
/// reports from identical seeds compare equal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedReport {
    pub seed: u64,
    pub g0_edges: usize,
    pub g1_edges: usize,
    pub g_edges: usize,
    pub type1_removed: usize,
    pub type2_removed: usize,
    pub type1_fraction: f64,
    pub type2_fraction: f64,
    pub kt_count: usize,
    pub ktfree_verified: bool,
    pub census: Vec<CensusRow>,
    pub probe_successes: usize,
    pub probe_trials: usize,
    pub probe_fraction: f64,
    pub mono_ks_colours: usize,
    pub mono_ks_benchmark: f64,
    pub multicolour_pair_density: f64,
    pub cores_per_edge_max: usize,
}

/// Mean, minimum, and maximum of one metric across seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    fn over(values: impl Iterator<Item = f64>) -> Stat {
        let values: Vec<f64> = values.collect();
        let count = values.len().max(1) as f64;
        Stat {
            mean: values.iter().sum::<f64>() / count,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Cross-seed aggregate of the per-seed metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub g0_edges: Stat,
    pub g1_edges: Stat,
    pub g_edges: Stat,
    pub type1_fraction: Stat,
    pub type2_fraction: Stat,
    pub kt_count: Stat,
    pub probe_fraction: Stat,
    pub multicolour_pair_density: Stat,
    pub cores_per_edge_max: Stat,
    /// Per-class observed totals across all seeds, indexed as in
    /// [`enumerate_schemes`].
    pub census_observed_totals: Vec<usize>,
    /// Exact per-class predictions (shared by all seeds) as "p/q".
    pub census_predicted: Vec<String>,
}

/// Full experiment output: configuration echo, one row per seed, and the
/// aggregate. `wall_ms` is measured, not derived from the seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub s: u32,
    pub t: u32,
    pub params: ConstructionParams,
    pub options: ExperimentOptions,
    pub seeds: Vec<u64>,
    pub rows: Vec<SeedReport>,
    pub aggregate: Aggregate,
    pub wall_ms: u128,
}

impl ExperimentReport {
    pub fn to_json_string(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    /// Flat CSV, one row per seed.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "seed,g0_edges,g1_edges,g_edges,type1_fraction,type2_removed,kt_count,\
             probe_successes,probe_trials,mono_ks_colours,multicolour_pair_density,\
             cores_per_edge_max\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.seed,
                r.g0_edges,
                r.g1_edges,
                r.g_edges,
                r.type1_fraction,
                r.type2_removed,
                r.kt_count,
                r.probe_successes,
                r.probe_trials,
                r.mono_ks_colours,
                r.multicolour_pair_density,
                r.cores_per_edge_max
            ));
        }
        out
    }
}

fn seed_report(
    pair: PairClass,
    params: &ConstructionParams,
    options: &ExperimentOptions,
    seed: u64,
) -> Result<SeedReport> {
    let e = exponents(pair);
    let run = run_pipeline(pair, params, seed)?;
    let g0_edges = run.g0.edges().len();
    let g1_edges = run.g1.edges().len();
    let g_edges = run.g.edges().len();
    let type1_removed = g0_edges - g1_edges;
    let type2_removed = g1_edges - g_edges;
    let frac_of = |part: usize, whole: usize| {
        if whole == 0 {
            0.0
        } else {
            part as f64 / whole as f64
        }
    };

    let census = scheme_census(&run.kts, &e, params)?;
    let (probe_successes, probe_trials) =
        subset_ks_probe(&run.g, params.a, options.probe_trials, pair.s(), seed)?;

    // One sampled a-subset per seed for the census and density diagnostics.
    let mut rng = stream_rng(seed, purpose::CENSUS_SUBSET, 0);
    let subset: Vec<u32> = rand::seq::index::sample(&mut rng, params.n, params.a)
        .iter()
        .map(|i| i as u32)
        .collect();
    let mono_ks_colours = monochromatic_ks_census(&run.g1, &subset, pair.s())?;
    let mono_ks_benchmark = params.m as f64
        * (params.a as f64).powi(pair.s() as i32)
        * to_f64(&params.gamma).powi(pair.s() as i32);
    let density = if subset.len() >= 2 {
        to_f64(&multicolour_pair_density(&run.g, &subset)?)
    } else {
        0.0
    };
    let cores_max = cores_per_edge(&run.g1, &run.kts)?
        .into_values()
        .max()
        .unwrap_or(0);

    Ok(SeedReport {
        seed,
        g0_edges,
        g1_edges,
        g_edges,
        type1_removed,
        type2_removed,
        type1_fraction: frac_of(type1_removed, g0_edges),
        type2_fraction: frac_of(type2_removed, g1_edges),
        kt_count: run.kts.len(),
        ktfree_verified: verify_ktfree(&run.g, pair.t()),
        census,
        probe_successes,
        probe_trials,
        probe_fraction: frac_of(probe_successes, probe_trials.max(1)),
        mono_ks_colours,
        mono_ks_benchmark,
        multicolour_pair_density: density,
        cores_per_edge_max: cores_max,
    })
}

/// Runs the whole pipeline once per seed (in parallel; outputs are
/// scheduling-independent) and aggregates every metric.
pub fn full_experiment(
    pair: PairClass,
    params: &ConstructionParams,
    seeds: &[u64],
    options: ExperimentOptions,
) -> Result<ExperimentReport> {
    params.validate()?;
    let start = Instant::now();
    let rows: Vec<SeedReport> = seeds
        .par_iter()
        .map(|&seed| seed_report(pair, params, &options, seed))
        .collect::<Result<_>>()?;

    let stat = |f: &dyn Fn(&SeedReport) -> f64| Stat::over(rows.iter().map(f));
    let class_count = rows.first().map_or(0, |r| r.census.len());
    let mut census_observed_totals = vec![0usize; class_count];
    for row in &rows {
        for (total, cr) in census_observed_totals.iter_mut().zip(&row.census) {
            *total += cr.observed;
        }
    }
    let census_predicted = rows.first().map_or_else(Vec::new, |r| {
        r.census.iter().map(|cr| cr.predicted.clone()).collect()
    });
    let aggregate = Aggregate {
        g0_edges: stat(&|r| r.g0_edges as f64),
        g1_edges: stat(&|r| r.g1_edges as f64),
        g_edges: stat(&|r| r.g_edges as f64),
        type1_fraction: stat(&|r| r.type1_fraction),
        type2_fraction: stat(&|r| r.type2_fraction),
        kt_count: stat(&|r| r.kt_count as f64),
        probe_fraction: stat(&|r| r.probe_fraction),
        multicolour_pair_density: stat(&|r| r.multicolour_pair_density),
        cores_per_edge_max: stat(&|r| r.cores_per_edge_max as f64),
        census_observed_totals,
        census_predicted,
    };
    Ok(ExperimentReport {
        s: pair.s(),
        t: pair.t(),
        params: params.clone(),
        options,
        seeds: seeds.to_vec(),
        rows,
        aggregate,
        wall_ms: start.elapsed().as_millis(),
    })
}
