//! Shared fixtures and independent oracles for the integration tests.
//!
//! Everything here is deliberately naive: these implementations exist to
//! cross-check the library's optimized code paths, so they must not share
//! algorithms (or shortcuts) with them.

#![allow(dead_code)] // each test target uses its own subset of the helpers

use std::collections::BTreeSet;
use std::path::Path;

use erdos_rogers::graph::{ColourClass, ColouredGraph, Edge};
use serde::Deserialize;

// ---------------------------------------------------------------------------
// Naive scheme enumeration by pair cover + permutation filtering

/// All permutations of `0..t` via recursive swapping.
fn permutations(t: usize) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, rest: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..t as u32).collect(), &mut out);
    out
}

/// Recursively covers the lexicographically first uncovered pair with every
/// admissible block, producing every labelled scheme exactly once.
fn cover(
    t: u32,
    s: u32,
    covered: &mut Vec<bool>,
    blocks: &mut Vec<Vec<u32>>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    let tu = t as usize;
    let idx = |u: u32, v: u32| (u as usize) * tu + v as usize;
    let first = (0..t)
        .flat_map(|u| (u + 1..t).map(move |v| (u, v)))
        .find(|&(u, v)| !covered[idx(u, v)]);
    let (u, v) = match first {
        Some(p) => p,
        None => {
            let mut done = blocks.clone();
            done.sort();
            out.push(done);
            return;
        }
    };

    // Candidate blocks: {u, v} plus any extension set whose added pairs are
    // all uncovered. An extension node w < v would bring in the pair
    // (min(u,w), max(u,w)) or (w, v), both of which precede (u, v) in the
    // scan order and are therefore covered already — so only nodes above v
    // qualify, and enumerating them in increasing order visits every
    // candidate block exactly once.
    let mut candidates: Vec<Vec<u32>> = vec![vec![u, v]];
    let mut grow: Vec<Vec<u32>> = vec![vec![u, v]];
    for _ in 2..s {
        let mut next = Vec::new();
        for base in &grow {
            let last = *base.last().expect("blocks are never empty");
            for w in last + 1..t {
                if base.iter().all(|&x| !covered[idx(x.min(w), x.max(w))]) {
                    let mut bigger = base.clone();
                    bigger.push(w);
                    next.push(bigger);
                }
            }
        }
        candidates.extend(next.iter().cloned());
        grow = next;
    }

    for block in candidates {
        let mut added = Vec::new();
        for i in 0..block.len() {
            for j in i + 1..block.len() {
                let (a, b) = (block[i].min(block[j]), block[i].max(block[j]));
                covered[idx(a, b)] = true;
                added.push((a, b));
            }
        }
        blocks.push(block.clone());
        cover(t, s, covered, blocks, out);
        blocks.pop();
        for (a, b) in added {
            covered[idx(a, b)] = false;
        }
    }
}

/// Canonical key of a labelled scheme: the minimum, over all `t!` node
/// permutations, of the relabelled sorted block list.
fn min_relabelling(blocks: &[Vec<u32>], perms: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut best: Option<Vec<Vec<u32>>> = None;
    for perm in perms {
        let mut mapped: Vec<Vec<u32>> = blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b.iter().map(|&x| perm[x as usize]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        mapped.sort();
        if best.as_ref().is_none_or(|b| mapped < *b) {
            best = Some(mapped);
        }
    }
    best.expect("at least the identity permutation")
}

/// Counts scheme isomorphism classes at `(s, t)` by generating every
/// labelled scheme and filtering through all `t!` relabellings. Exponential;
/// intended for t <= 6.
pub fn naive_scheme_class_count(s: u32, t: u32) -> usize {
    let mut labelled = Vec::new();
    cover(
        t,
        s,
        &mut vec![false; (t * t) as usize],
        &mut Vec::new(),
        &mut labelled,
    );
    let perms = permutations(t as usize);
    let classes: BTreeSet<Vec<Vec<u32>>> = labelled
        .iter()
        .map(|blocks| min_relabelling(blocks, &perms))
        .collect();
    classes.len()
}

// ---------------------------------------------------------------------------
// Naive clique oracle

/// True when the graph contains a k-clique, by checking every k-subset.
/// Exponential; intended for n <= 30.
pub fn naive_contains_clique(n: usize, edges: &BTreeSet<Edge>, k: usize) -> bool {
    if k <= 1 {
        return k == 1 && n >= 1 || k == 0;
    }
    let mut subset: Vec<u32> = Vec::with_capacity(k);
    fn go(start: u32, n: u32, k: usize, subset: &mut Vec<u32>, edges: &BTreeSet<Edge>) -> bool {
        if subset.len() == k {
            return true;
        }
        for v in start..n {
            if subset.iter().all(|&u| edges.contains(&(u, v))) {
                subset.push(v);
                if go(v + 1, n, k, subset, edges) {
                    return true;
                }
                subset.pop();
            }
        }
        false
    }
    go(0, n as u32, k, &mut subset, edges)
}

// ---------------------------------------------------------------------------
// Direct transliteration of the original small-t case-check program

/// One decision of the transliterated sweep, in the order the original
/// program makes them: (t, s, j, family, checked, bad).
pub type SweepDecision = (u32, u32, u32, u8, bool, bool);

/// Mirrors the original double-precision case-check program statement by
/// statement: same loop bounds, same expressions, same `10^-3` margin.
#[allow(clippy::int_plus_one)] // `2 <= a + 1 <= R` is the original's literal guard
pub fn transliterated_sweep() -> Vec<SweepDecision> {
    let mut out = Vec::new();
    for t in 5i64..=13 {
        for s in (t / 2 + 1)..=(t - 2) {
            let al = (((s - 2) * (t - s) * (s - 1) + s - 1) as f64)
                / (((2 * s - 3) * (t - s) * (s - 1) + 2 * s - t) as f64);
            let de = s as f64 - (2 * s - 1) as f64 * al;
            let r = (t - 1) / 2; // floor((t-1)/2)
            for j in 0i64..=4 {
                let a = (t - 1) - j * (r - 1);
                let family1 = 0 <= a;
                let mut bad1 = false;
                if family1 {
                    let v = 1.0
                        + a as f64 * (de / 2.0 + al - 1.0)
                        + j as f64 * (de / r as f64 + al - 1.0);
                    if v > 2.0 * de / t as f64 - 10f64.powi(-3) {
                        bad1 = true;
                    }
                }
                out.push((t as u32, s as u32, j as u32, 1, family1, bad1));
                let family2 = 2 <= a + 1 && a + 1 <= r;
                let mut bad2 = false;
                if family2 {
                    let v = 1.0
                        + (de / (a + 1) as f64 + al - 1.0)
                        + j as f64 * (de / r as f64 + al - 1.0);
                    if v > 2.0 * de / t as f64 - 10f64.powi(-3) {
                        bad2 = true;
                    }
                }
                out.push((t as u32, s as u32, j as u32, 2, family2, bad2));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Hand-built 14-vertex fixture

/// A stage-G0 graph on 14 vertices whose only K_5 sits on vertices 0..4
/// with the overlapping-blocks colour structure: two triangle classes
/// sharing vertex 2, four pair classes covering the cross pairs, and nine
/// isolated vertices. No vertex pair lies in two classes, so the first
/// deletion pass removes nothing.
pub fn fixture_graph_14() -> ColouredGraph {
    let classes = vec![
        ColourClass {
            members: vec![0, 1, 2],
            parts: vec![1, 2, 3],
        },
        ColourClass {
            members: vec![2, 3, 4],
            parts: vec![1, 2, 3],
        },
        ColourClass {
            members: vec![0, 3],
            parts: vec![1, 2],
        },
        ColourClass {
            members: vec![0, 4],
            parts: vec![1, 2],
        },
        ColourClass {
            members: vec![1, 3],
            parts: vec![1, 2],
        },
        ColourClass {
            members: vec![1, 4],
            parts: vec![1, 2],
        },
    ];
    ColouredGraph::new_g0(14, 3, 5, classes).expect("fixture respects the graph invariants")
}

// ---------------------------------------------------------------------------
// Frozen smoke configuration

#[derive(Debug, Deserialize)]
pub struct SmokeThresholds {
    pub type1_fraction_max: f64,
    pub census_observed_vs_predicted_factor: f64,
    pub probe_fraction_mean_min: f64,
}

#[derive(Debug, Deserialize)]
pub struct SmokeFixture {
    pub s: i64,
    pub t: i64,
    pub n: usize,
    pub m: usize,
    pub gamma: String,
    pub a: usize,
    pub seeds: Vec<u64>,
    pub probe_trials: usize,
    pub thresholds: SmokeThresholds,
}

/// Loads the frozen smoke configuration from `tests/fixtures/smoke.json`.
pub fn load_smoke_fixture() -> SmokeFixture {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join("smoke.json");
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    serde_json::from_str(&text).expect("smoke fixture parses")
}
