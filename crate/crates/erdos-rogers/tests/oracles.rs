//! Independent oracles against the optimized implementations: a naive
//! pair-cover scheme enumerator with permutation-based isomorphism
//! filtering, a subset-scanning clique detector, and a statement-level
//! transliteration of the original small-t case-check program.

mod common;

use std::collections::BTreeSet;

use erdos_rogers::clique::{contains_clique, enumerate_cliques, BitAdjacency};
use erdos_rogers::graph::Edge;
use erdos_rogers::rng::stream_rng;
use erdos_rogers::schemes::enumerate_schemes;
use erdos_rogers::verify::{localneg_case_decisions, MarginMode};
use rand::Rng;

#[test]
fn naive_enumerator_agrees_on_class_counts() {
    for (s, t) in [(3u32, 5u32), (4, 6)] {
        let fast = enumerate_schemes(s, t).unwrap().len();
        let naive = common::naive_scheme_class_count(s, t);
        assert_eq!(fast, naive, "class counts diverge at ({s},{t})");
    }
    // Known counts, for the record: 3 classes at (3,5), 8 at (4,6).
    assert_eq!(common::naive_scheme_class_count(3, 5), 3);
    assert_eq!(common::naive_scheme_class_count(4, 6), 8);
}

fn random_edge_set(n: u32, density_num: u32, seed: u64) -> BTreeSet<Edge> {
    let mut rng = stream_rng(seed, 99, 0);
    let mut edges = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_range(0..100) < density_num {
                edges.insert((u, v));
            }
        }
    }
    edges
}

#[test]
fn clique_search_agrees_with_subset_scan() {
    for seed in 0..12u64 {
        let n = 18;
        let density = 40 + (seed as u32 % 4) * 12; // 40..=76 percent
        let edges = random_edge_set(n, density, seed);
        for k in 3..=6usize {
            let fast = contains_clique(n as usize, &edges, k).is_some();
            let naive = common::naive_contains_clique(n as usize, &edges, k);
            assert_eq!(
                fast, naive,
                "clique detectors diverge at seed {seed}, k = {k}"
            );
        }
    }
}

#[test]
fn clique_search_finds_planted_clique() {
    // A sparse graph plus one planted K_6 on scattered vertices.
    let mut edges = random_edge_set(24, 12, 7);
    let planted = [2u32, 5, 9, 14, 17, 23];
    for (i, &u) in planted.iter().enumerate() {
        for &v in &planted[i + 1..] {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    assert!(common::naive_contains_clique(24, &edges, 6));
    let witness = contains_clique(24, &edges, 6).expect("planted clique must be found");
    assert_eq!(witness.len(), 6);
    // The witness really is a clique.
    for (i, &u) in witness.iter().enumerate() {
        for &v in &witness[i + 1..] {
            assert!(edges.contains(&(u.min(v), u.max(v))));
        }
    }
}

#[test]
fn enumerated_cliques_match_membership_tests() {
    let edges = random_edge_set(16, 55, 3);
    let adj = BitAdjacency::from_edges(16, edges.iter());
    let fours = enumerate_cliques(&adj, 4);
    for clique in &fours {
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                assert!(edges.contains(&(u.min(v), u.max(v))));
            }
        }
    }
    // Count cross-check: every 4-subset scan agrees with the enumerator.
    let mut count = 0;
    for a in 0..16u32 {
        for b in a + 1..16 {
            for c in b + 1..16 {
                for d in c + 1..16 {
                    let q = [a, b, c, d];
                    let is_clique = q
                        .iter()
                        .enumerate()
                        .all(|(i, &u)| q[i + 1..].iter().all(|&v| edges.contains(&(u, v))));
                    if is_clique {
                        count += 1;
                    }
                }
            }
        }
    }
    assert_eq!(fours.len(), count);
}

#[test]
fn float_sweep_matches_transliteration_decision_for_decision() {
    let library = localneg_case_decisions(MarginMode::Float);
    let oracle = common::transliterated_sweep();
    assert_eq!(library.len(), oracle.len());
    assert_eq!(library.len(), 250);
    for (d, &(t, s, j, family, checked, bad)) in library.iter().zip(&oracle) {
        assert_eq!(
            (d.t, d.s, d.j, d.family, d.checked, d.bad),
            (t, s, j, family, checked, bad),
            "decision diverges at t={t}, s={s}, j={j}, family {family}"
        );
    }
    // The sweep finds no bad case anywhere.
    assert!(oracle.iter().all(|&(_, _, _, _, _, bad)| !bad));
}

#[test]
fn exact_sweep_matches_float_sweep() {
    let exact = localneg_case_decisions(MarginMode::Exact);
    let float = localneg_case_decisions(MarginMode::Float);
    assert_eq!(exact, float);
}
