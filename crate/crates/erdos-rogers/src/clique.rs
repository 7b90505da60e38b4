//! Clique search over bitset adjacency, plus a deliberately independent
//! existence checker used to audit pipeline output.

use std::collections::BTreeSet;

use crate::graph::Edge;

/// Adjacency matrix with one bitset row per vertex.
pub struct BitAdjacency {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitAdjacency {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitAdjacency {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges<'a>(n: usize, edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut adj = BitAdjacency::new(n);
        for &(u, v) in edges {
            adj.add_edge(u, v);
        }
        adj
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: u32, v: u32) {
        let (u, v) = (u as usize, v as usize);
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (u, v) = (u as usize, v as usize);
        self.rows[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Enumerates every clique of exactly `k` vertices, each reported once with
/// its vertices ascending, in lexicographic order of the vertex lists.
///
/// Candidates are restricted to neighbours above the last chosen vertex and
/// branches are cut as soon as the candidate pool is too small to finish.
pub fn enumerate_cliques(adj: &BitAdjacency, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k == 0 || adj.n() == 0 {
        return out;
    }
    if k == 1 {
        return (0..adj.n() as u32).map(|v| vec![v]).collect();
    }
    let words = adj.words;
    let mut current: Vec<u32> = Vec::with_capacity(k);
    let mut cand = vec![0u64; words];
    for v in 0..adj.n() {
        // Neighbours of v greater than v.
        cand.copy_from_slice(adj.row(v));
        mask_above(&mut cand, v);
        current.push(v as u32);
        extend(adj, &mut current, &cand, k, &mut out);
        current.pop();
    }
    out
}

/// Clears all bits at positions <= v.
fn mask_above(words: &mut [u64], v: usize) {
    let wi = v / 64;
    for w in words[..wi].iter_mut() {
        *w = 0;
    }
    let keep_from = v % 64 + 1;
    if keep_from == 64 {
        words[wi] = 0;
    } else {
        words[wi] &= !0u64 << keep_from;
    }
}

fn extend(
    adj: &BitAdjacency,
    current: &mut Vec<u32>,
    cand: &[u64],
    k: usize,
    out: &mut Vec<Vec<u32>>,
) {
    let need = k - current.len();
    if need == 0 {
        out.push(current.clone());
        return;
    }
    if popcount(cand) < need {
        return;
    }
    let words = adj.words;
    let mut next = vec![0u64; words];
    for u in set_bits(cand).collect::<Vec<_>>() {
        let row = adj.row(u);
        for i in 0..words {
            next[i] = cand[i] & row[i];
        }
        mask_above(&mut next, u);
        current.push(u as u32);
        extend(adj, current, &next, k, out);
        current.pop();
    }
}

/// Independent clique-existence check over a plain edge set.
///
/// This is intentionally a separate implementation from
/// [`enumerate_cliques`]: it builds sorted neighbour lists and intersects
/// them by merging, so an error in the bitset path cannot hide here. Returns
/// a witness clique if one exists.
pub fn contains_clique(n: usize, edges: &BTreeSet<Edge>, k: usize) -> Option<Vec<u32>> {
    if k == 0 {
        return Some(Vec::new());
    }
    if k == 1 {
        return if n > 0 { Some(vec![0]) } else { None };
    }
    let mut neighbours: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        neighbours[u as usize].push(v);
        neighbours[v as usize].push(u);
    }
    for list in &mut neighbours {
        list.sort_unstable();
    }

    fn search(
        neighbours: &[Vec<u32>],
        chosen: &mut Vec<u32>,
        candidates: &[u32],
        k: usize,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        if candidates.len() < k - chosen.len() {
            return false;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let rest = intersect_sorted(&candidates[i + 1..], &neighbours[v as usize]);
            chosen.push(v);
            if search(neighbours, chosen, &rest, k) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let all: Vec<u32> = (0..n as u32).collect();
    let mut chosen = Vec::new();
    if search(&neighbours, &mut chosen, &all, k) {
        Some(chosen)
    } else {
        None
    }
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;
    use rand::Rng;

    fn complete_edges(n: u32) -> BTreeSet<Edge> {
        let mut edges = BTreeSet::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.insert((u, v));
            }
        }
        edges
    }

    #[test]
    fn complete_graph_counts() {
        let edges = complete_edges(6);
        let adj = BitAdjacency::from_edges(6, &edges);
        assert_eq!(enumerate_cliques(&adj, 3).len(), 20);
        assert_eq!(enumerate_cliques(&adj, 5).len(), 6);
        assert_eq!(enumerate_cliques(&adj, 6).len(), 1);
        assert_eq!(enumerate_cliques(&adj, 7).len(), 0);
        assert!(contains_clique(6, &edges, 6).is_some());
        assert!(contains_clique(6, &edges, 7).is_none());
    }

    #[test]
    fn bipartite_graph_has_no_triangle() {
        let mut edges = BTreeSet::new();
        for u in 0..4u32 {
            for v in 4..8u32 {
                edges.insert(edge(u, v));
            }
        }
        let adj = BitAdjacency::from_edges(8, &edges);
        assert!(enumerate_cliques(&adj, 3).is_empty());
        assert!(contains_clique(8, &edges, 3).is_none());
        assert_eq!(enumerate_cliques(&adj, 2).len(), 16);
    }

    #[test]
    fn cliques_are_sorted_and_unique() {
        let edges = complete_edges(5);
        let adj = BitAdjacency::from_edges(5, &edges);
        let cliques = enumerate_cliques(&adj, 3);
        let mut seen = std::collections::HashSet::new();
        for c in &cliques {
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            assert!(seen.insert(c.clone()));
        }
        let mut sorted = cliques.clone();
        sorted.sort();
        assert_eq!(cliques, sorted);
    }

    #[test]
    fn implementations_agree_on_random_graphs() {
        let mut rng = crate::rng::stream_rng(2024, 77, 0);
        for trial in 0..40 {
            let n = 12 + (trial % 8);
            let mut edges = BTreeSet::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random::<f64>() < 0.45 {
                        edges.insert((u, v));
                    }
                }
            }
            let adj = BitAdjacency::from_edges(n, &edges);
            for k in 2..=5 {
                let enumerated = enumerate_cliques(&adj, k);
                let witness = contains_clique(n, &edges, k);
                assert_eq!(
                    !enumerated.is_empty(),
                    witness.is_some(),
                    "n={n} k={k} disagreement"
                );
                if let Some(w) = witness {
                    for i in 0..w.len() {
                        for j in i + 1..w.len() {
                            assert!(edges.contains(&edge(w[i], w[j])));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn every_enumerated_clique_is_a_clique() {
        let mut rng = crate::rng::stream_rng(5, 77, 1);
        let n = 18;
        let mut edges = BTreeSet::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.random::<f64>() < 0.5 {
                    edges.insert((u, v));
                }
            }
        }
        let adj = BitAdjacency::from_edges(n, &edges);
        let cliques = enumerate_cliques(&adj, 4);
        assert!(!cliques.is_empty());
        for c in cliques {
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    assert!(edges.contains(&edge(c[i], c[j])));
                }
            }
        }
    }
}
