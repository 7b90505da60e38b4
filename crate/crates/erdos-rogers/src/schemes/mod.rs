//! Colour schemes, colour configurations, and their exact value calculus.
//!
//! A *scheme* on `t` nodes is a family of blocks (subsets of size 2..=s)
//! covering every node pair exactly once. A *configuration* relaxes this:
//! arbitrary node set, colours of size >= 2, pairs may be uncovered or
//! multiply covered, and there is no size cap. Values are exact rationals
//! driven by an [`ExponentSet`]; the core of a scheme is its minimum-value
//! induced subconfiguration.

pub mod canon;

use num::rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{ExponentSet, PairClass};
use crate::ratio::int;

pub use canon::{
    canonical_form, canonical_scheme, enumerate_schemes, enumerate_schemes_with_cap, CanonicalForm,
    DEFAULT_ENUMERATION_CAP,
};

/// A block decomposition of the pairs of `0..t` into colours of size 2..=s.
///
/// Blocks are stored sorted (each block ascending, the block list in
/// lexicographic order), so two equal schemes compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Scheme {
    t: u32,
    s: u32,
    blocks: Vec<Vec<u32>>,
}

impl Scheme {
    /// Validates the scheme axioms: every node pair in exactly one block,
    /// block sizes in 2..=s, nodes in 0..t.
    pub fn new(t: u32, s: u32, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut blocks: Vec<Vec<u32>> = blocks;
        for block in &mut blocks {
            block.sort_unstable();
            if block.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidScheme(format!(
                    "block {block:?} repeats a node"
                )));
            }
            if block.len() < 2 || block.len() as u32 > s {
                return Err(Error::InvalidScheme(format!(
                    "block {block:?} has size {} outside 2..={s}",
                    block.len()
                )));
            }
            if block.iter().any(|&v| v >= t) {
                return Err(Error::InvalidScheme(format!(
                    "block {block:?} mentions a node outside 0..{t}"
                )));
            }
        }
        blocks.sort();
        let tu = t as usize;
        let mut covered = vec![false; tu * tu];
        for block in &blocks {
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    let (u, v) = (block[i] as usize, block[j] as usize);
                    if covered[u * tu + v] {
                        return Err(Error::InvalidScheme(format!(
                            "pair ({u}, {v}) is covered by more than one block"
                        )));
                    }
                    covered[u * tu + v] = true;
                }
            }
        }
        for u in 0..tu {
            for v in u + 1..tu {
                if !covered[u * tu + v] {
                    return Err(Error::InvalidScheme(format!(
                        "pair ({u}, {v}) is covered by no block"
                    )));
                }
            }
        }
        Ok(Scheme { t, s, blocks })
    }

    /// The scheme where every pair is its own block.
    pub fn complete_pairs(s: u32, t: u32) -> Result<Self> {
        Self::from_large_blocks(s, t, &[])
    }

    /// Builds a scheme from its blocks of size >= 3, adding a size-2 block
    /// for every pair not covered by them.
    pub fn from_large_blocks(s: u32, t: u32, large: &[Vec<u32>]) -> Result<Self> {
        let tu = t as usize;
        let mut covered = vec![false; tu * tu];
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for block in large {
            let mut block = block.clone();
            block.sort_unstable();
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    let (u, v) = (block[i] as usize, block[j] as usize);
                    if u < tu && v < tu {
                        covered[u * tu + v] = true;
                    }
                }
            }
            blocks.push(block);
        }
        for u in 0..tu {
            for v in u + 1..tu {
                if !covered[u * tu + v] {
                    blocks.push(vec![u as u32, v as u32]);
                }
            }
        }
        Self::new(t, s, blocks)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Number of blocks.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    /// Number of labels: the sum of all block sizes.
    pub fn l(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Blocks of size at least 3.
    pub fn large_blocks(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.blocks.iter().filter(|b| b.len() >= 3)
    }

    /// The unique block containing both nodes.
    pub fn block_containing(&self, u: u32, v: u32) -> Option<&[u32]> {
        self.blocks
            .iter()
            .find(|b| b.contains(&u) && b.contains(&v))
            .map(Vec::as_slice)
    }

    /// View as a configuration on its full node set.
    pub fn to_configuration(&self) -> Configuration {
        Configuration {
            nodes: (0..self.t).collect(),
            colours: self.blocks.clone(),
        }
    }
}

/// The scheme with a single block of the maximal size `s`; all remaining
/// pairs are their own blocks. Its value is 0 exactly for regular pairs.
pub fn single_block_scheme(pair: PairClass) -> Scheme {
    let s_block: Vec<u32> = (0..pair.s()).collect();
    Scheme::from_large_blocks(pair.s(), pair.t(), &[s_block])
        .expect("single-block construction is always valid in range")
}

/// The scheme with an `s`-block and a `(t-s+1)`-block sharing exactly one
/// node; all remaining pairs are their own blocks. Its value is 0 exactly
/// for exceptional pairs.
pub fn overlapping_blocks_scheme(pair: PairClass) -> Scheme {
    let (s, t) = (pair.s(), pair.t());
    let first: Vec<u32> = (0..s).collect();
    let second: Vec<u32> = (s - 1..t).collect();
    Scheme::from_large_blocks(s, t, &[first, second])
        .expect("overlapping-blocks construction is always valid in range")
}

/// A relaxed scheme: any node set, colours of size >= 2, no coverage or
/// size-cap requirements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    nodes: Vec<u32>,
    colours: Vec<Vec<u32>>,
}

impl Configuration {
    /// Validates that every colour labels at least two nodes, all of them
    /// present in the node set.
    pub fn new(mut nodes: Vec<u32>, colours: Vec<Vec<u32>>) -> Result<Self> {
        nodes.sort_unstable();
        nodes.dedup();
        let mut sorted_colours = Vec::with_capacity(colours.len());
        for colour in colours {
            let mut colour = colour;
            colour.sort_unstable();
            colour.dedup();
            if colour.len() < 2 {
                return Err(Error::InvalidScheme(format!(
                    "colour {colour:?} labels fewer than two nodes"
                )));
            }
            if colour.iter().any(|v| nodes.binary_search(v).is_err()) {
                return Err(Error::InvalidScheme(format!(
                    "colour {colour:?} labels a node outside the configuration"
                )));
            }
            sorted_colours.push(colour);
        }
        sorted_colours.sort();
        Ok(Configuration {
            nodes,
            colours: sorted_colours,
        })
    }

    /// Number of nodes.
    pub fn h(&self) -> usize {
        self.nodes.len()
    }

    /// Number of colours.
    pub fn b(&self) -> usize {
        self.colours.len()
    }

    /// Number of labels.
    pub fn l(&self) -> usize {
        self.colours.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    pub fn colours(&self) -> &[Vec<u32>] {
        &self.colours
    }
}

fn check_match(q: &Scheme, e: &ExponentSet) -> Result<()> {
    let pair = e.pair();
    if q.t() != pair.t() || q.s() != pair.s() {
        return Err(Error::MismatchedParameters {
            scheme_s: q.s(),
            scheme_t: q.t(),
            exp_s: pair.s(),
            exp_t: pair.t(),
        });
    }
    Ok(())
}

/// `v(Q) = t - 2 + (b-1) delta + (l-2)(alpha-1)`, exactly.
pub fn scheme_value(q: &Scheme, e: &ExponentSet) -> Result<BigRational> {
    check_match(q, e)?;
    Ok(value_from_counts(
        q.t() as i64,
        q.b() as i64,
        q.l() as i64,
        e,
    ))
}

/// `v(W) = h - 2 + (b-1) delta + (l-2)(alpha-1)` with the formula applied
/// literally to the configuration's counts (b may be 0).
pub fn config_value(w: &Configuration, e: &ExponentSet) -> BigRational {
    value_from_counts(w.h() as i64, w.b() as i64, w.l() as i64, e)
}

fn value_from_counts(h: i64, b: i64, l: i64, e: &ExponentSet) -> BigRational {
    int(h - 2) + int(b - 1) * e.delta() + int(l - 2) * (e.alpha() - int(1))
}

/// Alternative form of the scheme value summed block by block:
/// `v(Q) = t + sum_D (delta + |D| (alpha-1)) - (delta + 2 alpha)`.
/// Computed independently of [`scheme_value`] so the two serve as an
/// identity check on each other.
pub fn blockwise_value(q: &Scheme, e: &ExponentSet) -> Result<BigRational> {
    check_match(q, e)?;
    let mut acc = int(q.t() as i64);
    for block in q.blocks() {
        acc += e.delta() + int(block.len() as i64) * (e.alpha() - int(1));
    }
    acc -= e.delta() + int(2) * e.alpha();
    Ok(acc)
}

/// Per-node share of the value:
/// `v(P) = 1 + sum over blocks D containing P of (delta/|D| + (alpha-1))`.
pub fn local_value(q: &Scheme, node: u32, e: &ExponentSet) -> Result<BigRational> {
    check_match(q, e)?;
    if node >= q.t() {
        return Err(Error::NodeOutOfRange { node, t: q.t() });
    }
    let mut acc = int(1);
    for block in q.blocks() {
        if block.contains(&node) {
            acc += e.delta() / int(block.len() as i64) + (e.alpha() - int(1));
        }
    }
    Ok(acc)
}

/// Exponents of the crude expected-count bound `n^t m^b gamma^l` for the
/// scheme: `total = t + b delta + l (alpha-1)` and the per-edge variant
/// `total - (delta + 2 alpha)`, which equals the scheme value.
pub fn count_exponents(q: &Scheme, e: &ExponentSet) -> Result<(BigRational, BigRational)> {
    check_match(q, e)?;
    let total = int(q.t() as i64)
        + int(q.b() as i64) * e.delta()
        + int(q.l() as i64) * (e.alpha() - int(1));
    let per_edge = &total - (e.delta() + int(2) * e.alpha());
    Ok((total, per_edge))
}

/// Restricts a configuration to `subset`, keeping only colours that still
/// label at least two nodes.
pub fn induced_subconfiguration(w: &Configuration, subset: &[u32]) -> Result<Configuration> {
    let mut subset: Vec<u32> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    for v in &subset {
        if w.nodes.binary_search(v).is_err() {
            return Err(Error::BadSubset {
                reason: format!("node {v} is not in the configuration"),
            });
        }
    }
    let colours = w
        .colours
        .iter()
        .filter_map(|colour| {
            let restricted: Vec<u32> = colour
                .iter()
                .copied()
                .filter(|v| subset.binary_search(v).is_ok())
                .collect();
            (restricted.len() >= 2).then_some(restricted)
        })
        .collect();
    Ok(Configuration {
        nodes: subset,
        colours,
    })
}

/// The core of a scheme: the induced subconfiguration on >= 2 nodes with
/// minimal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    /// Nodes of the minimizing subset, ascending.
    pub node_subset: Vec<u32>,
    /// Colours of the scheme appearing at least twice on the subset,
    /// restricted to it.
    pub induced_colours: Vec<Vec<u32>>,
    /// The minimal value.
    pub value: BigRational,
}

impl CoreResult {
    pub fn node_count(&self) -> usize {
        self.node_subset.len()
    }
}

/// Finds the core by exhaustive search over all node subsets of size >= 2.
///
/// Ties on value are broken towards more nodes, then towards the
/// lexicographically smallest sorted node list, making the result unique
/// and reproducible.
pub fn core(q: &Scheme, e: &ExponentSet) -> Result<CoreResult> {
    check_match(q, e)?;
    let t = q.t() as usize;
    assert!(t < 26, "exhaustive core search is for small schemes");
    let block_masks: Vec<u32> = q
        .blocks()
        .iter()
        .map(|b| b.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let alpha_m1 = e.alpha() - int(1);

    let mut best: Option<(BigRational, u32, u32)> = None; // value, popcount, mask
    for mask in 1u32..(1 << t) {
        let h = mask.count_ones();
        if h < 2 {
            continue;
        }
        let mut b = 0i64;
        let mut l = 0i64;
        for &bm in &block_masks {
            let overlap = (bm & mask).count_ones() as i64;
            if overlap >= 2 {
                b += 1;
                l += overlap;
            }
        }
        let value = int(h as i64 - 2) + int(b - 1) * e.delta() + int(l - 2) * &alpha_m1;
        let candidate_nodes = || mask_to_nodes(mask);
        let better = match &best {
            None => true,
            Some((bv, bh, bmask)) => match value.cmp(bv) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => match h.cmp(bh) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => candidate_nodes() < mask_to_nodes(*bmask),
                },
            },
        };
        if better {
            best = Some((value, h, mask));
        }
    }
    let (value, _, mask) = best.expect("t >= 2 guarantees at least one subset");
    let node_subset = mask_to_nodes(mask);
    let induced = induced_subconfiguration(&q.to_configuration(), &node_subset)?;
    Ok(CoreResult {
        node_subset,
        induced_colours: induced.colours().to_vec(),
        value,
    })
}

fn mask_to_nodes(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Generates a uniform-ish random valid scheme for property tests: random
/// large blocks are proposed and kept when they intersect every accepted
/// block in at most one node, then pairs complete the cover.
pub fn random_scheme<R: Rng>(pair: PairClass, rng: &mut R) -> Scheme {
    let (s, t) = (pair.s(), pair.t());
    let mut large: Vec<Vec<u32>> = Vec::new();
    if s >= 3 {
        for _ in 0..3 * t {
            let size = rng.random_range(3..=s.min(t)) as usize;
            let pick = rand::seq::index::sample(rng, t as usize, size);
            let mut block: Vec<u32> = pick.iter().map(|i| i as u32).collect();
            block.sort_unstable();
            let compatible = large
                .iter()
                .all(|other| block.iter().filter(|v| other.contains(v)).count() <= 1);
            if compatible && rng.random_bool(0.75) {
                large.push(block);
            }
        }
    }
    Scheme::from_large_blocks(s, t, &large).expect("pairwise-compatible blocks form a scheme")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{classify_pair, exponents};
    use crate::ratio::frac;

    fn exps(s: i64, t: i64) -> ExponentSet {
        exponents(classify_pair(s, t).unwrap())
    }

    #[test]
    fn scheme_axioms_are_enforced() {
        // Two triangles sharing an edge cover pair (1,2) twice.
        assert!(Scheme::from_large_blocks(3, 5, &[vec![0, 1, 2], vec![1, 2, 3]]).is_err());
        // Block too big for s = 3.
        assert!(Scheme::new(5, 3, vec![vec![0, 1, 2, 3]]).is_err());
        // Missing coverage.
        assert!(Scheme::new(3, 3, vec![vec![0, 1]]).is_err());
        // Node out of range.
        assert!(Scheme::from_large_blocks(3, 3, &[vec![0, 1, 7]]).is_err());
        let ok = Scheme::complete_pairs(3, 5).unwrap();
        assert_eq!(ok.b(), 10);
        assert_eq!(ok.l(), 20);
    }

    #[test]
    fn extremal_scheme_shapes() {
        let pair = classify_pair(3, 5).unwrap();
        let q1 = single_block_scheme(pair);
        assert_eq!(q1.b(), 8);
        assert_eq!(q1.l(), 17);
        let q2 = overlapping_blocks_scheme(pair);
        assert_eq!(q2.b(), 6);
        assert_eq!(q2.l(), 14);
        assert_eq!(q2.large_blocks().count(), 2);

        let pair = classify_pair(4, 6).unwrap();
        let q1 = single_block_scheme(pair);
        assert_eq!((q1.b(), q1.l()), (10, 22));
        let q2 = overlapping_blocks_scheme(pair);
        assert_eq!((q2.b(), q2.l()), (8, 19));
    }

    #[test]
    fn frozen_values_for_smallest_pair() {
        let e = exps(3, 5);
        let all_pairs = Scheme::complete_pairs(3, 5).unwrap();
        assert_eq!(scheme_value(&all_pairs, &e).unwrap(), frac(-6, 13));
        let q1 = single_block_scheme(e.pair());
        assert_eq!(scheme_value(&q1, &e).unwrap(), frac(-3, 13));
        let q2 = overlapping_blocks_scheme(e.pair());
        assert_eq!(scheme_value(&q2, &e).unwrap(), frac(0, 1));
        assert_eq!(blockwise_value(&q2, &e).unwrap(), frac(0, 1));
        assert_eq!(blockwise_value(&all_pairs, &e).unwrap(), frac(-6, 13));
    }

    #[test]
    fn count_exponent_examples() {
        let e = exps(3, 5);
        let all_pairs = Scheme::complete_pairs(3, 5).unwrap();
        let q1 = single_block_scheme(e.pair());
        let q2 = overlapping_blocks_scheme(e.pair());
        assert_eq!(count_exponents(&all_pairs, &e).unwrap().0, frac(15, 13));
        assert_eq!(count_exponents(&q1, &e).unwrap().0, frac(18, 13));
        assert_eq!(count_exponents(&q2, &e).unwrap().0, frac(21, 13));
        // per-edge exponent equals the scheme value
        for q in [&all_pairs, &q1, &q2] {
            assert_eq!(
                count_exponents(q, &e).unwrap().1,
                scheme_value(q, &e).unwrap()
            );
        }
    }

    #[test]
    fn mismatched_exponents_are_rejected() {
        let e = exps(4, 6);
        let q = Scheme::complete_pairs(3, 5).unwrap();
        assert!(matches!(
            scheme_value(&q, &e),
            Err(Error::MismatchedParameters { .. })
        ));
    }

    #[test]
    fn local_values_and_their_sum() {
        // Each node lies in 4 pair blocks: 1 + 4(alpha-1) + 4(delta/2)
        // = 1 - 28/13 + 18/13 = 3/13. The sum over the 5 nodes, 15/13,
        // matches the identity check below.
        let e = exps(3, 5);
        let all_pairs = Scheme::complete_pairs(3, 5).unwrap();
        for node in 0..5 {
            assert_eq!(local_value(&all_pairs, node, &e).unwrap(), frac(3, 13));
        }
        assert!(matches!(
            local_value(&all_pairs, 5, &e),
            Err(Error::NodeOutOfRange { .. })
        ));
        // Sum of local values = scheme value + (delta + 2 alpha).
        let q2 = overlapping_blocks_scheme(e.pair());
        let sum: BigRational = (0..5).map(|p| local_value(&q2, p, &e).unwrap()).sum();
        let expected = scheme_value(&q2, &e).unwrap() + e.delta() + int(2) * e.alpha();
        assert_eq!(sum, expected);
    }

    #[test]
    fn local_value_mixed_block_sizes() {
        // A node in one size-2 block and two size-4 blocks has local value
        // 1 + 3(alpha-1) + delta/2 + 2*(delta/4).
        let e = exps(4, 7);
        let q = Scheme::from_large_blocks(4, 7, &[vec![0, 1, 2, 3], vec![0, 4, 5, 6]]).unwrap();
        // Node 0 is in the two 4-blocks and no pair blocks; node 1 is in one
        // 4-block and three pair blocks.
        let v0 = local_value(&q, 0, &e).unwrap();
        let expect0 = int(1) + int(2) * (e.alpha() - int(1)) + int(2) * (e.delta() / int(4));
        assert_eq!(v0, expect0);
        let v1 = local_value(&q, 1, &e).unwrap();
        let expect1 = int(1)
            + int(4) * (e.alpha() - int(1))
            + e.delta() / int(4)
            + int(3) * (e.delta() / int(2));
        assert_eq!(v1, expect1);
    }

    #[test]
    fn config_value_examples() {
        let e = exps(3, 5);
        // Two nodes sharing one colour have value 0.
        let w = Configuration::new(vec![0, 1], vec![vec![0, 1]]).unwrap();
        assert_eq!(config_value(&w, &e), int(0));
        // Two nodes, no colours: formula applied literally with b = 0.
        let w = Configuration::new(vec![0, 1], vec![]).unwrap();
        assert_eq!(
            config_value(&w, &e),
            -e.delta() - int(2) * (e.alpha() - int(1))
        );
        // All-pairs scheme induced on 4 of 5 nodes: h=4, b=6, l=12.
        let all_pairs = Scheme::complete_pairs(3, 5).unwrap();
        let induced =
            induced_subconfiguration(&all_pairs.to_configuration(), &[0, 1, 2, 3]).unwrap();
        assert_eq!((induced.h(), induced.b(), induced.l()), (4, 6, 12));
        assert_eq!(config_value(&induced, &e), frac(1, 13));
    }

    #[test]
    fn induced_subconfiguration_examples() {
        let e = exps(3, 5);
        let q2 = overlapping_blocks_scheme(e.pair());
        let w = q2.to_configuration();
        // Full subset gives the configuration itself.
        let full = induced_subconfiguration(&w, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(full, w);
        // A single node keeps no colours.
        let single = induced_subconfiguration(&w, &[3]).unwrap();
        assert_eq!((single.h(), single.b()), (1, 0));
        // Restricting to one triangle keeps that triangle only.
        let tri = induced_subconfiguration(&w, &[0, 1, 2]).unwrap();
        assert_eq!((tri.h(), tri.b(), tri.l()), (3, 1, 3));
        // Subset outside the node set is rejected.
        assert!(matches!(
            induced_subconfiguration(&w, &[0, 9]),
            Err(Error::BadSubset { .. })
        ));
        // Restriction of a big block to 2 nodes still counts as a colour:
        // {0,1,2} restricted to {0,1,3} keeps {0,1}, plus pairs {0,3},{1,3}.
        let pairish = induced_subconfiguration(&w, &[0, 1, 3]).unwrap();
        assert_eq!((pairish.h(), pairish.b(), pairish.l()), (3, 3, 6));
    }

    #[test]
    fn core_of_smallest_schemes() {
        let e = exps(3, 5);
        let all_pairs = Scheme::complete_pairs(3, 5).unwrap();
        let c = core(&all_pairs, &e).unwrap();
        assert_eq!(c.node_subset, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.value, frac(-6, 13));

        let q2 = overlapping_blocks_scheme(e.pair());
        let c = core(&q2, &e).unwrap();
        assert_eq!(c.node_subset, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.value, int(0));

        let q1 = single_block_scheme(e.pair());
        let c = core(&q1, &e).unwrap();
        assert_eq!(c.node_subset, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.value, frac(-3, 13));
        assert!(c.node_count() >= 3);
        assert!(c.value <= int(0));
    }

    #[test]
    fn random_schemes_are_valid_and_varied() {
        let pair = classify_pair(4, 7).unwrap();
        let mut rng = crate::rng::stream_rng(11, crate::rng::purpose::SCHEME, 0);
        let mut shapes = std::collections::HashSet::new();
        for _ in 0..50 {
            let q = random_scheme(pair, &mut rng);
            assert_eq!(q.t(), 7);
            shapes.insert(q.large_blocks().count());
        }
        assert!(shapes.len() >= 2, "generator should vary block counts");
    }
}
