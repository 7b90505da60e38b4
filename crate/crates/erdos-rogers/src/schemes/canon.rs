//! Canonical labelling of schemes and exhaustive enumeration of their
//! isomorphism classes.
//!
//! Two schemes are isomorphic when some node relabelling maps the blocks of
//! one onto the blocks of the other. The canonical form is the
//! lexicographically smallest "pair code" over all relabellings: pairs are
//! listed in the fixed order (0,1), (0,2), (1,2), (0,3), ... and each pair
//! records its block, with blocks renumbered by first appearance. The code
//! is a complete isomorphism invariant because the scheme can be rebuilt
//! from it.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exponents::classify_pair;
use crate::schemes::Scheme;

/// Largest `t` accepted by [`enumerate_schemes`]; beyond this the class
/// count and the per-class canonicalization cost grow too fast for
/// exhaustive listing.
pub const DEFAULT_ENUMERATION_CAP: u32 = 9;

/// Canonical isomorphism key of a scheme: the lex-minimal pair code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u16>);

impl CanonicalForm {
    pub fn code(&self) -> &[u16] {
        &self.0
    }
}

/// Pair-to-block lookup for fast code evaluation.
struct PairTable {
    t: usize,
    block_of: Vec<u16>, // t*t matrix, symmetric
    block_count: usize,
}

impl PairTable {
    fn new(q: &Scheme) -> Self {
        let t = q.t() as usize;
        let mut block_of = vec![u16::MAX; t * t];
        for (id, block) in q.blocks().iter().enumerate() {
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    let (u, v) = (block[i] as usize, block[j] as usize);
                    block_of[u * t + v] = id as u16;
                    block_of[v * t + u] = id as u16;
                }
            }
        }
        PairTable {
            t,
            block_of,
            block_count: q.b(),
        }
    }

    fn block(&self, u: u32, v: u32) -> u16 {
        self.block_of[u as usize * self.t + v as usize]
    }
}

struct Search<'a> {
    table: &'a PairTable,
    perm: Vec<u32>,     // perm[new_position] = original node
    used: Vec<bool>,    // original node already placed
    code: Vec<u16>,     // pair codes for the current partial labelling
    new_id: Vec<u16>,   // original block id -> renumbered id
    assigned: Vec<u16>, // original block ids in renumbering order (undo stack)
    best: Option<(Vec<u16>, Vec<u32>)>,
}

impl Search<'_> {
    fn run(&mut self, placed: usize) {
        let t = self.table.t;
        if placed == t {
            let candidate = (&self.code, &self.perm);
            if self.best.as_ref().is_none_or(|(bc, _)| candidate.0 < bc) {
                self.best = Some((self.code.clone(), self.perm.clone()));
            }
            return;
        }
        for orig in 0..t as u32 {
            if self.used[orig as usize] {
                continue;
            }
            // Place `orig` at new position `placed`; new pairs are
            // (0, placed), ..., (placed-1, placed) in that order.
            self.used[orig as usize] = true;
            self.perm.push(orig);
            let code_len_before = self.code.len();
            let assigned_before = self.assigned.len();
            for earlier in 0..placed {
                let ob = self.table.block(self.perm[earlier], orig);
                let id = if self.new_id[ob as usize] == u16::MAX {
                    let fresh = self.assigned.len() as u16;
                    self.new_id[ob as usize] = fresh;
                    self.assigned.push(ob);
                    fresh
                } else {
                    self.new_id[ob as usize]
                };
                self.code.push(id);
            }
            let viable = match &self.best {
                None => true,
                Some((bc, _)) => self.code.as_slice() <= &bc[..self.code.len()],
            };
            if viable {
                self.run(placed + 1);
            }
            for ob in self.assigned.drain(assigned_before..) {
                self.new_id[ob as usize] = u16::MAX;
            }
            self.code.truncate(code_len_before);
            self.perm.pop();
            self.used[orig as usize] = false;
        }
    }
}

/// Computes the canonical form together with a canonically relabelled copy
/// of the scheme.
pub fn canonicalize(q: &Scheme) -> (CanonicalForm, Scheme) {
    let table = PairTable::new(q);
    let t = table.t;
    if t < 2 {
        return (CanonicalForm(Vec::new()), q.clone());
    }
    let mut search = Search {
        table: &table,
        perm: Vec::with_capacity(t),
        used: vec![false; t],
        code: Vec::with_capacity(t * (t - 1) / 2),
        new_id: vec![u16::MAX; table.block_count],
        assigned: Vec::with_capacity(table.block_count),
        best: None,
    };
    search.run(0);
    let (code, perm) = search.best.expect("at least one labelling exists");

    // Rebuild blocks from the code: pair k of the fixed order belongs to
    // block code[k].
    let block_total = code.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); block_total];
    let mut k = 0;
    for j in 1..t as u32 {
        for i in 0..j {
            let id = code[k] as usize;
            k += 1;
            for v in [i, j] {
                if !blocks[id].contains(&v) {
                    blocks[id].push(v);
                }
            }
        }
    }
    let relabelled =
        Scheme::new(q.t(), q.s(), blocks).expect("relabelling preserves the scheme axioms");
    debug_assert_eq!(perm.len(), t);
    (CanonicalForm(code), relabelled)
}

/// The canonical isomorphism key of a scheme.
pub fn canonical_form(q: &Scheme) -> CanonicalForm {
    canonicalize(q).0
}

/// A canonically relabelled representative of the scheme's class.
pub fn canonical_scheme(q: &Scheme) -> Scheme {
    canonicalize(q).1
}

/// Enumerates one representative per isomorphism class of schemes for the
/// pair `(s, t)`, with the default size cap of [`DEFAULT_ENUMERATION_CAP`].
///
/// Output is deterministic: classes are sorted by number of large blocks,
/// then by canonical code.
pub fn enumerate_schemes(s: u32, t: u32) -> Result<Vec<Scheme>> {
    enumerate_schemes_with_cap(s, t, DEFAULT_ENUMERATION_CAP)
}

/// Same as [`enumerate_schemes`] with an explicit cap on `t`.
pub fn enumerate_schemes_with_cap(s: u32, t: u32, cap: u32) -> Result<Vec<Scheme>> {
    classify_pair(s as i64, t as i64)?;
    if t > cap {
        return Err(Error::TooLarge { t, cap });
    }
    // Candidate large blocks as bitmasks, sizes 3..=s.
    let mut candidates: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << t) {
        let size = mask.count_ones();
        if size >= 3 && size <= s {
            candidates.push(mask);
        }
    }
    candidates.sort_unstable();

    let empty = Scheme::complete_pairs(s, t)?;
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    seen.insert(canonical_form(&empty));
    let mut reps: Vec<(usize, CanonicalForm, Scheme)> = Vec::new();
    let mut queue: Vec<Vec<u32>> = vec![Vec::new()]; // large-block mask families
    reps.push((0, canonical_form(&empty), empty));

    while let Some(family) = queue.pop() {
        for &cand in &candidates {
            if family.iter().any(|&m| (m & cand).count_ones() >= 2) {
                continue;
            }
            let mut extended = family.clone();
            extended.push(cand);
            let large: Vec<Vec<u32>> = extended
                .iter()
                .map(|&m| (0..t).filter(|&v| m & (1 << v) != 0).collect())
                .collect();
            let scheme = Scheme::from_large_blocks(s, t, &large)
                .expect("pairwise-compatible blocks form a scheme");
            let (form, rep) = canonicalize(&scheme);
            if seen.insert(form.clone()) {
                // Extend from the canonical representative's own blocks so
                // every class is reached exactly once.
                let rep_family: Vec<u32> = rep
                    .large_blocks()
                    .map(|b| b.iter().fold(0u32, |m, &v| m | 1 << v))
                    .collect();
                queue.push(rep_family);
                reps.push((extended.len(), form, rep));
            }
        }
    }

    reps.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(reps.into_iter().map(|(_, _, q)| q).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::classify_pair;
    use crate::rng::{purpose, stream_rng};
    use crate::schemes::random_scheme;
    use rand::seq::SliceRandom;

    fn relabel(q: &Scheme, perm: &[u32]) -> Scheme {
        let blocks = q
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&v| perm[v as usize]).collect())
            .collect();
        Scheme::new(q.t(), q.s(), blocks).unwrap()
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let pair = classify_pair(4, 7).unwrap();
        let mut rng = stream_rng(5, purpose::SCHEME, 1);
        for round in 0..40 {
            let q = random_scheme(pair, &mut rng);
            let mut perm: Vec<u32> = (0..7).collect();
            perm.shuffle(&mut rng);
            let relabelled = relabel(&q, &perm);
            assert_eq!(
                canonical_form(&q),
                canonical_form(&relabelled),
                "round {round}: relabelling changed the canonical form"
            );
        }
    }

    #[test]
    fn canonical_scheme_is_a_fixed_point() {
        let pair = classify_pair(4, 6).unwrap();
        let mut rng = stream_rng(6, purpose::SCHEME, 2);
        for _ in 0..25 {
            let q = random_scheme(pair, &mut rng);
            let (form, rep) = canonicalize(&q);
            let (form2, rep2) = canonicalize(&rep);
            assert_eq!(form, form2);
            assert_eq!(rep, rep2);
        }
    }

    #[test]
    fn distinct_shapes_get_distinct_forms() {
        // One triangle vs two disjoint triangles on 6 nodes.
        let one = Scheme::from_large_blocks(3, 6, &[vec![0, 1, 2]]).unwrap();
        let two = Scheme::from_large_blocks(3, 6, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_ne!(canonical_form(&one), canonical_form(&two));
    }

    #[test]
    fn enumeration_smallest_pair() {
        // (3,5): all pairs; one triangle; two triangles sharing a node.
        let classes = enumerate_schemes(3, 5).unwrap();
        assert_eq!(classes.len(), 3);
        let large_counts: Vec<usize> = classes.iter().map(|q| q.large_blocks().count()).collect();
        assert_eq!(large_counts, vec![0, 1, 2]);
        // Two triangles on 5 nodes are forced to share a node.
        let shapes: Vec<Vec<usize>> = classes
            .iter()
            .map(|q| q.large_blocks().map(Vec::len).collect())
            .collect();
        assert_eq!(shapes, vec![vec![], vec![3], vec![3, 3]]);
    }

    #[test]
    fn enumeration_respects_caps_and_range() {
        assert!(matches!(
            enumerate_schemes_with_cap(5, 9, 8),
            Err(Error::TooLarge { t: 9, cap: 8 })
        ));
        assert!(enumerate_schemes(2, 5).is_err());
        assert!(enumerate_schemes(3, 9).is_err()); // t > 2s-1
    }

    #[test]
    fn enumeration_counts_for_small_pairs() {
        // (4,6) enumerated by hand: no large blocks; one triangle; one
        // 4-block; two triangles sharing a node; two disjoint triangles;
        // 4-block plus triangle sharing a node; three triangles in a cycle;
        // four triangles pairwise sharing a node. The brute-force enumerator
        // in the integration tests confirms both counts.
        assert_eq!(enumerate_schemes(3, 5).unwrap().len(), 3);
        assert_eq!(enumerate_schemes(4, 6).unwrap().len(), 8);
    }

    #[test]
    fn enumeration_includes_the_extremal_schemes() {
        for (s, t) in [(3i64, 5i64), (4, 6), (4, 7)] {
            let pair = classify_pair(s, t).unwrap();
            let classes = enumerate_schemes(s as u32, t as u32).unwrap();
            let forms: HashSet<CanonicalForm> = classes.iter().map(canonical_form).collect();
            let q1 = crate::schemes::single_block_scheme(pair);
            let q2 = crate::schemes::overlapping_blocks_scheme(pair);
            assert!(forms.contains(&canonical_form(&q1)));
            assert!(forms.contains(&canonical_form(&q2)));
        }
    }
}
