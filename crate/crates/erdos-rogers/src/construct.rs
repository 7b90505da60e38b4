//! The randomized construction pipeline.
//!
//! Stage G0 overlays `m` random complete multipartite graphs (one per colour
//! class); stage G1 drops every edge whose endpoints share two or more
//! classes; stage G assigns each surviving edge a random birth order and
//! rejects an edge exactly when it would complete the core of some K_t whose
//! other core edges are all already accepted. A [`DeletionTrace`] records
//! every decision so a run can be replayed byte-for-byte.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use num::rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clique::{contains_clique, enumerate_cliques, BitAdjacency};
use crate::error::{Error, Result};
use crate::exponents::{classify_pair, exponents, ConstructionParams, PairClass};
use crate::graph::{edge, ColourClass, ColouredGraph, Edge, Stage};
use crate::rng::{exact_bernoulli, purpose, stream_rng};
use crate::schemes::{core, Scheme};

/// One K_t found in G1, with its extracted colour structure.
#[derive(Debug, Clone)]
pub struct KtRecord {
    /// The clique's vertices, ascending.
    pub vertices: Vec<u32>,
    /// Colour structure on positions 0..t (position i is `vertices[i]`):
    /// pairs grouped by their unique shared class.
    pub scheme: Scheme,
    /// All vertex pairs inside the core's node subset, mapped back to graph
    /// vertices; the type-2 pass guarantees at least one of them is absent
    /// from G.
    pub core_edges: Vec<Edge>,
    /// Exact value of the core (minimal over induced subconfigurations).
    pub core_value: BigRational,
}

/// Identity data pinned into a trace so replays can detect mismatched or
/// tampered inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub n: usize,
    pub s: u32,
    pub t: u32,
    pub seed: u64,
    /// SHA-256 of the G0 graph file (the exact JSON bytes).
    pub g0_sha256: String,
    /// SHA-256 of the G1 edge set (sorted `u,v` lines).
    pub g1_edges_sha256: String,
    /// SHA-256 of the final edge set; empty in a partial trace.
    pub g_edges_sha256: String,
    pub kt_count: usize,
}

/// A type-1 deletion: the edge and every class containing both endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type1Removal {
    pub edge: Edge,
    pub shared_colours: Vec<u32>,
}

/// A type-2 rejection: the edge and the index (into the K_t list) of the
/// record whose core it would have completed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type2Removal {
    pub edge: Edge,
    pub kt: usize,
}

/// Full record of both deletion passes, sufficient to reconstruct G from G0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionTrace {
    pub meta: TraceMeta,
    pub type1_removed: Vec<Type1Removal>,
    /// G1 edges in birth order; empty in a partial trace.
    pub birthtimes: Vec<Edge>,
    pub type2_removed: Vec<Type2Removal>,
}

/// SHA-256 of raw bytes, lowercase hex.
pub fn hash_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of an edge set, rendered as sorted `u,v` lines.
pub fn hash_edges(edges: &BTreeSet<Edge>) -> String {
    let mut hasher = Sha256::new();
    for (u, v) in edges {
        hasher.update(format!("{u},{v}\n").as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Samples stage G0: every vertex joins each of the `m` classes
/// independently with probability gamma, and each member is assigned one of
/// the `s` parts uniformly. Fully determined by `(pair, params, seed)`.
pub fn sample_g0(pair: PairClass, params: &ConstructionParams, seed: u64) -> Result<ColouredGraph> {
    params.validate()?;
    if params.n > u32::MAX as usize {
        return Err(Error::InvalidParams(format!(
            "n = {} exceeds the vertex id range",
            params.n
        )));
    }
    let s = pair.s();
    let mut classes = Vec::with_capacity(params.m);
    for i in 0..params.m {
        let mut rng = stream_rng(seed, purpose::CLASS, i as u64);
        let mut members = Vec::new();
        let mut parts = Vec::new();
        for v in 0..params.n as u32 {
            if exact_bernoulli(&mut rng, &params.gamma) {
                members.push(v);
                parts.push(rng.random_range(1..=s));
            }
        }
        classes.push(ColourClass { members, parts });
    }
    ColouredGraph::new_g0(params.n, s, pair.t(), classes)
}

/// Applies the type-1 rule: an edge survives exactly when its endpoints
/// share exactly one class and that class separates them. Returns the G1
/// graph and a partial trace listing every removal with its shared classes.
pub fn type1_filter(g0: &ColouredGraph) -> Result<(ColouredGraph, DeletionTrace)> {
    if g0.stage() != Stage::G0 {
        return Err(Error::WrongStage {
            expected: Stage::G0,
            got: g0.stage(),
        });
    }
    let mut surviving = BTreeSet::new();
    let mut removed = Vec::new();
    for prov in g0.provenance_map().into_values() {
        if !prov.in_g0() {
            continue;
        }
        if prov.shared_colours.len() >= 2 {
            removed.push(Type1Removal {
                edge: prov.edge,
                shared_colours: prov.shared_colours,
            });
        } else {
            surviving.insert(prov.edge);
        }
    }
    removed.sort_by_key(|r| r.edge);
    let g1 = g0.advanced(Stage::G1, surviving);
    let meta = TraceMeta {
        n: g0.n(),
        s: g0.s(),
        t: g0.t(),
        seed: 0,
        g0_sha256: hash_bytes(g0.to_json_string().as_bytes()),
        g1_edges_sha256: hash_edges(g1.edges()),
        g_edges_sha256: String::new(),
        kt_count: 0,
    };
    Ok((
        g1,
        DeletionTrace {
            meta,
            type1_removed: removed,
            birthtimes: Vec::new(),
            type2_removed: Vec::new(),
        },
    ))
}

/// Exhaustively lists the t-cliques of G1 and extracts each one's colour
/// structure: the pairs of the clique are grouped by their unique shared
/// class into the blocks of a scheme, whose core is then computed exactly.
///
/// `t` must form a valid pair with the graph's `s` so that exponents exist.
pub fn find_kt(g1: &ColouredGraph, t: u32) -> Result<Vec<KtRecord>> {
    if g1.stage() != Stage::G1 {
        return Err(Error::WrongStage {
            expected: Stage::G1,
            got: g1.stage(),
        });
    }
    let pair = classify_pair(g1.s() as i64, t as i64)?;
    let e = exponents(pair);
    let adj = BitAdjacency::from_edges(g1.n(), g1.edges());
    let cliques = enumerate_cliques(&adj, t as usize);
    if cliques.is_empty() {
        return Ok(Vec::new());
    }
    let provenance = g1.provenance_map();
    let mut records = Vec::with_capacity(cliques.len());
    for clique in cliques {
        // Group clique pairs by shared class; block = positions (indexes
        // into `clique`) of the class's clique vertices.
        let mut by_class: HashMap<u32, Vec<u32>> = HashMap::new();
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                let prov = &provenance[&edge(clique[i], clique[j])];
                debug_assert_eq!(
                    prov.shared_colours.len(),
                    1,
                    "G1 edges have a unique shared class"
                );
                let class = prov.shared_colours[0];
                let block = by_class.entry(class).or_default();
                for pos in [i as u32, j as u32] {
                    if !block.contains(&pos) {
                        block.push(pos);
                    }
                }
            }
        }
        let blocks: Vec<Vec<u32>> = by_class.into_values().collect();
        let scheme = Scheme::new(t, g1.s(), blocks)?;
        let core_result = core(&scheme, &e)?;
        let core_vertices: Vec<u32> = core_result
            .node_subset
            .iter()
            .map(|&pos| clique[pos as usize])
            .collect();
        let mut core_edges = Vec::new();
        for i in 0..core_vertices.len() {
            for j in i + 1..core_vertices.len() {
                core_edges.push(edge(core_vertices[i], core_vertices[j]));
            }
        }
        core_edges.sort_unstable();
        records.push(KtRecord {
            vertices: clique,
            scheme,
            core_edges,
            core_value: core_result.value,
        });
    }
    Ok(records)
}

/// Runs the type-2 pass: G1 edges are processed in a seeded random birth
/// order; an edge is rejected exactly when some listed K_t core contains it
/// and all the core's other edges are already accepted. Completes the
/// partial trace from [`type1_filter`] (whose G1 hash must match).
///
/// Fails with `IncompleteKtList` if a t-clique survives, which means `kts`
/// did not cover the graph.
pub fn type2_filter(
    g1: &ColouredGraph,
    kts: &[KtRecord],
    seed: u64,
    partial: DeletionTrace,
) -> Result<(ColouredGraph, DeletionTrace)> {
    if g1.stage() != Stage::G1 {
        return Err(Error::WrongStage {
            expected: Stage::G1,
            got: g1.stage(),
        });
    }
    let g1_hash = hash_edges(g1.edges());
    if partial.meta.g1_edges_sha256 != g1_hash {
        return Err(Error::HashMismatch {
            what: "G1 edge set vs partial trace".to_string(),
            recorded: partial.meta.g1_edges_sha256,
            actual: g1_hash,
        });
    }

    let mut births: Vec<Edge> = g1.edges().iter().copied().collect();
    let mut rng = stream_rng(seed, purpose::BIRTHS, 0);
    births.shuffle(&mut rng);

    let mut cores_of_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (idx, record) in kts.iter().enumerate() {
        for &e in &record.core_edges {
            cores_of_edge.entry(e).or_default().push(idx);
        }
    }
    let core_sizes: Vec<usize> = kts.iter().map(|r| r.core_edges.len()).collect();
    let mut accepted_in_core = vec![0usize; kts.len()];

    let mut accepted = BTreeSet::new();
    let mut type2_removed = Vec::new();
    for &e in &births {
        let touching = cores_of_edge.get(&e);
        let completes = touching.and_then(|cores| {
            cores
                .iter()
                .copied()
                .find(|&ci| accepted_in_core[ci] + 1 == core_sizes[ci])
        });
        match completes {
            Some(kt) => type2_removed.push(Type2Removal { edge: e, kt }),
            None => {
                accepted.insert(e);
                if let Some(cores) = touching {
                    for &ci in cores {
                        accepted_in_core[ci] += 1;
                    }
                }
            }
        }
    }

    let g = g1.advanced(Stage::G, accepted);
    if let Some(witness) = contains_clique(g.n(), g.edges(), g.t() as usize) {
        return Err(Error::IncompleteKtList { t: g.t(), witness });
    }
    let mut trace = partial;
    trace.meta.seed = seed;
    trace.meta.kt_count = kts.len();
    trace.meta.g_edges_sha256 = hash_edges(g.edges());
    trace.birthtimes = births;
    trace.type2_removed = type2_removed;
    Ok((g, trace))
}

/// Independent K_t-freeness check by exhaustive search. Does not reuse the
/// pipeline's clique enumerator.
pub fn verify_ktfree(g: &ColouredGraph, t: u32) -> bool {
    contains_clique(g.n(), g.edges(), t as usize).is_none()
}

/// Number of listed cores containing each G1 edge. Every G1 edge appears in
/// the map, with count 0 when no core touches it.
pub fn cores_per_edge(g1: &ColouredGraph, kts: &[KtRecord]) -> Result<HashMap<Edge, usize>> {
    if g1.stage() != Stage::G1 {
        return Err(Error::WrongStage {
            expected: Stage::G1,
            got: g1.stage(),
        });
    }
    let mut counts: HashMap<Edge, usize> = g1.edges().iter().map(|&e| (e, 0)).collect();
    for record in kts {
        for e in &record.core_edges {
            if let Some(c) = counts.get_mut(e) {
                *c += 1;
            }
        }
    }
    Ok(counts)
}

/// Everything produced by one seeded run.
pub struct PipelineRun {
    pub g0: ColouredGraph,
    pub g1: ColouredGraph,
    pub g: ColouredGraph,
    pub kts: Vec<KtRecord>,
    pub trace: DeletionTrace,
}

/// Runs sample -> type-1 -> K_t search -> type-2 under one master seed.
pub fn run_pipeline(
    pair: PairClass,
    params: &ConstructionParams,
    seed: u64,
) -> Result<PipelineRun> {
    let g0 = sample_g0(pair, params, seed)?;
    let (g1, partial) = type1_filter(&g0)?;
    let kts = find_kt(&g1, pair.t())?;
    let (g, trace) = type2_filter(&g1, &kts, seed, partial)?;
    Ok(PipelineRun {
        g0,
        g1,
        g,
        kts,
        trace,
    })
}

/// Mechanically replays a trace against a G0 graph: subtracts the type-1
/// removals, checks the G1 hash, subtracts the type-2 removals, checks the
/// final hash, and returns the stage-G graph. Any divergence (wrong G0 file,
/// edited removal list) surfaces as `HashMismatch`.
pub fn apply_trace(g0: &ColouredGraph, trace: &DeletionTrace) -> Result<ColouredGraph> {
    if g0.stage() != Stage::G0 {
        return Err(Error::WrongStage {
            expected: Stage::G0,
            got: g0.stage(),
        });
    }
    let g0_hash = hash_bytes(g0.to_json_string().as_bytes());
    if trace.meta.g0_sha256 != g0_hash {
        return Err(Error::HashMismatch {
            what: "G0 graph file".to_string(),
            recorded: trace.meta.g0_sha256.clone(),
            actual: g0_hash,
        });
    }
    let mut edges = g0.edges().clone();
    for removal in &trace.type1_removed {
        edges.remove(&removal.edge);
    }
    let g1_hash = hash_edges(&edges);
    if trace.meta.g1_edges_sha256 != g1_hash {
        return Err(Error::HashMismatch {
            what: "replayed G1 edge set".to_string(),
            recorded: trace.meta.g1_edges_sha256.clone(),
            actual: g1_hash,
        });
    }
    for removal in &trace.type2_removed {
        edges.remove(&removal.edge);
    }
    let g_hash = hash_edges(&edges);
    if trace.meta.g_edges_sha256 != g_hash {
        return Err(Error::HashMismatch {
            what: "replayed final edge set".to_string(),
            recorded: trace.meta.g_edges_sha256.clone(),
            actual: g_hash,
        });
    }
    Ok(g0.advanced(Stage::G, edges))
}

/// One line of the trace file.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TraceLine {
    Meta(TraceMeta),
    Type1(Type1Removal),
    Birth(Edge),
    Type2(Type2Removal),
}

impl DeletionTrace {
    /// JSON-lines rendering: one `meta` line, then `type1`, `birth`, and
    /// `type2` lines in order.
    pub fn to_jsonl_string(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &TraceLine| {
            out.push_str(&serde_json::to_string(line).expect("trace serialization cannot fail"));
            out.push('\n');
        };
        push(&TraceLine::Meta(self.meta.clone()));
        for removal in &self.type1_removed {
            push(&TraceLine::Type1(removal.clone()));
        }
        for &e in &self.birthtimes {
            push(&TraceLine::Birth(e));
        }
        for removal in &self.type2_removed {
            push(&TraceLine::Type2(removal.clone()));
        }
        out
    }

    pub fn from_jsonl_str(text: &str) -> Result<Self> {
        let mut meta: Option<TraceMeta> = None;
        let mut type1_removed = Vec::new();
        let mut birthtimes = Vec::new();
        let mut type2_removed = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed: TraceLine = serde_json::from_str(line)?;
            match parsed {
                TraceLine::Meta(m) => {
                    if meta.replace(m).is_some() {
                        return Err(Error::Format(format!(
                            "line {}: second meta line in trace",
                            lineno + 1
                        )));
                    }
                }
                TraceLine::Type1(r) => type1_removed.push(r),
                TraceLine::Birth(e) => birthtimes.push(e),
                TraceLine::Type2(r) => type2_removed.push(r),
            }
        }
        let meta = meta.ok_or_else(|| Error::Format("trace has no meta line".to_string()))?;
        Ok(DeletionTrace {
            meta,
            type1_removed,
            birthtimes,
            type2_removed,
        })
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_jsonl_string())?;
        Ok(())
    }

    pub fn read_jsonl(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_jsonl_str(&text)
    }
}
