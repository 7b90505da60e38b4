//! Coloured graphs: `n` vertices plus colour classes, where each class is a
//! vertex subset partitioned into at most `s` parts. A class contributes the
//! complete multipartite graph on its parts, and the union over classes is
//! the stage-G0 edge set. Later stages keep the same classes and shrink the
//! edge set.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge stored with its endpoints in increasing order.
pub type Edge = (u32, u32);

/// Normalizes an endpoint pair into the canonical edge ordering.
pub fn edge(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Pipeline stage of a graph's edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    G0,
    G1,
    G,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::G0 => write!(f, "G0"),
            Stage::G1 => write!(f, "G1"),
            Stage::G => write!(f, "G"),
        }
    }
}

/// One colour class: its member vertices (strictly increasing) and, in
/// parallel, the 1-based part index of each member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourClass {
    pub members: Vec<u32>,
    pub parts: Vec<u32>,
}

impl ColourClass {
    /// Part index of `v` within this class, if `v` is a member.
    pub fn part_of(&self, v: u32) -> Option<u32> {
        self.members.binary_search(&v).ok().map(|i| self.parts[i])
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Where an edge comes from: the classes containing both endpoints, and the
/// subset of those that actually separate the endpoints into different parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeProvenance {
    pub edge: Edge,
    /// Classes whose partition puts the endpoints in different parts.
    pub providing_colours: Vec<u32>,
    /// All classes containing both endpoints (superset of providing).
    pub shared_colours: Vec<u32>,
}

impl EdgeProvenance {
    /// The pair is a stage-G0 edge exactly when some class provides it.
    pub fn in_g0(&self) -> bool {
        !self.providing_colours.is_empty()
    }

    /// The first deletion pass removes every G0 edge whose endpoints share
    /// at least two colours, whether or not both provide the edge.
    pub fn removed_by_type1(&self) -> bool {
        self.in_g0() && self.shared_colours.len() >= 2
    }
}

/// A coloured graph at one pipeline stage.
///
/// The colour classes never change after sampling; stages differ only in
/// their edge set. Serialized files carry the classes (from which the G0 and
/// G1 edge sets are rederivable); the stage-G edge set additionally needs
/// the deletion trace, which is a separate artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredGraph {
    n: usize,
    s: u32,
    t: u32,
    stage: Stage,
    classes: Vec<ColourClass>,
    edges: BTreeSet<Edge>,
}

#[derive(Serialize)]
struct GraphFileView<'a> {
    n: usize,
    s: u32,
    t: u32,
    stage: Stage,
    classes: &'a [ColourClass],
}

#[derive(Deserialize)]
struct GraphFileOwned {
    n: usize,
    s: u32,
    t: u32,
    stage: Stage,
    classes: Vec<ColourClass>,
}

impl ColouredGraph {
    /// Builds a stage-G0 graph from sampled classes, validating them and
    /// deriving the edge set.
    pub fn new_g0(n: usize, s: u32, t: u32, classes: Vec<ColourClass>) -> Result<Self> {
        validate_classes(n, s, &classes)?;
        let edges = derive_g0_edges(&classes);
        Ok(ColouredGraph {
            n,
            s,
            t,
            stage: Stage::G0,
            classes,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn classes(&self) -> &[ColourClass] {
        &self.classes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.edges.contains(&edge(u, v))
    }

    /// Same classes, new stage and edge set. Used by the deletion passes.
    pub(crate) fn advanced(&self, stage: Stage, edges: BTreeSet<Edge>) -> Self {
        ColouredGraph {
            n: self.n,
            s: self.s,
            t: self.t,
            stage,
            classes: self.classes.clone(),
            edges,
        }
    }

    /// Provenance records for every pair of vertices sharing at least one
    /// class, keyed by edge. Pairs sharing no class do not appear.
    pub fn provenance_map(&self) -> HashMap<Edge, EdgeProvenance> {
        let mut map: HashMap<Edge, EdgeProvenance> = HashMap::new();
        for (ci, class) in self.classes.iter().enumerate() {
            for i in 0..class.members.len() {
                for j in i + 1..class.members.len() {
                    let e = edge(class.members[i], class.members[j]);
                    let entry = map.entry(e).or_insert_with(|| EdgeProvenance {
                        edge: e,
                        providing_colours: Vec::new(),
                        shared_colours: Vec::new(),
                    });
                    entry.shared_colours.push(ci as u32);
                    if class.parts[i] != class.parts[j] {
                        entry.providing_colours.push(ci as u32);
                    }
                }
            }
        }
        map
    }

    /// Provenance of one pair (also for pairs that are not edges).
    pub fn edge_provenance(&self, u: u32, v: u32) -> EdgeProvenance {
        let e = edge(u, v);
        let mut prov = EdgeProvenance {
            edge: e,
            providing_colours: Vec::new(),
            shared_colours: Vec::new(),
        };
        for (ci, class) in self.classes.iter().enumerate() {
            if let (Some(pu), Some(pv)) = (class.part_of(e.0), class.part_of(e.1)) {
                prov.shared_colours.push(ci as u32);
                if pu != pv {
                    prov.providing_colours.push(ci as u32);
                }
            }
        }
        prov
    }

    /// For each vertex, the sorted list of classes containing it.
    pub fn vertex_colours(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.n];
        for (ci, class) in self.classes.iter().enumerate() {
            for &v in &class.members {
                out[v as usize].push(ci as u32);
            }
        }
        out
    }

    /// Compact JSON rendering: `{"n","s","t","stage","classes"}` with each
    /// class as `{"members":[...],"parts":[...]}`. Edge sets are not stored;
    /// they are rederived on load (G0, G1) or replayed from a trace (G).
    pub fn to_json_string(&self) -> String {
        let view = GraphFileView {
            n: self.n,
            s: self.s,
            t: self.t,
            stage: self.stage,
            classes: &self.classes,
        };
        let mut text = serde_json::to_string(&view).expect("graph serialization cannot fail");
        text.push('\n');
        text
    }

    /// Parses a graph file and rederives its edge set. Stage-G files are
    /// rejected: their edge set depends on the deletion trace, so they must
    /// be reconstructed through replay instead.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: GraphFileOwned = serde_json::from_str(text)?;
        validate_classes(file.n, file.s, &file.classes)?;
        let g0_edges = derive_g0_edges(&file.classes);
        let mut graph = ColouredGraph {
            n: file.n,
            s: file.s,
            t: file.t,
            stage: Stage::G0,
            classes: file.classes,
            edges: g0_edges,
        };
        match file.stage {
            Stage::G0 => Ok(graph),
            Stage::G1 => {
                let g1_edges = derive_g1_edges(&graph);
                graph.stage = Stage::G1;
                graph.edges = g1_edges;
                Ok(graph)
            }
            Stage::G => Err(Error::Format(
                "stage-G files carry no derivable edge set; reconstruct via replay with the trace"
                    .into(),
            )),
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}

fn validate_classes(n: usize, s: u32, classes: &[ColourClass]) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidParams(format!("s = {s} must be at least 2")));
    }
    for (ci, class) in classes.iter().enumerate() {
        if class.members.len() != class.parts.len() {
            return Err(Error::Format(format!(
                "class {ci}: {} members but {} part labels",
                class.members.len(),
                class.parts.len()
            )));
        }
        for window in class.members.windows(2) {
            if window[0] >= window[1] {
                return Err(Error::Format(format!(
                    "class {ci}: members must be strictly increasing"
                )));
            }
        }
        if let Some(&last) = class.members.last() {
            if last as usize >= n {
                return Err(Error::Format(format!(
                    "class {ci}: member {last} outside 0..{n}"
                )));
            }
        }
        for &p in &class.parts {
            if p < 1 || p > s {
                return Err(Error::Format(format!(
                    "class {ci}: part index {p} outside 1..={s}"
                )));
            }
        }
    }
    Ok(())
}

/// Union of the complete multipartite graphs given by the classes.
pub fn derive_g0_edges(classes: &[ColourClass]) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    for class in classes {
        for i in 0..class.members.len() {
            for j in i + 1..class.members.len() {
                if class.parts[i] != class.parts[j] {
                    edges.insert(edge(class.members[i], class.members[j]));
                }
            }
        }
    }
    edges
}

/// G0 edges whose endpoints share exactly one colour. This is the surviving
/// set of the first deletion pass and depends only on the classes.
pub fn derive_g1_edges(g0: &ColouredGraph) -> BTreeSet<Edge> {
    g0.provenance_map()
        .values()
        .filter(|p| p.in_g0() && p.shared_colours.len() == 1)
        .map(|p| p.edge)
        .collect()
}
