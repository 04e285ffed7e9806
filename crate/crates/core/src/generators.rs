//! Deterministic instance generators. All randomness comes from a ChaCha
//! stream seeded by the caller, so a seed names an instance.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphDocument, Vertex};
use crate::interval::IntervalRepresentation;
use crate::subsets::Combinations;
use crate::treewidth::TreeDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("unknown graph kind {0:?}")]
    UnknownKind(String),
}

fn invalid(name: &'static str, reason: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidParameter { name, reason: reason.into() }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are simple")
}

pub fn cycle(n: usize) -> Result<Graph, GeneratorError> {
    if n < 3 {
        return Err(invalid("n", "a cycle needs at least 3 vertices"));
    }
    Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are simple"))
}

pub fn clique(n: usize) -> Graph {
    Graph::from_edges(n, Combinations::new(n, 2).map(|p| (p[0], p[1]))).expect("clique edges are simple")
}

/// Center `0` joined to leaves `1..n`.
pub fn star(n: usize) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(invalid("n", "a star needs a center"));
    }
    Ok(Graph::from_edges(n, (1..n).map(|i| (0, i))).expect("star edges are simple"))
}

fn check_probability(p: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid("p", format!("{p} is not a probability")))
    }
}

/// Erdős–Rényi graph: each pair becomes an edge with probability `p`,
/// pairs visited in lexicographic order.
pub fn random_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph, GeneratorError> {
    check_probability(p)?;
    let edges: Vec<_> = Combinations::new(n, 2).filter(|_| rng.gen_bool(p)).map(|e| (e[0], e[1])).collect();
    Ok(Graph::from_edges(n, edges).expect("pairs are distinct"))
}

/// Draws `G(n, p)` until it is connected. `p` must be positive unless
/// `n <= 1`.
pub fn random_connected_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph, GeneratorError> {
    if n > 1 && p <= 0.0 {
        return Err(invalid("p", "a connected graph needs edges"));
    }
    loop {
        let g = random_gnp(n, p, rng)?;
        if g.connected_components().len() <= 1 {
            return Ok(g);
        }
    }
}

/// Vertex-disjoint union, relabeling each part after the previous ones.
pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in parts {
        edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
        offset += g.n();
    }
    Graph::from_edges(offset, edges).expect("parts are simple")
}

/// `n` intervals whose `2n` integer endpoints are a random permutation of
/// `0..2n`, paired up in order.
pub fn random_interval<R: Rng>(n: usize, rng: &mut R) -> IntervalRepresentation {
    let mut points: Vec<i64> = (0..2 * n as i64).collect();
    points.shuffle(rng);
    let pairs: Vec<(i64, i64)> = points.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
    IntervalRepresentation::from_integers(&pairs)
}

/// Random partial `width`-tree on `n` vertices with a matching tree
/// decomposition. Each edge of the underlying `width`-tree is kept with
/// probability `p`, which leaves the decomposition valid.
pub fn random_bounded_tw<R: Rng>(
    n: usize,
    width: usize,
    p: f64,
    rng: &mut R,
) -> Result<(Graph, TreeDecomposition), GeneratorError> {
    check_probability(p)?;
    if n == 0 {
        return Ok((Graph::empty(0), TreeDecomposition::new(Vec::new(), Vec::new(), 0)));
    }
    let first = n.min(width + 1);
    let mut bags: Vec<Vec<Vertex>> = vec![(0..first).collect()];
    let mut tree_edges = Vec::new();
    let mut full: Vec<(Vertex, Vertex)> = Combinations::new(first, 2).map(|e| (e[0], e[1])).collect();
    for v in first..n {
        let parent = rng.gen_range(0..bags.len());
        let mut bag = bags[parent].clone();
        bag.remove(rng.gen_range(0..bag.len()));
        full.extend(bag.iter().map(|&u| (u, v)));
        bag.push(v);
        tree_edges.push((parent, bags.len()));
        bags.push(bag);
    }
    let kept: Vec<_> = full.into_iter().filter(|_| rng.gen_bool(p)).collect();
    let g = Graph::from_edges(n, kept).expect("k-tree edges are simple");
    Ok((g, TreeDecomposition::new(bags, tree_edges, n)))
}

/// Largest order accepted by [`non_isomorphic_graphs`].
pub const MAX_EXHAUSTIVE_ORDER: usize = 6;

/// One graph per isomorphism class on `n` vertices: the labeled graph whose
/// edge mask (pairs in lexicographic order) is smallest over all
/// relabelings.
pub fn non_isomorphic_graphs(n: usize) -> Result<Vec<Graph>, GeneratorError> {
    if n > MAX_EXHAUSTIVE_ORDER {
        return Err(invalid("n", format!("exhaustive enumeration stops at {MAX_EXHAUSTIVE_ORDER} vertices")));
    }
    let pairs: Vec<(Vertex, Vertex)> = Combinations::new(n, 2).map(|e| (e[0], e[1])).collect();
    let index = |u: Vertex, v: Vertex| pairs.binary_search(&(u.min(v), u.max(v))).unwrap();
    let relabelings: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .skip(1)
        .map(|pi| pairs.iter().map(|&(u, v)| index(pi[u], pi[v])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let smallest = relabelings.iter().all(|map| {
            let image = map.iter().enumerate().filter(|&(b, _)| mask >> b & 1 == 1).fold(0u32, |acc, (_, &t)| acc | 1 << t);
            image >= mask
        });
        if smallest {
            let edges = pairs.iter().enumerate().filter(|&(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
            out.push(Graph::from_edges(n, edges).expect("pairs are distinct"));
        }
    }
    Ok(out)
}

/// All permutations of `0..n`, identity first.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    RandomGnp,
    Path,
    Cycle,
    Clique,
    Star,
    RandomInterval,
    RandomBoundedTw,
}

impl GraphKind {
    pub const ALL: [GraphKind; 7] = [
        GraphKind::RandomGnp,
        GraphKind::Path,
        GraphKind::Cycle,
        GraphKind::Clique,
        GraphKind::Star,
        GraphKind::RandomInterval,
        GraphKind::RandomBoundedTw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::RandomGnp => "random-gnp",
            GraphKind::Path => "path",
            GraphKind::Cycle => "cycle",
            GraphKind::Clique => "clique",
            GraphKind::Star => "star",
            GraphKind::RandomInterval => "random-interval",
            GraphKind::RandomBoundedTw => "random-bounded-tw",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, GeneratorError> {
        GraphKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GeneratorError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenParams {
    pub n: usize,
    /// Edge probability for `random-gnp` and `random-bounded-tw`.
    pub p: f64,
    /// Width bound for `random-bounded-tw`.
    pub width: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: 8, p: 0.5, width: 2 }
    }
}

/// A generated graph plus the structure its kind promises.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub kind: GraphKind,
    pub params: GenParams,
    pub seed: u64,
    pub graph: Graph,
    pub intervals: Option<IntervalRepresentation>,
    pub decomposition: Option<TreeDecomposition>,
}

impl Generated {
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut out = serde_json::json!({
            "kind": self.kind,
            "params": self.params,
            "seed": self.seed,
            "graph": GraphDocument { graph: self.graph.clone(), labels: Default::default() }.to_json_value(),
        });
        if let Some(ir) = &self.intervals {
            out["intervals"] = serde_json::to_value(ir).expect("intervals serialize");
        }
        if let Some(td) = &self.decomposition {
            out["td"] = serde_json::Value::String(td.to_td_string());
        }
        out
    }
}

pub fn generate(kind: GraphKind, params: GenParams, seed: u64) -> Result<Generated, GeneratorError> {
    let mut rng = seeded(seed);
    let n = params.n;
    let (graph, intervals, decomposition) = match kind {
        GraphKind::RandomGnp => (random_gnp(n, params.p, &mut rng)?, None, None),
        GraphKind::Path => (path(n), None, None),
        GraphKind::Cycle => (cycle(n)?, None, None),
        GraphKind::Clique => (clique(n), None, None),
        GraphKind::Star => (star(n)?, None, None),
        GraphKind::RandomInterval => {
            let ir = random_interval(n, &mut rng);
            let g = ir.to_graph().expect("generated intervals are well formed");
            (g, Some(ir), None)
        }
        GraphKind::RandomBoundedTw => {
            let (g, td) = random_bounded_tw(n, params.width, params.p, &mut rng)?;
            (g, None, Some(td))
        }
    };
    Ok(Generated { kind, params, seed, graph, intervals, decomposition })
}
