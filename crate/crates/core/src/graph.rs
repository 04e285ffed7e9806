//! Immutable undirected graphs on dense vertex indices `0..n`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: endpoint out of range ({vertex} >= {n})")]
    EndpointOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid JSON graph: {0}")]
    Json(String),
}

/// Simple undirected graph with sorted adjacency lists.
///
/// Edge errors carry a `line` field: the 1-based input line for the edge-list
/// format, or the 1-based position in the edge sequence otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut builder = Builder::new(n);
        for (i, (u, v)) in edges.into_iter().enumerate() {
            builder.add(i + 1, u, v)?;
        }
        Ok(builder.finish())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Connected components, ordered by their smallest vertex.
    pub fn connected_components(&self) -> ComponentDecomposition {
        self.components_avoiding(&vec![false; self.n()])
    }

    /// Components of the graph with the `blocked` vertices removed. Blocked
    /// vertices map to no component.
    pub fn components_avoiding(&self, blocked: &[bool]) -> ComponentDecomposition {
        let n = self.n();
        let mut component_of = vec![None; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if blocked[s] || component_of[s].is_some() {
                continue;
            }
            let id = components.len();
            let mut members = vec![s];
            component_of[s] = Some(id);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !blocked[w] && component_of[w].is_none() {
                        component_of[w] = Some(id);
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        ComponentDecomposition { components, component_of }
    }

    /// Induced subgraph on `keep` (any order, no duplicates). Returns the
    /// subgraph and the map from new indices to original vertices; the new
    /// indices follow the ascending order of `keep`.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<(Graph, Vec<Vertex>), GraphError> {
        let mut map: Vec<Vertex> = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok((Graph { adj, m }, map))
    }

    /// `G - S` with dense reindexing; the returned map sends new indices back
    /// to the original labels.
    pub fn delete_vertices(&self, s: &[Vertex]) -> Result<(Graph, Vec<Vertex>), GraphError> {
        let mut removed = vec![false; self.n()];
        for &v in s {
            self.check_vertex(v)?;
            removed[v] = true;
        }
        let keep: Vec<Vertex> = (0..self.n()).filter(|&v| !removed[v]).collect();
        self.induced_subgraph(&keep)
    }

    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        Ok(GraphDocument::parse(text)?.graph)
    }

    /// `n m` header followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        GraphDocument { graph: self.clone(), labels: BTreeMap::new() }.to_json()
    }
}

struct Builder {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder { adj: vec![Vec::new(); n], m: 0 }
    }

    fn add(&mut self, line: usize, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.adj.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::EndpointOutOfRange { line, vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        if self.adj[u].contains(&v) {
            return Err(GraphError::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.m += 1;
        Ok(())
    }

    fn finish(mut self) -> Graph {
        for ns in &mut self.adj {
            ns.sort_unstable();
        }
        Graph { adj: self.adj, m: self.m }
    }
}

/// Partition of the (non-removed) vertices into maximal connected sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Vec<Vertex>>,
    pub component_of: Vec<Option<usize>>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

/// A graph together with optional human-readable vertex labels (gadget roles
/// of reduction instances, for example).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: Graph,
    pub labels: BTreeMap<Vertex, String>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<String, String>>,
}

impl GraphDocument {
    /// Accepts the JSON form (`{"n":..,"edges":[[u,v],..]}`) or the edge-list
    /// form. Blank lines and lines starting with `#` are ignored in the latter.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Ok(GraphDocument { graph: parse_edge_list(text)?, labels: BTreeMap::new() })
        }
    }

    fn parse_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let graph = Graph::from_edges(raw.n, raw.edges)?;
        let mut labels = BTreeMap::new();
        for (key, label) in raw.labels.unwrap_or_default() {
            let v: Vertex = key
                .parse()
                .map_err(|_| GraphError::Json(format!("label key {key:?} is not a vertex index")))?;
            graph.check_vertex(v)?;
            labels.insert(v, label);
        }
        Ok(GraphDocument { graph, labels })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = GraphJson {
            n: self.graph.n(),
            edges: self.graph.edges().collect(),
            labels: if self.labels.is_empty() {
                None
            } else {
                Some(self.labels.iter().map(|(v, l)| (v.to_string(), l.clone())).collect())
            },
        };
        serde_json::to_value(raw).expect("graph serializes")
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        reason: "missing \"n m\" header".into(),
    })?;
    let [n, m] = parse_pair(header_line, header)?;
    let mut builder = Builder::new(n);
    let mut seen = 0;
    for (line, l) in lines {
        if seen == m {
            return Err(GraphError::Malformed { line, reason: format!("more than {m} edge lines") });
        }
        let [u, v] = parse_pair(line, l)?;
        builder.add(line, u, v)?;
        seen += 1;
    }
    if seen < m {
        return Err(GraphError::Malformed {
            line: text.lines().count().max(1),
            reason: format!("expected {m} edge lines, found {seen}"),
        });
    }
    Ok(builder.finish())
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Malformed { line, reason: format!("expected two integers, got {text:?}") });
    }
    let mut out = [0; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f
            .parse()
            .map_err(|_| GraphError::Malformed { line, reason: format!("{f:?} is not a nonnegative integer") })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn parses_edge_list() {
        let g = Graph::parse("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g, path(3));
        let single = Graph::parse("1 0").unwrap();
        assert_eq!((single.n(), single.m()), (1, 0));
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert_eq!(
            Graph::parse("3 1\n0 3"),
            Err(GraphError::EndpointOutOfRange { line: 2, vertex: 3, n: 3 })
        );
        assert!(Graph::parse("3 1\n0 3").unwrap_err().to_string().contains("endpoint out of range"));
        assert_eq!(Graph::parse("3 1\n1 1"), Err(GraphError::SelfLoop { line: 2, vertex: 1 }));
        assert_eq!(
            Graph::parse("3 2\n0 1\n1 0"),
            Err(GraphError::DuplicateEdge { line: 3, u: 0, v: 1 })
        );
        assert!(matches!(Graph::parse("3 1\n0 x"), Err(GraphError::Malformed { line: 2, .. })));
        assert!(matches!(Graph::parse("3 2\n0 1"), Err(GraphError::Malformed { .. })));
        assert!(matches!(Graph::parse("3 1\n0 1\n1 2"), Err(GraphError::Malformed { line: 3, .. })));
    }

    #[test]
    fn parses_json_with_labels() {
        let doc = GraphDocument::parse(r#"{"n":3,"edges":[[0,1],[2,1]],"labels":{"2":"copy"}}"#).unwrap();
        assert_eq!(doc.graph, path(3));
        assert_eq!(doc.labels.get(&2).map(String::as_str), Some("copy"));
        let back = GraphDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(matches!(
            GraphDocument::parse(r#"{"n":2,"edges":[[0,2]]}"#),
            Err(GraphError::EndpointOutOfRange { line: 1, .. })
        ));
    }

    #[test]
    fn components_are_sorted_by_smallest_vertex() {
        assert_eq!(path(3).connected_components().components, vec![vec![0, 1, 2]]);
        let edgeless = Graph::empty(3);
        assert_eq!(edgeless.connected_components().components, vec![vec![0], vec![1], vec![2]]);
        let g = Graph::from_edges(5, [(4, 1), (0, 3)]).unwrap();
        assert_eq!(g.connected_components().components, vec![vec![0, 3], vec![1, 4], vec![2]]);
    }

    #[test]
    fn deleting_vertices_reindexes_densely() {
        let (g, map) = path(3).delete_vertices(&[1]).unwrap();
        assert_eq!(g.connected_components().components, vec![vec![0], vec![1]]);
        assert_eq!(map, vec![0, 2]);

        let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (g, map) = triangle.delete_vertices(&[0]).unwrap();
        assert_eq!(g, Graph::from_edges(2, [(0, 1)]).unwrap());
        assert_eq!(map, vec![1, 2]);

        let (same, id) = triangle.delete_vertices(&[]).unwrap();
        assert_eq!(same, triangle);
        assert_eq!(id, vec![0, 1, 2]);

        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (g, map) = k4.delete_vertices(&[0, 1]).unwrap();
        assert_eq!(g, Graph::from_edges(2, [(0, 1)]).unwrap());
        assert_eq!(map, vec![2, 3]);

        assert_eq!(
            triangle.delete_vertices(&[3]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }
}
