use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("decomposition tree is not a tree: {0}")]
    NotATree(String),
    #[error("bag {bag} contains vertex {vertex}, but the graph has {n} vertices")]
    VertexOutOfRange { bag: usize, vertex: Vertex, n: usize },
    #[error("vertex {0} is in no bag")]
    VertexNotCovered(Vertex),
    #[error("edge not covered: no bag contains both {0} and {1}")]
    EdgeNotCovered(Vertex, Vertex),
    #[error("bags containing vertex {vertex} are disconnected: {bags:?} cannot reach {unreached:?}")]
    DisconnectedVertex { vertex: Vertex, bags: Vec<usize>, unreached: Vec<usize> },
    #[error("node {node}: {reason}")]
    NotNice { node: usize, reason: String },
}

/// Tree decomposition with bags indexed `0..bags.len()`. Bags are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub tree_edges: Vec<(usize, usize)>,
    /// Number of graph vertices the decomposition refers to.
    pub vertices: usize,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<Vertex>>, tree_edges: Vec<(usize, usize)>, vertices: usize) -> Self {
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
        }
        TreeDecomposition { bags, tree_edges, vertices }
    }

    /// Largest bag size minus one; `-1` is reported as `0` for an empty
    /// decomposition.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Adjacency lists of the decomposition tree.
    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        adj
    }

    /// Parses the PACE `.td` format. Bag ids and vertices are 1-based in the
    /// file and 0-based in memory.
    pub fn parse(text: &str) -> Result<Self, TdError> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
        let mut tree_edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            let bad = |reason: &str| TdError::Malformed { line, reason: reason.to_string() };
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("expected a number, found {s:?}")));
            match fields.first().copied() {
                None | Some("c") => continue,
                Some("s") => {
                    if header.is_some() {
                        return Err(bad("second header line"));
                    }
                    if fields.len() != 5 || fields[1] != "td" {
                        return Err(bad("header must read `s td <bags> <width+1> <vertices>`"));
                    }
                    let h = (num(fields[2])?, num(fields[3])?, num(fields[4])?);
                    bags = vec![None; h.0];
                    header = Some(h);
                }
                Some("b") => {
                    if header.is_none() {
                        return Err(bad("bag before header"));
                    }
                    let (count, _, n) = header.unwrap();
                    if fields.len() < 2 {
                        return Err(bad("bag line without id"));
                    }
                    let id = num(fields[1])?;
                    if id == 0 || id > count {
                        return Err(bad(&format!("bag id {id} outside 1..={count}")));
                    }
                    if bags[id - 1].is_some() {
                        return Err(bad(&format!("bag {id} listed twice")));
                    }
                    let mut bag = Vec::with_capacity(fields.len() - 2);
                    for f in &fields[2..] {
                        let v = num(f)?;
                        if v == 0 || v > n {
                            return Err(bad(&format!("vertex {v} outside 1..={n}")));
                        }
                        bag.push(v - 1);
                    }
                    bags[id - 1] = Some(bag);
                }
                Some(_) => {
                    let Some((count, _, _)) = header else {
                        return Err(bad("tree edge before header"));
                    };
                    if fields.len() != 2 {
                        return Err(bad("tree edge lines hold exactly two bag ids"));
                    }
                    let (a, b) = (num(fields[0])?, num(fields[1])?);
                    if a == 0 || b == 0 || a > count || b > count {
                        return Err(bad(&format!("tree edge {a} {b} refers to a missing bag")));
                    }
                    tree_edges.push((a - 1, b - 1));
                }
            }
        }
        let (_, declared, n) = header.ok_or(TdError::Malformed { line: 0, reason: "missing header".into() })?;
        let bags: Vec<Vec<Vertex>> = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or(TdError::Malformed { line: 0, reason: format!("bag {} is never listed", i + 1) }))
            .collect::<Result<_, _>>()?;
        let td = TreeDecomposition::new(bags, tree_edges, n);
        let largest = td.bags.iter().map(Vec::len).max().unwrap_or(0);
        if largest != declared {
            return Err(TdError::Malformed {
                line: 0,
                reason: format!("header declares largest bag size {declared}, actual {largest}"),
            });
        }
        td.check_tree()?;
        Ok(td)
    }

    pub fn to_td_string(&self) -> String {
        let largest = self.bags.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = format!("s td {} {} {}\n", self.bags.len(), largest, self.vertices);
        for (i, bag) in self.bags.iter().enumerate() {
            write!(out, "b {}", i + 1).unwrap();
            for v in bag {
                write!(out, " {}", v + 1).unwrap();
            }
            out.push('\n');
        }
        for &(a, b) in &self.tree_edges {
            writeln!(out, "{} {}", a + 1, b + 1).unwrap();
        }
        out
    }

    /// The tree must be connected and acyclic; an empty decomposition is
    /// allowed only for the empty graph.
    pub fn check_tree(&self) -> Result<(), TdError> {
        let count = self.bags.len();
        if count == 0 {
            return if self.vertices == 0 { Ok(()) } else { Err(TdError::NotATree("no bags".into())) };
        }
        if let Some(&(a, b)) = self.tree_edges.iter().find(|&&(a, b)| a >= count || b >= count || a == b) {
            return Err(TdError::NotATree(format!("invalid tree edge ({a}, {b})")));
        }
        if self.tree_edges.len() != count - 1 {
            return Err(TdError::NotATree(format!("{} bags but {} tree edges", count, self.tree_edges.len())));
        }
        let adj = self.tree_adjacency();
        let mut seen = vec![false; count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(t) = queue.pop_front() {
            for &u in &adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(t) => Err(TdError::NotATree(format!("bag {t} is not connected to bag 0"))),
            None => Ok(()),
        }
    }

    /// Checks all decomposition axioms against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), TdError> {
        self.check_tree()?;
        let n = g.n();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(TdError::VertexOutOfRange { bag: t, vertex: v, n });
                }
                holders[v].push(t);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return Err(TdError::VertexNotCovered(v));
        }
        for (u, v) in g.edges() {
            let covered = holders[u].iter().any(|&t| self.bags[t].binary_search(&v).is_ok());
            if !covered {
                return Err(TdError::EdgeNotCovered(u, v));
            }
        }
        let adj = self.tree_adjacency();
        let mut mark = vec![false; self.bags.len()];
        for (v, bags) in holders.iter().enumerate() {
            bags.iter().for_each(|&t| mark[t] = true);
            let mut reached = vec![bags[0]];
            let mut queue = VecDeque::from([bags[0]]);
            mark[bags[0]] = false;
            while let Some(t) = queue.pop_front() {
                for &u in &adj[t] {
                    if mark[u] {
                        mark[u] = false;
                        reached.push(u);
                        queue.push_back(u);
                    }
                }
            }
            let unreached: Vec<usize> = bags.iter().copied().filter(|&t| mark[t]).collect();
            if !unreached.is_empty() {
                unreached.iter().for_each(|&t| mark[t] = false);
                reached.sort_unstable();
                return Err(TdError::DisconnectedVertex { vertex: v, bags: reached, unreached });
            }
        }
        Ok(())
    }
}

/// Parses `text` and validates it against `g`.
pub fn parse_tree_decomposition(text: &str, g: &Graph) -> Result<TreeDecomposition, TdError> {
    let td = TreeDecomposition::parse(text)?;
    td.validate(g)?;
    Ok(td)
}
