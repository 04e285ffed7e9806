use std::collections::BTreeSet;

use crate::graph::{Graph, Vertex};

use super::decomposition::TreeDecomposition;

/// Greedy elimination rule; ties go to the smallest vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EliminationRule {
    #[default]
    MinFill,
    MinDegree,
}

/// Tree decomposition from a greedy elimination ordering. One bag per
/// vertex: the vertex with its neighbors at elimination time. No
/// optimality claim.
pub fn heuristic_tree_decomposition(g: &Graph, rule: EliminationRule) -> TreeDecomposition {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0; n];
    let mut bags = Vec::with_capacity(n);
    let mut owners = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !eliminated[v])
            .min_by_key(|&v| match rule {
                EliminationRule::MinFill => (fill_in(&adj, v), v),
                EliminationRule::MinDegree => (adj[v].len(), v),
            })
            .expect("a vertex remains");
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        let mut bag = nbrs;
        bag.push(v);
        bags.push(bag);
        owners.push(v);
        eliminated[v] = true;
        position[v] = step;
    }
    // the bag of v hangs below the bag of its earliest-eliminated later neighbor
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let v = owners[i];
        match bag.iter().filter(|&&u| u != v).map(|&u| position[u]).min() {
            Some(parent) => tree_edges.push((i, parent)),
            None => roots.push(i),
        }
    }
    tree_edges.extend(roots.windows(2).map(|w| (w[0], w[1])));
    TreeDecomposition::new(bags, tree_edges, n)
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        missing += nbrs[i + 1..].iter().filter(|b| !adj[a].contains(b)).count();
    }
    missing
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(g: &Graph, width: usize) {
        for rule in [EliminationRule::MinFill, EliminationRule::MinDegree] {
            let td = heuristic_tree_decomposition(g, rule);
            td.validate(g).unwrap();
            assert_eq!(td.width(), width, "{rule:?}");
        }
    }

    #[test]
    fn tree_has_width_one() {
        check(&Graph::from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap(), 1);
    }

    #[test]
    fn clique_has_full_bag() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        check(&k4, 3);
    }

    #[test]
    fn cycle_needs_a_chord() {
        check(&Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(), 2);
    }

    #[test]
    fn forests_and_isolated_vertices() {
        check(&Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap(), 1);
        check(&Graph::empty(3), 0);
        let td = heuristic_tree_decomposition(&Graph::empty(0), EliminationRule::MinFill);
        assert!(td.is_empty());
        td.validate(&Graph::empty(0)).unwrap();
    }
}
