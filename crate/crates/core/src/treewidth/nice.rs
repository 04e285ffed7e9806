use crate::graph::{Graph, Vertex};

use super::decomposition::{TdError, TreeDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce { vertex: Vertex, child: usize },
    Forget { vertex: Vertex, child: usize },
    Join { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: Vec<Vertex>,
}

/// Nice tree decomposition stored children-first: every child index is
/// smaller than its parent's and the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub vertices: usize,
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Forgets the node kinds.
    pub fn to_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|t| t.bag.clone()).collect();
        let mut edges = Vec::new();
        for (t, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Leaf => {}
                NodeKind::Introduce { child, .. } | NodeKind::Forget { child, .. } => edges.push((t, child)),
                NodeKind::Join { left, right } => edges.extend([(t, left), (t, right)]),
            }
        }
        TreeDecomposition::new(bags, edges, self.vertices)
    }

    /// Checks the node-kind constraints and the decomposition axioms.
    pub fn validate(&self, g: &Graph) -> Result<(), TdError> {
        if self.nodes.is_empty() {
            return Err(TdError::NotATree("no nodes".into()));
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            let fail = |reason: String| TdError::NotNice { node: t, reason };
            let child_bag = |c: usize| -> Result<&Vec<Vertex>, TdError> {
                if c >= t {
                    return Err(fail(format!("child {c} does not precede its parent")));
                }
                Ok(&self.nodes[c].bag)
            };
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(fail("bag is not sorted and duplicate-free".into()));
            }
            match node.kind {
                NodeKind::Leaf => {
                    if !node.bag.is_empty() {
                        return Err(fail("leaf bag is not empty".into()));
                    }
                }
                NodeKind::Introduce { vertex, child } => {
                    let mut expect = child_bag(child)?.clone();
                    if expect.contains(&vertex) {
                        return Err(fail(format!("vertex {vertex} is already in the child bag")));
                    }
                    expect.push(vertex);
                    expect.sort_unstable();
                    if expect != node.bag {
                        return Err(fail(format!("bag is not the child bag plus {vertex}")));
                    }
                    parents[child] += 1;
                }
                NodeKind::Forget { vertex, child } => {
                    let child = {
                        parents[child] += 1;
                        child_bag(child)?
                    };
                    let expect: Vec<Vertex> = child.iter().copied().filter(|&u| u != vertex).collect();
                    if expect.len() + 1 != child.len() || expect != node.bag {
                        return Err(fail(format!("bag is not the child bag minus {vertex}")));
                    }
                }
                NodeKind::Join { left, right } => {
                    if left == right || *child_bag(left)? != node.bag || *child_bag(right)? != node.bag {
                        return Err(fail("join children must be two nodes with the same bag".into()));
                    }
                    parents[left] += 1;
                    parents[right] += 1;
                }
            }
        }
        let root = self.root();
        if !self.nodes[root].bag.is_empty() {
            return Err(TdError::NotNice { node: root, reason: "root bag is not empty".into() });
        }
        if let Some(t) = (0..root).find(|&t| parents[t] != 1) {
            return Err(TdError::NotNice { node: t, reason: format!("node has {} parents", parents[t]) });
        }
        self.to_decomposition().validate(g)
    }
}

/// Converts `td` into a nice decomposition rooted at bag 0. If `td` already
/// satisfies the node-kind constraints with that root it is re-emitted node
/// for node.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    make_nice_rooted(td, 0)
}

/// As [`make_nice`] with an explicit root bag.
pub fn make_nice_rooted(td: &TreeDecomposition, root: usize) -> NiceTreeDecomposition {
    if td.bags.is_empty() {
        return NiceTreeDecomposition {
            nodes: vec![NiceNode { kind: NodeKind::Leaf, bag: Vec::new() }],
            vertices: td.vertices,
        };
    }
    let order = rooted_order(td, root);
    if let Some(nice) = already_nice(td, &order) {
        return nice;
    }
    let mut builder = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.bags.len()];
    // post-order: children are finished before their parent
    for &(t, _) in order.iter().rev() {
        let children: Vec<usize> = order.iter().filter(|&&(_, p)| p == Some(t)).map(|&(c, _)| c).collect();
        let target = &td.bags[t];
        let mut branches: Vec<usize> = children
            .iter()
            .map(|&c| builder.transition(top[c], target))
            .collect();
        if branches.is_empty() {
            let leaf = builder.push(NodeKind::Leaf, Vec::new());
            branches.push(builder.transition(leaf, target));
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = builder.push(NodeKind::Join { left: acc, right: b }, target.clone());
        }
        top[t] = acc;
    }
    builder.transition(top[root], &[]);
    NiceTreeDecomposition { nodes: builder.nodes, vertices: td.vertices }
}

/// Breadth-first order of the tree from `root` as `(bag, parent)` pairs.
fn rooted_order(td: &TreeDecomposition, root: usize) -> Vec<(usize, Option<usize>)> {
    let adj = td.tree_adjacency();
    let mut order = vec![(root, None)];
    let mut seen = vec![false; td.bags.len()];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let t = order[i].0;
        for &c in &adj[t] {
            if !seen[c] {
                seen[c] = true;
                order.push((c, Some(t)));
            }
        }
        i += 1;
    }
    order
}

fn already_nice(td: &TreeDecomposition, order: &[(usize, Option<usize>)]) -> Option<NiceTreeDecomposition> {
    let count = td.bags.len();
    let mut children = vec![Vec::new(); count];
    for &(c, p) in order {
        if let Some(p) = p {
            children[p].push(c);
        }
    }
    // keep the input numbering when it is already children-first, otherwise
    // number in reverse breadth-first order
    let keep = order.iter().all(|&(c, p)| p.map_or(c + 1 == count, |p| c < p));
    let sequence: Vec<usize> = if keep { (0..count).collect() } else { order.iter().rev().map(|&(t, _)| t).collect() };
    let mut index = vec![0; count];
    for (i, &t) in sequence.iter().enumerate() {
        index[t] = i;
    }
    let mut nodes = Vec::with_capacity(count);
    for &t in &sequence {
        let bag = td.bags[t].clone();
        let kind = match children[t].as_slice() {
            [] => {
                if !bag.is_empty() {
                    return None;
                }
                NodeKind::Leaf
            }
            &[c] => {
                let child = &td.bags[c];
                if bag.len() == child.len() + 1 {
                    let vertex = single_difference(&bag, child)?;
                    NodeKind::Introduce { vertex, child: index[c] }
                } else if bag.len() + 1 == child.len() {
                    let vertex = single_difference(child, &bag)?;
                    NodeKind::Forget { vertex, child: index[c] }
                } else {
                    return None;
                }
            }
            &[a, b] => {
                if td.bags[a] != bag || td.bags[b] != bag {
                    return None;
                }
                NodeKind::Join { left: index[a], right: index[b] }
            }
            _ => return None,
        };
        nodes.push(NiceNode { kind, bag });
    }
    if !nodes.last().unwrap().bag.is_empty() {
        return None;
    }
    Some(NiceTreeDecomposition { nodes, vertices: td.vertices })
}

/// The one element of `big` missing from `small`, if `small ⊂ big`.
fn single_difference(big: &[Vertex], small: &[Vertex]) -> Option<Vertex> {
    let extra: Vec<Vertex> = big.iter().copied().filter(|v| small.binary_search(v).is_err()).collect();
    (extra.len() == 1 && small.iter().all(|v| big.binary_search(v).is_ok())).then(|| extra[0])
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>) -> usize {
        self.nodes.push(NiceNode { kind, bag });
        self.nodes.len() - 1
    }

    /// Forget what `target` lacks, then introduce what it adds, both in
    /// ascending vertex order.
    fn transition(&mut self, mut node: usize, target: &[Vertex]) -> usize {
        let current = self.nodes[node].bag.clone();
        let mut bag = current.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            bag.retain(|&u| u != v);
            node = self.push(NodeKind::Forget { vertex: v, child: node }, bag.clone());
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            bag.push(v);
            bag.sort_unstable();
            node = self.push(NodeKind::Introduce { vertex: v, child: node }, bag.clone());
        }
        node
    }
}
