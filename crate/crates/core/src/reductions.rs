//! Game instances built from Clique, CliqueNodeDeletion,
//! BalancedVertexSeparator and SetCover, together with brute-force deciders
//! for the source problems.
//!
//! Every constructed vertex carries a [`GadgetRole`] so that a disagreement
//! between a source decider and a game solver can be read off directly.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Defense, GameError, MixedAttack};
use crate::graph::{Graph, GraphDocument, GraphError, Vertex};
use crate::rational::{self, Rational};
use crate::response::{attacker_best_response, defender_best_response_mixed, ResponseError};
use crate::sequential::{first_attack_reaching, first_defense_reaching, SequentialError};
use crate::subsets::{binomial, count_up_to, subsets_up_to, Combinations};

/// Default bound on the work of a brute-force source decider, counted in
/// candidate checks.
pub const DEFAULT_DECIDER_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("parameter {name} = {value} is out of range: {reason}")]
    ParameterOutOfRange { name: &'static str, value: usize, reason: String },
    #[error("element {0} is not covered by any set")]
    UncoveredElement(u64),
    #[error("set {set} mentions {element}, which is not in the universe")]
    UnknownElement { set: usize, element: u64 },
    #[error("{count} candidate checks exceed the cap of {cap}")]
    CapExceeded { count: u64, cap: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error(transparent)]
    Sequential(#[from] SequentialError),
}

/// What a vertex of a constructed graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetRole {
    /// `v′` for node `v` of the source graph.
    Node(Vertex),
    /// `e′` for edge `{u, v}` of the source graph.
    Edge(Vertex, Vertex),
    /// `v″`, the private pendant of `v′`.
    Copy(Vertex),
    /// A vertex of the source graph used unchanged.
    Original(Vertex),
    /// Clique vertex `i` standing for set `S_i`.
    SetIndex(usize),
}

impl fmt::Display for GadgetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GadgetRole::Node(v) => write!(f, "node vertex {v}'"),
            GadgetRole::Edge(u, v) => write!(f, "edge vertex ({u},{v})'"),
            GadgetRole::Copy(v) => write!(f, "copy vertex {v}''"),
            GadgetRole::Original(v) => write!(f, "vertex {v}"),
            GadgetRole::SetIndex(i) => write!(f, "set S_{i}"),
        }
    }
}

/// The game question an instance is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameQuestion {
    /// Is there an attack of size at most `l` with attacker payoff at least
    /// `alpha` against the fixed defense?
    FixedDefensePureAttack,
    /// Is there a defense of size at most `k` keeping at least `delta`
    /// survivors against every attack of size at most `l`?
    PureDefenseAnyPureAttack,
    /// Is there an attack of size at most `l` with attacker payoff at least
    /// `alpha` against every defense of size at most `k`?
    PureAttackAnyPureDefense,
    /// Is there a defense of size at most `k` with expected payoff at least
    /// `delta` against the fixed mixed attack?
    FixedMixedAttackPureDefense,
}

/// The source instance, kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum SourceInstance {
    Clique { n: usize, edges: Vec<(Vertex, Vertex)>, t: usize },
    CliqueNodeDeletion { n: usize, edges: Vec<(Vertex, Vertex)>, s: usize, t: usize },
    BalancedVertexSeparator { n: usize, edges: Vec<(Vertex, Vertex)>, h: usize },
    SetCover { universe: Vec<u64>, sets: Vec<Vec<u64>>, h: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub question: GameQuestion,
    pub graph: Graph,
    /// Indexed by vertex of `graph`.
    pub labels: Vec<GadgetRole>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub alpha: Option<usize>,
    pub delta: Option<Rational>,
    pub defense: Option<Vec<Vertex>>,
    pub mixed_attack: Option<MixedAttack>,
    pub source: SourceInstance,
    /// Universal vertices joined to the source graph before construction.
    pub padding: usize,
}

/// Answer of the game solver on a constructed instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub yes: bool,
    /// Best payoff found for the deciding player (exact for pure-response
    /// questions, the threshold-reaching guarantee for the sequential ones).
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub witness: Vec<Vertex>,
}

#[derive(Serialize)]
struct InstanceJson<'a> {
    question: GameQuestion,
    graph: serde_json::Value,
    labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    defense: Option<&'a [Vertex]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mixed_attack: Option<&'a MixedAttack>,
    source: &'a SourceInstance,
    padding: usize,
}

impl ReductionInstance {
    pub fn label(&self, v: Vertex) -> GadgetRole {
        self.labels[v]
    }

    pub fn vertices_with(&self, pred: impl Fn(GadgetRole) -> bool) -> Vec<Vertex> {
        (0..self.graph.n()).filter(|&v| pred(self.labels[v])).collect()
    }

    pub fn document(&self) -> GraphDocument {
        GraphDocument {
            graph: self.graph.clone(),
            labels: self.labels.iter().enumerate().map(|(v, r)| (v, r.to_string())).collect::<BTreeMap<_, _>>(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = InstanceJson {
            question: self.question,
            graph: GraphDocument { graph: self.graph.clone(), labels: BTreeMap::new() }.to_json_value(),
            labels: self.labels.iter().map(|r| r.to_string()).collect(),
            k: self.k,
            l: self.l,
            alpha: self.alpha,
            delta: self.delta.as_ref().map(rational::format),
            defense: self.defense.as_deref(),
            mixed_attack: self.mixed_attack.as_ref(),
            source: &self.source,
            padding: self.padding,
        };
        serde_json::to_value(raw).expect("instance serializes")
    }

    /// Answers the game question with the exact solvers. `cap` bounds the
    /// number of leader strategies of the sequential questions.
    pub fn decide(&self, cap: u64) -> Result<Decision, ReductionError> {
        let g = &self.graph;
        match self.question {
            GameQuestion::FixedDefensePureAttack => {
                let l = self.l.expect("attack budget");
                let d = Defense::tight(self.defense.clone().expect("fixed defense"))?;
                let r = attacker_best_response(g, &d, l)?;
                Ok(Decision {
                    yes: r.value >= self.alpha.expect("alpha"),
                    value: rational::int(r.value as i64),
                    witness: r.strategy.into_vertices(),
                })
            }
            GameQuestion::PureDefenseAnyPureAttack => {
                let delta = self.delta.as_ref().expect("delta");
                let threshold = if delta.is_positive() { delta.to_integer().try_into().unwrap_or(usize::MAX) } else { 0 };
                let r = first_defense_reaching(g, self.k.expect("k"), self.l.expect("l"), threshold, cap)?;
                Ok(Decision {
                    yes: r.meets(threshold),
                    value: rational::int(r.guaranteed_value as i64),
                    witness: r.leader_strategy,
                })
            }
            GameQuestion::PureAttackAnyPureDefense => {
                let alpha = self.alpha.expect("alpha");
                let r = first_attack_reaching(g, self.k.expect("k"), self.l.expect("l"), alpha, cap)?;
                Ok(Decision {
                    yes: r.meets(alpha),
                    value: rational::int(r.guaranteed_value as i64),
                    witness: r.leader_strategy,
                })
            }
            GameQuestion::FixedMixedAttackPureDefense => {
                let ma = self.mixed_attack.as_ref().expect("mixed attack");
                let r = defender_best_response_mixed(g, ma, self.k.expect("k"))?;
                Ok(Decision {
                    yes: &r.value >= self.delta.as_ref().expect("delta"),
                    value: r.value,
                    witness: r.strategy.into_vertices(),
                })
            }
        }
    }
}

/// Node vertices `0..n` in a clique, then one edge vertex per edge of `g` in
/// edge order, each joined to its two endpoints.
fn clique_gadget(g: &Graph) -> (Vec<(Vertex, Vertex)>, Vec<GadgetRole>) {
    let n = g.n();
    let mut edges: Vec<(Vertex, Vertex)> = Combinations::new(n, 2).map(|p| (p[0], p[1])).collect();
    let mut labels: Vec<GadgetRole> = (0..n).map(GadgetRole::Node).collect();
    for (i, (u, v)) in g.edges().enumerate() {
        let e = n + i;
        edges.push((u, e));
        edges.push((v, e));
        labels.push(GadgetRole::Edge(u, v));
    }
    (edges, labels)
}

fn source_edges(g: &Graph) -> Vec<(Vertex, Vertex)> {
    g.edges().collect()
}

fn choose2(t: usize) -> usize {
    t * t.saturating_sub(1) / 2
}

/// Clique(G, t) as a fixed-defense attack question: defend every node
/// vertex, allow `t` deletions and ask for `t + C(t,2)` disabled vertices.
pub fn from_clique(g: &Graph, t: usize) -> Result<ReductionInstance, ReductionError> {
    if t == 0 || t > g.n() {
        return Err(ReductionError::ParameterOutOfRange {
            name: "t",
            value: t,
            reason: format!("need 1 <= t <= {}", g.n()),
        });
    }
    let (edges, labels) = clique_gadget(g);
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(ReductionInstance {
        question: GameQuestion::FixedDefensePureAttack,
        graph,
        labels,
        k: Some(g.n()),
        l: Some(t),
        alpha: Some(t + choose2(t)),
        delta: None,
        defense: Some((0..g.n()).collect()),
        mixed_attack: None,
        source: SourceInstance::Clique { n: g.n(), edges: source_edges(g), t },
        padding: 0,
    })
}

/// CliqueNodeDeletion(G, s, t) as a defender-first question on the clique
/// gadget with a pendant copy vertex per node vertex.
pub fn from_clique_node_deletion(g: &Graph, s: usize, t: usize) -> Result<ReductionInstance, ReductionError> {
    from_clique_node_deletion_padded(g, s, t, 0)
}

/// Same construction after joining `padding` universal vertices to `g` and
/// raising `s` by the same amount, which preserves the answer.
pub fn from_clique_node_deletion_padded(
    g: &Graph,
    s: usize,
    t: usize,
    padding: usize,
) -> Result<ReductionInstance, ReductionError> {
    if s == 0 {
        return Err(ReductionError::ParameterOutOfRange { name: "s", value: s, reason: "need s >= 1".into() });
    }
    if t == 0 {
        return Err(ReductionError::ParameterOutOfRange { name: "t", value: t, reason: "need t >= 1".into() });
    }
    let source = SourceInstance::CliqueNodeDeletion { n: g.n(), edges: source_edges(g), s, t };
    let g = join_universal(g, padding)?;
    let s = s + padding;
    let (n, m) = (g.n(), g.m());
    let (mut edges, mut labels) = clique_gadget(&g);
    let base = labels.len();
    for v in 0..n {
        edges.push((v, base + v));
        labels.push(GadgetRole::Copy(v));
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    let delta = (2 * n + m) as i64 - (choose2(t) + 2 * t) as i64 + 1;
    Ok(ReductionInstance {
        question: GameQuestion::PureDefenseAnyPureAttack,
        graph,
        labels,
        k: Some(s),
        l: Some(t),
        alpha: None,
        delta: Some(rational::int(delta)),
        defense: None,
        mixed_attack: None,
        source,
        padding,
    })
}

/// True when the unpadded construction is known to agree with the source
/// answer: either no `t`-clique can exist, or the defender can guard more
/// copy vertices than the attacker can delete.
pub fn in_fidelity_regime(n: usize, s: usize, t: usize) -> bool {
    t > n || s.min(n) > t
}

/// Smallest padding that moves `(n, s, t)` into the fidelity regime.
pub fn fidelity_padding(n: usize, s: usize, t: usize) -> usize {
    if in_fidelity_regime(n, s, t) {
        0
    } else {
        t + 1 - s.min(n)
    }
}

/// `g` joined with a clique on `p` new vertices `n..n+p`.
pub fn join_universal(g: &Graph, p: usize) -> Result<Graph, GraphError> {
    let n = g.n();
    let extra = (n..n + p).flat_map(|u| (0..u).map(move |v| (v, u)));
    Graph::from_edges(n + p, g.edges().chain(extra))
}

/// BalancedVertexSeparator(G, h) as an attacker-first question with a single
/// controller.
pub fn from_balanced_separator(g: &Graph, h: usize) -> Result<ReductionInstance, ReductionError> {
    let n = g.n();
    if h == 0 || h >= n {
        return Err(ReductionError::ParameterOutOfRange {
            name: "h",
            value: h,
            reason: format!("need 1 <= h < {n}"),
        });
    }
    let delta = (n - h).div_ceil(2);
    Ok(ReductionInstance {
        question: GameQuestion::PureAttackAnyPureDefense,
        graph: g.clone(),
        labels: (0..n).map(GadgetRole::Original).collect(),
        k: Some(1),
        l: Some(h),
        alpha: Some(n - delta),
        delta: Some(rational::int(delta as i64)),
        defense: None,
        mixed_attack: None,
        source: SourceInstance::BalancedVertexSeparator { n, edges: source_edges(g), h },
        padding: 0,
    })
}

/// SetCover(X, S, h) on `K_m`: element `x` becomes the attack on every set
/// index missing `x`, played with probability `1/|X|`. Elements with the
/// same attack share one support entry.
pub fn from_set_cover(universe: &[u64], sets: &[Vec<u64>], h: usize) -> Result<ReductionInstance, ReductionError> {
    if h == 0 {
        return Err(ReductionError::ParameterOutOfRange { name: "h", value: h, reason: "need h >= 1".into() });
    }
    let mut elements = universe.to_vec();
    elements.sort_unstable();
    elements.dedup();
    if elements.is_empty() {
        return Err(ReductionError::ParameterOutOfRange {
            name: "|X|",
            value: 0,
            reason: "the universe is empty".into(),
        });
    }
    check_set_system(&elements, sets)?;
    let m = sets.len();
    let mut attacks: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
    let mut kept = 0usize;
    for &x in &elements {
        let a: Vec<Vertex> = (0..m).filter(|&i| !sets[i].contains(&x)).collect();
        if a.len() == m {
            return Err(ReductionError::UncoveredElement(x));
        }
        kept += m - a.len();
        *attacks.entry(a).or_default() += 1;
    }
    let size = elements.len() as i64;
    let budget = attacks.keys().map(Vec::len).max().unwrap_or(0);
    let entries = attacks.into_iter().map(|(a, c)| (a, rational::ratio(c as i64, size))).collect();
    let mixed = MixedAttack::new(entries, budget)?;
    let graph = Graph::from_edges(m, Combinations::new(m, 2).map(|p| (p[0], p[1])))?;
    Ok(ReductionInstance {
        question: GameQuestion::FixedMixedAttackPureDefense,
        graph,
        labels: (0..m).map(GadgetRole::SetIndex).collect(),
        k: Some(h),
        l: Some(budget),
        alpha: None,
        delta: Some(rational::ratio(kept as i64, size)),
        defense: None,
        mixed_attack: Some(mixed),
        source: SourceInstance::SetCover { universe: elements, sets: sets.to_vec(), h },
        padding: 0,
    })
}

fn check_set_system(universe: &[u64], sets: &[Vec<u64>]) -> Result<(), ReductionError> {
    for (i, s) in sets.iter().enumerate() {
        if let Some(&x) = s.iter().find(|x| universe.binary_search(x).is_err()) {
            return Err(ReductionError::UnknownElement { set: i, element: x });
        }
    }
    Ok(())
}

impl SourceInstance {
    /// Exact answer by subset enumeration.
    pub fn decide(&self, cap: u64) -> Result<bool, ReductionError> {
        match self {
            SourceInstance::Clique { n, edges, t } => has_clique(&Graph::from_edges(*n, edges.clone())?, *t, cap),
            SourceInstance::CliqueNodeDeletion { n, edges, s, t } => {
                clique_node_deletion(&Graph::from_edges(*n, edges.clone())?, *s, *t, cap)
            }
            SourceInstance::BalancedVertexSeparator { n, edges, h } => {
                balanced_separator(&Graph::from_edges(*n, edges.clone())?, *h, cap)
            }
            SourceInstance::SetCover { universe, sets, h } => set_cover(universe, sets, *h, cap),
        }
    }
}

fn check_cap(count: u64, cap: u64) -> Result<(), ReductionError> {
    if count > cap {
        Err(ReductionError::CapExceeded { count, cap })
    } else {
        Ok(())
    }
}

fn clique_among(g: &Graph, t: usize, removed: &[bool]) -> bool {
    Combinations::new(g.n(), t).any(|c| {
        c.iter().all(|&v| !removed[v]) && c.iter().enumerate().all(|(i, &u)| c[i + 1..].iter().all(|&v| g.has_edge(u, v)))
    })
}

/// Does `g` contain a clique on `t` vertices?
pub fn has_clique(g: &Graph, t: usize, cap: u64) -> Result<bool, ReductionError> {
    check_cap(binomial(g.n(), t), cap)?;
    Ok(clique_among(g, t, &vec![false; g.n()]))
}

/// Can at most `s` deletions leave `g` without a `t`-clique?
pub fn clique_node_deletion(g: &Graph, s: usize, t: usize, cap: u64) -> Result<bool, ReductionError> {
    let n = g.n();
    check_cap(count_up_to(n, s).saturating_mul(binomial(n, t).max(1)), cap)?;
    Ok(subsets_up_to(n, s).any(|x| {
        let mut removed = vec![false; n];
        x.iter().for_each(|&v| removed[v] = true);
        !clique_among(g, t, &removed)
    }))
}

/// Is there a set of at most `h` vertices whose removal leaves components of
/// size at most `⌈(n − h)/2⌉`?
pub fn balanced_separator(g: &Graph, h: usize, cap: u64) -> Result<bool, ReductionError> {
    let n = g.n();
    if h > n {
        return Err(ReductionError::ParameterOutOfRange { name: "h", value: h, reason: format!("need h <= {n}") });
    }
    check_cap(count_up_to(n, h), cap)?;
    let limit = (n - h).div_ceil(2);
    Ok(subsets_up_to(n, h).any(|x| {
        let mut removed = vec![false; n];
        x.iter().for_each(|&v| removed[v] = true);
        g.components_avoiding(&removed).sizes().into_iter().all(|c| c <= limit)
    }))
}

/// Do at most `h` of the sets cover the universe?
pub fn set_cover(universe: &[u64], sets: &[Vec<u64>], h: usize, cap: u64) -> Result<bool, ReductionError> {
    check_cap(count_up_to(sets.len(), h), cap)?;
    Ok(subsets_up_to(sets.len(), h).any(|chosen| universe.iter().all(|x| chosen.iter().any(|&i| sets[i].contains(x)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;
    use crate::rational::{int, ratio};
    use crate::sequential::DEFAULT_LEADER_CAP;

    fn clique(n: usize) -> Graph {
        Graph::from_edges(n, Combinations::new(n, 2).map(|p| (p[0], p[1]))).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn clique_instance_shape() {
        let r = from_clique(&clique(3), 3).unwrap();
        assert_eq!(r.graph.n(), 6);
        assert_eq!(r.graph.m(), 3 + 6);
        assert_eq!((r.alpha, r.l), (Some(6), Some(3)));
        assert_eq!(r.defense.as_deref(), Some(&[0, 1, 2][..]));
        assert_eq!(r.label(4), GadgetRole::Edge(0, 2));
        assert_eq!(r.label(4).to_string(), "edge vertex (0,2)'");
        let d = r.decide(DEFAULT_LEADER_CAP).unwrap();
        assert!(d.yes);
        assert_eq!(d.value, int(6));
    }

    #[test]
    fn clique_instance_without_clique() {
        let r = from_clique(&path(3), 3).unwrap();
        let d = r.decide(DEFAULT_LEADER_CAP).unwrap();
        assert!(!d.yes);
        assert!(d.value < int(6));
        let r = from_clique(&path(3), 1).unwrap();
        assert_eq!(r.alpha, Some(1));
        assert!(r.decide(DEFAULT_LEADER_CAP).unwrap().yes);
        assert!(matches!(from_clique(&path(3), 4), Err(ReductionError::ParameterOutOfRange { name: "t", .. })));
        assert!(from_clique(&path(3), 0).is_err());
    }

    #[test]
    fn clique_node_deletion_shape() {
        let r = from_clique_node_deletion(&clique(3), 1, 3).unwrap();
        assert_eq!(r.graph.n(), 9);
        assert_eq!(r.delta, Some(int(1)));
        assert_eq!((r.k, r.l), (Some(1), Some(3)));
        assert_eq!(r.vertices_with(|x| matches!(x, GadgetRole::Copy(_))), vec![6, 7, 8]);
        for v in 6..9 {
            assert_eq!(r.graph.neighbors(v), &[v - 6]);
        }
    }

    #[test]
    fn small_clique_node_deletion_outside_regime() {
        // one controller cannot outlast three deletions, so the raw instance
        // drifts from the source answer here
        assert!(!in_fidelity_regime(3, 1, 3));
        assert!(clique_node_deletion(&clique(3), 1, 3, DEFAULT_DECIDER_CAP).unwrap());
        let raw = from_clique_node_deletion(&clique(3), 1, 3).unwrap();
        let game = raw.decide(DEFAULT_LEADER_CAP).unwrap();
        assert_eq!(game.value, int(brute::pure_maximin(&raw.graph, 1, 3) as i64));
    }

    #[test]
    fn two_triangles_need_two_deletions() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!clique_node_deletion(&g, 1, 3, DEFAULT_DECIDER_CAP).unwrap());
        assert!(clique_node_deletion(&g, 2, 3, DEFAULT_DECIDER_CAP).unwrap());
        // t > n is always a yes-instance, and the raw instance agrees
        let r = from_clique_node_deletion(&path(2), 1, 3).unwrap();
        assert!(in_fidelity_regime(2, 1, 3));
        assert!(r.decide(DEFAULT_LEADER_CAP).unwrap().yes);
        assert!(clique_node_deletion(&path(2), 1, 3, DEFAULT_DECIDER_CAP).unwrap());
    }

    #[test]
    fn in_regime_instances_agree() {
        let graphs = [path(4), clique(4), Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap()];
        for g in &graphs {
            for s in 1..=3 {
                for t in 1..=2 {
                    if !in_fidelity_regime(g.n(), s, t) {
                        continue;
                    }
                    let source = clique_node_deletion(g, s, t, DEFAULT_DECIDER_CAP).unwrap();
                    let game = from_clique_node_deletion(g, s, t).unwrap().decide(DEFAULT_LEADER_CAP).unwrap();
                    assert_eq!(source, game.yes, "n={} s={s} t={t}", g.n());
                }
            }
        }
    }

    #[test]
    fn padding_joins_universal_vertices() {
        assert_eq!(fidelity_padding(3, 1, 2), 2);
        assert_eq!(fidelity_padding(5, 3, 2), 0);
        let p = join_universal(&path(3), 2).unwrap();
        assert_eq!(p.n(), 5);
        assert_eq!(p.m(), 2 + 1 + 2 * 3);
        let r = from_clique_node_deletion_padded(&path(3), 1, 2, 2).unwrap();
        assert_eq!((r.k, r.padding), (Some(3), 2));
        assert_eq!(r.graph.n(), 2 * 5 + 9);
        // padding keeps the source answer
        for s in 1..=2 {
            for t in 1..=3 {
                for p in 0..=2 {
                    let g = path(3);
                    assert_eq!(
                        clique_node_deletion(&g, s, t, DEFAULT_DECIDER_CAP).unwrap(),
                        clique_node_deletion(&join_universal(&g, p).unwrap(), s + p, t, DEFAULT_DECIDER_CAP).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn balanced_separator_examples() {
        let r = from_balanced_separator(&path(3), 1).unwrap();
        assert_eq!((r.k, r.l, r.alpha), (Some(1), Some(1), Some(2)));
        assert_eq!(r.delta, Some(int(1)));
        let d = r.decide(DEFAULT_LEADER_CAP).unwrap();
        assert!(d.yes);
        assert_eq!(d.witness, vec![1]);
        assert!(balanced_separator(&path(3), 1, DEFAULT_DECIDER_CAP).unwrap());

        assert!(!balanced_separator(&clique(4), 1, DEFAULT_DECIDER_CAP).unwrap());
        assert!(!from_balanced_separator(&clique(4), 1).unwrap().decide(DEFAULT_LEADER_CAP).unwrap().yes);
        assert!(balanced_separator(&star(4), 1, DEFAULT_DECIDER_CAP).unwrap());
        assert!(from_balanced_separator(&star(4), 1).unwrap().decide(DEFAULT_LEADER_CAP).unwrap().yes);
        assert!(from_balanced_separator(&path(3), 3).is_err());
    }

    #[test]
    fn set_cover_examples() {
        let r = from_set_cover(&[1, 2], &[vec![1], vec![2]], 2).unwrap();
        assert_eq!(r.graph.n(), 2);
        assert_eq!(r.delta, Some(int(1)));
        let ma = r.mixed_attack.as_ref().unwrap();
        assert_eq!(ma.probability_of(&[1]), ratio(1, 2));
        let d = r.decide(DEFAULT_LEADER_CAP).unwrap();
        assert!(d.yes);
        assert_eq!(d.witness, vec![0, 1]);

        let r = from_set_cover(&[1], &[vec![1]], 1).unwrap();
        assert_eq!(r.graph.n(), 1);
        assert_eq!(r.mixed_attack.as_ref().unwrap().probability_of(&[]), int(1));
        assert!(r.decide(DEFAULT_LEADER_CAP).unwrap().yes);

        let sets = [vec![1, 2], vec![2, 3], vec![1, 3]];
        let r = from_set_cover(&[1, 2, 3], &sets, 2).unwrap();
        assert_eq!(r.delta, Some(int(2)));
        assert!(set_cover(&[1, 2, 3], &sets, 2, DEFAULT_DECIDER_CAP).unwrap());
        assert!(r.decide(DEFAULT_LEADER_CAP).unwrap().yes);
        assert!(!from_set_cover(&[1, 2, 3], &sets, 1).unwrap().decide(DEFAULT_LEADER_CAP).unwrap().yes);
    }

    #[test]
    fn set_cover_errors() {
        assert_eq!(from_set_cover(&[1, 2], &[vec![1]], 1), Err(ReductionError::UncoveredElement(2)));
        assert!(matches!(
            from_set_cover(&[1], &[vec![1, 5]], 1),
            Err(ReductionError::UnknownElement { set: 0, element: 5 })
        ));
        assert!(!set_cover(&[1, 2, 3], &[vec![1], vec![2]], 2, DEFAULT_DECIDER_CAP).unwrap());
    }

    #[test]
    fn duplicate_attacks_merge() {
        let r = from_set_cover(&[1, 2, 3], &[vec![1, 2], vec![3]], 1).unwrap();
        let ma = r.mixed_attack.as_ref().unwrap();
        assert_eq!(ma.len(), 2);
        assert_eq!(ma.probability_of(&[1]), ratio(2, 3));
        assert_eq!(r.delta, Some(int(1)));
    }

    #[test]
    fn source_deciders() {
        assert!(has_clique(&clique(4), 4, DEFAULT_DECIDER_CAP).unwrap());
        assert!(!has_clique(&path(4), 3, DEFAULT_DECIDER_CAP).unwrap());
        assert_eq!(
            has_clique(&clique(30), 15, 1000),
            Err(ReductionError::CapExceeded { count: binomial(30, 15), cap: 1000 })
        );
        let src = from_balanced_separator(&path(3), 1).unwrap().source;
        assert!(src.decide(DEFAULT_DECIDER_CAP).unwrap());
    }

    #[test]
    fn json_round_trip_of_source() {
        let r = from_clique_node_deletion(&path(3), 1, 2).unwrap();
        let v = r.to_json_value();
        assert_eq!(v["question"], "pure-defense-any-pure-attack");
        assert_eq!(v["delta"], "4/1");
        assert_eq!(v["labels"][6], "copy vertex 1''");
        let src: SourceInstance = serde_json::from_value(v["source"].clone()).unwrap();
        assert_eq!(src, r.source);
    }
}
