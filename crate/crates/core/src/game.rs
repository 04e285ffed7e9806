//! Strategies and payoffs.
//!
//! A vertex that is not attacked survives when the graph without the attacked
//! vertices still connects it to a controller that was not attacked. The
//! defender's payoff counts survivors, the attacker's payoff counts everything
//! else (attacked vertices included), so the two always sum to `n`.

use std::collections::BTreeSet;
use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("strategy uses {size} vertices but the budget is {budget}")]
    OverBudget { size: usize, budget: usize },
    #[error("vertex {0} listed twice in one strategy")]
    DuplicateVertex(Vertex),
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(String),
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(String),
    #[error("pure strategy {0:?} appears twice in the support")]
    DuplicateSupportEntry(Vec<Vertex>),
    #[error("mixed strategy has an empty support")]
    EmptySupport,
}

pub trait Role: Copy + Clone + fmt::Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    const NAME: &'static str;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Defender;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Attacker;

impl Role for Defender {
    const NAME: &'static str = "defense";
}

impl Role for Attacker {
    const NAME: &'static str = "attack";
}

/// A vertex set of size at most `budget`, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PureJson", into = "PureJson")]
pub struct Pure<R: Role> {
    vertices: Vec<Vertex>,
    budget: usize,
    #[serde(skip)]
    role: PhantomData<R>,
}

pub type Defense = Pure<Defender>;
pub type Attack = Pure<Attacker>;

#[derive(Serialize, Deserialize)]
struct PureJson {
    vertices: Vec<Vertex>,
    #[serde(default)]
    budget: Option<usize>,
}

impl<R: Role> TryFrom<PureJson> for Pure<R> {
    type Error = GameError;

    fn try_from(raw: PureJson) -> Result<Self, GameError> {
        let budget = raw.budget.unwrap_or(raw.vertices.len());
        Pure::new(raw.vertices, budget)
    }
}

impl<R: Role> From<Pure<R>> for PureJson {
    fn from(p: Pure<R>) -> Self {
        PureJson { vertices: p.vertices, budget: Some(p.budget) }
    }
}

impl<R: Role> fmt::Debug for Pure<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}/{}", R::NAME, self.vertices, self.budget)
    }
}

impl<R: Role> Pure<R> {
    pub fn new(mut vertices: Vec<Vertex>, budget: usize) -> Result<Self, GameError> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GameError::DuplicateVertex(w[0]));
        }
        if vertices.len() > budget {
            return Err(GameError::OverBudget { size: vertices.len(), budget });
        }
        Ok(Pure { vertices, budget, role: PhantomData })
    }

    /// Strategy whose budget equals its size.
    pub fn tight(vertices: Vec<Vertex>) -> Result<Self, GameError> {
        let budget = vertices.len();
        Self::new(vertices, budget)
    }

    pub fn empty(budget: usize) -> Self {
        Pure { vertices: Vec::new(), budget, role: PhantomData }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GameError> {
        check_vertices(g, &self.vertices)
    }
}

fn check_vertices(g: &Graph, vs: &[Vertex]) -> Result<(), GameError> {
    match vs.iter().find(|&&v| v >= g.n()) {
        Some(&vertex) => Err(GameError::VertexOutOfRange { vertex, n: g.n() }),
        None => Ok(()),
    }
}

/// Finitely supported distribution over pure strategies with exact
/// probabilities summing to one.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MixedJson", into = "MixedJson")]
pub struct Mixed<R: Role> {
    budget: usize,
    support: Vec<(Vec<Vertex>, Rational)>,
    #[serde(skip)]
    role: PhantomData<R>,
}

pub type MixedDefense = Mixed<Defender>;
pub type MixedAttack = Mixed<Attacker>;

#[derive(Serialize, Deserialize)]
struct MixedJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<usize>,
    support: Vec<MixedEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct MixedEntryJson {
    vertices: Vec<Vertex>,
    #[serde(with = "rational::serde_str")]
    prob: Rational,
}

impl<R: Role> TryFrom<MixedJson> for Mixed<R> {
    type Error = GameError;

    fn try_from(raw: MixedJson) -> Result<Self, GameError> {
        let budget = raw
            .budget
            .unwrap_or_else(|| raw.support.iter().map(|e| e.vertices.len()).max().unwrap_or(0));
        Mixed::new(raw.support.into_iter().map(|e| (e.vertices, e.prob)).collect(), budget)
    }
}

impl<R: Role> From<Mixed<R>> for MixedJson {
    fn from(m: Mixed<R>) -> Self {
        MixedJson {
            budget: Some(m.budget),
            support: m
                .support
                .into_iter()
                .map(|(vertices, prob)| MixedEntryJson { vertices, prob })
                .collect(),
        }
    }
}

impl<R: Role> fmt::Debug for Mixed<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mixed {}/{} {{", R::NAME, self.budget)?;
        for (i, (s, p)) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{:?}", rational::format(p), s)?;
        }
        write!(f, "}}")
    }
}

impl<R: Role> Mixed<R> {
    /// Validates and normalizes each support entry (sorted vertices). Entries
    /// with probability zero are kept; use [`Mixed::without_zeros`] to drop
    /// them.
    pub fn new(entries: Vec<(Vec<Vertex>, Rational)>, budget: usize) -> Result<Self, GameError> {
        if entries.is_empty() {
            return Err(GameError::EmptySupport);
        }
        let mut seen = BTreeSet::new();
        let mut support = Vec::with_capacity(entries.len());
        let mut total = Rational::zero();
        for (vertices, p) in entries {
            let pure = Pure::<R>::new(vertices, budget)?;
            if !rational::is_probability(&p) {
                return Err(GameError::BadProbability(rational::format(&p)));
            }
            if !seen.insert(pure.vertices.clone()) {
                return Err(GameError::DuplicateSupportEntry(pure.vertices));
            }
            total += &p;
            support.push((pure.vertices, p));
        }
        if !total.is_one() {
            return Err(GameError::ProbabilitySum(rational::format(&total)));
        }
        Ok(Mixed { budget, support, role: PhantomData })
    }

    pub fn pure(strategy: &Pure<R>) -> Self {
        Mixed {
            budget: strategy.budget,
            support: vec![(strategy.vertices.clone(), Rational::one())],
            role: PhantomData,
        }
    }

    pub fn uniform(sets: Vec<Vec<Vertex>>, budget: usize) -> Result<Self, GameError> {
        let p = rational::ratio(1, sets.len().max(1) as i64);
        Self::new(sets.into_iter().map(|s| (s, p.clone())).collect(), budget)
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn support(&self) -> &[(Vec<Vertex>, Rational)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn without_zeros(mut self) -> Self {
        self.support.retain(|(_, p)| !p.is_zero());
        self
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GameError> {
        self.support.iter().try_for_each(|(s, _)| check_vertices(g, s))
    }

    pub fn probability_of(&self, vertices: &[Vertex]) -> Rational {
        self.support
            .iter()
            .find(|(s, _)| s == vertices)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Support entries as pure strategies.
    pub fn strategies(&self) -> impl Iterator<Item = Pure<R>> + '_ {
        self.support
            .iter()
            .map(|(s, _)| Pure { vertices: s.clone(), budget: self.budget, role: PhantomData })
    }

    /// Probabilities rescaled to integers over their common denominator.
    pub(crate) fn integer_weights(&self) -> (Vec<BigInt>, BigInt) {
        use num_integer::Integer;
        let denom = self
            .support
            .iter()
            .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
        let weights = self
            .support
            .iter()
            .map(|(_, p)| p.numer() * (&denom / p.denom()))
            .collect();
        (weights, denom)
    }
}

/// Outcome of one pure strategy pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayoffReport {
    pub surviving: Vec<Vertex>,
    pub disabled: Vec<Vertex>,
    pub payoff_def: usize,
    pub payoff_att: usize,
}

pub fn payoff(g: &Graph, defense: &Defense, attack: &Attack) -> Result<PayoffReport, GameError> {
    defense.validate(g)?;
    attack.validate(g)?;
    let mut attacked = vec![false; g.n()];
    for &a in attack.vertices() {
        attacked[a] = true;
    }
    let alive = Evaluator::new(g).survivor_mask(defense.vertices(), &attacked);
    let (surviving, disabled): (Vec<Vertex>, Vec<Vertex>) = (0..g.n()).partition(|&v| alive[v]);
    Ok(PayoffReport {
        payoff_def: surviving.len(),
        payoff_att: disabled.len(),
        surviving,
        disabled,
    })
}

/// `sum_D sum_A p_D q_A payoff(D, A)` for the defender.
pub fn expected_payoff(g: &Graph, md: &MixedDefense, ma: &MixedAttack) -> Result<Rational, GameError> {
    md.validate(g)?;
    ma.validate(g)?;
    let mut eval = Evaluator::new(g);
    let mut attacked = vec![false; g.n()];
    let mut total = Rational::zero();
    for (a, q) in ma.support() {
        a.iter().for_each(|&v| attacked[v] = true);
        for (d, p) in md.support() {
            let survivors = eval.survivors(d, &attacked);
            total += p * q * Rational::from_integer(BigInt::from(survivors));
        }
        a.iter().for_each(|&v| attacked[v] = false);
    }
    Ok(total)
}

/// Reusable scratch space for repeated survivor counts on one graph.
pub(crate) struct Evaluator<'g> {
    g: &'g Graph,
    mark: Vec<u32>,
    epoch: u32,
    stack: Vec<Vertex>,
}

impl<'g> Evaluator<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        Evaluator { g, mark: vec![0; g.n()], epoch: 0, stack: Vec::new() }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
    }

    /// Number of vertices reachable from non-attacked `controllers` while
    /// avoiding attacked vertices. After the call, [`Self::reached`] tells
    /// which vertices were counted.
    pub(crate) fn survivors(&mut self, controllers: &[Vertex], attacked: &[bool]) -> usize {
        self.next_epoch();
        let epoch = self.epoch;
        let mut count = 0;
        for &c in controllers {
            if attacked[c] || self.mark[c] == epoch {
                continue;
            }
            self.mark[c] = epoch;
            count += 1;
            self.stack.push(c);
            while let Some(u) = self.stack.pop() {
                for &w in self.g.neighbors(u) {
                    if !attacked[w] && self.mark[w] != epoch {
                        self.mark[w] = epoch;
                        count += 1;
                        self.stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub(crate) fn reached(&self, v: Vertex) -> bool {
        self.mark[v] == self.epoch
    }

    pub(crate) fn survivor_mask(&mut self, controllers: &[Vertex], attacked: &[bool]) -> Vec<bool> {
        self.survivors(controllers, attacked);
        (0..self.g.n()).map(|v| self.reached(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn def(vs: &[usize]) -> Defense {
        Defense::tight(vs.to_vec()).unwrap()
    }

    fn att(vs: &[usize]) -> Attack {
        Attack::tight(vs.to_vec()).unwrap()
    }

    #[test]
    fn path_with_middle_attacked() {
        let r = payoff(&path(3), &def(&[0]), &att(&[1])).unwrap();
        assert_eq!(r.payoff_def, 1);
        assert_eq!(r.surviving, vec![0]);
        assert_eq!(r.disabled, vec![1, 2]);
        assert_eq!(r.payoff_att, 2);
    }

    #[test]
    fn no_attack_or_no_defense() {
        let g = path(5);
        assert_eq!(payoff(&g, &def(&[3]), &att(&[])).unwrap().payoff_def, 5);
        let r = payoff(&g, &def(&[]), &att(&[2])).unwrap();
        assert_eq!((r.payoff_def, r.payoff_att), (0, 5));
    }

    #[test]
    fn attacked_controller_does_not_count() {
        let r = payoff(&path(3), &def(&[1]), &att(&[1])).unwrap();
        assert_eq!((r.payoff_def, r.payoff_att), (0, 3));
    }

    #[test]
    fn strategy_validation() {
        assert_eq!(Defense::new(vec![1, 1], 3), Err(GameError::DuplicateVertex(1)));
        assert_eq!(Defense::new(vec![0, 1], 1), Err(GameError::OverBudget { size: 2, budget: 1 }));
        assert_eq!(
            payoff(&path(2), &def(&[2]), &att(&[])),
            Err(GameError::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert!(matches!(
            MixedDefense::new(vec![(vec![0], ratio(1, 2))], 1),
            Err(GameError::ProbabilitySum(_))
        ));
        assert!(matches!(
            MixedDefense::new(vec![(vec![0], ratio(1, 2)), (vec![0], ratio(1, 2))], 1),
            Err(GameError::DuplicateSupportEntry(_))
        ));
        assert!(matches!(
            MixedDefense::new(vec![(vec![0], ratio(3, 2)), (vec![1], ratio(-1, 2))], 1),
            Err(GameError::BadProbability(_))
        ));
    }

    #[test]
    fn expected_payoff_examples() {
        let k2 = path(2);
        let g1 = MixedDefense::uniform(vec![vec![0], vec![1]], 1).unwrap();
        let a1 = MixedAttack::uniform(vec![vec![0], vec![1]], 1).unwrap();
        // pairs: D=A gives 0 survivors, D!=A gives 1
        assert_eq!(expected_payoff(&k2, &g1, &a1).unwrap(), ratio(1, 2));

        let p3 = path(3);
        let md = MixedDefense::pure(&def(&[1]));
        let ma = MixedAttack::uniform(vec![vec![1], vec![0]], 1).unwrap();
        assert_eq!(expected_payoff(&p3, &md, &ma).unwrap(), ratio(1, 1));

        let d = def(&[0]);
        let a = att(&[2]);
        let single = expected_payoff(&p3, &MixedDefense::pure(&d), &MixedAttack::pure(&a)).unwrap();
        assert_eq!(single, ratio(payoff(&p3, &d, &a).unwrap().payoff_def as i64, 1));
    }

    #[test]
    fn json_round_trip() {
        let m = MixedAttack::new(vec![(vec![2, 0], ratio(1, 3)), (vec![1], ratio(2, 3))], 2).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"prob\":\"1/3\""));
        let back: MixedAttack = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let d: Defense = serde_json::from_str(r#"{"vertices":[3,1],"budget":2}"#).unwrap();
        assert_eq!(d.vertices(), &[1, 3]);
        assert!(serde_json::from_str::<Defense>(r#"{"vertices":[3,1],"budget":1}"#).is_err());
    }
}
