//! Best responses against a fixed opponent.
//!
//! The defender's reply to a pure attack is a greedy choice over component
//! sizes. Every other variant is NP-hard in general and is solved exactly by a
//! depth-first search over vertex subsets with an admissible bound. Among
//! equally good replies the shortlex-smallest vertex set is returned (see
//! [`crate::subsets::shortlex`]).

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::game::{
    payoff, Attack, Attacker, Defender, Defense, Evaluator, GameError, MixedAttack, MixedDefense, PayoffReport, Pure,
};
use crate::graph::{Graph, Vertex};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResponseError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("component {component} has no payoff entry for budget {budget}")]
    MissingTableRow { component: usize, budget: usize },
}

/// Best reply to a pure opponent; `value` is the responder's payoff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct PureResponse<R: crate::game::Role> {
    pub strategy: Pure<R>,
    pub value: usize,
    pub report: PayoffReport,
}

/// Best reply to a mixed opponent; `value` is the responder's expected payoff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct MixedResponse<R: crate::game::Role> {
    pub strategy: Pure<R>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub breakdown: Vec<BreakdownRow>,
}

/// One opponent strategy of the support with the responder's payoff against it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BreakdownRow {
    pub opponent: Vec<Vertex>,
    #[serde(with = "rational::serde_str")]
    pub probability: Rational,
    pub payoff: usize,
}

/// Optimal `b`-attack payoffs per connected component, `payoffs[i][b]` for
/// `0 <= b <= budget`, plus the attack realizing each entry (in the original
/// vertex labels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentAttackTable {
    pub components: Vec<Vec<Vertex>>,
    pub payoffs: Vec<Vec<usize>>,
    pub attacks: Vec<Vec<Vec<Vertex>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Composition {
    pub value: usize,
    /// Budget spent in each component.
    pub split: Vec<usize>,
}

/// Knapsack over components: `T[i][b] = max_{b'} T[i-1][b-b'] + P[i][b']`.
/// Each row of `payoffs` needs entries for budgets `0..=budget`. Ties in the
/// split give earlier components the larger share.
pub fn compose_components(payoffs: &[Vec<usize>], budget: usize) -> Result<Composition, ResponseError> {
    if let Some(component) = payoffs.iter().position(|row| row.len() <= budget) {
        return Err(ResponseError::MissingTableRow { component, budget: payoffs[component].len() });
    }
    if payoffs.is_empty() {
        return Ok(Composition { value: 0, split: Vec::new() });
    }
    // table[i][b] over the first i+1 components; choice[i][b] = budget of component i
    let mut table: Vec<Vec<usize>> = vec![payoffs[0][..=budget].to_vec()];
    let mut choice: Vec<Vec<usize>> = vec![(0..=budget).collect()];
    for row in &payoffs[1..] {
        let prev = table.last().unwrap();
        let mut t = vec![0; budget + 1];
        let mut c = vec![0; budget + 1];
        for b in 0..=budget {
            for own in 0..=b {
                let v = prev[b - own] + row[own];
                if own == 0 || v > t[b] {
                    t[b] = v;
                    c[b] = own;
                }
            }
        }
        table.push(t);
        choice.push(c);
    }
    let value = table.last().unwrap()[budget];
    let mut split = vec![0; payoffs.len()];
    let mut b = budget;
    for i in (0..payoffs.len()).rev() {
        split[i] = choice[i][b];
        b -= split[i];
    }
    Ok(Composition { value, split })
}

/// Observation-style greedy: controllers go to the `k` largest components of
/// `G - A`, one representative (the smallest vertex) each.
pub fn defender_best_response(g: &Graph, attack: &Attack, k: usize) -> Result<PureResponse<Defender>, ResponseError> {
    attack.validate(g)?;
    let mut blocked = vec![false; g.n()];
    attack.vertices().iter().for_each(|&a| blocked[a] = true);
    let comps = g.components_avoiding(&blocked);
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&comps.components[a], &comps.components[b]);
        cb.len().cmp(&ca.len()).then(ca[0].cmp(&cb[0]))
    });
    let mut vertices: Vec<Vertex> = order.iter().take(k).map(|&c| comps.components[c][0]).collect();
    vertices.sort_unstable();
    let strategy = Defense::new(vertices, k)?;
    let report = payoff(g, &strategy, attack)?;
    Ok(PureResponse { value: report.payoff_def, strategy, report })
}

/// Exact attacker reply to a pure defense. The optimum is assembled from
/// per-component optima via [`compose_components`]; the returned attack is
/// the shortlex-smallest optimal one.
pub fn attacker_best_response(g: &Graph, defense: &Defense, l: usize) -> Result<PureResponse<Attacker>, ResponseError> {
    let (response, _) = attacker_best_response_with_tables(g, defense, l)?;
    Ok(response)
}

pub fn attacker_best_response_with_tables(
    g: &Graph,
    defense: &Defense,
    l: usize,
) -> Result<(PureResponse<Attacker>, ComponentAttackTable), ResponseError> {
    defense.validate(g)?;
    let tables = component_attack_tables(g, defense.vertices(), l)?;
    let composed = compose_components(&tables.payoffs, l)?;

    // Whole-graph search for the shortlex-smallest witness, pruned against the
    // known optimum.
    let mut search = AttackSearch::new(g, vec![(defense.vertices().to_vec(), 1u64)], l);
    search.seed_target(composed.value as u64);
    let (value, attack) = search.run();
    assert_eq!(value as usize, composed.value, "witness search disagrees with component composition");

    let strategy = Attack::new(attack, l)?;
    let report = payoff(g, defense, &strategy)?;
    Ok((PureResponse { value: report.payoff_att, strategy, report }, tables))
}

/// Optimal attacker payoff for every budget `0..=l` on each component.
pub fn component_attack_tables(g: &Graph, defense: &[Vertex], l: usize) -> Result<ComponentAttackTable, ResponseError> {
    let mut controller = vec![false; g.n()];
    for &d in defense {
        g.check_vertex(d).map_err(|_| GameError::VertexOutOfRange { vertex: d, n: g.n() })?;
        controller[d] = true;
    }
    let comps = g.connected_components();
    let mut payoffs = Vec::with_capacity(comps.len());
    let mut attacks = Vec::with_capacity(comps.len());
    for members in &comps.components {
        let (sub, map) = g.induced_subgraph(members).expect("component vertices are valid");
        let local_def: Vec<Vertex> = (0..sub.n()).filter(|&i| controller[map[i]]).collect();
        let mut row = Vec::with_capacity(l + 1);
        let mut row_attacks = Vec::with_capacity(l + 1);
        for b in 0..=l {
            if local_def.is_empty() {
                row.push(sub.n());
                row_attacks.push(Vec::new());
            } else if b > sub.n() {
                row.push(row[sub.n()]);
                row_attacks.push(row_attacks[sub.n()].clone());
            } else {
                let (v, a) = AttackSearch::new(&sub, vec![(local_def.clone(), 1u64)], b).run();
                row.push(v as usize);
                row_attacks.push(a.into_iter().map(|i| map[i]).collect());
            }
        }
        payoffs.push(row);
        attacks.push(row_attacks);
    }
    Ok(ComponentAttackTable { components: comps.components, payoffs, attacks })
}

/// Whole-graph attacker search against one defense that gives up as soon as
/// an attack reaching `stop_at` is found. Returns the best payoff seen and
/// its attack; the payoff is exact whenever it stays below `stop_at`.
pub(crate) fn attacker_value_until(g: &Graph, defense: &[Vertex], l: usize, stop_at: usize) -> (usize, Vec<Vertex>) {
    let mut search = AttackSearch::new(g, vec![(defense.to_vec(), 1u64)], l);
    search.stop_at = Some(stop_at as u64);
    let (v, a) = search.run();
    (v as usize, a)
}

/// Exact attacker reply maximizing the expected payoff against `md`.
pub fn attacker_best_response_mixed(
    g: &Graph,
    md: &MixedDefense,
    l: usize,
) -> Result<MixedResponse<Attacker>, ResponseError> {
    md.validate(g)?;
    let strategy = if md.len() == 1 {
        let d = md.strategies().next().unwrap();
        attacker_best_response(g, &d, l)?.strategy
    } else {
        let (weights, _) = md.integer_weights();
        let scenarios = md.support().iter().map(|(d, _)| d.clone()).zip(weights).collect();
        let (_, attack) = AttackSearch::new(g, scenarios, l).run();
        Attack::new(attack, l)?
    };
    let mut breakdown = Vec::with_capacity(md.len());
    let mut value = Rational::zero();
    for (d, p) in md.support() {
        let r = payoff(g, &Defense::tight(d.clone())?, &strategy)?;
        value += p * Rational::from_integer(BigInt::from(r.payoff_att));
        breakdown.push(BreakdownRow { opponent: d.clone(), probability: p.clone(), payoff: r.payoff_att });
    }
    Ok(MixedResponse { strategy, value, breakdown })
}

/// Exact defender reply maximizing the expected payoff against `ma`.
pub fn defender_best_response_mixed(
    g: &Graph,
    ma: &MixedAttack,
    k: usize,
) -> Result<MixedResponse<Defender>, ResponseError> {
    ma.validate(g)?;
    let (weights, _) = ma.integer_weights();
    let scenarios = ma.support().iter().map(|(a, _)| a.as_slice()).zip(weights).collect();
    let (_, defense) = DefenseSearch::new(g, scenarios, k).run();
    let strategy = Defense::new(defense, k)?;
    let mut breakdown = Vec::with_capacity(ma.len());
    let mut value = Rational::zero();
    for (a, q) in ma.support() {
        let r = payoff(g, &strategy, &Attack::tight(a.clone())?)?;
        value += q * Rational::from_integer(BigInt::from(r.payoff_def));
        breakdown.push(BreakdownRow { opponent: a.clone(), probability: q.clone(), payoff: r.payoff_def });
    }
    Ok(MixedResponse { strategy, value, breakdown })
}

/// Accumulated objective of a subset search: integer weights times counts.
pub(crate) trait Score: Clone + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn add_scaled(&mut self, weight: &Self, count: usize);
}

impl Score for u64 {
    fn zero() -> Self {
        0
    }

    fn add_scaled(&mut self, weight: &Self, count: usize) {
        *self += weight * count as u64;
    }
}

impl Score for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn add_scaled(&mut self, weight: &Self, count: usize) {
        *self += weight * BigInt::from(count);
    }
}

/// Incumbent of a maximizing shortlex search. `len` may exceed any real set
/// size when the incumbent is only a target value.
struct Incumbent<S> {
    score: S,
    len: usize,
    set: Vec<Vertex>,
}

impl<S: Score> Incumbent<S> {
    /// Whether a set of size `len` with payoff `score` (visited later in
    /// lexicographic order) replaces the incumbent.
    fn improved_by(&self, score: &S, len: usize) -> bool {
        *score > self.score || (*score == self.score && len < self.len)
    }

    /// Whether a subtree whose sets have size at least `min_len` and payoff at
    /// most `bound` can still contain a replacement.
    fn worth_exploring(&self, bound: &S, min_len: usize) -> bool {
        *bound > self.score || (*bound == self.score && min_len < self.len)
    }
}

/// Depth-first attacker search over subsets in lexicographic order.
///
/// Scenario `s` is a defense with an integer weight; the objective is
/// `sum_s w_s * disabled_s(A)`. The bound for a prefix `A` whose remaining
/// candidates are `U = {next..n-1}`: controllers outside `A ∪ U` are certain
/// to survive, so everything they reach in `G - (A ∪ U)` survives too.
pub(crate) struct AttackSearch<'g, S> {
    g: &'g Graph,
    eval: Evaluator<'g>,
    scenarios: Vec<(Vec<Vertex>, S)>,
    budget: usize,
    attacked: Vec<bool>,
    blocked: Vec<bool>,
    prefix: Vec<Vertex>,
    best: Option<Incumbent<S>>,
    stop_at: Option<S>,
    done: bool,
}

impl<'g, S: Score> AttackSearch<'g, S> {
    pub(crate) fn new(g: &'g Graph, scenarios: Vec<(Vec<Vertex>, S)>, budget: usize) -> Self {
        AttackSearch {
            g,
            eval: Evaluator::new(g),
            scenarios,
            budget: budget.min(g.n()),
            attacked: vec![false; g.n()],
            blocked: vec![false; g.n()],
            prefix: Vec::new(),
            best: None,
            stop_at: None,
            done: false,
        }
    }

    /// Prune everything that cannot reach `target`; the first set reaching it
    /// replaces the placeholder.
    pub(crate) fn seed_target(&mut self, target: S) {
        self.best = Some(Incumbent { score: target, len: usize::MAX, set: Vec::new() });
    }

    pub(crate) fn run(mut self) -> (S, Vec<Vertex>) {
        self.visit(0);
        let best = self.best.expect("the empty attack is always visited");
        assert!(best.len != usize::MAX, "target value was not reached");
        (best.score, best.set)
    }

    fn score(&mut self) -> S {
        let n = self.g.n();
        let mut total = S::zero();
        for (d, w) in &self.scenarios {
            let alive = self.eval.survivors(d, &self.attacked);
            total.add_scaled(w, n - alive);
        }
        total
    }

    /// Upper bound over all extensions of the current prefix by vertices
    /// `>= next`, the prefix itself included.
    fn bound(&mut self, next: usize) -> S {
        let n = self.g.n();
        let remaining = self.budget - self.prefix.len();
        if remaining == 0 || next >= n {
            return self.score();
        }
        for v in 0..n {
            self.blocked[v] = self.attacked[v] || v >= next;
        }
        let mut total = S::zero();
        for (d, w) in &self.scenarios {
            let forced: Vec<Vertex> = d.iter().copied().filter(|&c| !self.attacked[c] && c < next).collect();
            let open = d.iter().filter(|&&c| !self.attacked[c] && c >= next).count();
            let mut alive = self.eval.survivors(&forced, &self.blocked);
            if forced.is_empty() && open > remaining {
                alive = 1;
            }
            total.add_scaled(w, n - alive);
        }
        total
    }

    fn visit(&mut self, next: usize) {
        let score = self.score();
        let len = self.prefix.len();
        let replace = self.best.as_ref().is_none_or(|b| b.improved_by(&score, len));
        if replace {
            if let Some(stop) = &self.stop_at {
                if score >= *stop {
                    self.done = true;
                }
            }
            self.best = Some(Incumbent { score, len, set: self.prefix.clone() });
        }
        if self.done || len == self.budget {
            return;
        }
        for v in next..self.g.n() {
            self.prefix.push(v);
            self.attacked[v] = true;
            let bound = self.bound(v + 1);
            let best = self.best.as_ref().unwrap();
            if best.worth_exploring(&bound, len + 1) {
                self.visit(v + 1);
            }
            self.attacked[v] = false;
            self.prefix.pop();
            if self.done {
                return;
            }
        }
    }
}

/// Component structure of `G - A` for one attack scenario.
struct AttackScenario<S> {
    weight: S,
    component_of: Vec<Option<usize>>,
    sizes: Vec<usize>,
    /// Largest vertex in each component.
    last_vertex: Vec<Vertex>,
}

/// Depth-first defender search. A prefix `P` with candidates `{next..n-1}`
/// and `r` controllers left is bounded per scenario by the components already
/// hit plus the `r` largest unhit components that still contain a candidate.
pub(crate) struct DefenseSearch<S> {
    n: usize,
    scenarios: Vec<AttackScenario<S>>,
    budget: usize,
    prefix: Vec<Vertex>,
    best: Option<Incumbent<S>>,
    hit: Vec<Vec<u32>>,
}

impl<S: Score> DefenseSearch<S> {
    pub(crate) fn new(g: &Graph, scenarios: Vec<(&[Vertex], S)>, budget: usize) -> Self {
        let scenarios: Vec<AttackScenario<S>> = scenarios
            .into_iter()
            .map(|(attack, weight)| {
                let mut blocked = vec![false; g.n()];
                attack.iter().for_each(|&a| blocked[a] = true);
                let comps = g.components_avoiding(&blocked);
                AttackScenario {
                    weight,
                    sizes: comps.sizes(),
                    last_vertex: comps.components.iter().map(|c| *c.last().unwrap()).collect(),
                    component_of: comps.component_of,
                }
            })
            .collect();
        let hit = scenarios.iter().map(|s| vec![0; s.sizes.len()]).collect();
        DefenseSearch { n: g.n(), scenarios, budget: budget.min(g.n()), prefix: Vec::new(), best: None, hit }
    }

    pub(crate) fn run(mut self) -> (S, Vec<Vertex>) {
        self.visit(0);
        let best = self.best.expect("the empty defense is always visited");
        (best.score, best.set)
    }

    fn score(&self) -> S {
        let mut total = S::zero();
        for (s, hit) in self.scenarios.iter().zip(&self.hit) {
            let covered: usize = s.sizes.iter().zip(hit).filter(|(_, &h)| h > 0).map(|(sz, _)| sz).sum();
            total.add_scaled(&s.weight, covered);
        }
        total
    }

    fn bound(&self, next: usize) -> S {
        let remaining = self.budget - self.prefix.len();
        let mut total = S::zero();
        let mut open = Vec::new();
        for (s, hit) in self.scenarios.iter().zip(&self.hit) {
            let mut covered = 0;
            open.clear();
            for (c, &size) in s.sizes.iter().enumerate() {
                if hit[c] > 0 {
                    covered += size;
                } else if s.last_vertex[c] >= next {
                    open.push(size);
                }
            }
            if remaining > 0 {
                open.sort_unstable_by(|a, b| b.cmp(a));
                covered += open.iter().take(remaining).sum::<usize>();
            }
            total.add_scaled(&s.weight, covered);
        }
        total
    }

    fn place(&mut self, v: Vertex, delta: i32) {
        for (s, hit) in self.scenarios.iter().zip(self.hit.iter_mut()) {
            if let Some(c) = s.component_of[v] {
                hit[c] = (hit[c] as i32 + delta) as u32;
            }
        }
    }

    fn visit(&mut self, next: usize) {
        let score = self.score();
        let len = self.prefix.len();
        if self.best.as_ref().is_none_or(|b| b.improved_by(&score, len)) {
            self.best = Some(Incumbent { score, len, set: self.prefix.clone() });
        }
        if len == self.budget {
            return;
        }
        for v in next..self.n {
            self.prefix.push(v);
            self.place(v, 1);
            let bound = self.bound(v + 1);
            if self.best.as_ref().unwrap().worth_exploring(&bound, len + 1) {
                self.visit(v + 1);
            }
            self.place(v, -1);
            self.prefix.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;
    use crate::rational::ratio;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    fn def(vs: &[usize]) -> Defense {
        Defense::tight(vs.to_vec()).unwrap()
    }

    fn att(vs: &[usize]) -> Attack {
        Attack::tight(vs.to_vec()).unwrap()
    }

    #[test]
    fn defender_reply_on_split_path() {
        let r = defender_best_response(&path(5), &att(&[2]), 1).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.strategy.vertices(), &[0]);
    }

    #[test]
    fn defender_reply_takes_largest_components() {
        // components of sizes 5, 3, 2
        let g = Graph::from_edges(10, [(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (6, 7), (8, 9)]).unwrap();
        let r = defender_best_response(&g, &att(&[]), 2).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.strategy.vertices(), &[0, 5]);
    }

    #[test]
    fn defender_reply_tie_break_matches_brute_force() {
        // sizes {3,3,1}: the size-3 component with the smallest vertex wins
        let g = Graph::from_edges(7, [(6, 1), (1, 2), (0, 3), (3, 4)]).unwrap();
        let r = defender_best_response(&g, &att(&[]), 1).unwrap();
        let (value, best) = brute::best_defense(&g, &[], 1);
        assert_eq!(r.value, 3);
        assert_eq!((r.value, r.strategy.vertices().to_vec()), (value, best));
        assert_eq!(r.strategy.vertices(), &[0]);
    }

    #[test]
    fn attacker_reply_examples() {
        let r = attacker_best_response(&star(4), &def(&[0]), 1).unwrap();
        assert_eq!((r.value, r.strategy.vertices()), (5, &[0][..]));

        let r = attacker_best_response(&path(3), &def(&[1]), 1).unwrap();
        assert_eq!((r.value, r.strategy.vertices()), (3, &[1][..]));
        assert_eq!(brute::best_attack(&path(3), &[1], 1), (3, vec![1]));
    }

    #[test]
    fn attacker_reply_zero_budget() {
        let r = attacker_best_response(&path(4), &def(&[2]), 0).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.strategy.is_empty());
        let r = attacker_best_response(&path(4), &def(&[]), 0).unwrap();
        assert_eq!(r.value, 4);
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose_components(&[vec![0, 2, 5]], 2).unwrap(), Composition { value: 5, split: vec![2] });
        assert_eq!(
            compose_components(&[vec![0, 2], vec![0, 3]], 1).unwrap(),
            Composition { value: 3, split: vec![0, 1] }
        );
        // splits (0,2)=3, (1,1)=4, (2,0)=3
        assert_eq!(
            compose_components(&[vec![0, 2, 3], vec![0, 2, 3]], 2).unwrap(),
            Composition { value: 4, split: vec![1, 1] }
        );
        assert_eq!(
            compose_components(&[vec![0, 2, 3], vec![0, 1]], 2),
            Err(ResponseError::MissingTableRow { component: 1, budget: 2 })
        );
    }

    #[test]
    fn mixed_attacker_examples() {
        let k2 = path(2);
        let md = MixedDefense::uniform(vec![vec![0], vec![1]], 1).unwrap();
        let r = attacker_best_response_mixed(&k2, &md, 1).unwrap();
        assert_eq!(r.value, ratio(3, 2));

        // all three single attacks on P3 score 2 against 1/2 {0} + 1/2 {2};
        // the shortlex tie-break picks {0}
        let p3 = path(3);
        let md = MixedDefense::uniform(vec![vec![0], vec![2]], 1).unwrap();
        let r = attacker_best_response_mixed(&p3, &md, 1).unwrap();
        assert_eq!(r.value, ratio(2, 1));
        assert_eq!(r.strategy.vertices(), &[0]);
        assert_eq!(brute::best_attack_mixed(&p3, &md, 1), (ratio(2, 1), vec![0]));

        let single = MixedDefense::pure(&def(&[1]));
        let r = attacker_best_response_mixed(&p3, &single, 1).unwrap();
        let pure = attacker_best_response(&p3, &def(&[1]), 1).unwrap();
        assert_eq!(r.strategy, pure.strategy);
        assert_eq!(r.value, ratio(pure.value as i64, 1));
    }

    #[test]
    fn mixed_defender_examples() {
        let p3 = path(3);
        let ma = MixedAttack::uniform(vec![vec![1], vec![]], 1).unwrap();
        let r = defender_best_response_mixed(&p3, &ma, 1).unwrap();
        assert_eq!(r.value, ratio(2, 1));
        assert_eq!(r.strategy.vertices(), &[0]);

        let k2 = path(2);
        let ma = MixedAttack::uniform(vec![vec![1], vec![0]], 1).unwrap();
        let r = defender_best_response_mixed(&k2, &ma, 2).unwrap();
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(r.strategy.vertices(), &[0, 1]);

        let single = MixedAttack::pure(&att(&[2]));
        let r = defender_best_response_mixed(&path(5), &single, 1).unwrap();
        let pure = defender_best_response(&path(5), &att(&[2]), 1).unwrap();
        assert_eq!(r.value, ratio(pure.value as i64, 1));
        assert_eq!(r.strategy, pure.strategy);
    }

    #[test]
    fn component_tables_match_whole_graph() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)]).unwrap();
        let d = def(&[1, 5]);
        let (r, tables) = attacker_best_response_with_tables(&g, &d, 2).unwrap();
        assert_eq!(tables.payoffs, vec![vec![0, 3, 3], vec![0, 4, 4]]);
        assert_eq!(r.value, brute::best_attack(&g, &[1, 5], 2).0);
        assert_eq!(r.value, 7);
    }
}
