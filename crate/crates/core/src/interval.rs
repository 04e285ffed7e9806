//! Attacker best response on interval graphs by a left-to-right sweep.
//!
//! Vertices are half-open intervals `[left, right)` with pairwise distinct
//! endpoints. The sweep visits every endpoint and keeps, per eventpoint `x`,
//! a table `T[y][z][j]`: the most vertices among the intervals starting at
//! or before `x` that an attack of size at most `j` disables, given that the
//! surviving interval reaching furthest right ends at `y` and that the
//! earliest later interval surviving on its own starts at `z`. `None` in
//! either slot compares above every endpoint.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{payoff, Attack, Defense, GameError};
use crate::graph::{Graph, Vertex};
use crate::rational::{self, Rational};
use crate::response::{compose_components, PureResponse, ResponseError};
use crate::game::Attacker;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("expected {expected} intervals, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("interval of vertex {vertex} is empty (left endpoint not below right endpoint)")]
    Degenerate { vertex: Vertex },
    #[error("duplicate endpoint {value} (vertices {first} and {second})")]
    DuplicateEndpoint { value: String, first: Vertex, second: Vertex },
    #[error("vertices {u} and {v}: intervals {} but the graph {}", overlap_text(*.overlap), edge_text(*.overlap))]
    Mismatch { u: Vertex, v: Vertex, overlap: bool },
    #[error("invalid interval JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Response(#[from] ResponseError),
}

fn overlap_text(overlap: bool) -> &'static str {
    if overlap {
        "overlap"
    } else {
        "are disjoint"
    }
}

fn edge_text(overlap: bool) -> &'static str {
    if overlap {
        "has no edge"
    } else {
        "has an edge"
    }
}

/// One half-open interval per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRepresentation {
    #[serde(with = "interval_list")]
    pub intervals: Vec<(Rational, Rational)>,
}

mod interval_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(list: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<[String; 2]> = list.iter().map(|(l, r)| [rational::format(l), rational::format(r)]).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rational, Rational)>, D::Error> {
        let text: Vec<[String; 2]> = Vec::deserialize(d)?;
        text.into_iter()
            .map(|[l, r]| match (rational::parse(&l), rational::parse(&r)) {
                (Some(l), Some(r)) => Ok((l, r)),
                _ => Err(serde::de::Error::custom(format!("invalid endpoint pair [{l:?}, {r:?}]"))),
            })
            .collect()
    }
}

impl IntervalRepresentation {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Self {
        IntervalRepresentation { intervals }
    }

    /// Convenience constructor from integer endpoints.
    pub fn from_integers(intervals: &[(i64, i64)]) -> Self {
        Self::new(intervals.iter().map(|&(l, r)| (rational::int(l), rational::int(r))).collect())
    }

    pub fn parse_json(text: &str) -> Result<Self, IntervalError> {
        serde_json::from_str(text).map_err(|e| IntervalError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Checks nonempty intervals and pairwise distinct endpoints.
    pub fn check_shape(&self) -> Result<(), IntervalError> {
        if let Some(vertex) = self.intervals.iter().position(|(l, r)| l >= r) {
            return Err(IntervalError::Degenerate { vertex });
        }
        let mut endpoints: Vec<(&Rational, Vertex)> =
            self.intervals.iter().enumerate().flat_map(|(v, (l, r))| [(l, v), (r, v)]).collect();
        endpoints.sort();
        if let Some(w) = endpoints.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(IntervalError::DuplicateEndpoint {
                value: rational::format(w[0].0),
                first: w[0].1,
                second: w[1].1,
            });
        }
        Ok(())
    }

    pub fn overlap(&self, u: Vertex, v: Vertex) -> bool {
        let (lu, ru) = &self.intervals[u];
        let (lv, rv) = &self.intervals[v];
        lu < rv && lv < ru
    }

    /// The intersection graph.
    pub fn to_graph(&self) -> Result<Graph, IntervalError> {
        self.check_shape()?;
        let n = self.len();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| self.overlap(u, v));
        Ok(Graph::from_edges(n, edges.collect::<Vec<_>>()).expect("intersection graph is simple"))
    }
}

/// Confirms that `ir` represents `g`; reports the lexicographically first
/// pair where overlap and adjacency disagree.
pub fn validate_intervals(ir: &IntervalRepresentation, g: &Graph) -> Result<(), IntervalError> {
    if ir.len() != g.n() {
        return Err(IntervalError::CountMismatch { expected: g.n(), found: ir.len() });
    }
    ir.check_shape()?;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let overlap = ir.overlap(u, v);
            if overlap != g.has_edge(u, v) {
                return Err(IntervalError::Mismatch { u, v, overlap });
            }
        }
    }
    Ok(())
}

const NEG: i32 = i32::MIN / 2;

/// How an entry was derived: the predecessor entry at the previous
/// eventpoint and whether the interval owning the current eventpoint is
/// attacked. Entries with no predecessor (base case and the closed-form
/// zero-budget rows) use no attacks among the intervals seen so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    y: u16,
    z: u16,
    j: u16,
    attacked: bool,
}

/// Sweep table for one connected interval graph.
#[derive(Debug, Clone)]
pub struct SweepTable {
    n: usize,
    budget: usize,
    /// Interval owning each eventpoint (index 0 is the sentinel before all
    /// endpoints) and whether it is a left endpoint.
    events: Vec<(Vertex, bool)>,
    left_event: Vec<usize>,
    right_event: Vec<usize>,
    /// Rank of each interval's right and left endpoint among all right and
    /// all left endpoints respectively; rank `n` encodes `None`.
    right_slot: Vec<usize>,
    left_slot: Vec<usize>,
    right_owner: Vec<Vertex>,
    left_owner: Vec<Vertex>,
    values: Vec<i32>,
    steps: Vec<Option<Step>>,
}

impl SweepTable {
    /// Runs the sweep for budgets `0..=budget`. The intervals must have
    /// distinct endpoints and form a connected intersection graph.
    pub fn build(intervals: &[(Rational, Rational)], controllers: &[bool], budget: usize) -> Self {
        let n = intervals.len();
        let mut endpoints: Vec<(&Rational, Vertex, bool)> =
            intervals.iter().enumerate().flat_map(|(v, (l, r))| [(l, v, true), (r, v, false)]).collect();
        endpoints.sort();
        let mut events = vec![(usize::MAX, false)];
        let mut left_event = vec![0; n];
        let mut right_event = vec![0; n];
        let (mut right_slot, mut left_slot) = (vec![0; n], vec![0; n]);
        let (mut right_owner, mut left_owner) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for (e, &(_, v, is_left)) in endpoints.iter().enumerate() {
            events.push((v, is_left));
            if is_left {
                left_event[v] = e + 1;
                left_slot[v] = left_owner.len();
                left_owner.push(v);
            } else {
                right_event[v] = e + 1;
                right_slot[v] = right_owner.len();
                right_owner.push(v);
            }
        }
        let mut table = SweepTable {
            n,
            budget,
            events,
            left_event,
            right_event,
            right_slot,
            left_slot,
            right_owner,
            left_owner,
            values: Vec::new(),
            steps: Vec::new(),
        };
        table.fill(controllers);
        table
    }

    /// Number of entries, `(2n + 1) (n + 1)^2 (budget + 1)`.
    pub fn entry_count(&self) -> usize {
        self.values.len()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn eventpoints(&self) -> usize {
        self.events.len()
    }

    /// `T[x][y][z][j]` with `None` encoded as `n`; `None` if infeasible.
    pub fn entry(&self, event: usize, y: usize, z: usize, j: usize) -> Option<i32> {
        let v = self.values[self.index(event, y, z, j)];
        (v > NEG / 2).then_some(v)
    }

    /// Largest payoff with at most `j` attacks on the whole graph.
    pub fn value(&self, j: usize) -> usize {
        let last = self.events.len() - 1;
        self.entry(last, self.n, self.n, j).expect("the empty attack is always feasible") as usize
    }

    /// An attack of size at most `j` achieving [`SweepTable::value`].
    pub fn attack(&self, j: usize) -> Vec<Vertex> {
        let mut attack = Vec::new();
        let (mut y, mut z, mut j) = (self.n, self.n, j);
        for e in (1..self.events.len()).rev() {
            match self.steps[self.index(e, y, z, j)] {
                Some(step) => {
                    if step.attacked {
                        attack.push(self.events[e].0);
                    }
                    (y, z, j) = (step.y as usize, step.z as usize, step.j as usize);
                }
                None => break,
            }
        }
        attack.sort_unstable();
        attack
    }

    fn index(&self, event: usize, y: usize, z: usize, j: usize) -> usize {
        let w = self.n + 1;
        ((event * w + y) * w + z) * (self.budget + 1) + j
    }

    /// Endpoint position of a right slot, `usize::MAX` for `None`.
    fn right_pos(&self, y: usize) -> usize {
        if y == self.n {
            usize::MAX
        } else {
            self.right_event[self.right_owner[y]]
        }
    }

    fn left_pos(&self, z: usize) -> usize {
        if z == self.n {
            usize::MAX
        } else {
            self.left_event[self.left_owner[z]]
        }
    }

    fn active(&self, v: Vertex, e: usize) -> bool {
        self.left_event[v] <= e && e < self.right_event[v]
    }

    fn y_feasible(&self, e: usize, y: usize) -> bool {
        y == self.n || self.active(self.right_owner[y], e)
    }

    fn z_feasible(&self, e: usize, z: usize) -> bool {
        z == self.n || self.left_pos(z) > e
    }

    fn fill(&mut self, controllers: &[bool]) {
        let (n, budget) = (self.n, self.budget);
        let size = self.events.len() * (n + 1) * (n + 1) * (budget + 1);
        self.values = vec![NEG; size];
        self.steps = vec![None; size];
        for z in 0..=n {
            for j in 0..=budget {
                let i = self.index(0, n, z, j);
                self.values[i] = 0;
            }
        }
        let mut seen = 0;
        let mut controller_seen = false;
        for e in 1..self.events.len() {
            let (v, is_left) = self.events[e];
            if is_left {
                seen += 1;
                controller_seen |= controllers[v];
            }
            let max_right = (0..n).filter(|&w| self.active(w, e)).map(|w| self.right_event[w]).max();
            for y in 0..=n {
                if !self.y_feasible(e, y) {
                    continue;
                }
                for z in 0..=n {
                    if !self.z_feasible(e, z) {
                        continue;
                    }
                    for j in 0..=budget {
                        let (value, step) = if is_left {
                            let ctx = LeftContext { v, controller: controllers[v], seen, controller_seen, max_right };
                            self.left_entry(e, &ctx, y, z, j)
                        } else {
                            self.right_entry(e, v, y, z, j)
                        };
                        let i = self.index(e, y, z, j);
                        self.values[i] = value;
                        self.steps[i] = step;
                    }
                }
            }
        }
    }

    fn prev(&self, e: usize, y: usize, z: usize, j: usize, attacked: bool) -> (i32, Option<Step>) {
        let value = self.values[self.index(e - 1, y, z, j)];
        (value, Some(Step { y: y as u16, z: z as u16, j: j as u16, attacked }))
    }

    fn prev_plus_one(&self, e: usize, y: usize, z: usize, j: Option<usize>, attacked: bool) -> (i32, Option<Step>) {
        match j {
            Some(j) => {
                let (value, step) = self.prev(e, y, z, j, attacked);
                if value <= NEG / 2 {
                    (NEG, None)
                } else {
                    (value + 1, step)
                }
            }
            None => (NEG, None),
        }
    }

    fn left_entry(&self, e: usize, ctx: &LeftContext, y: usize, z: usize, j: usize) -> (i32, Option<Step>) {
        let n = self.n;
        let v = ctx.v;
        let v_right = self.right_event[v];
        let (y_pos, z_pos) = (self.right_pos(y), self.left_pos(z));
        if j == 0 {
            let max_right = ctx.max_right.expect("the interval starting here is active");
            return if y == n && max_right < z_pos && !ctx.controller_seen {
                (ctx.seen as i32, None)
            } else if y != n && y_pos == max_right && (ctx.controller_seen || y_pos > z_pos) {
                (0, None)
            } else {
                (NEG, None)
            };
        }
        if y == n {
            if ctx.controller || z_pos < v_right {
                self.prev_plus_one(e, n, z, Some(j - 1), true)
            } else {
                self.prev_plus_one(e, n, z, Some(j), false)
            }
        } else if y_pos < v_right {
            self.prev_plus_one(e, y, z, Some(j - 1), true)
        } else if y_pos > v_right {
            let keep = if ctx.controller {
                self.prev(e, y, self.left_slot[v], j, false)
            } else {
                self.prev(e, y, z, j, false)
            };
            let hit = self.prev_plus_one(e, y, z, Some(j - 1), true);
            best(keep, hit)
        } else {
            let z_prev = if ctx.controller || z_pos < v_right { self.left_slot[v] } else { z };
            let mut result = self.prev(e, n, z_prev, j, false);
            for w in 0..n {
                if self.active(w, e - 1) && self.right_event[w] < v_right {
                    result = best(result, self.prev(e, self.right_slot[w], z_prev, j, false));
                }
            }
            result
        }
    }

    fn right_entry(&self, e: usize, v: Vertex, y: usize, z: usize, j: usize) -> (i32, Option<Step>) {
        if y != self.n {
            self.prev(e, y, z, j, false)
        } else {
            best(self.prev(e, self.right_slot[v], z, j, false), self.prev(e, self.n, z, j, false))
        }
    }
}

struct LeftContext {
    v: Vertex,
    controller: bool,
    /// Intervals with left endpoint at or before the current eventpoint.
    seen: usize,
    controller_seen: bool,
    max_right: Option<usize>,
}

/// Larger value wins; the first option on ties. Infeasible results carry no
/// step.
fn best(a: (i32, Option<Step>), b: (i32, Option<Step>)) -> (i32, Option<Step>) {
    let pick = if b.0 > a.0 { b } else { a };
    if pick.0 <= NEG / 2 {
        (NEG, None)
    } else {
        pick
    }
}

/// Optimal payoffs per component for budgets `0..=l`, composed over
/// components, with the attack recovered from the per-component tables.
pub fn interval_attacker_best_response(
    ir: &IntervalRepresentation,
    defense: &Defense,
    l: usize,
) -> Result<PureResponse<Attacker>, IntervalError> {
    let g = ir.to_graph()?;
    defense.validate(&g)?;
    let mut controllers = vec![false; g.n()];
    defense.vertices().iter().for_each(|&d| controllers[d] = true);

    let comps = g.connected_components();
    let mut payoffs = Vec::with_capacity(comps.len());
    let mut tables = Vec::with_capacity(comps.len());
    for members in &comps.components {
        let local: Vec<(Rational, Rational)> = members.iter().map(|&v| ir.intervals[v].clone()).collect();
        let local_ctrl: Vec<bool> = members.iter().map(|&v| controllers[v]).collect();
        let cap = l.min(members.len());
        let table = SweepTable::build(&local, &local_ctrl, cap);
        payoffs.push((0..=l).map(|j| table.value(j.min(cap))).collect::<Vec<_>>());
        tables.push(table);
    }
    let composed = compose_components(&payoffs, l)?;
    let mut attack = Vec::new();
    for ((members, table), &share) in comps.components.iter().zip(&tables).zip(&composed.split) {
        attack.extend(table.attack(share.min(table.budget())).into_iter().map(|i| members[i]));
    }
    let strategy = Attack::new(attack, l)?;
    let report = payoff(&g, defense, &strategy)?;
    debug_assert_eq!(report.payoff_att, composed.value);
    Ok(PureResponse { value: composed.value, strategy, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;

    fn path_ir() -> IntervalRepresentation {
        IntervalRepresentation::from_integers(&[(0, 2), (1, 4), (3, 5)])
    }

    fn def(vs: &[usize]) -> Defense {
        Defense::tight(vs.to_vec()).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(validate_intervals(&path_ir(), &p3), Ok(()));

        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let apart = IntervalRepresentation::from_integers(&[(0, 1), (2, 3)]);
        assert_eq!(validate_intervals(&apart, &k2), Err(IntervalError::Mismatch { u: 0, v: 1, overlap: false }));

        let touching = IntervalRepresentation::from_integers(&[(0, 2), (2, 3)]);
        assert!(matches!(
            validate_intervals(&touching, &Graph::empty(2)),
            Err(IntervalError::DuplicateEndpoint { .. })
        ));
        let empty = IntervalRepresentation::from_integers(&[(1, 1)]);
        assert_eq!(empty.check_shape(), Err(IntervalError::Degenerate { vertex: 0 }));
    }

    #[test]
    fn json_uses_rational_strings() {
        let ir = IntervalRepresentation::new(vec![(rational::ratio(1, 2), rational::int(2))]);
        assert_eq!(ir.to_json(), r#"{"intervals":[["1/2","2/1"]]}"#);
        assert_eq!(IntervalRepresentation::parse_json(r#"{"intervals":[["1/2","2"]]}"#).unwrap(), ir);
        assert!(IntervalRepresentation::parse_json(r#"{"intervals":[["a","2"]]}"#).is_err());
    }

    #[test]
    fn path_examples() {
        let r = interval_attacker_best_response(&path_ir(), &def(&[1]), 1).unwrap();
        assert_eq!((r.value, r.strategy.vertices()), (3, &[1][..]));

        // attacking the only controller beats cutting the path
        let r = interval_attacker_best_response(&path_ir(), &def(&[0]), 1).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.strategy.vertices(), &[0]);
        let g = path_ir().to_graph().unwrap();
        assert_eq!(brute::best_attack(&g, &[0], 1), (3, vec![0]));
        let r = interval_attacker_best_response(&path_ir(), &def(&[0, 2]), 1).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn zero_budget_with_every_component_defended() {
        let ir = IntervalRepresentation::from_integers(&[(0, 2), (1, 4), (5, 7), (6, 8)]);
        let r = interval_attacker_best_response(&ir, &def(&[0, 3]), 0).unwrap();
        assert_eq!(r.value, 0);
        let r = interval_attacker_best_response(&ir, &def(&[0]), 0).unwrap();
        assert_eq!(r.value, 2);
    }

    #[test]
    fn matches_brute_force_on_small_family() {
        let ir = IntervalRepresentation::from_integers(&[(0, 3), (1, 5), (2, 7), (4, 9), (6, 11), (8, 10), (12, 13)]);
        let g = ir.to_graph().unwrap();
        for d in crate::subsets::subsets_up_to(g.n(), 2) {
            for l in 0..=3 {
                let r = interval_attacker_best_response(&ir, &def(&d), l).unwrap();
                assert_eq!(r.value, brute::best_attack(&g, &d, l).0, "defense {d:?}, l = {l}");
                assert_eq!(r.report.payoff_att, r.value);
            }
        }
    }

    #[test]
    fn table_size_and_monotone_budget() {
        let ir = IntervalRepresentation::from_integers(&[(0, 3), (1, 5), (2, 7), (4, 9)]);
        let t = SweepTable::build(&ir.intervals, &[false, true, false, false], 2);
        assert_eq!(t.entry_count(), 9 * 5 * 5 * 3);
        for e in 0..t.eventpoints() {
            for y in 0..=4 {
                for z in 0..=4 {
                    for j in 1..=2 {
                        if let (Some(a), Some(b)) = (t.entry(e, y, z, j - 1), t.entry(e, y, z, j)) {
                            assert!(a <= b);
                        }
                        if t.entry(e, y, z, j - 1).is_some() {
                            assert!(t.entry(e, y, z, j).is_some());
                        }
                    }
                }
            }
        }
        // base case and the all-survive closed form
        for z in 0..=4 {
            assert_eq!(t.entry(0, 4, z, 0), Some(0));
        }
        assert_eq!(t.value(0), 0);
    }
}
