//! Attacker best response over a nice tree decomposition.
//!
//! Each bag vertex carries one of four labels: attacked, disabled,
//! surviving, or surviving with a live connection from outside the current
//! subtree ("connected"). A table cell `P_t[j][labels]` holds the largest
//! number of attacked or disabled vertices in the subtree graph over attacks
//! of size at most `j` that agree with the labels.
//!
//! Labels are only checked for closure: a disabled vertex is never a
//! controller and never adjacent to a surviving one. A closed labeling can
//! only under-report the disabled set, and the true labeling is closed, so
//! the maximum is exact.

use thiserror::Error;

use crate::game::{payoff, Attack, Attacker, Defense, GameError};
use crate::graph::{Graph, Vertex};
use crate::response::PureResponse;

use super::decomposition::TdError;
use super::nice::{NiceTreeDecomposition, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreewidthError {
    #[error(transparent)]
    Decomposition(#[from] TdError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("decomposition width {width} exceeds the supported maximum {max}")]
    TooWide { width: usize, max: usize },
}

/// Largest supported bag size minus one.
pub const MAX_WIDTH: usize = 9;

const NEG: i32 = i32::MIN / 2;

const ATTACKED: u32 = 0;
const DISABLED: u32 = 1;
const SURVIVING: u32 = 2;
const CONNECTED: u32 = 3;

/// Transition rules. `Naive` lets a surviving non-controller lean on any
/// surviving bag neighbor and subtracts only shared attacked vertices at
/// joins; kept to document why those rules overcount.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rules {
    Sound,
    #[cfg_attr(not(test), allow(dead_code))]
    Naive,
}

fn digit(state: u32, pos: usize) -> u32 {
    (state >> (2 * pos)) & 3
}

fn with_digit(state: u32, pos: usize, d: u32) -> u32 {
    (state & !(3 << (2 * pos))) | (d << (2 * pos))
}

fn remove_digit(state: u32, pos: usize) -> u32 {
    let low = state & ((1 << (2 * pos)) - 1);
    let high = state >> (2 * (pos + 1));
    low | (high << (2 * pos))
}

fn insert_digit(state: u32, pos: usize, d: u32) -> u32 {
    let low = state & ((1 << (2 * pos)) - 1);
    let high = state >> (2 * pos);
    low | (d << (2 * pos)) | (high << (2 * (pos + 1)))
}

/// Per-node tables and the choices needed to recover an optimal attack.
struct Tables {
    budget: usize,
    values: Vec<Vec<i32>>,
    /// Forget nodes: child label of the forgotten vertex. Join nodes: packed
    /// left budget and the two children's label words.
    choices: Vec<Vec<u64>>,
}

impl Tables {
    fn at(&self, node: usize, j: usize, state: u32) -> i32 {
        self.values[node][j * self.width(node) + state as usize]
    }

    fn width(&self, node: usize) -> usize {
        self.values[node].len() / (self.budget + 1)
    }
}

struct Solver<'a> {
    g: &'a Graph,
    ntd: &'a NiceTreeDecomposition,
    controller: Vec<bool>,
    budget: usize,
    rules: Rules,
}

impl<'a> Solver<'a> {
    fn run(&self) -> Tables {
        let mut tables = Tables { budget: self.budget, values: Vec::new(), choices: Vec::new() };
        for t in 0..self.ntd.len() {
            let (values, choices) = self.node(t, &tables);
            tables.values.push(values);
            tables.choices.push(choices);
        }
        tables
    }

    /// Bag positions of the neighbors of `v` within `bag`.
    fn bag_neighbors(&self, bag: &[Vertex], v: Vertex) -> Vec<usize> {
        bag.iter().enumerate().filter(|&(_, &u)| self.g.has_edge(u, v)).map(|(i, _)| i).collect()
    }

    fn node(&self, t: usize, tables: &Tables) -> (Vec<i32>, Vec<u64>) {
        let node = &self.ntd.nodes[t];
        let states = 1usize << (2 * node.bag.len());
        let mut values = vec![NEG; (self.budget + 1) * states];
        let mut choices = Vec::new();
        match node.kind {
            NodeKind::Leaf => values.iter_mut().for_each(|v| *v = 0),
            NodeKind::Introduce { vertex, child } => {
                let pos = node.bag.binary_search(&vertex).unwrap();
                let nbrs = self.bag_neighbors(&node.bag, vertex);
                for state in 0..states as u32 {
                    for j in 0..=self.budget {
                        if let Some((cj, cs, gain)) = self.introduce(vertex, pos, &nbrs, state, j) {
                            let prev = tables.at(child, cj, cs);
                            if prev > NEG {
                                values[j * states + state as usize] = prev + gain;
                            }
                        }
                    }
                }
            }
            NodeKind::Forget { vertex, child } => {
                let pos = self.ntd.nodes[child].bag.binary_search(&vertex).unwrap();
                choices = vec![0; values.len()];
                for state in 0..states as u32 {
                    for j in 0..=self.budget {
                        let mut best = NEG;
                        for d in [ATTACKED, DISABLED, SURVIVING] {
                            let v = tables.at(child, j, insert_digit(state, pos, d));
                            if v > best {
                                best = v;
                                choices[j * states + state as usize] = d as u64;
                            }
                        }
                        values[j * states + state as usize] = best;
                    }
                }
            }
            NodeKind::Join { left, right } => {
                choices = vec![0; values.len()];
                let b = node.bag.len();
                for state in 0..states as u32 {
                    let labels: Vec<u32> = (0..b).map(|i| digit(state, i)).collect();
                    let attacked = labels.iter().filter(|&&d| d == ATTACKED).count();
                    let disabled = labels.iter().filter(|&&d| d == DISABLED).count();
                    let shared = match self.rules {
                        Rules::Sound => attacked + disabled,
                        Rules::Naive => attacked,
                    } as i32;
                    let open: Vec<usize> = (0..b).filter(|&i| labels[i] == SURVIVING).collect();
                    let claims = 3usize.pow(open.len() as u32);
                    for claim in 0..claims {
                        let (mut ls, mut rs, mut c) = (state, state, claim);
                        for &i in &open {
                            match c % 3 {
                                1 => ls = with_digit(ls, i, CONNECTED),
                                2 => rs = with_digit(rs, i, CONNECTED),
                                _ => {}
                            }
                            c /= 3;
                        }
                        for j in 0..=self.budget {
                            let total = j + attacked;
                            for lj in attacked..=self.budget.min(total) {
                                let rj = total - lj;
                                if rj > self.budget {
                                    continue;
                                }
                                let (a, bv) = (tables.at(left, lj, ls), tables.at(right, rj, rs));
                                if a <= NEG || bv <= NEG {
                                    continue;
                                }
                                let v = a + bv - shared;
                                let cell = j * states + state as usize;
                                if v > values[cell] {
                                    values[cell] = v;
                                    choices[cell] = (lj as u64) << 48 | (ls as u64) << 24 | rs as u64;
                                }
                            }
                        }
                    }
                }
            }
        }
        (values, choices)
    }

    /// Child budget, child labels and gain for an introduce node, or `None`
    /// if the labels are infeasible.
    fn introduce(&self, v: Vertex, pos: usize, nbrs: &[usize], state: u32, j: usize) -> Option<(usize, u32, i32)> {
        let label = digit(state, pos);
        let child = remove_digit(state, pos);
        let child_pos = |i: usize| if i > pos { i - 1 } else { i };
        match label {
            ATTACKED => j.checked_sub(1).map(|cj| (cj, child, 1)),
            DISABLED => {
                let ok = !self.controller[v] && nbrs.iter().all(|&i| digit(state, i) < SURVIVING);
                ok.then_some((j, child, 1))
            }
            _ => {
                let live: Vec<usize> = nbrs.iter().copied().filter(|&i| digit(state, i) != ATTACKED).collect();
                let anchored = self.controller[v] || label == CONNECTED;
                match self.rules {
                    Rules::Sound => {
                        if live.iter().any(|&i| digit(state, i) == DISABLED) || (!anchored && live.is_empty()) {
                            return None;
                        }
                        let child = live.iter().fold(child, |s, &i| with_digit(s, child_pos(i), CONNECTED));
                        Some((j, child, 0))
                    }
                    Rules::Naive => {
                        if anchored {
                            if live.iter().any(|&i| digit(state, i) == DISABLED) {
                                return None;
                            }
                            let child = live.iter().fold(child, |s, &i| with_digit(s, child_pos(i), CONNECTED));
                            Some((j, child, 0))
                        } else {
                            live.iter().any(|&i| digit(state, i) >= SURVIVING).then_some((j, child, 0))
                        }
                    }
                }
            }
        }
    }

    /// Attacked vertices of an optimal root cell.
    fn witness(&self, tables: &Tables) -> Vec<Vertex> {
        let mut attack = Vec::new();
        let mut stack = vec![(self.ntd.root(), self.budget, 0u32)];
        while let Some((t, j, state)) = stack.pop() {
            let node = &self.ntd.nodes[t];
            let states = 1usize << (2 * node.bag.len());
            match node.kind {
                NodeKind::Leaf => {}
                NodeKind::Introduce { vertex, child } => {
                    let pos = node.bag.binary_search(&vertex).unwrap();
                    let nbrs = self.bag_neighbors(&node.bag, vertex);
                    let (cj, cs, _) = self.introduce(vertex, pos, &nbrs, state, j).expect("feasible cell");
                    if digit(state, pos) == ATTACKED {
                        attack.push(vertex);
                    }
                    stack.push((child, cj, cs));
                }
                NodeKind::Forget { vertex, child } => {
                    let pos = self.ntd.nodes[child].bag.binary_search(&vertex).unwrap();
                    let d = tables.choices[t][j * states + state as usize] as u32;
                    stack.push((child, j, insert_digit(state, pos, d)));
                }
                NodeKind::Join { left, right } => {
                    let packed = tables.choices[t][j * states + state as usize];
                    let lj = (packed >> 48) as usize;
                    let ls = ((packed >> 24) & 0xff_ffff) as u32;
                    let rs = (packed & 0xff_ffff) as u32;
                    let attacked = (0..node.bag.len()).filter(|&i| digit(state, i) == ATTACKED).count();
                    stack.push((left, lj, ls));
                    stack.push((right, j + attacked - lj, rs));
                }
            }
        }
        attack.sort_unstable();
        attack.dedup();
        attack
    }
}

/// Exact attacker reply to `defense` with at most `l` attacks, computed over
/// the nice decomposition `ntd` of `g`.
pub fn treewidth_attacker_best_response(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    defense: &Defense,
    l: usize,
) -> Result<PureResponse<Attacker>, TreewidthError> {
    let (value, attack) = solve(g, ntd, defense, l, Rules::Sound)?;
    let strategy = Attack::new(attack, l)?;
    let report = payoff(g, defense, &strategy)?;
    assert_eq!(report.payoff_att, value, "recovered attack does not reach the table value");
    Ok(PureResponse { value, strategy, report })
}

/// Optimal payoff for every budget `0..=l`, read from one table run.
pub fn treewidth_attack_values(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    defense: &Defense,
    l: usize,
) -> Result<Vec<usize>, TreewidthError> {
    let solver = prepare(g, ntd, defense, l, Rules::Sound)?;
    let tables = solver.run();
    Ok((0..=l).map(|j| tables.at(ntd.root(), j, 0) as usize).collect())
}

/// Number of table cells per node, `4^|bag| (l + 1)`.
pub fn table_sizes(ntd: &NiceTreeDecomposition, l: usize) -> Vec<usize> {
    ntd.nodes.iter().map(|t| (1usize << (2 * t.bag.len())) * (l + 1)).collect()
}

pub(crate) fn solve(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    defense: &Defense,
    l: usize,
    rules: Rules,
) -> Result<(usize, Vec<Vertex>), TreewidthError> {
    let solver = prepare(g, ntd, defense, l, rules)?;
    let tables = solver.run();
    let value = tables.at(ntd.root(), solver.budget, 0);
    assert!(value >= 0, "the root cell is always feasible");
    let attack = match rules {
        Rules::Sound => solver.witness(&tables),
        Rules::Naive => Vec::new(),
    };
    Ok((value as usize, attack))
}

fn prepare<'a>(
    g: &'a Graph,
    ntd: &'a NiceTreeDecomposition,
    defense: &Defense,
    l: usize,
    rules: Rules,
) -> Result<Solver<'a>, TreewidthError> {
    defense.validate(g)?;
    ntd.validate(g)?;
    if ntd.width() > MAX_WIDTH {
        return Err(TreewidthError::TooWide { width: ntd.width(), max: MAX_WIDTH });
    }
    let mut controller = vec![false; g.n()];
    defense.vertices().iter().for_each(|&d| controller[d] = true);
    Ok(Solver { g, ntd, controller, budget: l, rules })
}
