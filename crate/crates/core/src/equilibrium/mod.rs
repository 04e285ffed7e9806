//! Mixed-strategy game values: exact matrix games over enumerated strategy
//! sets and the double-oracle loop.

mod double_oracle;
mod simplex;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::game::{payoff, Attack, Defense, GameError, MixedAttack, MixedDefense};
use crate::graph::{Graph, Vertex};
use crate::rational::{self, Rational};
use crate::response::{attacker_best_response_mixed, defender_best_response_mixed, ResponseError};
use crate::subsets::{count_up_to, subsets_up_to};

pub use double_oracle::{double_oracle_value, DoubleOracleLimits, IterationRecord};
pub use simplex::{solve_zero_sum, MatrixSolution};

/// Default bound on the number of matrix entries for full enumeration.
pub const DEFAULT_ENTRY_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquilibriumError {
    #[error("payoff matrix is empty")]
    EmptyMatrix,
    #[error("payoff matrix rows have different lengths")]
    RaggedMatrix,
    #[error("full enumeration needs {entries} matrix entries, above the cap of {cap}; use double oracle")]
    CapExceeded { entries: u64, cap: u64 },
    #[error("{player} best response {vertices:?} reported an improvement but is already in the restricted game")]
    DuplicateStrategy { player: &'static str, vertices: Vec<Vertex> },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Response(#[from] ResponseError),
}

/// Defender payoffs of every row defense against every column attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrix {
    pub rows: Vec<Defense>,
    pub cols: Vec<Attack>,
    pub entries: Vec<Vec<usize>>,
}

impl PayoffMatrix {
    pub fn build(g: &Graph, rows: Vec<Defense>, cols: Vec<Attack>) -> Result<Self, EquilibriumError> {
        let mut entries = Vec::with_capacity(rows.len());
        for d in &rows {
            let row = cols.iter().map(|a| payoff(g, d, a).map(|r| r.payoff_def)).collect::<Result<Vec<_>, _>>()?;
            entries.push(row);
        }
        Ok(PayoffMatrix { rows, cols, entries })
    }

    /// All defenses of size at most `k` against all attacks of size at most `l`.
    pub fn full(g: &Graph, k: usize, l: usize) -> Result<Self, EquilibriumError> {
        let rows = subsets_up_to(g.n(), k).map(|d| Defense::new(d, k)).collect::<Result<_, _>>()?;
        let cols = subsets_up_to(g.n(), l).map(|a| Attack::new(a, l)).collect::<Result<_, _>>()?;
        Self::build(g, rows, cols)
    }

    fn rational_entries(&self) -> Vec<Vec<Rational>> {
        self.entries.iter().map(|r| r.iter().map(|&e| rational::int(e as i64)).collect()).collect()
    }
}

/// Value and optimal mixed strategies of a (possibly restricted) game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameValueResult {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub defense: MixedDefense,
    pub attack: MixedAttack,
    /// Restricted games solved; 1 for full enumeration.
    pub iterations: usize,
    pub support_sizes: (usize, usize),
    /// Pure strategies in the final matrix, rows then columns.
    pub strategy_counts: (usize, usize),
    pub converged: bool,
    /// Proven bracket for the true value; both ends equal `value` on
    /// convergence.
    #[serde(with = "rational_pair")]
    pub bounds: (Rational, Rational),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<IterationRecord>>,
}

mod rational_pair {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(pair: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
        [rational::format(&pair.0), rational::format(&pair.1)].serialize(s)
    }
}

/// Solves the matrix game of `m`; zero-probability strategies are dropped.
pub fn solve_matrix_game(m: &PayoffMatrix) -> Result<GameValueResult, EquilibriumError> {
    if m.rows.is_empty() || m.cols.is_empty() {
        return Err(EquilibriumError::EmptyMatrix);
    }
    if m.entries.len() != m.rows.len() || m.entries.iter().any(|r| r.len() != m.cols.len()) {
        return Err(EquilibriumError::RaggedMatrix);
    }
    let solution = solve_zero_sum(&m.rational_entries());
    let (defense, attack) = mixed_pair(m, &solution)?;
    Ok(GameValueResult {
        support_sizes: (defense.len(), attack.len()),
        strategy_counts: (m.rows.len(), m.cols.len()),
        bounds: (solution.value.clone(), solution.value.clone()),
        value: solution.value,
        defense,
        attack,
        iterations: 1,
        converged: true,
        trace: None,
    })
}

pub(crate) fn mixed_pair(
    m: &PayoffMatrix,
    solution: &MatrixSolution,
) -> Result<(MixedDefense, MixedAttack), EquilibriumError> {
    let k = m.rows.iter().map(Defense::budget).max().unwrap_or(0);
    let l = m.cols.iter().map(Attack::budget).max().unwrap_or(0);
    let rows = m.rows.iter().zip(&solution.row).filter(|(_, p)| !p.is_zero());
    let cols = m.cols.iter().zip(&solution.col).filter(|(_, p)| !p.is_zero());
    let defense = MixedDefense::new(rows.map(|(d, p)| (d.vertices().to_vec(), p.clone())).collect(), k)?;
    let attack = MixedAttack::new(cols.map(|(a, p)| (a.vertices().to_vec(), p.clone())).collect(), l)?;
    Ok((defense, attack))
}

/// Exact `val(G, k, l)` over all defenses of size at most `k` and attacks of
/// size at most `l`, refusing matrices with more than `cap` entries.
pub fn full_enumeration_value(g: &Graph, k: usize, l: usize, cap: u64) -> Result<GameValueResult, EquilibriumError> {
    let entries = count_up_to(g.n(), k).saturating_mul(count_up_to(g.n(), l));
    if entries > cap {
        return Err(EquilibriumError::CapExceeded { entries, cap });
    }
    solve_matrix_game(&PayoffMatrix::full(g, k, l)?)
}

/// A pure strategy that beats the opponent's side of a claimed equilibrium.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub player: &'static str,
    pub strategy: Vec<Vertex>,
    /// Deviator's expected payoff after deviating.
    #[serde(with = "rational::serde_str")]
    pub payoff: Rational,
    /// Deviator's expected payoff in the claimed equilibrium.
    #[serde(with = "rational::serde_str")]
    pub baseline: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumVerdict {
    pub is_equilibrium: bool,
    /// Expected defender payoff of the strategy pair.
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub defender_best_response: Vec<Vertex>,
    #[serde(with = "rational::serde_str")]
    pub defender_best_value: Rational,
    pub attacker_best_response: Vec<Vertex>,
    #[serde(with = "rational::serde_str")]
    pub attacker_best_value: Rational,
    pub violations: Vec<Deviation>,
}

/// Checks both equilibrium inequalities with exact best responses.
pub fn verify_equilibrium(
    g: &Graph,
    k: usize,
    l: usize,
    md: &MixedDefense,
    ma: &MixedAttack,
) -> Result<EquilibriumVerdict, EquilibriumError> {
    let value = crate::game::expected_payoff(g, md, ma)?;
    let n = rational::int(g.n() as i64);
    let def = defender_best_response_mixed(g, ma, k)?;
    let att = attacker_best_response_mixed(g, md, l)?;
    let mut violations = Vec::new();
    if def.value > value {
        violations.push(Deviation {
            player: "defender",
            strategy: def.strategy.vertices().to_vec(),
            payoff: def.value.clone(),
            baseline: value.clone(),
        });
    }
    let attacker_baseline = &n - &value;
    if att.value > attacker_baseline {
        violations.push(Deviation {
            player: "attacker",
            strategy: att.strategy.vertices().to_vec(),
            payoff: att.value.clone(),
            baseline: attacker_baseline,
        });
    }
    Ok(EquilibriumVerdict {
        is_equilibrium: violations.is_empty(),
        value,
        defender_best_response: def.strategy.into_vertices(),
        defender_best_value: def.value,
        attacker_best_response: att.strategy.into_vertices(),
        attacker_best_value: att.value,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn clique(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(full_enumeration_value(&path(2), 1, 1, DEFAULT_ENTRY_CAP).unwrap().value, ratio(1, 2));
        assert_eq!(full_enumeration_value(&path(3), 1, 0, DEFAULT_ENTRY_CAP).unwrap().value, int(3));
        assert_eq!(full_enumeration_value(&path(3), 0, 1, DEFAULT_ENTRY_CAP).unwrap().value, int(0));
    }

    #[test]
    fn k4_two_subsets() {
        let g = clique(4);
        let pairs: Vec<Vec<usize>> = crate::subsets::Combinations::new(4, 2).collect();
        let rows = pairs.iter().map(|d| Defense::tight(d.clone()).unwrap()).collect();
        let cols = pairs.iter().map(|a| Attack::tight(a.clone()).unwrap()).collect();
        let m = PayoffMatrix::build(&g, rows, cols).unwrap();
        for (i, row) in m.entries.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, if i == j { 0 } else { 2 });
            }
        }
        let r = solve_matrix_game(&m).unwrap();
        assert_eq!(r.value, ratio(5, 3));
        assert_eq!(r.support_sizes, (6, 6));
        assert!(r.defense.support().iter().all(|(_, p)| *p == ratio(1, 6)));

        let full = full_enumeration_value(&g, 2, 2, DEFAULT_ENTRY_CAP).unwrap();
        assert_eq!(full.value, ratio(5, 3));
        assert_eq!(full.support_sizes, (6, 6));
        assert!(full.attack.support().iter().all(|(a, p)| a.len() == 2 && *p == ratio(1, 6)));
    }

    #[test]
    fn cap_and_empty_matrix() {
        assert_eq!(
            full_enumeration_value(&path(10), 3, 3, 1000),
            Err(EquilibriumError::CapExceeded { entries: 176 * 176, cap: 1000 })
        );
        let m = PayoffMatrix { rows: vec![], cols: vec![], entries: vec![] };
        assert_eq!(solve_matrix_game(&m), Err(EquilibriumError::EmptyMatrix));
    }

    #[test]
    fn verification_examples() {
        let k2 = path(2);
        let md = MixedDefense::uniform(vec![vec![0], vec![1]], 1).unwrap();
        let ma = MixedAttack::uniform(vec![vec![0], vec![1]], 1).unwrap();
        let v = verify_equilibrium(&k2, 1, 1, &md, &ma).unwrap();
        assert!(v.is_equilibrium);
        assert_eq!(v.value, ratio(1, 2));

        let p3 = path(3);
        let md = MixedDefense::pure(&Defense::tight(vec![1]).unwrap());
        let ma = MixedAttack::pure(&Attack::tight(vec![1]).unwrap());
        let v = verify_equilibrium(&p3, 1, 1, &md, &ma).unwrap();
        assert!(!v.is_equilibrium);
        assert_eq!(v.violations[0].player, "defender");
        assert_eq!(v.violations[0].strategy, vec![0]);
        assert_eq!(v.violations[0].payoff, int(1));

        let single = Graph::empty(1);
        let md = MixedDefense::pure(&Defense::tight(vec![0]).unwrap());
        let ma = MixedAttack::pure(&Attack::tight(vec![0]).unwrap());
        let v = verify_equilibrium(&single, 1, 1, &md, &ma).unwrap();
        assert!(v.is_equilibrium);
        assert_eq!(v.value, int(0));
    }

    #[test]
    fn full_solutions_verify() {
        for g in [path(3), path(4), clique(3)] {
            for (k, l) in [(1, 1), (2, 1), (1, 2)] {
                let r = full_enumeration_value(&g, k, l, DEFAULT_ENTRY_CAP).unwrap();
                let v = verify_equilibrium(&g, k, l, &r.defense, &r.attack).unwrap();
                assert!(v.is_equilibrium, "{g:?} k={k} l={l}");
                assert_eq!(v.value, r.value);
            }
        }
    }
}
