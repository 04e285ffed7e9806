use std::time::{Duration, Instant};

use serde::Serialize;

use crate::game::{Attack, Defense};
use crate::graph::Graph;
use crate::rational::{self, Rational};
use crate::response::{attacker_best_response_mixed, defender_best_response_mixed};

use super::{mixed_pair, solve_zero_sum, EquilibriumError, GameValueResult, PayoffMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleOracleLimits {
    pub max_iterations: usize,
    pub time_limit: Option<Duration>,
    pub record_trace: bool,
}

impl Default for DoubleOracleLimits {
    fn default() -> Self {
        DoubleOracleLimits { max_iterations: 10_000, time_limit: None, record_trace: false }
    }
}

/// One restricted game of the loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub rows: usize,
    pub cols: usize,
    #[serde(with = "rational::serde_str")]
    pub restricted_value: Rational,
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
}

/// Column and row generation from the smallest pure strategies. Each round
/// solves the restricted game and adds the exact best response of either
/// player when it strictly beats the restricted value.
pub fn double_oracle_value(
    g: &Graph,
    k: usize,
    l: usize,
    limits: DoubleOracleLimits,
) -> Result<GameValueResult, EquilibriumError> {
    let deadline = limits.time_limit.map(|t| (Instant::now(), t));
    let n = rational::int(g.n() as i64);
    let first = |budget: usize| (0..budget.min(g.n())).collect::<Vec<_>>();
    let mut rows = vec![Defense::new(first(k), k)?];
    let mut cols = vec![Attack::new(first(l), l)?];
    let mut matrix = PayoffMatrix::build(g, rows.clone(), cols.clone())?;
    let mut trace = Vec::new();
    let mut iteration = 0;
    loop {
        iteration += 1;
        let solution = solve_zero_sum(&matrix.rational_entries());
        let (md, ma) = mixed_pair(&matrix, &solution)?;
        let def = defender_best_response_mixed(g, &ma, k)?;
        let att = attacker_best_response_mixed(g, &md, l)?;
        let lower = &n - &att.value;
        let upper = def.value.clone();
        assert!(
            lower <= solution.value && solution.value <= upper,
            "restricted value outside the best-response bracket"
        );
        if limits.record_trace {
            trace.push(IterationRecord {
                iteration,
                rows: rows.len(),
                cols: cols.len(),
                restricted_value: solution.value.clone(),
                lower: lower.clone(),
                upper: upper.clone(),
            });
        }
        let improve_def = upper > solution.value;
        let improve_att = lower < solution.value;
        let converged = !improve_def && !improve_att;
        let out_of_time = deadline.is_some_and(|(start, t)| start.elapsed() >= t);
        if converged || iteration >= limits.max_iterations || out_of_time {
            return Ok(GameValueResult {
                support_sizes: (md.len(), ma.len()),
                strategy_counts: (rows.len(), cols.len()),
                bounds: (lower, upper),
                value: solution.value,
                defense: md,
                attack: ma,
                iterations: iteration,
                converged,
                trace: limits.record_trace.then_some(trace),
            });
        }
        if improve_def {
            let d = Defense::new(def.strategy.into_vertices(), k)?;
            if rows.contains(&d) {
                return Err(EquilibriumError::DuplicateStrategy { player: "defender", vertices: d.into_vertices() });
            }
            rows.push(d);
        }
        if improve_att {
            let a = Attack::new(att.strategy.into_vertices(), l)?;
            if cols.contains(&a) {
                return Err(EquilibriumError::DuplicateStrategy { player: "attacker", vertices: a.into_vertices() });
            }
            cols.push(a);
        }
        matrix = PayoffMatrix::build(g, rows.clone(), cols.clone())?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{full_enumeration_value, verify_equilibrium, DEFAULT_ENTRY_CAP};
    use crate::rational::ratio;
    use crate::response::defender_best_response;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn clique(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn path_matches_full_enumeration() {
        let g = path(3);
        let r = double_oracle_value(&g, 1, 1, DoubleOracleLimits::default()).unwrap();
        let full = full_enumeration_value(&g, 1, 1, DEFAULT_ENTRY_CAP).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, full.value);
        assert!(verify_equilibrium(&g, 1, 1, &r.defense, &r.attack).unwrap().is_equilibrium);
    }

    #[test]
    fn k4_needs_every_pair() {
        let r = double_oracle_value(&clique(4), 2, 2, DoubleOracleLimits::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, ratio(5, 3));
        assert_eq!(r.support_sizes, (6, 6));
        assert!(r.strategy_counts.1 >= 6);
    }

    #[test]
    fn no_attack_budget_is_one_round() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        let r = double_oracle_value(&g, 2, 0, DoubleOracleLimits::default()).unwrap();
        // the initial defense {0, 1} is improved once, then the game is solved
        let expect = defender_best_response(&g, &Attack::empty(0), 2).unwrap().value;
        assert_eq!(r.value, rational::int(expect as i64));
        let g = path(4);
        let r = double_oracle_value(&g, 1, 0, DoubleOracleLimits::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.value, rational::int(4));
    }

    #[test]
    fn iteration_limit_reports_bracket() {
        let limits = DoubleOracleLimits { max_iterations: 1, record_trace: true, ..Default::default() };
        let r = double_oracle_value(&clique(4), 2, 2, limits).unwrap();
        assert!(!r.converged);
        assert!(r.bounds.0 <= ratio(5, 3) && ratio(5, 3) <= r.bounds.1);
        assert_eq!(r.trace.unwrap().len(), 1);
    }
}
