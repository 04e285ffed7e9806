//! Leader/follower problems: the leader commits to a pure strategy and the
//! follower replies optimally. Both solvers enumerate leader moves in
//! shortlex order and ask an exact follower oracle.

use serde::Serialize;
use thiserror::Error;

use crate::game::{Attack, Defense, GameError};
use crate::graph::{Graph, Vertex};
use crate::response::{attacker_best_response, attacker_value_until, defender_best_response, ResponseError};
use crate::subsets::{count_up_to, subsets_up_to};

/// Default bound on the number of leader moves.
pub const DEFAULT_LEADER_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentialError {
    #[error("{count} leader strategies exceed the enumeration cap of {cap}")]
    CapExceeded { count: u64, cap: u64 },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Response(#[from] ResponseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Leader {
    Defender,
    Attacker,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequentialResult {
    pub leader: Leader,
    pub leader_strategy: Vec<Vertex>,
    /// Leader's payoff against the follower's best reply.
    pub guaranteed_value: usize,
    pub follower_strategy: Vec<Vertex>,
    /// Leader moves evaluated before the answer was settled.
    pub leaders_examined: u64,
}

impl SequentialResult {
    pub fn meets(&self, threshold: usize) -> bool {
        self.guaranteed_value >= threshold
    }
}

/// Best defense when the attacker moves second: maximizes
/// `min_A payoff(D, A)` over defenses of size at most `k`.
pub fn best_first_defense(g: &Graph, k: usize, l: usize, cap: u64) -> Result<SequentialResult, SequentialError> {
    defense_search(g, k, l, cap, None)
}

/// Stops at the first defense guaranteeing at least `threshold`; the result
/// meets the threshold iff some defense does.
pub fn first_defense_reaching(
    g: &Graph,
    k: usize,
    l: usize,
    threshold: usize,
    cap: u64,
) -> Result<SequentialResult, SequentialError> {
    defense_search(g, k, l, cap, Some(threshold))
}

fn defense_search(
    g: &Graph,
    k: usize,
    l: usize,
    cap: u64,
    threshold: Option<usize>,
) -> Result<SequentialResult, SequentialError> {
    let count = count_up_to(g.n(), k);
    if count > cap {
        return Err(SequentialError::CapExceeded { count, cap });
    }
    let n = g.n();
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    let mut examined = 0;
    for d in subsets_up_to(n, k) {
        examined += 1;
        // an attack reaching n - best already rules this defense out
        let stop_at = best.as_ref().map_or(n + 1, |(b, _)| n - b);
        let (attack_value, _) = attacker_value_until(g, &d, l, stop_at);
        if attack_value < stop_at {
            best = Some((n - attack_value, d));
        }
        let reached = best.as_ref().map(|(b, _)| *b);
        if reached == Some(n) || (threshold.is_some() && reached >= threshold) {
            break;
        }
    }
    let (guaranteed_value, d) = best.expect("the empty defense is always examined");
    let reply = attacker_best_response(g, &Defense::new(d.clone(), k)?, l)?;
    debug_assert_eq!(n - reply.value, guaranteed_value);
    Ok(SequentialResult {
        leader: Leader::Defender,
        leader_strategy: d,
        guaranteed_value,
        follower_strategy: reply.strategy.into_vertices(),
        leaders_examined: examined,
    })
}

/// Best attack when the defender moves second: maximizes
/// `min_D payoff_att(D, A)` over attacks of size at most `l`.
pub fn best_first_attack(g: &Graph, k: usize, l: usize, cap: u64) -> Result<SequentialResult, SequentialError> {
    attack_search(g, k, l, cap, None)
}

/// Stops at the first attack guaranteeing at least `threshold`.
pub fn first_attack_reaching(
    g: &Graph,
    k: usize,
    l: usize,
    threshold: usize,
    cap: u64,
) -> Result<SequentialResult, SequentialError> {
    attack_search(g, k, l, cap, Some(threshold))
}

fn attack_search(
    g: &Graph,
    k: usize,
    l: usize,
    cap: u64,
    threshold: Option<usize>,
) -> Result<SequentialResult, SequentialError> {
    let count = count_up_to(g.n(), l);
    if count > cap {
        return Err(SequentialError::CapExceeded { count, cap });
    }
    let n = g.n();
    let mut best: Option<(usize, Vec<Vertex>, Vec<Vertex>)> = None;
    let mut examined = 0;
    for a in subsets_up_to(n, l) {
        examined += 1;
        let reply = defender_best_response(g, &Attack::new(a.clone(), l)?, k)?;
        let guarantee = n - reply.value;
        if best.as_ref().is_none_or(|(b, _, _)| guarantee > *b) {
            best = Some((guarantee, a, reply.strategy.into_vertices()));
        }
        let reached = best.as_ref().map(|(b, _, _)| *b);
        if reached == Some(n) || (threshold.is_some() && reached >= threshold) {
            break;
        }
    }
    let (guaranteed_value, a, d) = best.expect("the empty attack is always examined");
    Ok(SequentialResult {
        leader: Leader::Attacker,
        leader_strategy: a,
        guaranteed_value,
        follower_strategy: d,
        leaders_examined: examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn path_examples() {
        // the attacker removes the only controller, whatever it guards
        let r = best_first_defense(&path(3), 1, 1, DEFAULT_LEADER_CAP).unwrap();
        assert_eq!(r.guaranteed_value, 0);
        assert_eq!(r.guaranteed_value, brute::pure_maximin(&path(3), 1, 1));
        assert!(r.leader_strategy.is_empty());
        let r = best_first_defense(&path(3), 2, 1, DEFAULT_LEADER_CAP).unwrap();
        assert_eq!((r.guaranteed_value, r.leader_strategy), (2, vec![0, 2]));

        let r = best_first_attack(&path(3), 1, 1, DEFAULT_LEADER_CAP).unwrap();
        assert_eq!(r.guaranteed_value, 2);
        assert_eq!(r.leader_strategy, vec![1]);
    }

    #[test]
    fn no_attack_budget() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let r = best_first_defense(&g, 2, 0, DEFAULT_LEADER_CAP).unwrap();
        assert_eq!(r.guaranteed_value, defender_best_response(&g, &Attack::empty(0), 2).unwrap().value);
        let r = best_first_attack(&g, 2, 0, DEFAULT_LEADER_CAP).unwrap();
        assert_eq!(r.guaranteed_value, 6 - 5);
        assert!(r.leader_strategy.is_empty());
    }

    #[test]
    fn agrees_with_pure_maximin_and_minimax() {
        let graphs = [
            path(5),
            Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap(),
            Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)]).unwrap(),
        ];
        for g in &graphs {
            for k in 0..=2 {
                for l in 0..=2 {
                    let d = best_first_defense(g, k, l, DEFAULT_LEADER_CAP).unwrap();
                    assert_eq!(d.guaranteed_value, brute::pure_maximin(g, k, l));
                    let a = best_first_attack(g, k, l, DEFAULT_LEADER_CAP).unwrap();
                    assert_eq!(g.n() - a.guaranteed_value, brute::pure_minimax(g, k, l));
                }
            }
        }
    }

    #[test]
    fn threshold_variants() {
        let g = path(5);
        let r = first_defense_reaching(&g, 2, 1, 2, DEFAULT_LEADER_CAP).unwrap();
        assert!(r.meets(2));
        let best = best_first_defense(&g, 2, 1, DEFAULT_LEADER_CAP).unwrap();
        let r = first_defense_reaching(&g, 2, 1, best.guaranteed_value + 1, DEFAULT_LEADER_CAP).unwrap();
        assert!(!r.meets(best.guaranteed_value + 1));
        assert_eq!(r, best);
        let r = first_attack_reaching(&g, 1, 1, 3, DEFAULT_LEADER_CAP).unwrap();
        assert!(r.meets(3));
    }

    #[test]
    fn cap() {
        assert_eq!(
            best_first_defense(&path(10), 2, 1, 10),
            Err(SequentialError::CapExceeded { count: 56, cap: 10 })
        );
    }
}
