//! Exhaustive reference solvers. They enumerate every strategy within the
//! budget and exist to cross-check the real solvers; keep them free of any
//! pruning or decomposition.

use num_traits::Zero;

use crate::game::{payoff, Attack, Defense, MixedAttack, MixedDefense};
use crate::graph::{Graph, Vertex};
use crate::rational::Rational;
use crate::subsets::subsets_up_to;

/// Maximum attacker payoff against `defense` over all attacks of size at most
/// `budget`, with the shortlex-smallest maximizer.
pub fn best_attack(g: &Graph, defense: &[Vertex], budget: usize) -> (usize, Vec<Vertex>) {
    let d = Defense::tight(defense.to_vec()).expect("valid defense");
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    for a in subsets_up_to(g.n(), budget) {
        let value = payoff(g, &d, &Attack::tight(a.clone()).unwrap()).expect("in range").payoff_att;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, a));
        }
    }
    best.expect("the empty attack always exists")
}

/// Maximum defender payoff against `attack` over all defenses of size at most
/// `budget`, with the shortlex-smallest maximizer.
pub fn best_defense(g: &Graph, attack: &[Vertex], budget: usize) -> (usize, Vec<Vertex>) {
    let a = Attack::tight(attack.to_vec()).expect("valid attack");
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    for d in subsets_up_to(g.n(), budget) {
        let value = payoff(g, &Defense::tight(d.clone()).unwrap(), &a).expect("in range").payoff_def;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, d));
        }
    }
    best.expect("the empty defense always exists")
}

/// Expected attacker payoff maximization against a mixed defense.
pub fn best_attack_mixed(g: &Graph, md: &MixedDefense, budget: usize) -> (Rational, Vec<Vertex>) {
    let mut best: Option<(Rational, Vec<Vertex>)> = None;
    for a in subsets_up_to(g.n(), budget) {
        let attack = Attack::tight(a.clone()).unwrap();
        let mut value = Rational::zero();
        for (d, p) in md.support() {
            let r = payoff(g, &Defense::tight(d.clone()).unwrap(), &attack).expect("in range");
            value += p * Rational::from_integer(r.payoff_att.into());
        }
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, a));
        }
    }
    best.expect("the empty attack always exists")
}

/// Expected defender payoff maximization against a mixed attack.
pub fn best_defense_mixed(g: &Graph, ma: &MixedAttack, budget: usize) -> (Rational, Vec<Vertex>) {
    let mut best: Option<(Rational, Vec<Vertex>)> = None;
    for d in subsets_up_to(g.n(), budget) {
        let defense = Defense::tight(d.clone()).unwrap();
        let mut value = Rational::zero();
        for (a, q) in ma.support() {
            let r = payoff(g, &defense, &Attack::tight(a.clone()).unwrap()).expect("in range");
            value += q * Rational::from_integer(r.payoff_def.into());
        }
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, d));
        }
    }
    best.expect("the empty defense always exists")
}

/// `max_D min_A payoff` over pure strategies (defender commits first).
pub fn pure_maximin(g: &Graph, k: usize, l: usize) -> usize {
    subsets_up_to(g.n(), k)
        .map(|d| g.n() - best_attack(g, &d, l).0)
        .max()
        .expect("nonempty")
}

/// `min_A max_D payoff` over pure strategies (attacker commits first).
pub fn pure_minimax(g: &Graph, k: usize, l: usize) -> usize {
    subsets_up_to(g.n(), l)
        .map(|a| best_defense(g, &a, k).0)
        .min()
        .expect("nonempty")
}
