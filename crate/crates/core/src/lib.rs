//! Exact solvers for the two-player zero-sum controller-placement game.
//!
//! A defender places at most `k` controllers on the vertices of a graph and an
//! attacker deletes at most `l` vertices. A vertex that was not deleted
//! survives when it can still reach a non-deleted controller; the defender's
//! payoff is the number of survivors and the attacker's payoff the number of
//! disabled vertices.
//!
//! The crate covers payoff evaluation ([`game`]), best responses against pure
//! and mixed opponents ([`response`]), polynomial attacker solvers for interval
//! graphs ([`interval`]) and bounded treewidth ([`treewidth`]), mixed game
//! values via exact linear programming and double oracle ([`equilibrium`]),
//! the leader/follower problems ([`sequential`]) and instance constructions
//! from classical hard problems ([`reductions`]).

pub mod bench;
pub mod brute;
pub mod equilibrium;
pub mod game;
pub mod generators;
pub mod graph;
pub mod interval;
pub mod rational;
pub mod reductions;
pub mod response;
pub mod sequential;
pub mod subsets;
pub mod treewidth;

pub use game::{Attack, Defense, MixedAttack, MixedDefense, PayoffReport};
pub use graph::{ComponentDecomposition, Graph, Vertex};
pub use rational::Rational;
