//! Tree decompositions and the attacker best response of bounded width.

mod decomposition;
mod dp;
mod heuristic;
mod nice;

pub use decomposition::{parse_tree_decomposition, TdError, TreeDecomposition};
pub use dp::{table_sizes, treewidth_attack_values, treewidth_attacker_best_response, TreewidthError, MAX_WIDTH};
pub use heuristic::{heuristic_tree_decomposition, EliminationRule};
pub use nice::{make_nice, make_nice_rooted, NiceNode, NiceTreeDecomposition, NodeKind};
