//! Finite simulation of the coloring poset and the control poset.

mod conditions;
mod control;
mod predense;

pub use conditions::{check_suitable_proper, p_compatible, p_conflict, p_leq, p_lower_bound, PCondition, PConflict};
pub use control::{
    compatible_tail, liminf_thin, q_compatible, q_conflict, q_meet, ramsey_bound, ramsey_compatible_subset,
    ramsey_pair_color, Location, QCondition, QConflict, RamseySubset, Thinning,
};
pub use predense::{
    predense_check, predense_check_reduced, predense_reduce, reduced_points, required_arity, sufficient_budget,
    uncovered_condition, Reduction, DEFAULT_ORACLE_LIMIT,
};
