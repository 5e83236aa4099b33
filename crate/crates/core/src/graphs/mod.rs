//! Target graphs, the edge-gcd statistics, and blueprint-pair extraction.

mod blueprint;
pub mod generate;
mod graph;

pub use blueprint::{
    candidate_pairs, extract_blueprints, maximal_nonoverlapping, plan_violations, Blueprint,
    BlueprintPair, BlueprintPlan, PartKind,
};
pub use graph::{kappa_of, Graph};
