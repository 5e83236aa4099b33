//! Finite abelian groups, subgroups, quotients and additive set operations.

mod additive;
mod egz;
mod element_set;
mod group;
mod quotient;
mod subgroup;

pub use additive::{
    coset_plus_covering, find_coset_in, generated_bound_check, kneser_check, order_kappa_count,
    sumset, GeneratedBoundReport, KneserReport,
};
pub use egz::egz_witness;
pub use element_set::ElementSet;
pub(crate) use group::gcd;
pub use group::{
    groups_of_order, groups_up_to, invariant_factors, AbelianGroup, FiniteAbelianGroup,
    GroupElement,
};
pub use quotient::{psi, psi_with_representatives, QuotientGroup};
pub use subgroup::{
    enumerate_subgroups, enumerate_subgroups_capped, generated_subgroup, Coset, Subgroup,
    SubgroupLattice, DEFAULT_ORDER_CAP,
};
