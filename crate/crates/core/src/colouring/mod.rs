//! Group-valued colourings of vertex pools, gadgets, and well-behaved tuples.

mod edge;
mod gadget;
mod planted;
mod well_behaved;

pub use edge::{
    project_colouring, quotient_colouring, shift_colouring, star_sum, unshift_colouring,
    EdgeColouring, VertexColouring,
};
pub use gadget::{
    check_gadget, find_gadget, find_simple_gadget, BundleSizes, Gadget, GadgetContext,
    GadgetRequest, GadgetSearch, GadgetShape, DEFAULT_CANDIDATE_CAP,
};
pub use planted::planted_colouring;
pub use well_behaved::{
    is_well_behaved, normalize_t, WellBehavedParams, WellBehavedReport, WellBehavedTuple,
};
