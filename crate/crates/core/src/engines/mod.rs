//! Effective constructions over systems and names: operator application,
//! evaluation, conversions between flavors, and extraction of a metric
//! system from a recursive operator.

pub mod enumeration;
pub mod evaluate;
pub mod extract;
pub mod transform;

pub use enumeration::{
    apply_topological, build_r, derive_w, enum_apply, h_by_exhaustion, hk_closure, i_zero, EnumOperatorSet,
};
pub use evaluate::evaluate_metric;
pub use extract::{extract_metric_system, ConstantOperator, HalvingOperator, IdentityOperator, RecursiveOperator};
pub use transform::{intersection_fiber, intersection_h, metric_to_topological, topological_to_metric};
