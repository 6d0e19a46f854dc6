//! Concrete multilinear forms on finite sections of `c0`: evaluation, sup
//! norms, weak `l1` norms, coefficient and summing-norm checks, and Khinchine
//! ratios.

mod bh;
mod dps;
mod form;
mod khinchine_mc;
mod sup_norm;

pub use bh::{bh_lhs, bh_ratio, summing_lower_bound, summing_value, BhRatio, SummingLowerBound, Verdict, BH_REL_TOL};
pub use dps::{dps_mixed_diagnostic, dps_sides, DpsOptions, DpsReport};
pub use form::{weak_l1_norm, MultilinearForm, VectorFamily};
pub use khinchine_mc::{
    khinchine_exact_small, khinchine_mc, KhinchineEstimate, COMPLEX_QUADRATURE_POINTS, EXACT_COMPLEX_MAX_LEN,
    EXACT_REAL_MAX_LEN, MIN_SAMPLES,
};
pub use sup_norm::{exact_pattern_count, sup_norm, sup_norm_auto, SupNorm, SupNormMethod, SupNormOptions};
