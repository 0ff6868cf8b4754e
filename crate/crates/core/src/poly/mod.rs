//! Univariate, multilinear and degree-capped polynomials, and exact real
//! root analysis.

mod capped;
mod multilinear;
mod roots;
mod univariate;

pub use capped::CappedPoly;
pub use multilinear::{
    apply_diff_operator, mask_to_set, multilinear_det, set_to_mask, truncated_power, Algebra, Multilinear,
    MultilinearPoly, TruncatedMultilinear, MAX_VARS,
};
pub use roots::{
    convex_combinations_real_rooted, count_roots_at_least, has_common_interlacer, interlaces, is_real_rooted,
    isolate_real_roots, max_root, real_roots, sorted_roots_with_repetition, IsolatedRoot, ROOT_WIDTH, TIE_TOL,
};
pub use univariate::{Poly, UniPoly};
