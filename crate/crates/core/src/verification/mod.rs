//! Grid verification of the auxiliary-function machinery and norm lower bounds.

pub mod lemma;
pub mod norm;

pub use lemma::{f_function, g_aux, k_poly, sample_in_region, verify_lemma, LemmaReport};
pub use norm::{
    ascend_norm, ladder_estimate, lower_bound_ratio, test_function_norm_pow, truncated_ratio,
    Achiever, AscentOptions, LowerBound, NormEstimate,
};
