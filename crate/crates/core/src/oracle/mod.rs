//! Exhaustive small-`n` laws, exact characterization checks and
//! goodness-of-fit statistics.

pub mod checks;
pub mod enumerate;
pub mod law;
pub mod stats;

pub use checks::{
    deletion_law_check, leem_check, order_probability_check, record_independence_check, tau_regen_check,
};
pub use enumerate::{bell, enumerate_partitions, partitions};
pub use law::{exact_law, ExactLaw};
pub use stats::{chi_square, chi_square_counts, ks_two_sample, monte_carlo, tally, ChiSquare};
