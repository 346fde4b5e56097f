//! Exchangeable random partitions of the extended two-parameter family:
//! exact EPPF evaluation, seeded samplers, deletion kernels, regenerative
//! interval sets, and an exhaustive small-`n` oracle.

pub mod cli;
pub mod deletion;
pub mod eppf;
pub mod error;
pub mod frequency;
pub mod interval;
pub mod oracle;
pub mod params;
pub mod partition;
pub mod regen;
pub mod rng;
pub mod samplers;
pub mod scalar;

pub use error::{Error, Result};
pub use frequency::{FrequencyVector, RankedFrequencies, ResidualFractions};
pub use interval::IntervalSet;
pub use params::{ExtParams, Xi};
pub use partition::{Composition, SetPartition};
pub use rng::RngHandle;
pub use scalar::{Rational, Scalar};
