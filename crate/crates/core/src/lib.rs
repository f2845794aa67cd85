//! Construction and repair of high-rate MDS storage codes with δ-optimal
//! access.
//!
//! The pipeline is:
//!
//! 1. [`code::vandermonde_code`] builds a scalar MDS base code over a prime
//!    field.
//! 2. [`transform::apply_transform`] turns an `(n', k')` code into an
//!    `(n' − δ, k' − δ)` code with `δ` times the sub-packetization in which two
//!    chosen nodes gain δ-optimal access.
//! 3. [`builder::build`] applies that `⌈n/2⌉` times so that every node of the
//!    final `(n, k)` code has δ-optimal access, and derives per-node repair
//!    plans.
//! 4. [`repair::repair`] rebuilds a failed node from `k + δ − 1` helpers,
//!    each sending `N/δ` symbols.
//!
//! [`cluster`] wraps all of this in a directory-backed storage simulation
//! used by the `mdsx` binary.

pub mod builder;
pub mod cluster;
pub mod code;
pub mod error;
pub mod field;
pub mod matrix;
pub mod repair;
pub mod subsets;
pub mod transform;

pub use builder::{build, build_with, AccessOptimalCode, BuildOptions, RepairPlan};
pub use code::{vandermonde_code, BlockParityCheckCode, Codeword, MdsReport};
pub use error::{Error, Result};
pub use field::Field;
pub use matrix::Matrix;
pub use repair::{audit, check_repair_systems, repair, BandwidthReport};
pub use transform::{apply_transform, TransformSpec};

/// Environment variable that fixes the seed of randomized sweeps.
pub const SEED_ENV: &str = "MDSX_SEED";

/// Seed for randomized sweeps: `MDSX_SEED` if set and numeric, else `default`.
pub fn sweep_seed(default: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}
