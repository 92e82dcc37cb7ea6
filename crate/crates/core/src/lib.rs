//! Allowed, forbidden and basic forbidden consecutive patterns of
//! one-dimensional interval maps.
//!
//! Piecewise-linear maps are handled exactly over arbitrary-precision
//! rationals; smooth maps such as the logistic family are sampled in floating
//! point and only ever yield lower bounds on the allowed set.

pub mod avoid;
pub mod bounds;
pub mod cache;
pub mod checks;
pub mod cli;
pub mod engine;
pub mod error;
pub mod limits;
pub mod mapspec;
pub mod numeric;
pub mod orbit;
pub mod perm;
pub mod pwl;

pub use avoid::{avoiders, count_avoiders};
pub use engine::{
    exact_allowed, exact_basic_forbidden, exact_forbidden, is_allowed, shortest_forbidden_length,
};
pub use error::{Error, Result};
pub use limits::Limits;
pub use numeric::{NumericMap, SampleConfig};
pub use orbit::{orbit_linearization, OrbitLinearization};
pub use perm::{contains, is_antichain, reduce, Antichain, PatternSet, Permutation};
pub use pwl::{Orientation, PwlMap, Rational};

/// Version tag recorded in reports and cache keys.
pub const ENGINE_VERSION: &str = concat!("patlab-", env!("CARGO_PKG_VERSION"));
