//! Lattice-point discrepancy laboratory for rotated convex planar domains of
//! finite type.
//!
//! The crate counts lattice points of dilates `tB_θ` exactly, evaluates the
//! Fourier transform of the indicator `χ̂_{B_θ}` numerically and through its
//! curvature-explicit asymptotics, assembles mollified counts by truncated
//! Poisson summation, and provides the Weyl–van der Corput differencing
//! machinery for two-dimensional exponential sums. The [`experiments`]
//! module drives remainder-exponent studies from the `latdisc` CLI.

pub mod config;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod expsum;
pub mod fourier;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod oscillatory;
pub mod poisson;
pub mod quadrature;
pub mod stats;

pub use config::DomainSpec;
pub use counting::{count_brute, count_exact, CountResult};
pub use error::{Error, Result};
pub use geometry::{BoundaryPoint, FlatPoint, Region, RotatedDomain, Superellipse};
pub use linalg::Vec2;

/// Library version string, embedded in output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
