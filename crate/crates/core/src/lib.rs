//! Numerical geometry kernels for positive biorthogonal curvature checks.
//!
//! The crate builds two families of Riemannian metrics, evaluates their
//! curvatures with an algebraic engine and an independent finite-difference
//! engine, and provides the searches and certificates used by the
//! `biorth-scan` command line tool:
//!
//! * [`wilking`]: the almost positively curved metric on `S^2 x S^3`
//!   obtained from `Sp(1) x Sp(1)` by the doubling construction;
//! * [`conformal`]: conformal deformations of that metric concentrated
//!   near the four 2-spheres of flat planes;
//! * [`wu`]: the normal symmetric metric on `SU(3)/SO(3)`, its flats and
//!   an interval-arithmetic proof that no two flats are orthogonal.
//!
//! The crate is `no_std` (it needs `alloc`). Scans take an
//! [`exec::Executor`] so that a host crate can run them in parallel.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod grassmann;
pub mod linalg;
pub mod optimize;
pub mod tolerances;
pub mod conformal;
pub mod wilking;
pub mod wu;

pub use error::{Error, Result};
pub use tolerances::{Tolerances, TOL};
