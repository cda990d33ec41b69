//! Computational laboratory for spread Furstenberg sets and their relatives.
//!
//! The crate is organised by subsystem:
//!
//! * [`grassmann`]: subspaces and affine flats with the projector metric, Haar
//!   sampling, minimal rotations and the numerical distance-lemma suites.
//! * [`bounds`]: exact evaluation of every closed-form dimension bound.
//! * [`duality`]: point-hyperplane duality, projective maps and the
//!   spreadification pipeline.
//! * [`dimension`]: dyadic box counting, Cantor-type constructions and the
//!   sharpness examples.
//! * [`finitefield`]: exact Kakeya / spread Furstenberg checks over `F_q^n`.
//! * [`maximal`]: discretised tube averages and Kakeya maximal functions.
//!
//! Box-counting dimension is used throughout as the computable stand-in for
//! Hausdorff dimension. The two agree for the self-similar sets constructed
//! here; nothing in this crate claims to compute the Hausdorff dimension of an
//! arbitrary set.
//!
//! Monte Carlo loops run on rayon when the `parallel` feature is enabled
//! (the default). Every stochastic routine splits its work into fixed shards
//! with seeds derived from the caller's seed, so results do not depend on the
//! thread count or on the feature flag.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod dimension;
pub mod duality;
mod error;
pub mod exact;
pub mod finitefield;
pub mod grassmann;
pub mod io;
pub mod linalg;
pub mod maximal;
pub mod par;
pub mod rng;
pub mod tol;

pub use error::{LabError, Result};
