//! Exact determinantal matrices for the unmixed sparse resultant of four
//! trivariate Laurent polynomials.
//!
//! The pipeline: pick a facet selection whose union is a disk ([`shelling`]),
//! build the linear strand map `phi_2` and resolve it two steps over the
//! exterior algebra ([`exterior`], [`tate`]), then substitute brackets and
//! coefficients ([`bracket`]). [`ehrhart`] predicts sizes and degrees and
//! [`verify`] holds independent oracles.

pub mod bracket;
pub mod ehrhart;
pub mod error;
pub mod exterior;
pub mod geometry;
pub mod linalg;
pub mod shelling;
pub mod tate;
pub mod verify;

pub use error::{Error, Result};
