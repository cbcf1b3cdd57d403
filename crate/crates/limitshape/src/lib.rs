//! Limit shapes of uniformly random square Young tableaux and of plane
//! partitions with a fixed square support.
//!
//! The crate is organised bottom-up:
//!
//! - [`diagrams`]: partitions, cells, hooks, exact dimensions.
//! - [`sampler`]: hook walks, uniform tableaux, RSK, cotransition measures.
//! - [`surfaces`]: the limit surface `L`, its level curves and relatives.
//! - [`variational`]: the hook-integral functional and its minimisers.
//! - [`partitions1d`]: restricted partition counting and plane partitions.
//! - [`stats`]: statistics linking samples to the limit objects, and the
//!   pre-registered verification suites.

pub mod diagrams;
pub mod error;
pub mod partitions1d;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod surfaces;
pub mod variational;

pub use error::{Error, Result};
