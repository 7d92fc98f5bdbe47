//! Convex-hull seeded K-means.
//!
//! The crate is organised the way the pipeline runs:
//!
//! * [`data`] loads delimited datasets and generates seeded Gaussian blobs.
//! * [`reduce`] fits PCA and optionally standardizes attributes.
//! * [`geometry`] computes 2-D convex hulls and farthest pairs.
//! * [`init`] selects initial centroids: hull/farthest-pair seeding with
//!   nearest-neighbor discard, or a seeded random baseline.
//! * [`kmeans`] runs Lloyd iterations.
//! * [`metrics`] scores a clustering: matched error, CCPI and Rand index.
//! * [`pipeline`], [`report`] and [`svg`] back the `hullmeans` CLI.

pub mod data;
pub mod error;
pub mod geometry;
pub mod init;
pub mod kmeans;
pub mod matrix;
pub mod metrics;
pub mod pipeline;
pub mod reduce;
pub mod report;
pub mod svg;

mod assignment;

pub use error::{Error, Result};
pub use matrix::{CentroidSet, DataMatrix};
