//! Statistical characterization and statistically sensitive decimation of
//! two-phase binary images.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`image`]: the binary raster type and phase bookkeeping,
//! * [`generators`]: seeded synthetic materials (disk packings and level-cut
//!   Laplacian-of-Gaussian fields),
//! * [`descriptors`]: two-point, lineal-path, pore-size and coarseness
//!   descriptors in their normalized forms,
//! * [`decimation`]: random, bilinear and bicubic halving and the decimation
//!   ladder,
//! * [`analysis`]: descriptor deviations, global error, correlation lengths,
//!   the optimal number of decimation steps and the automatic pipeline.
//!
//! File formats, ensemble orchestration and the command-line tool live in the
//! `statdecim` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod decimation;
pub mod descriptors;
pub mod edt;
mod error;
pub mod generators;
pub mod image;

pub use analysis::{
    auto_decimate, correlation_length, deviation, ensemble_stats, global_error, optimal_steps,
    AutoDecimation, CorrelationLength, DEFAULT_BAND,
};
pub use decimation::{build_ladder, decimate_step, Ladder, Method};
pub use descriptors::{characterize, Boundary, Descriptor, DescriptorCurve, DescriptorSet};
pub use error::{Axis, Error, Result};
pub use image::{BinaryImage, Phase};
