//! Reference materials: impenetrable (ID) and overlapping (OD) disk
//! packings and level-cut LoG media, scaled to a chosen image side.

use std::fmt;

use serde::{Deserialize, Serialize};
use statdecim_core::generators::{self, Disk, DiskSpec, DiskVariant, LogSpec};
use statdecim_core::BinaryImage;

use crate::error::Result;

/// Side length at which the reference disk counts are defined.
pub const REFERENCE_SIDE: usize = 4096;
pub const ID_DISKS: usize = 491;
pub const OD_DISKS: usize = 640;
pub const R_MIN: u32 = 1;
pub const R_MAX: u32 = 250;
pub const MU: f64 = 50.0;
pub const SIGMA: f64 = 60.0;
pub const LOG_KERNEL: usize = 75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Id,
    Od,
    Logk1,
    Logk2,
    Logk3,
}

impl Material {
    pub const ALL: [Material; 5] = [Material::Id, Material::Od, Material::Logk1, Material::Logk2, Material::Logk3];

    pub fn name(self) -> &'static str {
        match self {
            Material::Id => "id",
            Material::Od => "od",
            Material::Logk1 => "logk1",
            Material::Logk2 => "logk2",
            Material::Logk3 => "logk3",
        }
    }

    /// Generator settings for one realization at `side x side`. Disk counts
    /// scale with the area ratio to the reference side while radii are drawn
    /// from the reference radius histogram; radii and the LoG kernel keep
    /// their pixel sizes.
    pub fn spec(self, side: usize, seed: u64) -> MaterialSpec {
        let disks = |variant, reference| {
            MaterialSpec::Disks(DiskSpec {
                variant,
                disks: rescaled_disks(reference, side),
                histogram_disks: Some(reference),
                r_min: R_MIN,
                r_max: R_MAX,
                mu: MU,
                sigma: SIGMA,
                side,
                seed,
            })
        };
        let log = |threshold| MaterialSpec::Log(LogSpec { kernel: LOG_KERNEL, threshold, side, seed });
        match self {
            Material::Id => disks(DiskVariant::Impenetrable, ID_DISKS),
            Material::Od => disks(DiskVariant::Overlapping, OD_DISKS),
            Material::Logk1 => log(127.50),
            Material::Logk2 => log(127.00),
            Material::Logk3 => log(126.75),
        }
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `reference * (side / 4096)^2`, rounded, at least 1.
pub fn rescaled_disks(reference: usize, side: usize) -> usize {
    let ratio = side as f64 / REFERENCE_SIDE as f64;
    ((reference as f64 * ratio * ratio).round() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase")]
pub enum MaterialSpec {
    Disks(DiskSpec),
    Log(LogSpec),
}

impl MaterialSpec {
    pub fn seed(&self) -> u64 {
        match self {
            MaterialSpec::Disks(s) => s.seed,
            MaterialSpec::Log(s) => s.seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> MaterialSpec {
        let mut spec = self.clone();
        match &mut spec {
            MaterialSpec::Disks(s) => s.seed = seed,
            MaterialSpec::Log(s) => s.seed = seed,
        }
        spec
    }

    pub fn side(&self) -> usize {
        match self {
            MaterialSpec::Disks(s) => s.side,
            MaterialSpec::Log(s) => s.side,
        }
    }
}

/// A generated image with the disk records of disk packings.
#[derive(Debug, Clone)]
pub struct Generated {
    pub image: BinaryImage,
    pub disks: Vec<Disk>,
    /// Disks taken from the rounded radius histogram.
    pub from_histogram: Option<usize>,
    /// Disks drawn from the unrounded radius distribution to reach `I`.
    pub drawn: Option<usize>,
}

pub fn generate(spec: &MaterialSpec) -> Result<Generated> {
    Ok(match spec {
        MaterialSpec::Disks(s) => {
            let packing = generators::place_disks(s)?;
            Generated {
                image: packing.image,
                disks: packing.disks,
                from_histogram: Some(packing.from_histogram),
                drawn: Some(packing.drawn),
            }
        }
        MaterialSpec::Log(s) => Generated {
            image: generators::generate_log(s)?,
            disks: Vec::new(),
            from_histogram: None,
            drawn: None,
        },
    })
}
