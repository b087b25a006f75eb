//! Information loss along a decimation ladder and selection of the optimal
//! number of decimation steps.

use alloc::vec;
use alloc::vec::Vec;

use crate::decimation::{build_ladder, Ladder, Method};
use crate::descriptors::{
    self, characterize, specific_interface_area, Boundary, CoarsenessPoint, Descriptor, DescriptorCurve,
    DescriptorSet,
};
use crate::error::{Error, Result};
use crate::image::{BinaryImage, Phase};

/// Half-width of the band around zero that defines a correlation length,
/// as a fraction of the curve maximum (1 for normalized curves).
pub const DEFAULT_BAND: f64 = 0.02;

/// Deviations `E[beta - 1][phase]` of one decimation step.
pub type DeviationGrid = [[f64; 2]; 3];

/// Mean squared difference between a full-resolution curve and a decimated
/// one over the decimated grid points `l = 1..=N_k†`, both evaluated at the
/// full-resolution distance `l * pixel_size`. Reference points past the end
/// of the reference curve count as 0.
pub fn deviation(reference: &DescriptorCurve, decimated: &DescriptorCurve) -> Result<f64> {
    if reference.descriptor != decimated.descriptor || reference.phase != decimated.phase {
        return Err(Error::GridMismatch("curves describe different descriptors or phases"));
    }
    if decimated.pixel_size % reference.pixel_size != 0 {
        return Err(Error::GridMismatch("decimated pixel size is not a multiple of the reference pixel size"));
    }
    let ratio = (decimated.pixel_size / reference.pixel_size) as usize;
    let points = decimated.range_limit();
    if points == 0 {
        return Ok(0.0);
    }
    let sum: f64 = (1..=points)
        .map(|l| {
            let r = reference.values.get(l * ratio).copied().unwrap_or(0.0);
            let d = r - decimated.values[l];
            d * d
        })
        .sum();
    Ok(sum / points as f64)
}

/// All six deviations of a decimated descriptor set.
pub fn deviations(reference: &DescriptorSet, decimated: &DescriptorSet) -> Result<DeviationGrid> {
    let mut grid = [[0.0; 2]; 3];
    for d in Descriptor::ALL {
        for p in Phase::ALL {
            grid[d.beta() as usize - 1][p.index()] = deviation(reference.curve(d, p), decimated.curve(d, p))?;
        }
    }
    Ok(grid)
}

/// Global error: the sum of the six deviations.
pub fn global_error(grid: &DeviationGrid) -> f64 {
    grid.iter().flat_map(|row| row.iter()).sum()
}

/// Ensemble mean and population standard deviation
/// `sqrt(<x^2> - <x>^2)`, accumulated around the mean.
pub fn ensemble_stats(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("ensemble must hold at least one member"));
    }
    let w = values.len() as f64;
    let mean = values.iter().sum::<f64>() / w;
    let var = values.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / w;
    Ok((mean, libm::sqrt(var)))
}

/// First distance at which a normalized curve enters the band around zero.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationLength {
    /// Full-resolution pixels.
    pub length: f64,
    /// False when the curve never entered the band; `length` is then the
    /// last sampled distance and the structure is too large for the image.
    pub reached: bool,
}

/// Smallest sampled `r` with `|F(r)| <= band`.
pub fn correlation_length(curve: &DescriptorCurve, band: f64) -> CorrelationLength {
    match curve.values.iter().position(|v| libm::fabs(*v) <= band) {
        Some(l) => CorrelationLength { length: curve.distance(l) as f64, reached: true },
        None => CorrelationLength { length: curve.distance(curve.range_limit()) as f64, reached: false },
    }
}

/// Correlation lengths indexed by `[beta - 1][phase]`.
pub fn correlation_lengths(set: &DescriptorSet, band: f64) -> [[CorrelationLength; 2]; 3] {
    let mut out = [[CorrelationLength { length: 0.0, reached: false }; 2]; 3];
    for d in Descriptor::ALL {
        for p in Phase::ALL {
            out[d.beta() as usize - 1][p.index()] = correlation_length(set.curve(d, p), band);
        }
    }
    out
}

/// Optimal number of halvings for a correlation length `ell`.
///
/// `M_Z = ceil(3 M_0 / ell)`, `N_Z = ceil(3 N_0 / ell)` and
/// `Z = floor(min(log2(M_0 / M_Z), log2(N_0 / N_Z)))`, clamped at 0.
pub fn optimal_steps(ell: f64, rows: usize, cols: usize) -> u32 {
    let axis = |size: usize| -> u32 {
        let target = libm::ceil(3.0 * size as f64 / ell);
        if !(target >= 1.0) || target > size as f64 {
            return 0;
        }
        (size / target as usize).ilog2()
    };
    axis(rows).min(axis(cols))
}

/// Normalized coarseness of a full-resolution image for windows `2^k`,
/// `k = 0..=steps`.
pub fn coarseness_trace(img: &BinaryImage, steps: u32) -> Result<Vec<CoarsenessPoint>> {
    (0..=steps).map(|k| descriptors::coarseness(img, k)).collect()
}

/// Point-wise mean of curves sampled on the same grid.
pub fn mean_curve(curves: &[&DescriptorCurve]) -> Result<DescriptorCurve> {
    let first = *curves.first().ok_or(Error::InvalidParameter("no curves to average"))?;
    let same_grid = curves.iter().all(|c| {
        c.descriptor == first.descriptor
            && c.phase == first.phase
            && c.pixel_size == first.pixel_size
            && c.values.len() == first.values.len()
    });
    if !same_grid {
        return Err(Error::GridMismatch("curves to average are sampled differently"));
    }
    let w = curves.len() as f64;
    let mut values = vec![0.0; first.values.len()];
    for c in curves {
        for (acc, v) in values.iter_mut().zip(&c.values) {
            *acc += v;
        }
    }
    values.iter_mut().for_each(|v| *v /= w);
    Ok(DescriptorCurve {
        values,
        phi: curves.iter().map(|c| c.phi).sum::<f64>() / w,
        s_over_phi: curves.iter().map(|c| c.s_over_phi).sum::<f64>() / w,
        ..first.clone()
    })
}

/// Descriptor set of an image that may have lost a phase during decimation.
///
/// A two-phase image is characterized normally. For a single-phase image
/// every curve is 1 at `r = 0` and 0 beyond, except the lineal path of the
/// surviving phase, which is 1 everywhere.
pub fn characterize_lenient(img: &BinaryImage, boundary: Boundary) -> DescriptorSet {
    if let Ok(set) = characterize(img, boundary) {
        return set;
    }
    let points = descriptors::range_limit(img) + 1;
    let phi = [img.surface_fraction(Phase::Void), img.surface_fraction(Phase::Solid)];
    let mut curves = Vec::with_capacity(6);
    for descriptor in Descriptor::ALL {
        for phase in Phase::ALL {
            let present = phi[phase.index()] > 0.0;
            let mut values = vec![0.0; points];
            if descriptor == Descriptor::LinealPath && present {
                values.iter_mut().for_each(|v| *v = 1.0);
            }
            values[0] = 1.0;
            curves.push(DescriptorCurve {
                descriptor,
                phase,
                step: img.step(),
                pixel_size: img.pixel_size(),
                values,
                phi: phi[phase.index()],
                s_over_phi: 0.0,
            });
        }
    }
    DescriptorSet {
        step: img.step(),
        pixel_size: img.pixel_size(),
        rows: img.rows(),
        cols: img.cols(),
        boundary,
        phi,
        s: specific_interface_area(img, boundary),
        curves,
    }
}

/// Descriptors, deviations and coarseness along one ladder.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LadderAnalysis {
    /// Descriptor sets for `k = 0..=K`.
    pub sets: Vec<DescriptorSet>,
    /// Deviations for `k = 0..=K`; row 0 is identically zero.
    pub deviations: Vec<DeviationGrid>,
    pub global_errors: Vec<f64>,
    /// Coarseness of `A_0` at windows `2^k`.
    pub coarseness: Vec<CoarsenessPoint>,
}

/// Analyzes a ladder against a precomputed reference set for `A_0`.
pub fn analyze_ladder_with(reference: &DescriptorSet, ladder: &Ladder, boundary: Boundary) -> Result<LadderAnalysis> {
    let mut sets = Vec::with_capacity(ladder.images.len());
    sets.push(reference.clone());
    for img in &ladder.images[1..] {
        sets.push(characterize_lenient(img, boundary));
    }
    let deviations = sets.iter().map(|s| deviations(reference, s)).collect::<Result<Vec<_>>>()?;
    let global_errors = deviations.iter().map(global_error).collect();
    let coarseness = coarseness_trace(&ladder.images[0], ladder.steps() as u32)?;
    Ok(LadderAnalysis { sets, deviations, global_errors, coarseness })
}

pub fn analyze_ladder(ladder: &Ladder, boundary: Boundary) -> Result<LadderAnalysis> {
    let reference = characterize(&ladder.images[0], boundary)?;
    analyze_ladder_with(&reference, ladder, boundary)
}

/// Settings for [`auto_decimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AutoOptions {
    pub boundary: Boundary,
    pub band: f64,
    /// Trim the image to dimensions divisible by `2^Z` when needed.
    pub crop: bool,
}

impl Default for AutoOptions {
    fn default() -> Self {
        AutoOptions { boundary: Boundary::NonPeriodic, band: DEFAULT_BAND, crop: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LengthEntry {
    pub descriptor: Descriptor,
    pub beta: u8,
    pub phase: Phase,
    pub length: f64,
    pub reached: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StepReport {
    pub k: u32,
    pub rows: usize,
    pub cols: usize,
    pub pixel_size: u64,
    pub phi: [f64; 2],
    pub s_over_phi: [f64; 2],
    /// `[beta - 1][phase]`.
    pub deviations: DeviationGrid,
    pub global_error: f64,
    pub coarseness: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AutoReport {
    pub method: Method,
    pub boundary: Boundary,
    pub band: f64,
    pub lengths: Vec<LengthEntry>,
    /// Minimum correlation length over the six curves.
    pub characteristic_length: f64,
    pub z: u32,
    pub trimmed_from: Option<(usize, usize)>,
    pub steps: Vec<StepReport>,
    pub notices: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutoDecimation {
    /// `A_Z`.
    pub image: BinaryImage,
    pub report: AutoReport,
    pub ladder: Ladder,
    pub analysis: LadderAnalysis,
}

/// Statistically sensitive decimation.
///
/// 1. characterize `A_0`; 2. take the correlation length of each of the six
/// curves; 3. keep the minimum `ell`; 4. derive `Z` from `ell`; 5. apply `Z`
/// halving steps with `method`.
pub fn auto_decimate(img: &BinaryImage, method: Method, options: AutoOptions) -> Result<AutoDecimation> {
    if !(options.band > 0.0 && options.band < 1.0) {
        return Err(Error::InvalidParameter("band must lie in (0, 1)"));
    }
    let reference = characterize(img, options.boundary)?;
    let table = correlation_lengths(&reference, options.band);
    let mut lengths = Vec::with_capacity(6);
    let mut notices = Vec::new();
    for d in Descriptor::ALL {
        for p in Phase::ALL {
            let cl = table[d.beta() as usize - 1][p.index()];
            if !cl.reached {
                notices.push("a descriptor never entered the band; the image may be too small for its structure");
            }
            lengths.push(LengthEntry { descriptor: d, beta: d.beta(), phase: p, length: cl.length, reached: cl.reached });
        }
    }
    notices.dedup();
    let ell = lengths.iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
    let z = optimal_steps(ell, img.rows(), img.cols());
    if z == 0 {
        notices.push("optimal number of steps is 0; the image is returned unchanged");
    }
    let ladder = build_ladder(img, method, z, options.crop)?;
    let analysis = if ladder.trimmed_from.is_some() {
        analyze_ladder(&ladder, options.boundary)?
    } else {
        analyze_ladder_with(&reference, &ladder, options.boundary)?
    };
    let steps = ladder
        .images
        .iter()
        .zip(&analysis.sets)
        .enumerate()
        .map(|(k, (image, set))| StepReport {
            k: k as u32,
            rows: image.rows(),
            cols: image.cols(),
            pixel_size: image.pixel_size(),
            phi: set.phi,
            s_over_phi: set.s_over_phi(),
            deviations: analysis.deviations[k],
            global_error: analysis.global_errors[k],
            coarseness: analysis.coarseness[k].value,
        })
        .collect();
    let report = AutoReport {
        method,
        boundary: options.boundary,
        band: options.band,
        lengths,
        characteristic_length: ell,
        z,
        trimmed_from: ladder.trimmed_from,
        steps,
        notices,
    };
    Ok(AutoDecimation { image: ladder.last().clone(), report, ladder, analysis })
}
