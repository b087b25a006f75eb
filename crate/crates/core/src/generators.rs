//! Seeded synthetic two-phase materials.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha
//! 0.9), so a spec and seed reproduce the same image on every platform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::BinaryImage;

/// Attempted centers per disk before placement gives up.
pub const PLACEMENT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum DiskVariant {
    /// Center distance at least the sum of the radii.
    Impenetrable,
    /// Center distance strictly greater than the difference of the radii.
    Overlapping,
}

/// Disk-packing material on a periodic `side x side` domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiskSpec {
    pub variant: DiskVariant,
    pub disks: usize,
    /// Disk count the radius histogram is rounded for; `None` uses `disks`.
    /// Placing fewer disks than the histogram holds samples the histogram
    /// without replacement.
    #[cfg_attr(feature = "serde", serde(default))]
    pub histogram_disks: Option<usize>,
    pub r_min: u32,
    pub r_max: u32,
    /// Location parameter of the folded normal, in pixels.
    pub mu: f64,
    /// Scale parameter of the folded normal, in pixels.
    pub sigma: f64,
    pub side: usize,
    pub seed: u64,
}

impl DiskSpec {
    pub fn histogram_count(&self) -> usize {
        self.histogram_disks.unwrap_or(self.disks)
    }

    pub fn validate(&self) -> Result<()> {
        if self.disks == 0 || self.histogram_disks == Some(0) {
            return Err(Error::InvalidParameter("disk count must be positive"));
        }
        if self.r_min == 0 || self.r_min > self.r_max {
            return Err(Error::InvalidParameter("radii must satisfy 1 <= r_min <= r_max"));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::InvalidParameter("sigma must be positive"));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter("mu must be finite"));
        }
        if self.side == 0 {
            return Err(Error::InvalidParameter("side length must be positive"));
        }
        Ok(())
    }
}

/// Unrounded expected count `I sqrt(2/(pi sigma^2)) exp(-(r^2+mu^2)/(2 sigma^2)) cosh(r mu/sigma^2)`.
pub fn folded_normal_weight(disks: usize, r: f64, mu: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    disks as f64
        * libm::sqrt(2.0 / (PI * s2))
        * libm::exp(-(r * r + mu * mu) / (2.0 * s2))
        * libm::cosh(r * mu / s2)
}

/// Radius counts for `r_t = r_min + t`, `t = 0..=r_max - r_min`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadiusHistogram {
    pub r_min: u32,
    pub counts: Vec<u64>,
}

impl RadiusHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Every radius repeated by its count, smallest first.
    pub fn multiset(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (t, &c) in self.counts.iter().enumerate() {
            out.extend(core::iter::repeat_n(self.r_min + t as u32, c as usize));
        }
        out
    }
}

/// Discrete folded-normal radius histogram; each bin is the expected count
/// rounded to the nearest integer, ties to even.
pub fn radius_histogram(spec: &DiskSpec) -> Result<RadiusHistogram> {
    if !(spec.sigma > 0.0) {
        return Err(Error::InvalidParameter("sigma must be positive"));
    }
    if spec.r_min > spec.r_max {
        return Err(Error::InvalidParameter("r_min exceeds r_max"));
    }
    let counts = (spec.r_min..=spec.r_max)
        .map(|r| libm::rint(folded_normal_weight(spec.histogram_count(), f64::from(r), spec.mu, spec.sigma)) as u64)
        .collect();
    Ok(RadiusHistogram { r_min: spec.r_min, counts })
}

/// Placed disk; center in `[0, side)^2`, radius in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Disk {
    pub x: f64,
    pub y: f64,
    pub radius: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskPacking {
    pub image: BinaryImage,
    pub disks: Vec<Disk>,
    /// Radii that came from the rounded histogram.
    pub from_histogram: usize,
    /// Radii drawn from the unrounded weights to make up the requested count.
    pub drawn: usize,
}

/// Minimum-image squared distance between two centers on a periodic square.
#[inline]
pub fn periodic_distance_sq(a: (f64, f64), b: (f64, f64), side: f64) -> f64 {
    let wrap = |d: f64| {
        let d = libm::fabs(d);
        if d > side / 2.0 {
            side - d
        } else {
            d
        }
    };
    let (dx, dy) = (wrap(a.0 - b.0), wrap(a.1 - b.1));
    dx * dx + dy * dy
}

/// True when two disks satisfy the variant's distance constraint.
#[inline]
pub fn admissible(variant: DiskVariant, d2: f64, r_a: u32, r_b: u32) -> bool {
    match variant {
        DiskVariant::Impenetrable => {
            let s = f64::from(r_a + r_b);
            d2 >= s * s
        }
        DiskVariant::Overlapping => {
            let diff = f64::from(r_a.abs_diff(r_b));
            d2 > diff * diff
        }
    }
}

// Radii for exactly `spec.disks` disks: the rounded histogram, topped up
// with draws from the unrounded weights, or a shuffled subset of it.
fn radii(spec: &DiskSpec, rng: &mut ChaCha8Rng) -> Result<(Vec<u32>, usize, usize)> {
    let hist = radius_histogram(spec)?;
    let mut radii = hist.multiset();
    let from_histogram = radii.len().min(spec.disks);
    let mut drawn = 0;
    if radii.len() < spec.disks {
        let weights: Vec<f64> = (spec.r_min..=spec.r_max)
            .map(|r| folded_normal_weight(1, f64::from(r), spec.mu, spec.sigma))
            .collect();
        let dist = WeightedIndex::new(&weights).map_err(|_| Error::InvalidParameter("radius weights vanish"))?;
        while radii.len() < spec.disks {
            radii.push(spec.r_min + dist.sample(rng) as u32);
            drawn += 1;
        }
    }
    radii.shuffle(rng);
    radii.truncate(spec.disks);
    if spec.variant == DiskVariant::Impenetrable {
        radii.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok((radii, from_histogram, drawn))
}

/// Places `spec.disks` disks by random sequential addition and rasterizes
/// them periodically. Impenetrable disks are placed largest first, other
/// variants in random order. A pixel `(m, n)` is solid when its center
/// `(n + 1/2, m + 1/2)` is within `r` of some disk center.
pub fn place_disks(spec: &DiskSpec) -> Result<DiskPacking> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (radii, from_histogram, drawn) = radii(spec, &mut rng)?;
    let side = spec.side as f64;
    let mut disks: Vec<Disk> = Vec::with_capacity(radii.len());
    for (index, &radius) in radii.iter().enumerate() {
        let mut attempts = 0u64;
        loop {
            if attempts == PLACEMENT_BUDGET {
                return Err(Error::PlacementBudget { index, radius, attempts });
            }
            attempts += 1;
            let center = (rng.random::<f64>() * side, rng.random::<f64>() * side);
            let ok = disks
                .iter()
                .all(|d| admissible(spec.variant, periodic_distance_sq((d.x, d.y), center, side), d.radius, radius));
            if ok {
                disks.push(Disk { x: center.0, y: center.1, radius });
                break;
            }
        }
    }
    let image = rasterize(spec.side, &disks);
    Ok(DiskPacking { image, disks, from_histogram, drawn })
}

/// Periodic rasterization of disks onto a `side x side` image.
pub fn rasterize(side: usize, disks: &[Disk]) -> BinaryImage {
    let mut pixels = vec![0u8; side * side];
    let l = side as i64;
    for d in disks {
        let r = f64::from(d.radius);
        let r2 = r * r;
        // Pixel centers m + 1/2 within [y - r, y + r].
        let m_lo = libm::ceil(d.y - r - 0.5) as i64;
        let m_hi = libm::floor(d.y + r - 0.5) as i64;
        let n_lo = libm::ceil(d.x - r - 0.5) as i64;
        let n_hi = libm::floor(d.x + r - 0.5) as i64;
        for m in m_lo..=m_hi {
            let dy = m as f64 + 0.5 - d.y;
            let row = m.rem_euclid(l) as usize * side;
            for n in n_lo..=n_hi {
                let dx = n as f64 + 0.5 - d.x;
                if dx * dx + dy * dy <= r2 {
                    pixels[row + n.rem_euclid(l) as usize] = 1;
                }
            }
        }
    }
    BinaryImage::from_raw(side, side, pixels, 0, 1)
}

/// Level-cut Laplacian-of-Gaussian material on a periodic `side x side`
/// domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogSpec {
    /// Odd kernel side `b`.
    pub kernel: usize,
    /// Level-cut threshold in `[0, 255]`.
    pub threshold: f64,
    pub side: usize,
    pub seed: u64,
}

impl LogSpec {
    pub fn validate(&self) -> Result<()> {
        if self.kernel % 2 == 0 {
            return Err(Error::InvalidParameter("kernel size must be odd and positive"));
        }
        if !(0.0..=255.0).contains(&self.threshold) {
            return Err(Error::InvalidParameter("threshold must lie in [0, 255]"));
        }
        if self.side == 0 {
            return Err(Error::InvalidParameter("side length must be positive"));
        }
        Ok(())
    }
}

/// Unnormalized weight `(1 - rho) exp(-rho)`, `rho = (h^2 + i^2) / (2 s^2)`,
/// `s = floor(b / 2)`. For `b = 1` the single weight is 1.
pub fn log_weight(h: i64, i: i64, kernel: usize) -> f64 {
    let half = (kernel / 2) as f64;
    if half == 0.0 {
        return 1.0;
    }
    let rho = (h * h + i * i) as f64 / (2.0 * half * half);
    (1.0 - rho) * libm::exp(-rho)
}

/// Normalized `b x b` kernel, row-major with offset `-b/2` at index 0.
pub fn log_kernel(kernel: usize) -> Vec<f64> {
    let half = (kernel / 2) as i64;
    let mut weights = Vec::with_capacity(kernel * kernel);
    for h in -half..=half {
        for i in -half..=half {
            weights.push(log_weight(h, i, kernel));
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    weights
}

/// Uniform integer intensities in `0..=255`, row-major.
pub fn uniform_noise(side: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..side * side).map(|_| rng.random::<u8>()).collect()
}

// 1D periodic correlation of every row (or column) with `taps`.
fn convolve_axis(field: &[f64], side: usize, taps: &[f64], along_rows: bool) -> Vec<f64> {
    let half = (taps.len() / 2) as i64;
    let l = side as i64;
    let mut out = vec![0.0; side * side];
    for a in 0..side {
        for b in 0..side {
            let mut acc = 0.0;
            for (t, &w) in taps.iter().enumerate() {
                let o = (b as i64 + t as i64 - half).rem_euclid(l) as usize;
                let idx = if along_rows { a * side + o } else { o * side + a };
                acc += w * field[idx];
            }
            let idx = if along_rows { a * side + b } else { b * side + a };
            out[idx] = acc;
        }
    }
    out
}

/// Noise blurred with the normalized kernel under periodic wrap-around.
///
/// The kernel splits as `g(h) g(i) - u(h) g(i) - g(h) u(i)` with
/// `g(x) = exp(-x^2/(2 s^2))` and `u(x) = x^2/(2 s^2) g(x)`, so the 2D
/// convolution is evaluated as separable 1D passes.
pub fn blurred_field(noise: &[u8], side: usize, kernel: usize) -> Vec<f64> {
    let field: Vec<f64> = noise.iter().map(|&v| f64::from(v)).collect();
    let half = kernel / 2;
    if half == 0 {
        return field;
    }
    let s2 = 2.0 * (half * half) as f64;
    let g: Vec<f64> = (-(half as i64)..=half as i64).map(|x| libm::exp(-((x * x) as f64) / s2)).collect();
    let u: Vec<f64> = (-(half as i64)..=half as i64)
        .zip(&g)
        .map(|(x, &gx)| (x * x) as f64 / s2 * gx)
        .collect();
    let sum_g: f64 = g.iter().sum();
    let sum_u: f64 = u.iter().sum();
    let norm = sum_g * sum_g - 2.0 * sum_u * sum_g;

    let rows_g = convolve_axis(&field, side, &g, true);
    let rows_u = convolve_axis(&field, side, &u, true);
    let gg = convolve_axis(&rows_g, side, &g, false);
    let ug = convolve_axis(&rows_u, side, &g, false);
    let gu = convolve_axis(&rows_g, side, &u, false);
    gg.iter()
        .zip(&ug)
        .zip(&gu)
        .map(|((&a, &b), &c)| (a - b - c) / norm)
        .collect()
}

/// Uniform noise, periodic LoG blur, then level cut: pixels with blurred
/// intensity `>= threshold` are solid.
pub fn generate_log(spec: &LogSpec) -> Result<BinaryImage> {
    spec.validate()?;
    let noise = uniform_noise(spec.side, spec.seed);
    let field = blurred_field(&noise, spec.side, spec.kernel);
    let pixels = field.iter().map(|&v| u8::from(v >= spec.threshold)).collect();
    Ok(BinaryImage::from_raw(spec.side, spec.side, pixels, 0, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Phase;

    fn table_one(variant: DiskVariant, disks: usize, side: usize, seed: u64) -> DiskSpec {
        DiskSpec { variant, disks, histogram_disks: None, r_min: 1, r_max: 250, mu: 50.0, sigma: 60.0, side, seed }
    }

    #[test]
    fn histogram_total_tracks_disk_count() {
        let spec = table_one(DiskVariant::Overlapping, 640, 4096, 0);
        let hist = radius_histogram(&spec).unwrap();
        assert_eq!(hist.counts.len(), 250);
        // Independent summation of the unrounded formula over all bins.
        let mut expected = 0.0;
        for r in 1..=250 {
            let r = f64::from(r);
            expected += 640.0 * libm::sqrt(2.0 / (PI * 3600.0)) * libm::exp(-(r * r + 2500.0) / 7200.0) * libm::cosh(r * 50.0 / 3600.0);
        }
        assert!((expected - 640.0).abs() / 640.0 < 0.02);
        let total = hist.total() as f64;
        assert!((total - 640.0).abs() / 640.0 < 0.02, "{total}");
    }

    #[test]
    fn half_normal_reduction() {
        let spec = DiskSpec { mu: 0.0, ..table_one(DiskVariant::Overlapping, 1000, 64, 0) };
        let sigma2 = 3600.0;
        for r in [1.0f64, 10.0, 60.0, 120.0] {
            let w = folded_normal_weight(spec.disks, r, 0.0, 60.0);
            let half_normal = 1000.0 * libm::sqrt(2.0 / (PI * sigma2)) * libm::exp(-r * r / (2.0 * sigma2));
            assert!((w - half_normal).abs() < 1e-12);
        }
    }

    #[test]
    fn single_bin_histogram() {
        let spec = DiskSpec { r_min: 50, r_max: 50, ..table_one(DiskVariant::Overlapping, 1000, 64, 0) };
        let hist = radius_histogram(&spec).unwrap();
        assert_eq!(hist.counts.len(), 1);
        assert_eq!(hist.counts[0], libm::rint(folded_normal_weight(1000, 50.0, 50.0, 60.0)) as u64);
    }

    #[test]
    fn reference_histogram_is_subsampled() {
        let spec = DiskSpec { histogram_disks: Some(640), ..table_one(DiskVariant::Overlapping, 40, 1024, 2) };
        let reference = radius_histogram(&spec).unwrap();
        assert_eq!(reference.total(), radius_histogram(&table_one(DiskVariant::Overlapping, 640, 4096, 0)).unwrap().total());
        let packing = place_disks(&spec).unwrap();
        assert_eq!((packing.disks.len(), packing.from_histogram, packing.drawn), (40, 40, 0));
        let mut used = vec![0u64; reference.counts.len()];
        for d in &packing.disks {
            used[(d.radius - 1) as usize] += 1;
        }
        assert!(used.iter().zip(&reference.counts).all(|(u, c)| u <= c));
    }

    #[test]
    fn impenetrable_disks_go_largest_first() {
        let spec = table_one(DiskVariant::Impenetrable, 30, 1024, 4);
        let packing = place_disks(&spec).unwrap();
        assert!(packing.disks.windows(2).all(|w| w[0].radius >= w[1].radius));
    }

    #[test]
    fn zero_sigma_is_rejected() {
        let spec = DiskSpec { sigma: 0.0, ..table_one(DiskVariant::Overlapping, 10, 64, 0) };
        assert!(radius_histogram(&spec).is_err());
    }

    #[test]
    fn rasterize_unit_disk() {
        let img = rasterize(4, &[Disk { x: 2.0, y: 2.0, radius: 1 }]);
        // Brute force over the 16 pixel centers.
        for m in 0..4 {
            for n in 0..4 {
                let (dx, dy) = (n as f64 + 0.5 - 2.0, m as f64 + 0.5 - 2.0);
                assert_eq!(img.get(m, n), u8::from(dx * dx + dy * dy <= 1.0), "({m},{n})");
            }
        }
        assert_eq!(img.count(Phase::Solid), 4);
    }

    #[test]
    fn rasterize_wraps() {
        let img = rasterize(8, &[Disk { x: 0.0, y: 0.0, radius: 1 }]);
        let solid: Vec<(usize, usize)> = (0..8).flat_map(|m| (0..8).map(move |n| (m, n))).filter(|&(m, n)| img.get(m, n) == 1).collect();
        assert_eq!(solid, [(0, 0), (0, 7), (7, 0), (7, 7)]);
    }

    #[test]
    fn impossible_packing_fails_deterministically() {
        let spec = DiskSpec {
            variant: DiskVariant::Impenetrable,
            disks: 2,
            histogram_disks: None,
            r_min: 16,
            r_max: 16,
            mu: 16.0,
            sigma: 1.0,
            side: 16,
            seed: 3,
        };
        let err = place_disks(&spec).unwrap_err();
        assert_eq!(err, Error::PlacementBudget { index: 1, radius: 16, attempts: PLACEMENT_BUDGET });
    }

    #[test]
    fn disk_constraints_hold() {
        for variant in [DiskVariant::Impenetrable, DiskVariant::Overlapping] {
            let spec = DiskSpec { variant, disks: 30, histogram_disks: None, r_min: 2, r_max: 12, mu: 5.0, sigma: 4.0, side: 128, seed: 5 };
            let packing = place_disks(&spec).unwrap();
            assert_eq!(packing.disks.len(), 30);
            for (a, da) in packing.disks.iter().enumerate() {
                assert!(da.x >= 0.0 && da.x < 128.0 && da.y >= 0.0 && da.y < 128.0);
                for db in &packing.disks[..a] {
                    let d2 = periodic_distance_sq((da.x, da.y), (db.x, db.y), 128.0);
                    assert!(admissible(variant, d2, da.radius, db.radius));
                }
            }
            assert_eq!(packing, place_disks(&spec).unwrap());
        }
    }

    #[test]
    fn log_kernel_b3() {
        let k = log_kernel(3);
        let c = 0.5 * libm::exp(-0.5);
        let total = 1.0 + 4.0 * c;
        let expected = [0.0, c, 0.0, c, 1.0, c, 0.0, c, 0.0].map(|w| w / total);
        for (a, b) in k.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn log_kernel_sums_to_one() {
        for b in [1, 3, 5, 11, 75] {
            let s: f64 = log_kernel(b).iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "b = {b}");
        }
    }

    #[test]
    fn separable_blur_matches_direct_convolution() {
        let side = 13;
        let noise = uniform_noise(side, 21);
        for b in [3usize, 5, 9] {
            let k = log_kernel(b);
            let half = (b / 2) as i64;
            let fast = blurred_field(&noise, side, b);
            for m in 0..side as i64 {
                for n in 0..side as i64 {
                    let mut acc = 0.0;
                    for h in -half..=half {
                        for i in -half..=half {
                            let w = k[((h + half) * b as i64 + i + half) as usize];
                            let src = ((m + h).rem_euclid(side as i64) * side as i64 + (n + i).rem_euclid(side as i64)) as usize;
                            acc += w * f64::from(noise[src]);
                        }
                    }
                    assert!((acc - fast[(m * side as i64 + n) as usize]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn identity_kernel_thresholds_noise() {
        let spec = LogSpec { kernel: 1, threshold: 100.0, side: 64, seed: 8 };
        let img = generate_log(&spec).unwrap();
        let noise = uniform_noise(64, 8);
        assert!(img.pixels().iter().zip(&noise).all(|(&p, &a)| p == u8::from(a >= 100)));
        let phi1 = img.surface_fraction(Phase::Solid);
        assert!((phi1 - 156.0 / 256.0).abs() < 0.05, "{phi1}");
    }

    #[test]
    fn log_spec_validation() {
        assert!(LogSpec { kernel: 4, threshold: 1.0, side: 8, seed: 0 }.validate().is_err());
        assert!(LogSpec { kernel: 3, threshold: 256.0, side: 8, seed: 0 }.validate().is_err());
        let a = generate_log(&LogSpec { kernel: 7, threshold: 127.5, side: 32, seed: 1 }).unwrap();
        let b = generate_log(&LogSpec { kernel: 7, threshold: 127.5, side: 32, seed: 1 }).unwrap();
        assert_eq!(a, b);
    }
}
