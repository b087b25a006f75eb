//! Discrete statistical descriptors of two-phase images.
//!
//! Distances are integers in current pixels. Two-point and lineal-path
//! statistics are sampled along rows and columns only, so every estimator is
//! an exact ratio of integer counts. Curves hold the points `r_l = 0..=N†`
//! with `N† = min(M, N) / 2`, and record the pixel size so that the distance
//! of point `l` in full-resolution pixels is `l * pixel_size`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::edt;
use crate::error::{Error, Result};
use crate::image::{BinaryImage, Phase};

/// How pairs and segments that cross the image border are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Boundary {
    /// Indices wrap around; the image tiles the plane.
    #[default]
    Periodic,
    /// Pairs and segments leaving the image are discarded; estimators are
    /// normalized by the number of admissible placements.
    NonPeriodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::NonPeriodic => "nonperiodic",
        })
    }
}

/// The three normalized descriptors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Descriptor {
    /// Normalized autocovariance `chi*` (beta = 1).
    Autocovariance,
    /// Normalized lineal-path function `L*` (beta = 2).
    LinealPath,
    /// Normalized pore-size distribution `P*` (beta = 3).
    PoreSize,
}

impl Descriptor {
    pub const ALL: [Descriptor; 3] = [Descriptor::Autocovariance, Descriptor::LinealPath, Descriptor::PoreSize];

    /// Index beta in 1..=3.
    pub const fn beta(self) -> u8 {
        match self {
            Descriptor::Autocovariance => 1,
            Descriptor::LinealPath => 2,
            Descriptor::PoreSize => 3,
        }
    }

    pub const fn from_beta(beta: u8) -> Option<Descriptor> {
        match beta {
            1 => Some(Descriptor::Autocovariance),
            2 => Some(Descriptor::LinealPath),
            3 => Some(Descriptor::PoreSize),
            _ => None,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Descriptor::Autocovariance => "autocovariance",
            Descriptor::LinealPath => "lineal_path",
            Descriptor::PoreSize => "pore_size",
        }
    }
}

/// Largest sampled distance, in current pixels.
#[inline]
pub fn range_limit(img: &BinaryImage) -> usize {
    img.rows().min(img.cols()) / 2
}

/// Integer tallies behind an axial estimator: at distance `r`, `hits[r]` of
/// `trials[r]` placements satisfied the event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxialCounts {
    pub hits: Vec<u64>,
    pub trials: Vec<u64>,
}

impl AxialCounts {
    pub fn probabilities(&self) -> Vec<f64> {
        self.hits.iter().zip(&self.trials).map(|(&h, &t)| h as f64 / t as f64).collect()
    }
}

#[inline]
fn and_count(xs: &[u8], ys: &[u8], flip: u8) -> u64 {
    xs.iter().zip(ys).map(|(&a, &b)| u64::from((a ^ flip) & (b ^ flip))).sum()
}

/// Pairs of pixels `r` apart along a row or a column that both carry `phase`.
pub fn two_point_counts(img: &BinaryImage, phase: Phase, boundary: Boundary) -> AxialCounts {
    let (rows, cols) = (img.rows(), img.cols());
    let flip = phase.label() ^ 1;
    let limit = range_limit(img);
    let mut hits = vec![0u64; limit + 1];
    let mut trials = vec![0u64; limit + 1];
    for r in 0..=limit {
        let mut count = 0u64;
        for m in 0..rows {
            let row = img.row(m);
            count += and_count(&row[..cols - r], &row[r..], flip);
            if boundary == Boundary::Periodic {
                count += and_count(&row[cols - r..], &row[..r], flip);
            }
        }
        let col_pairs = match boundary {
            Boundary::Periodic => rows,
            Boundary::NonPeriodic => rows - r,
        };
        for m in 0..col_pairs {
            count += and_count(img.row(m), img.row((m + r) % rows), flip);
        }
        hits[r] = count;
        trials[r] = match boundary {
            Boundary::Periodic => 2 * (rows * cols) as u64,
            Boundary::NonPeriodic => (rows * (cols - r) + cols * (rows - r)) as u64,
        };
    }
    AxialCounts { hits, trials }
}

/// Raw two-point correlation `S2(r)`, `r = 0..=N†`; `S2(0)` is the surface
/// fraction.
pub fn two_point_correlation(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Vec<f64> {
    two_point_counts(img, phase, boundary).probabilities()
}

fn transpose(img: &BinaryImage) -> Vec<u8> {
    let (rows, cols) = (img.rows(), img.cols());
    let mut out = vec![0u8; rows * cols];
    for m in 0..rows {
        for (n, &v) in img.row(m).iter().enumerate() {
            out[n * rows + m] = v;
        }
    }
    out
}

// Adds to `starts[r]` the number of positions in `line` where r + 1
// consecutive pixels all equal `label`, for r < starts.len().
fn accumulate_runs(line: &[u8], label: u8, periodic: bool, starts: &mut [u64]) {
    let len = line.len();
    if line.iter().all(|&v| v == label) {
        for (r, s) in starts.iter_mut().enumerate() {
            *s += if periodic { len as u64 } else { (len - r.min(len)) as u64 };
        }
        return;
    }
    let mut runs: Vec<usize> = Vec::new();
    let mut current = 0usize;
    for &v in line {
        if v == label {
            current += 1;
        } else if current > 0 {
            runs.push(current);
            current = 0;
        }
    }
    if current > 0 {
        // The trailing run continues into the leading one across the seam.
        if periodic && line[0] == label {
            runs[0] += current;
        } else {
            runs.push(current);
        }
    }
    for run in runs {
        for (r, s) in starts.iter_mut().enumerate().take(run) {
            *s += (run - r) as u64;
        }
    }
}

/// Placements of a segment spanning `r` pixel units (`r + 1` pixels) along a
/// row or a column that lie wholly in `phase`.
pub fn lineal_path_counts(img: &BinaryImage, phase: Phase, boundary: Boundary) -> AxialCounts {
    let (rows, cols) = (img.rows(), img.cols());
    let periodic = boundary == Boundary::Periodic;
    let limit = range_limit(img);
    let mut hits = vec![0u64; limit + 1];
    for m in 0..rows {
        accumulate_runs(img.row(m), phase.label(), periodic, &mut hits);
    }
    let transposed = transpose(img);
    for column in transposed.chunks_exact(rows) {
        accumulate_runs(column, phase.label(), periodic, &mut hits);
    }
    let trials = (0..=limit)
        .map(|r| match boundary {
            Boundary::Periodic => 2 * (rows * cols) as u64,
            Boundary::NonPeriodic => (rows * (cols - r) + cols * (rows - r)) as u64,
        })
        .collect();
    AxialCounts { hits, trials }
}

/// Raw lineal-path function `L(r)`, `r = 0..=N†`; `L(0)` is the surface
/// fraction.
pub fn lineal_path(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Vec<f64> {
    lineal_path_counts(img, phase, boundary).probabilities()
}

/// Pore-size bin of a pixel whose center lies at squared distance `d2` from
/// the nearest pixel center of the other phase.
///
/// The interface sits half a pixel before that center, so the bin is
/// `floor(sqrt(d2) - 1/2)`, evaluated in integers. Pixels touching the
/// interface (`d2 = 1` or `2`) fall in bin 0.
#[inline]
pub fn pore_size_bin(d2: u64) -> usize {
    let twice = (4 * d2).isqrt();
    (twice.saturating_sub(1) / 2) as usize
}

/// Histogram of interface distances over the pixels of `phase`, bins
/// `0..=N†` of unit width. Pixels beyond the last bin are not counted.
pub fn pore_size_histogram(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Vec<u64> {
    let limit = range_limit(img);
    let mut hist = vec![0u64; limit + 1];
    let d2 = edt::squared_distance_to(img, phase.other(), boundary);
    for (&v, &d) in img.pixels().iter().zip(&d2) {
        if v == phase.label() && d != edt::UNREACHABLE {
            let bin = pore_size_bin(d);
            if bin <= limit {
                hist[bin] += 1;
            }
        }
    }
    hist
}

/// Pore-size density `P(r_l)`: histogram divided by the number of pixels of
/// `phase`, so the bins sum to one when none is truncated.
pub fn pore_size_density(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Vec<f64> {
    let n = img.count(phase) as f64;
    pore_size_histogram(img, phase, boundary).iter().map(|&h| h as f64 / n).collect()
}

/// Number of 4-connected neighbor pairs with different labels.
pub fn interface_edges(img: &BinaryImage, boundary: Boundary) -> u64 {
    let (rows, cols) = (img.rows(), img.cols());
    let periodic = boundary == Boundary::Periodic;
    let mut edges = 0u64;
    for m in 0..rows {
        let row = img.row(m);
        edges += row.windows(2).map(|w| u64::from(w[0] ^ w[1])).sum::<u64>();
        if periodic && cols > 1 {
            edges += u64::from(row[0] ^ row[cols - 1]);
        }
        let below = if m + 1 < rows {
            Some(m + 1)
        } else if periodic && rows > 1 {
            Some(0)
        } else {
            None
        };
        if let Some(b) = below {
            edges += row.iter().zip(img.row(b)).map(|(&a, &c)| u64::from(a ^ c)).sum::<u64>();
        }
    }
    edges
}

/// Specific interface area `s`: interface length per unit area, measured in
/// full-resolution pixels. An edge of a step-k pixel is `pixel_size`
/// full-resolution pixels long and the image covers `pixel_size^2` times its
/// pixel count, so `s = edges / (M N pixel_size)`.
pub fn specific_interface_area(img: &BinaryImage, boundary: Boundary) -> f64 {
    interface_edges(img, boundary) as f64 / (img.len() as f64 * img.pixel_size() as f64)
}

/// One normalized descriptor of one phase, sampled at `r_l = 0..=N†` current
/// pixels.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DescriptorCurve {
    pub descriptor: Descriptor,
    pub phase: Phase,
    pub step: u32,
    pub pixel_size: u64,
    pub values: Vec<f64>,
    pub phi: f64,
    pub s_over_phi: f64,
}

impl DescriptorCurve {
    /// `N†`, the index of the last sampled point.
    pub fn range_limit(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Distance of point `l` in full-resolution pixels.
    #[inline]
    pub fn distance(&self, l: usize) -> u64 {
        l as u64 * self.pixel_size
    }

    pub fn distances(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.values.len()).map(|l| self.distance(l))
    }

    /// Value at a full-resolution distance that lies on this curve's grid.
    pub fn at_distance(&self, r: u64) -> Option<f64> {
        if r % self.pixel_size != 0 {
            return None;
        }
        self.values.get((r / self.pixel_size) as usize).copied()
    }
}

fn require_two_phase(img: &BinaryImage, phase: Phase) -> Result<(u64, u64)> {
    let n = img.count(phase);
    let total = img.len() as u64;
    if n == 0 || n == total {
        return Err(Error::SinglePhase { phase, fraction: img.surface_fraction(phase) });
    }
    Ok((n, total))
}

fn curve(img: &BinaryImage, descriptor: Descriptor, phase: Phase, values: Vec<f64>, s: f64) -> DescriptorCurve {
    let phi = img.surface_fraction(phase);
    DescriptorCurve {
        descriptor,
        phase,
        step: img.step(),
        pixel_size: img.pixel_size(),
        values,
        phi,
        s_over_phi: s / phi,
    }
}

/// Normalized autocovariance `(S2 - phi^2) / (phi (1 - phi))`.
///
/// Evaluated as one quotient of exact integers,
/// `(c P^2 - n^2 T) / (n (P - n) T)` for `c` hits in `T` trials and `n` of
/// `P` pixels in the phase, so the value at `r = 0` is exactly 1 and the two
/// phases of a periodic image give identical curves.
pub fn autocovariance(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Result<DescriptorCurve> {
    let (n, total) = require_two_phase(img, phase)?;
    let counts = two_point_counts(img, phase, boundary);
    let (n, p) = (i128::from(n), i128::from(total));
    let values = counts
        .hits
        .iter()
        .zip(&counts.trials)
        .map(|(&c, &t)| {
            let (c, t) = (i128::from(c), i128::from(t));
            let num = c * p * p - n * n * t;
            let den = n * (p - n) * t;
            num as f64 / den as f64
        })
        .collect();
    Ok(curve(img, Descriptor::Autocovariance, phase, values, specific_interface_area(img, boundary)))
}

/// Normalized lineal-path function `L / phi`, exactly 1 at `r = 0`.
pub fn lineal_path_normalized(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Result<DescriptorCurve> {
    let n = img.count(phase);
    if n == 0 {
        return Err(Error::SinglePhase { phase, fraction: 0.0 });
    }
    let total = img.len() as u128;
    let counts = lineal_path_counts(img, phase, boundary);
    let values = counts
        .hits
        .iter()
        .zip(&counts.trials)
        .map(|(&h, &t)| (u128::from(h) * total) as f64 / (u128::from(t) * u128::from(n)) as f64)
        .collect();
    Ok(curve(img, Descriptor::LinealPath, phase, values, specific_interface_area(img, boundary)))
}

/// Normalized pore-size distribution: the histogram divided by its first
/// bin, so the curve starts at exactly 1.
pub fn pore_size_normalized(img: &BinaryImage, phase: Phase, boundary: Boundary) -> Result<DescriptorCurve> {
    require_two_phase(img, phase)?;
    let hist = pore_size_histogram(img, phase, boundary);
    let first = hist[0] as f64;
    let values = hist.iter().map(|&h| h as f64 / first).collect();
    Ok(curve(img, Descriptor::PoreSize, phase, values, specific_interface_area(img, boundary)))
}

/// Computes one normalized descriptor.
pub fn normalized(img: &BinaryImage, descriptor: Descriptor, phase: Phase, boundary: Boundary) -> Result<DescriptorCurve> {
    match descriptor {
        Descriptor::Autocovariance => autocovariance(img, phase, boundary),
        Descriptor::LinealPath => lineal_path_normalized(img, phase, boundary),
        Descriptor::PoreSize => pore_size_normalized(img, phase, boundary),
    }
}

/// All six normalized curves of an image plus its scalar summaries.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DescriptorSet {
    pub step: u32,
    pub pixel_size: u64,
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
    /// Surface fractions indexed by phase label.
    pub phi: [f64; 2],
    /// Specific interface area per full-resolution pixel.
    pub s: f64,
    /// Ordered by descriptor, then phase.
    pub curves: Vec<DescriptorCurve>,
}

impl DescriptorSet {
    pub fn curve(&self, descriptor: Descriptor, phase: Phase) -> &DescriptorCurve {
        &self.curves[(descriptor.beta() as usize - 1) * 2 + phase.index()]
    }

    pub fn range_limit(&self) -> usize {
        self.curves.first().map_or(0, DescriptorCurve::range_limit)
    }

    pub fn s_over_phi(&self) -> [f64; 2] {
        [self.s / self.phi[0], self.s / self.phi[1]]
    }
}

/// Computes every normalized descriptor of a two-phase image.
pub fn characterize(img: &BinaryImage, boundary: Boundary) -> Result<DescriptorSet> {
    require_two_phase(img, Phase::Solid)?;
    let mut curves = Vec::with_capacity(6);
    for descriptor in Descriptor::ALL {
        for phase in Phase::ALL {
            curves.push(normalized(img, descriptor, phase, boundary)?);
        }
    }
    Ok(DescriptorSet {
        step: img.step(),
        pixel_size: img.pixel_size(),
        rows: img.rows(),
        cols: img.cols(),
        boundary,
        phi: [img.surface_fraction(Phase::Void), img.surface_fraction(Phase::Solid)],
        s: specific_interface_area(img, boundary),
        curves,
    })
}

/// Normalized coarseness at one observation-window size.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoarsenessPoint {
    /// Window side in full-resolution pixels.
    pub window: u64,
    pub value: f64,
}

// Exact pieces of the local-fraction variance over tiled square windows:
// returns (B * sum c_b^2 - n1^2, n_pixels) where c_b counts phase-1 pixels in
// block b, so that sigma^2 = first / n_pixels^2.
fn local_variance_numerator(img: &BinaryImage, window: usize) -> Result<(i128, i128)> {
    if window == 0 {
        return Err(Error::InvalidParameter("window side must be positive"));
    }
    for (axis, size) in [(crate::error::Axis::Rows, img.rows()), (crate::error::Axis::Cols, img.cols())] {
        if size % window != 0 {
            return Err(Error::NotDivisible { axis, size, divisor: window });
        }
    }
    let block_cols = img.cols() / window;
    let mut block_counts = vec![0u64; (img.rows() / window) * block_cols];
    for m in 0..img.rows() {
        let base = (m / window) * block_cols;
        for (b, chunk) in img.row(m).chunks_exact(window).enumerate() {
            block_counts[base + b] += chunk.iter().map(|&v| u64::from(v)).sum::<u64>();
        }
    }
    let blocks = block_counts.len() as i128;
    let sum_sq: i128 = block_counts.iter().map(|&c| i128::from(c) * i128::from(c)).sum();
    let ones = i128::from(img.count(Phase::Solid));
    Ok((blocks * sum_sq - ones * ones, img.len() as i128))
}

/// Standard deviation `sigma(l)` of the local surface fraction over the
/// non-overlapping `window x window` tiles. It is the same for both phases.
pub fn local_fraction_std(img: &BinaryImage, window: usize) -> Result<f64> {
    let (num, n) = local_variance_numerator(img, window)?;
    Ok(libm::sqrt(num as f64) / n as f64)
}

/// Coarseness `C_j(l) = sigma(l) / phi_j`.
pub fn phase_coarseness(img: &BinaryImage, phase: Phase, window: usize) -> Result<f64> {
    require_two_phase(img, phase)?;
    Ok(local_fraction_std(img, window)? / img.surface_fraction(phase))
}

/// Normalized coarseness `C* = sigma(l) / sqrt(phi_0 phi_1)` over tiles of
/// side `window`; exactly 1 for `window = 1`.
pub fn coarseness_window(img: &BinaryImage, window: usize) -> Result<CoarsenessPoint> {
    require_two_phase(img, Phase::Solid)?;
    let (num, _) = local_variance_numerator(img, window)?;
    let ones = i128::from(img.count(Phase::Solid));
    let zeros = img.len() as i128 - ones;
    let value = libm::sqrt(num as f64 / (zeros * ones) as f64);
    Ok(CoarsenessPoint { window: window as u64, value })
}

/// Normalized coarseness at the window a step-k pixel covers, `2^k`.
pub fn coarseness(img: &BinaryImage, k: u32) -> Result<CoarsenessPoint> {
    let window = 1usize.checked_shl(k).ok_or(Error::InvalidParameter("window exponent too large"))?;
    coarseness_window(img, window)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard(size: usize) -> BinaryImage {
        BinaryImage::from_fn(size, size, |m, n| ((m + n) % 2) as u8).unwrap()
    }

    #[test]
    fn single_phase_two_point() {
        let img = BinaryImage::filled(6, 6, Phase::Solid).unwrap();
        assert!(two_point_correlation(&img, Phase::Solid, Boundary::Periodic).iter().all(|&v| v == 1.0));
        assert!(matches!(autocovariance(&img, Phase::Solid, Boundary::Periodic), Err(Error::SinglePhase { .. })));
    }

    #[test]
    fn checkerboard_two_point_and_autocovariance() {
        let img = checkerboard(4);
        let s2 = two_point_correlation(&img, Phase::Void, Boundary::Periodic);
        assert_eq!(s2, [0.5, 0.0, 0.5]);
        let f1 = autocovariance(&img, Phase::Void, Boundary::Periodic).unwrap();
        assert_eq!(f1.values, [1.0, -1.0, 1.0]);
    }

    #[test]
    fn lineal_path_row_pattern() {
        // One periodic row 1,1,0,0 repeated; only rows are informative here,
        // so check the row tally directly.
        let mut starts = [0u64; 3];
        accumulate_runs(&[1, 1, 0, 0], 1, true, &mut starts);
        assert_eq!(starts, [2, 1, 0]);
        // L(0) = 2/4, L(1) = 1/4, F2(1) = 0.5.
        assert_eq!(starts[1] as f64 / 4.0 / (starts[0] as f64 / 4.0), 0.5);

        let mut starts = [0u64; 3];
        accumulate_runs(&[1, 0, 0, 1], 1, true, &mut starts);
        assert_eq!(starts, [2, 1, 0]);
        let mut starts = [0u64; 3];
        accumulate_runs(&[1, 0, 0, 1], 1, false, &mut starts);
        assert_eq!(starts, [2, 0, 0]);
    }

    #[test]
    fn lineal_path_of_full_phase() {
        let img = BinaryImage::filled(5, 7, Phase::Solid).unwrap();
        let f2 = lineal_path_normalized(&img, Phase::Solid, Boundary::Periodic).unwrap();
        assert!(f2.values.iter().all(|&v| v == 1.0));
        let f2 = lineal_path_normalized(&img, Phase::Solid, Boundary::NonPeriodic).unwrap();
        assert!(f2.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn pore_size_bins() {
        assert_eq!(pore_size_bin(1), 0);
        assert_eq!(pore_size_bin(2), 0);
        assert_eq!(pore_size_bin(4), 1);
        assert_eq!(pore_size_bin(5), 1);
        assert_eq!(pore_size_bin(8), 2);
        assert_eq!(pore_size_bin(9), 2);
        assert_eq!(pore_size_bin(16), 3);
    }

    #[test]
    fn pore_size_of_stripes() {
        // Stripes of width 4: interface distances 1,2,2,1 in each section.
        let img = BinaryImage::from_fn(8, 16, |_, n| u8::from((n / 4) % 2 == 1)).unwrap();
        let hist = pore_size_histogram(&img, Phase::Solid, Boundary::Periodic);
        assert_eq!(hist, [32, 32, 0, 0, 0]);
        let f3 = pore_size_normalized(&img, Phase::Solid, Boundary::Periodic).unwrap();
        assert_eq!(f3.values[0], 1.0);
        assert_eq!(f3.values[1], 1.0);
    }

    #[test]
    fn interface_area_examples() {
        let flat = BinaryImage::filled(4, 4, Phase::Void).unwrap();
        assert_eq!(specific_interface_area(&flat, Boundary::Periodic), 0.0);
        assert_eq!(specific_interface_area(&checkerboard(4), Boundary::Periodic), 2.0);
        let stripes = BinaryImage::from_fn(8, 8, |_, n| ((n / 2) % 2) as u8).unwrap();
        assert_eq!(interface_edges(&stripes, Boundary::Periodic), 32);
        assert_eq!(specific_interface_area(&stripes, Boundary::Periodic), 0.5);
        // Non-periodic drops the seam between column 7 and column 0.
        assert_eq!(interface_edges(&stripes, Boundary::NonPeriodic), 24);
    }

    #[test]
    fn interface_area_scales_with_pixel_size() {
        let img = checkerboard(4).with_provenance(2, 4);
        assert_eq!(specific_interface_area(&img, Boundary::Periodic), 0.5);
    }

    #[test]
    fn coarseness_limits() {
        let img = BinaryImage::from_fn(8, 8, |m, n| u8::from((m * 3 + n * 5) % 7 < 3)).unwrap();
        assert_eq!(coarseness(&img, 0).unwrap().value, 1.0);
        assert_eq!(coarseness(&img, 3).unwrap().value, 0.0);
        assert_eq!(coarseness(&checkerboard(8), 1).unwrap().value, 0.0);
        assert!(matches!(coarseness(&BinaryImage::filled(6, 6, Phase::Solid).unwrap(), 0), Err(Error::SinglePhase { .. })));
        let odd = BinaryImage::from_fn(6, 4, |m, _| (m % 2) as u8).unwrap();
        assert!(matches!(coarseness(&odd, 2), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn descriptor_set_layout() {
        let img = BinaryImage::from_fn(12, 12, |m, n| u8::from((m / 3 + n / 2) % 3 == 0)).unwrap();
        let set = characterize(&img, Boundary::Periodic).unwrap();
        assert_eq!(set.curves.len(), 6);
        for d in Descriptor::ALL {
            for p in Phase::ALL {
                let c = set.curve(d, p);
                assert_eq!((c.descriptor, c.phase), (d, p));
                assert_eq!(c.values[0], 1.0);
                assert_eq!(c.range_limit(), 6);
            }
        }
    }
}
