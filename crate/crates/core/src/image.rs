//! Binary raster of phase labels.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// One of the two phases of the material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Phase {
    /// Label 0.
    Void,
    /// Label 1.
    Solid,
}

impl Phase {
    pub const ALL: [Phase; 2] = [Phase::Void, Phase::Solid];

    #[inline]
    pub const fn label(self) -> u8 {
        match self {
            Phase::Void => 0,
            Phase::Solid => 1,
        }
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.label() as usize
    }

    pub const fn from_label(label: u8) -> Option<Phase> {
        match label {
            0 => Some(Phase::Void),
            1 => Some(Phase::Solid),
            _ => None,
        }
    }

    #[inline]
    pub const fn other(self) -> Phase {
        match self {
            Phase::Void => Phase::Solid,
            Phase::Solid => Phase::Void,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// An `rows x cols` image whose pixels are phase labels in `{0, 1}`, stored
/// one byte per pixel in row-major order.
///
/// Besides the pixels the image carries its position on a decimation ladder:
/// the number of halving steps already applied and the pixel size, i.e. how
/// many full-resolution pixels one current pixel spans along each axis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
    step: u32,
    pixel_size: u64,
}

impl BinaryImage {
    /// Builds a full-resolution image (step 0, pixel size 1) from row-major
    /// labels.
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyImage { rows, cols });
        }
        if pixels.len() != rows * cols {
            return Err(Error::BufferSize { rows, cols, len: pixels.len() });
        }
        if let Some(i) = pixels.iter().position(|&v| v > 1) {
            return Err(Error::InvalidPixel { row: i / cols, col: i % cols, value: pixels[i] });
        }
        Ok(BinaryImage { rows, cols, pixels, step: 0, pixel_size: 1 })
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel; any
    /// non-zero value maps to phase 1.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyImage { rows, cols });
        }
        let mut pixels = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            for n in 0..cols {
                pixels.push(u8::from(f(m, n) != 0));
            }
        }
        Ok(BinaryImage { rows, cols, pixels, step: 0, pixel_size: 1 })
    }

    /// Image filled with a single phase.
    pub fn filled(rows: usize, cols: usize, phase: Phase) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| phase.label())
    }

    /// Same pixels tagged with ladder provenance.
    pub fn with_provenance(mut self, step: u32, pixel_size: u64) -> Self {
        self.step = step;
        self.pixel_size = pixel_size.max(1);
        self
    }

    // Crate-internal constructor for operators whose output is {0,1} by
    // construction.
    pub(crate) fn from_raw(rows: usize, cols: usize, pixels: Vec<u8>, step: u32, pixel_size: u64) -> Self {
        debug_assert_eq!(pixels.len(), rows * cols);
        debug_assert!(pixels.iter().all(|&v| v <= 1));
        BinaryImage { rows, cols, pixels, step, pixel_size }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of decimation steps applied to reach this image.
    #[inline]
    pub fn step(&self) -> u32 {
        self.step
    }

    /// Full-resolution pixels per current pixel along one axis.
    #[inline]
    pub fn pixel_size(&self) -> u64 {
        self.pixel_size
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    /// Number of pixels carrying the label of `phase`.
    pub fn count(&self, phase: Phase) -> u64 {
        let ones = self.pixels.iter().map(|&v| u64::from(v)).sum::<u64>();
        match phase {
            Phase::Solid => ones,
            Phase::Void => self.pixels.len() as u64 - ones,
        }
    }

    /// Surface fraction of `phase`.
    ///
    /// The two fractions are `n_0 / (M N)` and `n_1 / (M N)` with
    /// `n_0 + n_1 = M N`; each is the correctly rounded quotient.
    pub fn surface_fraction(&self, phase: Phase) -> f64 {
        self.count(phase) as f64 / self.pixels.len() as f64
    }

    /// True when both phases occur.
    pub fn is_two_phase(&self) -> bool {
        let ones = self.count(Phase::Solid);
        ones > 0 && ones < self.pixels.len() as u64
    }

    /// Swaps the two phase labels.
    pub fn complement(&self) -> Self {
        BinaryImage {
            pixels: self.pixels.iter().map(|&v| 1 - v).collect(),
            ..self.clone()
        }
    }

    /// Top-left `rows x cols` sub-image, keeping provenance.
    pub fn crop(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyImage { rows, cols });
        }
        if rows > self.rows || cols > self.cols {
            return Err(Error::InvalidParameter("crop window exceeds the image"));
        }
        let mut pixels = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            pixels.extend_from_slice(&self.row(m)[..cols]);
        }
        Ok(BinaryImage { rows, cols, pixels, step: self.step, pixel_size: self.pixel_size })
    }
}

impl fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryImage")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("step", &self.step)
            .field("pixel_size", &self.pixel_size)
            .field("ones", &self.count(Phase::Solid))
            .finish()
    }
}
