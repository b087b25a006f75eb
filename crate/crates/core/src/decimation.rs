//! Size-halving decimation operators and the decimation ladder.
//!
//! Each step maps an `M x N` image to `M/2 x N/2`. Output pixel `(m, n)` is
//! derived from the `2 x 2` source block with top-left corner `(2m, 2n)`:
//!
//! * random: one pixel of the block chosen by `xi` uniform in `0..4`,
//! * bilinear: the block mean, thresholded at 1/2 (ties go to 1),
//! * bicubic: the 4-point cubic stencil `(-g0 + 9 g1 + 9 g2 - g3) / 16`
//!   applied to rows `2m-1..=2m+2` and then across the four row results,
//!   thresholded at 1/2. Rows and columns outside the image are clamped to
//!   the nearest valid index.
//!
//! Bilinear and bicubic values are integers in units of 1/4 and 1/256, so
//! the threshold comparison is exact.

use alloc::vec::Vec;
use core::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Axis, Error, Result};
use crate::image::BinaryImage;

/// Decimation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Method {
    Random { seed: u64 },
    Bilinear,
    Bicubic,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Random { .. } => "random",
            Method::Bilinear => "bilinear",
            Method::Bicubic => "bicubic",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Method::Random { seed } => Some(*seed),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Selection by `xi` in `0..4`: row offset `xi / 2`, column offset `xi % 2`.
#[inline]
pub fn random_rule(block: [[u8; 2]; 2], xi: u8) -> u8 {
    debug_assert!(xi < 4);
    block[usize::from(xi >> 1)][usize::from(xi & 1)]
}

/// Block mean thresholded at 1/2.
#[inline]
pub fn bilinear_rule(block: [[u8; 2]; 2]) -> u8 {
    let quarters = block[0][0] + block[0][1] + block[1][0] + block[1][1];
    u8::from(quarters >= 2)
}

/// Cubic stencil scaled by 16.
#[inline]
fn stencil(g: [i32; 4]) -> i32 {
    -g[0] + 9 * g[1] + 9 * g[2] - g[3]
}

/// Bicubic value of a `4 x 4` neighborhood in units of 1/256.
#[inline]
pub fn bicubic_value(neighborhood: &[[u8; 4]; 4]) -> i32 {
    let q = neighborhood.map(|row| stencil(row.map(i32::from)));
    stencil(q)
}

/// Bicubic interpolation at the block center thresholded at 1/2.
#[inline]
pub fn bicubic_rule(neighborhood: &[[u8; 4]; 4]) -> u8 {
    u8::from(bicubic_value(neighborhood) >= 128)
}

fn check_even(img: &BinaryImage) -> Result<()> {
    if img.rows() % 2 != 0 {
        return Err(Error::NotDivisible { axis: Axis::Rows, size: img.rows(), divisor: 2 });
    }
    if img.cols() % 2 != 0 {
        return Err(Error::NotDivisible { axis: Axis::Cols, size: img.cols(), divisor: 2 });
    }
    Ok(())
}

/// Random-selection offsets for step `step` of a ladder seeded with `seed`.
///
/// The stream is ChaCha8 keyed by `seed` on stream number `step`; output
/// pixel `p` (row-major) uses bits `2 (p mod 16) .. 2 (p mod 16) + 2` of
/// 32-bit word `p / 16`. The choice for a pixel therefore depends only on
/// `(seed, step, p)`.
pub struct XiStream {
    rng: ChaCha8Rng,
    word: u32,
    position: u64,
}

impl XiStream {
    pub fn new(seed: u64, step: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(step));
        XiStream { rng, word: 0, position: 0 }
    }

    /// Offset for output pixel `index`, for any index.
    pub fn at(seed: u64, step: u32, index: u64) -> u8 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(step));
        rng.set_word_pos(u128::from(index / 16));
        let word = rng.next_u32();
        ((word >> (2 * (index % 16))) & 3) as u8
    }

    /// Offset for the next output pixel in row-major order.
    pub fn next_xi(&mut self) -> u8 {
        let slot = self.position % 16;
        if slot == 0 {
            self.word = self.rng.next_u32();
        }
        self.position += 1;
        ((self.word >> (2 * slot)) & 3) as u8
    }
}

/// Applies one halving step. The output records `step + 1` and twice the
/// pixel size of the input.
pub fn decimate_step(img: &BinaryImage, method: Method) -> Result<BinaryImage> {
    check_even(img)?;
    let (rows, cols) = (img.rows() / 2, img.cols() / 2);
    let step = img.step() + 1;
    let mut out = Vec::with_capacity(rows * cols);
    match method {
        Method::Random { seed } => {
            let mut xi = XiStream::new(seed, step);
            for m in 0..rows {
                let (top, bottom) = (img.row(2 * m), img.row(2 * m + 1));
                for n in 0..cols {
                    let block = [[top[2 * n], top[2 * n + 1]], [bottom[2 * n], bottom[2 * n + 1]]];
                    out.push(random_rule(block, xi.next_xi()));
                }
            }
        }
        Method::Bilinear => {
            for m in 0..rows {
                let (top, bottom) = (img.row(2 * m), img.row(2 * m + 1));
                for n in 0..cols {
                    let block = [[top[2 * n], top[2 * n + 1]], [bottom[2 * n], bottom[2 * n + 1]]];
                    out.push(bilinear_rule(block));
                }
            }
        }
        Method::Bicubic => {
            let (src_rows, src_cols) = (img.rows() as isize, img.cols() as isize);
            let clamp_row = |i: isize| i.clamp(0, src_rows - 1) as usize;
            let clamp_col = |i: isize| i.clamp(0, src_cols - 1) as usize;
            for m in 0..rows {
                let source_rows: [&[u8]; 4] = core::array::from_fn(|t| img.row(clamp_row(2 * m as isize - 1 + t as isize)));
                for n in 0..cols {
                    let columns: [usize; 4] = core::array::from_fn(|t| clamp_col(2 * n as isize - 1 + t as isize));
                    let neighborhood = source_rows.map(|row| columns.map(|c| row[c]));
                    out.push(bicubic_rule(&neighborhood));
                }
            }
        }
    }
    Ok(BinaryImage::from_raw(rows, cols, out, step, img.pixel_size() * 2))
}

/// Images `A_0 ..= A_K` produced by repeated halving.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub method: Method,
    pub images: Vec<BinaryImage>,
    /// Original dimensions when the input was trimmed to fit `2^K`.
    pub trimmed_from: Option<(usize, usize)>,
}

impl Ladder {
    pub fn steps(&self) -> usize {
        self.images.len() - 1
    }

    pub fn last(&self) -> &BinaryImage {
        self.images.last().expect("ladder holds at least A_0")
    }
}

/// Largest dimensions not exceeding the image that are divisible by `2^steps`.
pub fn trimmed_dims(rows: usize, cols: usize, steps: u32) -> Result<(usize, usize)> {
    let unit = 1usize.checked_shl(steps).ok_or(Error::InvalidParameter("too many decimation steps"))?;
    let dims = (rows / unit * unit, cols / unit * unit);
    if dims.0 == 0 || dims.1 == 0 {
        return Err(Error::InvalidParameter("image is smaller than 2^K along an axis"));
    }
    Ok(dims)
}

/// Builds the ladder `A_0 ..= A_steps`.
///
/// Without `crop` both dimensions must be divisible by `2^steps`. With it the
/// image is first trimmed to the largest such top-left window.
pub fn build_ladder(img: &BinaryImage, method: Method, steps: u32, crop: bool) -> Result<Ladder> {
    let unit = 1usize.checked_shl(steps).ok_or(Error::InvalidParameter("too many decimation steps"))?;
    let mut trimmed_from = None;
    let base = if img.rows() % unit == 0 && img.cols() % unit == 0 {
        img.clone()
    } else if crop {
        let (rows, cols) = trimmed_dims(img.rows(), img.cols(), steps)?;
        trimmed_from = Some((img.rows(), img.cols()));
        img.crop(rows, cols)?
    } else {
        let (axis, size) = if img.rows() % unit != 0 { (Axis::Rows, img.rows()) } else { (Axis::Cols, img.cols()) };
        return Err(Error::NotDivisible { axis, size, divisor: unit });
    };
    let mut images = Vec::with_capacity(steps as usize + 1);
    images.push(base);
    for _ in 0..steps {
        let next = decimate_step(images.last().unwrap(), method)?;
        images.push(next);
    }
    Ok(Ladder { method, images, trimmed_from })
}
