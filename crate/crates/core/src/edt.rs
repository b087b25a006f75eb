//! Exact squared Euclidean distance transform.
//!
//! Two separable passes: a 1D scan along columns followed by the lower
//! envelope of parabolas along rows (Felzenszwalb and Huttenlocher). With a
//! periodic boundary each line is treated as a ring; the row pass evaluates
//! the envelope over three tiled copies of the line, which is enough because
//! the nearest periodic image is never more than half a period away.

use alloc::vec;
use alloc::vec::Vec;

use crate::descriptors::Boundary;
use crate::image::{BinaryImage, Phase};

/// Marker for "no feature reachable".
pub const UNREACHABLE: u64 = u64::MAX;

/// Squared distance from every pixel center to the nearest pixel center
/// labelled `target`. Pixels of phase `target` get 0. If `target` does not
/// occur every entry is [`UNREACHABLE`].
pub fn squared_distance_to(img: &BinaryImage, target: Phase, boundary: Boundary) -> Vec<u64> {
    let (rows, cols) = (img.rows(), img.cols());
    let periodic = boundary == Boundary::Periodic;
    let label = target.label();

    // Column pass: 1D distance to the nearest feature in the same column.
    let mut column_dist = vec![UNREACHABLE; rows * cols];
    let mut line = vec![false; rows];
    let mut dist = vec![UNREACHABLE; rows];
    for n in 0..cols {
        for m in 0..rows {
            line[m] = img.get(m, n) == label;
        }
        line_distance(&line, periodic, &mut dist);
        for m in 0..rows {
            column_dist[m * cols + n] = dist[m];
        }
    }

    // Row pass on squared column distances.
    let mut out = vec![UNREACHABLE; rows * cols];
    let mut envelope = Envelope::with_capacity(3 * cols);
    for m in 0..rows {
        let f: Vec<u64> = column_dist[m * cols..(m + 1) * cols]
            .iter()
            .map(|&d| if d == UNREACHABLE { UNREACHABLE } else { d * d })
            .collect();
        envelope.transform(&f, periodic, &mut out[m * cols..(m + 1) * cols]);
    }
    out
}

// 1D distance (not squared) to the nearest `true` entry.
fn line_distance(line: &[bool], periodic: bool, out: &mut [u64]) {
    let n = line.len();
    out.iter_mut().for_each(|d| *d = UNREACHABLE);
    if !line.iter().any(|&b| b) {
        return;
    }
    let laps = if periodic { 2 } else { 1 };
    // Forward.
    let mut last: Option<usize> = None;
    for t in 0..laps * n {
        let i = t % n;
        if line[i] {
            last = Some(t);
        }
        if let Some(p) = last {
            out[i] = out[i].min((t - p) as u64);
        }
    }
    // Backward.
    let mut next: Option<usize> = None;
    for t in (0..laps * n).rev() {
        let i = t % n;
        if line[i] {
            next = Some(t);
        }
        if let Some(p) = next {
            out[i] = out[i].min((p - t) as u64);
        }
    }
}

struct Envelope {
    sites: Vec<i64>,
    values: Vec<u64>,
    bounds: Vec<f64>,
}

impl Envelope {
    fn with_capacity(cap: usize) -> Self {
        Envelope { sites: Vec::with_capacity(cap), values: Vec::with_capacity(cap), bounds: Vec::with_capacity(cap + 1) }
    }

    // Lower envelope of q -> f(p) + (q - p)^2 over finite samples, evaluated
    // at q = 0..len.
    fn transform(&mut self, f: &[u64], periodic: bool, out: &mut [u64]) {
        let n = f.len() as i64;
        let (lo, hi) = if periodic { (-n, 2 * n) } else { (0, n) };
        self.sites.clear();
        self.values.clear();
        self.bounds.clear();
        for p in lo..hi {
            let fp = f[p.rem_euclid(n) as usize];
            if fp == UNREACHABLE {
                continue;
            }
            loop {
                match self.sites.last() {
                    None => {
                        self.sites.push(p);
                        self.values.push(fp);
                        self.bounds.push(f64::NEG_INFINITY);
                        break;
                    }
                    Some(&v) => {
                        let fv = *self.values.last().unwrap();
                        let s = intersection(v, fv, p, fp);
                        if s <= *self.bounds.last().unwrap() {
                            self.sites.pop();
                            self.values.pop();
                            self.bounds.pop();
                        } else {
                            self.sites.push(p);
                            self.values.push(fp);
                            self.bounds.push(s);
                            break;
                        }
                    }
                }
            }
        }
        if self.sites.is_empty() {
            out.iter_mut().for_each(|d| *d = UNREACHABLE);
            return;
        }
        let mut k = 0;
        for (q, slot) in out.iter_mut().enumerate() {
            let q = q as i64;
            while k + 1 < self.sites.len() && self.bounds[k + 1] < q as f64 {
                k += 1;
            }
            let d = q - self.sites[k];
            *slot = self.values[k] + (d * d) as u64;
        }
    }
}

// Abscissa where the parabolas rooted at v and p intersect.
#[inline]
fn intersection(v: i64, fv: u64, p: i64, fp: u64) -> f64 {
    let num = (fp as f64 + (p * p) as f64) - (fv as f64 + (v * v) as f64);
    num / (2 * (p - v)) as f64
}
