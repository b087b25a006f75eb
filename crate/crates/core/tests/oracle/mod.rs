//! Brute-force reference implementations of the descriptor counts.
//!
//! Each oracle enumerates every pixel, offset and axis directly and shares
//! no code with the library.
#![allow(dead_code)]

pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

impl Grid {
    pub fn at(&self, m: usize, n: usize) -> u8 {
        self.pixels[m * self.cols + n]
    }

    /// Pixel at an unwrapped position, or `None` outside the image when not
    /// periodic.
    fn sample(&self, m: i64, n: i64, periodic: bool) -> Option<u8> {
        let (rows, cols) = (self.rows as i64, self.cols as i64);
        if periodic {
            Some(self.at(m.rem_euclid(rows) as usize, n.rem_euclid(cols) as usize))
        } else if (0..rows).contains(&m) && (0..cols).contains(&n) {
            Some(self.at(m as usize, n as usize))
        } else {
            None
        }
    }
}

pub fn limit(g: &Grid) -> usize {
    g.rows.min(g.cols) / 2
}

/// (hits, trials) for pairs at axial offset r that both carry `label`.
pub fn two_point(g: &Grid, label: u8, periodic: bool) -> (Vec<u64>, Vec<u64>) {
    let mut hits = vec![0; limit(g) + 1];
    let mut trials = vec![0; limit(g) + 1];
    for r in 0..=limit(g) as i64 {
        for m in 0..g.rows as i64 {
            for n in 0..g.cols as i64 {
                for (dm, dn) in [(0, r), (r, 0)] {
                    if let Some(b) = g.sample(m + dm, n + dn, periodic) {
                        trials[r as usize] += 1;
                        if g.at(m as usize, n as usize) == label && b == label {
                            hits[r as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    (hits, trials)
}

/// (hits, trials) for segments of r + 1 pixels lying wholly in `label`.
pub fn lineal_path(g: &Grid, label: u8, periodic: bool) -> (Vec<u64>, Vec<u64>) {
    let mut hits = vec![0; limit(g) + 1];
    let mut trials = vec![0; limit(g) + 1];
    for r in 0..=limit(g) as i64 {
        for m in 0..g.rows as i64 {
            for n in 0..g.cols as i64 {
                for (dm, dn) in [(0, 1), (1, 0)] {
                    let cells: Option<Vec<u8>> = (0..=r).map(|t| g.sample(m + dm * t, n + dn * t, periodic)).collect();
                    if let Some(cells) = cells {
                        trials[r as usize] += 1;
                        if cells.iter().all(|&c| c == label) {
                            hits[r as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    (hits, trials)
}

/// Squared distance from (m, n) to the nearest pixel labelled `target`.
pub fn nearest_sq(g: &Grid, m: usize, n: usize, target: u8, periodic: bool) -> Option<u64> {
    let (rows, cols) = (g.rows as i64, g.cols as i64);
    let mut best = None;
    for a in 0..rows {
        for b in 0..cols {
            if g.at(a as usize, b as usize) != target {
                continue;
            }
            let (mut dy, mut dx) = ((a - m as i64).abs(), (b - n as i64).abs());
            if periodic {
                dy = dy.min(rows - dy);
                dx = dx.min(cols - dx);
            }
            let d = (dy * dy + dx * dx) as u64;
            best = Some(best.map_or(d, |x: u64| x.min(d)));
        }
    }
    best
}

/// Histogram of floor(distance to the interface) over pixels of `label`,
/// where the interface lies half a pixel before the nearest opposite pixel.
pub fn pore_histogram(g: &Grid, label: u8, periodic: bool) -> Vec<u64> {
    let mut hist = vec![0; limit(g) + 1];
    for m in 0..g.rows {
        for n in 0..g.cols {
            if g.at(m, n) != label {
                continue;
            }
            if let Some(d2) = nearest_sq(g, m, n, 1 - label, periodic) {
                let bin = ((d2 as f64).sqrt() - 0.5).floor() as usize;
                if bin < hist.len() {
                    hist[bin] += 1;
                }
            }
        }
    }
    hist
}

/// Differing 4-neighbor pairs.
pub fn interface_pairs(g: &Grid, periodic: bool) -> u64 {
    let mut count = 0;
    for m in 0..g.rows as i64 {
        for n in 0..g.cols as i64 {
            for (dm, dn) in [(0, 1), (1, 0)] {
                if let Some(b) = g.sample(m + dm, n + dn, periodic) {
                    count += u64::from(b != g.at(m as usize, n as usize));
                }
            }
        }
    }
    count
}

/// Deterministic pseudo-random image with roughly `percent` % ones.
pub fn random_grid(rows: usize, cols: usize, seed: u64, percent: u64) -> Grid {
    let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
    let pixels = (0..rows * cols)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            u8::from(s % 100 < percent)
        })
        .collect();
    Grid { rows, cols, pixels }
}
