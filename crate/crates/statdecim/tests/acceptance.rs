//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use statdecim::experiment::{run_experiment, ExperimentConfig, ExperimentSummary, MethodKind};
use statdecim::io::{self, Format};
use statdecim::materials::{self, Material, MaterialSpec};
use statdecim_core::analysis::AutoOptions;
use statdecim_core::descriptors::{self, lineal_path_counts, pore_size_histogram, two_point_counts};
use statdecim_core::generators::{DiskSpec, DiskVariant};
use statdecim_core::{
    auto_decimate, build_ladder, characterize, optimal_steps, BinaryImage, Boundary, Descriptor, Method, Phase,
};

const BOUNDARIES: [Boundary; 2] = [Boundary::Periodic, Boundary::NonPeriodic];

#[derive(Default)]
struct Report {
    passed: usize,
    failed: Vec<String>,
}

impl Report {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if pass {
            self.passed += 1;
        } else {
            self.failed.push(id.to_string());
        }
    }
}

fn info(detail: String) {
    println!("       {detail}");
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

/// Disk geometry of the overlapping-disk reference material shrunk eight
/// times, at the reference density: structure of a few tens of pixels.
fn od_like(side: usize, seed: u64) -> DiskSpec {
    let disks = (2560.0 * (side as f64 / 1024.0).powi(2)).round() as usize;
    DiskSpec {
        variant: DiskVariant::Overlapping,
        disks,
        histogram_disks: None,
        r_min: 1,
        r_max: 31,
        mu: 6.25,
        sigma: 7.5,
        side,
        seed,
    }
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut comparisons = 0;
    for seed in 0..50u64 {
        let rows = 1 + (seed as usize * 7 + 3) % 24;
        let cols = 1 + (seed as usize * 13 + 5) % 24;
        let g = oracle::random_grid(rows, cols, 1000 + seed, 15 + seed % 70);
        let img = BinaryImage::new(rows, cols, g.pixels.clone()).unwrap();
        for boundary in BOUNDARIES {
            let periodic = boundary == Boundary::Periodic;
            for phase in Phase::ALL {
                let label = phase.label();
                let s2 = two_point_counts(&img, phase, boundary);
                if (s2.hits, s2.trials) != oracle::two_point(&g, label, periodic) {
                    mismatches.push(format!("S2 seed {seed} {boundary} phase {label}"));
                }
                let l = lineal_path_counts(&img, phase, boundary);
                if (l.hits, l.trials) != oracle::lineal_path(&g, label, periodic) {
                    mismatches.push(format!("L seed {seed} {boundary} phase {label}"));
                }
                comparisons += 2;
                if img.is_two_phase() {
                    if pore_size_histogram(&img, phase, boundary) != oracle::pore_histogram(&g, label, periodic) {
                        mismatches.push(format!("P seed {seed} {boundary} phase {label}"));
                    }
                    comparisons += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < Duration::from_secs(10);
    r.record(
        "1 oracle equality",
        pass,
        format!("50 images <= 24x24, {comparisons} count comparisons, {} mismatches, {} (limit 10 s)", mismatches.len(), secs(elapsed)),
    );
    for m in mismatches.iter().take(5) {
        info(m.clone());
    }
}

fn criterion_2(r: &mut Report) {
    let mut problems = Vec::new();
    let mut worst_symmetry = 0.0f64;
    let results: Vec<_> = Material::ALL
        .par_iter()
        .map(|&m| (m, materials::generate(&m.spec(512, 3)).map(|g| g.image)))
        .collect();
    for (material, image) in results {
        let img = match image {
            Ok(img) => img,
            Err(e) => {
                problems.push(format!("{material}: generation failed: {e}"));
                continue;
            }
        };
        let set = match characterize(&img, Boundary::Periodic) {
            Ok(set) => set,
            Err(e) => {
                problems.push(format!("{material}: {e}"));
                continue;
            }
        };
        for phase in Phase::ALL {
            let phi = img.surface_fraction(phase);
            if set.curve(Descriptor::Autocovariance, phase).values[0] != 1.0 {
                problems.push(format!("{material}: F1(0) != 1 for phase {}", phase.label()));
            }
            if descriptors::two_point_correlation(&img, phase, Boundary::Periodic)[0] != phi {
                problems.push(format!("{material}: S2(0) != phi_{}", phase.label()));
            }
            if descriptors::lineal_path(&img, phase, Boundary::Periodic)[0] != phi {
                problems.push(format!("{material}: L(0) != phi_{}", phase.label()));
            }
            if set.curve(Descriptor::PoreSize, phase).values[0] != 1.0 {
                problems.push(format!("{material}: F3(0) != 1 for phase {}", phase.label()));
            }
        }
        let f0 = &set.curve(Descriptor::Autocovariance, Phase::Void).values;
        let f1 = &set.curve(Descriptor::Autocovariance, Phase::Solid).values;
        let sym = f0.iter().zip(f1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_symmetry = worst_symmetry.max(sym);
        if sym >= 1e-12 {
            problems.push(format!("{material}: |F1(0) - F1(1)| = {sym:e}"));
        }
    }
    r.record(
        "2 normalization limits",
        problems.is_empty(),
        format!(
            "id/od/logk1-3 at 512x512: F1(0) = 1, S2(0) = L(0) = phi_j, F3(0) = 1 exactly; max phase asymmetry {worst_symmetry:e} (limit 1e-12)"
        ),
    );
    for p in &problems {
        info(p.clone());
    }
}

fn criterion_3(r: &mut Report) {
    let start = Instant::now();
    let mean_phi0 = |material: Material| -> Result<(f64, f64), String> {
        let phis = (0..10u64)
            .into_par_iter()
            .map(|seed| {
                materials::generate(&material.spec(1024, seed))
                    .map(|g| g.image.surface_fraction(Phase::Void))
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<f64>, String>>()?;
        let (mean, std) = statdecim_core::ensemble_stats(&phis).map_err(|e| e.to_string())?;
        Ok((mean, std))
    };
    let od = mean_phi0(Material::Od);
    let logk = mean_phi0(Material::Logk1);
    let elapsed = start.elapsed();
    let (od_ok, od_text) = match od {
        Ok((m, s)) => ((m - 0.5059).abs() <= 0.05, format!("OD I=40 <phi0> = {m:.4} (sd {s:.4}), target 0.5059 +- 0.05")),
        Err(e) => (false, format!("OD failed: {e}")),
    };
    let (logk_ok, logk_text) = match logk {
        Ok((m, s)) => ((m - 0.4969).abs() <= 0.03, format!("LoGK1 b=75 a0=127.5 <phi0> = {m:.4} (sd {s:.4}), target 0.4969 +- 0.03")),
        Err(e) => (false, format!("LoGK1 failed: {e}")),
    };
    let in_time = elapsed < Duration::from_secs(300);
    r.record(
        "3 generator statistics",
        od_ok && logk_ok && in_time,
        format!("1024x1024, 10 seeds each: {od_text}; {logk_text}; {} (limit 300 s)", secs(elapsed)),
    );
}

fn criterion_4(r: &mut Report) {
    let mut bad = Vec::new();
    for ell in 1..=4096u64 {
        // Largest n with 3 * 2^n <= ell, or 0.
        let expected = if ell < 3 { 0 } else { (0..13).rev().find(|&n| 3u64 << n <= ell).unwrap() };
        let got = optimal_steps(ell as f64, 4096, 4096);
        if got != expected {
            bad.push(format!("l = {ell}: got {got}, expected {expected}"));
        }
    }
    r.record(
        "4 optimal-step identity",
        bad.is_empty(),
        format!("l = 1..4096 at 4096x4096 vs max(0, floor(log2(l/3))): {} mismatches", bad.len()),
    );
    for b in bad.iter().take(5) {
        info(b.clone());
    }
}

fn flat_and_rise(errors: &[f64], z: usize) -> Option<(f64, f64)> {
    if z + 2 >= errors.len() {
        return None;
    }
    let span = &errors[1.min(z)..=z];
    let flat = if z == 0 {
        1.0
    } else {
        span.iter().copied().fold(0.0, f64::max) / span.iter().copied().fold(f64::INFINITY, f64::min)
    };
    Some((flat, errors[z + 2] / errors[z]))
}

fn criterion_5(r: &mut Report, summary: &ExperimentSummary) {
    let mut passing = 0;
    let mut lines = Vec::new();
    for m in &summary.members {
        let z = m.z as usize;
        let errors = m.method_mean_errors();
        let ok = match flat_and_rise(&errors, z) {
            Some((flat, rise)) => {
                let ok = flat < 3.0 && rise > 5.0;
                lines.push(format!(
                    "seed {}: l = {}, Z = {z}, max/min <E_k> over 1..=Z = {flat:.2}, <E_Z+2>/<E_Z> = {rise:.2}",
                    m.seed, m.characteristic_length
                ));
                ok
            }
            None => {
                lines.push(format!("seed {}: Z = {z} leaves no step Z+2 within K = 6", m.seed));
                false
            }
        };
        passing += usize::from(ok);
    }
    r.record(
        "5 error-curve shape",
        passing >= 4,
        format!("OD-like 1024x1024, 5 seeds, 3 methods, K = 6: {passing}/5 seeds flat (< 3x) up to Z and rising (> 5x) by Z+2 (need 4)"),
    );
    for l in lines {
        info(l);
    }
    let z = summary.markers.min.z as usize;
    for e in &summary.errors {
        let means: Vec<f64> = e.global_error.iter().map(|s| s.mean).collect();
        if let Some((flat, rise)) = flat_and_rise(&means, z) {
            info(format!("ensemble {}: Z = {z} from mean curves, flat {flat:.2}, rise {rise:.2}", e.method));
        }
    }
    let upto = |kind: MethodKind| -> f64 {
        let e = summary.errors.iter().find(|e| e.method == kind).unwrap();
        e.global_error[1..].iter().map(|s| s.mean).sum()
    };
    info(format!(
        "summed <E_k>, k >= 1: random {:.3e}, bilinear {:.3e}, bicubic {:.3e}",
        upto(MethodKind::Random),
        upto(MethodKind::Bilinear),
        upto(MethodKind::Bicubic)
    ));
}

fn criterion_6(r: &mut Report, summary: &ExperimentSummary) {
    let mut exact_one = true;
    let mut above = 0;
    let mut monotone = true;
    let mut lines = Vec::new();
    for m in &summary.members {
        let trace: Vec<f64> = m.coarseness.iter().map(|c| c.value).collect();
        exact_one &= trace[0] == 1.0;
        let z = m.z as usize;
        above += usize::from(trace[z] > 0.9);
        let rises = trace.windows(2).filter(|w| w[1] > w[0] + 0.02).count();
        monotone &= rises == 0;
        let shown: Vec<String> = trace.iter().map(|v| format!("{v:.3}")).collect();
        lines.push(format!("seed {}: Z = {z}, C* = [{}]", m.seed, shown.join(", ")));
    }
    r.record(
        "6 coarseness gate",
        exact_one && above >= 4 && monotone,
        format!(
            "same ensemble: C*_0 = 1 exactly: {exact_one}; C*_Z > 0.9 on {above}/5 seeds (need 4); non-increasing within 0.02: {monotone}"
        ),
    );
    for l in lines {
        info(l);
    }
}

fn criterion_7(r: &mut Report) {
    let start = Instant::now();
    let spec = Material::Od.spec(4096, 7);
    let first = materials::generate(&spec).unwrap().image;
    let again = materials::generate(&spec).unwrap().image;
    let mut identical = first == again;
    let mut size_law = true;
    for method in [Method::Random { seed: 7 }, Method::Bilinear, Method::Bicubic] {
        let a = build_ladder(&first, method, 8, false).unwrap();
        let b = build_ladder(&again, method, 8, false).unwrap();
        for (k, (x, y)) in a.images.iter().zip(&b.images).enumerate() {
            identical &= io::encode(x, Format::PbmBinary) == io::encode(y, Format::PbmBinary);
            size_law &= x.rows() == 4096 >> k && x.cols() == 4096 >> k && x.pixel_size() == 1 << k;
        }
        size_law &= a.images.len() == 9 && a.last().rows() == 16;
    }
    r.record(
        "7 decimation determinism and size law",
        identical && size_law,
        format!(
            "OD 4096x4096, 3 methods x 8 steps, two runs: byte-identical {identical}; 4096 -> 16 halving per step {size_law}; {}",
            secs(start.elapsed())
        ),
    );
}

fn criterion_8(r: &mut Report) {
    let fixture = statdecim_core::generators::place_disks(&od_like(768, 21)).unwrap().image;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.pbm");
    io::save(&fixture, &path, Format::PbmBinary).unwrap();
    let (loaded, _) = io::load(&path, None).unwrap();
    let result = auto_decimate(&loaded, Method::Bicubic, AutoOptions::default());
    match result {
        Ok(out) => {
            let ell = out.report.characteristic_length;
            let identity = if ell < 3.0 { 0 } else { (ell / 3.0).log2().floor() as u32 };
            let in_bracket = (12.0..24.0).contains(&ell);
            let pass = in_bracket
                && out.report.z == 2
                && identity == 2
                && (out.image.rows(), out.image.cols()) == (192, 192);
            r.record(
                "8 end-to-end 768x768",
                pass,
                format!(
                    "OD-style fixture via PBM, bicubic: l = {ell} (bracket [12, 24): {in_bracket}), Z = {} (identity {identity}), output {}x{}",
                    out.report.z,
                    out.image.rows(),
                    out.image.cols()
                ),
            );
        }
        Err(e) => r.record("8 end-to-end 768x768", false, format!("autodecimate failed: {e}")),
    }
}

fn main() {
    let start = Instant::now();
    let mut report = Report::default();
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    let mut config = ExperimentConfig::custom(MaterialSpec::Disks(od_like(1024, 0)), 5);
    config.max_k = 6;
    config.base_seed = 1;
    match run_experiment(&config) {
        Ok(summary) => {
            criterion_5(&mut report, &summary);
            criterion_6(&mut report, &summary);
        }
        Err(e) => {
            report.record("5 error-curve shape", false, format!("experiment failed: {e}"));
            report.record("6 coarseness gate", false, format!("experiment failed: {e}"));
        }
    }
    criterion_7(&mut report);
    criterion_8(&mut report);
    println!(
        "acceptance: {} passed, {} failed, {}",
        report.passed,
        report.failed.len(),
        secs(start.elapsed())
    );
    if !report.failed.is_empty() {
        println!("failed: {}", report.failed.join(", "));
        std::process::exit(1);
    }
}
