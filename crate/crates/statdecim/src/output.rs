//! CSV and JSON artifacts. Every CSV has a fixed header row.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use statdecim_core::analysis::LengthEntry;
use statdecim_core::descriptors::{DescriptorCurve, DescriptorSet};
use statdecim_core::{Descriptor, Phase};

use crate::error::{Error, Result};
use crate::experiment::ExperimentSummary;

pub const LONG_HEADER: [&str; 5] = ["r", "beta", "phase", "k", "value"];

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file)))
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// One descriptor of a set as `r,phase0,phase1`.
pub fn write_wide(path: &Path, set: &DescriptorSet, descriptor: Descriptor) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["r", "phase0", "phase1"])?;
    let void = set.curve(descriptor, Phase::Void);
    let solid = set.curve(descriptor, Phase::Solid);
    for (l, (a, b)) in void.values.iter().zip(&solid.values).enumerate() {
        w.write_record([void.distance(l).to_string(), a.to_string(), b.to_string()])?;
    }
    finish(w, path)
}

/// Curves in long format `r,beta,phase,k,value`; `r` is in full-resolution
/// pixels.
pub fn write_long<'a>(path: &Path, curves: impl IntoIterator<Item = &'a DescriptorCurve>) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(LONG_HEADER)?;
    for c in curves {
        for (l, v) in c.values.iter().enumerate() {
            w.write_record([
                c.distance(l).to_string(),
                c.descriptor.beta().to_string(),
                c.phase.label().to_string(),
                c.step.to_string(),
                v.to_string(),
            ])?;
        }
    }
    finish(w, path)
}

pub fn write_lengths(path: &Path, lengths: &[LengthEntry]) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["beta", "phase", "descriptor", "length", "reached"])?;
    for e in lengths {
        w.write_record([
            e.beta.to_string(),
            e.phase.label().to_string(),
            e.descriptor.name().to_string(),
            e.length.to_string(),
            e.reached.to_string(),
        ])?;
    }
    finish(w, path)
}

/// Files written by [`write_experiment`], relative to its directory.
pub const EXPERIMENT_FILES: [&str; 6] = [
    "global_error.csv",
    "descriptors.csv",
    "correlation_lengths.csv",
    "optimal_steps.csv",
    "coarseness.csv",
    "members.csv",
];

/// Writes the ensemble tables: `<E_k>` and its deviation per method, mean
/// full-resolution descriptors, their correlation lengths, the step counts
/// of the min/mean/max length, coarseness traces and per-member errors.
pub fn write_experiment(dir: &Path, summary: &ExperimentSummary) -> Result<()> {
    let path = dir.join(EXPERIMENT_FILES[0]);
    let mut w = create(&path)?;
    w.write_record(["method", "k", "mean", "std", "realizations"])?;
    let count = summary.members.len().to_string();
    for e in &summary.errors {
        for (k, s) in e.global_error.iter().enumerate() {
            w.write_record([e.method.name(), &k.to_string(), &s.mean.to_string(), &s.std.to_string(), &count])?;
        }
    }
    finish(w, &path)?;

    write_long(&dir.join(EXPERIMENT_FILES[1]), &summary.mean_curves)?;
    write_lengths(&dir.join(EXPERIMENT_FILES[2]), &summary.lengths)?;

    let path = dir.join(EXPERIMENT_FILES[3]);
    let mut w = create(&path)?;
    w.write_record(["statistic", "length", "z"])?;
    let m = &summary.markers;
    for (name, marker) in [("min", m.min), ("mean", m.mean), ("max", m.max)] {
        w.write_record([name, &marker.length.to_string(), &marker.z.to_string()])?;
    }
    finish(w, &path)?;

    let path = dir.join(EXPERIMENT_FILES[4]);
    let mut w = create(&path)?;
    w.write_record(["k", "window", "mean", "std"])?;
    for c in &summary.coarseness {
        w.write_record([c.k.to_string(), c.window.to_string(), c.mean.to_string(), c.std.to_string()])?;
    }
    finish(w, &path)?;

    let path = dir.join(EXPERIMENT_FILES[5]);
    let mut w = create(&path)?;
    w.write_record(["seed", "phi0", "phi1", "length", "z", "method", "k", "global_error", "coarseness"])?;
    for member in &summary.members {
        for run in &member.runs {
            for (k, err) in run.global_errors.iter().enumerate() {
                w.write_record([
                    member.seed.to_string(),
                    member.phi[0].to_string(),
                    member.phi[1].to_string(),
                    member.characteristic_length.to_string(),
                    member.z.to_string(),
                    run.method.name().to_string(),
                    k.to_string(),
                    err.to_string(),
                    member.coarseness[k].value.to_string(),
                ])?;
            }
        }
    }
    finish(w, &path)
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n").and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}
