//! Ensemble experiments: generate `W` realizations of a material, decimate
//! each with every method and aggregate the global errors, the mean
//! descriptors and the coarseness traces.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statdecim_core::analysis::{
    analyze_ladder_with, coarseness_trace, correlation_lengths, mean_curve, optimal_steps, CorrelationLength,
    DeviationGrid, LengthEntry,
};
use statdecim_core::descriptors::{CoarsenessPoint, DescriptorCurve, DescriptorSet};
use statdecim_core::{
    build_ladder, characterize, correlation_length, ensemble_stats, Boundary, Descriptor, Method, Phase,
    DEFAULT_BAND,
};

use crate::error::{Error, Result};
use crate::materials::{self, Material, MaterialSpec};

pub const DEFAULT_MAX_K: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Random,
    Bilinear,
    Bicubic,
}

impl MethodKind {
    pub const ALL: [MethodKind; 3] = [MethodKind::Random, MethodKind::Bilinear, MethodKind::Bicubic];

    pub fn method(self, seed: u64) -> Method {
        match self {
            MethodKind::Random => Method::Random { seed },
            MethodKind::Bilinear => Method::Bilinear,
            MethodKind::Bicubic => Method::Bicubic,
        }
    }

    pub fn name(self) -> &'static str {
        self.method(0).name()
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Preset the template came from, if any.
    pub material: Option<Material>,
    /// Generator settings; the seed is replaced per member.
    pub template: MaterialSpec,
    pub side: usize,
    pub realizations: usize,
    pub methods: Vec<MethodKind>,
    pub max_k: u32,
    /// Member `w` uses seed `base_seed + w` for generation and for random
    /// decimation.
    pub base_seed: u64,
    pub boundary: Boundary,
    pub band: f64,
}

impl ExperimentConfig {
    pub fn new(material: Material, side: usize, realizations: usize) -> Self {
        ExperimentConfig {
            material: Some(material),
            template: material.spec(side, 0),
            side,
            realizations,
            methods: MethodKind::ALL.to_vec(),
            max_k: DEFAULT_MAX_K,
            base_seed: 0,
            boundary: Boundary::Periodic,
            band: DEFAULT_BAND,
        }
    }

    pub fn member_seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.realizations as u64).map(|w| self.base_seed.wrapping_add(w))
    }

    /// Ensemble of an arbitrary generator template.
    pub fn custom(template: MaterialSpec, realizations: usize) -> Self {
        ExperimentConfig {
            material: None,
            side: template.side(),
            template,
            realizations,
            methods: MethodKind::ALL.to_vec(),
            max_k: DEFAULT_MAX_K,
            base_seed: 0,
            boundary: Boundary::Periodic,
            band: DEFAULT_BAND,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.template.side() != self.side {
            return Err(Error::Usage("template side differs from the experiment size".into()));
        }
        if self.realizations == 0 {
            return Err(Error::Usage("at least one realization is required".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Usage("at least one decimation method is required".into()));
        }
        if !(self.band > 0.0 && self.band < 1.0) {
            return Err(Error::Usage("band must lie in (0, 1)".into()));
        }
        let divisor = 1usize.checked_shl(self.max_k).filter(|d| *d <= self.side);
        if divisor.is_none_or(|d| self.side % d != 0) {
            return Err(Error::Usage(format!("size {} cannot be halved {} times", self.side, self.max_k)));
        }
        Ok(())
    }
}

/// Ladder of one method for one realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodRun {
    pub method: MethodKind,
    pub deviations: Vec<DeviationGrid>,
    pub global_errors: Vec<f64>,
    /// Decimated descriptor sets, `k = 1..=K`.
    #[serde(skip)]
    pub sets: Vec<DescriptorSet>,
}

/// One realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberResult {
    pub seed: u64,
    pub phi: [f64; 2],
    pub s_over_phi: [f64; 2],
    #[serde(skip)]
    pub reference: DescriptorSet,
    /// Correlation lengths of this image's own descriptors, `[beta - 1][phase]`.
    pub lengths: [[CorrelationLength; 2]; 3],
    pub characteristic_length: f64,
    pub z: u32,
    pub runs: Vec<MethodRun>,
    pub coarseness: Vec<CoarsenessPoint>,
}

impl MemberResult {
    pub fn run(&self, method: MethodKind) -> Option<&MethodRun> {
        self.runs.iter().find(|r| r.method == method)
    }

    /// Global error averaged over the methods, per step.
    pub fn method_mean_errors(&self) -> Vec<f64> {
        let steps = self.runs[0].global_errors.len();
        (0..steps)
            .map(|k| self.runs.iter().map(|r| r.global_errors[k]).sum::<f64>() / self.runs.len() as f64)
            .collect()
    }
}

pub fn run_member(config: &ExperimentConfig, seed: u64) -> Result<MemberResult> {
    let generated = materials::generate(&config.template.with_seed(seed))?;
    let image = generated.image;
    let reference = characterize(&image, config.boundary)?;
    let lengths = correlation_lengths(&reference, config.band);
    let ell = lengths.iter().flatten().map(|c| c.length).fold(f64::INFINITY, f64::min);
    let z = optimal_steps(ell, image.rows(), image.cols());
    let runs = config
        .methods
        .par_iter()
        .map(|&kind| {
            let ladder = build_ladder(&image, kind.method(seed), config.max_k, false)?;
            let analysis = analyze_ladder_with(&reference, &ladder, config.boundary)?;
            Ok(MethodRun {
                method: kind,
                deviations: analysis.deviations,
                global_errors: analysis.global_errors,
                sets: analysis.sets.into_iter().skip(1).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MemberResult {
        seed,
        phi: reference.phi,
        s_over_phi: reference.s_over_phi(),
        lengths,
        characteristic_length: ell,
        z,
        runs,
        coarseness: coarseness_trace(&image, config.max_k)?,
        reference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    fn of(values: &[f64]) -> Result<Self> {
        let (mean, std) = ensemble_stats(values)?;
        Ok(MeanStd { mean, std })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodErrors {
    pub method: MethodKind,
    /// `<E_k>` and `sigma_E_k` for `k = 0..=K`.
    pub global_error: Vec<MeanStd>,
}

/// A correlation-length statistic and the step count it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthMarker {
    pub length: f64,
    pub z: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthMarkers {
    pub min: LengthMarker,
    pub mean: LengthMarker,
    pub max: LengthMarker,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarsenessStat {
    pub k: u32,
    pub window: u64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub phi: [MeanStd; 2],
    pub errors: Vec<MethodErrors>,
    /// Ensemble-mean full-resolution descriptors, ordered by beta then phase.
    #[serde(skip)]
    pub mean_curves: Vec<DescriptorCurve>,
    /// Correlation lengths of the mean descriptors.
    pub lengths: Vec<LengthEntry>,
    pub markers: LengthMarkers,
    pub coarseness: Vec<CoarsenessStat>,
    pub members: Vec<MemberResult>,
}

/// Runs every member concurrently and reduces in seed order, so the
/// summary does not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    config.validate()?;
    let seeds: Vec<u64> = config.member_seeds().collect();
    let members = seeds
        .par_iter()
        .map(|&seed| {
            log::info!("member seed {seed}: start");
            let r = run_member(config, seed);
            log::info!("member seed {seed}: done");
            r
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(config, members)
}

pub fn summarize(config: &ExperimentConfig, members: Vec<MemberResult>) -> Result<ExperimentSummary> {
    let column = |f: &dyn Fn(&MemberResult) -> f64| -> Vec<f64> { members.iter().map(f).collect() };
    let phi = [MeanStd::of(&column(&|m| m.phi[0]))?, MeanStd::of(&column(&|m| m.phi[1]))?];

    let mut errors = Vec::with_capacity(config.methods.len());
    for (i, &method) in config.methods.iter().enumerate() {
        let global_error = (0..=config.max_k as usize)
            .map(|k| MeanStd::of(&column(&|m| m.runs[i].global_errors[k])))
            .collect::<Result<Vec<_>>>()?;
        errors.push(MethodErrors { method, global_error });
    }

    let mut mean_curves = Vec::with_capacity(6);
    let mut lengths = Vec::with_capacity(6);
    for d in Descriptor::ALL {
        for p in Phase::ALL {
            let curves: Vec<&DescriptorCurve> = members.iter().map(|m| m.reference.curve(d, p)).collect();
            let mean = mean_curve(&curves)?;
            let cl = correlation_length(&mean, config.band);
            lengths.push(LengthEntry { descriptor: d, beta: d.beta(), phase: p, length: cl.length, reached: cl.reached });
            mean_curves.push(mean);
        }
    }
    let marker = |length: f64| LengthMarker { length, z: optimal_steps(length, config.side, config.side) };
    let all: Vec<f64> = lengths.iter().map(|e| e.length).collect();
    let markers = LengthMarkers {
        min: marker(all.iter().copied().fold(f64::INFINITY, f64::min)),
        mean: marker(all.iter().sum::<f64>() / all.len() as f64),
        max: marker(all.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
    };

    let coarseness = (0..=config.max_k as usize)
        .map(|k| {
            let stat = MeanStd::of(&column(&|m| m.coarseness[k].value))?;
            Ok(CoarsenessStat { k: k as u32, window: 1 << k, mean: stat.mean, std: stat.std })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentSummary { config: config.clone(), phi, errors, mean_curves, lengths, markers, coarseness, members })
}
