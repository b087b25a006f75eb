//! Command-line interface. Every command resolves its arguments, writes its
//! artifacts and one manifest whose `config` replays the run.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use statdecim_core::analysis::{correlation_lengths, AutoOptions};
use statdecim_core::generators::{DiskSpec, DiskVariant, LogSpec};
use statdecim_core::{
    auto_decimate, build_ladder, characterize, descriptors, BinaryImage, Boundary, Descriptor, Phase, DEFAULT_BAND,
};

use crate::error::{Error, Result};
use crate::experiment::{self, ExperimentConfig, MethodKind, DEFAULT_MAX_K};
use crate::io::{self, Format};
use crate::manifest::RunManifest;
use crate::materials::{self, Material, MaterialSpec};
use crate::output;

pub const OUT_DIR_ENV: &str = "STATDECIM_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "statdecim", version, about = "Statistically sensitive decimation of two-phase images")]
pub struct Cli {
    /// Only report errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,
    /// More log output; repeat for debug messages.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn log_level(&self) -> log::LevelFilter {
        match (self.quiet, self.verbose) {
            (true, _) => log::LevelFilter::Error,
            (false, 0) => log::LevelFilter::Warn,
            (false, 1) => log::LevelFilter::Info,
            _ => log::LevelFilter::Debug,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Generate a synthetic two-phase material.
    Generate(GenerateArgs),
    /// Compute the normalized descriptors of an image.
    Characterize(CharacterizeArgs),
    /// Build a decimation ladder of K halving steps.
    Decimate(DecimateArgs),
    /// Decimate by the optimal number of steps derived from the image itself.
    Autodecimate(AutodecimateArgs),
    /// Run an ensemble experiment over realizations and methods.
    Experiment(ExperimentArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Characterize(_) => "characterize",
            Command::Decimate(_) => "decimate",
            Command::Autodecimate(_) => "autodecimate",
            Command::Experiment(_) => "experiment",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Id,
    Od,
    Logk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Periodic,
    Nonperiodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Nonperiodic => Boundary::NonPeriodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Random,
    Bilinear,
    Bicubic,
    All,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[arg(long = "type", value_enum)]
    pub kind: GeneratorKind,
    /// Image side in pixels.
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of disks [default: reference count scaled by area].
    #[arg(long)]
    pub disks: Option<usize>,
    /// Disk count the radius histogram is built for [default: the reference
    /// count without --disks, otherwise --disks].
    #[arg(long)]
    pub histogram_disks: Option<usize>,
    #[arg(long)]
    pub rmin: Option<u32>,
    #[arg(long)]
    pub rmax: Option<u32>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// LoG kernel size b (odd).
    #[arg(long)]
    pub kernel: Option<usize>,
    /// Level-cut threshold a0.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Image format [default: from the output extension].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CharacterizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "nonperiodic")]
    pub boundary: BoundaryArg,
    /// Binarization threshold for PGM input.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BAND)]
    pub band: f64,
    /// Prefix of the output files.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DecimateArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long)]
    pub steps: u32,
    /// Seed of the random method [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trim to the largest dimensions divisible by 2^K first.
    #[arg(long)]
    pub crop: bool,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Image format [default: the input's].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AutodecimateArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "nonperiodic")]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = DEFAULT_BAND)]
    pub band: f64,
    /// Trim to dimensions divisible by 2^Z when needed.
    #[arg(long)]
    pub crop: bool,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub material: Material,
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 20)]
    pub realizations: usize,
    /// Comma-separated methods, or `all`.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub methods: Vec<MethodArg>,
    #[arg(long, default_value_t = DEFAULT_MAX_K)]
    pub maxk: u32,
    /// Seed of the first realization; member w uses seed + w.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "periodic")]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = DEFAULT_BAND)]
    pub band: f64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let mut command = cli.command.clone();
    if let Some(dir) = &cli.out_dir {
        resolve_outputs(&mut command, dir);
    }
    execute(&command)
}

fn resolve_outputs(command: &mut Command, dir: &Path) {
    let out = match command {
        Command::Generate(a) => &mut a.out,
        Command::Characterize(a) => &mut a.out,
        Command::Decimate(a) => &mut a.out,
        Command::Autodecimate(a) => &mut a.out,
        Command::Experiment(a) => &mut a.out,
        Command::Replay(_) => return,
    };
    if out.is_relative() {
        *out = dir.join(&*out);
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a, command),
        Command::Characterize(a) => characterize_cmd(a, command),
        Command::Decimate(a) => decimate(a, command),
        Command::Autodecimate(a) => autodecimate(a, command),
        Command::Experiment(a) => experiment_cmd(a, command),
        Command::Replay(a) => {
            let manifest = RunManifest::read(&a.manifest)?;
            let recorded: Command = serde_json::from_value(manifest.config)?;
            if matches!(recorded, Command::Replay(_)) {
                return Err(Error::Usage("a manifest cannot replay another replay".into()));
            }
            log::info!("replaying {} from {}", recorded.name(), a.manifest.display());
            execute(&recorded)
        }
    }
}

/// `prefix` with `suffix` appended to its final component.
pub fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

/// Manifest path of an image written to `path`: `<path minus extension>.manifest.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    path.with_extension("manifest.json")
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

fn decimation_method(method: MethodArg, seed: Option<u64>) -> Result<statdecim_core::Method> {
    let kind = match method {
        MethodArg::Random => MethodKind::Random,
        MethodArg::Bilinear => MethodKind::Bilinear,
        MethodArg::Bicubic => MethodKind::Bicubic,
        MethodArg::All => return Err(Error::Usage("choose a single decimation method".into())),
    };
    if seed.is_some() && kind != MethodKind::Random {
        log::warn!("--seed has no effect with the {kind} method");
    }
    Ok(kind.method(seed.unwrap_or(0)))
}

fn load_input(path: &Path, threshold: Option<f64>) -> Result<(BinaryImage, Format)> {
    let (img, format) = io::load(path, threshold)?;
    log::info!("loaded {} ({}x{}, {format})", path.display(), img.rows(), img.cols());
    Ok((img, format))
}

fn generate(a: &GenerateArgs, command: &Command) -> Result<()> {
    let format = a
        .format
        .or_else(|| Format::from_path(&a.out))
        .ok_or_else(|| Error::Usage("cannot infer the image format; use --format or a .pbm/.pgm/.csv path".into()))?;
    let disk_flags = a.disks.is_some() || a.histogram_disks.is_some() || a.rmin.is_some() || a.rmax.is_some() || a.mu.is_some() || a.sigma.is_some();
    let log_flags = a.kernel.is_some() || a.threshold.is_some();
    let spec = match a.kind {
        GeneratorKind::Id | GeneratorKind::Od => {
            if log_flags {
                return Err(Error::Usage("--kernel and --threshold apply to --type logk only".into()));
            }
            let (variant, reference) = match a.kind {
                GeneratorKind::Id => (DiskVariant::Impenetrable, materials::ID_DISKS),
                _ => (DiskVariant::Overlapping, materials::OD_DISKS),
            };
            MaterialSpec::Disks(DiskSpec {
                variant,
                disks: a.disks.unwrap_or_else(|| materials::rescaled_disks(reference, a.size)),
                histogram_disks: a.histogram_disks.or(if a.disks.is_none() { Some(reference) } else { None }),
                r_min: a.rmin.unwrap_or(materials::R_MIN),
                r_max: a.rmax.unwrap_or(materials::R_MAX),
                mu: a.mu.unwrap_or(materials::MU),
                sigma: a.sigma.unwrap_or(materials::SIGMA),
                side: a.size,
                seed: a.seed,
            })
        }
        GeneratorKind::Logk => {
            if disk_flags {
                return Err(Error::Usage("disk flags apply to --type id|od only".into()));
            }
            MaterialSpec::Log(LogSpec {
                kernel: a.kernel.unwrap_or(materials::LOG_KERNEL),
                threshold: a.threshold.unwrap_or(127.5),
                side: a.size,
                seed: a.seed,
            })
        }
    };
    let generated = materials::generate(&spec)?;
    let img = &generated.image;
    ensure_parent(&a.out)?;
    io::save(img, &a.out, format)?;

    let boundary = Boundary::Periodic;
    let mut manifest = RunManifest::new("generate", command)?;
    manifest.seeds.push(a.seed);
    manifest.outputs.push(a.out.clone());
    manifest.record("spec", &spec)?;
    manifest.record("format", format)?;
    manifest.record("boundary", boundary)?;
    let phi = [img.surface_fraction(Phase::Void), img.surface_fraction(Phase::Solid)];
    manifest.record("phi", phi)?;
    let s = descriptors::specific_interface_area(img, boundary);
    manifest.record("s", s)?;
    if img.is_two_phase() {
        manifest.record("s_over_phi", [s / phi[0], s / phi[1]])?;
    }
    if let MaterialSpec::Disks(_) = spec {
        manifest.record("disk_count", generated.disks.len())?;
        manifest.record("disks_from_histogram", generated.from_histogram)?;
        manifest.record("disks_drawn", generated.drawn)?;
        manifest.record("disks", &generated.disks)?;
    }
    manifest.write(&manifest_path(&a.out))?;
    log::info!("wrote {} (phi0 = {:.4})", a.out.display(), phi[0]);
    Ok(())
}

#[derive(Serialize)]
struct Sidecar {
    rows: usize,
    cols: usize,
    k: u32,
    pixel_size: u64,
    boundary: Boundary,
    range_limit: usize,
    phi: [f64; 2],
    s: f64,
    s_over_phi: [f64; 2],
    band: f64,
    lengths: Vec<statdecim_core::analysis::LengthEntry>,
}

fn length_entries(table: &[[statdecim_core::CorrelationLength; 2]; 3]) -> Vec<statdecim_core::analysis::LengthEntry> {
    let mut out = Vec::with_capacity(6);
    for d in Descriptor::ALL {
        for p in Phase::ALL {
            let cl = table[d.beta() as usize - 1][p.index()];
            out.push(statdecim_core::analysis::LengthEntry {
                descriptor: d,
                beta: d.beta(),
                phase: p,
                length: cl.length,
                reached: cl.reached,
            });
        }
    }
    out
}

fn characterize_cmd(a: &CharacterizeArgs, command: &Command) -> Result<()> {
    let (img, _) = load_input(&a.input, a.threshold)?;
    let boundary = a.boundary.into();
    let set = characterize(&img, boundary)?;
    ensure_parent(&a.out)?;
    let mut manifest = RunManifest::new("characterize", command)?;
    manifest.inputs.push(a.input.clone());
    for d in Descriptor::ALL {
        let path = suffixed(&a.out, &format!("_{}.csv", d.name()));
        output::write_wide(&path, &set, d)?;
        manifest.outputs.push(path);
    }
    let lengths = length_entries(&correlation_lengths(&set, a.band));
    let sidecar = Sidecar {
        rows: set.rows,
        cols: set.cols,
        k: set.step,
        pixel_size: set.pixel_size,
        boundary,
        range_limit: set.range_limit(),
        phi: set.phi,
        s: set.s,
        s_over_phi: set.s_over_phi(),
        band: a.band,
        lengths,
    };
    let path = suffixed(&a.out, ".json");
    output::write_json(&path, &sidecar)?;
    manifest.outputs.push(path);
    manifest.record("phi", set.phi)?;
    manifest.record("s_over_phi", set.s_over_phi())?;
    manifest.write(&suffixed(&a.out, ".manifest.json"))
}

fn decimate(a: &DecimateArgs, command: &Command) -> Result<()> {
    let method = decimation_method(a.method, a.seed)?;
    let (img, input_format) = load_input(&a.input, a.threshold)?;
    let format = a.format.unwrap_or(input_format);
    let ladder = build_ladder(&img, method, a.steps, a.crop)?;
    ensure_parent(&a.out)?;
    let mut manifest = RunManifest::new("decimate", command)?;
    manifest.inputs.push(a.input.clone());
    manifest.seeds.extend(method.seed());
    let mut sizes = Vec::with_capacity(ladder.images.len());
    for (k, image) in ladder.images.iter().enumerate() {
        let path = suffixed(&a.out, &format!("_k{k}.{}", format.extension()));
        io::save(image, &path, format)?;
        manifest.outputs.push(path);
        sizes.push([image.rows(), image.cols()]);
    }
    manifest.record("method", method)?;
    manifest.record("trimmed_from", ladder.trimmed_from)?;
    manifest.record("sizes", sizes)?;
    let last = ladder.last();
    manifest.record("phi", [last.surface_fraction(Phase::Void), last.surface_fraction(Phase::Solid)])?;
    manifest.write(&suffixed(&a.out, ".manifest.json"))
}

fn autodecimate(a: &AutodecimateArgs, command: &Command) -> Result<()> {
    let method = decimation_method(a.method, a.seed)?;
    let (img, input_format) = load_input(&a.input, a.threshold)?;
    let format = a.format.unwrap_or(input_format);
    let options = AutoOptions { boundary: a.boundary.into(), band: a.band, crop: a.crop };
    let result = auto_decimate(&img, method, options)?;
    for notice in &result.report.notices {
        log::warn!("{notice}");
    }
    ensure_parent(&a.out)?;
    let mut manifest = RunManifest::new("autodecimate", command)?;
    manifest.inputs.push(a.input.clone());
    manifest.seeds.extend(method.seed());

    let image_path = suffixed(&a.out, &format!(".{}", format.extension()));
    io::save(&result.image, &image_path, format)?;
    manifest.outputs.push(image_path);
    let report_path = suffixed(&a.out, "_report.json");
    output::write_json(&report_path, &result.report)?;
    manifest.outputs.push(report_path);
    for (k, set) in result.analysis.sets.iter().enumerate() {
        let path = suffixed(&a.out, &format!("_k{k}_descriptors.csv"));
        output::write_long(&path, &set.curves)?;
        manifest.outputs.push(path);
    }
    let report = &result.report;
    manifest.record("characteristic_length", report.characteristic_length)?;
    manifest.record("z", report.z)?;
    manifest.record("size", [result.image.rows(), result.image.cols()])?;
    if let Some(step) = report.steps.last() {
        manifest.record("phi", step.phi)?;
        manifest.record("s_over_phi", step.s_over_phi)?;
    }
    log::info!("l = {}, Z = {}, output {}x{}", report.characteristic_length, report.z, result.image.rows(), result.image.cols());
    manifest.write(&suffixed(&a.out, ".manifest.json"))
}

fn experiment_cmd(a: &ExperimentArgs, command: &Command) -> Result<()> {
    let mut methods = Vec::new();
    for m in &a.methods {
        let add: &[MethodKind] = match m {
            MethodArg::All => &MethodKind::ALL,
            MethodArg::Random => &[MethodKind::Random],
            MethodArg::Bilinear => &[MethodKind::Bilinear],
            MethodArg::Bicubic => &[MethodKind::Bicubic],
        };
        for k in add {
            if !methods.contains(k) {
                methods.push(*k);
            }
        }
    }
    let config = ExperimentConfig {
        methods,
        max_k: a.maxk,
        base_seed: a.seed,
        boundary: a.boundary.into(),
        band: a.band,
        ..ExperimentConfig::new(a.material, a.size, a.realizations)
    };
    let summary = experiment::run_experiment(&config)?;
    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    output::write_experiment(&a.out, &summary)?;
    let summary_path = a.out.join("summary.json");
    output::write_json(&summary_path, &summary)?;

    let mut manifest = RunManifest::new("experiment", command)?;
    manifest.seeds = config.member_seeds().collect();
    manifest.outputs = output::EXPERIMENT_FILES.iter().map(|f| a.out.join(f)).collect();
    manifest.outputs.push(summary_path);
    manifest.record("phi", summary.phi)?;
    manifest.record("lengths", &summary.markers)?;
    manifest.write(&a.out.join("manifest.json"))
}
