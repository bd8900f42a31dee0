//! Command-line interface. Machine-readable JSON goes to stdout, diagnostics
//! to stderr. Exit codes: 0 success, 1 partial failure or I/O error, 2 usage
//! or configuration error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::arrays::VERSION;
use crate::corruption::{corrupt_dataset, CorruptionKind, CorruptionSpec};
use crate::error::{Error, Result};
use crate::kitti::{read_point_cloud_bin, KittiLayout};
use crate::pipeline::{augment_dataset, derive_scene_seed, resolve_frame_ids, PipelineConfig};
use crate::ply::{export_ply, ColorBy};
use crate::scene::Scene;
use crate::stats::dataset_stats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "paaug", version = VERSION, about = "Part-aware LiDAR augmentation and corruption tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Augment a KITTI-layout dataset.
    Augment(AugmentArgs),
    /// Write a corrupted copy of a dataset.
    Corrupt(CorruptArgs),
    /// Export colored PLY files for frames.
    Inspect(InspectArgs),
    /// Print dataset statistics.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Dataset root containing velodyne/, label_2/ and calib/.
    #[arg(long)]
    pub input: PathBuf,
    /// File with one frame id per line. Defaults to every scan.
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Frame worker threads. Defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl Common {
    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        })
    }
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub output: PathBuf,
    /// JSON pipeline configuration. Defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Dropout,
    Sparse,
    Jitter,
}

impl From<KindArg> for CorruptionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Dropout => CorruptionKind::Dropout,
            KindArg::Sparse => CorruptionKind::Sparse,
            KindArg::Jitter => CorruptionKind::Jitter,
        }
    }
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Fraction of points kept by `sparse`.
    #[arg(long, default_value_t = CorruptionSpec::DEFAULT_KEEP_FRACTION)]
    pub keep: f64,
    /// Jitter standard deviation in meters.
    #[arg(long, default_value_t = CorruptionSpec::DEFAULT_SIGMA)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ColorArg {
    Partition,
    Box,
    Corruption,
}

impl From<ColorArg> for ColorBy {
    fn from(c: ColorArg) -> Self {
        match c {
            ColorArg::Partition => ColorBy::Partition,
            ColorArg::Box => ColorBy::Box,
            ColorArg::Corruption => ColorBy::Corruption,
        }
    }
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub common: Common,
    /// Directory receiving `<frame>.ply`.
    #[arg(long)]
    pub output: PathBuf,
    /// Frames to export. Repeatable; defaults to the split or every scan.
    #[arg(long = "frame")]
    pub frames: Vec<String>,
    #[arg(long, value_enum, default_value = "partition")]
    pub color_by: ColorArg,
    /// Dataset root holding the uncorrupted scans, for `--color-by corruption`.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Configuration whose partition schemes are used; class defaults otherwise.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Augment(a) => cmd_augment(&a),
        Command::Corrupt(a) => cmd_corrupt(&a),
        Command::Inspect(a) => cmd_inspect(&a),
        Command::Stats(a) => cmd_stats(&a),
    }
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<PipelineConfig> {
    let mut config = match path {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = seed {
        config.master_seed = s;
    }
    Ok(config)
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn fail(code: i32, err: &Error) -> i32 {
    eprintln!("error: {err}");
    code
}

pub fn cmd_augment(args: &AugmentArgs) -> i32 {
    let config = match load_config(args.config.as_deref(), args.seed) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, &e),
    };
    let workers = args.common.workers();
    let summary = match augment_dataset(
        &args.common.input,
        &args.output,
        &config,
        args.common.split.as_deref(),
        workers,
    ) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_PARTIAL, &e),
    };
    let fired: serde_json::Map<String, serde_json::Value> = summary
        .totals
        .iter()
        .map(|r| (r.op.to_string(), json!(r.gates_fired)))
        .collect();
    print_json(&json!({
        "frames_requested": summary.frames_requested,
        "frames_written": summary.frames_written,
        "points_in": summary.points_in,
        "points_out": summary.points_out,
        "master_seed": summary.master_seed,
        "rng": summary.rng,
        "fired": fired,
        "totals": summary.totals,
        "failures": summary.failures,
        "timing": summary.timing,
    }));
    for f in &summary.failures {
        eprintln!("frame {} failed: {}", f.id, f.error);
    }
    if summary.is_success() {
        EXIT_OK
    } else {
        EXIT_PARTIAL
    }
}

pub fn cmd_corrupt(args: &CorruptArgs) -> i32 {
    let spec = CorruptionSpec {
        kind: args.kind.into(),
        keep_fraction: args.keep,
        sigma: args.sigma,
        seed: args.seed,
    };
    if let Err(e) = spec.validate() {
        return fail(EXIT_USAGE, &e);
    }
    let manifest = match corrupt_dataset(
        &args.common.input,
        &args.output,
        &spec,
        args.common.split.as_deref(),
        args.common.workers(),
    ) {
        Ok(m) => m,
        Err(e) => return fail(EXIT_PARTIAL, &e),
    };
    print_json(&manifest);
    for f in &manifest.failures {
        eprintln!("frame {} failed: {}", f.id, f.error);
    }
    if manifest.is_success() {
        EXIT_OK
    } else {
        EXIT_PARTIAL
    }
}

fn inspect_frame(
    layout: &KittiLayout,
    id: &str,
    config: &PipelineConfig,
    args: &InspectArgs,
) -> Result<PathBuf> {
    if !layout.velodyne(id).is_file() {
        return Err(Error::UnknownFrame(id.to_string()));
    }
    let frame = layout.load(id)?;
    let boxes = frame.boxes()?;
    let mut rng = config.rng.stream(derive_scene_seed(config.master_seed, id));
    let layouts = config.layouts_for(&boxes, &mut rng);
    let scene = Scene::new(frame.cloud, boxes, layouts);
    let reference = match (args.color_by, &args.reference) {
        (ColorArg::Corruption, Some(root)) => {
            Some(read_point_cloud_bin(KittiLayout::new(root).velodyne(id))?)
        }
        _ => None,
    };
    let path = args.output.join(format!("{id}.ply"));
    export_ply(&scene, &path, args.color_by.into(), reference.as_ref())?;
    Ok(path)
}

pub fn cmd_inspect(args: &InspectArgs) -> i32 {
    let config = match load_config(args.config.as_deref(), args.seed) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, &e),
    };
    if matches!(args.color_by, ColorArg::Corruption) && args.reference.is_none() {
        eprintln!("error: --color-by corruption requires --reference");
        return EXIT_USAGE;
    }
    let layout = KittiLayout::new(&args.common.input);
    let ids = if args.frames.is_empty() {
        match resolve_frame_ids(&layout, args.common.split.as_deref()) {
            Ok(ids) => ids,
            Err(e) => return fail(EXIT_PARTIAL, &e),
        }
    } else {
        args.frames.clone()
    };
    if let Err(e) = std::fs::create_dir_all(&args.output) {
        return fail(EXIT_PARTIAL, &Error::io(&args.output, e));
    }
    let mut written = Vec::new();
    let mut failures = Vec::new();
    for id in &ids {
        match inspect_frame(&layout, id, &config, args) {
            Ok(p) => written.push(p.display().to_string()),
            Err(e) => {
                eprintln!("frame {id} failed: {e}");
                failures.push(json!({"id": id, "error": e.to_string()}));
            }
        }
    }
    print_json(&json!({"written": written, "failures": failures}));
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_PARTIAL
    }
}

pub fn cmd_stats(args: &StatsArgs) -> i32 {
    let config = match load_config(args.config.as_deref(), None) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, &e),
    };
    match dataset_stats(
        &args.common.input,
        args.common.split.as_deref(),
        &config,
        args.common.workers(),
    ) {
        Ok(s) => {
            print_json(&s);
            EXIT_OK
        }
        Err(e) => fail(EXIT_PARTIAL, &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["paaug"]), EXIT_USAGE);
        assert_eq!(run(["paaug", "corrupt", "--input", "a", "--output", "b", "--kind", "blur"]), EXIT_USAGE);
        assert_eq!(run(["paaug", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn missing_config_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.json");
        let code = run([
            "paaug".as_ref(),
            "augment".as_ref(),
            "--input".as_ref(),
            dir.path().as_os_str(),
            "--output".as_ref(),
            dir.path().join("out").as_os_str(),
            "--config".as_ref(),
            missing.as_os_str(),
        ]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn version_flag_succeeds() {
        assert_eq!(run(["paaug", "--version"]), EXIT_OK);
    }
}
