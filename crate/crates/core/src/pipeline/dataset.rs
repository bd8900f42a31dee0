use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{augment_frame, PipelineConfig};
use crate::augment::{OpKind, OpReport};
use crate::error::{Error, Result};
use crate::kitti::{read_split, write_split, KittiLayout};

pub const SUMMARY_FILE: &str = "augment_summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub id: String,
    pub seed: u64,
    pub boxes: usize,
    pub points_in: usize,
    pub points_out: usize,
    pub reports: Vec<OpReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFailure {
    pub id: String,
    pub error: String,
}

/// Wall-clock figures. Kept out of the summary file so output trees stay
/// reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub frames_per_second: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub rng: String,
    pub master_seed: u64,
    pub frames_requested: usize,
    pub frames_written: usize,
    pub points_in: usize,
    pub points_out: usize,
    /// Per-operator totals in pipeline order.
    pub totals: Vec<OpReport>,
    pub failures: Vec<FrameFailure>,
    pub frames: Vec<FrameRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl DatasetSummary {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fired(&self, op: OpKind) -> usize {
        self.totals
            .iter()
            .find(|r| r.op == op)
            .map_or(0, |r| r.gates_fired)
    }
}

/// Frame ids from a split file, or every scan under `velodyne/` when no
/// split is given.
pub fn resolve_frame_ids(input: &KittiLayout, split: Option<&Path>) -> Result<Vec<String>> {
    match split {
        Some(path) => read_split(path),
        None => input.frame_ids(),
    }
}

/// Runs `work` for every id on a pool of `workers` threads. Results come
/// back in id order regardless of scheduling.
pub fn run_frames<T, F>(ids: &[String], workers: usize, work: F) -> Result<Vec<(String, Result<T>)>>
where
    T: Send,
    F: Fn(&str) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        ids.par_iter()
            .map(|id| (id.clone(), work(id)))
            .collect()
    }))
}

/// Augments every listed frame into `output_root` in KITTI layout, copying
/// labels and calibration verbatim, and writes `augment_summary.json`.
/// Frame-level failures are recorded in the summary and do not stop the run.
pub fn augment_dataset(
    input_root: impl AsRef<Path>,
    output_root: impl AsRef<Path>,
    config: &PipelineConfig,
    split: Option<&Path>,
    workers: usize,
) -> Result<DatasetSummary> {
    config.validate()?;
    let start = Instant::now();
    let input = KittiLayout::new(input_root.as_ref());
    let output = KittiLayout::new(output_root.as_ref());
    let ids = resolve_frame_ids(&input, split)?;
    output.create_dirs()?;

    let results = run_frames(&ids, workers, |id| {
        let frame = input.load(id)?;
        let augmented = augment_frame(&frame, config)?;
        output.write_frame_from(&input, id, augmented.scene.cloud())?;
        Ok(FrameRecord {
            id: id.to_string(),
            seed: augmented.seed,
            boxes: augmented.scene.boxes().len(),
            points_in: frame.cloud.len(),
            points_out: augmented.scene.points().len(),
            reports: augmented.reports,
        })
    })?;

    let mut summary = DatasetSummary {
        rng: config.rng.id().to_string(),
        master_seed: config.master_seed,
        frames_requested: ids.len(),
        frames_written: 0,
        points_in: 0,
        points_out: 0,
        totals: config.order.iter().map(|op| OpReport::new(*op)).collect(),
        failures: Vec::new(),
        frames: Vec::new(),
        timing: None,
    };
    for (id, result) in results {
        match result {
            Ok(record) => {
                summary.frames_written += 1;
                summary.points_in += record.points_in;
                summary.points_out += record.points_out;
                for (total, r) in summary.totals.iter_mut().zip(&record.reports) {
                    total.accumulate(r);
                }
                summary.frames.push(record);
            }
            Err(e) => summary.failures.push(FrameFailure {
                id,
                error: e.to_string(),
            }),
        }
    }

    let path = output.root().join(SUMMARY_FILE);
    let json = serde_json::to_string_pretty(&summary)?;
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;

    let elapsed = start.elapsed().as_secs_f64();
    summary.timing = Some(Timing {
        elapsed_ms: elapsed * 1e3,
        frames_per_second: if elapsed > 0.0 {
            summary.frames_written as f64 / elapsed
        } else {
            0.0
        },
        workers: workers.max(1),
    });
    Ok(summary)
}

/// Uniform subset without replacement of `round(fraction * n)` ids (half
/// rounds up), returned sorted.
pub fn subset_split(ids: &[String], fraction: f64, seed: u64) -> Result<Vec<String>> {
    if ids.is_empty() {
        return Err(Error::EmptySplit);
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    let n = ids.len();
    let keep = ((fraction * n as f64).round() as usize).min(n);
    let mut rng = super::RngAlgorithm::ChaCha8.stream(seed);
    let mut chosen: Vec<String> = index::sample(&mut rng, n, keep)
        .into_iter()
        .map(|i| ids[i].clone())
        .collect();
    chosen.sort();
    Ok(chosen)
}

pub fn subset_split_file(
    input: impl AsRef<Path>,
    output: impl AsRef<Path>,
    fraction: f64,
    seed: u64,
) -> Result<Vec<String>> {
    let ids = read_split(input)?;
    let subset = subset_split(&ids, fraction, seed)?;
    write_split(&subset, output)?;
    Ok(subset)
}

/// SHA-256 over every file below `root`, visited in sorted relative-path
/// order. Each file contributes its `/`-separated relative path, a NUL, its
/// length as little-endian u64 and its bytes.
pub fn tree_digest(root: impl AsRef<Path>) -> Result<String> {
    let root = root.as_ref();
    let mut files = Vec::new();
    collect_files(root, &mut files)?;
    let mut rel: Vec<(String, PathBuf)> = files
        .into_iter()
        .map(|p| {
            let r = p
                .strip_prefix(root)
                .expect("walked below root")
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join("/");
            (r, p)
        })
        .collect();
    rel.sort();
    let mut hasher = Sha256::new();
    for (name, path) in rel {
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        hasher.update(name.as_bytes());
        hasher.update([0u8]);
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(&bytes);
    }
    Ok(hex::encode(hasher.finalize()))
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_dir() {
            collect_files(&path, out)?;
        } else {
            out.push(path);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{i:06}")).collect()
    }

    #[test]
    fn full_fraction_is_identity() {
        assert_eq!(subset_split(&ids(50), 1.0, 3).unwrap(), ids(50));
    }

    #[test]
    fn forty_percent_of_train_split() {
        let subset = subset_split(&ids(3712), 0.4, 0).unwrap();
        assert_eq!(subset.len(), 1485);
        assert!(subset.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subset, subset_split(&ids(3712), 0.4, 0).unwrap());
        assert_ne!(subset, subset_split(&ids(3712), 0.4, 1).unwrap());
    }

    #[test]
    fn subset_errors() {
        assert!(matches!(subset_split(&[], 0.5, 0), Err(Error::EmptySplit)));
        for f in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(subset_split(&ids(3), f, 0), Err(Error::InvalidFraction(_))));
        }
    }

    #[test]
    fn digest_depends_on_names_and_bytes() {
        let a = tempfile::tempdir().unwrap();
        fs::create_dir_all(a.path().join("x")).unwrap();
        fs::write(a.path().join("x/f.bin"), b"abc").unwrap();
        let d1 = tree_digest(a.path()).unwrap();
        assert_eq!(d1, tree_digest(a.path()).unwrap());
        fs::write(a.path().join("x/f.bin"), b"abd").unwrap();
        assert_ne!(d1, tree_digest(a.path()).unwrap());
        fs::write(a.path().join("x/f.bin"), b"abc").unwrap();
        fs::rename(a.path().join("x/f.bin"), a.path().join("x/g.bin")).unwrap();
        assert_ne!(d1, tree_digest(a.path()).unwrap());
    }
}
