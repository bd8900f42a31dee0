//! Generators for corrupted evaluation sets: KITTI-D (dense partition
//! removal), KITTI-S (global farthest point subsampling) and KITTI-J
//! (Gaussian coordinate jitter).
//!
//! Label and calibration files are copied unchanged. Each frame draws from
//! its own stream seeded by [`derive_scene_seed`]`(spec.seed, frame_id)`.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{farthest_point_sampling, Box3D, PartitionLayout, PartitionScheme};
use crate::kitti::{Frame, KittiLayout};
use crate::pipeline::{derive_scene_seed, resolve_frame_ids, run_frames, FrameFailure, RngAlgorithm};
use crate::point::PointCloud;
use crate::scene::Scene;

pub const MANIFEST_FILE: &str = "corruption_manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorruptionKind {
    Dropout,
    Sparse,
    Jitter,
}

impl CorruptionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CorruptionKind::Dropout => "dropout",
            CorruptionKind::Sparse => "sparse",
            CorruptionKind::Jitter => "jitter",
        }
    }
}

impl fmt::Display for CorruptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorruptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dropout" => Ok(CorruptionKind::Dropout),
            "sparse" => Ok(CorruptionKind::Sparse),
            "jitter" => Ok(CorruptionKind::Jitter),
            other => Err(Error::Config(format!("unknown corruption kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub kind: CorruptionKind,
    /// Fraction of points kept by the sparse generator.
    pub keep_fraction: f64,
    /// Jitter standard deviation in meters.
    pub sigma: f64,
    pub seed: u64,
}

impl CorruptionSpec {
    pub const DEFAULT_KEEP_FRACTION: f64 = 0.30;
    pub const DEFAULT_SIGMA: f64 = 0.1;

    pub fn new(kind: CorruptionKind, seed: u64) -> Self {
        Self {
            kind,
            keep_fraction: Self::DEFAULT_KEEP_FRACTION,
            sigma: Self::DEFAULT_SIGMA,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.keep_fraction > 0.0 && self.keep_fraction <= 1.0) {
            return Err(Error::InvalidFraction(self.keep_fraction));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma must be finite and >= 0, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// One partition removed by [`corrupt_dropout`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedPartition {
    pub box_index: usize,
    pub partition: usize,
    pub points: usize,
}

/// Median of the nonzero counts; the mean of the middle two for an even
/// number of them. `None` when every count is zero.
pub fn nonzero_median(counts: &[usize]) -> Option<f64> {
    let mut nz: Vec<usize> = counts.iter().copied().filter(|c| *c > 0).collect();
    if nz.is_empty() {
        return None;
    }
    nz.sort_unstable();
    let m = nz.len();
    Some(if m % 2 == 1 {
        nz[m / 2] as f64
    } else {
        (nz[m / 2 - 1] + nz[m / 2]) as f64 / 2.0
    })
}

/// KITTI-D. Every object with at least two non-empty partitions (under its
/// class's default part-aware scheme) loses one partition, drawn uniformly
/// among those holding at least the median nonzero count. Boxes are visited
/// in index order with one draw each.
pub fn corrupt_dropout<R: Rng + ?Sized>(
    cloud: &PointCloud,
    boxes: &[Box3D],
    rng: &mut R,
) -> (PointCloud, Vec<DroppedPartition>) {
    let layouts = boxes
        .iter()
        .map(|b| Some(PartitionLayout::PartAware(PartitionScheme::default_for(b.class))))
        .collect();
    let scene = Scene::new(cloud.clone(), boxes.to_vec(), layouts);
    let assignment = scene.assignment();
    let mut edit = scene.edit();
    let mut dropped = Vec::new();
    for (i, parts) in assignment.members.iter().enumerate() {
        let counts: Vec<usize> = parts.iter().map(Vec::len).collect();
        if counts.iter().filter(|c| **c > 0).count() < 2 {
            continue;
        }
        let median = nonzero_median(&counts).expect("two non-empty partitions");
        let dense: Vec<usize> = (0..counts.len())
            .filter(|k| counts[*k] > 0 && counts[*k] as f64 >= median)
            .collect();
        let k = dense[rng.random_range(0..dense.len())];
        edit.remove_all(&parts[k]);
        dropped.push(DroppedPartition {
            box_index: i,
            partition: k,
            points: counts[k],
        });
    }
    (edit.finish().into_cloud(), dropped)
}

/// KITTI-S. Keeps exactly `round(keep_fraction * n)` points chosen by
/// farthest point sampling over the whole cloud. Survivors keep their
/// original relative order.
pub fn corrupt_sparse<R: Rng + ?Sized>(
    cloud: &PointCloud,
    keep_fraction: f64,
    rng: &mut R,
) -> Result<PointCloud> {
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(Error::InvalidFraction(keep_fraction));
    }
    if cloud.is_empty() {
        return Ok(cloud.clone());
    }
    let keep = ((keep_fraction * cloud.len() as f64).round() as usize).min(cloud.len());
    let mut indices = farthest_point_sampling(&cloud.points, keep, rng)?;
    indices.sort_unstable();
    Ok(cloud.select(&indices))
}

/// KITTI-J. Adds independent N(0, sigma^2) noise to x, y and z of every
/// point, drawn point by point in x, y, z order. Reflectance is untouched.
pub fn corrupt_jitter<R: Rng + ?Sized>(cloud: &PointCloud, sigma: f64, rng: &mut R) -> Result<PointCloud> {
    if sigma == 0.0 {
        return Ok(cloud.clone());
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::Config(format!("invalid sigma {sigma}: {e}")))?;
    Ok(cloud
        .iter()
        .map(|p| {
            let mut q = *p;
            q.x = (p.x as f64 + normal.sample(rng)) as f32;
            q.y = (p.y as f64 + normal.sample(rng)) as f32;
            q.z = (p.z as f64 + normal.sample(rng)) as f32;
            q
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionRecord {
    pub id: String,
    pub seed: u64,
    pub points_in: usize,
    pub points_out: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<DroppedPartition>,
}

/// Corrupts one frame with its derived seed.
pub fn corrupt_frame(frame: &Frame, spec: &CorruptionSpec) -> Result<(PointCloud, CorruptionRecord)> {
    spec.validate()?;
    let seed = derive_scene_seed(spec.seed, &frame.id);
    let mut rng = RngAlgorithm::ChaCha8.stream(seed);
    let mut dropped = Vec::new();
    let cloud = match spec.kind {
        CorruptionKind::Dropout => {
            let (cloud, d) = corrupt_dropout(&frame.cloud, &frame.boxes()?, &mut rng);
            dropped = d;
            cloud
        }
        CorruptionKind::Sparse => corrupt_sparse(&frame.cloud, spec.keep_fraction, &mut rng)?,
        CorruptionKind::Jitter => corrupt_jitter(&frame.cloud, spec.sigma, &mut rng)?,
    };
    let record = CorruptionRecord {
        id: frame.id.clone(),
        seed,
        points_in: frame.cloud.len(),
        points_out: cloud.len(),
        dropped,
    };
    Ok((cloud, record))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionManifest {
    pub spec: CorruptionSpec,
    pub rng: String,
    pub frames_requested: usize,
    pub frames_written: usize,
    pub failures: Vec<FrameFailure>,
    pub frames: Vec<CorruptionRecord>,
}

impl CorruptionManifest {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Writes a corrupted copy of every listed frame plus
/// `corruption_manifest.json` under `output_root`.
pub fn corrupt_dataset(
    input_root: impl AsRef<Path>,
    output_root: impl AsRef<Path>,
    spec: &CorruptionSpec,
    split: Option<&Path>,
    workers: usize,
) -> Result<CorruptionManifest> {
    spec.validate()?;
    let input = KittiLayout::new(input_root.as_ref());
    let output = KittiLayout::new(output_root.as_ref());
    let ids = resolve_frame_ids(&input, split)?;
    output.create_dirs()?;

    let results = run_frames(&ids, workers, |id| {
        let frame = input.load(id)?;
        let (cloud, record) = corrupt_frame(&frame, spec)?;
        output.write_frame_from(&input, id, &cloud)?;
        Ok(record)
    })?;

    let mut manifest = CorruptionManifest {
        spec: *spec,
        rng: RngAlgorithm::ChaCha8.id().to_string(),
        frames_requested: ids.len(),
        frames_written: 0,
        failures: Vec::new(),
        frames: Vec::new(),
    };
    for (id, result) in results {
        match result {
            Ok(record) => {
                manifest.frames_written += 1;
                manifest.frames.push(record);
            }
            Err(e) => manifest.failures.push(FrameFailure {
                id,
                error: e.to_string(),
            }),
        }
    }
    let path = output.root().join(MANIFEST_FILE);
    fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
