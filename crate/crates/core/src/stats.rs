//! Dataset statistics: box counts per class, point counts per partition and
//! the foreground/background split.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Box3D, ObjectClass, PartitionLayout, PartitionScheme};
use crate::kitti::KittiLayout;
use crate::pipeline::{resolve_frame_ids, run_frames, PipelineConfig};
use crate::point::PointCloud;
use crate::scene::Scene;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassStats {
    pub boxes: usize,
    /// Boxes containing no points.
    pub empty_boxes: usize,
    pub points: usize,
    /// Points per partition index, summed over the class's boxes.
    pub partition_points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetStats {
    pub frames: usize,
    pub points: usize,
    pub foreground_points: usize,
    pub background_points: usize,
    /// Foreground share of all points; 0 for an empty dataset.
    pub foreground_fraction: f64,
    /// Foreground points per background point; 0 when there is no background.
    pub foreground_to_background: f64,
    pub classes: BTreeMap<ObjectClass, ClassStats>,
}

impl DatasetStats {
    pub fn merge(&mut self, other: &DatasetStats) {
        self.frames += other.frames;
        self.points += other.points;
        self.foreground_points += other.foreground_points;
        self.background_points += other.background_points;
        for (class, s) in &other.classes {
            let e = self.classes.entry(*class).or_default();
            e.boxes += s.boxes;
            e.empty_boxes += s.empty_boxes;
            e.points += s.points;
            if e.partition_points.len() < s.partition_points.len() {
                e.partition_points.resize(s.partition_points.len(), 0);
            }
            for (a, b) in e.partition_points.iter_mut().zip(&s.partition_points) {
                *a += b;
            }
        }
        self.update_ratios();
    }

    fn update_ratios(&mut self) {
        self.foreground_fraction = if self.points > 0 {
            self.foreground_points as f64 / self.points as f64
        } else {
            0.0
        };
        self.foreground_to_background = if self.background_points > 0 {
            self.foreground_points as f64 / self.background_points as f64
        } else {
            0.0
        };
    }
}

/// Part-aware scheme used for statistics: the configured one, otherwise the
/// class default.
fn stats_scheme(config: &PipelineConfig, class: ObjectClass) -> PartitionScheme {
    config
        .scheme_for(class)
        .unwrap_or_else(|| PartitionScheme::default_for(class))
}

pub fn scene_stats(cloud: &PointCloud, boxes: &[Box3D], config: &PipelineConfig) -> DatasetStats {
    let layouts = boxes
        .iter()
        .map(|b| Some(PartitionLayout::PartAware(stats_scheme(config, b.class))))
        .collect();
    let scene = Scene::new(cloud.clone(), boxes.to_vec(), layouts);
    let assignment = scene.assignment();
    let mut stats = DatasetStats {
        frames: 1,
        points: cloud.len(),
        foreground_points: assignment.foreground_count(),
        background_points: assignment.background_count(),
        ..DatasetStats::default()
    };
    for (b, parts) in boxes.iter().zip(&assignment.members) {
        let e = stats.classes.entry(b.class).or_default();
        let total: usize = parts.iter().map(Vec::len).sum();
        e.boxes += 1;
        e.points += total;
        if total == 0 {
            e.empty_boxes += 1;
        }
        if e.partition_points.len() < parts.len() {
            e.partition_points.resize(parts.len(), 0);
        }
        for (a, p) in e.partition_points.iter_mut().zip(parts) {
            *a += p.len();
        }
    }
    stats.update_ratios();
    stats
}

/// Statistics over every listed frame. Fails on the first unreadable frame.
pub fn dataset_stats(
    root: impl AsRef<Path>,
    split: Option<&Path>,
    config: &PipelineConfig,
    workers: usize,
) -> Result<DatasetStats> {
    let layout = KittiLayout::new(root.as_ref());
    let ids = resolve_frame_ids(&layout, split)?;
    let results = run_frames(&ids, workers, |id| {
        let frame = layout.load(id)?;
        Ok(scene_stats(&frame.cloud, &frame.boxes()?, config))
    })?;
    let mut total = DatasetStats::default();
    for (_, r) in results {
        total.merge(&r?);
    }
    Ok(total)
}
