//! Ordered composition of the operators, per-frame seeding and the
//! dataset-level driver.

mod config;
mod dataset;
mod seed;

pub use config::{ClassConfig, PipelineConfig, RngAlgorithm};
pub use dataset::{
    augment_dataset, resolve_frame_ids, run_frames, subset_split, subset_split_file, tree_digest,
    DatasetSummary, FrameFailure, FrameRecord, Timing,
};
pub use seed::{derive_scene_seed, fnv1a64};

use rand::Rng;

use crate::augment::{apply_op, OpReport};
use crate::error::Result;
use crate::geometry::Box3D;
use crate::kitti::Frame;
use crate::point::PointCloud;
use crate::scene::Scene;

#[derive(Debug, Clone)]
pub struct AugmentedScene {
    pub scene: Scene,
    pub reports: Vec<OpReport>,
    pub seed: u64,
}

/// Runs the configured operators over an already-built scene, drawing from
/// `rng`. Each operator sees the previous operator's output.
pub fn run_ops<R: Rng + ?Sized>(scene: Scene, config: &PipelineConfig, rng: &mut R) -> (Scene, Vec<OpReport>) {
    let params = config.class_params();
    let mut scene = scene;
    let mut reports = Vec::with_capacity(config.order.len());
    for op in &config.order {
        let (next, report) = apply_op(*op, &scene, &params, rng);
        scene = next;
        reports.push(report);
    }
    (scene, reports)
}

/// Augments one scene from a seed. In random-partition mode the layouts are
/// drawn first from the same stream.
pub fn pa_aug_scene(cloud: PointCloud, boxes: Vec<Box3D>, config: &PipelineConfig, seed: u64) -> AugmentedScene {
    let mut rng = config.rng.stream(seed);
    let layouts = config.layouts_for(&boxes, &mut rng);
    let scene = Scene::new(cloud, boxes, layouts);
    let (scene, reports) = run_ops(scene, config, &mut rng);
    AugmentedScene {
        scene,
        reports,
        seed,
    }
}

/// Augments a parsed frame with the seed derived from its id.
pub fn augment_frame(frame: &Frame, config: &PipelineConfig) -> Result<AugmentedScene> {
    let boxes = frame.boxes()?;
    let seed = derive_scene_seed(config.master_seed, &frame.id);
    Ok(pa_aug_scene(frame.cloud.clone(), boxes, config, seed))
}

/// Checks that `output` is the input background, bit-identical and in
/// order, plus foreground points only. Returns a description of the first
/// violation.
pub fn verify_closure(input: &Scene, output: &Scene) -> std::result::Result<(), String> {
    if input.boxes() != output.boxes() {
        return Err("box set changed".into());
    }
    let background = |s: &Scene| -> Vec<[u32; 4]> {
        s.points()
            .iter()
            .zip(&s.assignment().membership)
            .filter(|(_, m)| m.is_background())
            .map(|(p, _)| p.bits())
            .collect()
    };
    let before = background(input);
    let after = background(output);
    if before != after {
        return Err(format!(
            "background differs: {} points before, {} after",
            before.len(),
            after.len()
        ));
    }
    let reassigned = output.reassigned();
    if reassigned.assignment() != output.assignment() {
        return Err("output assignment is stale".into());
    }
    let fg = output.assignment().foreground_count();
    if fg + after.len() != output.points().len() {
        return Err("output is not foreground plus background".into());
    }
    Ok(())
}
