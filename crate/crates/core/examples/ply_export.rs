//! Writes colored PLY files for a scene, colored by partition and by box,
//! plus a jittered copy highlighted against its original.

use paaug::corruption::{corrupt_frame, CorruptionKind, CorruptionSpec};
use paaug::pipeline::PipelineConfig;
use paaug::ply::{export_ply, ColorBy};
use paaug::synthetic::{synthetic_frame, SyntheticSpec};
use paaug::Scene;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> paaug::Result<()> {
    let out_dir = std::env::temp_dir().join("paaug_ply");
    std::fs::create_dir_all(&out_dir).map_err(|e| paaug::Error::Config(e.to_string()))?;

    let frame = synthetic_frame("000007", &SyntheticSpec::default(), &mut ChaCha8Rng::seed_from_u64(8));
    let boxes = frame.boxes()?;
    let layouts = PipelineConfig::default().layouts_for(&boxes, &mut ChaCha8Rng::seed_from_u64(0));
    let scene = Scene::new(frame.cloud.clone(), boxes.clone(), layouts.clone());
    export_ply(&scene, out_dir.join("partitions.ply"), ColorBy::Partition, None)?;
    export_ply(&scene, out_dir.join("boxes.ply"), ColorBy::Box, None)?;

    // Highlight points a jittered copy no longer shares with the original.
    let (jittered, _) = corrupt_frame(&frame, &CorruptionSpec::new(CorruptionKind::Jitter, 1))?;
    let corrupted = Scene::new(jittered, boxes, layouts);
    export_ply(&corrupted, out_dir.join("jitter.ply"), ColorBy::Corruption, Some(&frame.cloud))?;

    println!("wrote partitions.ply, boxes.ply and jitter.ply to {}", out_dir.display());
    Ok(())
}
