//! Runs the full PA-AUG pipeline on one synthetic scene and prints what
//! each operator did.

use paaug::pipeline::{pa_aug_scene, PipelineConfig};
use paaug::synthetic::{synthetic_frame, SyntheticSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> paaug::Result<()> {
    let frame = synthetic_frame("000000", &SyntheticSpec::default(), &mut ChaCha8Rng::seed_from_u64(1));
    let boxes = frame.boxes()?;
    println!("input: {} points, {} boxes", frame.cloud.len(), boxes.len());

    let config = PipelineConfig::default();
    let out = pa_aug_scene(frame.cloud, boxes, &config, 42);
    for r in &out.reports {
        println!(
            "{:>8}: fired {:>2}/{:<2}  -{:<4} +{}",
            r.op.as_str(),
            r.gates_fired,
            r.gates_drawn,
            r.points_removed,
            r.points_added
        );
    }
    println!("output: {} points", out.scene.points().len());
    Ok(())
}
