//! Applies each operator on its own with the single-operator settings for
//! the Car network, always starting from the same scene.

use paaug::augment::{apply_op, AugParams, ClassParams, Network, OpKind};
use paaug::geometry::ObjectClass;
use paaug::pipeline::PipelineConfig;
use paaug::synthetic::{synthetic_frame, SyntheticSpec};
use paaug::Scene;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> paaug::Result<()> {
    let spec = SyntheticSpec {
        boxes: 8,
        points_per_box: 300,
        classes: vec![ObjectClass::Car],
        ..SyntheticSpec::default()
    };
    let frame = synthetic_frame("000000", &spec, &mut ChaCha8Rng::seed_from_u64(3));
    let boxes = frame.boxes()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let layouts = PipelineConfig::default().layouts_for(&boxes, &mut rng);
    let scene = Scene::new(frame.cloud, boxes, layouts);

    for op in OpKind::PA_AUG_ORDER {
        let params = ClassParams::new().with(ObjectClass::Car, AugParams::single_op(op, Network::Car));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (out, report) = apply_op(op, &scene, &params, &mut rng);
        println!(
            "{op:<8} p={:.1}  partitions affected {:>2}  points {} -> {}",
            params.get(ObjectClass::Car).unwrap().probability(op),
            report.partitions_affected,
            scene.points().len(),
            out.points().len()
        );
    }
    Ok(())
}
