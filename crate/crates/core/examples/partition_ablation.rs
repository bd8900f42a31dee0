//! Compares part-aware partitions with randomly placed cuboids, and shows
//! 2, 4 and 8 partition variants on the same car.

use paaug::geometry::{Box3D, ObjectClass, PartitionLayout, PartitionScheme, RandomPartitionLayout};
use paaug::pipeline::{pa_aug_scene, PipelineConfig};
use paaug::synthetic::{synthetic_frame, SyntheticSpec};
use paaug::Scene;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn occupancy(scene: &Scene) -> Vec<usize> {
    scene.assignment().members[0].iter().map(Vec::len).collect()
}

fn main() -> paaug::Result<()> {
    let spec = SyntheticSpec {
        boxes: 1,
        points_per_box: 800,
        background_points: 0,
        classes: vec![ObjectClass::Car],
    };
    let frame = synthetic_frame("0", &spec, &mut ChaCha8Rng::seed_from_u64(2));
    let boxes: Vec<Box3D> = frame.boxes()?;

    for t in [2, 4, 8] {
        let layout = PartitionLayout::PartAware(PartitionScheme::part_aware(ObjectClass::Car, t)?);
        let scene = Scene::new(frame.cloud.clone(), boxes.clone(), vec![Some(layout)]);
        println!("part-aware T={t}: {:?}", occupancy(&scene));
    }
    let random = RandomPartitionLayout::generate(8, &mut ChaCha8Rng::seed_from_u64(4));
    let scene = Scene::new(frame.cloud.clone(), boxes.clone(), vec![Some(PartitionLayout::Random(random))]);
    println!("random    T=8: {:?} ({} unclaimed)", occupancy(&scene), scene.assignment().unpartitioned[0].len());

    for random_partitions in [false, true] {
        let config = PipelineConfig { random_partitions, ..PipelineConfig::default() };
        let out = pa_aug_scene(frame.cloud.clone(), boxes.clone(), &config, 9);
        println!("pipeline random_partitions={random_partitions}: {} points out", out.scene.points().len());
    }
    Ok(())
}
