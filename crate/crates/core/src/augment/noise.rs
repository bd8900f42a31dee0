use rand::Rng;

use super::{augmentable, gate, place_in_cell, ClassParams, OpKind, OpReport};
use crate::point::Point;
use crate::scene::{Scene, SceneEdit};

/// Per partition, empty ones included: with probability `p_noise`, append
/// `noise_count` points uniform over the partition's canonical cell with
/// reflectance uniform in `[0, 1]`.
pub fn noise_partition<R: Rng + ?Sized>(
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
) -> (Scene, OpReport) {
    let mut report = OpReport::new(OpKind::Noise);
    let mut edit = scene.edit();
    for (i, _, layout, p) in augmentable(scene, params) {
        for j in 0..layout.partition_count() {
            report.gates_drawn += 1;
            if !gate(rng, p.p_noise) {
                continue;
            }
            report.gates_fired += 1;
            report.partitions_affected += 1;
            report.points_added += add_noise(scene, &mut edit, i, j, p.noise_count, rng);
        }
    }
    (edit.finish(), report)
}

/// Appends `count` uniform points to partition `j` of box `box_index`.
pub fn add_noise<R: Rng + ?Sized>(
    scene: &Scene,
    edit: &mut SceneEdit<'_>,
    box_index: usize,
    j: usize,
    count: usize,
    rng: &mut R,
) -> usize {
    let frame = scene.boxes()[box_index].frame();
    let cell = scene
        .layout(box_index)
        .expect("noise target has a layout")
        .cell(j);
    for _ in 0..count {
        let c = cell.sample(rng);
        let reflectance: f32 = rng.random_range(0.0..=1.0);
        let [x, y, z] = place_in_cell(&frame, &cell, c);
        edit.add(Point::new(x, y, z, reflectance));
    }
    count
}
