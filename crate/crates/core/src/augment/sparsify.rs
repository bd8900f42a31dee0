use rand::Rng;

use super::{augmentable, gate, ClassParams, OpKind, OpReport};
use crate::geometry::farthest_point_sampling;
use crate::scene::{Scene, SceneEdit};

/// Per partition holding strictly more than `sparse_threshold` points: with
/// probability `p_sparse`, keep exactly `sparse_threshold` of them chosen by
/// farthest point sampling and delete the rest.
pub fn sparsify_partition<R: Rng + ?Sized>(
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
) -> (Scene, OpReport) {
    let mut report = OpReport::new(OpKind::Sparse);
    let mut edit = scene.edit();
    for (i, _, layout, p) in augmentable(scene, params) {
        for j in 0..layout.partition_count() {
            if scene.assignment().partition(i, j).len() <= p.sparse_threshold {
                continue;
            }
            report.gates_drawn += 1;
            if !gate(rng, p.p_sparse) {
                continue;
            }
            report.gates_fired += 1;
            report.partitions_affected += 1;
            report.points_removed += sparsify_one(scene, &mut edit, i, j, p.sparse_threshold, rng);
        }
    }
    (edit.finish(), report)
}

/// Keeps `keep` FPS-selected points of partition `j` of box `box_index` and
/// marks the others for removal. Returns the number removed.
pub fn sparsify_one<R: Rng + ?Sized>(
    scene: &Scene,
    edit: &mut SceneEdit<'_>,
    box_index: usize,
    j: usize,
    keep: usize,
    rng: &mut R,
) -> usize {
    let members = scene.assignment().partition(box_index, j);
    if members.len() <= keep {
        return 0;
    }
    let pts: Vec<_> = members.iter().map(|&m| scene.points()[m]).collect();
    let chosen = farthest_point_sampling(&pts, keep, rng).expect("keep < partition size");
    let mut kept = vec![false; members.len()];
    for c in chosen {
        kept[c] = true;
    }
    let mut removed = 0;
    for (local, &global) in members.iter().enumerate() {
        if !kept[local] {
            edit.remove(global);
            removed += 1;
        }
    }
    removed
}
