use rand::Rng;

use super::{augmentable, gate, ClassParams, OpKind, OpReport};
use crate::scene::{Scene, SceneEdit};

/// Per box: with probability `p_dropout`, delete every point of one
/// partition drawn uniformly from all `T` partitions (empty ones included).
pub fn dropout_partition<R: Rng + ?Sized>(
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
) -> (Scene, OpReport) {
    let mut report = OpReport::new(OpKind::Dropout);
    let mut edit = scene.edit();
    for (i, _, layout, p) in augmentable(scene, params) {
        report.gates_drawn += 1;
        if !gate(rng, p.p_dropout) {
            continue;
        }
        report.gates_fired += 1;
        let d = rng.random_range(0..layout.partition_count());
        report.points_removed += drop_partition(scene, &mut edit, i, d);
        report.partitions_affected += 1;
    }
    (edit.finish(), report)
}

/// Marks every point of partition `d` of box `box_index` for removal and
/// returns how many there were.
pub fn drop_partition(scene: &Scene, edit: &mut SceneEdit<'_>, box_index: usize, d: usize) -> usize {
    let members = scene.assignment().partition(box_index, d);
    edit.remove_all(members);
    members.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::AugParams;
    use crate::geometry::{Box3D, ObjectClass, PartitionLayout, PartitionScheme};
    use crate::point::{Point, PointCloud};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scene() -> Scene {
        let b = Box3D::new([0.0; 3], [4.0, 2.0, 2.0], 0.0, ObjectClass::Car, 0);
        let layout = PartitionLayout::PartAware(PartitionScheme::default_for(ObjectClass::Car));
        let mut pts = vec![Point::new(30.0, 1.0, 0.0, 0.5)];
        // partition 0 only: x, y, z all negative
        pts.extend((0..5).map(|i| Point::new(-0.1 * (i + 1) as f32, -0.3, -0.4, 0.2)));
        Scene::new(PointCloud::new(pts), vec![b], vec![Some(layout)])
    }

    fn params(p: f64) -> ClassParams {
        ClassParams::new().with(
            ObjectClass::Car,
            AugParams {
                p_dropout: p,
                ..AugParams::disabled()
            },
        )
    }

    #[test]
    fn closed_gate_is_identity() {
        let s = scene();
        let (out, report) = dropout_partition(&s, &params(0.0), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(out.cloud().bit_identical(s.cloud()));
        assert_eq!(report.gates_fired, 0);
    }

    #[test]
    fn forced_partition_removes_all_foreground() {
        let s = scene();
        let mut edit = s.edit();
        assert_eq!(drop_partition(&s, &mut edit, 0, 0), 5);
        let out = edit.finish();
        assert_eq!(out.assignment().foreground_count(), 0);
        assert_eq!(out.points(), &[Point::new(30.0, 1.0, 0.0, 0.5)]);
    }

    #[test]
    fn open_gate_drops_exactly_one_partition() {
        let s = scene();
        for seed in 0..32 {
            let (out, report) = dropout_partition(&s, &params(1.0), &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(report.gates_fired, 1);
            assert_eq!(report.partitions_affected, 1);
            assert_eq!(out.points().len(), s.points().len() - report.points_removed);
            assert!(report.points_removed == 0 || report.points_removed == 5);
        }
    }
}
