//! Swap and Mix: same-class, same-partition transplantation between boxes.

use rand::Rng;

use super::{augmentable, gate, place_in_cell, ClassParams, OpKind, OpReport};
use crate::point::Point;
use crate::scene::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransplantMode {
    /// The recipient partition is replaced by the donor's points.
    Replace,
    /// The donor's points are merged into the recipient partition.
    Merge,
}

/// Per box: with probability `p_swap`, replace a uniformly chosen non-empty
/// partition `k` with partition `k` of a uniformly chosen other same-class
/// box whose partition `k` is non-empty. Donors read the input scene and
/// are left unchanged.
pub fn swap_partition<R: Rng + ?Sized>(
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
) -> (Scene, OpReport) {
    transplant_op(scene, params, rng, TransplantMode::Replace)
}

/// Same selection and mapping as [`swap_partition`] with `p_mix`, but the
/// recipient keeps its own points.
pub fn mix_partition<R: Rng + ?Sized>(
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
) -> (Scene, OpReport) {
    transplant_op(scene, params, rng, TransplantMode::Merge)
}

fn transplant_op<R: Rng + ?Sized>(
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
    mode: TransplantMode,
) -> (Scene, OpReport) {
    let op = match mode {
        TransplantMode::Replace => OpKind::Swap,
        TransplantMode::Merge => OpKind::Mix,
    };
    let mut report = OpReport::new(op);
    let mut edit = scene.edit();
    let assignment = scene.assignment();

    for (i, b, layout, p) in augmentable(scene, params) {
        report.gates_drawn += 1;
        let prob = match mode {
            TransplantMode::Replace => p.p_swap,
            TransplantMode::Merge => p.p_mix,
        };
        if !gate(rng, prob) {
            continue;
        }
        report.gates_fired += 1;

        let own = &assignment.members[i];
        let non_empty: Vec<usize> = (0..own.len()).filter(|&k| !own[k].is_empty()).collect();
        if non_empty.is_empty() {
            report.skipped_empty += 1;
            continue;
        }
        let k = non_empty[rng.random_range(0..non_empty.len())];

        let count = layout.partition_count();
        let donors: Vec<usize> = scene
            .boxes()
            .iter()
            .enumerate()
            .filter(|&(j, d)| {
                j != i
                    && d.class == b.class
                    && scene
                        .layout(j)
                        .is_some_and(|l| l.partition_count() == count)
                    && !assignment.members[j][k].is_empty()
            })
            .map(|(j, _)| j)
            .collect();
        if donors.is_empty() {
            report.skipped_no_donor += 1;
            continue;
        }
        let donor = donors[rng.random_range(0..donors.len())];

        if mode == TransplantMode::Replace {
            edit.remove_all(&own[k]);
            report.points_removed += own[k].len();
        }
        let moved = transplant_points(scene, donor, i, k);
        report.points_added += moved.len();
        report.partitions_affected += 1;
        for q in moved {
            edit.add(q);
        }
    }
    (edit.finish(), report)
}

/// Maps partition `k` of `donor` into partition `k` of `recipient`: donor
/// sensor frame to donor canonical frame, affinely onto the recipient's cell
/// (the identity for part-aware layouts), then to the recipient sensor frame.
/// Reflectance is carried over. Output follows donor point order.
pub fn transplant_points(scene: &Scene, donor: usize, recipient: usize, k: usize) -> Vec<Point> {
    let donor_box = &scene.boxes()[donor];
    let recipient_box = &scene.boxes()[recipient];
    let donor_cell = scene
        .layout(donor)
        .expect("donor has a layout")
        .cell(k);
    let recipient_cell = scene
        .layout(recipient)
        .expect("recipient has a layout")
        .cell(k);
    let donor_frame = donor_box.frame();
    let recipient_frame = recipient_box.frame();

    scene
        .assignment()
        .partition(donor, k)
        .iter()
        .map(|&idx| {
            let src = scene.points()[idx];
            let c = donor_frame.to_canonical(src.position());
            let target = donor_cell.map_to(&recipient_cell, c);
            let [x, y, z] = place_in_cell(&recipient_frame, &recipient_cell, target);
            Point::new(x, y, z, src.reflectance)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::AugParams;
    use crate::geometry::{Box3D, ObjectClass, PartitionLayout, PartitionScheme};
    use crate::point::PointCloud;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn car_layout() -> Option<PartitionLayout> {
        Some(PartitionLayout::PartAware(PartitionScheme::default_for(ObjectClass::Car)))
    }

    fn swap_params(p_swap: f64, p_mix: f64) -> ClassParams {
        ClassParams::new().with(
            ObjectClass::Car,
            AugParams {
                p_swap,
                p_mix,
                ..AugParams::disabled()
            },
        )
    }

    #[test]
    fn single_car_has_no_donor() {
        let b = Box3D::new([0.0; 3], [4.0, 2.0, 2.0], 0.0, ObjectClass::Car, 0);
        let s = Scene::new(
            PointCloud::new(vec![Point::new(0.5, 0.5, 0.5, 0.3)]),
            vec![b],
            vec![car_layout()],
        );
        let (out, report) = swap_partition(&s, &swap_params(1.0, 0.0), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(out.cloud().bit_identical(s.cloud()));
        assert_eq!(report.skipped_no_donor, 1);
    }

    #[test]
    fn identical_boxes_translate_points() {
        // Hand-computed: both boxes are axis-aligned 2 m cubes, so the
        // canonical map is a pure translation between centers.
        let a = Box3D::new([10.0, 0.0, 0.0], [2.0; 3], 0.0, ObjectClass::Car, 0);
        let b = Box3D::new([0.0, 5.0, 0.0], [2.0; 3], 0.0, ObjectClass::Car, 1);
        let s = Scene::new(
            PointCloud::new(vec![Point::new(0.2, 5.0, 0.0, 0.7)]),
            vec![a, b],
            vec![car_layout(), car_layout()],
        );
        let k = s.assignment().membership[0];
        let k = match k {
            crate::geometry::Membership::Object { partition, .. } => partition.unwrap(),
            _ => unreachable!(),
        };
        let moved = transplant_points(&s, 1, 0, k);
        assert_eq!(moved, vec![Point::new(10.2, 0.0, 0.0, 0.7)]);
    }

    #[test]
    fn mix_cardinality_is_union() {
        let a = Box3D::new([10.0, 0.0, 0.0], [4.0, 2.0, 2.0], 0.3, ObjectClass::Car, 0);
        let b = Box3D::new([0.0, 5.0, 0.0], [4.0, 2.0, 2.0], -1.2, ObjectClass::Car, 1);
        let mut pts = Vec::new();
        // 3 points in partition 7 of box a, 5 in partition 7 of box b
        for i in 0..3 {
            let c = a.canonical_to_world([0.2 + 0.1 * i as f64, 0.5, 0.5]);
            pts.push(Point::new(c[0] as f32, c[1] as f32, c[2] as f32, 0.1));
        }
        for i in 0..5 {
            let c = b.canonical_to_world([0.5, 0.1 + 0.1 * i as f64, 0.5]);
            pts.push(Point::new(c[0] as f32, c[1] as f32, c[2] as f32, 0.9));
        }
        let s = Scene::new(PointCloud::new(pts), vec![a, b], vec![car_layout(), car_layout()]);
        assert_eq!(s.assignment().partition(0, 7).len(), 3);
        assert_eq!(s.assignment().partition(1, 7).len(), 5);

        // both boxes fire and each can only pick partition 7
        let (out, report) = mix_partition(&s, &swap_params(0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(report.gates_fired, 2);
        assert_eq!(out.assignment().partition(0, 7).len(), 8);
        assert_eq!(out.assignment().partition(1, 7).len(), 8);
        assert_eq!(report.points_added, 8);
        assert_eq!(report.points_removed, 0);
    }

    #[test]
    fn swap_replaces_partition() {
        let a = Box3D::new([10.0, 0.0, 0.0], [4.0, 2.0, 2.0], 0.3, ObjectClass::Car, 0);
        let b = Box3D::new([0.0, 5.0, 0.0], [3.0, 1.5, 1.8], -1.2, ObjectClass::Car, 1);
        let mut pts = Vec::new();
        for i in 0..3 {
            let c = a.canonical_to_world([-0.2 - 0.1 * i as f64, -0.5, 0.5]);
            pts.push(Point::new(c[0] as f32, c[1] as f32, c[2] as f32, 0.1));
        }
        for i in 0..5 {
            let c = b.canonical_to_world([-0.5, -0.1 - 0.1 * i as f64, 0.5]);
            pts.push(Point::new(c[0] as f32, c[1] as f32, c[2] as f32, 0.9));
        }
        let s = Scene::new(PointCloud::new(pts), vec![a, b], vec![car_layout(), car_layout()]);
        let k = 4; // -x, -y, +z
        assert_eq!(s.assignment().partition(0, k).len(), 3);
        let (out, report) = swap_partition(&s, &swap_params(1.0, 0.0), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(report.partitions_affected, 2);
        assert_eq!(out.assignment().partition(0, k).len(), 5);
        assert_eq!(out.assignment().partition(1, k).len(), 3);
        assert_eq!(out.points().len() as i64, s.points().len() as i64 + report.point_delta());
    }
}
