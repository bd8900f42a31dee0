use std::f64::consts::PI;

use paaug::augment::AugParams;
use paaug::corruption::{corrupt_jitter, corrupt_sparse};
use paaug::geometry::{
    assign_points_to_boxes, farthest_point_sampling, farthest_point_sampling_from, Box3D, Membership,
    ObjectClass, PartitionLayout, PartitionScheme, RandomPartitionLayout,
};
use paaug::pipeline::{pa_aug_scene, verify_closure, PipelineConfig};
use paaug::synthetic::{synthetic_frame, SyntheticSpec};
use paaug::{Point, PointCloud, Scene};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_box() -> impl Strategy<Value = Box3D> {
    (
        -60.0..60.0f64,
        -60.0..60.0f64,
        -3.0..3.0f64,
        0.3..12.0f64,
        0.3..4.0f64,
        0.3..4.0f64,
        -10.0..10.0f64,
    )
        .prop_map(|(x, y, z, l, w, h, yaw)| Box3D::new([x, y, z], [l, w, h], yaw, ObjectClass::Car, 0))
}

/// Brute-force greedy max-min selection: every step recomputes each
/// candidate's distance to the whole selected set.
fn brute_fps(points: &[Point], k: usize, start: usize) -> Vec<usize> {
    let d = |a: &Point, b: &Point| {
        let (dx, dy, dz) = (
            a.x as f64 - b.x as f64,
            a.y as f64 - b.y as f64,
            a.z as f64 - b.z as f64,
        );
        dx * dx + dy * dy + dz * dz
    };
    let mut selected = vec![start];
    while selected.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..points.len() {
            if selected.contains(&i) {
                continue;
            }
            let m = selected
                .iter()
                .map(|&s| d(&points[i], &points[s]))
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(_, bm)| m > bm) {
                best = Some((i, m));
            }
        }
        selected.push(best.unwrap().0);
    }
    selected
}

fn grid_points(seed: u64, n: usize, step: f32) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let q = |rng: &mut ChaCha8Rng| (rng.random_range(-5..=5) as f32) * step;
            Point::new(q(&mut rng), q(&mut rng), q(&mut rng), 0.0)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn canonical_transform_inverts(b in arb_box(), p in prop::array::uniform3(-80.0..80.0f64)) {
        let back = b.canonical_to_world(b.world_to_canonical(p));
        for a in 0..3 {
            prop_assert!((back[a] - p[a]).abs() <= 1e-9 * (1.0 + p[a].abs()));
        }
        let c = b.world_to_canonical(b.canonical_to_world(p.map(|v| v / 80.0)));
        for a in 0..3 {
            prop_assert!((c[a] - p[a] / 80.0).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn part_aware_cells_tile_the_cube(
        split in prop::array::uniform3(any::<bool>()),
        c in prop::array::uniform3(-1.0..=1.0f64),
    ) {
        let scheme = PartitionScheme::new(ObjectClass::Cyclist, split);
        let owners: Vec<usize> = (0..scheme.partition_count())
            .filter(|&k| scheme.cell(k).contains(c))
            .collect();
        prop_assert_eq!(owners, vec![scheme.partition_index(c)]);
    }

    #[test]
    fn random_layout_cells_lie_in_cube(seed in any::<u64>(), count in prop::sample::select(vec![2usize, 4, 8])) {
        let layout = RandomPartitionLayout::generate(count, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(layout.cells.len(), count);
        for cell in &layout.cells {
            for a in 0..3 {
                let side = cell.hi[a] - cell.lo[a];
                prop_assert!(cell.lo[a] >= -1.0 && cell.hi[a] <= 1.0 + 1e-12);
                prop_assert!((2.0 * RandomPartitionLayout::MIN_SIDE - 1e-12..=2.0 * RandomPartitionLayout::MAX_SIDE + 1e-12).contains(&side));
            }
        }
    }

    #[test]
    fn membership_is_yaw_equivariant(
        seed in any::<u64>(),
        theta in -PI..PI,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let boxes: Vec<Box3D> = (0..3)
            .map(|i| Box3D::new(
                [12.0 * i as f64 - 12.0, rng.random_range(-3.0..3.0), 0.0],
                [4.0, 1.8, 1.6],
                rng.random_range(-PI..PI),
                ObjectClass::Car,
                i,
            ))
            .collect();
        let layouts: Vec<_> = boxes
            .iter()
            .map(|b| Some(PartitionLayout::PartAware(PartitionScheme::default_for(b.class))))
            .collect();
        // Points away from partition planes so f32 rounding cannot flip cells.
        let mut pts = Vec::new();
        for b in &boxes {
            for _ in 0..30 {
                let c: [f64; 3] = std::array::from_fn(|_| {
                    let v: f64 = rng.random_range(0.1..0.9);
                    if rng.random_bool(0.5) { v } else { -v }
                });
                let w = b.canonical_to_world(c);
                pts.push(Point::new(w[0] as f32, w[1] as f32, w[2] as f32, 0.0));
            }
        }
        let (s, co) = theta.sin_cos();
        let rot = |p: [f64; 3]| [co * p[0] - s * p[1], s * p[0] + co * p[1], p[2]];
        let rboxes: Vec<Box3D> = boxes
            .iter()
            .map(|b| Box3D::new(rot(b.center), b.dims(), b.yaw + theta, b.class, b.index))
            .collect();
        let rpts: Vec<Point> = pts
            .iter()
            .map(|p| {
                let r = rot(p.position());
                Point::new(r[0] as f32, r[1] as f32, r[2] as f32, 0.0)
            })
            .collect();
        let a = assign_points_to_boxes(&pts, &boxes, &layouts);
        let b = assign_points_to_boxes(&rpts, &rboxes, &layouts);
        prop_assert_eq!(a.membership, b.membership);
    }

    #[test]
    fn fps_matches_brute_force(seed in any::<u64>(), n in 1usize..120, k_frac in 0.0..1.0f64, coarse in any::<bool>()) {
        let pts = if coarse { grid_points(seed, n, 1.0) } else { grid_points(seed, n, 0.013) };
        let k = ((n as f64 * k_frac) as usize).clamp(1, n.min(20));
        let lib = farthest_point_sampling(&pts, k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let start = ChaCha8Rng::seed_from_u64(seed).random_range(0..n);
        prop_assert_eq!(lib, brute_fps(&pts, k, start));
    }

    #[test]
    fn fps_spread_is_non_increasing(seed in any::<u64>(), n in 2usize..300) {
        let pts = grid_points(seed, n, 0.37);
        let k = n.min(25);
        let sel = farthest_point_sampling_from(&pts, k, 0).unwrap();
        let mut distinct = sel.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), k);
        // Distance from each newly selected point to the earlier ones never grows.
        let mut prev = f64::INFINITY;
        for i in 1..k {
            let m = sel[..i]
                .iter()
                .map(|&s| pts[sel[i]].squared_distance(&pts[s]))
                .fold(f64::INFINITY, f64::min);
            prop_assert!(m <= prev);
            prev = m;
        }
    }

    #[test]
    fn sparse_corruption_count_is_exact(seed in any::<u64>(), n in 1usize..400, keep in 0.01..=1.0f64) {
        let cloud = PointCloud::new(grid_points(seed, n, 0.5));
        let out = corrupt_sparse(&cloud, keep, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(out.len(), (keep * n as f64).round() as usize);
    }

    #[test]
    fn jitter_keeps_count_order_reflectance(seed in any::<u64>(), n in 0usize..200, sigma in 0.0..1.0f64) {
        let cloud: PointCloud = (0..n).map(|i| Point::new(i as f32, 0.0, 0.0, i as f32 * 0.01)).collect();
        let out = corrupt_jitter(&cloud, sigma, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(out.len(), n);
        for (a, b) in cloud.iter().zip(out.iter()) {
            prop_assert_eq!(a.reflectance.to_bits(), b.reflectance.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pipeline_output_satisfies_closure(seed in any::<u64>(), random in any::<bool>(), heavy in any::<bool>()) {
        let spec = SyntheticSpec { boxes: 5, points_per_box: 80, background_points: 300, ..SyntheticSpec::default() };
        let frame = synthetic_frame("x", &spec, &mut ChaCha8Rng::seed_from_u64(seed));
        let boxes = frame.boxes().unwrap();
        let mut config = PipelineConfig { random_partitions: random, ..PipelineConfig::default() };
        if heavy {
            config = config.with_params(AugParams {
                p_dropout: 0.5, p_swap: 0.7, p_mix: 0.7, sparse_threshold: 10,
                p_sparse: 0.5, noise_count: 7, p_noise: 0.5,
            });
        }
        let layouts = config.layouts_for(&boxes, &mut config.rng.stream(seed));
        let input = Scene::new(frame.cloud.clone(), boxes.clone(), layouts);
        let out = pa_aug_scene(frame.cloud.clone(), boxes, &config, seed);
        prop_assert!(verify_closure(&input, &out.scene).is_ok());
    }

    #[test]
    fn unconfigured_classes_are_untouched(seed in any::<u64>()) {
        let spec = SyntheticSpec {
            boxes: 4,
            points_per_box: 60,
            background_points: 100,
            classes: vec![ObjectClass::Van, ObjectClass::Truck],
        };
        let frame = synthetic_frame("x", &spec, &mut ChaCha8Rng::seed_from_u64(seed));
        let config = PipelineConfig::default().with_params(AugParams {
            p_dropout: 1.0, p_swap: 1.0, p_mix: 1.0, sparse_threshold: 1, p_sparse: 1.0, noise_count: 5, p_noise: 1.0,
        });
        let out = pa_aug_scene(frame.cloud.clone(), frame.boxes().unwrap(), &config, seed);
        prop_assert!(out.scene.cloud().bit_identical(&frame.cloud));
        let unpartitioned = out
            .scene
            .assignment()
            .membership
            .iter()
            .any(|m| matches!(m, Membership::Object { partition: None, .. }));
        prop_assert!(unpartitioned);
    }
}
