//! Synthetic KITTI-style frames for tests, benchmarks and examples.
//!
//! Boxes are laid out on a grid so they never overlap, foreground points are
//! drawn uniformly inside each box and background points cover a ground
//! plane. Labels are written through the regular text format, so
//! [`Frame::boxes`] on a generated frame returns exactly the boxes the points
//! were drawn from.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::Matrix3x4;
use rand::Rng;

use crate::error::Result;
use crate::geometry::{Box3D, ObjectClass};
use crate::kitti::{lidar_box_to_camera, parse_labels, Calibration, Frame, KittiLabel, KittiLayout};
use crate::pipeline::RngAlgorithm;
use crate::point::{Point, PointCloud};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub boxes: usize,
    pub points_per_box: usize,
    pub background_points: usize,
    /// Classes assigned to boxes in rotation.
    pub classes: Vec<ObjectClass>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            boxes: 6,
            points_per_box: 200,
            background_points: 2000,
            classes: vec![ObjectClass::Car, ObjectClass::Pedestrian, ObjectClass::Cyclist],
        }
    }
}

/// A velodyne-to-camera calibration with the usual axis permutation
/// (camera x right, y down, z forward) and a small offset.
pub fn kitti_like_calibration() -> Calibration {
    let mut calib = Calibration::identity();
    calib.velo_to_cam = Matrix3x4::new(
        0.0, -1.0, 0.0, 0.01, //
        0.0, 0.0, -1.0, -0.08, //
        1.0, 0.0, 0.0, -0.27,
    );
    calib
}

fn dims_for<R: Rng + ?Sized>(class: ObjectClass, rng: &mut R) -> [f64; 3] {
    let jitter = |rng: &mut R, v: f64| v * rng.random_range(0.9..1.1);
    match class {
        ObjectClass::Pedestrian | ObjectClass::PersonSitting => {
            [jitter(rng, 0.8), jitter(rng, 0.6), jitter(rng, 1.75)]
        }
        ObjectClass::Cyclist => [jitter(rng, 1.76), jitter(rng, 0.6), jitter(rng, 1.73)],
        ObjectClass::Truck | ObjectClass::Tram => {
            [jitter(rng, 10.0), jitter(rng, 2.6), jitter(rng, 3.4)]
        }
        _ => [jitter(rng, 3.9), jitter(rng, 1.6), jitter(rng, 1.56)],
    }
}

/// Builds one frame. Box `i` sits in cell `i` of a 12 m grid in front of the
/// sensor.
pub fn synthetic_frame<R: Rng + ?Sized>(id: &str, spec: &SyntheticSpec, rng: &mut R) -> Frame {
    let calib = kitti_like_calibration();
    let mut text = String::new();
    for i in 0..spec.boxes {
        let class = spec.classes[i % spec.classes.len()];
        let dims = dims_for(class, rng);
        let (row, col) = ((i / 6) as f64, (i % 6) as f64);
        let center = [
            6.0 + 12.0 * row + rng.random_range(-1.0..1.0),
            -30.0 + 12.0 * col + rng.random_range(-1.0..1.0),
            -1.7 + dims[2] / 2.0,
        ];
        let b = Box3D::new(center, dims, rng.random_range(-PI..PI), class, i);
        let (location, rotation_y) = lidar_box_to_camera(&b, &calib);
        let label = KittiLabel {
            class_name: class.as_str().to_string(),
            truncation: 0.0,
            occlusion: 0,
            alpha: 0.0,
            bbox2d: [0.0, 0.0, 50.0, 50.0],
            dims: [dims[2], dims[1], dims[0]],
            location,
            rotation_y,
            score: None,
        };
        text.push_str(&label.to_line());
        text.push('\n');
    }
    let labels = parse_labels(&text, Path::new("synthetic")).expect("generated labels parse");
    let mut frame = Frame {
        id: id.to_string(),
        cloud: PointCloud::default(),
        labels,
        calib,
    };
    let boxes = frame.boxes().expect("generated boxes convert");
    let mut points = Vec::with_capacity(spec.boxes * spec.points_per_box + spec.background_points);
    for b in &boxes {
        for _ in 0..spec.points_per_box {
            let c = [
                rng.random_range(-0.97..0.97),
                rng.random_range(-0.97..0.97),
                rng.random_range(-0.97..0.97),
            ];
            let w = b.canonical_to_world(c);
            points.push(Point::new(w[0] as f32, w[1] as f32, w[2] as f32, rng.random()));
        }
    }
    for _ in 0..spec.background_points {
        points.push(Point::new(
            rng.random_range(-70.0..70.0),
            rng.random_range(-40.0..40.0),
            -1.75 + rng.random_range(-0.02..0.02),
            rng.random(),
        ));
    }
    frame.cloud = PointCloud::new(points);
    frame
}

/// Writes `frames` synthetic frames named `000000`, `000001`, ... under
/// `root` and returns their ids.
pub fn write_synthetic_dataset(
    root: impl AsRef<Path>,
    frames: usize,
    spec: &SyntheticSpec,
    seed: u64,
) -> Result<Vec<String>> {
    let layout = KittiLayout::new(root.as_ref());
    layout.create_dirs()?;
    let mut rng = RngAlgorithm::ChaCha8.stream(seed);
    let mut ids = Vec::with_capacity(frames);
    for i in 0..frames {
        let id = format!("{i:06}");
        let frame = synthetic_frame(&id, spec, &mut rng);
        layout.write_frame(&frame)?;
        ids.push(id);
    }
    Ok(ids)
}
