//! In-memory array interface for dataloaders. Runs the same code path as
//! the file-based pipeline, so a scene augmented here matches the one
//! written by `augment` for the same frame id and seed.

use crate::augment::OpReport;
use crate::error::{Error, Result};
use crate::geometry::{Box3D, ObjectClass};
use crate::pipeline::{derive_scene_seed, pa_aug_scene, PipelineConfig, RngAlgorithm};
use crate::point::{Point, PointCloud};

/// `<crate version> (rng <algorithm id>)`, as printed after the program name
/// by `paaug --version`.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (rng chacha8)");

/// Library version and rng algorithm, identical to `paaug --version`.
pub fn version_info() -> String {
    debug_assert!(VERSION.ends_with(&format!("(rng {})", RngAlgorithm::ChaCha8.id())));
    format!("paaug {VERSION}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayOutput {
    pub points: Vec<[f32; 4]>,
    pub reports: Vec<OpReport>,
    pub seed: u64,
}

/// Builds sensor-frame boxes from `(cx, cy, cz, l, w, h, yaw)` rows and
/// class codes (indices into [`ObjectClass::ALL`]).
pub fn boxes_from_arrays(boxes: &[[f64; 7]], classes: &[i64]) -> Result<Vec<Box3D>> {
    if boxes.len() != classes.len() {
        return Err(Error::Shape(format!(
            "{} boxes but {} class codes",
            boxes.len(),
            classes.len()
        )));
    }
    boxes
        .iter()
        .zip(classes)
        .enumerate()
        .map(|(i, (row, code))| {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Shape(format!("box {i} has a non-finite value")));
            }
            if row[3] <= 0.0 || row[4] <= 0.0 || row[5] <= 0.0 {
                return Err(Error::Shape(format!("box {i} has a non-positive dimension")));
            }
            let class = ObjectClass::from_code(*code)
                .ok_or_else(|| Error::Shape(format!("box {i} has unknown class code {code}")))?;
            Ok(Box3D::new([row[0], row[1], row[2]], [row[3], row[4], row[5]], row[6], class, i))
        })
        .collect()
}

pub fn boxes_to_arrays(boxes: &[Box3D]) -> (Vec<[f64; 7]>, Vec<i64>) {
    boxes
        .iter()
        .map(|b| {
            (
                [b.center[0], b.center[1], b.center[2], b.length, b.width, b.height, b.yaw],
                b.class.code(),
            )
        })
        .unzip()
}

/// Augments one scene given as arrays. The scene seed is derived from
/// `config.master_seed` and `frame_id` exactly as for files. Inputs are
/// only read.
pub fn augment_arrays(
    points: &[[f32; 4]],
    boxes: &[[f64; 7]],
    classes: &[i64],
    config: &PipelineConfig,
    frame_id: &str,
) -> Result<ArrayOutput> {
    config.validate()?;
    if let Some(i) = points.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(Error::Shape(format!("point {i} has a non-finite value")));
    }
    let boxes = boxes_from_arrays(boxes, classes)?;
    let cloud: PointCloud = points.iter().map(|p| Point::from(*p)).collect();
    let seed = derive_scene_seed(config.master_seed, frame_id);
    let out = pa_aug_scene(cloud, boxes, config, seed);
    Ok(ArrayOutput {
        points: out.scene.points().iter().map(|p| <[f32; 4]>::from(*p)).collect(),
        reports: out.reports,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::AugParams;

    #[test]
    fn version_is_stable() {
        assert_eq!(version_info(), version_info());
        assert!(version_info().starts_with("paaug "));
        assert!(version_info().contains("chacha8"));
    }

    #[test]
    fn shape_errors() {
        let cfg = PipelineConfig::default();
        let pts = [[0.0f32; 4]];
        let b = [[0.0, 0.0, 0.0, 4.0, 2.0, 1.5, 0.0]];
        assert!(matches!(augment_arrays(&pts, &b, &[], &cfg, "0"), Err(Error::Shape(_))));
        assert!(matches!(augment_arrays(&pts, &b, &[99], &cfg, "0"), Err(Error::Shape(_))));
        let flat = [[0.0, 0.0, 0.0, 0.0, 2.0, 1.5, 0.0]];
        assert!(matches!(augment_arrays(&pts, &flat, &[0], &cfg, "0"), Err(Error::Shape(_))));
        let nan = [[f32::NAN, 0.0, 0.0, 0.0]];
        assert!(matches!(augment_arrays(&nan, &[], &[], &cfg, "0"), Err(Error::Shape(_))));
    }

    #[test]
    fn no_boxes_or_closed_gates_return_input() {
        let pts: Vec<[f32; 4]> = (0..50).map(|i| [i as f32, 1.0, -1.0, 0.5]).collect();
        let out = augment_arrays(&pts, &[], &[], &PipelineConfig::default(), "000001").unwrap();
        assert_eq!(out.points, pts);
        let cfg = PipelineConfig::default().with_params(AugParams::disabled());
        let b = [[3.0, 1.0, -1.0, 4.0, 2.0, 2.0, 0.3]];
        let out = augment_arrays(&pts, &b, &[0], &cfg, "000001").unwrap();
        assert_eq!(out.points, pts);
    }

    #[test]
    fn box_arrays_round_trip() {
        let b = [[3.0, 1.0, -1.0, 4.0, 2.0, 2.0, 0.3], [0.0, 0.0, 0.0, 0.8, 0.6, 1.7, -3.0]];
        let boxes = boxes_from_arrays(&b, &[0, 1]).unwrap();
        let (rows, codes) = boxes_to_arrays(&boxes);
        assert_eq!(rows, b.to_vec());
        assert_eq!(codes, vec![0, 1]);
    }
}
