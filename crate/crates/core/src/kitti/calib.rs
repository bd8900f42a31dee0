//! Per-frame calibration and the camera/sensor box conversion.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::{Matrix3, Matrix3x4, Matrix4, Vector4};

use super::label::KittiLabel;
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Box3D};

const ORTHONORMAL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub p: [Matrix3x4<f64>; 4],
    pub rect_rotation: Matrix3<f64>,
    pub velo_to_cam: Matrix3x4<f64>,
    pub imu_to_velo: Matrix3x4<f64>,
}

fn homogeneous(m: &Matrix3x4<f64>) -> Matrix4<f64> {
    let mut h = Matrix4::identity();
    h.fixed_view_mut::<3, 4>(0, 0).copy_from(m);
    h
}

fn is_orthonormal(r: &Matrix3<f64>) -> bool {
    (r.transpose() * r - Matrix3::identity()).amax() <= ORTHONORMAL_TOL
}

impl Calibration {
    /// Identity extrinsics and rectification, zero projections.
    pub fn identity() -> Self {
        let eye = Matrix3x4::identity();
        Self {
            p: [eye; 4],
            rect_rotation: Matrix3::identity(),
            velo_to_cam: eye,
            imu_to_velo: eye,
        }
    }

    /// Maps homogeneous sensor coordinates to rectified camera coordinates.
    pub fn velo_to_rect(&self) -> Matrix4<f64> {
        let mut rect = Matrix4::identity();
        rect.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rect_rotation);
        rect * homogeneous(&self.velo_to_cam)
    }

    pub fn rect_to_velo(&self) -> Result<Matrix4<f64>> {
        self.velo_to_rect()
            .try_inverse()
            .ok_or(Error::SingularCalibration)
    }

    pub fn check_orthonormal(&self) -> std::result::Result<(), String> {
        if !is_orthonormal(&self.rect_rotation) {
            return Err("R0_rect is not orthonormal".into());
        }
        let rot: Matrix3<f64> = self.velo_to_cam.fixed_view::<3, 3>(0, 0).into();
        if !is_orthonormal(&rot) {
            return Err("Tr_velo_to_cam rotation is not orthonormal".into());
        }
        Ok(())
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let malformed = |reason: String| Error::MalformedCalib {
            path: path.to_path_buf(),
            reason,
        };
        let mut entries: HashMap<&str, Vec<f64>> = HashMap::new();
        for line in text.lines() {
            let Some((key, values)) = line.split_once(':') else {
                continue;
            };
            let values = values
                .split_whitespace()
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| malformed(format!("non-numeric value under `{}`", key.trim())))?;
            entries.insert(key.trim(), values);
        }
        let get = |key: &str, n: usize| -> Result<&[f64]> {
            let v = entries.get(key).ok_or_else(|| Error::MissingCalibKey {
                path: path.to_path_buf(),
                key: key.to_string(),
            })?;
            if v.len() != n {
                return Err(malformed(format!("`{key}` has {} values, expected {n}", v.len())));
            }
            Ok(v)
        };
        let m34 = |key: &str| get(key, 12).map(Matrix3x4::from_row_slice);
        let calib = Calibration {
            p: [m34("P0")?, m34("P1")?, m34("P2")?, m34("P3")?],
            rect_rotation: Matrix3::from_row_slice(get("R0_rect", 9)?),
            velo_to_cam: m34("Tr_velo_to_cam")?,
            imu_to_velo: m34("Tr_imu_to_velo")?,
        };
        calib.check_orthonormal().map_err(malformed)?;
        Ok(calib)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut row = |key: &str, values: Vec<f64>| {
            s.push_str(key);
            s.push(':');
            for v in values {
                write!(s, " {v:.12e}").unwrap();
            }
            s.push('\n');
        };
        let rows34 = |m: &Matrix3x4<f64>| m.transpose().iter().copied().collect::<Vec<_>>();
        for (i, p) in self.p.iter().enumerate() {
            row(&format!("P{i}"), rows34(p));
        }
        row(
            "R0_rect",
            self.rect_rotation.transpose().iter().copied().collect(),
        );
        row("Tr_velo_to_cam", rows34(&self.velo_to_cam));
        row("Tr_imu_to_velo", rows34(&self.imu_to_velo));
        s
    }
}

pub fn read_calib(path: impl AsRef<Path>) -> Result<Calibration> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Calibration::parse(&text, path)
}

pub fn write_calib(calib: &Calibration, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, calib.to_text()).map_err(|e| Error::io(path, e))
}

fn transform(m: &Matrix4<f64>, p: [f64; 3]) -> [f64; 3] {
    let v = m * Vector4::new(p[0], p[1], p[2], 1.0);
    [v[0], v[1], v[2]]
}

/// Converts a camera-frame label into a sensor-frame box. The bottom-face
/// center is lifted by half the height along sensor +z, dimensions become
/// (l, w, h) and `yaw = -rotation_y - pi/2`.
pub fn camera_box_to_lidar(label: &KittiLabel, calib: &Calibration, index: usize) -> Result<Box3D> {
    let class = label
        .object_class()
        .ok_or_else(|| Error::Config(format!("class `{}` does not form a box", label.class_name)))?;
    let inv = calib.rect_to_velo()?;
    let bottom = transform(&inv, label.location);
    let h = label.height();
    Ok(Box3D::new(
        [bottom[0], bottom[1], bottom[2] + h / 2.0],
        [label.length(), label.width(), h],
        normalize_angle(-label.rotation_y - FRAC_PI_2),
        class,
        index,
    ))
}

/// Inverse of [`camera_box_to_lidar`]: camera-frame bottom-center location and
/// `rotation_y` in `[-pi, pi)`.
pub fn lidar_box_to_camera(b: &Box3D, calib: &Calibration) -> ([f64; 3], f64) {
    let bottom = [b.center[0], b.center[1], b.center[2] - b.height / 2.0];
    let location = transform(&calib.velo_to_rect(), bottom);
    (location, normalize_angle(-b.yaw - FRAC_PI_2))
}
