//! KITTI object-detection file formats and directory layout.

mod bin;
mod calib;
mod label;

pub use bin::{
    decode_point_cloud, encode_point_cloud, read_point_cloud_bin, write_point_cloud_bin,
    BYTES_PER_POINT,
};
pub use calib::{camera_box_to_lidar, lidar_box_to_camera, read_calib, write_calib, Calibration};
pub use label::{parse_labels, read_labels, write_labels, KittiLabel};

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::Box3D;
use crate::point::PointCloud;

pub const VELODYNE_DIR: &str = "velodyne";
pub const LABEL_DIR: &str = "label_2";
pub const CALIB_DIR: &str = "calib";

/// One frame: scan, annotations and calibration sharing a frame id.
#[derive(Debug, Clone)]
pub struct Frame {
    pub id: String,
    pub cloud: PointCloud,
    pub labels: Vec<KittiLabel>,
    pub calib: Calibration,
}

impl Frame {
    /// Sensor-frame boxes for every label whose class forms a box, numbered
    /// in label order. `DontCare` and `Misc` rows are skipped.
    pub fn boxes(&self) -> Result<Vec<Box3D>> {
        let mut boxes = Vec::new();
        for label in &self.labels {
            if label.object_class().is_none() || label.dims.iter().any(|d| *d <= 0.0) {
                continue;
            }
            boxes.push(camera_box_to_lidar(label, &self.calib, boxes.len())?);
        }
        Ok(boxes)
    }
}

/// A directory holding `velodyne/`, `label_2/` and `calib/`.
#[derive(Debug, Clone)]
pub struct KittiLayout {
    root: PathBuf,
}

impl KittiLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn velodyne(&self, id: &str) -> PathBuf {
        self.root.join(VELODYNE_DIR).join(format!("{id}.bin"))
    }

    pub fn label(&self, id: &str) -> PathBuf {
        self.root.join(LABEL_DIR).join(format!("{id}.txt"))
    }

    pub fn calib(&self, id: &str) -> PathBuf {
        self.root.join(CALIB_DIR).join(format!("{id}.txt"))
    }

    pub fn create_dirs(&self) -> Result<()> {
        for dir in [VELODYNE_DIR, LABEL_DIR, CALIB_DIR] {
            let p = self.root.join(dir);
            fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
        }
        Ok(())
    }

    /// Frame ids with a velodyne scan, sorted.
    pub fn frame_ids(&self) -> Result<Vec<String>> {
        let dir = self.root.join(VELODYNE_DIR);
        let entries = fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut ids = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            if path.extension().is_some_and(|e| e == "bin") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    ids.push(stem.to_string());
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn load(&self, id: &str) -> Result<Frame> {
        Ok(Frame {
            id: id.to_string(),
            cloud: read_point_cloud_bin(self.velodyne(id))?,
            labels: read_labels(self.label(id))?,
            calib: read_calib(self.calib(id))?,
        })
    }

    /// Writes a scan and copies the frame's label and calibration files from
    /// `source` byte for byte.
    pub fn write_frame_from(&self, source: &KittiLayout, id: &str, cloud: &PointCloud) -> Result<()> {
        write_point_cloud_bin(cloud, self.velodyne(id))?;
        for (from, to) in [
            (source.label(id), self.label(id)),
            (source.calib(id), self.calib(id)),
        ] {
            fs::copy(&from, &to).map_err(|e| Error::io(&from, e))?;
        }
        Ok(())
    }

    pub fn write_frame(&self, frame: &Frame) -> Result<()> {
        write_point_cloud_bin(&frame.cloud, self.velodyne(&frame.id))?;
        write_labels(&frame.labels, self.label(&frame.id))?;
        write_calib(&frame.calib, self.calib(&frame.id))
    }
}

/// Reads a split file: one frame id per line, blank lines ignored.
pub fn read_split(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

pub fn write_split(ids: &[String], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = ids.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
