//! Velodyne scans: consecutive little-endian f32 quadruples (x, y, z,
//! reflectance), 16 bytes per point, no header.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::point::{Point, PointCloud};

pub const BYTES_PER_POINT: usize = 16;

pub fn decode_point_cloud(bytes: &[u8]) -> Option<PointCloud> {
    if !bytes.len().is_multiple_of(BYTES_PER_POINT) {
        return None;
    }
    let points = bytes
        .chunks_exact(BYTES_PER_POINT)
        .map(|chunk| {
            let f = |o: usize| f32::from_le_bytes(chunk[o..o + 4].try_into().unwrap());
            Point::new(f(0), f(4), f(8), f(12))
        })
        .collect();
    Some(PointCloud::new(points))
}

pub fn encode_point_cloud(cloud: &PointCloud) -> Vec<u8> {
    let mut out = Vec::with_capacity(cloud.len() * BYTES_PER_POINT);
    for p in cloud {
        for v in [p.x, p.y, p.z, p.reflectance] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn read_point_cloud_bin(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_point_cloud(&bytes).ok_or_else(|| Error::MalformedCloud {
        path: path.to_path_buf(),
        len: bytes.len() as u64,
    })
}

pub fn write_point_cloud_bin(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_point_cloud(cloud)).map_err(|e| Error::io(path, e))
}
