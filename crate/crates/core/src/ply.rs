//! ASCII PLY export with per-vertex colors for visual inspection.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Membership;
use crate::point::PointCloud;
use crate::scene::Scene;

pub type Rgb = [u8; 3];

pub const BACKGROUND: Rgb = [128, 128, 128];
/// Foreground points that belong to no partition.
pub const UNPARTITIONED: Rgb = [255, 255, 255];
pub const CHANGED: Rgb = [230, 25, 75];

pub const PALETTE: [Rgb; 12] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [0, 128, 128],
    [170, 110, 40],
    [128, 0, 0],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorBy {
    /// One color per partition index; boxes share the palette.
    Partition,
    /// One color per box.
    Box,
    /// Points absent from a reference cloud are highlighted.
    Corruption,
}

/// Computes one color per point. `reference` is required for
/// [`ColorBy::Corruption`] and ignored otherwise.
pub fn colorize(scene: &Scene, color_by: ColorBy, reference: Option<&PointCloud>) -> Result<Vec<Rgb>> {
    let membership = &scene.assignment().membership;
    Ok(match color_by {
        ColorBy::Partition => membership
            .iter()
            .map(|m| match m {
                Membership::Background => BACKGROUND,
                Membership::Object {
                    partition: Some(k), ..
                } => PALETTE[k % PALETTE.len()],
                Membership::Object { partition: None, .. } => UNPARTITIONED,
            })
            .collect(),
        ColorBy::Box => membership
            .iter()
            .map(|m| match m {
                Membership::Background => BACKGROUND,
                Membership::Object { box_index, .. } => PALETTE[box_index % PALETTE.len()],
            })
            .collect(),
        ColorBy::Corruption => {
            let reference = reference.ok_or_else(|| {
                Error::Config("corruption coloring needs a reference cloud".into())
            })?;
            let known: HashSet<[u32; 4]> = reference.iter().map(|p| p.bits()).collect();
            scene
                .points()
                .iter()
                .map(|p| if known.contains(&p.bits()) { BACKGROUND } else { CHANGED })
                .collect()
        }
    })
}

pub fn ply_string(cloud: &PointCloud, colors: &[Rgb]) -> String {
    assert_eq!(cloud.len(), colors.len(), "one color per vertex");
    let mut s = String::with_capacity(128 + cloud.len() * 40);
    s.push_str("ply\nformat ascii 1.0\n");
    writeln!(s, "element vertex {}", cloud.len()).unwrap();
    for prop in ["float x", "float y", "float z", "uchar red", "uchar green", "uchar blue"] {
        writeln!(s, "property {prop}").unwrap();
    }
    s.push_str("end_header\n");
    for (p, c) in cloud.iter().zip(colors) {
        writeln!(s, "{} {} {} {} {} {}", p.x, p.y, p.z, c[0], c[1], c[2]).unwrap();
    }
    s
}

pub fn export_ply(
    scene: &Scene,
    path: impl AsRef<Path>,
    color_by: ColorBy,
    reference: Option<&PointCloud>,
) -> Result<()> {
    let path = path.as_ref();
    let colors = colorize(scene, color_by, reference)?;
    fs::write(path, ply_string(scene.cloud(), &colors)).map_err(|e| Error::io(path, e))
}
