//! The five partition-level operators.
//!
//! Each operator is a pure function of a [`Scene`], a per-class parameter
//! table and an explicit rng stream. Randomness is consumed in a fixed order:
//! boxes by index, partitions by index, and within each unit the Bernoulli
//! gate before any selection it controls. Boxes without a partition layout
//! or without parameters for their class draw nothing.

mod dropout;
mod noise;
mod params;
mod report;
mod sparsify;
mod transplant;

pub use dropout::{drop_partition, dropout_partition};
pub use noise::{add_noise, noise_partition};
pub use params::{AugParams, ClassParams, Network, OpKind};
pub use report::OpReport;
pub use sparsify::{sparsify_one, sparsify_partition};
pub use transplant::{mix_partition, swap_partition, transplant_points, TransplantMode};

use rand::Rng;

use crate::geometry::{Box3D, CanonicalFrame, Cell, PartitionLayout};
use crate::scene::Scene;

/// Bernoulli gate `r ~ Ber(p)`.
pub fn gate<R: Rng + ?Sized>(rng: &mut R, p: f64) -> bool {
    rng.random_bool(p)
}

/// Applies one operator.
pub fn apply_op<R: Rng + ?Sized>(
    op: OpKind,
    scene: &Scene,
    params: &ClassParams,
    rng: &mut R,
) -> (Scene, OpReport) {
    match op {
        OpKind::Dropout => dropout_partition(scene, params, rng),
        OpKind::Swap => swap_partition(scene, params, rng),
        OpKind::Mix => mix_partition(scene, params, rng),
        OpKind::Sparse => sparsify_partition(scene, params, rng),
        OpKind::Noise => noise_partition(scene, params, rng),
    }
}

/// Boxes that take part in augmentation, with their layout and parameters.
fn augmentable<'a>(
    scene: &'a Scene,
    params: &'a ClassParams,
) -> impl Iterator<Item = (usize, &'a Box3D, &'a PartitionLayout, &'a AugParams)> + 'a {
    scene.boxes().iter().enumerate().filter_map(move |(i, b)| {
        let layout = scene.layout(i)?;
        let p = params.get(b.class)?;
        Some((i, b, layout, p))
    })
}

/// Converts a canonical target to an f32 sensor-frame position whose own
/// canonical coordinates lie inside `cell`. Rounding to f32 can push
/// boundary points out of the cell, so the target is pulled toward the cell
/// center until the rounded position lands inside.
pub fn place_in_cell(frame: &CanonicalFrame, cell: &Cell, target: [f64; 3]) -> [f32; 3] {
    let center = cell.center();
    let mut c = cell.clamp(target);
    for attempt in 0..10 {
        let w = frame.to_world(c);
        let rounded = [w[0] as f32, w[1] as f32, w[2] as f32];
        let back = frame.to_canonical([rounded[0] as f64, rounded[1] as f64, rounded[2] as f64]);
        if cell.contains(back) {
            return rounded;
        }
        let pull = (1e-7 * 10f64.powi(attempt)).min(1.0);
        c = std::array::from_fn(|a| c[a] + (center[a] - c[a]) * pull);
    }
    let w = frame.to_world(center);
    [w[0] as f32, w[1] as f32, w[2] as f32]
}
