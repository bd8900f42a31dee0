//! In-memory augmentation as a dataloader would call it.

use paaug::arrays::{augment_arrays, version_info};
use paaug::geometry::ObjectClass;
use paaug::pipeline::PipelineConfig;

fn main() -> paaug::Result<()> {
    println!("{}", version_info());
    let points: Vec<[f32; 4]> = (0..400)
        .map(|i| {
            let t = i as f32 / 400.0;
            [10.0 + 3.6 * (t - 0.5), 1.4 * ((i % 20) as f32 / 20.0 - 0.5), -1.0 + (i % 7) as f32 * 0.2, t]
        })
        .collect();
    let boxes = [
        [10.0, 0.0, -0.4, 4.0, 1.8, 1.6, 0.0],
        [20.0, 6.0, -0.4, 4.2, 1.7, 1.5, 1.2],
    ];
    let classes = [ObjectClass::Car.code(), ObjectClass::Car.code()];
    let config = PipelineConfig { master_seed: 5, ..PipelineConfig::default() };
    let out = augment_arrays(&points, &boxes, &classes, &config, "000042")?;
    println!("seed {:#018x}: {} -> {} points", out.seed, points.len(), out.points.len());
    Ok(())
}
