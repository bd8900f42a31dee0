//! Builds the three corrupted variants of one frame.

use paaug::corruption::{corrupt_frame, CorruptionKind, CorruptionSpec};
use paaug::synthetic::{synthetic_frame, SyntheticSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> paaug::Result<()> {
    let frame = synthetic_frame("000123", &SyntheticSpec::default(), &mut ChaCha8Rng::seed_from_u64(5));
    for kind in [CorruptionKind::Dropout, CorruptionKind::Sparse, CorruptionKind::Jitter] {
        let spec = CorruptionSpec::new(kind, 2024);
        let (cloud, record) = corrupt_frame(&frame, &spec)?;
        println!("{kind:<7} {} -> {} points", record.points_in, cloud.len());
        for d in &record.dropped {
            println!("        box {} lost partition {} ({} points)", d.box_index, d.partition, d.points);
        }
    }
    Ok(())
}
