//! End to end on disk: write a small synthetic KITTI tree, augment it with
//! a JSON config, then print the output digest and statistics.

use paaug::pipeline::{augment_dataset, tree_digest, PipelineConfig};
use paaug::stats::dataset_stats;
use paaug::synthetic::{write_synthetic_dataset, SyntheticSpec};

fn main() -> paaug::Result<()> {
    let root = std::env::temp_dir().join("paaug_dataset_example");
    let (input, output) = (root.join("training"), root.join("augmented"));
    let _ = std::fs::remove_dir_all(&root);
    write_synthetic_dataset(&input, 8, &SyntheticSpec::default(), 1)?;

    let config = PipelineConfig::from_json(include_str!("paaug.json"))?;
    let summary = augment_dataset(&input, &output, &config, None, 4)?;
    println!("frames {} / {}", summary.frames_written, summary.frames_requested);
    for r in &summary.totals {
        println!("  {:<8} fired {}", r.op.as_str(), r.gates_fired);
    }
    if let Some(t) = &summary.timing {
        println!("  {:.1} ms", t.elapsed_ms);
    }
    println!("digest {}", tree_digest(&output)?);

    let stats = dataset_stats(&output, None, &config, 4)?;
    println!("{}", serde_json::to_string_pretty(&stats)?);
    Ok(())
}
