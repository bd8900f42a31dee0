//! Draws the 10/20/40/80 % training subsets used for data-efficiency runs.

use paaug::pipeline::subset_split;

fn main() -> paaug::Result<()> {
    let train: Vec<String> = (0..3712).map(|i| format!("{i:06}")).collect();
    for fraction in [0.1, 0.2, 0.4, 0.8] {
        let subset = subset_split(&train, fraction, 0)?;
        println!("{:>3}%: {:>4} frames, first {:?}", (fraction * 100.0) as u32, subset.len(), &subset[..3]);
    }
    Ok(())
}
