use paaug::geometry::{farthest_point_sampling, farthest_point_sampling_from};
use paaug::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> paaug::Result<()> {
    let line: Vec<Point> = (0..5).map(|i| Point::new(i as f32, 0.0, 0.0, 0.0)).collect();
    println!("collinear, start 0: {:?}", farthest_point_sampling_from(&line, 3, 0)?);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cloud: Vec<Point> = (0..10_000)
        .map(|_| Point::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0), 0.0, 0.0))
        .collect();
    let picked = farthest_point_sampling(&cloud, 8, &mut rng)?;
    for i in picked {
        println!("  {:>5}  ({:>6.2}, {:>6.2})", i, cloud[i].x, cloud[i].y);
    }
    Ok(())
}
