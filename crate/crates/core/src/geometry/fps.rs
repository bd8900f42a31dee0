//! Greedy farthest point sampling.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::point::Point;

// Below this many points the min-distance update runs serially.
const PARALLEL_THRESHOLD: usize = 65_536;
const CHUNK: usize = 8_192;

/// Selects `count` distinct indices by greedy max-min distance. The first
/// index is drawn uniformly from `rng`; distances are 3D Euclidean over
/// x, y, z.
pub fn farthest_point_sampling<R: Rng + ?Sized>(
    points: &[Point],
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if count > points.len() {
        return Err(Error::SampleCount {
            requested: count,
            available: points.len(),
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let start = rng.random_range(0..points.len());
    farthest_point_sampling_from(points, count, start)
}

/// Deterministic core of [`farthest_point_sampling`] with a fixed first index.
/// Ties on the max-min distance go to the lowest index.
pub fn farthest_point_sampling_from(
    points: &[Point],
    count: usize,
    start: usize,
) -> Result<Vec<usize>> {
    let n = points.len();
    if count > n {
        return Err(Error::SampleCount {
            requested: count,
            available: n,
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    assert!(start < n, "start index {start} out of range for {n} points");

    let mut selected = Vec::with_capacity(count);
    let mut min_dist = vec![f64::INFINITY; n];
    let mut current = start;
    selected.push(current);
    min_dist[current] = f64::NEG_INFINITY;

    while selected.len() < count {
        let pivot = points[current];
        let (best, _) = if n >= PARALLEL_THRESHOLD {
            min_dist
                .par_chunks_mut(CHUNK)
                .enumerate()
                .map(|(chunk, dists)| update_chunk(points, &pivot, chunk * CHUNK, dists))
                .reduce(|| (usize::MAX, f64::NEG_INFINITY), better)
        } else {
            update_chunk(points, &pivot, 0, &mut min_dist)
        };
        current = best;
        selected.push(current);
        min_dist[current] = f64::NEG_INFINITY;
    }
    Ok(selected)
}

/// Folds the pivot into the running min distances and returns the chunk's
/// farthest point.
fn update_chunk(points: &[Point], pivot: &Point, offset: usize, dists: &mut [f64]) -> (usize, f64) {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for (i, d) in dists.iter_mut().enumerate() {
        if *d == f64::NEG_INFINITY {
            continue;
        }
        let candidate = points[offset + i].squared_distance(pivot);
        if candidate < *d {
            *d = candidate;
        }
        if *d > best.1 {
            best = (offset + i, *d);
        }
    }
    best
}

fn better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}
