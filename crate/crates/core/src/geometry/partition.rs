//! Part-aware and random partitioning of a box's canonical cube.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::boxes::ObjectClass;
use crate::error::{Error, Result};

/// Equal-halves split of the canonical cube along a subset of axes.
///
/// Partition indices are bit-packed over the active axes in x, y, z order:
/// an active axis contributes a 1 bit when the coordinate is `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionScheme {
    pub class: ObjectClass,
    pub split: [bool; 3],
}

impl PartitionScheme {
    pub fn new(class: ObjectClass, split: [bool; 3]) -> Self {
        Self { class, split }
    }

    /// Builds the part-aware scheme for a partition count: 8 splits every
    /// axis, 4 splits heading and height, 2 splits heading only.
    pub fn part_aware(class: ObjectClass, partition_count: usize) -> Result<Self> {
        let split = match partition_count {
            8 => [true, true, true],
            4 => [true, false, true],
            2 => [true, false, false],
            n => return Err(Error::UnsupportedPartitionCount(n)),
        };
        Ok(Self { class, split })
    }

    /// Car 8, Pedestrian 4, Cyclist 4; other vehicles follow Car and seated
    /// persons follow Pedestrian.
    pub fn default_for(class: ObjectClass) -> Self {
        let count = match class {
            ObjectClass::Car | ObjectClass::Van | ObjectClass::Truck | ObjectClass::Tram => 8,
            ObjectClass::Pedestrian | ObjectClass::Cyclist | ObjectClass::PersonSitting => 4,
        };
        Self::part_aware(class, count).expect("default counts are supported")
    }

    pub fn partition_count(&self) -> usize {
        1 << self.split.iter().filter(|s| **s).count()
    }

    /// Partition of a canonical point. Coordinates of exactly 0 fall on the
    /// `>=` side.
    pub fn partition_index(&self, c: [f64; 3]) -> usize {
        let mut index = 0;
        let mut bit = 0;
        for (split, v) in self.split.iter().zip(c) {
            if *split {
                if v >= 0.0 {
                    index |= 1 << bit;
                }
                bit += 1;
            }
        }
        index
    }

    /// Canonical cell of partition `k`. The low half of a split axis is
    /// `[-1, 0)` and the high half `[0, 1]`.
    pub fn cell(&self, k: usize) -> Cell {
        let mut cell = Cell::unit();
        let mut bit = 0;
        for axis in 0..3 {
            if self.split[axis] {
                if k >> bit & 1 == 1 {
                    cell.lo[axis] = 0.0;
                } else {
                    cell.hi[axis] = 0.0;
                    cell.hi_open[axis] = true;
                }
                bit += 1;
            }
        }
        cell
    }
}

/// Axis-aligned cuboid in canonical coordinates. Lower bounds are closed;
/// each upper bound is closed unless flagged open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub hi_open: [bool; 3],
}

impl Cell {
    pub fn unit() -> Self {
        Self {
            lo: [-1.0; 3],
            hi: [1.0; 3],
            hi_open: [false; 3],
        }
    }

    pub fn closed(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self {
            lo,
            hi,
            hi_open: [false; 3],
        }
    }

    pub fn contains(&self, c: [f64; 3]) -> bool {
        (0..3).all(|a| {
            c[a] >= self.lo[a]
                && if self.hi_open[a] {
                    c[a] < self.hi[a]
                } else {
                    c[a] <= self.hi[a]
                }
        })
    }

    pub fn center(&self) -> [f64; 3] {
        std::array::from_fn(|a| 0.5 * (self.lo[a] + self.hi[a]))
    }

    pub fn extent(&self) -> [f64; 3] {
        std::array::from_fn(|a| self.hi[a] - self.lo[a])
    }

    pub fn clamp(&self, c: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|a| c[a].clamp(self.lo[a], self.hi[a]))
    }

    /// Affine map of `c` from this cell onto `target`, preserving relative
    /// position within the cell.
    pub fn map_to(&self, target: &Cell, c: [f64; 3]) -> [f64; 3] {
        if self.lo == target.lo && self.hi == target.hi {
            return c;
        }
        std::array::from_fn(|a| {
            let span = self.hi[a] - self.lo[a];
            let t = if span > 0.0 { (c[a] - self.lo[a]) / span } else { 0.5 };
            target.lo[a] + t * (target.hi[a] - target.lo[a])
        })
    }

    /// Uniform sample over the cell (upper bounds exclusive).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        std::array::from_fn(|a| {
            if self.hi[a] > self.lo[a] {
                rng.random_range(self.lo[a]..self.hi[a])
            } else {
                self.lo[a]
            }
        })
    }
}

/// Ablation baseline: cuboids with random scale and position in the
/// canonical cube. A point belongs to the first cuboid that contains it;
/// points in no cuboid belong to no partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomPartitionLayout {
    pub cells: Vec<Cell>,
}

impl RandomPartitionLayout {
    pub const MIN_SIDE: f64 = 0.25;
    pub const MAX_SIDE: f64 = 1.0;

    pub fn from_cells(cells: Vec<Cell>) -> Self {
        Self { cells }
    }

    /// Draws `count` cuboids. Per axis, side length is a uniform fraction in
    /// `[0.25, 1.0]` of the cube's extent and the position is uniform over
    /// placements that keep the cuboid inside `[-1, 1]`.
    pub fn generate<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Self {
        let cells = (0..count)
            .map(|_| {
                let mut lo = [0.0; 3];
                let mut hi = [0.0; 3];
                for axis in 0..3 {
                    let side = 2.0 * rng.random_range(Self::MIN_SIDE..=Self::MAX_SIDE);
                    let start = rng.random_range(-1.0..=(1.0 - side));
                    lo[axis] = start;
                    hi[axis] = (start + side).min(1.0);
                }
                Cell::closed(lo, hi)
            })
            .collect();
        Self { cells }
    }

    pub fn partition_index(&self, c: [f64; 3]) -> Option<usize> {
        self.cells.iter().position(|cell| cell.contains(c))
    }
}

/// How one box is divided.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionLayout {
    PartAware(PartitionScheme),
    Random(RandomPartitionLayout),
}

impl PartitionLayout {
    pub fn partition_count(&self) -> usize {
        match self {
            PartitionLayout::PartAware(s) => s.partition_count(),
            PartitionLayout::Random(r) => r.cells.len(),
        }
    }

    /// Partition of an in-box canonical point.
    pub fn partition_index(&self, c: [f64; 3]) -> Option<usize> {
        match self {
            PartitionLayout::PartAware(s) => Some(s.partition_index(c)),
            PartitionLayout::Random(r) => r.partition_index(c),
        }
    }

    pub fn cell(&self, k: usize) -> Cell {
        match self {
            PartitionLayout::PartAware(s) => s.cell(k),
            PartitionLayout::Random(r) => r.cells[k],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sign_decode() {
        let car = PartitionScheme::part_aware(ObjectClass::Car, 8).unwrap();
        assert_eq!(car.partition_index([0.5, -0.5, 0.5]), 5);
        assert_eq!(car.partition_index([0.0, 0.0, 0.0]), 7);

        let two = PartitionScheme::part_aware(ObjectClass::Cyclist, 2).unwrap();
        assert_eq!(two.partition_index([-0.1, 0.9, 0.9]), 0);
    }

    #[test]
    fn scheme_constructors() {
        let car = PartitionScheme::part_aware(ObjectClass::Car, 8).unwrap();
        assert_eq!(car.split, [true, true, true]);
        let ped = PartitionScheme::part_aware(ObjectClass::Pedestrian, 4).unwrap();
        assert_eq!(ped.split, [true, false, true]);
        let cyc = PartitionScheme::part_aware(ObjectClass::Cyclist, 2).unwrap();
        assert_eq!(cyc.split, [true, false, false]);
        assert!(matches!(
            PartitionScheme::part_aware(ObjectClass::Car, 3),
            Err(Error::UnsupportedPartitionCount(3))
        ));
        assert_eq!(PartitionScheme::default_for(ObjectClass::Car).partition_count(), 8);
        assert_eq!(PartitionScheme::default_for(ObjectClass::Pedestrian).partition_count(), 4);
        assert_eq!(PartitionScheme::default_for(ObjectClass::Cyclist).partition_count(), 4);
    }

    #[test]
    fn cells_agree_with_index() {
        let car = PartitionScheme::part_aware(ObjectClass::Car, 8).unwrap();
        let cell = car.cell(5);
        assert_eq!(cell.lo, [0.0, -1.0, 0.0]);
        assert_eq!(cell.hi, [1.0, 0.0, 1.0]);
        assert!(cell.contains([0.5, -0.5, 0.5]));
        assert!(!cell.contains([0.5, 0.0, 0.5]));
    }

    #[test]
    fn full_box_random_layout_is_unpartitioned() {
        let layout = PartitionLayout::Random(RandomPartitionLayout::from_cells(vec![Cell::unit()]));
        assert_eq!(layout.partition_count(), 1);
        for c in [[1.0, 1.0, 1.0], [-1.0, 0.3, 0.0], [0.0; 3]] {
            assert_eq!(layout.partition_index(c), Some(0));
        }
    }

    #[test]
    fn random_layout_is_seeded_and_bounded() {
        let a = RandomPartitionLayout::generate(8, &mut ChaCha8Rng::seed_from_u64(3));
        let b = RandomPartitionLayout::generate(8, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let layout = RandomPartitionLayout::generate(4, &mut rng);
            for cell in &layout.cells {
                for axis in 0..3 {
                    assert!(cell.lo[axis] >= -1.0 && cell.hi[axis] <= 1.0);
                    let side = cell.hi[axis] - cell.lo[axis];
                    assert!((0.5 - 1e-12..=2.0 + 1e-12).contains(&side));
                }
            }
        }
    }

    #[test]
    fn cell_map_is_affine() {
        let a = Cell::closed([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]);
        let b = Cell::closed([-1.0, -1.0, 0.0], [1.0, 0.0, 0.5]);
        assert_eq!(a.map_to(&b, [0.5, 0.25, 1.0]), [0.0, -0.75, 0.5]);
        assert_eq!(a.map_to(&a, [0.3, 0.1, 0.9]), [0.3, 0.1, 0.9]);
    }
}
