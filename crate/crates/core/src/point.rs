//! LiDAR points as stored in KITTI velodyne scans.

/// One LiDAR return in the sensor frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[repr(C)]
pub struct Point {
    pub x: f32,
    pub y: f32,
    pub z: f32,
    pub reflectance: f32,
}

impl Point {
    pub const fn new(x: f32, y: f32, z: f32, reflectance: f32) -> Self {
        Self {
            x,
            y,
            z,
            reflectance,
        }
    }

    pub fn position(&self) -> [f64; 3] {
        [self.x as f64, self.y as f64, self.z as f64]
    }

    /// Bit pattern of all four fields, used for exact set reconciliation.
    pub fn bits(&self) -> [u32; 4] {
        [
            self.x.to_bits(),
            self.y.to_bits(),
            self.z.to_bits(),
            self.reflectance.to_bits(),
        ]
    }

    pub fn squared_distance(&self, other: &Point) -> f64 {
        let dx = self.x as f64 - other.x as f64;
        let dy = self.y as f64 - other.y as f64;
        let dz = self.z as f64 - other.z as f64;
        dx * dx + dy * dy + dz * dz
    }
}

impl From<[f32; 4]> for Point {
    fn from(v: [f32; 4]) -> Self {
        Point::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Point> for [f32; 4] {
    fn from(p: Point) -> Self {
        [p.x, p.y, p.z, p.reflectance]
    }
}

/// An ordered set of points. Order is file order and is preserved by every
/// operation that does not explicitly add or remove points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Point>,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// True when both clouds hold the same points with identical bit patterns,
    /// in the same order. Unlike `==`, this distinguishes `-0.0` from `0.0`
    /// and treats identical NaNs as equal.
    pub fn bit_identical(&self, other: &PointCloud) -> bool {
        self.len() == other.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| a.bits() == b.bits())
    }

    pub fn select(&self, indices: &[usize]) -> PointCloud {
        PointCloud::new(indices.iter().map(|&i| self.points[i]).collect())
    }
}

impl FromIterator<Point> for PointCloud {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        PointCloud::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a PointCloud {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
