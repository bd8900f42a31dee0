//! Oriented 3D boxes in the sensor frame.
//!
//! Yaw is measured counterclockwise about +z from +x. The canonical frame of
//! a box maps its interior onto `[-1, 1]^3` with +x along the heading, +y to
//! the object's left and +z up.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// KITTI object classes that produce boxes. `Misc` and `DontCare` rows never
/// become boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ObjectClass {
    Car,
    Pedestrian,
    Cyclist,
    Van,
    Truck,
    #[serde(rename = "Person_sitting")]
    PersonSitting,
    Tram,
}

impl ObjectClass {
    pub const ALL: [ObjectClass; 7] = [
        ObjectClass::Car,
        ObjectClass::Pedestrian,
        ObjectClass::Cyclist,
        ObjectClass::Van,
        ObjectClass::Truck,
        ObjectClass::PersonSitting,
        ObjectClass::Tram,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectClass::Car => "Car",
            ObjectClass::Pedestrian => "Pedestrian",
            ObjectClass::Cyclist => "Cyclist",
            ObjectClass::Van => "Van",
            ObjectClass::Truck => "Truck",
            ObjectClass::PersonSitting => "Person_sitting",
            ObjectClass::Tram => "Tram",
        }
    }

    /// Integer code used by the array interface.
    pub fn code(&self) -> i64 {
        ObjectClass::ALL.iter().position(|c| c == self).unwrap() as i64
    }

    pub fn from_code(code: i64) -> Option<ObjectClass> {
        usize::try_from(code)
            .ok()
            .and_then(|i| ObjectClass::ALL.get(i).copied())
    }
}

impl fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ObjectClass::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown object class `{s}`"))
    }
}

/// Wraps an angle into `[-pi, pi)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let wrapped = angle - 2.0 * PI * ((angle + PI) / (2.0 * PI)).floor();
    // floor() rounding can leave exactly +pi behind
    if wrapped >= PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3D {
    /// Volumetric center in the sensor frame, meters.
    pub center: [f64; 3],
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub yaw: f64,
    pub class: ObjectClass,
    /// Ordinal of the box within its scene.
    pub index: usize,
}

impl Box3D {
    pub fn new(
        center: [f64; 3],
        dims: [f64; 3],
        yaw: f64,
        class: ObjectClass,
        index: usize,
    ) -> Self {
        Self {
            center,
            length: dims[0],
            width: dims[1],
            height: dims[2],
            yaw: normalize_angle(yaw),
            class,
            index,
        }
    }

    pub fn dims(&self) -> [f64; 3] {
        [self.length, self.width, self.height]
    }

    pub fn is_valid(&self) -> bool {
        self.length > 0.0
            && self.width > 0.0
            && self.height > 0.0
            && self.center.iter().all(|v| v.is_finite())
            && self.yaw.is_finite()
    }

    /// Maps a sensor-frame point into the box's canonical frame.
    pub fn world_to_canonical(&self, p: [f64; 3]) -> [f64; 3] {
        self.frame().to_canonical(p)
    }

    /// Inverse of [`Box3D::world_to_canonical`].
    pub fn canonical_to_world(&self, c: [f64; 3]) -> [f64; 3] {
        self.frame().to_world(c)
    }

    pub fn frame(&self) -> CanonicalFrame {
        CanonicalFrame::new(self)
    }

    /// Closed-interval containment test.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        in_unit_cube(self.world_to_canonical(p))
    }

    /// Corners in canonical bit order: corner `i` sits at canonical
    /// `(±1, ±1, ±1)` with bit0 selecting +x (front), bit1 +y (left) and
    /// bit2 +z (top). Corner 7 is front-left-top.
    pub fn corners(&self) -> [[f64; 3]; 8] {
        std::array::from_fn(|i| {
            let sign = |bit: usize| if i >> bit & 1 == 1 { 1.0 } else { -1.0 };
            self.canonical_to_world([sign(0), sign(1), sign(2)])
        })
    }

    /// Radius of the circumscribed sphere, used as a cheap rejection test.
    pub fn bounding_radius(&self) -> f64 {
        0.5 * (self.length * self.length + self.width * self.width + self.height * self.height)
            .sqrt()
    }
}

/// Box transform with the trigonometry evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalFrame {
    center: [f64; 3],
    sin: f64,
    cos: f64,
    half: [f64; 3],
}

impl CanonicalFrame {
    pub fn new(b: &Box3D) -> Self {
        let (sin, cos) = b.yaw.sin_cos();
        Self {
            center: b.center,
            sin,
            cos,
            half: [b.length / 2.0, b.width / 2.0, b.height / 2.0],
        }
    }

    pub fn to_canonical(&self, p: [f64; 3]) -> [f64; 3] {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let dz = p[2] - self.center[2];
        let local_x = self.cos * dx + self.sin * dy;
        let local_y = -self.sin * dx + self.cos * dy;
        [local_x / self.half[0], local_y / self.half[1], dz / self.half[2]]
    }

    pub fn to_world(&self, c: [f64; 3]) -> [f64; 3] {
        let local_x = c[0] * self.half[0];
        let local_y = c[1] * self.half[1];
        let local_z = c[2] * self.half[2];
        [
            self.center[0] + self.cos * local_x - self.sin * local_y,
            self.center[1] + self.sin * local_x + self.cos * local_y,
            self.center[2] + local_z,
        ]
    }
}

pub fn in_unit_cube(c: [f64; 3]) -> bool {
    c.iter().all(|v| (-1.0..=1.0).contains(v))
}
