//! Oriented boxes, canonical transforms, partitioning and sampling.

mod assign;
mod boxes;
mod fps;
mod partition;

pub use assign::{assign_points_to_boxes, Classifier, Membership, SceneAssignment};
pub use boxes::{in_unit_cube, normalize_angle, Box3D, CanonicalFrame, ObjectClass};
pub use fps::{farthest_point_sampling, farthest_point_sampling_from};
pub use partition::{Cell, PartitionLayout, PartitionScheme, RandomPartitionLayout};

