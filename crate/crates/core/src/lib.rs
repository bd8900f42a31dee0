//! Part-aware partition augmentation for LiDAR scenes with oriented 3D box
//! labels, plus generators for corrupted evaluation sets.
//!
//! A scene is decomposed into background points and, for every labelled
//! box, a set of partitions defined in the box's canonical frame. Five
//! operators (dropout, swap, mix, sparsify, noise) act on those partitions
//! and are composed in that order by [`pipeline::pa_aug_scene`].

pub mod arrays;
pub mod augment;
pub mod cli;
pub mod corruption;
pub mod error;
pub mod geometry;
pub mod kitti;
pub mod pipeline;
pub mod ply;
pub mod point;
pub mod scene;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use point::{Point, PointCloud};
pub use scene::Scene;
