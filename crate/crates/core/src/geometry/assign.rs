//! Decomposition of a cloud into background and per-box, per-partition
//! foreground sets.

use super::boxes::{in_unit_cube, Box3D, CanonicalFrame};
use super::partition::PartitionLayout;
use crate::point::Point;

/// Where a single point belongs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Background,
    /// Inside box `box_index`. `partition` is `None` when the box has no
    /// layout, or when a random layout leaves the point unclaimed.
    Object {
        box_index: usize,
        partition: Option<usize>,
    },
}

impl Membership {
    pub fn is_background(&self) -> bool {
        matches!(self, Membership::Background)
    }

    pub fn box_index(&self) -> Option<usize> {
        match self {
            Membership::Background => None,
            Membership::Object { box_index, .. } => Some(*box_index),
        }
    }
}

/// Classifies points against a fixed set of boxes. Membership is a pure
/// function of the point coordinates, so retained points never need
/// reclassification.
#[derive(Debug, Clone)]
pub struct Classifier<'a> {
    boxes: &'a [Box3D],
    layouts: &'a [Option<PartitionLayout>],
    frames: Vec<CanonicalFrame>,
    reach_sq: Vec<f64>,
}

impl<'a> Classifier<'a> {
    pub fn new(boxes: &'a [Box3D], layouts: &'a [Option<PartitionLayout>]) -> Self {
        assert_eq!(boxes.len(), layouts.len(), "one layout slot per box");
        let frames = boxes.iter().map(Box3D::frame).collect();
        let reach_sq = boxes
            .iter()
            .map(|b| {
                let r = b.bounding_radius();
                r * r * (1.0 + 1e-9) + 1e-12
            })
            .collect();
        Self {
            boxes,
            layouts,
            frames,
            reach_sq,
        }
    }

    /// A point inside several boxes goes to the box with the nearest center,
    /// lowest index on ties. Box faces are inclusive.
    pub fn classify(&self, p: &Point) -> Membership {
        let pos = p.position();
        let mut best: Option<(usize, f64, [f64; 3])> = None;
        for (i, b) in self.boxes.iter().enumerate() {
            let d2 = dist_sq(pos, b.center);
            if d2 > self.reach_sq[i] {
                continue;
            }
            let c = self.frames[i].to_canonical(pos);
            if !in_unit_cube(c) {
                continue;
            }
            if best.is_none_or(|(_, bd, _)| d2 < bd) {
                best = Some((i, d2, c));
            }
        }
        match best {
            None => Membership::Background,
            Some((box_index, _, c)) => Membership::Object {
                box_index,
                partition: self.layouts[box_index]
                    .as_ref()
                    .and_then(|l| l.partition_index(c)),
            },
        }
    }

    pub fn boxes(&self) -> &[Box3D] {
        self.boxes
    }
}

fn dist_sq(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]) * (a[k] - b[k])).sum()
}

/// Per-point memberships plus the inverse index from (box, partition) to
/// point indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneAssignment {
    pub membership: Vec<Membership>,
    /// `members[box][partition]` lists point indices in ascending order.
    pub members: Vec<Vec<Vec<usize>>>,
    /// In-box points that belong to no partition, per box.
    pub unpartitioned: Vec<Vec<usize>>,
}

impl SceneAssignment {
    pub fn from_membership(
        membership: Vec<Membership>,
        layouts: &[Option<PartitionLayout>],
    ) -> Self {
        let mut members: Vec<Vec<Vec<usize>>> = layouts
            .iter()
            .map(|l| vec![Vec::new(); l.as_ref().map_or(0, |l| l.partition_count())])
            .collect();
        let mut unpartitioned = vec![Vec::new(); layouts.len()];
        for (i, m) in membership.iter().enumerate() {
            if let Membership::Object {
                box_index,
                partition,
            } = *m
            {
                match partition {
                    Some(k) => members[box_index][k].push(i),
                    None => unpartitioned[box_index].push(i),
                }
            }
        }
        Self {
            membership,
            members,
            unpartitioned,
        }
    }

    pub fn background_count(&self) -> usize {
        self.membership.iter().filter(|m| m.is_background()).count()
    }

    pub fn foreground_count(&self) -> usize {
        self.membership.len() - self.background_count()
    }

    pub fn partition(&self, box_index: usize, k: usize) -> &[usize] {
        &self.members[box_index][k]
    }
}

/// Assigns every point to the background or to one (box, partition).
pub fn assign_points_to_boxes(
    points: &[Point],
    boxes: &[Box3D],
    layouts: &[Option<PartitionLayout>],
) -> SceneAssignment {
    let classifier = Classifier::new(boxes, layouts);
    let membership = points.iter().map(|p| classifier.classify(p)).collect();
    SceneAssignment::from_membership(membership, layouts)
}
