//! A single frame ready for augmentation: points, boxes, per-box partition
//! layouts and the current assignment.

use crate::geometry::{
    assign_points_to_boxes, Box3D, Classifier, Membership, PartitionLayout, SceneAssignment,
};
use crate::point::{Point, PointCloud};

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    cloud: PointCloud,
    boxes: Vec<Box3D>,
    layouts: Vec<Option<PartitionLayout>>,
    assignment: SceneAssignment,
}

impl Scene {
    /// `layouts[i]` partitions `boxes[i]`; `None` leaves the box whole and
    /// excludes it from augmentation.
    pub fn new(
        cloud: PointCloud,
        boxes: Vec<Box3D>,
        layouts: Vec<Option<PartitionLayout>>,
    ) -> Self {
        assert_eq!(boxes.len(), layouts.len(), "one layout slot per box");
        let assignment = assign_points_to_boxes(&cloud.points, &boxes, &layouts);
        Self {
            cloud,
            boxes,
            layouts,
            assignment,
        }
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn points(&self) -> &[Point] {
        &self.cloud.points
    }

    pub fn boxes(&self) -> &[Box3D] {
        &self.boxes
    }

    pub fn layouts(&self) -> &[Option<PartitionLayout>] {
        &self.layouts
    }

    pub fn layout(&self, box_index: usize) -> Option<&PartitionLayout> {
        self.layouts[box_index].as_ref()
    }

    pub fn assignment(&self) -> &SceneAssignment {
        &self.assignment
    }

    pub fn into_cloud(self) -> PointCloud {
        self.cloud
    }

    /// Same scene with the assignment recomputed from scratch.
    pub fn reassigned(&self) -> Scene {
        Scene::new(self.cloud.clone(), self.boxes.clone(), self.layouts.clone())
    }

    pub fn edit(&self) -> SceneEdit<'_> {
        SceneEdit {
            scene: self,
            removed: vec![false; self.cloud.len()],
            added: Vec::new(),
        }
    }
}

/// Pending removals and insertions against a scene. Retained points keep
/// their order and membership; inserted points are appended and classified.
#[derive(Debug)]
pub struct SceneEdit<'a> {
    scene: &'a Scene,
    removed: Vec<bool>,
    added: Vec<Point>,
}

impl SceneEdit<'_> {
    pub fn remove(&mut self, index: usize) {
        self.removed[index] = true;
    }

    pub fn remove_all(&mut self, indices: &[usize]) {
        for &i in indices {
            self.removed[i] = true;
        }
    }

    pub fn add(&mut self, p: Point) {
        self.added.push(p);
    }

    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|r| **r).count()
    }

    pub fn added_count(&self) -> usize {
        self.added.len()
    }

    pub fn finish(self) -> Scene {
        let scene = self.scene;
        if self.added.is_empty() && !self.removed.iter().any(|r| *r) {
            return scene.clone();
        }
        let kept = self.removed.iter().filter(|r| !**r).count();
        let mut points = Vec::with_capacity(kept + self.added.len());
        let mut membership: Vec<Membership> = Vec::with_capacity(points.capacity());
        for (i, p) in scene.cloud.points.iter().enumerate() {
            if !self.removed[i] {
                points.push(*p);
                membership.push(scene.assignment.membership[i]);
            }
        }
        let classifier = Classifier::new(&scene.boxes, &scene.layouts);
        for p in self.added {
            membership.push(classifier.classify(&p));
            points.push(p);
        }
        Scene {
            cloud: PointCloud::new(points),
            boxes: scene.boxes.clone(),
            layouts: scene.layouts.clone(),
            assignment: SceneAssignment::from_membership(membership, &scene.layouts),
        }
    }
}
