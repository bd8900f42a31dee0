use serde::{Deserialize, Serialize};

use super::params::OpKind;

/// Counters for one operator application on one scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpReport {
    pub op: OpKind,
    /// Gates drawn (per box for dropout/swap/mix, per partition for
    /// sparse/noise).
    pub gates_drawn: usize,
    pub gates_fired: usize,
    pub partitions_affected: usize,
    pub points_removed: usize,
    pub points_added: usize,
    /// Swap/mix boxes whose gate fired but had no same-class donor.
    pub skipped_no_donor: usize,
    /// Swap/mix boxes whose gate fired while every partition was empty.
    pub skipped_empty: usize,
}

impl OpReport {
    pub fn new(op: OpKind) -> Self {
        Self {
            op,
            gates_drawn: 0,
            gates_fired: 0,
            partitions_affected: 0,
            points_removed: 0,
            points_added: 0,
            skipped_no_donor: 0,
            skipped_empty: 0,
        }
    }

    /// Net change in scene point count implied by the counters.
    pub fn point_delta(&self) -> i64 {
        self.points_added as i64 - self.points_removed as i64
    }

    pub fn accumulate(&mut self, other: &OpReport) {
        debug_assert_eq!(self.op, other.op);
        self.gates_drawn += other.gates_drawn;
        self.gates_fired += other.gates_fired;
        self.partitions_affected += other.partitions_affected;
        self.points_removed += other.points_removed;
        self.points_added += other.points_added;
        self.skipped_no_donor += other.skipped_no_donor;
        self.skipped_empty += other.skipped_empty;
    }
}
