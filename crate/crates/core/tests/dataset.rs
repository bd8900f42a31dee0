use std::fs;
use std::path::Path;

use paaug::augment::AugParams;
use paaug::corruption::{corrupt_dataset, CorruptionKind, CorruptionSpec};
use paaug::kitti::{read_point_cloud_bin, KittiLayout, CALIB_DIR, LABEL_DIR, VELODYNE_DIR};
use paaug::pipeline::{augment_dataset, subset_split_file, tree_digest, PipelineConfig};
use paaug::stats::dataset_stats;
use paaug::synthetic::{write_synthetic_dataset, SyntheticSpec};
use tempfile::TempDir;

fn dataset(frames: usize, seed: u64) -> (TempDir, Vec<String>) {
    let dir = tempfile::tempdir().unwrap();
    let ids = write_synthetic_dataset(dir.path(), frames, &SyntheticSpec::default(), seed).unwrap();
    (dir, ids)
}

fn same_bytes(a: &Path, b: &Path) -> bool {
    fs::read(a).unwrap() == fs::read(b).unwrap()
}

#[test]
fn digest_is_independent_of_worker_count() {
    let (input, _) = dataset(12, 5);
    let config = PipelineConfig {
        master_seed: 42,
        ..PipelineConfig::default()
    };
    let mut digests = Vec::new();
    for workers in [1, 8, 3, 1] {
        let out = tempfile::tempdir().unwrap();
        augment_dataset(input.path(), out.path(), &config, None, workers).unwrap();
        digests.push(tree_digest(out.path()).unwrap());
    }
    assert!(digests.windows(2).all(|w| w[0] == w[1]), "{digests:?}");

    let other = tempfile::tempdir().unwrap();
    let reseeded = PipelineConfig {
        master_seed: 43,
        ..config
    };
    augment_dataset(input.path(), other.path(), &reseeded, None, 4).unwrap();
    assert_ne!(tree_digest(other.path()).unwrap(), digests[0]);
}

#[test]
fn zero_probabilities_copy_scans_byte_for_byte() {
    let (input, ids) = dataset(4, 9);
    let out = tempfile::tempdir().unwrap();
    let config = PipelineConfig::default().with_params(AugParams::disabled());
    let summary = augment_dataset(input.path(), out.path(), &config, None, 2).unwrap();
    assert_eq!(summary.frames_written, 4);
    assert_eq!(summary.points_in, summary.points_out);
    for id in &ids {
        for dir in [VELODYNE_DIR, LABEL_DIR, CALIB_DIR] {
            let ext = if dir == VELODYNE_DIR { "bin" } else { "txt" };
            let name = format!("{id}.{ext}");
            assert!(same_bytes(&input.path().join(dir).join(&name), &out.path().join(dir).join(&name)));
        }
    }
}

#[test]
fn augmentation_changes_scans_and_keeps_labels() {
    let (input, ids) = dataset(6, 2);
    let out = tempfile::tempdir().unwrap();
    let config = PipelineConfig::default().with_params(AugParams {
        p_dropout: 0.5,
        p_swap: 0.5,
        p_mix: 0.5,
        sparse_threshold: 20,
        p_sparse: 0.5,
        noise_count: 10,
        p_noise: 0.5,
    });
    let summary = augment_dataset(input.path(), out.path(), &config, None, 3).unwrap();
    assert!(summary.is_success());
    assert!(summary.totals.iter().all(|r| r.gates_fired > 0), "{:?}", summary.totals);
    let input_layout = KittiLayout::new(input.path());
    let output_layout = KittiLayout::new(out.path());
    let mut changed = 0;
    for (id, record) in ids.iter().zip(&summary.frames) {
        assert_eq!(&record.id, id);
        assert!(same_bytes(&input_layout.label(id), &output_layout.label(id)));
        let cloud = read_point_cloud_bin(output_layout.velodyne(id)).unwrap();
        assert_eq!(cloud.len(), record.points_out);
        let delta: i64 = record.reports.iter().map(|r| r.point_delta()).sum();
        assert_eq!(record.points_out as i64, record.points_in as i64 + delta);
        if !same_bytes(&input_layout.velodyne(id), &output_layout.velodyne(id)) {
            changed += 1;
        }
    }
    assert!(changed > 0);
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("augment_summary.json")).unwrap()).unwrap();
    assert!(written.get("timing").is_none());
    assert_eq!(written["frames_written"], 6);
}

#[test]
fn split_file_limits_frames_and_failures_are_recorded() {
    let (input, ids) = dataset(5, 3);
    let split = input.path().join("split.txt");
    fs::write(&split, format!("{}\n{}\nmissing\n", ids[0], ids[3])).unwrap();
    let out = tempfile::tempdir().unwrap();
    let summary = augment_dataset(input.path(), out.path(), &PipelineConfig::default(), Some(&split), 2).unwrap();
    assert_eq!(summary.frames_requested, 3);
    assert_eq!(summary.frames_written, 2);
    assert_eq!(summary.failures.len(), 1);
    assert_eq!(summary.failures[0].id, "missing");
    assert_eq!(KittiLayout::new(out.path()).frame_ids().unwrap(), vec![ids[0].clone(), ids[3].clone()]);
}

#[test]
fn subset_split_file_writes_sorted_subset() {
    let dir = tempfile::tempdir().unwrap();
    let ids: Vec<String> = (0..3712).map(|i| format!("{i:06}")).collect();
    let full = dir.path().join("train.txt");
    paaug::kitti::write_split(&ids, &full).unwrap();
    let sub = dir.path().join("train_40.txt");
    let subset = subset_split_file(&full, &sub, 0.4, 11).unwrap();
    assert_eq!(subset.len(), 1485);
    assert_eq!(paaug::kitti::read_split(&sub).unwrap(), subset);
}

#[test]
fn corruption_datasets() {
    let (input, ids) = dataset(3, 8);
    let layout = KittiLayout::new(input.path());

    let out = tempfile::tempdir().unwrap();
    let spec = CorruptionSpec::new(CorruptionKind::Sparse, 1);
    let manifest = corrupt_dataset(input.path(), out.path(), &spec, None, 2).unwrap();
    for r in &manifest.frames {
        assert_eq!(r.points_out, (0.3 * r.points_in as f64).round() as usize);
    }

    let out = tempfile::tempdir().unwrap();
    let spec = CorruptionSpec::new(CorruptionKind::Jitter, 1);
    corrupt_dataset(input.path(), out.path(), &spec, None, 2).unwrap();
    for id in &ids {
        let a = read_point_cloud_bin(layout.velodyne(id)).unwrap();
        let b = read_point_cloud_bin(KittiLayout::new(out.path()).velodyne(id)).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(same_bytes(&layout.label(id), &KittiLayout::new(out.path()).label(id)));
    }

    let out = tempfile::tempdir().unwrap();
    let spec = CorruptionSpec::new(CorruptionKind::Dropout, 1);
    let manifest = corrupt_dataset(input.path(), out.path(), &spec, None, 1).unwrap();
    let boxes = SyntheticSpec::default().boxes;
    for r in &manifest.frames {
        assert_eq!(r.dropped.len(), boxes);
        let removed: usize = r.dropped.iter().map(|d| d.points).sum();
        assert_eq!(r.points_out, r.points_in - removed);
    }
    let again = tempfile::tempdir().unwrap();
    corrupt_dataset(input.path(), again.path(), &spec, None, 4).unwrap();
    assert_eq!(tree_digest(out.path()).unwrap(), tree_digest(again.path()).unwrap());
}

#[test]
fn stats_unchanged_by_disabled_augmentation() {
    let (input, _) = dataset(3, 4);
    let out = tempfile::tempdir().unwrap();
    let config = PipelineConfig::default().with_params(AugParams::disabled());
    augment_dataset(input.path(), out.path(), &config, None, 2).unwrap();
    let a = dataset_stats(input.path(), None, &config, 2).unwrap();
    let b = dataset_stats(out.path(), None, &config, 2).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.frames, 3);
    let spec = SyntheticSpec::default();
    assert_eq!(a.foreground_points, 3 * spec.boxes * spec.points_per_box);
}
