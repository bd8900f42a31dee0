const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, b| (h ^ *b as u64).wrapping_mul(FNV_PRIME))
}

/// Per-frame seed: 64-bit FNV-1a over the frame id's bytes, XOR-folded with
/// the master seed.
pub fn derive_scene_seed(master_seed: u64, frame_id: &str) -> u64 {
    fnv1a64(frame_id.as_bytes()) ^ master_seed
}
