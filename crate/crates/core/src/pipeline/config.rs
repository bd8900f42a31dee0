//! JSON pipeline configuration.
//!
//! ```json
//! {
//!   "master_seed": 42,
//!   "rng": "chacha8",
//!   "order": ["dropout", "swap", "mix", "sparse", "noise"],
//!   "random_partitions": false,
//!   "classes": {
//!     "Car":        { "partitions": 8, "p_dropout": 0.2, "p_swap": 0.2, "p_mix": 0.2,
//!                     "sparse_threshold": 40, "p_sparse": 0.1, "noise_count": 10, "p_noise": 0.1 },
//!     "Pedestrian": { "partitions": 4 },
//!     "Cyclist":    { "partitions": 4, "splits": [true, false, true] }
//!   }
//! }
//! ```
//!
//! Every field is optional. Omitted class fields take the PA-AUG defaults and
//! the class's default partition count; omitting `classes` configures Car,
//! Pedestrian and Cyclist. `splits` overrides which canonical axes are halved
//! and must agree with `partitions` when both are given.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::augment::{AugParams, ClassParams, OpKind};
use crate::error::{Error, Result};
use crate::geometry::{Box3D, ObjectClass, PartitionLayout, PartitionScheme, RandomPartitionLayout};

/// Random generator used for every stream. Pinned in the config so runs are
/// reproducible bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RngAlgorithm {
    /// ChaCha with 8 rounds, seeded through `SeedableRng::seed_from_u64`.
    #[default]
    ChaCha8,
}

impl RngAlgorithm {
    pub fn id(&self) -> &'static str {
        match self {
            RngAlgorithm::ChaCha8 => "chacha8",
        }
    }

    pub fn stream(&self, seed: u64) -> ChaCha8Rng {
        match self {
            RngAlgorithm::ChaCha8 => ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

fn pa(f: impl Fn(AugParams) -> f64) -> f64 {
    f(AugParams::pa_aug())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splits: Option<[bool; 3]>,
    #[serde(default = "default_p_dropout")]
    pub p_dropout: f64,
    #[serde(default = "default_p_swap")]
    pub p_swap: f64,
    #[serde(default = "default_p_mix")]
    pub p_mix: f64,
    #[serde(default = "default_sparse_threshold")]
    pub sparse_threshold: usize,
    #[serde(default = "default_p_sparse")]
    pub p_sparse: f64,
    #[serde(default = "default_noise_count")]
    pub noise_count: usize,
    #[serde(default = "default_p_noise")]
    pub p_noise: f64,
}

fn default_p_dropout() -> f64 {
    pa(|p| p.p_dropout)
}
fn default_p_swap() -> f64 {
    pa(|p| p.p_swap)
}
fn default_p_mix() -> f64 {
    pa(|p| p.p_mix)
}
fn default_sparse_threshold() -> usize {
    AugParams::pa_aug().sparse_threshold
}
fn default_p_sparse() -> f64 {
    pa(|p| p.p_sparse)
}
fn default_noise_count() -> usize {
    AugParams::pa_aug().noise_count
}
fn default_p_noise() -> f64 {
    pa(|p| p.p_noise)
}

impl ClassConfig {
    pub fn from_params(params: AugParams, partitions: Option<usize>) -> Self {
        Self {
            partitions,
            splits: None,
            p_dropout: params.p_dropout,
            p_swap: params.p_swap,
            p_mix: params.p_mix,
            sparse_threshold: params.sparse_threshold,
            p_sparse: params.p_sparse,
            noise_count: params.noise_count,
            p_noise: params.p_noise,
        }
    }

    pub fn params(&self) -> AugParams {
        AugParams {
            p_dropout: self.p_dropout,
            p_swap: self.p_swap,
            p_mix: self.p_mix,
            sparse_threshold: self.sparse_threshold,
            p_sparse: self.p_sparse,
            noise_count: self.noise_count,
            p_noise: self.p_noise,
        }
    }

    pub fn scheme(&self, class: ObjectClass) -> Result<PartitionScheme> {
        let scheme = match (self.splits, self.partitions) {
            (Some(split), _) => PartitionScheme::new(class, split),
            (None, Some(n)) => PartitionScheme::part_aware(class, n)?,
            (None, None) => PartitionScheme::default_for(class),
        };
        let count = scheme.partition_count();
        if count < 2 {
            return Err(Error::UnsupportedPartitionCount(count));
        }
        if let Some(n) = self.partitions {
            if n != count {
                return Err(Error::Config(format!(
                    "{class}: splits give {count} partitions but partitions = {n}"
                )));
            }
        }
        Ok(scheme)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub rng: RngAlgorithm,
    #[serde(default = "default_order")]
    pub order: Vec<OpKind>,
    /// Replace part-aware partitions with randomly scaled and placed cuboids.
    #[serde(default)]
    pub random_partitions: bool,
    #[serde(default = "default_classes")]
    pub classes: BTreeMap<ObjectClass, ClassConfig>,
}

fn default_order() -> Vec<OpKind> {
    OpKind::PA_AUG_ORDER.to_vec()
}

fn default_classes() -> BTreeMap<ObjectClass, ClassConfig> {
    [ObjectClass::Car, ObjectClass::Pedestrian, ObjectClass::Cyclist]
        .into_iter()
        .map(|c| (c, ClassConfig::from_params(AugParams::pa_aug(), None)))
        .collect()
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            rng: RngAlgorithm::default(),
            order: default_order(),
            random_partitions: false,
            classes: default_classes(),
        }
    }
}

impl PipelineConfig {
    /// Same classes and partition counts with the given parameters everywhere.
    pub fn with_params(mut self, params: AugParams) -> Self {
        for c in self.classes.values_mut() {
            *c = ClassConfig {
                partitions: c.partitions,
                splits: c.splits,
                ..ClassConfig::from_params(params, None)
            };
        }
        self
    }

    pub fn with_partitions(mut self, class: ObjectClass, partitions: usize) -> Self {
        let entry = self
            .classes
            .entry(class)
            .or_insert_with(|| ClassConfig::from_params(AugParams::pa_aug(), None));
        entry.partitions = Some(partitions);
        entry.splits = None;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: PipelineConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for (i, op) in self.order.iter().enumerate() {
            if self.order[..i].contains(op) {
                return Err(Error::Config(format!("operator `{op}` listed twice in order")));
            }
        }
        for (class, c) in &self.classes {
            c.params()
                .validate()
                .map_err(|e| Error::Config(format!("{class}: {e}")))?;
            c.scheme(*class)?;
        }
        Ok(())
    }

    pub fn class_params(&self) -> ClassParams {
        ClassParams(self.classes.iter().map(|(k, v)| (*k, v.params())).collect())
    }

    pub fn scheme_for(&self, class: ObjectClass) -> Option<PartitionScheme> {
        self.classes.get(&class).and_then(|c| c.scheme(class).ok())
    }

    /// One layout per box: the class's part-aware scheme, or, in random mode,
    /// a random layout with the same partition count drawn from `rng` in box
    /// order. Unconfigured classes get none.
    pub fn layouts_for<R: Rng + ?Sized>(
        &self,
        boxes: &[Box3D],
        rng: &mut R,
    ) -> Vec<Option<PartitionLayout>> {
        boxes
            .iter()
            .map(|b| {
                let scheme = self.scheme_for(b.class)?;
                Some(if self.random_partitions {
                    PartitionLayout::Random(RandomPartitionLayout::generate(
                        scheme.partition_count(),
                        rng,
                    ))
                } else {
                    PartitionLayout::PartAware(scheme)
                })
            })
            .collect()
    }
}
