use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ObjectClass;

/// The five partition operators, in their canonical PA-AUG order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Dropout,
    Swap,
    Mix,
    Sparse,
    Noise,
}

impl OpKind {
    pub const PA_AUG_ORDER: [OpKind; 5] = [
        OpKind::Dropout,
        OpKind::Swap,
        OpKind::Mix,
        OpKind::Sparse,
        OpKind::Noise,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OpKind::Dropout => "dropout",
            OpKind::Swap => "swap",
            OpKind::Mix => "mix",
            OpKind::Sparse => "sparse",
            OpKind::Noise => "noise",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        OpKind::PA_AUG_ORDER
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown operator `{s}`"))
    }
}

/// Which of the two detector configurations a single-operator preset targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Network {
    Car,
    PedCyc,
}

/// Gate probabilities and count thresholds for one object class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugParams {
    pub p_dropout: f64,
    pub p_swap: f64,
    pub p_mix: f64,
    /// Partitions with more points than this are eligible for sparsify, and
    /// keep exactly this many.
    pub sparse_threshold: usize,
    pub p_sparse: f64,
    /// Points added to each partition the noise gate fires on.
    pub noise_count: usize,
    pub p_noise: f64,
}

impl Default for AugParams {
    fn default() -> Self {
        Self::pa_aug()
    }
}

impl AugParams {
    /// Combined PA-AUG setting, shared by both networks.
    pub fn pa_aug() -> Self {
        Self {
            p_dropout: 0.2,
            p_swap: 0.2,
            p_mix: 0.2,
            sparse_threshold: 40,
            p_sparse: 0.1,
            noise_count: 10,
            p_noise: 0.1,
        }
    }

    /// Every gate closed. Thresholds keep their PA-AUG values.
    pub fn disabled() -> Self {
        Self {
            p_dropout: 0.0,
            p_swap: 0.0,
            p_mix: 0.0,
            p_sparse: 0.0,
            p_noise: 0.0,
            ..Self::pa_aug()
        }
    }

    /// Setting used when a single operator is trained in isolation; all other
    /// gates are closed.
    pub fn single_op(op: OpKind, network: Network) -> Self {
        let car = network == Network::Car;
        let pick = |c: f64, pc: f64| if car { c } else { pc };
        let mut p = Self::disabled();
        match op {
            OpKind::Dropout => p.p_dropout = pick(1.0, 0.3),
            OpKind::Swap => p.p_swap = pick(1.0, 0.7),
            OpKind::Mix => p.p_mix = pick(0.3, 1.0),
            OpKind::Sparse => {
                p.sparse_threshold = if car { 40 } else { 50 };
                p.p_sparse = 0.3;
            }
            OpKind::Noise => {
                p.noise_count = if car { 5 } else { 10 };
                p.p_noise = pick(0.3, 0.1);
            }
        }
        p
    }

    pub fn probability(&self, op: OpKind) -> f64 {
        match op {
            OpKind::Dropout => self.p_dropout,
            OpKind::Swap => self.p_swap,
            OpKind::Mix => self.p_mix,
            OpKind::Sparse => self.p_sparse,
            OpKind::Noise => self.p_noise,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for op in OpKind::PA_AUG_ORDER {
            let p = self.probability(op);
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("p_{op} = {p} is outside [0, 1]")));
            }
        }
        if self.sparse_threshold < 1 {
            return Err(Error::Config("sparse_threshold must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-class parameter table. Boxes of classes absent from the table are
/// never augmented.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassParams(pub BTreeMap<ObjectClass, AugParams>);

impl ClassParams {
    pub fn new() -> Self {
        Self::default()
    }

    /// Car, Pedestrian and Cyclist with the PA-AUG setting.
    pub fn pa_aug() -> Self {
        Self::uniform(
            &[ObjectClass::Car, ObjectClass::Pedestrian, ObjectClass::Cyclist],
            AugParams::pa_aug(),
        )
    }

    pub fn uniform(classes: &[ObjectClass], params: AugParams) -> Self {
        Self(classes.iter().map(|c| (*c, params)).collect())
    }

    pub fn with(mut self, class: ObjectClass, params: AugParams) -> Self {
        self.0.insert(class, params);
        self
    }

    pub fn get(&self, class: ObjectClass) -> Option<&AugParams> {
        self.0.get(&class)
    }

    pub fn validate(&self) -> Result<()> {
        for (class, p) in &self.0 {
            p.validate()
                .map_err(|e| Error::Config(format!("{class}: {e}")))?;
        }
        Ok(())
    }
}
