use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// One population unit: measurement `x` and known positive size `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub id: usize,
    pub x: f64,
    pub z: f64,
}

/// A finite population with contiguous ids `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    units: Vec<Unit>,
}

impl Population {
    /// Builds a population from `(x, z)` pairs, assigning ids in order.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let units: Vec<Unit> = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (x, z))| Unit { id, x, z })
            .collect();
        Self::from_units(units)
    }

    pub(crate) fn from_units(units: Vec<Unit>) -> Result<Self> {
        if units.len() < 2 {
            return Err(Error::PopulationTooSmall(units.len()));
        }
        for (i, u) in units.iter().enumerate() {
            if u.id != i {
                return Err(Error::InvalidRecord(format!(
                    "population ids must be contiguous from 0, found {} at position {i}",
                    u.id
                )));
            }
            if !(u.z > 0.0 && u.z.is_finite()) {
                return Err(Error::NonPositiveSize {
                    index: i,
                    value: u.z,
                });
            }
            if !u.x.is_finite() {
                return Err(Error::InvalidRecord(format!("unit {i} has non-finite x")));
            }
        }
        Ok(Self { units })
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn size(&self) -> usize {
        self.units.len()
    }

    pub fn x(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.units.iter().map(|u| u.x)
    }

    pub fn z(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.units.iter().map(|u| u.z)
    }

    /// Population total of `x`.
    pub fn total(&self) -> f64 {
        super::estimate::stable_sum(self.x())
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.size() as f64
    }
}

/// Distribution of the size variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SizeModel {
    /// `z ~ Uniform(low, high)`; redrawn if a draw lands exactly on 0.
    Uniform { low: f64, high: f64 },
    /// Fixed sizes; the population size must equal `values.len()`.
    Fixed { values: Vec<f64> },
}

/// How the `spread` parameter of a normal conditional is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadKind {
    Variance,
    StdDev,
}

/// Conditional distribution `x | z ~ Normal(intercept + slope * z, spread)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalModel {
    pub intercept: f64,
    pub slope: f64,
    pub spread: f64,
    pub spread_kind: SpreadKind,
}

impl ConditionalModel {
    pub fn std_dev(&self) -> f64 {
        match self.spread_kind {
            SpreadKind::Variance => self.spread.sqrt(),
            SpreadKind::StdDev => self.spread,
        }
    }
}

/// Generative model for a simulated population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationModel {
    pub size: SizeModel,
    pub conditional: ConditionalModel,
}

impl Default for PopulationModel {
    /// `z ~ Uniform(0, 10)`, `x | z ~ Normal(z + 5, variance 2)`.
    fn default() -> Self {
        Self {
            size: SizeModel::Uniform {
                low: 0.0,
                high: 10.0,
            },
            conditional: ConditionalModel {
                intercept: 5.0,
                slope: 1.0,
                spread: 2.0,
                spread_kind: SpreadKind::Variance,
            },
        }
    }
}

impl PopulationModel {
    /// The default model with the spread read as a standard deviation.
    pub fn with_std_dev_reading() -> Self {
        let mut model = Self::default();
        model.conditional.spread_kind = SpreadKind::StdDev;
        model
    }
}

/// Draws a population of `n_units` units from `model`.
///
/// Units are generated in id order, each consuming the size draw first and
/// then the measurement draw, so the output is a pure function of
/// `(n_units, seed, model)`.
pub fn generate_population(
    n_units: usize,
    seed: u64,
    model: &PopulationModel,
) -> Result<Population> {
    if n_units < 2 {
        return Err(Error::PopulationTooSmall(n_units));
    }
    let cond = &model.conditional;
    let sd = cond.std_dev();
    let noise = Normal::new(0.0, sd)
        .map_err(|e| Error::InvalidParameter(format!("conditional spread: {e}")))?;
    let mut rng = rng_from_seed(seed);

    let mut units = Vec::with_capacity(n_units);
    match &model.size {
        SizeModel::Uniform { low, high } => {
            if !(*low >= 0.0 && high > low && high.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "uniform size model needs 0 <= low < high, got ({low}, {high})"
                )));
            }
            let dist = Uniform::new(*low, *high)
                .map_err(|e| Error::InvalidParameter(format!("size model: {e}")))?;
            for id in 0..n_units {
                let mut z = dist.sample(&mut rng);
                while z <= 0.0 {
                    z = dist.sample(&mut rng);
                }
                let x = cond.intercept + cond.slope * z + noise.sample(&mut rng);
                units.push(Unit { id, x, z });
            }
        }
        SizeModel::Fixed { values } => {
            if values.len() != n_units {
                return Err(Error::InvalidParameter(format!(
                    "fixed size model has {} values for N = {n_units}",
                    values.len()
                )));
            }
            for (id, &z) in values.iter().enumerate() {
                let x = cond.intercept + cond.slope * z + noise.sample(&mut rng);
                units.push(Unit { id, x, z });
            }
        }
    }
    Population::from_units(units)
}
