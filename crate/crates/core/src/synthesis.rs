//! The two synthesizers used in the simulation study: a faithful one that
//! takes a simple random sample straight from the population, and a
//! design-ignoring one that draws from a normal fitted to the unweighted
//! confidential sample.
//!
//! Synthetic data carry no weights. Downstream estimation treats them as a
//! simple random sample with weight `N / n0`.

use std::io::{Read, Write};

use rand::seq::index;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::survey::{mean_and_variance, Population, SurveySample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FaithfulSrs,
    BiasedNormal,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::FaithfulSrs => "faithful_srs",
            Provenance::BiasedNormal => "biased_normal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    x: Vec<f64>,
    population_size: usize,
    provenance: Provenance,
}

/// JSON sidecar written next to the single-column CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSidecar {
    pub n0: usize,
    #[serde(rename = "N")]
    pub population_size: usize,
    pub provenance: Provenance,
}

impl SyntheticData {
    pub fn new(x: Vec<f64>, population_size: usize, provenance: Provenance) -> Result<Self> {
        if x.len() > population_size {
            return Err(Error::SampleTooLarge {
                n: x.len(),
                population: population_size,
            });
        }
        Ok(Self {
            x,
            population_size,
            provenance,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn n0(&self) -> usize {
        self.x.len()
    }

    pub fn population_size(&self) -> usize {
        self.population_size
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn sidecar(&self) -> SyntheticSidecar {
        SyntheticSidecar {
            n0: self.n0(),
            population_size: self.population_size,
            provenance: self.provenance,
        }
    }

    /// Writes the values as a CSV with the single header `x`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x"])?;
        for v in &self.x {
            w.write_record([v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_sidecar<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.sidecar())?;
        Ok(())
    }

    pub fn read<R1: Read, R2: Read>(csv_in: R1, sidecar_in: R2) -> Result<Self> {
        let sidecar: SyntheticSidecar = serde_json::from_reader(sidecar_in)?;
        let mut rdr = csv::Reader::from_reader(csv_in);
        if rdr.headers()?.iter().collect::<Vec<_>>() != ["x"] {
            return Err(Error::InvalidRecord(
                "synthetic CSV header must be x".into(),
            ));
        }
        let mut x = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let v: f64 = row[0]
                .trim()
                .parse()
                .map_err(|e| Error::InvalidRecord(format!("bad x value {:?}: {e}", &row[0])))?;
            x.push(v);
        }
        if x.len() != sidecar.n0 {
            return Err(Error::InvalidRecord(format!(
                "sidecar says n0 = {} but CSV has {} rows",
                sidecar.n0,
                x.len()
            )));
        }
        Self::new(x, sidecar.population_size, sidecar.provenance)
    }
}

/// Simple random sample of `n0` population values, without replacement.
pub fn synthesize_srs(pop: &Population, n0: usize, seed: u64) -> Result<SyntheticData> {
    let big_n = pop.size();
    if n0 > big_n {
        return Err(Error::SampleTooLarge {
            n: n0,
            population: big_n,
        });
    }
    let mut rng = rng_from_seed(seed);
    let units = pop.units();
    let x = index::sample(&mut rng, big_n, n0)
        .into_iter()
        .map(|i| units[i].x)
        .collect();
    SyntheticData::new(x, big_n, Provenance::FaithfulSrs)
}

/// `n0` i.i.d. draws from a normal with the unweighted mean and `n - 1`
/// variance of the confidential sample, ignoring the design.
pub fn synthesize_biased(conf: &SurveySample, n0: usize, seed: u64) -> Result<SyntheticData> {
    if conf.len() < 2 {
        return Err(Error::TooFewObservations(conf.len()));
    }
    if n0 == 0 {
        return Err(Error::EmptySampleSize);
    }
    let xs: Vec<f64> = conf.x().collect();
    let (mean, var) = mean_and_variance(&xs);
    let normal = Normal::new(mean, var.sqrt())
        .map_err(|e| Error::InvalidParameter(format!("biased synthesizer: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let x = (0..n0).map(|_| normal.sample(&mut rng)).collect();
    SyntheticData::new(x, conf.population_size(), Provenance::BiasedNormal)
}
