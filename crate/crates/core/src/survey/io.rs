//! CSV export and import. Populations use the header `id,x,z`, samples use
//! `id,x,pi,w`; rows are written in id order.

use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::population::{Population, Unit};
use super::sample::{SampleRecord, SurveySample};

pub fn write_population<W: Write>(pop: &Population, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for u in pop.units() {
        w.serialize(u)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a population; rows may come in any order but the ids must cover
/// `0..N` exactly.
pub fn read_population<R: Read>(input: R) -> Result<Population> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut units: Vec<Unit> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    units.sort_by_key(|u| u.id);
    Population::from_units(units)
}

pub fn write_sample<W: Write>(sample: &SurveySample, out: W) -> Result<()> {
    let mut records = sample.records().to_vec();
    records.sort_by_key(|r| r.id);
    let mut w = csv::Writer::from_writer(out);
    for r in &records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sample. The population size is not part of the CSV and must be
/// supplied.
pub fn read_sample<R: Read>(input: R, population_size: usize) -> Result<SurveySample> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let expected = ["id", "x", "pi", "w"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::InvalidRecord(format!(
            "sample header must be id,x,pi,w, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records: Vec<SampleRecord> =
        rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    records.sort_by_key(|r| r.id);
    SurveySample::new(records, population_size)
}
