//! Profile CSV (`quarter,hour,kind,key,value`, one row per cell) and synthesis
//! spec files.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use hydrogrid_core::{GridCase, Horizon, QuarterProfiles, SynthSpec};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct Record {
    quarter: usize,
    hour: usize,
    kind: String,
    key: String,
    value: f64,
}

/// Reads a complete annual profile table for `case`. Every bus needs a
/// demand cell and every wind plant an availability cell for each of the
/// 4 x 24 hours; nothing is zero-filled.
pub fn read_profiles(reader: impl Read, case: &GridCase, path: &Path) -> Result<QuarterProfiles> {
    let horizon = Horizon::ANNUAL;
    let mut out = QuarterProfiles::for_case(case, horizon);
    let mut seen_demand = vec![false; horizon.periods() * case.buses().len()];
    let mut seen_wind = vec![false; horizon.periods() * case.wind_plants().len()];
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    for (i, rec) in rdr.deserialize::<Record>().enumerate() {
        // Header is line 1.
        let line = i as u64 + 2;
        let err = |message: String| Error::ProfileCsv {
            path: path.to_path_buf(),
            line,
            message,
        };
        let rec = rec.map_err(|e| err(e.to_string()))?;
        if !(1..=horizon.quarters).contains(&rec.quarter) {
            return Err(err(format!("quarter {} outside 1..=4", rec.quarter)));
        }
        if !(1..=horizon.hours).contains(&rec.hour) {
            return Err(err(format!("hour {} outside 1..=24", rec.hour)));
        }
        if !(rec.value.is_finite() && rec.value >= 0.0) {
            return Err(err(format!(
                "{} value {} for `{}` at quarter {}, hour {} must be non-negative",
                rec.kind, rec.value, rec.key, rec.quarter, rec.hour
            )));
        }
        let (q, t) = (rec.quarter - 1, rec.hour - 1);
        let slot = |entity: usize| (q * horizon.hours + t) + entity * horizon.periods();
        match rec.kind.as_str() {
            "demand" => {
                let n = case
                    .bus_index(&rec.key)
                    .ok_or_else(|| err(format!("unknown bus `{}`", rec.key)))?;
                if std::mem::replace(&mut seen_demand[slot(n)], true) {
                    return Err(err(format!("duplicate demand cell for `{}`", rec.key)));
                }
                out.set_demand(q, n, t, rec.value);
            }
            "wind" => {
                let w = case
                    .plant_index(&rec.key)
                    .ok_or_else(|| err(format!("unknown wind plant `{}`", rec.key)))?;
                if std::mem::replace(&mut seen_wind[slot(w)], true) {
                    return Err(err(format!("duplicate wind cell for `{}`", rec.key)));
                }
                out.set_wind(q, w, t, rec.value);
            }
            other => return Err(err(format!("kind `{other}` is neither demand nor wind"))),
        }
    }
    let missing = |seen: &[bool]| seen.iter().position(|s| !s);
    if let Some(i) = missing(&seen_demand) {
        let (entity, period) = (i / horizon.periods(), i % horizon.periods());
        return Err(Error::MissingProfileCell {
            kind: "demand",
            key: case.buses()[entity].id.clone(),
            quarter: period / horizon.hours + 1,
            hour: period % horizon.hours + 1,
        });
    }
    if let Some(i) = missing(&seen_wind) {
        let (entity, period) = (i / horizon.periods(), i % horizon.periods());
        return Err(Error::MissingProfileCell {
            kind: "wind",
            key: case.wind_plants()[entity].profile_key.clone(),
            quarter: period / horizon.hours + 1,
            hour: period % horizon.hours + 1,
        });
    }
    Ok(out)
}

pub fn load_profiles(path: impl AsRef<Path>, case: &GridCase) -> Result<QuarterProfiles> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_profiles(file, case, path)
}

pub fn write_profiles(
    writer: impl Write,
    profiles: &QuarterProfiles,
    case: &GridCase,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["quarter", "hour", "kind", "key", "value"])?;
    let horizon = profiles.horizon();
    for q in 0..horizon.quarters {
        for t in 0..horizon.hours {
            let (qs, ts) = ((q + 1).to_string(), (t + 1).to_string());
            for (n, bus) in case.buses().iter().enumerate() {
                let v = profiles.demand(q, n, t).to_string();
                w.write_record([qs.as_str(), &ts, "demand", &bus.id, &v])?;
            }
            for (p, plant) in case.wind_plants().iter().enumerate() {
                let v = profiles.wind(q, p, t).to_string();
                w.write_record([qs.as_str(), &ts, "wind", &plant.profile_key, &v])?;
            }
        }
    }
    w.flush()
}

pub fn save_profiles(
    path: impl AsRef<Path>,
    profiles: &QuarterProfiles,
    case: &GridCase,
) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_profiles(std::io::BufWriter::new(file), profiles, case).map_err(|e| Error::io(path, e))
}

pub fn load_synth_spec(path: impl AsRef<Path>) -> Result<SynthSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
