//! Typical-day demand and wind availability tables, one 24-hour day per
//! quarter, plus the synthetic profile generator and penetration scaling.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::GridCase;

/// Number of quarters and hours per typical day covered by a model.
///
/// The annual model uses 4 x 24; shorter horizons exist for hand-checkable
/// test instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Horizon {
    pub quarters: usize,
    pub hours: usize,
}

impl Horizon {
    pub const ANNUAL: Horizon = Horizon {
        quarters: 4,
        hours: 24,
    };

    pub fn periods(&self) -> usize {
        self.quarters * self.hours
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("profile tables do not match the case: {0}")]
    Shape(String),
    #[error("{kind} value at quarter {quarter}, hour {hour}, key `{key}` is {value}; must be finite and non-negative")]
    BadValue {
        kind: &'static str,
        key: String,
        quarter: usize,
        hour: usize,
        value: f64,
    },
    #[error("degenerate profile shape for quarter {quarter}: {reason}")]
    DegenerateSpec { quarter: usize, reason: &'static str },
    #[error("penetration level must be finite and non-negative, got {0}")]
    BadLevel(f64),
    #[error("total demand energy is zero; penetration is undefined")]
    ZeroDemand,
    #[error("wind availability is all zero and cannot be scaled to a positive penetration")]
    UnscalableWind,
}

/// Demand per bus and available wind per plant for every quarter and hour.
/// Storage is quarter-major, then entity, then hour.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarterProfiles {
    horizon: Horizon,
    n_buses: usize,
    n_plants: usize,
    demand: Vec<f64>,
    wind: Vec<f64>,
}

impl QuarterProfiles {
    pub fn zeros(horizon: Horizon, n_buses: usize, n_plants: usize) -> Self {
        QuarterProfiles {
            horizon,
            n_buses,
            n_plants,
            demand: vec![0.0; horizon.periods() * n_buses],
            wind: vec![0.0; horizon.periods() * n_plants],
        }
    }

    pub fn for_case(case: &GridCase, horizon: Horizon) -> Self {
        Self::zeros(horizon, case.buses().len(), case.wind_plants().len())
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn n_buses(&self) -> usize {
        self.n_buses
    }

    pub fn n_plants(&self) -> usize {
        self.n_plants
    }

    fn demand_at(&self, q: usize, bus: usize, t: usize) -> usize {
        (q * self.n_buses + bus) * self.horizon.hours + t
    }

    fn wind_at(&self, q: usize, plant: usize, t: usize) -> usize {
        (q * self.n_plants + plant) * self.horizon.hours + t
    }

    pub fn demand(&self, q: usize, bus: usize, t: usize) -> f64 {
        self.demand[self.demand_at(q, bus, t)]
    }

    pub fn wind(&self, q: usize, plant: usize, t: usize) -> f64 {
        self.wind[self.wind_at(q, plant, t)]
    }

    pub fn set_demand(&mut self, q: usize, bus: usize, t: usize, value: f64) {
        let i = self.demand_at(q, bus, t);
        self.demand[i] = value;
    }

    pub fn set_wind(&mut self, q: usize, plant: usize, t: usize, value: f64) {
        let i = self.wind_at(q, plant, t);
        self.wind[i] = value;
    }

    pub fn demand_values(&self) -> &[f64] {
        &self.demand
    }

    pub fn wind_values(&self) -> &[f64] {
        &self.wind
    }

    /// Sum of bus demand in quarter `q`, hour `t`.
    pub fn system_demand(&self, q: usize, t: usize) -> f64 {
        (0..self.n_buses).map(|n| self.demand(q, n, t)).sum()
    }

    pub fn system_wind(&self, q: usize, t: usize) -> f64 {
        (0..self.n_plants).map(|w| self.wind(q, w, t)).sum()
    }

    /// Mean bus-hour demand of quarter `q`.
    pub fn mean_demand(&self, q: usize) -> f64 {
        let start = q * self.n_buses * self.horizon.hours;
        let len = self.n_buses * self.horizon.hours;
        self.demand[start..start + len].iter().sum::<f64>() / len as f64
    }

    /// Checks table sizes against the case and that every entry is finite
    /// and non-negative.
    pub fn check(&self, case: &GridCase) -> Result<(), ProfileError> {
        if self.n_buses != case.buses().len() || self.n_plants != case.wind_plants().len() {
            return Err(ProfileError::Shape(alloc::format!(
                "{} buses / {} plants in profiles, {} / {} in case",
                self.n_buses,
                self.n_plants,
                case.buses().len(),
                case.wind_plants().len()
            )));
        }
        for q in 0..self.horizon.quarters {
            for t in 0..self.horizon.hours {
                for n in 0..self.n_buses {
                    let v = self.demand(q, n, t);
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(ProfileError::BadValue {
                            kind: "demand",
                            key: case.buses()[n].id.clone(),
                            quarter: q + 1,
                            hour: t + 1,
                            value: v,
                        });
                    }
                }
                for w in 0..self.n_plants {
                    let v = self.wind(q, w, t);
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(ProfileError::BadValue {
                            kind: "wind",
                            key: case.wind_plants()[w].profile_key.clone(),
                            quarter: q + 1,
                            hour: t + 1,
                            value: v,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Load and wind shape of one typical day.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuarterShape {
    /// Daily peak of system demand, as a fraction of `system_peak_mw`.
    pub load_peak: f64,
    /// Daily minimum of system demand, same units as `load_peak`.
    pub load_valley: f64,
    /// Mean wind output as a fraction of plant capacity.
    pub wind_cf: f64,
}

/// Shape parameters for [`synthesize_profiles`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub system_peak_mw: f64,
    pub quarters: [QuarterShape; 4],
    /// Relative share of system demand per bus id. Buses not listed carry
    /// no demand; an empty map spreads demand evenly over all buses.
    #[serde(default)]
    pub bus_weights: BTreeMap<String, f64>,
    /// Nominal capacity of each wind plant before penetration scaling.
    #[serde(default = "default_wind_capacity")]
    pub wind_capacity_mw: f64,
    /// Relative amplitude of the seeded hour-to-hour noise.
    #[serde(default = "default_noise")]
    pub noise: f64,
}

fn default_wind_capacity() -> f64 {
    100.0
}

fn default_noise() -> f64 {
    0.03
}

impl Default for SynthSpec {
    /// Winter, spring, summer, autumn. Summer carries the highest load and
    /// the weakest wind.
    fn default() -> Self {
        SynthSpec {
            system_peak_mw: 100.0,
            quarters: [
                QuarterShape {
                    load_peak: 0.80,
                    load_valley: 0.55,
                    wind_cf: 0.42,
                },
                QuarterShape {
                    load_peak: 0.78,
                    load_valley: 0.52,
                    wind_cf: 0.38,
                },
                QuarterShape {
                    load_peak: 1.00,
                    load_valley: 0.64,
                    wind_cf: 0.27,
                },
                QuarterShape {
                    load_peak: 0.79,
                    load_valley: 0.53,
                    wind_cf: 0.40,
                },
            ],
            bus_weights: BTreeMap::new(),
            wind_capacity_mw: default_wind_capacity(),
            noise: default_noise(),
        }
    }
}

/// Clock hour (0..24) represented by step `t` of an `hours`-step day.
fn clock_hour(t: usize, hours: usize) -> f64 {
    (t as f64 + 0.5) * 24.0 / hours as f64
}

/// Daily load shape in [0, 1]: minimum near 04:00, maximum near 16:00.
fn load_shape(hour: f64) -> f64 {
    0.5 * (1.0 - libm::cos(2.0 * PI * (hour - 4.0) / 24.0))
}

/// Night-leaning wind shape with mean 1.
fn wind_shape(hour: f64, phase: f64) -> f64 {
    1.0 + 0.35 * libm::cos(2.0 * PI * (hour - 3.0 - phase) / 24.0)
}

/// Deterministic stand-in for measured typical-day profiles.
///
/// Identical `(spec, case, seed)` inputs give bit-identical tables. Only the
/// annual horizon is produced.
pub fn synthesize_profiles(
    spec: &SynthSpec,
    case: &GridCase,
    seed: u64,
) -> Result<QuarterProfiles, ProfileError> {
    for (q, shape) in spec.quarters.iter().enumerate() {
        let quarter = q + 1;
        if !(shape.load_valley >= 0.0 && shape.load_peak.is_finite()) {
            return Err(ProfileError::DegenerateSpec {
                quarter,
                reason: "load levels must be finite and non-negative",
            });
        }
        if shape.load_peak < shape.load_valley {
            return Err(ProfileError::DegenerateSpec {
                quarter,
                reason: "peak below valley",
            });
        }
        if !(0.0..=1.0).contains(&shape.wind_cf) {
            return Err(ProfileError::DegenerateSpec {
                quarter,
                reason: "wind capacity factor outside [0, 1]",
            });
        }
    }
    if !(spec.noise >= 0.0 && spec.noise < 1.0) {
        return Err(ProfileError::DegenerateSpec {
            quarter: 0,
            reason: "noise must lie in [0, 1)",
        });
    }

    let n_buses = case.buses().len();
    let weights: Vec<f64> = if spec.bus_weights.is_empty() {
        vec![1.0; n_buses]
    } else {
        for key in spec.bus_weights.keys() {
            if case.bus_index(key).is_none() {
                return Err(ProfileError::Shape(alloc::format!(
                    "bus weight for unknown bus `{key}`"
                )));
            }
        }
        case.buses()
            .iter()
            .map(|b| spec.bus_weights.get(&b.id).copied().unwrap_or(0.0))
            .collect()
    };
    let total_weight: f64 = weights.iter().sum();
    if !(total_weight > 0.0) || weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(ProfileError::DegenerateSpec {
            quarter: 0,
            reason: "bus weights must be non-negative with a positive sum",
        });
    }

    let horizon = Horizon::ANNUAL;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = QuarterProfiles::for_case(case, horizon);
    for (q, shape) in spec.quarters.iter().enumerate() {
        for t in 0..horizon.hours {
            let hour = clock_hour(t, horizon.hours);
            let system = spec.system_peak_mw
                * (shape.load_valley + (shape.load_peak - shape.load_valley) * load_shape(hour));
            for (n, weight) in weights.iter().enumerate() {
                let jitter = 1.0 + spec.noise * rng.random_range(-1.0..=1.0);
                out.set_demand(q, n, t, (system * weight / total_weight * jitter).max(0.0));
            }
            for w in 0..case.wind_plants().len() {
                let jitter = 1.0 + spec.noise * rng.random_range(-1.0..=1.0);
                let level = spec.wind_capacity_mw
                    * shape.wind_cf
                    * wind_shape(hour, 2.0 * w as f64)
                    * jitter;
                out.set_wind(q, w, t, level.clamp(0.0, spec.wind_capacity_mw));
            }
        }
    }
    Ok(out)
}

/// Annual available wind energy divided by annual demand energy.
pub fn penetration(profiles: &QuarterProfiles, case: &GridCase) -> Result<f64, ProfileError> {
    let days = f64::from(case.days_per_quarter());
    let demand: f64 = days * profiles.demand_values().iter().sum::<f64>();
    if !(demand > 0.0) {
        return Err(ProfileError::ZeroDemand);
    }
    let wind: f64 = days * profiles.wind_values().iter().sum::<f64>();
    Ok(wind / demand)
}

/// Rescales wind availability by one global factor so the annual energy
/// ratio equals `level`. Demand is left unchanged.
pub fn scale_to_penetration(
    profiles: &QuarterProfiles,
    case: &GridCase,
    level: f64,
) -> Result<QuarterProfiles, ProfileError> {
    if !(level.is_finite() && level >= 0.0) {
        return Err(ProfileError::BadLevel(level));
    }
    let current = penetration(profiles, case)?;
    let mut out = profiles.clone();
    if level == 0.0 {
        out.wind.iter_mut().for_each(|v| *v = 0.0);
        return Ok(out);
    }
    if !(current > 0.0) {
        return Err(ProfileError::UnscalableWind);
    }
    let factor = level / current;
    out.wind.iter_mut().for_each(|v| *v *= factor);
    Ok(out)
}
