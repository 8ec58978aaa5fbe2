//! Quarterly metrics, storage trajectories and run comparison.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use sha2::{Digest, Sha256};

use crate::formulation::VariableIndex;
use crate::grid::GridCase;
use crate::profiles::QuarterProfiles;
use crate::solution::Solution;
use crate::verify::hourly_net_hydrogen;

/// SHA-256 over the case and profile numbers; two runs are comparable only
/// when their fingerprints agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint(pub [u8; 32]);

impl Fingerprint {
    pub fn of(case: &GridCase, profiles: &QuarterProfiles) -> Self {
        let mut h = Sha256::new();
        let mut text = |s: &str| {
            h.update((s.len() as u64).to_le_bytes());
            h.update(s.as_bytes());
        };
        let data = case.data();
        for b in &data.buses {
            text(&b.id);
        }
        for g in &data.generators {
            text(&g.bus);
        }
        for k in &data.branches {
            text(&k.from_bus);
            text(&k.to_bus);
        }
        for w in &data.wind_plants {
            text(&w.bus);
            text(&w.profile_key);
        }
        for e in &data.energy_hubs {
            text(&e.bus);
        }
        text(&data.reference_bus);
        let mut nums: Vec<f64> = Vec::new();
        for g in &data.generators {
            nums.extend([
                g.cost_energy,
                g.cost_no_load,
                g.cost_startup,
                g.p_max,
                g.p_min,
                g.ramp_hourly,
                g.ramp_10min,
            ]);
        }
        for k in &data.branches {
            nums.extend([k.reactance, k.p_max]);
        }
        for e in &data.energy_hubs {
            nums.extend([
                e.electrolyzer_p_max,
                e.electrolyzer_eff,
                e.fuelcell_p_max,
                e.fuelcell_eff,
                e.storage_e_max,
            ]);
        }
        nums.push(f64::from(data.days_per_quarter));
        let horizon = profiles.horizon();
        nums.extend([horizon.quarters as f64, horizon.hours as f64]);
        nums.extend_from_slice(profiles.demand_values());
        nums.extend_from_slice(profiles.wind_values());
        for v in nums {
            h.update(v.to_bits().to_le_bytes());
        }
        Fingerprint(h.finalize().into())
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarterMetrics {
    /// MWh over the whole quarter.
    pub wind_curtailment: f64,
    /// MWh over the whole quarter.
    pub conventional_generation: f64,
    /// Mean of `|P_k| / p_k^max` over branches and hours, in percent.
    pub avg_flow_pct: f64,
}

/// Quarterly results in the layout of the annual result tables.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnualMetrics {
    pub quarters: Vec<QuarterMetrics>,
    /// $, the objective value.
    pub total_cost: f64,
    pub fingerprint: Option<Fingerprint>,
}

impl AnnualMetrics {
    /// Metrics built from published totals only, e.g. to check saving
    /// percentages.
    pub fn from_total_cost(total_cost: f64) -> Self {
        AnnualMetrics {
            quarters: Vec::new(),
            total_cost,
            fingerprint: None,
        }
    }

    /// Mean branch loading over the whole year, in percent.
    pub fn annual_avg_flow_pct(&self) -> f64 {
        if self.quarters.is_empty() {
            return 0.0;
        }
        self.quarters.iter().map(|q| q.avg_flow_pct).sum::<f64>() / self.quarters.len() as f64
    }
}

pub fn compute_metrics(
    case: &GridCase,
    profiles: &QuarterProfiles,
    idx: &VariableIndex,
    sol: &Solution,
) -> AnnualMetrics {
    let x = &sol.values;
    let horizon = idx.horizon();
    let days = f64::from(case.days_per_quarter());
    let mut quarters = Vec::with_capacity(horizon.quarters);
    for q in 0..horizon.quarters {
        let mut curtailed = 0.0;
        let mut generated = 0.0;
        let mut loading = 0.0;
        for t in 0..horizon.hours {
            curtailed += (0..case.wind_plants().len())
                .map(|w| x[idx.curtailment(w, q, t)])
                .sum::<f64>();
            generated += (0..case.generators().len())
                .map(|g| x[idx.generation(g, q, t)])
                .sum::<f64>();
            loading += case
                .branches()
                .iter()
                .enumerate()
                .map(|(k, b)| x[idx.flow(k, q, t)].abs() / b.p_max)
                .sum::<f64>();
        }
        let branch_hours = (case.branches().len() * horizon.hours) as f64;
        quarters.push(QuarterMetrics {
            wind_curtailment: days * curtailed,
            conventional_generation: days * generated,
            avg_flow_pct: if branch_hours > 0.0 {
                100.0 * loading / branch_hours
            } else {
                0.0
            },
        });
    }
    AnnualMetrics {
        quarters,
        total_cost: sol.objective,
        fingerprint: Some(Fingerprint::of(case, profiles)),
    }
}

/// Hourly total conventional generation, `[quarter][hour]` in MW.
pub fn hourly_generation(case: &GridCase, idx: &VariableIndex, sol: &Solution) -> Vec<Vec<f64>> {
    let horizon = idx.horizon();
    (0..horizon.quarters)
        .map(|q| {
            (0..horizon.hours)
                .map(|t| {
                    (0..case.generators().len())
                        .map(|g| sol.values[idx.generation(g, q, t)])
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Per-quarter residual of the system energy balance, in MWh:
/// generation + delivered wind + fuel cells - electrolyzers - demand.
pub fn energy_balance_residuals(
    case: &GridCase,
    profiles: &QuarterProfiles,
    idx: &VariableIndex,
    sol: &Solution,
) -> Vec<f64> {
    let x = &sol.values;
    let horizon = idx.horizon();
    let days = f64::from(case.days_per_quarter());
    (0..horizon.quarters)
        .map(|q| {
            let mut net = 0.0;
            for t in 0..horizon.hours {
                net += (0..case.generators().len())
                    .map(|g| x[idx.generation(g, q, t)])
                    .sum::<f64>();
                net += (0..case.wind_plants().len())
                    .map(|w| profiles.wind(q, w, t) - x[idx.curtailment(w, q, t)])
                    .sum::<f64>();
                net += (0..case.energy_hubs().len())
                    .map(|h| x[idx.fuel_cell(h, q, t)] - x[idx.electrolyzer(h, q, t)])
                    .sum::<f64>();
                net -= profiles.system_demand(q, t);
            }
            days * net
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuarterTrajectory {
    pub initial: f64,
    /// Net hydrogen added per day, MWh/day.
    pub daily_delta: f64,
    /// Start-of-hour levels on the first day.
    pub first_day: Vec<f64>,
    /// Start-of-hour levels on the last day.
    pub last_day: Vec<f64>,
    /// Level after the last hour of the last day.
    pub closing: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BusTrajectory {
    pub bus: usize,
    pub capacity: f64,
    pub quarters: Vec<QuarterTrajectory>,
    /// `initial[q] - closing[q - 1]` for every quarter, quarter 1 against
    /// quarter 4.
    pub chaining_residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StorageTrajectory {
    pub days_per_quarter: u32,
    pub buses: Vec<BusTrajectory>,
}

impl StorageTrajectory {
    pub fn max_chaining_residual(&self) -> f64 {
        self.buses
            .iter()
            .flat_map(|b| b.chaining_residuals.iter())
            .fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `sum_q D * delta_q` per storage bus; zero when the annual cycle closes.
    pub fn annual_net_hydrogen(&self) -> Vec<f64> {
        let days = f64::from(self.days_per_quarter);
        self.buses
            .iter()
            .map(|b| b.quarters.iter().map(|q| days * q.daily_delta).sum())
            .collect()
    }
}

pub fn storage_trajectory(case: &GridCase, idx: &VariableIndex, values: &[f64]) -> StorageTrajectory {
    let horizon = idx.horizon();
    let days = case.days_per_quarter();
    let buses = case
        .storage_buses()
        .iter()
        .enumerate()
        .map(|(slot, &bus)| {
            let quarters: Vec<QuarterTrajectory> = (0..horizon.quarters)
                .map(|q| {
                    let initial = values[idx.initial_storage(slot, q)];
                    let net: Vec<f64> = (0..horizon.hours)
                        .map(|t| hourly_net_hydrogen(case, idx, values, bus, q, t))
                        .collect();
                    let daily_delta: f64 = net.iter().sum();
                    let levels = |start: f64| {
                        let mut level = start;
                        let mut out = vec![0.0; net.len()];
                        for (slot, step) in out.iter_mut().zip(&net) {
                            *slot = level;
                            level += step;
                        }
                        out
                    };
                    let last_start = initial + f64::from(days - 1) * daily_delta;
                    QuarterTrajectory {
                        initial,
                        daily_delta,
                        first_day: levels(initial),
                        last_day: levels(last_start),
                        closing: initial + f64::from(days) * daily_delta,
                    }
                })
                .collect();
            let chaining_residuals = (0..quarters.len())
                .map(|q| {
                    let prev = if q == 0 { quarters.len() - 1 } else { q - 1 };
                    quarters[q].initial - quarters[prev].closing
                })
                .collect();
            BusTrajectory {
                bus,
                capacity: case.storage_capacity(bus),
                quarters,
                chaining_residuals,
            }
        })
        .collect();
    StorageTrajectory {
        days_per_quarter: days,
        buses,
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("runs were computed on different case/profile inputs")]
    FingerprintMismatch,
    #[error("runs cover {0} and {1} quarters")]
    QuarterMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldDelta {
    pub field: String,
    pub run_a: f64,
    pub run_b: f64,
    /// `run_a - run_b`
    pub delta: f64,
    /// `100 * delta / run_b`; `None` when `run_b` is zero.
    pub delta_pct: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub fields: Vec<FieldDelta>,
    /// `100 * (b.cost - a.cost) / b.cost`: how much cheaper run A is,
    /// relative to the benchmark run B.
    pub cost_saving_pct: f64,
}

fn delta(field: String, run_a: f64, run_b: f64) -> FieldDelta {
    let d = run_a - run_b;
    FieldDelta {
        field,
        run_a,
        run_b,
        delta: d,
        delta_pct: if run_b != 0.0 {
            Some(100.0 * d / run_b)
        } else if d == 0.0 {
            Some(0.0)
        } else {
            None
        },
    }
}

/// Field-by-field comparison of run `a` against benchmark run `b`.
pub fn compare_runs(a: &AnnualMetrics, b: &AnnualMetrics) -> Result<ComparisonReport, AnalysisError> {
    if let (Some(fa), Some(fb)) = (a.fingerprint, b.fingerprint) {
        if fa != fb {
            return Err(AnalysisError::FingerprintMismatch);
        }
    }
    if a.quarters.len() != b.quarters.len() {
        return Err(AnalysisError::QuarterMismatch(a.quarters.len(), b.quarters.len()));
    }
    let mut fields = Vec::new();
    for (q, (qa, qb)) in a.quarters.iter().zip(&b.quarters).enumerate() {
        let n = q + 1;
        fields.push(delta(format!("q{n}_curtailment_mwh"), qa.wind_curtailment, qb.wind_curtailment));
        fields.push(delta(
            format!("q{n}_conv_gen_mwh"),
            qa.conventional_generation,
            qb.conventional_generation,
        ));
        fields.push(delta(format!("q{n}_avg_flow_pct"), qa.avg_flow_pct, qb.avg_flow_pct));
    }
    fields.push(delta(String::from("total_cost"), a.total_cost, b.total_cost));
    let cost_saving_pct = if b.total_cost != 0.0 {
        100.0 * (b.total_cost - a.total_cost) / b.total_cost
    } else {
        0.0
    };
    Ok(ComparisonReport {
        fields,
        cost_saving_pct,
    })
}
