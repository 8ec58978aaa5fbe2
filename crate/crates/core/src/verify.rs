//! Feasibility check of a solution against the case data.
//!
//! Everything here is evaluated from the case, the profiles and the
//! variable values directly; the model's rows are never consulted. Storage
//! is simulated hour by hour over every day of every quarter rather than
//! through the closed-form accumulation used by the formulation, so the two
//! code paths check each other.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formulation::{
    violation, EqTag, Entity, MilpModel, Relation, RowLabel, Side, Variant, VariableIndex,
};
use crate::grid::GridCase;
use crate::profiles::QuarterProfiles;
use crate::solution::{relative_close, Solution};

/// One evaluated constraint: `residual (relation) 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub label: RowLabel,
    pub relation: Relation,
    pub residual: f64,
}

impl Check {
    pub fn violation(&self) -> f64 {
        violation(self.relation, self.residual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub label: RowLabel,
    /// Human-readable entity, e.g. `generator 3 (bus 101)`.
    pub entity: String,
    pub magnitude: f64,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: violated by {:e}", self.label, self.entity, self.magnitude)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub findings: Vec<Finding>,
    pub checks_evaluated: usize,
    pub max_violation: f64,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

struct Values<'a> {
    idx: &'a VariableIndex,
    x: &'a [f64],
}

impl Values<'_> {
    fn pg(&self, g: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.generation(g, q, t)]
    }
    fn r(&self, g: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.reserve(g, q, t)]
    }
    fn u(&self, g: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.commitment(g, q, t)]
    }
    fn v(&self, g: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.startup(g, q, t)]
    }
    fn flow(&self, k: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.flow(k, q, t)]
    }
    fn theta(&self, n: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.angle(n, q, t)]
    }
    fn cur(&self, w: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.curtailment(w, q, t)]
    }
    fn pe(&self, h: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.electrolyzer(h, q, t)]
    }
    fn pf(&self, h: usize, q: usize, t: usize) -> f64 {
        self.x[self.idx.fuel_cell(h, q, t)]
    }
    fn e0(&self, slot: usize, q: usize) -> f64 {
        self.x[self.idx.initial_storage(slot, q)]
    }
}

/// Net hydrogen energy added to the storage on `bus` during hour `(q, t)`.
pub(crate) fn hourly_net_hydrogen(
    case: &GridCase,
    idx: &VariableIndex,
    x: &[f64],
    bus: usize,
    q: usize,
    t: usize,
) -> f64 {
    case.hubs_at(bus)
        .iter()
        .map(|&h| {
            let hub = &case.energy_hubs()[h];
            hub.electrolyzer_eff * x[idx.electrolyzer(h, q, t)]
                - x[idx.fuel_cell(h, q, t)] / hub.fuelcell_eff
        })
        .sum()
}

struct Collector {
    checks: Vec<Check>,
}

impl Collector {
    fn push(&mut self, label: RowLabel, relation: Relation, residual: f64) {
        self.checks.push(Check {
            label,
            relation,
            residual,
        });
    }

    /// `lo <= value <= hi` as two checks.
    fn range(&mut self, label: RowLabel, value: f64, lo: f64, hi: f64) {
        self.push(label.side(Side::Upper), Relation::Le, value - hi);
        self.push(label.side(Side::Lower), Relation::Ge, value - lo);
    }
}

/// Distance from the nearest of {0, 1}.
fn binary_gap(x: f64) -> f64 {
    x.abs().min((x - 1.0).abs())
}

/// Evaluates every constraint of the chosen variant at `x`.
///
/// Labels coincide with the model's row labels wherever the model has an
/// equivalent row, and residuals use the same sign convention, so the two
/// can be compared one to one.
pub fn evaluate_checks(
    case: &GridCase,
    profiles: &QuarterProfiles,
    idx: &VariableIndex,
    variant: Variant,
    x: &[f64],
) -> Vec<Check> {
    let vals = Values { idx, x };
    let horizon = idx.horizon();
    let (quarters, hours) = (horizon.quarters, horizon.hours);
    let mut out = Collector { checks: Vec::new() };
    let gens = case.generators();

    for q in 0..quarters {
        for t in 0..hours {
            let reserve_total: f64 = (0..gens.len()).map(|m| vals.r(m, q, t)).sum();
            for (g, gen) in gens.iter().enumerate() {
                let ent = Entity::Generator(g);
                let (p, r, u, v) = (vals.pg(g, q, t), vals.r(g, q, t), vals.u(g, q, t), vals.v(g, q, t));
                out.push(RowLabel::new(EqTag::Eq1, ent).at(q, t), Relation::Ge, p - gen.p_min * u);
                out.push(RowLabel::new(EqTag::Eq2, ent).at(q, t), Relation::Le, p + r - gen.p_max * u);
                out.push(RowLabel::new(EqTag::Eq3, ent).at(q, t), Relation::Le, r - gen.ramp_10min * u);
                out.push(RowLabel::new(EqTag::Eq3, ent).at(q, t).side(Side::Lower), Relation::Ge, r);
                out.push(
                    RowLabel::new(EqTag::Eq4, ent).at(q, t),
                    Relation::Ge,
                    reserve_total - (p + r),
                );
                let (prev, ramp_tag, commit_tag) = if t == 0 {
                    (hours - 1, EqTag::Eq15, EqTag::Eq16)
                } else {
                    (t - 1, EqTag::Eq8, EqTag::Eq9)
                };
                let step = p - vals.pg(g, q, prev);
                out.push(
                    RowLabel::new(ramp_tag, ent).at(q, t).side(Side::Upper),
                    Relation::Le,
                    step - gen.ramp_hourly,
                );
                out.push(
                    RowLabel::new(ramp_tag, ent).at(q, t).side(Side::Lower),
                    Relation::Ge,
                    step + gen.ramp_hourly,
                );
                out.push(
                    RowLabel::new(commit_tag, ent).at(q, t),
                    Relation::Ge,
                    v - (u - vals.u(g, q, prev)),
                );
                out.push(RowLabel::new(EqTag::Eq10, ent).at(q, t), Relation::Eq, binary_gap(v));
                out.push(RowLabel::new(EqTag::Eq11, ent).at(q, t), Relation::Eq, binary_gap(u));
            }

            for (k, branch) in case.branches().iter().enumerate() {
                let (from, to) = case.branch_ends(k);
                let ent = Entity::Branch(k);
                let flow = vals.flow(k, q, t);
                out.push(
                    RowLabel::new(EqTag::Eq5, ent).at(q, t),
                    Relation::Eq,
                    flow - (vals.theta(from, q, t) - vals.theta(to, q, t)) / branch.reactance,
                );
                out.range(RowLabel::new(EqTag::Eq6, ent).at(q, t), flow, -branch.p_max, branch.p_max);
            }
            out.push(
                RowLabel::new(EqTag::Reference, Entity::Bus(case.reference_bus())).at(q, t),
                Relation::Eq,
                vals.theta(case.reference_bus(), q, t),
            );

            for w in 0..case.wind_plants().len() {
                out.range(
                    RowLabel::new(EqTag::Eq7, Entity::Plant(w)).at(q, t),
                    vals.cur(w, q, t),
                    0.0,
                    profiles.wind(q, w, t),
                );
            }

            for (h, hub) in case.energy_hubs().iter().enumerate() {
                let (e_max, f_max) = match variant {
                    Variant::EnergyHub => (hub.electrolyzer_p_max, hub.fuelcell_p_max),
                    Variant::Traditional => (0.0, 0.0),
                };
                out.range(RowLabel::new(EqTag::Eq13, Entity::Hub(h)).at(q, t), vals.pe(h, q, t), 0.0, e_max);
                out.range(RowLabel::new(EqTag::Eq14, Entity::Hub(h)).at(q, t), vals.pf(h, q, t), 0.0, f_max);
            }

            for n in 0..case.buses().len() {
                let supply: f64 = case.generators_at(n).iter().map(|&g| vals.pg(g, q, t)).sum::<f64>()
                    + case.branches_in(n).iter().map(|&k| vals.flow(k, q, t)).sum::<f64>()
                    - case.branches_out(n).iter().map(|&k| vals.flow(k, q, t)).sum::<f64>()
                    + case.plants_at(n).iter().map(|&w| profiles.wind(q, w, t)).sum::<f64>()
                    - case.plants_at(n).iter().map(|&w| vals.cur(w, q, t)).sum::<f64>();
                let (tag, fuel_cells, electrolyzers) = match variant {
                    Variant::EnergyHub => (
                        EqTag::Eq12,
                        case.hubs_at(n).iter().map(|&h| vals.pf(h, q, t)).sum::<f64>(),
                        case.hubs_at(n).iter().map(|&h| vals.pe(h, q, t)).sum::<f64>(),
                    ),
                    Variant::Traditional => (EqTag::Eq21, 0.0, 0.0),
                };
                out.push(
                    RowLabel::new(tag, Entity::Bus(n)).at(q, t),
                    Relation::Eq,
                    supply + fuel_cells - (profiles.demand(q, n, t) + electrolyzers),
                );
            }
        }
    }

    let days = case.days_per_quarter();
    for (slot, &bus) in case.storage_buses().iter().enumerate() {
        let ent = Entity::Bus(bus);
        if variant == Variant::Traditional {
            for q in 0..quarters {
                out.push(RowLabel::new(EqTag::Eq21, ent).quarter(q), Relation::Eq, vals.e0(slot, q));
            }
            continue;
        }
        let cap = case.storage_capacity(bus);
        let mut quarter_end = Vec::with_capacity(quarters);
        for q in 0..quarters {
            let net: Vec<f64> = (0..hours)
                .map(|t| hourly_net_hydrogen(case, idx, x, bus, q, t))
                .collect();
            let mut level = vals.e0(slot, q);
            for d in 0..days {
                for (t, step) in net.iter().enumerate() {
                    let label = RowLabel::new(EqTag::StorageBound, ent).at(q, t).day(d);
                    out.range(label, level, 0.0, cap);
                    level += step;
                }
            }
            quarter_end.push(level);
        }
        for q in 0..quarters {
            let prev = if q == 0 { quarters - 1 } else { q - 1 };
            let tag = if q == 0 { EqTag::Eq19 } else { EqTag::Eq18 };
            out.push(
                RowLabel::new(tag, ent).quarter(q),
                Relation::Eq,
                vals.e0(slot, q) - quarter_end[prev],
            );
        }
    }
    out.checks
}

/// Annual operating cost evaluated from the case's cost data.
pub fn annual_cost(case: &GridCase, idx: &VariableIndex, x: &[f64]) -> f64 {
    let vals = Values { idx, x };
    let horizon = idx.horizon();
    let days = f64::from(case.days_per_quarter());
    let mut total = 0.0;
    for (g, gen) in case.generators().iter().enumerate() {
        for q in 0..horizon.quarters {
            for t in 0..horizon.hours {
                total += (gen.cost_energy * vals.pg(g, q, t)
                    + gen.cost_no_load * vals.u(g, q, t)
                    + gen.cost_startup * vals.v(g, q, t))
                    * days;
            }
        }
    }
    total
}

fn describe(case: &GridCase, entity: Entity) -> String {
    match entity {
        Entity::Generator(g) => format!("generator {g} (bus {})", case.generators()[g].bus),
        Entity::Branch(k) => {
            let b = &case.branches()[k];
            format!("branch {k} ({}-{})", b.from_bus, b.to_bus)
        }
        Entity::Bus(n) => format!("bus {}", case.buses()[n].id),
        Entity::Plant(w) => format!("wind plant {}", case.wind_plants()[w].profile_key),
        Entity::Hub(h) => format!("energy hub {h} (bus {})", case.energy_hubs()[h].bus),
        Entity::System => String::from("system"),
    }
}

/// Re-evaluates every constraint, including the storage level on every day
/// of every quarter, and the objective. Empty findings means feasible
/// within `tol` (absolute on residuals).
pub fn verify_solution(
    case: &GridCase,
    profiles: &QuarterProfiles,
    model: &MilpModel,
    sol: &Solution,
    tol: f64,
) -> VerificationReport {
    let mut report = VerificationReport::default();
    if !sol.status.has_values() || sol.values.len() != model.n_cols() {
        report.findings.push(Finding {
            label: RowLabel::new(EqTag::Eq20, Entity::System),
            entity: format!("solution ({}, {} values)", sol.status, sol.values.len()),
            magnitude: f64::INFINITY,
        });
        report.max_violation = f64::INFINITY;
        return report;
    }
    let checks = evaluate_checks(case, profiles, &model.index, model.variant, &sol.values);
    report.checks_evaluated = checks.len() + 1;
    for check in &checks {
        let v = check.violation();
        report.max_violation = report.max_violation.max(v);
        if !(v <= tol) {
            report.findings.push(Finding {
                label: check.label,
                entity: describe(case, check.label.entity),
                magnitude: v,
            });
        }
    }
    let cost = annual_cost(case, &model.index, &sol.values);
    if !relative_close(cost, sol.objective, 1e-6) {
        report.findings.push(Finding {
            label: RowLabel::new(EqTag::Eq20, Entity::System),
            entity: String::from("objective"),
            magnitude: (cost - sol.objective).abs(),
        });
    }
    report
}
