//! Translation of a case and its typical-day profiles into a mixed-integer
//! linear program.
//!
//! Columns are laid out family by family (see [`Family`]); within a family
//! the entity is the slowest index, then quarter, then hour. Every row
//! carries a [`RowLabel`] naming the equation it implements, so solver
//! output and verifier findings can be traced back to a constraint.
//!
//! Canonical row forms (activity on the left, constants on the right):
//!
//! | tag            | row                                                        |
//! |----------------|------------------------------------------------------------|
//! | eq1            | `P_g - Pmin u >= 0`                                        |
//! | eq2            | `P_g + r - Pmax u <= 0`                                    |
//! | eq3            | `r - R10 u <= 0`                                           |
//! | eq4            | `sum_m r_m - P_g - r_g >= 0`                               |
//! | eq5            | `P_k - (th_from - th_to) / x = 0`                          |
//! | eq8 / eq15     | `P_t - P_prev <= R` (up), `>= -R` (down)                   |
//! | eq9 / eq16     | `v_t - u_t + u_prev >= 0`                                  |
//! | eq12 / eq21    | `gen + in - out - cur + fc - el = demand - wind`           |
//! | storage-bound  | `E0 + (d-1) D_q + A_qt <= cap` (up), `>= 0` (down)         |
//! | eq18 / eq19    | `E0_q - E0_prev - D * D_prev = 0`                          |
//!
//! Here `D_q` is the day's net hydrogen `sum_t (eta_e P_e - P_f / eta_f)` and
//! `A_qt` the same sum over hours before `t`. Storage levels refer to the
//! start of an hour.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::grid::{validate_case, GridCase, ValidationReport};
use crate::profiles::{Horizon, ProfileError, QuarterProfiles};

/// Which annual scheduling model to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Grid coupled with energy hubs: hub dispatch and seasonal storage.
    EnergyHub,
    /// Benchmark without hydrogen exchange; hub columns are fixed to zero.
    Traditional,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::EnergyHub => "eh-asm",
            Variant::Traditional => "t-asm",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Column families in layout order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Generation,
    Reserve,
    Commitment,
    Startup,
    Flow,
    Angle,
    Curtailment,
    Electrolyzer,
    FuelCell,
    InitialStorage,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Generation,
        Family::Reserve,
        Family::Commitment,
        Family::Startup,
        Family::Flow,
        Family::Angle,
        Family::Curtailment,
        Family::Electrolyzer,
        Family::FuelCell,
        Family::InitialStorage,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            Family::Generation => "Pg",
            Family::Reserve => "r",
            Family::Commitment => "u",
            Family::Startup => "v",
            Family::Flow => "Pk",
            Family::Angle => "th",
            Family::Curtailment => "Pcur",
            Family::Electrolyzer => "Pe",
            Family::FuelCell => "Pf",
            Family::InitialStorage => "E0",
        }
    }

    fn entity_prefix(self) -> &'static str {
        match self {
            Family::Generation | Family::Reserve | Family::Commitment | Family::Startup => "g",
            Family::Flow => "k",
            Family::Angle | Family::InitialStorage => "n",
            Family::Curtailment => "w",
            Family::Electrolyzer | Family::FuelCell => "h",
        }
    }

    fn hourly(self) -> bool {
        self != Family::InitialStorage
    }
}

/// Position of a column within the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnKey {
    pub family: Family,
    /// Generator, branch, bus, plant or hub index; storage slot for E0.
    pub entity: usize,
    pub quarter: usize,
    /// `None` for the per-quarter initial storage columns.
    pub hour: Option<usize>,
}

/// Column numbering for every variable family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableIndex {
    horizon: Horizon,
    counts: [usize; 10],
    offsets: [usize; 11],
}

impl VariableIndex {
    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn n_cols(&self) -> usize {
        self.offsets[10]
    }

    pub fn entity_count(&self, family: Family) -> usize {
        self.counts[family as usize]
    }

    /// Half-open column range of a family.
    pub fn family_range(&self, family: Family) -> core::ops::Range<usize> {
        self.offsets[family as usize]..self.offsets[family as usize + 1]
    }

    fn hourly(&self, family: Family, entity: usize, q: usize, t: usize) -> usize {
        debug_assert!(entity < self.counts[family as usize]);
        debug_assert!(q < self.horizon.quarters && t < self.horizon.hours);
        self.offsets[family as usize] + (entity * self.horizon.quarters + q) * self.horizon.hours + t
    }

    pub fn generation(&self, g: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Generation, g, q, t)
    }

    pub fn reserve(&self, g: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Reserve, g, q, t)
    }

    pub fn commitment(&self, g: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Commitment, g, q, t)
    }

    pub fn startup(&self, g: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Startup, g, q, t)
    }

    pub fn flow(&self, k: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Flow, k, q, t)
    }

    pub fn angle(&self, n: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Angle, n, q, t)
    }

    pub fn curtailment(&self, w: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Curtailment, w, q, t)
    }

    pub fn electrolyzer(&self, h: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::Electrolyzer, h, q, t)
    }

    pub fn fuel_cell(&self, h: usize, q: usize, t: usize) -> usize {
        self.hourly(Family::FuelCell, h, q, t)
    }

    /// Initial storage of storage slot `slot` (see [`GridCase::storage_buses`]).
    pub fn initial_storage(&self, slot: usize, q: usize) -> usize {
        debug_assert!(slot < self.counts[Family::InitialStorage as usize]);
        self.offsets[Family::InitialStorage as usize] + slot * self.horizon.quarters + q
    }

    pub fn locate(&self, col: usize) -> Option<ColumnKey> {
        if col >= self.n_cols() {
            return None;
        }
        let fi = (0..10).find(|&i| col < self.offsets[i + 1])?;
        let family = Family::ALL[fi];
        let local = col - self.offsets[fi];
        let (q_count, h_count) = (self.horizon.quarters, self.horizon.hours);
        Some(if family.hourly() {
            ColumnKey {
                family,
                entity: local / (q_count * h_count),
                quarter: (local / h_count) % q_count,
                hour: Some(local % h_count),
            }
        } else {
            ColumnKey {
                family,
                entity: local / q_count,
                quarter: local % q_count,
                hour: None,
            }
        })
    }

    pub fn is_binary(&self, col: usize) -> bool {
        self.family_range(Family::Commitment).contains(&col)
            || self.family_range(Family::Startup).contains(&col)
    }

    /// Stable, whitespace-free column name, e.g. `Pg_g3_q2_t5` (quarter and
    /// hour 1-based, entity 0-based).
    pub fn column_name(&self, col: usize) -> String {
        let key = self.locate(col).expect("column in range");
        let f = key.family;
        match key.hour {
            Some(t) => format!(
                "{}_{}{}_q{}_t{}",
                f.prefix(),
                f.entity_prefix(),
                key.entity,
                key.quarter + 1,
                t + 1
            ),
            None => format!(
                "{}_{}{}_q{}",
                f.prefix(),
                f.entity_prefix(),
                key.entity,
                key.quarter + 1
            ),
        }
    }
}

/// Allocates columns for `case` over `horizon`.
pub fn build_variables(case: &GridCase, horizon: Horizon) -> VariableIndex {
    let g = case.generators().len();
    let hubs = case.energy_hubs().len();
    let counts = [
        g,
        g,
        g,
        g,
        case.branches().len(),
        case.buses().len(),
        case.wind_plants().len(),
        hubs,
        hubs,
        case.storage_buses().len(),
    ];
    let mut offsets = [0usize; 11];
    for (i, family) in Family::ALL.iter().enumerate() {
        let per_entity = if family.hourly() {
            horizon.periods()
        } else {
            horizon.quarters
        };
        offsets[i + 1] = offsets[i] + counts[i] * per_entity;
    }
    VariableIndex {
        horizon,
        counts,
        offsets,
    }
}

/// Equation tags used by row labels and verifier findings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EqTag {
    Eq1,
    Eq2,
    Eq3,
    Eq4,
    Eq5,
    Eq6,
    Eq7,
    Eq8,
    Eq9,
    Eq10,
    Eq11,
    Eq12,
    Eq13,
    Eq14,
    Eq15,
    Eq16,
    Eq17,
    Eq18,
    Eq19,
    Eq20,
    Eq21,
    /// Storage level within `[0, capacity]`, evaluated through the
    /// accumulation expression.
    StorageBound,
    /// Reference-bus angle fixed at zero.
    Reference,
}

impl EqTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EqTag::Eq1 => "eq1",
            EqTag::Eq2 => "eq2",
            EqTag::Eq3 => "eq3",
            EqTag::Eq4 => "eq4",
            EqTag::Eq5 => "eq5",
            EqTag::Eq6 => "eq6",
            EqTag::Eq7 => "eq7",
            EqTag::Eq8 => "eq8",
            EqTag::Eq9 => "eq9",
            EqTag::Eq10 => "eq10",
            EqTag::Eq11 => "eq11",
            EqTag::Eq12 => "eq12",
            EqTag::Eq13 => "eq13",
            EqTag::Eq14 => "eq14",
            EqTag::Eq15 => "eq15",
            EqTag::Eq16 => "eq16",
            EqTag::Eq17 => "eq17",
            EqTag::Eq18 => "eq18",
            EqTag::Eq19 => "eq19",
            EqTag::Eq20 => "eq20",
            EqTag::Eq21 => "eq21",
            EqTag::StorageBound => "storage-bound",
            EqTag::Reference => "reference",
        }
    }
}

impl fmt::Display for EqTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The entity a constraint belongs to, by 0-based position in the case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entity {
    Generator(usize),
    Branch(usize),
    Bus(usize),
    Plant(usize),
    Hub(usize),
    System,
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Generator(i) => write!(f, "g={i}"),
            Entity::Branch(i) => write!(f, "k={i}"),
            Entity::Bus(i) => write!(f, "n={i}"),
            Entity::Plant(i) => write!(f, "w={i}"),
            Entity::Hub(i) => write!(f, "h={i}"),
            Entity::System => f.write_str("system"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Upper,
    Lower,
}

/// Identifies one constraint instance. Quarter, hour and day are 0-based
/// in the struct and printed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowLabel {
    pub tag: EqTag,
    pub entity: Entity,
    pub quarter: Option<usize>,
    pub hour: Option<usize>,
    pub day: Option<u32>,
    pub side: Option<Side>,
}

impl RowLabel {
    pub fn new(tag: EqTag, entity: Entity) -> Self {
        RowLabel {
            tag,
            entity,
            quarter: None,
            hour: None,
            day: None,
            side: None,
        }
    }

    pub fn at(mut self, q: usize, t: usize) -> Self {
        self.quarter = Some(q);
        self.hour = Some(t);
        self
    }

    pub fn quarter(mut self, q: usize) -> Self {
        self.quarter = Some(q);
        self
    }

    pub fn day(mut self, d: u32) -> Self {
        self.day = Some(d);
        self
    }

    pub fn side(mut self, side: Side) -> Self {
        self.side = Some(side);
        self
    }
}

impl fmt::Display for RowLabel {
    /// `eq8[g=3,q=2,t=5,up]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}", self.tag, self.entity)?;
        if let Some(q) = self.quarter {
            write!(f, ",q={}", q + 1)?;
        }
        if let Some(t) = self.hour {
            write!(f, ",t={}", t + 1)?;
        }
        if let Some(d) = self.day {
            write!(f, ",d={}", d + 1)?;
        }
        match self.side {
            Some(Side::Upper) => f.write_str(",up]"),
            Some(Side::Lower) => f.write_str(",lo]"),
            None => f.write_str("]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One linear constraint `sum coeffs . x  (relation)  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub label: RowLabel,
    /// Sorted by column, no duplicates, no zeros.
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(c, a)| a * values[c]).sum()
    }

    /// Amount by which `values` violate the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        violation(self.relation, self.activity(values) - self.rhs)
    }
}

/// Violation of `residual (relation) 0`.
pub fn violation(relation: Relation, residual: f64) -> f64 {
    match relation {
        Relation::Le => residual.max(0.0),
        Relation::Ge => (-residual).max(0.0),
        Relation::Eq => residual.abs(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Solver-agnostic MILP: minimise `objective . x` subject to rows, bounds
/// and integrality of the commitment and startup columns.
#[derive(Clone, Debug, PartialEq)]
pub struct MilpModel {
    pub index: VariableIndex,
    pub variant: Variant,
    pub days_per_quarter: u32,
    pub bounds: Vec<ColumnBounds>,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl MilpModel {
    /// Fresh model with default column bounds: binaries in `[0, 1]`,
    /// generation, reserve and curtailment non-negative, angles free, hub
    /// and storage columns fixed at zero until their builders open them.
    pub fn with_variables(case: &GridCase, index: VariableIndex, variant: Variant) -> Self {
        let n = index.n_cols();
        let mut bounds = vec![
            ColumnBounds {
                lower: 0.0,
                upper: f64::INFINITY
            };
            n
        ];
        let h = index.horizon();
        for q in 0..h.quarters {
            for t in 0..h.hours {
                for (g, gen) in case.generators().iter().enumerate() {
                    bounds[index.generation(g, q, t)].upper = gen.p_max;
                    bounds[index.commitment(g, q, t)].upper = 1.0;
                    bounds[index.startup(g, q, t)].upper = 1.0;
                }
                for n in 0..case.buses().len() {
                    bounds[index.angle(n, q, t)] = ColumnBounds {
                        lower: f64::NEG_INFINITY,
                        upper: f64::INFINITY,
                    };
                }
                for hub in 0..case.energy_hubs().len() {
                    bounds[index.electrolyzer(hub, q, t)].upper = 0.0;
                    bounds[index.fuel_cell(hub, q, t)].upper = 0.0;
                }
            }
            for slot in 0..case.storage_buses().len() {
                bounds[index.initial_storage(slot, q)].upper = 0.0;
            }
        }
        MilpModel {
            index,
            variant,
            days_per_quarter: case.days_per_quarter(),
            bounds,
            objective: vec![0.0; n],
            rows: Vec::new(),
        }
    }

    pub fn n_cols(&self) -> usize {
        self.index.n_cols()
    }

    pub fn is_integer(&self, col: usize) -> bool {
        self.index.is_binary(col)
    }

    pub fn column_name(&self, col: usize) -> String {
        self.index.column_name(col)
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective
            .iter()
            .zip(values)
            .map(|(c, x)| c * x)
            .sum()
    }

    /// `activity - rhs` for every row, in row order.
    pub fn residuals(&self, values: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.activity(values) - r.rhs)
            .collect()
    }

    /// Largest row or bound violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(values));
        let bounds = self
            .bounds
            .iter()
            .zip(values)
            .map(|(b, &x)| (b.lower - x).max(x - b.upper).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    /// No NaN or infinite coefficient, rhs or objective entry; bounds are
    /// ordered.
    pub fn is_well_formed(&self) -> bool {
        let n = self.n_cols();
        self.bounds.len() == n
            && self.objective.len() == n
            && self.objective.iter().all(|c| c.is_finite())
            && self
                .bounds
                .iter()
                .all(|b| b.lower <= b.upper && !b.lower.is_nan() && !b.upper.is_nan())
            && self.rows.iter().all(|r| {
                r.rhs.is_finite()
                    && r.coeffs.iter().all(|&(c, a)| c < n && a.is_finite())
                    && r.coeffs.windows(2).all(|w| w[0].0 < w[1].0)
            })
    }

    fn push_row(&mut self, label: RowLabel, terms: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        self.rows.push(Row {
            label,
            coeffs: merge_terms(terms),
            relation,
            rhs,
        });
    }
}

/// Sorts by column, sums duplicates and drops exact zeros.
fn merge_terms(mut terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    terms.sort_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for (c, a) in terms {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += a,
            _ => out.push((c, a)),
        }
    }
    out.retain(|&(_, a)| a != 0.0);
    out
}

/// Output and reserve limits, the reserve requirement, hourly ramping and
/// startup detection, with hour 1 wrapping to hour 24 of the same day.
pub fn add_generator_constraints(model: &mut MilpModel, case: &GridCase) -> usize {
    let before = model.rows.len();
    let idx = model.index.clone();
    let h = idx.horizon();
    let n_gen = case.generators().len();
    for (g, gen) in case.generators().iter().enumerate() {
        let ent = Entity::Generator(g);
        for q in 0..h.quarters {
            for t in 0..h.hours {
                let (p, r, u) = (idx.generation(g, q, t), idx.reserve(g, q, t), idx.commitment(g, q, t));
                let label = RowLabel::new(EqTag::Eq1, ent).at(q, t);
                model.push_row(label, vec![(p, 1.0), (u, -gen.p_min)], Relation::Ge, 0.0);

                let label = RowLabel::new(EqTag::Eq2, ent).at(q, t);
                model.push_row(
                    label,
                    vec![(p, 1.0), (r, 1.0), (u, -gen.p_max)],
                    Relation::Le,
                    0.0,
                );

                let label = RowLabel::new(EqTag::Eq3, ent).at(q, t);
                model.push_row(label, vec![(r, 1.0), (u, -gen.ramp_10min)], Relation::Le, 0.0);

                // r_g sits on both sides and cancels in the merged row.
                let mut terms: Vec<(usize, f64)> =
                    (0..n_gen).map(|m| (idx.reserve(m, q, t), 1.0)).collect();
                terms.push((p, -1.0));
                terms.push((r, -1.0));
                let label = RowLabel::new(EqTag::Eq4, ent).at(q, t);
                model.push_row(label, terms, Relation::Ge, 0.0);
            }

            for t in 0..h.hours {
                // Hour 1 looks back to hour 24 of the same typical day.
                let (prev, ramp_tag, commit_tag) = if t == 0 {
                    (h.hours - 1, EqTag::Eq15, EqTag::Eq16)
                } else {
                    (t - 1, EqTag::Eq8, EqTag::Eq9)
                };
                let (p, p_prev) = (idx.generation(g, q, t), idx.generation(g, q, prev));
                for (side, rel, rhs) in [
                    (Side::Upper, Relation::Le, gen.ramp_hourly),
                    (Side::Lower, Relation::Ge, -gen.ramp_hourly),
                ] {
                    let label = RowLabel::new(ramp_tag, ent).at(q, t).side(side);
                    model.push_row(label, vec![(p, 1.0), (p_prev, -1.0)], rel, rhs);
                }
                let label = RowLabel::new(commit_tag, ent).at(q, t);
                model.push_row(
                    label,
                    vec![
                        (idx.startup(g, q, t), 1.0),
                        (idx.commitment(g, q, t), -1.0),
                        (idx.commitment(g, q, prev), 1.0),
                    ],
                    Relation::Ge,
                    0.0,
                );
            }
        }
    }
    model.rows.len() - before
}

/// DC flow definition rows; thermal limits become flow bounds and the
/// reference angle is fixed at zero.
pub fn add_network_constraints(model: &mut MilpModel, case: &GridCase) -> usize {
    let before = model.rows.len();
    let idx = model.index.clone();
    let h = idx.horizon();
    for q in 0..h.quarters {
        for t in 0..h.hours {
            for (k, branch) in case.branches().iter().enumerate() {
                let (from, to) = case.branch_ends(k);
                let flow = idx.flow(k, q, t);
                model.bounds[flow] = ColumnBounds {
                    lower: -branch.p_max,
                    upper: branch.p_max,
                };
                let b = 1.0 / branch.reactance;
                let label = RowLabel::new(EqTag::Eq5, Entity::Branch(k)).at(q, t);
                model.push_row(
                    label,
                    vec![
                        (flow, 1.0),
                        (idx.angle(from, q, t), -b),
                        (idx.angle(to, q, t), b),
                    ],
                    Relation::Eq,
                    0.0,
                );
            }
            let reference = idx.angle(case.reference_bus(), q, t);
            model.bounds[reference] = ColumnBounds {
                lower: 0.0,
                upper: 0.0,
            };
        }
    }
    model.rows.len() - before
}

/// Curtailment bounded by availability. Bounds only.
pub fn add_wind_constraints(
    model: &mut MilpModel,
    case: &GridCase,
    profiles: &QuarterProfiles,
) -> usize {
    let idx = model.index.clone();
    let h = idx.horizon();
    for w in 0..case.wind_plants().len() {
        for q in 0..h.quarters {
            for t in 0..h.hours {
                model.bounds[idx.curtailment(w, q, t)] = ColumnBounds {
                    lower: 0.0,
                    upper: profiles.wind(q, w, t),
                };
            }
        }
    }
    0
}

/// Nodal power balance, with hub terms only in the hub variant.
pub fn add_balance_constraints(
    model: &mut MilpModel,
    case: &GridCase,
    profiles: &QuarterProfiles,
    variant: Variant,
) -> usize {
    let before = model.rows.len();
    let idx = model.index.clone();
    let h = idx.horizon();
    let tag = match variant {
        Variant::EnergyHub => EqTag::Eq12,
        Variant::Traditional => EqTag::Eq21,
    };
    for q in 0..h.quarters {
        for t in 0..h.hours {
            for n in 0..case.buses().len() {
                let mut terms = Vec::new();
                terms.extend(case.generators_at(n).iter().map(|&g| (idx.generation(g, q, t), 1.0)));
                terms.extend(case.branches_in(n).iter().map(|&k| (idx.flow(k, q, t), 1.0)));
                terms.extend(case.branches_out(n).iter().map(|&k| (idx.flow(k, q, t), -1.0)));
                terms.extend(case.plants_at(n).iter().map(|&w| (idx.curtailment(w, q, t), -1.0)));
                if variant == Variant::EnergyHub {
                    for &hub in case.hubs_at(n) {
                        terms.push((idx.fuel_cell(hub, q, t), 1.0));
                        terms.push((idx.electrolyzer(hub, q, t), -1.0));
                    }
                }
                let wind: f64 = case.plants_at(n).iter().map(|&w| profiles.wind(q, w, t)).sum();
                let rhs = profiles.demand(q, n, t) - wind;
                let label = RowLabel::new(tag, Entity::Bus(n)).at(q, t);
                model.push_row(label, terms, Relation::Eq, rhs);
            }
        }
    }
    model.rows.len() - before
}

/// Electrolyzer and fuel-cell capacity. Bounds only.
pub fn add_hub_constraints(model: &mut MilpModel, case: &GridCase) -> usize {
    let idx = model.index.clone();
    let h = idx.horizon();
    for (hub, data) in case.energy_hubs().iter().enumerate() {
        for q in 0..h.quarters {
            for t in 0..h.hours {
                model.bounds[idx.electrolyzer(hub, q, t)].upper = data.electrolyzer_p_max;
                model.bounds[idx.fuel_cell(hub, q, t)].upper = data.fuelcell_p_max;
            }
        }
    }
    0
}

/// Hydrogen exchange terms for all hubs on `bus` in hour `(q, t)`, each
/// multiplied by `weight`.
fn net_hydrogen_terms(
    case: &GridCase,
    idx: &VariableIndex,
    bus: usize,
    q: usize,
    t: usize,
    weight: f64,
    out: &mut Vec<(usize, f64)>,
) {
    for &hub in case.hubs_at(bus) {
        let data = &case.energy_hubs()[hub];
        out.push((idx.electrolyzer(hub, q, t), weight * data.electrolyzer_eff));
        out.push((idx.fuel_cell(hub, q, t), -weight / data.fuelcell_eff));
    }
}

/// Storage levels through the accumulation expression, bounded at the
/// first and last day of each quarter, plus quarter chaining and the
/// annual cycle.
///
/// Levels are affine in the day number, so bounding both end days bounds
/// every day in between.
pub fn add_storage_constraints(model: &mut MilpModel, case: &GridCase) -> usize {
    let before = model.rows.len();
    let idx = model.index.clone();
    let h = idx.horizon();
    let days = case.days_per_quarter();
    let mut end_days = vec![0u32];
    if days > 1 {
        end_days.push(days - 1);
    }

    for (slot, &bus) in case.storage_buses().iter().enumerate() {
        let cap = case.storage_capacity(bus);
        let ent = Entity::Bus(bus);
        for q in 0..h.quarters {
            let e0 = idx.initial_storage(slot, q);
            model.bounds[e0] = ColumnBounds {
                lower: 0.0,
                upper: cap,
            };
            for &d in &end_days {
                for t in 0..h.hours {
                    let mut terms = vec![(e0, 1.0)];
                    for tp in 0..h.hours {
                        let weight = f64::from(d) + if tp < t { 1.0 } else { 0.0 };
                        if weight != 0.0 {
                            net_hydrogen_terms(case, &idx, bus, q, tp, weight, &mut terms);
                        }
                    }
                    let label = RowLabel::new(EqTag::StorageBound, ent).at(q, t).day(d);
                    model.push_row(label.side(Side::Upper), terms.clone(), Relation::Le, cap);
                    model.push_row(label.side(Side::Lower), terms, Relation::Ge, 0.0);
                }
            }
        }
        // Start of quarter q equals the end of the last day of the quarter
        // before it; quarter 1 closes the year.
        for q in 0..h.quarters {
            let prev = if q == 0 { h.quarters - 1 } else { q - 1 };
            let tag = if q == 0 { EqTag::Eq19 } else { EqTag::Eq18 };
            let mut terms = vec![
                (idx.initial_storage(slot, q), 1.0),
                (idx.initial_storage(slot, prev), -1.0),
            ];
            for tp in 0..h.hours {
                net_hydrogen_terms(case, &idx, bus, prev, tp, -f64::from(days), &mut terms);
            }
            let label = RowLabel::new(tag, ent).quarter(q);
            model.push_row(label, terms, Relation::Eq, 0.0);
        }
    }
    model.rows.len() - before
}

/// Energy, no-load and startup cost, weighted by days per quarter.
/// Returns the number of non-zero objective entries.
pub fn build_objective(model: &mut MilpModel, case: &GridCase) -> usize {
    let idx = model.index.clone();
    let h = idx.horizon();
    let days = f64::from(case.days_per_quarter());
    model.objective.iter_mut().for_each(|c| *c = 0.0);
    for (g, gen) in case.generators().iter().enumerate() {
        for q in 0..h.quarters {
            for t in 0..h.hours {
                model.objective[idx.generation(g, q, t)] = gen.cost_energy * days;
                model.objective[idx.commitment(g, q, t)] = gen.cost_no_load * days;
                model.objective[idx.startup(g, q, t)] = gen.cost_startup * days;
            }
        }
    }
    model.objective.iter().filter(|c| **c != 0.0).count()
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FormulationError {
    #[error("case is not admissible: {}", .0.findings.first().map(alloc::string::ToString::to_string).unwrap_or_default())]
    InvalidCase(ValidationReport),
    #[error(transparent)]
    Profiles(#[from] ProfileError),
    #[error("horizon needs at least one quarter and one hour")]
    EmptyHorizon,
    #[error("model contains non-finite coefficients")]
    NotWellFormed,
}

/// Full model for `variant`, builders applied in a fixed order.
pub fn build_model(
    case: &GridCase,
    profiles: &QuarterProfiles,
    variant: Variant,
) -> Result<MilpModel, FormulationError> {
    let report = validate_case(case);
    if !report.is_empty() {
        return Err(FormulationError::InvalidCase(report));
    }
    profiles.check(case)?;
    let horizon = profiles.horizon();
    if horizon.quarters == 0 || horizon.hours == 0 {
        return Err(FormulationError::EmptyHorizon);
    }
    let index = build_variables(case, horizon);
    let mut model = MilpModel::with_variables(case, index, variant);
    add_generator_constraints(&mut model, case);
    add_network_constraints(&mut model, case);
    add_wind_constraints(&mut model, case, profiles);
    add_balance_constraints(&mut model, case, profiles, variant);
    if variant == Variant::EnergyHub {
        add_hub_constraints(&mut model, case);
        add_storage_constraints(&mut model, case);
    }
    build_objective(&mut model, case);
    if !model.is_well_formed() {
        return Err(FormulationError::NotWellFormed);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::fixtures::{single_bus, toy3};
    use crate::grid::CaseData;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn profiles_for(case: &GridCase, horizon: Horizon, demand: f64, wind: f64) -> QuarterProfiles {
        let mut p = QuarterProfiles::for_case(case, horizon);
        for q in 0..horizon.quarters {
            for t in 0..horizon.hours {
                for n in 0..case.buses().len() {
                    p.set_demand(q, n, t, demand);
                }
                for w in 0..case.wind_plants().len() {
                    p.set_wind(q, w, t, wind);
                }
            }
        }
        p
    }

    fn count(model: &MilpModel, tag: EqTag) -> usize {
        model.rows.iter().filter(|r| r.label.tag == tag).count()
    }

    #[test]
    fn toy3_column_count() {
        // 96 * (4*2 + 2 + 3 + 1 + 1 + 1) + 4 * 1
        let idx = build_variables(&toy3(), Horizon::ANNUAL);
        assert_eq!(idx.n_cols(), 1540);
    }

    #[test]
    fn no_hubs_no_hub_columns() {
        let case = toy3().without_hubs();
        let idx = build_variables(&case, Horizon::ANNUAL);
        for f in [Family::Electrolyzer, Family::FuelCell, Family::InitialStorage] {
            assert!(idx.family_range(f).is_empty());
        }
    }

    #[test]
    fn binaries_are_exactly_commitment_and_startup() {
        let idx = build_variables(&toy3(), Horizon::ANNUAL);
        for col in 0..idx.n_cols() {
            let fam = idx.locate(col).unwrap().family;
            assert_eq!(
                idx.is_binary(col),
                matches!(fam, Family::Commitment | Family::Startup)
            );
        }
    }

    #[test]
    fn columns_are_contiguous_and_distinct() {
        let case = toy3();
        let idx = build_variables(&case, Horizon::ANNUAL);
        let mut seen = vec![false; idx.n_cols()];
        let mut mark = |c: usize| {
            assert!(!seen[c], "collision at {c}");
            seen[c] = true;
        };
        for q in 0..4 {
            for t in 0..24 {
                for g in 0..2 {
                    mark(idx.generation(g, q, t));
                    mark(idx.reserve(g, q, t));
                    mark(idx.commitment(g, q, t));
                    mark(idx.startup(g, q, t));
                }
                for k in 0..2 {
                    mark(idx.flow(k, q, t));
                }
                for n in 0..3 {
                    mark(idx.angle(n, q, t));
                }
                mark(idx.curtailment(0, q, t));
                mark(idx.electrolyzer(0, q, t));
                mark(idx.fuel_cell(0, q, t));
            }
            mark(idx.initial_storage(0, q));
        }
        assert!(seen.iter().all(|s| *s));
        for col in 0..idx.n_cols() {
            let key = idx.locate(col).unwrap();
            let again = match key.family {
                Family::InitialStorage => idx.initial_storage(key.entity, key.quarter),
                _ => idx.hourly(key.family, key.entity, key.quarter, key.hour.unwrap()),
            };
            assert_eq!(again, col);
        }
    }

    #[test]
    fn ramp_rows_for_one_generator_one_quarter() {
        let case = single_bus(0.0, 100.0, 10.0, 1);
        let horizon = Horizon {
            quarters: 1,
            hours: 24,
        };
        let mut model = MilpModel::with_variables(&case, build_variables(&case, horizon), Variant::Traditional);
        add_generator_constraints(&mut model, &case);
        assert_eq!(count(&model, EqTag::Eq8), 2 * 23);
        assert_eq!(count(&model, EqTag::Eq15), 2);
        assert_eq!(count(&model, EqTag::Eq9), 23);
        assert_eq!(count(&model, EqTag::Eq16), 1);
    }

    #[test]
    fn reserve_row_cancels_own_reserve() {
        let case = toy3();
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        add_generator_constraints(&mut model, &case);
        let idx = &model.index;
        let row = model
            .rows
            .iter()
            .find(|r| r.label.tag == EqTag::Eq4 && r.label.entity == Entity::Generator(0))
            .unwrap();
        assert_eq!(
            row.coeffs,
            vec![
                (idx.generation(0, 0, 0), -1.0),
                (idx.reserve(1, 0, 0), 1.0)
            ]
        );
        // Activity equals the verbatim expression sum_m r_m - P_g - r_g.
        let mut x = vec![0.0; idx.n_cols()];
        x[idx.generation(0, 0, 0)] = 7.0;
        x[idx.reserve(0, 0, 0)] = 3.0;
        x[idx.reserve(1, 0, 0)] = 5.0;
        assert_eq!(row.activity(&x), (3.0 + 5.0) - 7.0 - 3.0);
        assert_eq!(row.relation, Relation::Ge);
    }

    #[test]
    fn zero_ten_minute_ramp_forces_zero_reserve() {
        let mut data = toy3().into_data();
        data.generators[0].ramp_10min = 0.0;
        let case = GridCase::link(data).unwrap();
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        add_generator_constraints(&mut model, &case);
        let r = model.index.reserve(0, 1, 4);
        let row = model
            .rows
            .iter()
            .find(|row| row.label.tag == EqTag::Eq3 && row.coeffs.iter().any(|&(c, _)| c == r))
            .unwrap();
        assert_eq!(row.coeffs, vec![(r, 1.0)]);
        assert_eq!((row.relation, row.rhs), (Relation::Le, 0.0));
    }

    #[test]
    fn dc_flow_row_and_bounds() {
        let mut data = toy3().into_data();
        data.branches[0].p_max = 175.0;
        let case = GridCase::link(data).unwrap();
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        add_network_constraints(&mut model, &case);
        let idx = model.index.clone();
        let row = &model.rows[0];
        assert_eq!(row.label.to_string(), "eq5[k=0,q=1,t=1]");
        let mut expected = vec![
            (idx.flow(0, 0, 0), 1.0),
            (idx.angle(0, 0, 0), -10.0),
            (idx.angle(1, 0, 0), 10.0),
        ];
        expected.sort_by_key(|e| e.0);
        assert_eq!(row.coeffs, expected);
        assert_eq!(row.rhs, 0.0);
        let b = model.bounds[idx.flow(0, 2, 7)];
        assert_eq!((b.lower, b.upper), (-175.0, 175.0));
        for q in 0..4 {
            for t in 0..24 {
                let b = model.bounds[idx.angle(0, q, t)];
                assert_eq!((b.lower, b.upper), (0.0, 0.0));
                assert!(model.bounds[idx.angle(1, q, t)].lower.is_infinite());
            }
        }
    }

    #[test]
    fn curtailment_bounds_follow_availability() {
        let case = toy3();
        let mut p = profiles_for(&case, Horizon::ANNUAL, 10.0, 120.0);
        p.set_wind(1, 0, 3, 0.0);
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        assert_eq!(add_wind_constraints(&mut model, &case, &p), 0);
        assert!(model.rows.is_empty());
        let b = model.bounds[model.index.curtailment(0, 1, 3)];
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let b = model.bounds[model.index.curtailment(0, 0, 0)];
        assert_eq!((b.lower, b.upper), (0.0, 120.0));
    }

    #[test]
    fn balance_row_counts_and_empty_bus() {
        let case = toy3();
        let p = profiles_for(&case, Horizon::ANNUAL, 0.0, 0.0);
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        assert_eq!(add_balance_constraints(&mut model, &case, &p, Variant::EnergyHub), 288);

        // A bus with nothing attached: inflow minus outflow equals zero.
        let mut data = toy3().into_data();
        data.buses.push(crate::grid::fixtures::bus("d"));
        data.branches.push(crate::grid::fixtures::branch("c", "d", 0.2, 50.0));
        let case = GridCase::link(data).unwrap();
        let p = profiles_for(&case, Horizon::ANNUAL, 0.0, 0.0);
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        add_balance_constraints(&mut model, &case, &p, Variant::EnergyHub);
        let row = model
            .rows
            .iter()
            .find(|r| r.label.entity == Entity::Bus(3))
            .unwrap();
        assert_eq!(row.coeffs, vec![(model.index.flow(2, 0, 0), 1.0)]);
        assert_eq!(row.rhs, 0.0);
    }

    #[test]
    fn benchmark_fixes_hub_columns() {
        let case = toy3();
        let p = profiles_for(&case, Horizon::ANNUAL, 5.0, 1.0);
        let eh = build_model(&case, &p, Variant::EnergyHub).unwrap();
        let t = build_model(&case, &p, Variant::Traditional).unwrap();
        assert_eq!(eh.n_cols(), t.n_cols());
        for f in [Family::Electrolyzer, Family::FuelCell, Family::InitialStorage] {
            for col in t.index.family_range(f) {
                assert_eq!((t.bounds[col].lower, t.bounds[col].upper), (0.0, 0.0));
                assert!(t.rows.iter().all(|r| r.coeffs.iter().all(|&(c, _)| c != col)));
            }
        }
        assert!(t.rows.len() < eh.rows.len());
        assert_eq!(count(&t, EqTag::Eq21), 288);
        assert_eq!(count(&t, EqTag::Eq12), 0);
    }

    #[test]
    fn hub_bounds() {
        let mut data = toy3().into_data();
        data.energy_hubs[0].fuelcell_p_max = 0.0;
        let case = GridCase::link(data).unwrap();
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        assert_eq!(add_hub_constraints(&mut model, &case), 0);
        let e = model.bounds[model.index.electrolyzer(0, 2, 2)];
        assert_eq!((e.lower, e.upper), (0.0, 50.0));
        let f = model.bounds[model.index.fuel_cell(0, 2, 2)];
        assert_eq!((f.lower, f.upper), (0.0, 0.0));
    }

    fn storage_model(case: &GridCase, horizon: Horizon) -> MilpModel {
        let mut model =
            MilpModel::with_variables(case, build_variables(case, horizon), Variant::EnergyHub);
        add_hub_constraints(&mut model, case);
        add_storage_constraints(&mut model, case);
        model
    }

    #[test]
    fn storage_row_counts_two_days() {
        let case = toy3();
        let model = storage_model(&case, Horizon::ANNUAL);
        assert_eq!(count(&model, EqTag::StorageBound), 2 * 24 * 2 * 4);
        assert_eq!(count(&model, EqTag::Eq18), 3);
        assert_eq!(count(&model, EqTag::Eq19), 1);
    }

    /// Level at (q, t, d) read back from a bound row.
    fn level(model: &MilpModel, x: &[f64], q: usize, t: usize, d: u32) -> f64 {
        model
            .rows
            .iter()
            .find(|r| {
                r.label.tag == EqTag::StorageBound
                    && r.label.quarter == Some(q)
                    && r.label.hour == Some(t)
                    && r.label.day == Some(d)
            })
            .unwrap()
            .activity(x)
    }

    #[test]
    fn storage_accumulation_examples() {
        let case = toy3();
        let model = storage_model(&case, Horizon::ANNUAL);
        let idx = &model.index;
        let mut x = vec![0.0; idx.n_cols()];
        x[idx.initial_storage(0, 0)] = 200.0;
        x[idx.electrolyzer(0, 0, 0)] = 100.0;
        assert!((level(&model, &x, 0, 1, 0) - 280.0).abs() < 1e-12);
        // Hour 1's exchange is not yet in hour 1's level.
        assert_eq!(level(&model, &x, 0, 0, 0), 200.0);

        let mut x = vec![0.0; idx.n_cols()];
        x[idx.initial_storage(0, 0)] = 200.0;
        x[idx.fuel_cell(0, 0, 0)] = 60.0;
        assert!((level(&model, &x, 0, 1, 0) - 100.0).abs() < 1e-12);
        // Day 2 starts after one full day: 200 - 100.
        assert!((level(&model, &x, 0, 0, 1) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn zero_exchange_constant_storage_satisfies_chaining() {
        let case = toy3();
        let model = storage_model(&case, Horizon::ANNUAL);
        let mut x = vec![0.0; model.n_cols()];
        for q in 0..4 {
            x[model.index.initial_storage(0, q)] = 123.0;
        }
        for r in model.rows.iter().filter(|r| matches!(r.label.tag, EqTag::Eq18 | EqTag::Eq19)) {
            assert_eq!(r.violation(&x), 0.0);
        }
        assert_eq!(model.max_violation(&x), 0.0);
    }

    #[test]
    fn objective_weights_costs_by_days() {
        let mut data = toy3().into_data();
        data.days_per_quarter = 90;
        data.generators[0].cost_energy = 10.0;
        data.generators[0].cost_no_load = 2.0;
        data.generators[0].cost_startup = 50.0;
        let case = GridCase::link(data).unwrap();
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        build_objective(&mut model, &case);
        let idx = model.index.clone();
        assert_eq!(model.objective[idx.generation(0, 3, 11)], 900.0);
        assert_eq!(model.objective[idx.commitment(0, 3, 11)], 180.0);
        assert_eq!(model.objective[idx.startup(0, 3, 11)], 4500.0);
        for col in idx.family_range(Family::Curtailment) {
            assert_eq!(model.objective[col], 0.0);
        }
        for col in idx.family_range(Family::Reserve) {
            assert_eq!(model.objective[col], 0.0);
        }

        let case = single_bus(0.0, 10.0, 7.5, 1);
        let mut model = MilpModel::with_variables(
            &case,
            build_variables(&case, Horizon::ANNUAL),
            Variant::EnergyHub,
        );
        build_objective(&mut model, &case);
        assert_eq!(model.objective[model.index.generation(0, 0, 0)], 7.5);
    }

    #[test]
    fn labels_are_closed_and_build_is_deterministic() {
        let case = toy3();
        let p = profiles_for(&case, Horizon::ANNUAL, 5.0, 2.0);
        let a = build_model(&case, &p, Variant::EnergyHub).unwrap();
        let b = build_model(&case, &p, Variant::EnergyHub).unwrap();
        assert_eq!(a, b);
        use EqTag::*;
        let allowed = [
            Eq1, Eq2, Eq3, Eq4, Eq5, Eq6, Eq7, Eq8, Eq9, Eq12, Eq15, Eq16, Eq17, Eq18, Eq19, Eq21,
            StorageBound,
        ];
        assert!(a.rows.iter().all(|r| allowed.contains(&r.label.tag)));
        let mut names: Vec<String> = a.rows.iter().map(|r| r.label.to_string()).collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total, "row labels must be unique");
    }

    #[test]
    fn invalid_case_rejected() {
        let mut data: CaseData = toy3().into_data();
        data.branches[0].reactance = 0.0;
        let case = GridCase::link(data).unwrap();
        let p = profiles_for(&case, Horizon::ANNUAL, 5.0, 2.0);
        assert!(matches!(
            build_model(&case, &p, Variant::EnergyHub),
            Err(FormulationError::InvalidCase(_))
        ));
    }

    #[test]
    fn column_names() {
        let idx = build_variables(&toy3(), Horizon::ANNUAL);
        assert_eq!(idx.column_name(idx.commitment(1, 2, 4)), "u_g1_q3_t5");
        assert_eq!(idx.column_name(idx.initial_storage(0, 3)), "E0_n0_q4");
    }

    fn random_case(g: usize, n: usize, w: usize, hubs: usize, days: u32) -> GridCase {
        use crate::grid::fixtures::*;
        let ids: Vec<String> = (0..n).map(|i| alloc::format!("b{i}")).collect();
        let mut data = CaseData {
            buses: ids.iter().map(|i| bus(i)).collect(),
            branches: (1..n).map(|i| branch(&ids[i - 1], &ids[i], 0.1, 100.0)).collect(),
            generators: (0..g).map(|i| generator(&ids[i % n], 0.0, 50.0, 1.0)).collect(),
            wind_plants: (0..w)
                .map(|i| crate::grid::WindPlant {
                    bus: ids[i % n].clone(),
                    profile_key: alloc::format!("w{i}"),
                })
                .collect(),
            energy_hubs: (0..hubs).map(|i| hub(&ids[i % n])).collect(),
            reference_bus: ids[0].clone(),
            days_per_quarter: days,
        };
        if n > 2 {
            data.branches.push(branch(&ids[0], &ids[n - 1], 0.3, 80.0));
        }
        GridCase::link(data).unwrap()
    }

    proptest! {
        #[test]
        fn count_formulas_hold(g in 1usize..4, n in 1usize..5, w in 0usize..3, hubs in 0usize..3, days in 1u32..5) {
            let case = random_case(g, n, w, hubs, days);
            let k = case.branches().len();
            let hub_buses = case.storage_buses().len();
            let p = profiles_for(&case, Horizon::ANNUAL, 1.0, 1.0);
            let model = build_model(&case, &p, Variant::EnergyHub).unwrap();
            prop_assert_eq!(model.n_cols(), 96 * (4 * g + k + n + w + 2 * hubs) + 4 * hub_buses);
            prop_assert_eq!(count(&model, EqTag::Eq12), 96 * n);
            prop_assert_eq!(count(&model, EqTag::Eq5), 96 * k);
            prop_assert_eq!(count(&model, EqTag::Eq8), 2 * 23 * 4 * g);
            prop_assert_eq!(count(&model, EqTag::Eq4), 96 * g);
            let endpoints = if days > 1 { 2 } else { 1 };
            prop_assert_eq!(count(&model, EqTag::StorageBound), endpoints * 24 * 2 * 4 * hub_buses);
            prop_assert_eq!(count(&model, EqTag::Eq18) + count(&model, EqTag::Eq19), 4 * hub_buses);
        }
    }
}
