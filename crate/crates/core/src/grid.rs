//! Physical system description: buses, branches, generators, wind plants and
//! energy hubs, linked to dense integer indices.
//!
//! Case files name buses with arbitrary string ids. [`GridCase::link`] resolves
//! every reference once and builds per-bus adjacency lists so the formulation
//! and the verifier can work with plain array indices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Quarter length used by the annual model unless a case overrides it.
pub const DEFAULT_DAYS_PER_QUARTER: u32 = 90;

fn default_days() -> u32 {
    DEFAULT_DAYS_PER_QUARTER
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bus {
    pub id: String,
    #[serde(default)]
    pub name: String,
}

/// Thermal or hydro unit with unit-commitment data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub bus: String,
    /// $/MWh
    pub cost_energy: f64,
    /// $/h while committed
    pub cost_no_load: f64,
    /// $ per startup
    pub cost_startup: f64,
    pub p_max: f64,
    pub p_min: f64,
    /// MW/h
    pub ramp_hourly: f64,
    /// MW deliverable within 10 minutes
    pub ramp_10min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub from_bus: String,
    pub to_bus: String,
    /// per-unit
    pub reactance: f64,
    /// MW thermal limit
    pub p_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindPlant {
    pub bus: String,
    /// Key of the plant's availability series in the profile tables.
    pub profile_key: String,
}

/// Electrolyzer, fuel cell and hydrogen storage sharing one bus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyHub {
    pub bus: String,
    pub electrolyzer_p_max: f64,
    pub electrolyzer_eff: f64,
    pub fuelcell_p_max: f64,
    pub fuelcell_eff: f64,
    /// MWh of hydrogen energy
    pub storage_e_max: f64,
}

/// The case exactly as it appears in a case file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseData {
    pub buses: Vec<Bus>,
    pub branches: Vec<Branch>,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub wind_plants: Vec<WindPlant>,
    #[serde(default)]
    pub energy_hubs: Vec<EnergyHub>,
    pub reference_bus: String,
    #[serde(default = "default_days")]
    pub days_per_quarter: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CaseError {
    #[error("duplicate bus id `{0}`")]
    DuplicateBus(String),
    #[error("duplicate wind profile key `{0}`")]
    DuplicateProfileKey(String),
    #[error("{entity} references unknown bus `{bus}`")]
    DanglingBus { entity: String, bus: String },
}

/// A case whose bus references have been resolved to dense indices.
///
/// Immutable once linked; all index vectors are parallel to the
/// corresponding `CaseData` collections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CaseData", into = "CaseData")]
pub struct GridCase {
    data: CaseData,
    generator_bus: Vec<usize>,
    branch_from: Vec<usize>,
    branch_to: Vec<usize>,
    plant_bus: Vec<usize>,
    hub_bus: Vec<usize>,
    reference: usize,
    /// Buses carrying at least one hub, ascending. One storage state each.
    storage_buses: Vec<usize>,
    storage_slot: Vec<Option<usize>>,
    generators_at: Vec<Vec<usize>>,
    plants_at: Vec<Vec<usize>>,
    hubs_at: Vec<Vec<usize>>,
    branches_out: Vec<Vec<usize>>,
    branches_in: Vec<Vec<usize>>,
}

impl TryFrom<CaseData> for GridCase {
    type Error = CaseError;

    fn try_from(data: CaseData) -> Result<Self, Self::Error> {
        GridCase::link(data)
    }
}

impl From<GridCase> for CaseData {
    fn from(case: GridCase) -> Self {
        case.data
    }
}

impl GridCase {
    /// Resolves every bus reference. Structural invariants (positive
    /// reactance, connectivity, ...) are left to [`validate_case`].
    pub fn link(data: CaseData) -> Result<Self, CaseError> {
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, bus) in data.buses.iter().enumerate() {
            if ids.insert(bus.id.as_str(), i).is_some() {
                return Err(CaseError::DuplicateBus(bus.id.clone()));
            }
        }
        let resolve = |entity: String, bus: &str| -> Result<usize, CaseError> {
            ids.get(bus).copied().ok_or_else(|| CaseError::DanglingBus {
                entity,
                bus: String::from(bus),
            })
        };

        let generator_bus = data
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| resolve(format!("generator {i}"), &g.bus))
            .collect::<Result<Vec<_>, _>>()?;
        let mut branch_from = Vec::with_capacity(data.branches.len());
        let mut branch_to = Vec::with_capacity(data.branches.len());
        for (i, k) in data.branches.iter().enumerate() {
            branch_from.push(resolve(format!("branch {i}"), &k.from_bus)?);
            branch_to.push(resolve(format!("branch {i}"), &k.to_bus)?);
        }
        let plant_bus = data
            .wind_plants
            .iter()
            .map(|w| resolve(format!("wind plant `{}`", w.profile_key), &w.bus))
            .collect::<Result<Vec<_>, _>>()?;
        let mut keys = BTreeMap::new();
        for w in &data.wind_plants {
            if keys.insert(w.profile_key.as_str(), ()).is_some() {
                return Err(CaseError::DuplicateProfileKey(w.profile_key.clone()));
            }
        }
        let hub_bus = data
            .energy_hubs
            .iter()
            .enumerate()
            .map(|(i, h)| resolve(format!("energy hub {i}"), &h.bus))
            .collect::<Result<Vec<_>, _>>()?;
        let reference = resolve(String::from("reference_bus"), &data.reference_bus)?;

        let n = data.buses.len();
        let mut generators_at = vec![Vec::new(); n];
        for (g, &b) in generator_bus.iter().enumerate() {
            generators_at[b].push(g);
        }
        let mut plants_at = vec![Vec::new(); n];
        for (w, &b) in plant_bus.iter().enumerate() {
            plants_at[b].push(w);
        }
        let mut hubs_at = vec![Vec::new(); n];
        for (h, &b) in hub_bus.iter().enumerate() {
            hubs_at[b].push(h);
        }
        let mut branches_out = vec![Vec::new(); n];
        let mut branches_in = vec![Vec::new(); n];
        for k in 0..branch_from.len() {
            branches_out[branch_from[k]].push(k);
            branches_in[branch_to[k]].push(k);
        }
        let storage_buses: Vec<usize> = (0..n).filter(|&b| !hubs_at[b].is_empty()).collect();
        let mut storage_slot = vec![None; n];
        for (slot, &b) in storage_buses.iter().enumerate() {
            storage_slot[b] = Some(slot);
        }

        Ok(GridCase {
            data,
            generator_bus,
            branch_from,
            branch_to,
            plant_bus,
            hub_bus,
            reference,
            storage_buses,
            storage_slot,
            generators_at,
            plants_at,
            hubs_at,
            branches_out,
            branches_in,
        })
    }

    pub fn data(&self) -> &CaseData {
        &self.data
    }

    pub fn into_data(self) -> CaseData {
        self.data
    }

    pub fn buses(&self) -> &[Bus] {
        &self.data.buses
    }

    pub fn branches(&self) -> &[Branch] {
        &self.data.branches
    }

    pub fn generators(&self) -> &[Generator] {
        &self.data.generators
    }

    pub fn wind_plants(&self) -> &[WindPlant] {
        &self.data.wind_plants
    }

    pub fn energy_hubs(&self) -> &[EnergyHub] {
        &self.data.energy_hubs
    }

    pub fn days_per_quarter(&self) -> u32 {
        self.data.days_per_quarter
    }

    pub fn reference_bus(&self) -> usize {
        self.reference
    }

    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.data.buses.iter().position(|b| b.id == id)
    }

    pub fn plant_index(&self, key: &str) -> Option<usize> {
        self.data.wind_plants.iter().position(|w| w.profile_key == key)
    }

    pub fn generator_bus(&self, g: usize) -> usize {
        self.generator_bus[g]
    }

    /// `(from, to)` bus indices of branch `k`.
    pub fn branch_ends(&self, k: usize) -> (usize, usize) {
        (self.branch_from[k], self.branch_to[k])
    }

    pub fn plant_bus(&self, w: usize) -> usize {
        self.plant_bus[w]
    }

    pub fn hub_bus(&self, h: usize) -> usize {
        self.hub_bus[h]
    }

    pub fn generators_at(&self, bus: usize) -> &[usize] {
        &self.generators_at[bus]
    }

    pub fn plants_at(&self, bus: usize) -> &[usize] {
        &self.plants_at[bus]
    }

    pub fn hubs_at(&self, bus: usize) -> &[usize] {
        &self.hubs_at[bus]
    }

    /// Branches whose starting bus is `bus`.
    pub fn branches_out(&self, bus: usize) -> &[usize] {
        &self.branches_out[bus]
    }

    /// Branches whose ending bus is `bus`.
    pub fn branches_in(&self, bus: usize) -> &[usize] {
        &self.branches_in[bus]
    }

    /// Buses with a hydrogen storage state, ascending.
    pub fn storage_buses(&self) -> &[usize] {
        &self.storage_buses
    }

    pub fn storage_slot(&self, bus: usize) -> Option<usize> {
        self.storage_slot[bus]
    }

    /// Combined storage capacity of all hubs on `bus`.
    pub fn storage_capacity(&self, bus: usize) -> f64 {
        self.hubs_at[bus]
            .iter()
            .map(|&h| self.data.energy_hubs[h].storage_e_max)
            .sum()
    }

    /// Copy of the case with every hub's conversion efficiencies replaced.
    pub fn with_hub_efficiencies(&self, electrolyzer_eff: f64, fuelcell_eff: f64) -> GridCase {
        let mut case = self.clone();
        for hub in &mut case.data.energy_hubs {
            hub.electrolyzer_eff = electrolyzer_eff;
            hub.fuelcell_eff = fuelcell_eff;
        }
        case
    }

    /// Copy of the case with the hubs removed.
    pub fn without_hubs(&self) -> GridCase {
        let mut data = self.data.clone();
        data.energy_hubs.clear();
        GridCase::link(data).expect("removing hubs keeps references valid")
    }
}

/// One violated invariant, naming the offending entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub entity: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    fn push(&mut self, entity: String, message: &str) {
        self.findings.push(Finding {
            entity,
            message: String::from(message),
        });
    }
}

fn finite_nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// Lists every violated type invariant. An empty report means the case can
/// be handed to the formulation.
pub fn validate_case(case: &GridCase) -> ValidationReport {
    let mut report = ValidationReport::default();
    let data = case.data();

    if data.buses.is_empty() {
        report.push(String::from("case"), "no buses");
    }
    if data.days_per_quarter < 1 {
        report.push(String::from("case"), "days_per_quarter must be at least 1");
    }

    for (i, g) in data.generators.iter().enumerate() {
        let entity = format!("generator {i} (bus {})", g.bus);
        if !finite_nonneg(g.p_min) {
            report.push(entity.clone(), "p_min must be non-negative");
        }
        if !finite_nonneg(g.p_max) {
            report.push(entity.clone(), "p_max must be non-negative");
        }
        if g.p_min > g.p_max {
            report.push(entity.clone(), "p_min exceeds p_max");
        }
        if !(g.ramp_hourly.is_finite() && g.ramp_hourly > 0.0) {
            report.push(entity.clone(), "ramp_hourly must be positive");
        }
        if !finite_nonneg(g.ramp_10min) {
            report.push(entity.clone(), "ramp_10min must be non-negative");
        }
        if !(finite_nonneg(g.cost_energy)
            && finite_nonneg(g.cost_no_load)
            && finite_nonneg(g.cost_startup))
        {
            report.push(entity, "costs must be non-negative");
        }
    }

    for (i, k) in data.branches.iter().enumerate() {
        let entity = format!("branch {i} ({}-{})", k.from_bus, k.to_bus);
        if k.reactance == 0.0 || !k.reactance.is_finite() {
            report.push(entity.clone(), "zero reactance");
        }
        if !(k.p_max.is_finite() && k.p_max > 0.0) {
            report.push(entity.clone(), "p_max must be positive");
        }
        if k.from_bus == k.to_bus {
            report.push(entity, "from_bus equals to_bus");
        }
    }

    for (i, h) in data.energy_hubs.iter().enumerate() {
        let entity = format!("energy hub {i} (bus {})", h.bus);
        if !(finite_nonneg(h.electrolyzer_p_max)
            && finite_nonneg(h.fuelcell_p_max)
            && finite_nonneg(h.storage_e_max))
        {
            report.push(entity.clone(), "capacities must be non-negative");
        }
        for eff in [h.electrolyzer_eff, h.fuelcell_eff] {
            if !(eff > 0.0 && eff <= 1.0) {
                report.push(entity.clone(), "efficiency must lie in (0, 1]");
            }
        }
    }

    if !data.buses.is_empty() && !is_connected(case) {
        report.push(String::from("network"), "network is not connected");
    }
    report
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Union-find over branches.
fn is_connected(case: &GridCase) -> bool {
    let n = case.buses().len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    for k in 0..case.branches().len() {
        let (a, b) = case.branch_ends(k);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use alloc::string::ToString;

    pub fn bus(id: &str) -> Bus {
        Bus {
            id: id.to_string(),
            name: id.to_string(),
        }
    }

    pub fn generator(bus: &str, p_min: f64, p_max: f64, cost: f64) -> Generator {
        Generator {
            bus: bus.to_string(),
            cost_energy: cost,
            cost_no_load: 0.0,
            cost_startup: 0.0,
            p_max,
            p_min,
            ramp_hourly: p_max.max(1.0),
            ramp_10min: p_max,
        }
    }

    pub fn branch(from: &str, to: &str, x: f64, p_max: f64) -> Branch {
        Branch {
            from_bus: from.to_string(),
            to_bus: to.to_string(),
            reactance: x,
            p_max,
        }
    }

    pub fn hub(bus: &str) -> EnergyHub {
        EnergyHub {
            bus: bus.to_string(),
            electrolyzer_p_max: 50.0,
            electrolyzer_eff: 0.8,
            fuelcell_p_max: 50.0,
            fuelcell_eff: 0.6,
            storage_e_max: 500.0,
        }
    }

    /// Three buses in a line, two generators, one wind plant, one hub.
    pub fn toy3() -> GridCase {
        GridCase::link(CaseData {
            buses: vec![bus("a"), bus("b"), bus("c")],
            branches: vec![branch("a", "b", 0.1, 100.0), branch("b", "c", 0.1, 100.0)],
            generators: vec![
                generator("a", 10.0, 100.0, 10.0),
                generator("c", 0.0, 60.0, 30.0),
            ],
            wind_plants: vec![WindPlant {
                bus: "b".to_string(),
                profile_key: "w1".to_string(),
            }],
            energy_hubs: vec![hub("b")],
            reference_bus: "a".to_string(),
            days_per_quarter: 2,
        })
        .unwrap()
    }

    /// One bus, one generator, nothing else.
    pub fn single_bus(p_min: f64, p_max: f64, cost: f64, days: u32) -> GridCase {
        GridCase::link(CaseData {
            buses: vec![bus("n")],
            branches: vec![],
            generators: vec![generator("n", p_min, p_max, cost)],
            wind_plants: vec![],
            energy_hubs: vec![],
            reference_bus: "n".to_string(),
            days_per_quarter: days,
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn toy3_links_with_expected_counts() {
        let case = toy3();
        assert_eq!(case.buses().len(), 3);
        assert_eq!(case.branches().len(), 2);
        assert_eq!(case.generators().len(), 2);
        assert_eq!(case.wind_plants().len(), 1);
        assert_eq!(case.energy_hubs().len(), 1);
        assert_eq!(case.storage_buses(), &[1]);
        assert_eq!(case.branches_out(1), &[1]);
        assert_eq!(case.branches_in(1), &[0]);
        assert!(validate_case(&case).is_empty());
    }

    #[test]
    fn dangling_hub_bus_is_named() {
        let mut data = toy3().into_data();
        data.energy_hubs[0].bus = "99".to_string();
        match GridCase::link(data) {
            Err(CaseError::DanglingBus { bus, .. }) => assert_eq!(bus, "99"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_bus_rejected() {
        let mut data = toy3().into_data();
        data.buses[2].id = "a".to_string();
        assert_eq!(
            GridCase::link(data),
            Err(CaseError::DuplicateBus("a".to_string()))
        );
    }

    #[test]
    fn p_min_above_p_max_is_one_finding() {
        let mut data = toy3().into_data();
        data.generators[0].p_min = 100.0;
        data.generators[0].p_max = 50.0;
        let report = validate_case(&GridCase::link(data).unwrap());
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].message, "p_min exceeds p_max");
        assert!(report.findings[0].entity.starts_with("generator 0"));
    }

    #[test]
    fn zero_reactance_is_one_finding() {
        let mut data = toy3().into_data();
        data.branches[1].reactance = 0.0;
        let report = validate_case(&GridCase::link(data).unwrap());
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].message, "zero reactance");
    }

    #[test]
    fn islands_are_rejected() {
        let mut data = toy3().into_data();
        data.branches.pop();
        let report = validate_case(&GridCase::link(data).unwrap());
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].entity, "network");
    }

    #[test]
    fn bad_efficiency_flagged() {
        let mut data = toy3().into_data();
        data.energy_hubs[0].fuelcell_eff = 1.5;
        let report = validate_case(&GridCase::link(data).unwrap());
        assert_eq!(report.findings.len(), 1);
    }

    #[test]
    fn two_hubs_on_one_bus_share_storage() {
        let mut data = toy3().into_data();
        data.energy_hubs.push(hub("b"));
        let case = GridCase::link(data).unwrap();
        assert_eq!(case.storage_buses().len(), 1);
        assert_eq!(case.storage_capacity(1), 1000.0);
    }
}
