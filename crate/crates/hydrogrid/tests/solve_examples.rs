use std::path::Path;

use hydrogrid::case_file::parse_case;
use hydrogrid::solver::{solve, solve_fixed_binaries, SolveOptions};
use hydrogrid_core::formulation::{EqTag, Entity};
use hydrogrid_core::{
    build_model, synthesize_profiles, verify_solution, GridCase, Horizon, QuarterProfiles,
    SolveStatus, SynthSpec, Variant,
};

fn case(json: &str) -> GridCase {
    parse_case(json, Path::new("inline")).unwrap()
}

fn unit(bus: &str, p_max: f64, cost: f64) -> String {
    format!(
        r#"{{"bus": "{bus}", "cost_energy": {cost}, "cost_no_load": 0, "cost_startup": 0,
            "p_max": {p_max}, "p_min": 0, "ramp_hourly": {p_max}, "ramp_10min": {p_max}}}"#
    )
}

fn single_bus(units: &[String], days: u32) -> GridCase {
    case(&format!(
        r#"{{"buses": [{{"id": "n"}}], "branches": [], "generators": [{}],
             "reference_bus": "n", "days_per_quarter": {days}}}"#,
        units.join(",")
    ))
}

fn flat(case: &GridCase, horizon: Horizon, demand: f64) -> QuarterProfiles {
    let mut p = QuarterProfiles::for_case(case, horizon);
    for q in 0..horizon.quarters {
        for t in 0..horizon.hours {
            p.set_demand(q, 0, t, demand);
        }
    }
    p
}

const ONE_HOUR: Horizon = Horizon {
    quarters: 1,
    hours: 1,
};

#[test]
fn lone_unit_cannot_cover_its_own_outage() {
    // The reserve row for the only unit reads r - P - r >= 0, so any load
    // is unservable.
    let case = single_bus(&[unit("n", 100.0, 10.0)], 1);
    let p = flat(&case, ONE_HOUR, 50.0);
    let model = build_model(&case, &p, Variant::Traditional).unwrap();
    let sol = solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Infeasible);
}

#[test]
fn cheapest_unit_serves_flat_load() {
    let case = single_bus(&[unit("n", 100.0, 10.0), unit("n", 100.0, 20.0)], 1);
    let p = flat(&case, ONE_HOUR, 50.0);
    let model = build_model(&case, &p, Variant::Traditional).unwrap();
    let sol = solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert!((sol.values[model.index.generation(0, 0, 0)] - 50.0).abs() < 1e-9);
    assert!(sol.values[model.index.generation(1, 0, 0)].abs() < 1e-9);
    assert!((sol.objective - 500.0).abs() < 1e-9);
    assert!(verify_solution(&case, &p, &model, &sol, 1e-6).is_clean());
}

#[test]
fn capacity_shortfall_is_infeasible() {
    let case = single_bus(&[unit("n", 50.0, 10.0), unit("n", 50.0, 20.0)], 1);
    let p = flat(&case, ONE_HOUR, 200.0);
    let model = build_model(&case, &p, Variant::Traditional).unwrap();
    let sol = solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Infeasible);
    assert!(sol.values.is_empty());
}

#[test]
fn zero_case_costs_nothing() {
    let case = single_bus(&[unit("n", 100.0, 0.0), unit("n", 100.0, 0.0)], 90);
    let p = flat(&case, Horizon::ANNUAL, 0.0);
    let model = build_model(&case, &p, Variant::EnergyHub).unwrap();
    let sol = solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert_eq!(sol.objective, 0.0);

    let all_off = vec![0.0; model.n_cols()];
    let fixed = solve_fixed_binaries(&model, &all_off, &SolveOptions::default()).unwrap();
    assert_eq!(fixed.status, SolveStatus::Optimal);
    assert_eq!(fixed.objective, 0.0);
}

fn toy3() -> (GridCase, QuarterProfiles) {
    let text = include_str!("../../../data/toy3.case");
    let case = case(text);
    let spec: SynthSpec =
        serde_json::from_str(include_str!("../../../data/toy3.synth.json")).unwrap();
    let p = synthesize_profiles(&spec, &case, 11).unwrap();
    (case, p)
}

#[test]
fn toy3_solution_verifies_and_injected_fault_is_located() {
    let (case, p) = toy3();
    let model = build_model(&case, &p, Variant::EnergyHub).unwrap();
    let sol = solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    let report = verify_solution(&case, &p, &model, &sol, 1e-6);
    assert!(report.is_clean(), "{:?}", report.findings);

    // Generator 1 sits on bus c (index 2); quarter 3, hour 7.
    let (g, q, t) = (1, 2, 6);
    let mut bad = sol.clone();
    bad.values[model.index.generation(g, q, t)] += 1.0;
    bad.objective = model.objective_value(&bad.values);
    let report = verify_solution(&case, &p, &model, &bad, 1e-6);
    let balance: Vec<_> = report
        .findings
        .iter()
        .filter(|f| f.label.tag == EqTag::Eq12)
        .collect();
    assert_eq!(balance.len(), 1, "{:?}", report.findings);
    assert_eq!(balance[0].label.entity, Entity::Bus(2));
    assert_eq!((balance[0].label.quarter, balance[0].label.hour), (Some(q), Some(t)));
    assert!((balance[0].magnitude - 1.0).abs() < 1e-9);
}

#[test]
fn hub_free_variant_matches_hub_model_without_hubs() {
    let (case, p) = toy3();
    let bare = case.without_hubs();
    let eh = build_model(&bare, &p, Variant::EnergyHub).unwrap();
    let t = build_model(&bare, &p, Variant::Traditional).unwrap();
    let opts = SolveOptions::default();
    let (a, b) = (solve(&eh, &opts).unwrap(), solve(&t, &opts).unwrap());
    let slack = opts.mip_gap * a.objective.abs().max(b.objective.abs());
    assert!((a.objective - b.objective).abs() <= slack, "{} vs {}", a.objective, b.objective);
}
