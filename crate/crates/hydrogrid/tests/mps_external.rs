use std::fs;
use std::path::Path;

use hydrogrid::case_file::parse_case;
use hydrogrid::mps::{mps_string, parse_mps};
use hydrogrid::solver::{solve, Backend, SolveOptions, StandardForm};
use hydrogrid_core::{build_model, synthesize_profiles, GridCase, MilpModel, SolveStatus, SynthSpec, Variant};

fn toy3_model(variant: Variant) -> MilpModel {
    let case: GridCase =
        parse_case(include_str!("../../../data/toy3.case"), Path::new("toy3.case")).unwrap();
    let spec: SynthSpec =
        serde_json::from_str(include_str!("../../../data/toy3.synth.json")).unwrap();
    let profiles = synthesize_profiles(&spec, &case, 3).unwrap();
    build_model(&case, &profiles, variant).unwrap()
}

#[test]
fn toy3_mps_round_trips_exactly() {
    let model = toy3_model(Variant::EnergyHub);
    let form = StandardForm::from(&model);
    let text = mps_string(&form);
    assert!(text.lines().any(|l| l.starts_with(" BV ")), "binaries must be declared");
    assert_eq!(text, mps_string(&form), "emission is deterministic");

    let back = parse_mps(&text).unwrap();
    assert_eq!(back.col_names, form.col_names);
    assert_eq!(back.row_names, form.row_names);
    assert_eq!(back.integer, form.integer);
    assert_eq!(back.cost, form.cost);
    assert_eq!(back.col_lower, form.col_lower);
    assert_eq!(back.col_upper, form.col_upper);
    assert_eq!(back.row_lower, form.row_lower);
    assert_eq!(back.row_upper, form.row_upper);
    assert_eq!(mps_string(&back), text);

    let x: Vec<f64> = (0..model.n_cols()).map(|c| (c % 7) as f64 * 0.5).collect();
    assert_eq!(back.activities(&x), form.activities(&x));
}

#[cfg(unix)]
#[test]
fn external_backend_matches_builtin() {
    use std::os::unix::fs::PermissionsExt;

    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("solver.sh");
    fs::write(
        &script,
        format!("#!/bin/sh\nexec '{}' solve-mps \"$@\"\n", env!("CARGO_BIN_EXE_hydrogrid")),
    )
    .unwrap();
    fs::set_permissions(&script, fs::Permissions::from_mode(0o755)).unwrap();

    let model = toy3_model(Variant::Traditional);
    let builtin = solve(&model, &SolveOptions::default()).unwrap();
    let external = solve(
        &model,
        &SolveOptions {
            backend: Backend::External(script),
            ..SolveOptions::default()
        },
    )
    .unwrap();
    assert_eq!(builtin.status, SolveStatus::Optimal);
    assert_eq!(external.status, SolveStatus::Optimal);
    let rel = (builtin.objective - external.objective).abs() / builtin.objective;
    assert!(rel <= 1e-4, "{} vs {}", builtin.objective, external.objective);
}

#[test]
fn missing_external_binary_is_reported() {
    let model = toy3_model(Variant::Traditional);
    let err = solve(
        &model,
        &SolveOptions {
            backend: Backend::External("/nonexistent/solver".into()),
            ..SolveOptions::default()
        },
    )
    .unwrap_err();
    assert!(err.to_string().contains("/nonexistent/solver"), "{err}");
}
