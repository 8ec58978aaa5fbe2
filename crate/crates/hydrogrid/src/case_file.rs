//! JSON case files.

use std::fs;
use std::path::Path;

use hydrogrid_core::{CaseData, GridCase};

use crate::error::{Error, Result};

/// Parses and links a case document. `path` is only used in messages.
pub fn parse_case(text: &str, path: &Path) -> Result<GridCase> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let data: CaseData = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        Error::CaseSyntax {
            path: path.to_path_buf(),
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })?;
    GridCase::link(data).map_err(|source| Error::Case {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_case(path: impl AsRef<Path>) -> Result<GridCase> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_case(&text, path)
}

pub fn case_to_json(case: &GridCase) -> String {
    let mut text = serde_json::to_string_pretty(case.data()).expect("case data serializes");
    text.push('\n');
    text
}

pub fn save_case(case: &GridCase, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, case_to_json(case)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hydrogrid_core::CaseError;

    const TOY: &str = r#"{
      "buses": [{"id": "1", "name": "one"}, {"id": "2"}],
      "branches": [{"from_bus": "1", "to_bus": "2", "reactance": 0.1, "p_max": 50}],
      "generators": [{"bus": "1", "cost_energy": 10, "cost_no_load": 0, "cost_startup": 0,
                      "p_max": 100, "p_min": 0, "ramp_hourly": 100, "ramp_10min": 20}],
      "energy_hubs": [{"bus": "2", "electrolyzer_p_max": 5, "electrolyzer_eff": 0.8,
                       "fuelcell_p_max": 5, "fuelcell_eff": 0.6, "storage_e_max": 50}],
      "reference_bus": "1"
    }"#;

    #[test]
    fn defaults_and_links() {
        let case = parse_case(TOY, Path::new("toy")).unwrap();
        assert_eq!(case.days_per_quarter(), 90);
        assert!(case.wind_plants().is_empty());
        assert_eq!(case.storage_buses(), &[1]);
    }

    #[test]
    fn syntax_error_has_field_context() {
        let bad = TOY.replace("\"reactance\": 0.1", "\"reactance\": \"x\"");
        match parse_case(&bad, Path::new("toy")) {
            Err(Error::CaseSyntax { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "branches[0].reactance");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_reference_names_bus() {
        let bad = TOY.replace("\"bus\": \"2\"", "\"bus\": \"99\"");
        match parse_case(&bad, Path::new("toy")) {
            Err(Error::Case {
                source: CaseError::DanglingBus { bus, .. },
                ..
            }) => assert_eq!(bus, "99"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
