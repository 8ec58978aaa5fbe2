//! Free-format MPS writer and reader.
//!
//! The writer emits one matrix entry per COLUMNS line, binary columns as
//! `BV` bounds and numbers in shortest round-trip notation, so parsing a
//! written file reproduces the [`StandardForm`] bit for bit.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::StandardForm;

const OBJECTIVE_ROW: &str = "COST";

fn row_type(lo: f64, hi: f64) -> (char, f64, Option<f64>) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) if lo == hi => ('E', lo, None),
        (true, true) => ('G', lo, Some(hi - lo)),
        (false, true) => ('L', hi, None),
        (true, false) => ('G', lo, None),
        (false, false) => ('N', 0.0, None),
    }
}

pub fn mps_string(form: &StandardForm) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {}", form.name);
    out.push_str("OBJSENSE\n    MIN\n");
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJECTIVE_ROW}");
    let types: Vec<(char, f64, Option<f64>)> = form
        .row_lower
        .iter()
        .zip(&form.row_upper)
        .map(|(&lo, &hi)| row_type(lo, hi))
        .collect();
    for (name, (kind, _, _)) in form.row_names.iter().zip(&types) {
        let _ = writeln!(out, " {kind}  {name}");
    }

    // Transpose to column-major.
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); form.n_cols()];
    for (r, row) in form.rows.iter().enumerate() {
        for &(c, a) in row {
            columns[c].push((r, a));
        }
    }
    out.push_str("COLUMNS\n");
    for (c, entries) in columns.iter().enumerate() {
        let name = &form.col_names[c];
        if form.cost[c] != 0.0 {
            let _ = writeln!(out, "    {name}  {OBJECTIVE_ROW}  {}", form.cost[c]);
        }
        for &(r, a) in entries {
            let _ = writeln!(out, "    {name}  {}  {a}", form.row_names[r]);
        }
        if form.cost[c] == 0.0 && entries.is_empty() {
            // Keep the column declared.
            let _ = writeln!(out, "    {name}  {OBJECTIVE_ROW}  0");
        }
    }

    out.push_str("RHS\n");
    for (name, (_, rhs, _)) in form.row_names.iter().zip(&types) {
        if *rhs != 0.0 {
            let _ = writeln!(out, "    RHS  {name}  {rhs}");
        }
    }
    out.push_str("RANGES\n");
    for (name, (_, _, range)) in form.row_names.iter().zip(&types) {
        if let Some(range) = range {
            let _ = writeln!(out, "    RNG  {name}  {range}");
        }
    }

    out.push_str("BOUNDS\n");
    for c in 0..form.n_cols() {
        let (lo, hi, name) = (form.col_lower[c], form.col_upper[c], &form.col_names[c]);
        if form.integer[c] && lo == 0.0 && hi == 1.0 {
            let _ = writeln!(out, " BV BND  {name}");
        } else if lo == hi {
            let _ = writeln!(out, " FX BND  {name}  {lo}");
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            let _ = writeln!(out, " FR BND  {name}");
        } else {
            if lo == f64::NEG_INFINITY {
                let _ = writeln!(out, " MI BND  {name}");
            } else if lo != 0.0 {
                let _ = writeln!(out, " LO BND  {name}  {lo}");
            }
            if hi != f64::INFINITY {
                let _ = writeln!(out, " UP BND  {name}  {hi}");
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

pub fn write_mps(form: &StandardForm, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, mps_string(form)).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

#[derive(Clone, Copy)]
enum RowKind {
    L,
    G,
    E,
    Free,
}

/// Parses free-format MPS. Minimisation only; integer columns may be
/// declared through `MARKER INTORG/INTEND` or `BV`/`LI`/`UI` bounds.
pub fn parse_mps(text: &str) -> Result<StandardForm> {
    let mut form = StandardForm {
        name: String::new(),
        col_names: Vec::new(),
        col_lower: Vec::new(),
        col_upper: Vec::new(),
        cost: Vec::new(),
        integer: Vec::new(),
        row_names: Vec::new(),
        row_lower: Vec::new(),
        row_upper: Vec::new(),
        rows: Vec::new(),
    };
    let mut objective: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut ranges: Vec<Option<f64>> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut in_integer_block = false;
    let mut section = Section::None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Mps {
            line: line_no,
            message,
        };
        let line = raw.trim_end();
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            section = match fields[0] {
                "NAME" => {
                    form.name = fields.get(1).copied().unwrap_or_default().to_string();
                    Section::None
                }
                "OBJSENSE" => match fields.get(1) {
                    Some(&"MIN") | Some(&"MINIMIZE") => Section::None,
                    Some(other) => return Err(err(format!("unsupported objective sense {other}"))),
                    None => Section::ObjSense,
                },
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(err(format!("unknown section {other}"))),
            };
            continue;
        }
        let number = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| err(format!("`{s}` is not a number")))
        };
        match section {
            Section::ObjSense => {
                if !matches!(fields[0], "MIN" | "MINIMIZE") {
                    return Err(err(format!("unsupported objective sense {}", fields[0])));
                }
            }
            Section::Rows => {
                let [kind, name] = fields[..] else {
                    return Err(err("expected `type name`".into()));
                };
                let kind = match kind {
                    "N" if objective.is_none() => {
                        objective = Some(name.to_string());
                        continue;
                    }
                    "N" => RowKind::Free,
                    "L" => RowKind::L,
                    "G" => RowKind::G,
                    "E" => RowKind::E,
                    other => return Err(err(format!("unknown row type {other}"))),
                };
                if row_index.insert(name.to_string(), form.row_names.len()).is_some() {
                    return Err(err(format!("duplicate row {name}")));
                }
                form.row_names.push(name.to_string());
                kinds.push(kind);
                rhs.push(0.0);
                ranges.push(None);
                form.rows.push(Vec::new());
            }
            Section::Columns => {
                if fields.get(1) == Some(&"'MARKER'") {
                    match fields.get(2) {
                        Some(&"'INTORG'") => in_integer_block = true,
                        Some(&"'INTEND'") => in_integer_block = false,
                        _ => return Err(err("malformed MARKER line".into())),
                    }
                    continue;
                }
                if fields.len() != 3 && fields.len() != 5 {
                    return Err(err("expected `column row value [row value]`".into()));
                }
                let name = fields[0];
                let c = match col_index.get(name) {
                    Some(&c) => c,
                    None => {
                        let c = form.col_names.len();
                        col_index.insert(name.to_string(), c);
                        form.col_names.push(name.to_string());
                        form.col_lower.push(0.0);
                        form.col_upper.push(f64::INFINITY);
                        form.cost.push(0.0);
                        form.integer.push(in_integer_block);
                        c
                    }
                };
                for pair in fields[1..].chunks(2) {
                    let value = number(pair[1])?;
                    if Some(pair[0]) == objective.as_deref() {
                        form.cost[c] = value;
                    } else {
                        let r = *row_index
                            .get(pair[0])
                            .ok_or_else(|| err(format!("unknown row {}", pair[0])))?;
                        if value != 0.0 {
                            form.rows[r].push((c, value));
                        }
                    }
                }
            }
            Section::Rhs | Section::Ranges => {
                // Optional set name: odd field count means it is present.
                let pairs = if fields.len() % 2 == 1 { &fields[1..] } else { &fields[..] };
                for pair in pairs.chunks(2) {
                    if pair.len() != 2 {
                        return Err(err("expected `row value` pairs".into()));
                    }
                    let value = number(pair[1])?;
                    if Some(pair[0]) == objective.as_deref() {
                        if section == Section::Rhs && value != 0.0 {
                            return Err(err("objective constants are not supported".into()));
                        }
                        continue;
                    }
                    let r = *row_index
                        .get(pair[0])
                        .ok_or_else(|| err(format!("unknown row {}", pair[0])))?;
                    if section == Section::Rhs {
                        rhs[r] = value;
                    } else {
                        ranges[r] = Some(value);
                    }
                }
            }
            Section::Bounds => {
                let kind = fields[0];
                let needs_value = !matches!(kind, "FR" | "MI" | "PL" | "BV");
                let (name, value) = match (fields.len(), needs_value) {
                    (3, false) => (fields[2], None),
                    (2, false) => (fields[1], None),
                    (4, _) => (fields[2], Some(number(fields[3])?)),
                    (3, true) => (fields[1], Some(number(fields[2])?)),
                    _ => return Err(err("malformed bound".into())),
                };
                let c = *col_index
                    .get(name)
                    .ok_or_else(|| err(format!("bound on unknown column {name}")))?;
                let v = value.unwrap_or(0.0);
                match kind {
                    "UP" => form.col_upper[c] = v,
                    "LO" => form.col_lower[c] = v,
                    "FX" => {
                        form.col_lower[c] = v;
                        form.col_upper[c] = v;
                    }
                    "FR" => {
                        form.col_lower[c] = f64::NEG_INFINITY;
                        form.col_upper[c] = f64::INFINITY;
                    }
                    "MI" => form.col_lower[c] = f64::NEG_INFINITY,
                    "PL" => form.col_upper[c] = f64::INFINITY,
                    "BV" => {
                        form.integer[c] = true;
                        form.col_lower[c] = 0.0;
                        form.col_upper[c] = 1.0;
                    }
                    "LI" => {
                        form.integer[c] = true;
                        form.col_lower[c] = v;
                    }
                    "UI" => {
                        form.integer[c] = true;
                        form.col_upper[c] = v;
                    }
                    other => return Err(err(format!("unknown bound type {other}"))),
                }
            }
            Section::None | Section::End => {
                return Err(err("data line outside of a section".into()));
            }
        }
    }
    if section != Section::End {
        return Err(Error::Mps {
            line: text.lines().count(),
            message: "missing ENDATA".into(),
        });
    }

    for r in 0..form.row_names.len() {
        let b = rhs[r];
        let (lo, hi) = match (kinds[r], ranges[r]) {
            (RowKind::L, None) => (f64::NEG_INFINITY, b),
            (RowKind::G, None) => (b, f64::INFINITY),
            (RowKind::E, None) => (b, b),
            (RowKind::L, Some(range)) => (b - range.abs(), b),
            (RowKind::G, Some(range)) => (b, b + range.abs()),
            (RowKind::E, Some(range)) if range >= 0.0 => (b, b + range),
            (RowKind::E, Some(range)) => (b + range, b),
            (RowKind::Free, _) => (f64::NEG_INFINITY, f64::INFINITY),
        };
        form.row_lower.push(lo);
        form.row_upper.push(hi);
        form.rows[r].sort_by_key(|e| e.0);
    }
    Ok(form)
}

pub fn read_mps(path: impl AsRef<Path>) -> Result<StandardForm> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mps(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var() -> StandardForm {
        StandardForm {
            name: "tiny".into(),
            col_names: vec!["x".into(), "u".into()],
            col_lower: vec![0.0, 0.0],
            col_upper: vec![f64::INFINITY, 1.0],
            cost: vec![1.0, 0.0],
            integer: vec![false, true],
            row_names: vec!["c1".into()],
            row_lower: vec![3.0],
            row_upper: vec![f64::INFINITY],
            rows: vec![vec![(0, 1.0)]],
        }
    }

    #[test]
    fn minimal_model_round_trips() {
        let form = one_var();
        let text = mps_string(&form);
        assert!(text.contains(" BV BND  u\n"), "{text}");
        assert!(text.contains("    RHS  c1  3\n"));
        assert_eq!(parse_mps(&text).unwrap(), form);
        assert_eq!(mps_string(&form), text);
    }

    #[test]
    fn foreign_syntax() {
        let text = "\
NAME test
ROWS
 N obj
 L lim
 E bal
COLUMNS
    MARKER 'MARKER' 'INTORG'
    y obj 2 lim 1
    MARKER 'MARKER' 'INTEND'
    z obj -1 bal 1
RHS
    rhs lim 4 bal 2
RANGES
    rng lim 1.5
BOUNDS
 UP bnd y 7
 MI bnd z
ENDATA
";
        let form = parse_mps(text).unwrap();
        assert_eq!(form.integer, vec![true, false]);
        assert_eq!(form.cost, vec![2.0, -1.0]);
        assert_eq!((form.row_lower[0], form.row_upper[0]), (2.5, 4.0));
        assert_eq!((form.row_lower[1], form.row_upper[1]), (2.0, 2.0));
        assert_eq!(form.col_upper[0], 7.0);
        assert_eq!(form.col_lower[1], f64::NEG_INFINITY);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "NAME t\nROWS\n N obj\nCOLUMNS\n    x nope 1\nENDATA\n";
        match parse_mps(text) {
            Err(Error::Mps { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_mps("NAME t\nROWS\n N obj\n").is_err());
        assert!(parse_mps("NAME t\nOBJSENSE\n    MAX\nENDATA\n").is_err());
    }
}
