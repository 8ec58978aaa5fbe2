//! CSV, Markdown and SVG renderings of run results. All output is a pure
//! function of its inputs, so repeated runs produce identical files.

use std::fmt::Write as _;

use hydrogrid_core::verify::VerificationReport;
use hydrogrid_core::{AnnualMetrics, ComparisonReport, GridCase, MilpModel, Solution, StorageTrajectory};

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

/// One row per quarter plus a `year` row carrying totals and the cost.
pub fn metrics_csv(m: &AnnualMetrics) -> String {
    let mut w = csv_writer();
    w.write_record(["quarter", "curtailment_mwh", "conv_gen_mwh", "avg_flow_pct", "total_cost"])
        .expect("in-memory write");
    for (q, qm) in m.quarters.iter().enumerate() {
        w.write_record([
            (q + 1).to_string(),
            qm.wind_curtailment.to_string(),
            qm.conventional_generation.to_string(),
            qm.avg_flow_pct.to_string(),
            String::new(),
        ])
        .expect("in-memory write");
    }
    let curtailed: f64 = m.quarters.iter().map(|q| q.wind_curtailment).sum();
    let generated: f64 = m.quarters.iter().map(|q| q.conventional_generation).sum();
    w.write_record([
        "year".to_string(),
        curtailed.to_string(),
        generated.to_string(),
        m.annual_avg_flow_pct().to_string(),
        m.total_cost.to_string(),
    ])
    .expect("in-memory write");
    finish(w)
}

/// Start-of-hour storage levels on the first and last day of each quarter.
pub fn trajectory_csv(traj: &StorageTrajectory, case: &GridCase) -> String {
    let mut w = csv_writer();
    w.write_record(["bus", "quarter", "day", "hour", "level_mwh"])
        .expect("in-memory write");
    for bus in &traj.buses {
        let id = &case.buses()[bus.bus].id;
        for (q, qt) in bus.quarters.iter().enumerate() {
            let mut days = vec![(1, &qt.first_day)];
            if traj.days_per_quarter > 1 {
                days.push((traj.days_per_quarter, &qt.last_day));
            }
            for (day, levels) in days {
                for (t, level) in levels.iter().enumerate() {
                    w.write_record([
                        id.clone(),
                        (q + 1).to_string(),
                        day.to_string(),
                        (t + 1).to_string(),
                        level.to_string(),
                    ])
                    .expect("in-memory write");
                }
            }
        }
    }
    finish(w)
}

pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut w = csv_writer();
    w.write_record(["field", "run_a", "run_b", "delta", "delta_pct"])
        .expect("in-memory write");
    for f in &report.fields {
        w.write_record([
            f.field.clone(),
            f.run_a.to_string(),
            f.run_b.to_string(),
            f.delta.to_string(),
            f.delta_pct.map(|p| p.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    w.write_record([
        "cost_saving_pct".to_string(),
        String::new(),
        String::new(),
        report.cost_saving_pct.to_string(),
        String::new(),
    ])
    .expect("in-memory write");
    finish(w)
}

/// Every model column by name.
pub fn solution_csv(model: &MilpModel, sol: &Solution) -> String {
    let mut w = csv_writer();
    w.write_record(["column", "value"]).expect("in-memory write");
    for (c, v) in sol.values.iter().enumerate() {
        w.write_record([model.column_name(c), v.to_string()])
            .expect("in-memory write");
    }
    finish(w)
}

pub fn verification_text(report: &VerificationReport, tol: f64) -> String {
    let mut out = String::new();
    let verdict = if report.is_clean() { "clean" } else { "violated" };
    let _ = writeln!(out, "result: {verdict}");
    let _ = writeln!(out, "tolerance: {tol:e}");
    let _ = writeln!(out, "checks: {}", report.checks_evaluated);
    let _ = writeln!(out, "max_violation: {:e}", report.max_violation);
    let _ = writeln!(out, "findings: {}", report.findings.len());
    for f in &report.findings {
        let _ = writeln!(out, "{f}");
    }
    out
}

fn sci(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let mantissa = v / 10f64.powi(exp);
    format!("{mantissa:.2}×10^{exp}")
}

/// Quarterly table with rows for curtailment, conventional generation and
/// average branch loading, followed by the annual cost in million $.
pub fn metrics_markdown(title: &str, m: &AnnualMetrics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "### {title}\n");
    let _ = write!(out, "| |");
    for q in 1..=m.quarters.len() {
        let _ = write!(out, " Quarter {q} |");
    }
    out.push('\n');
    out.push_str("|---|");
    out.push_str(&"---|".repeat(m.quarters.len()));
    out.push('\n');
    type Cell = fn(&hydrogrid_core::QuarterMetrics) -> String;
    let rows: [(&str, Cell); 3] = [
        ("Wind Curtailment (MWh)", |q| sci(q.wind_curtailment)),
        ("Conventional Generation (MWh)", |q| sci(q.conventional_generation)),
        ("Average Power Flow (%)", |q| format!("{:.2}", q.avg_flow_pct)),
    ];
    for (name, cell) in rows {
        let _ = write!(out, "| {name} |");
        for q in &m.quarters {
            let _ = write!(out, " {} |", cell(q));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "\nTotal operation cost: ${:.2} million", m.total_cost / 1e6);
    out
}

/// Line chart of hourly conventional generation, one polyline per series.
pub fn generation_svg(title: &str, series: &[(&str, &[f64])]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 360.0;
    const LEFT: f64 = 64.0;
    const RIGHT: f64 = 16.0;
    const TOP: f64 = 36.0;
    const BOTTOM: f64 = 44.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let hours = series.iter().map(|(_, v)| v.len()).max().unwrap_or(0).max(2);
    let max = series
        .iter()
        .flat_map(|(_, v)| v.iter().copied())
        .fold(0.0_f64, f64::max);
    let top = nice_ceiling(max);
    let x = |t: usize| LEFT + (W - LEFT - RIGHT) * t as f64 / (hours - 1) as f64;
    let y = |v: f64| TOP + (H - TOP - BOTTOM) * (1.0 - v / top);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    for i in 0..=4 {
        let v = top * f64::from(i) / 4.0;
        let yy = y(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.1}" x2="{:.1}" y2="{yy:.1}" stroke="#ddd"/>"##,
            W - RIGHT
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.0}</text>"#,
            LEFT - 6.0,
            yy + 4.0
        );
    }
    for t in 0..hours {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x(t),
            H - BOTTOM + 16.0,
            t + 1
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">Hour</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">Conventional generation (MW)</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (i, (label, values)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(t, v)| format!("{:.1},{:.1}", x(t), y(*v)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 4.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            W - RIGHT - 110.0,
            W - RIGHT - 90.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            W - RIGHT - 84.0,
            ly + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn nice_ceiling(v: f64) -> f64 {
    if !(v > 0.0) {
        return 1.0;
    }
    let step = 10f64.powf(v.log10().floor());
    (v / step).ceil() * step
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
