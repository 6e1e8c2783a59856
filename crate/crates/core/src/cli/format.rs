use std::fmt::Write;

use crate::fmt::sig;
use crate::quantum_game::EquilibriumReport;
use crate::sweep::CSV_HEADER;
use crate::verify::Relation;

use super::{OutputFormat, RunReport};

/// Renders a report for stdout. Output depends only on the report, so
/// repeated runs are byte-identical.
pub fn format_report(report: &RunReport, format: OutputFormat) -> Vec<u8> {
    let text = match (report, format) {
        (RunReport::Table { out: Some(_), .. }, _) => String::new(),
        (RunReport::Table { csv, .. }, _) => csv.clone(),
        (RunReport::Nash(doc), OutputFormat::Json) => json(doc),
        (RunReport::Entropy(r), OutputFormat::Json) => json(r),
        (RunReport::Verify(s), OutputFormat::Json) => json(s),
        (RunReport::Nash(doc), OutputFormat::Csv) => {
            let mut s = String::new();
            let _ = writeln!(s, "# k: {}", sig(doc.closed_form.k));
            let _ = writeln!(s, "# method: closed_form");
            let _ = writeln!(s, "# agreement: {}", sig(doc.agreement));
            let _ = writeln!(s, "# tool: {}", crate::TOOL_VERSION);
            let _ = writeln!(s, "{CSV_HEADER}");
            let _ = writeln!(s, "{}", csv_row(&doc.closed_form));
            s
        }
        (RunReport::Entropy(r), OutputFormat::Csv) => {
            format!("eta,nu,entropy\n{},{},{}\n", sig(r.eta), sig(r.nu), sig(r.entropy))
        }
        (RunReport::Verify(summary), OutputFormat::Csv) => {
            let mut s = String::from("name,measured,relation,threshold,pass\n");
            for c in &summary.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.name,
                    sig(c.measured),
                    relation(c.relation),
                    sig(c.threshold),
                    c.pass
                );
            }
            s
        }
        (RunReport::Nash(doc), OutputFormat::Text) => {
            let mut s = String::new();
            for (label, r) in [("closed form", &doc.closed_form), ("linear solve", &doc.linear_solve)] {
                let _ = writeln!(s, "{label}:");
                text_report(&mut s, r);
            }
            let _ = writeln!(
                s,
                "agreement: {} (threshold {})",
                sig(doc.agreement),
                sig(doc.agreement_threshold)
            );
            if let Some(p) = &doc.as_printed {
                let _ = writeln!(s, "as printed: x = ({}, {})", sig(p.x.x1()), sig(p.x.x2()));
                let _ = writeln!(
                    s,
                    "  player {} gains {} by moving to {}",
                    p.deviating_player.index(),
                    sig(p.max_deviation_gain),
                    sig(p.deviation)
                );
            }
            s
        }
        (RunReport::Entropy(r), OutputFormat::Text) => {
            format!("eta: {}\nnu: {}\nentropy: {}\n", sig(r.eta), sig(r.nu), sig(r.entropy))
        }
        (RunReport::Verify(summary), OutputFormat::Text) => {
            let mut s = String::new();
            let width = summary.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &summary.checks {
                let _ = writeln!(
                    s,
                    "{:<width$}  {} {} {}  {}",
                    c.name,
                    sig(c.measured),
                    relation(c.relation),
                    sig(c.threshold),
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            let _ = writeln!(s, "{} passed, {} failed", summary.passed, summary.failed);
            s
        }
    };
    text.into_bytes()
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn relation(r: Relation) -> &'static str {
    match r {
        Relation::AtMost => "<=",
        Relation::AtLeast => ">=",
    }
}

fn csv_row(r: &EquilibriumReport) -> String {
    [
        r.gamma1,
        r.gamma2,
        r.gamma12,
        r.dgamma,
        r.x_star.x1(),
        r.x_star.x2(),
        r.q_star.q1,
        r.q_star.q2,
        r.price,
        r.u_star.u1,
        r.u_star.u2,
        r.u_total,
        r.eta,
        r.entropy,
        r.asymmetry,
    ]
    .iter()
    .map(|v| sig(*v))
    .collect::<Vec<_>>()
    .join(",")
}

fn text_report(s: &mut String, r: &EquilibriumReport) {
    let _ = writeln!(s, "  x*       = ({}, {})", sig(r.x_star.x1()), sig(r.x_star.x2()));
    let _ = writeln!(s, "  q*       = ({}, {})", sig(r.q_star.q1), sig(r.q_star.q2));
    let _ = writeln!(s, "  price    = {}", sig(r.price));
    let _ = writeln!(s, "  u*       = ({}, {})", sig(r.u_star.u1), sig(r.u_star.u2));
    let _ = writeln!(s, "  u_total  = {}", sig(r.u_total));
    let _ = writeln!(s, "  entropy  = {}", sig(r.entropy));
    let _ = writeln!(s, "  foc_norm = {}", sig(r.residuals.foc_norm));
    let _ = writeln!(s, "  max_gain = {}", sig(r.residuals.max_deviation_gain));
}
