//! Text and JSON rendering of reports. The JSON schema for `verify` is
//! fixed: `{construction, checks[], invariants{K2,pg,q,chi}, census{n,m},
//! base_points, deg_sigma, assumptions[]}`.

use serde_json::{json, Value};
use tricover::constructions::{ConstructionReport, TableRow};

pub fn report_json(report: &ConstructionReport) -> Value {
    json!({
        "construction": report.construction,
        "checks": report.checks.entries.iter().map(|e| {
            json!({ "name": e.name, "passed": e.passed, "detail": e.detail })
        }).collect::<Vec<_>>(),
        "invariants": {
            "K2": report.invariants.k2,
            "pg": report.invariants.pg,
            "q": report.invariants.q,
            "chi": report.invariants.chi,
        },
        "census": { "n": report.census.n, "m": report.census.m },
        "base_points": report.base_points,
        "deg_sigma": report.deg_sigma,
        "assumptions": report.assumptions,
    })
}

pub fn report_text(report: &ConstructionReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "construction {}", report.construction);
    for entry in &report.checks.entries {
        let mark = if entry.passed { "ok" } else { "FAIL" };
        if entry.detail.is_empty() {
            let _ = writeln!(out, "  [{mark}] {}", entry.name);
        } else {
            let _ = writeln!(out, "  [{mark}] {} ({})", entry.name, entry.detail);
        }
    }
    let inv = &report.invariants;
    let _ = writeln!(
        out,
        "  cover:    K2={} pg={} q={} chi={}",
        inv.k2, inv.pg, inv.q, inv.chi
    );
    let qinv = &report.quotient_invariants;
    let _ = writeln!(
        out,
        "  quotient: K2={} pg={} q={} chi={}",
        qinv.k2, qinv.pg, qinv.q, qinv.chi
    );
    let _ = writeln!(
        out,
        "  census: {} cusps (A2), {} one-third points",
        report.census.n, report.census.m
    );
    let _ = writeln!(out, "  base points: {}", report.base_points);
    let _ = writeln!(out, "  canonical image degree: {}", report.deg_sigma);
    let _ = writeln!(out, "  row: {}", report.row());
    if !report.assumptions.is_empty() {
        let _ = writeln!(out, "  assumptions:");
        for a in &report.assumptions {
            let _ = writeln!(out, "    - {a}");
        }
    }
    out
}

pub fn row_json(report: &ConstructionReport) -> Value {
    let row = report.row();
    json!({
        "construction": report.construction,
        "K2": row.k2,
        "pg": row.pg,
        "q": row.q,
        "deg_sigma": row.deg_sigma,
        "base_points": row.base_points,
    })
}

pub fn table_text(rows: &[(String, TableRow)]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:>5} {:>4} {:>3} {:>10} {:>12}",
        "", "K^2", "p_g", "q", "deg Sigma", "base points"
    );
    for (name, row) in rows {
        let _ = writeln!(
            out,
            "{:<8} {:>5} {:>4} {:>3} {:>10} {:>12}",
            name, row.k2, row.pg, row.q, row.deg_sigma, row.base_points
        );
    }
    out
}
