//! Plain-text renderings for the CLI. IRIs are compacted with the loaded
//! prefixes.

use std::fmt::Write;

use semioe_core::schema::{Severity, ValidationReport};
use semioe_core::services::{DecisionKind, Grant};
use semioe_core::{BindingSet, Iri, PrefixMap, ServiceDecision};

use crate::engine::EntityView;

fn join(prefixes: &PrefixMap, iris: &[Iri]) -> String {
    if iris.is_empty() {
        return "(none)".to_string();
    }
    iris.iter()
        .map(|i| prefixes.render_iri(i))
        .collect::<Vec<_>>()
        .join(", ")
}

fn grant(prefixes: &PrefixMap, label: &str, g: &Grant) -> String {
    let p = |iri: &Iri| prefixes.render_iri(iri);
    format!(
        "{label} {} for [{}, {}]\n  membership {}\n  relation {}\n  rights {}",
        p(&g.temp_role),
        g.window.start(),
        g.window.end(),
        p(&g.membership),
        p(&g.relation),
        join(prefixes, &g.rights),
    )
}

pub fn decision(prefixes: &PrefixMap, decision: &ServiceDecision) -> String {
    match &decision.kind {
        DecisionKind::AccessDecision {
            allowed: true,
            matched_right,
        } => match matched_right {
            Some(right) => format!("ALLOWED via {}", prefixes.render_iri(right)),
            None => "ALLOWED".to_string(),
        },
        DecisionKind::AccessDecision { allowed: false, .. } => {
            let reason = decision
                .audit
                .last()
                .map_or("denied", |r| r.outcome.as_str());
            format!("DENIED ({reason})")
        }
        DecisionKind::CollaborationGrant(g) => grant(prefixes, "COLLABORATION", g),
        DecisionKind::DelegationGrant(g) => grant(prefixes, "DELEGATION", g),
        DecisionKind::EnvironmentAdjustment { adjustments } if adjustments.is_empty() => {
            "NO ADJUSTMENTS".to_string()
        }
        DecisionKind::EnvironmentAdjustment { adjustments } => {
            let mut out = String::new();
            for (i, a) in adjustments.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let old = a
                    .old_value
                    .as_ref()
                    .map_or("(unset)".to_string(), |v| prefixes.render_term(v));
                write!(
                    out,
                    "ADJUSTED {} {old} -> {} (preference {})",
                    prefixes.render_iri(&a.property),
                    prefixes.render_term(&a.new_value),
                    prefixes.render_iri(&a.preference),
                )
                .unwrap();
            }
            out
        }
        DecisionKind::RoleExpiry { retired } => format!("RETIRED {}", join(prefixes, retired)),
    }
}

/// Left-aligned columns headed by the variable names, then a row count.
pub fn table(prefixes: &PrefixMap, bindings: &BindingSet) -> String {
    let header: Vec<String> = bindings
        .variables()
        .iter()
        .map(ToString::to_string)
        .collect();
    let rows: Vec<Vec<String>> = bindings
        .rows()
        .iter()
        .map(|row| row.iter().map(|t| prefixes.render_term(t)).collect())
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain([header[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(&header);
    for row in &rows {
        out.push('\n');
        out.push_str(&line(row));
    }
    let n = rows.len();
    write!(out, "\n({n} row{})", if n == 1 { "" } else { "s" }).unwrap();
    out
}

pub fn validation(prefixes: &PrefixMap, report: &ValidationReport) -> String {
    let errors = report.errors().count();
    let warnings = report.warnings().count();
    let mut out = format!(
        "{} ({errors} error{}, {warnings} warning{})",
        if report.valid { "valid" } else { "invalid" },
        if errors == 1 { "" } else { "s" },
        if warnings == 1 { "" } else { "s" },
    );
    for v in &report.violations {
        let severity = match v.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            out,
            "\n{severity} {} {}: {}",
            v.rule,
            prefixes.render_term(&v.focus),
            v.message
        )
        .unwrap();
    }
    out
}

pub fn entity(prefixes: &PrefixMap, view: &EntityView) -> String {
    let mut out = format!(
        "{}\n  types {}",
        prefixes.render_iri(&view.iri),
        join(prefixes, &view.types)
    );
    for e in &view.properties {
        write!(
            out,
            "\n  {} {}",
            prefixes.render_iri(&e.predicate),
            prefixes.render_term(&e.node)
        )
        .unwrap();
    }
    for e in &view.incoming {
        write!(
            out,
            "\n  {} {} (incoming)",
            prefixes.render_term(&e.node),
            prefixes.render_iri(&e.predicate)
        )
        .unwrap();
    }
    out
}
