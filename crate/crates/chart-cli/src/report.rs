//! Markdown summaries of a fact base: the chart, the axioms, and every
//! deduction with its trace.

use crate::schema::ChartDocument;
use moss_deduce::{explain, FactBase, Provenance};
use std::fmt::Write as _;

pub fn markdown_report(doc: &ChartDocument, base: &FactBase) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", doc.name);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "Chart over Z/{}^{} with {} classes; differentials complete through page {}.",
        doc.modulus.p,
        doc.modulus.k,
        doc.classes.len(),
        doc.complete_through
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "## Classes");
    let _ = writeln!(out);
    let _ = writeln!(out, "| name | stem | filtration | order |");
    let _ = writeln!(out, "|------|------|------------|-------|");
    for c in &doc.classes {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            c.name, c.stem, c.filtration, c.order
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "## Facts");
    let _ = writeln!(out);
    for s in base.facts() {
        let tag = match &s.provenance {
            Provenance::Axiom => "axiom",
            Provenance::Deduced { deduction } => {
                &format!("deduced #{deduction}")
            }
            Provenance::Computed { .. } => "computed",
        };
        let _ = writeln!(out, "- [{}] ({tag}) {}", s.id, s.fact.describe());
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "## Deductions");
    let _ = writeln!(out);
    if base.deductions().is_empty() {
        let _ = writeln!(out, "(none)");
    }
    for d in base.deductions() {
        let _ = writeln!(out, "```");
        let _ = write!(out, "{}", explain(base, d.id).unwrap_or_default());
        let _ = writeln!(out, "```");
        let _ = writeln!(out);
    }
    out
}
