use crate::{FactBase, Provenance};
use sseq_core::SseqError;

/// Human-readable trace of one deduction: the rule's statement, the
/// premises cited, every check that was run, and the conclusions.
pub fn explain(base: &FactBase, deduction_id: usize) -> Result<String, SseqError> {
    let ded = base
        .deduction(deduction_id)
        .ok_or_else(|| SseqError::Consistency(format!("no deduction with id {deduction_id}")))?;
    let mut out = String::new();
    out.push_str(&format!("deduction #{} — rule `{}`\n", ded.id, ded.rule));
    out.push_str(&format!("  statement: {}\n", ded.statement));
    out.push_str("  premises:\n");
    for &pid in &ded.premises {
        match base.facts().iter().find(|s| s.id == pid) {
            Some(stored) => {
                let tag = match &stored.provenance {
                    Provenance::Axiom => "axiom",
                    Provenance::Deduced { .. } => "derived",
                    Provenance::Computed { .. } => "computed",
                };
                out.push_str(&format!("    [{pid}] ({tag}) {}\n", stored.fact.describe()));
            }
            None => out.push_str(&format!("    [{pid}] (retracted)\n")),
        }
    }
    out.push_str("  checks:\n");
    for check in &ded.checks {
        out.push_str(&format!("    {} — {}\n", check.name, check.outcome));
    }
    out.push_str("  conclusions:\n");
    for &cid in &ded.conclusions {
        if let Some(stored) = base.facts().iter().find(|s| s.id == cid) {
            out.push_str(&format!("    [{cid}] {}\n", stored.fact.describe()));
        }
    }
    Ok(out)
}
