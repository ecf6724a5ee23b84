//! A fact base over spectral-sequence charts and the Moss-type convergence
//! theorems as machine-checked inference rules, together with a chain-level
//! oracle that verifies every rule instance end to end on filtered DGAs.
//!
//! Facts carry provenance; rules read a frozen chart, check their premises
//! (refusing on any false premise, withholding on any unknown one), record
//! every check they ran, and emit conclusions with a replayable deduction
//! record.

mod base;
mod campaign;
mod explain;
mod fact;
mod oracle;
mod rules;

pub use base::{ChartContext, FactBase, StoredFact};
pub use campaign::{run_campaign, run_campaign_serial, CampaignParams, CampaignReport};
pub use explain::explain;
pub use fact::{BracketWitness, CosetDesc, Check, Deduction, ElementRef, Fact, Provenance};
pub use oracle::{
    crossing_prop_holds, find_applicable_triples, find_applicable_triples_e1,
    oracle_verify_moss, oracle_verify_moss_e1, OracleOutcome, OracleReport, OracleTriple,
};
pub use rules::{rule_moss_e1, rule_moss_r, rule_shuffle, RuleError, RuleOutcome};
