use crate::{Deduction, ElementRef, Fact, Provenance};
use sseq_core::{permanent_cycle_status, PageElement, PermanenceStatus, SseqData, SseqError};
use std::collections::BTreeMap;

/// The frozen chart a fact base is built over: the page tower with its
/// knowledge horizon, the class-name table, and the homotopy product names
/// declared by the chart author.
pub struct ChartContext {
    pub data: SseqData,
    /// name -> page-1 element
    pub classes: BTreeMap<String, ElementRef>,
    /// (left, right) -> product name, for naming conclusions in homotopy
    pub homotopy_products: BTreeMap<(String, String), String>,
}

impl ChartContext {
    pub fn class(&self, name: &str) -> Option<&ElementRef> {
        self.classes.get(name)
    }

    pub fn element_of(&self, e: &ElementRef) -> PageElement {
        PageElement {
            bidegree: e.bidegree,
            coords: e.coords.clone(),
        }
    }

    /// Check an element reference names something on the chart.
    pub fn well_formed(&self, e: &ElementRef) -> bool {
        let page = &self.data.tower.pages[0];
        let rank = page.rank_at(e.bidegree);
        e.coords.len() == rank && !e.coords.iter().all(|&c| c == 0)
    }

    pub fn product_name(&self, left: &str, right: &str) -> Option<String> {
        self.homotopy_products
            .get(&(left.to_string(), right.to_string()))
            .cloned()
    }
}

#[derive(Debug, Clone)]
pub struct StoredFact {
    pub id: usize,
    pub fact: Fact,
    pub provenance: Provenance,
}

/// Single-writer fact store with provenance and a deduction log. Rules
/// read a frozen snapshot and commit their conclusions through
/// `record_deduction`.
pub struct FactBase {
    pub context: ChartContext,
    facts: Vec<StoredFact>,
    deductions: Vec<Deduction>,
}

impl FactBase {
    pub fn new(context: ChartContext) -> FactBase {
        FactBase {
            context,
            facts: Vec::new(),
            deductions: Vec::new(),
        }
    }

    pub fn facts(&self) -> &[StoredFact] {
        &self.facts
    }

    pub fn deductions(&self) -> &[Deduction] {
        &self.deductions
    }

    pub fn deduction(&self, id: usize) -> Option<&Deduction> {
        self.deductions.get(id)
    }

    /// Store a fact after consistency checks. Well-formedness: element
    /// references must name chart classes; detection and permanence facts
    /// must not contradict the chart or each other.
    pub fn assert_fact(&mut self, fact: Fact, provenance: Provenance) -> Result<usize, SseqError> {
        self.check_consistency(&fact)?;
        let id = self.facts.len();
        self.facts.push(StoredFact {
            id,
            fact,
            provenance,
        });
        Ok(id)
    }

    fn check_consistency(&self, fact: &Fact) -> Result<(), SseqError> {
        let refs: Vec<&ElementRef> = match fact {
            Fact::PermanentCycle { class } => vec![class],
            Fact::Detects { class, .. } => vec![class],
            Fact::ZeroProductPage { left, right, .. } => vec![left, right],
            Fact::MasseyContains { inputs, .. } => inputs.iter().collect(),
            _ => Vec::new(),
        };
        for e in refs {
            if !self.context.well_formed(e) {
                return Err(SseqError::Consistency(format!(
                    "`{}` does not name a chart element at {:?}",
                    e.name, e.bidegree
                )));
            }
        }
        match fact {
            Fact::PermanentCycle { class } | Fact::Detects { class, .. } => {
                let elt = self.context.element_of(class);
                if let PermanenceStatus::Dies { page, .. } =
                    permanent_cycle_status(&self.context.data, &elt)
                {
                    return Err(SseqError::Consistency(format!(
                        "`{}` dies on page {page}, contradicting {}",
                        class.name,
                        fact.describe()
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Pattern query: all facts a predicate matches.
    pub fn query<'a>(&'a self, pred: impl Fn(&Fact) -> bool + 'a) -> Vec<&'a StoredFact> {
        self.facts.iter().filter(|s| pred(&s.fact)).collect()
    }

    pub fn find_permanent(&self, name: &str) -> Option<usize> {
        self.facts.iter().find_map(|s| match &s.fact {
            Fact::PermanentCycle { class } if class.name == name => Some(s.id),
            _ => None,
        })
    }

    pub fn find_detects(&self, name: &str) -> Option<(usize, String, i32)> {
        self.facts.iter().find_map(|s| match &s.fact {
            Fact::Detects {
                class,
                homotopy,
                filtration,
            } if class.name == name => Some((s.id, homotopy.clone(), *filtration)),
            _ => None,
        })
    }

    pub fn find_zero_product(&self, left: &str, right: &str) -> Option<usize> {
        self.facts.iter().find_map(|s| match &s.fact {
            Fact::ZeroProductHomotopy { left: l, right: r } if l == left && r == right => {
                Some(s.id)
            }
            _ => None,
        })
    }

    pub fn find_e1_bracket(&self, names: [&str; 3]) -> Option<(usize, crate::CosetDesc)> {
        self.facts.iter().find_map(|s| match &s.fact {
            Fact::MasseyContains { inputs, coset }
                if coset.page == 1
                    && inputs[0].name == names[0]
                    && inputs[1].name == names[1]
                    && inputs[2].name == names[2] =>
            {
                Some((s.id, coset.clone()))
            }
            _ => None,
        })
    }

    pub fn find_bracket_contains(&self, bracket: [&str; 3]) -> Option<(usize, crate::BracketWitness)> {
        self.facts.iter().find_map(|s| match &s.fact {
            Fact::BracketContains { bracket: b, witness }
                if b[0] == bracket[0] && b[1] == bracket[1] && b[2] == bracket[2] =>
            {
                Some((s.id, witness.clone()))
            }
            _ => None,
        })
    }

    /// Remove a fact (for premise-deletion sweeps in tests). Renumbering is
    /// not performed; dangling premise ids keep their meaning through the
    /// log.
    pub fn retract(&mut self, id: usize) -> Option<StoredFact> {
        let pos = self.facts.iter().position(|s| s.id == id)?;
        Some(self.facts.remove(pos))
    }

    pub fn record_deduction(
        &mut self,
        rule: &str,
        statement: &str,
        premises: Vec<usize>,
        checks: Vec<crate::Check>,
        conclusions: Vec<Fact>,
    ) -> Result<usize, SseqError> {
        let id = self.deductions.len();
        let mut conclusion_ids = Vec::new();
        for fact in conclusions {
            let fid = self.assert_fact(fact, Provenance::Deduced { deduction: id })?;
            conclusion_ids.push(fid);
        }
        self.deductions.push(Deduction {
            id,
            rule: rule.to_string(),
            statement: statement.to_string(),
            premises,
            checks,
            conclusions: conclusion_ids,
        });
        Ok(id)
    }

    /// Serialize all facts as a JSON array.
    pub fn facts_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .facts
            .iter()
            .map(|s| serde_json::json!({
                "id": s.id,
                "fact": s.fact,
                "provenance": s.provenance,
            }))
            .collect::<Vec<_>>())
    }

    /// Append-only JSON-lines rendering of the deduction log.
    pub fn deduction_log_lines(&self) -> Vec<String> {
        self.deductions
            .iter()
            .map(|d| serde_json::to_string(d).expect("serializable"))
            .collect()
    }
}
