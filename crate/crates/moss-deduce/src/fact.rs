use serde::{Deserialize, Serialize};
use sseq_core::Bidegree;

/// A page-1 element with a display name: the currency of chart-level facts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRef {
    pub bidegree: Bidegree,
    pub coords: Vec<u32>,
    pub name: String,
}

/// A set-valued bracket answer recorded in a fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDesc {
    pub page: u32,
    pub bidegree: Bidegree,
    pub rep: Vec<u32>,
    pub rep_name: String,
    pub indeterminacy: Vec<Vec<u32>>,
    pub strict: bool,
}

/// What witnesses a homotopy-bracket containment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketWitness {
    /// Named homotopy element, when pinned.
    pub element: Option<String>,
    /// Chart class detecting the element, when known.
    pub detected_by: Option<ElementRef>,
    /// Names of homotopy classes generating the indeterminacy (as far as
    /// declared).
    pub indeterminacy: Vec<String>,
    pub strict: bool,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Fact {
    PermanentCycle {
        class: ElementRef,
    },
    Detects {
        class: ElementRef,
        homotopy: String,
        filtration: i32,
    },
    ZeroProductHomotopy {
        left: String,
        right: String,
    },
    ZeroProductPage {
        left: ElementRef,
        right: ElementRef,
        page: u32,
    },
    /// `⟨α, α', α''⟩ ∋ witness` in homotopy.
    BracketContains {
        bracket: [String; 3],
        witness: BracketWitness,
    },
    /// A page-level bracket: a Massey product for `page >= 2` inputs, or a
    /// Toda bracket of associated-graded classes for `page = 1`.
    MasseyContains {
        inputs: [ElementRef; 3],
        coset: CosetDesc,
    },
    /// `factor · on = equals` (an equality only when `equality` holds;
    /// otherwise a containment in the shuffled bracket).
    HiddenExtension {
        factor: String,
        on: String,
        equals: String,
        equality: bool,
    },
}

impl Fact {
    /// Short display used in traces and reports.
    pub fn describe(&self) -> String {
        match self {
            Fact::PermanentCycle { class } => format!("{} is a permanent cycle", class.name),
            Fact::Detects {
                class,
                homotopy,
                filtration,
            } => format!("{} detects {homotopy} in filtration {filtration}", class.name),
            Fact::ZeroProductHomotopy { left, right } => format!("{left}·{right} = 0 in homotopy"),
            Fact::ZeroProductPage { left, right, page } => {
                format!("{}·{} = 0 on page {page}", left.name, right.name)
            }
            Fact::BracketContains { bracket, witness } => {
                let [a, b, c] = bracket;
                match &witness.element {
                    Some(e) => format!("⟨{a},{b},{c}⟩ contains {e}"),
                    None => format!("⟨{a},{b},{c}⟩: {}", witness.description),
                }
            }
            Fact::MasseyContains { inputs, coset } => {
                let strict = if coset.strict { " (strict)" } else { "" };
                format!(
                    "⟨{},{},{}⟩ = {{{}}}{} on page {}",
                    inputs[0].name, inputs[1].name, inputs[2].name, coset.rep_name, strict,
                    coset.page,
                )
            }
            Fact::HiddenExtension {
                factor,
                on,
                equals,
                equality,
            } => {
                if *equality {
                    format!("{factor}·{on} = {equals}")
                } else {
                    format!("{factor}·{on} ∈ {equals}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Axiom,
    /// Derived by the deduction with this id.
    Deduced { deduction: usize },
    /// Computed directly from the chart (e.g. a permanence check promoted
    /// to a fact so rules can cite it).
    Computed { check: String },
}

/// One check a rule ran, with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: String,
}

/// A replayable inference record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Deduction {
    pub id: usize,
    pub rule: String,
    /// A self-contained statement of the rule (used by traces).
    pub statement: String,
    pub premises: Vec<usize>,
    pub checks: Vec<Check>,
    pub conclusions: Vec<usize>,
}
