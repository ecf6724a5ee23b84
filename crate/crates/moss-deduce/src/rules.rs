use crate::{BracketWitness, Check, CosetDesc, ElementRef, Fact, FactBase, Provenance};
use sseq_core::{
    crossing_check, massey_on_page, permanent_cycle_status, CrossingOutcome, PageElement,
    PermanenceStatus, SseqError,
};

pub type RuleError = SseqError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOutcome {
    Applied { deduction: usize },
    /// A premise is false; the rule refuses and names it.
    Refused { failing_premise: String },
    /// A premise is unknown; the deduction is withheld, never guessed.
    Withheld { unknown_premise: String },
}

const MOSS_R_STATEMENT: &str = "Moss-type convergence (E_r form): permanent cycles a, a', a'' \
detecting α, α', α'' with vanishing adjacent products, both products hit by d_r, and the \
crossing-differential hypothesis at the degrees of a·a' and a'·a'' yield: the Massey product \
⟨a,a',a''⟩ contains a permanent cycle converging to an element of ⟨α,α',α''⟩";

const MOSS_E1_STATEMENT: &str = "Moss-type convergence (E_1 form): permanent cycles a, a', a'' \
on the E_1 page with vanishing adjacent products there and in homotopy, plus the crossing \
ranges at the degrees of both products, yield: the E_1 Toda bracket ⟨a,a',a''⟩ contains a \
permanent cycle converging to an element of ⟨α,α',α''⟩";

const SHUFFLE_STATEMENT: &str = "auxiliary rule (shuffle identity, assumed): \
x·⟨a,b,c⟩ = ⟨x,a,b⟩·c";

struct Premises {
    ids: Vec<usize>,
    checks: Vec<Check>,
}

enum Gate {
    Ok,
    Refuse(String),
    Withhold(String),
}

/// Establish that `name` is a nonzero permanent cycle: as a recorded fact,
/// or derivable from the chart (in which case the derivation is promoted to
/// a fact so the deduction can cite it).
fn permanent_premise(base: &mut FactBase, name: &str) -> Result<(Gate, Option<usize>), SseqError> {
    if let Some(id) = base.find_permanent(name) {
        // the chart must not contradict it
        let class = base.context.class(name).cloned();
        if let Some(class) = class {
            let elt = base.context.element_of(&class);
            if let PermanenceStatus::Dies { page, .. } =
                permanent_cycle_status(&base.context.data, &elt)
            {
                return Err(SseqError::Consistency(format!(
                    "recorded permanence of {name} contradicts a differential on page {page}"
                )));
            }
        }
        return Ok((Gate::Ok, Some(id)));
    }
    let Some(class) = base.context.class(name).cloned() else {
        return Err(SseqError::Consistency(format!("unknown class `{name}`")));
    };
    let elt = base.context.element_of(&class);
    match permanent_cycle_status(&base.context.data, &elt) {
        PermanenceStatus::Permanent => {
            let id = base.assert_fact(
                Fact::PermanentCycle { class },
                Provenance::Computed {
                    check: "permanence decided by the chart".into(),
                },
            )?;
            Ok((Gate::Ok, Some(id)))
        }
        PermanenceStatus::Dies { page, .. } => Ok((
            Gate::Refuse(format!("{name} supports or is hit by a differential on page {page}")),
            None,
        )),
        PermanenceStatus::Unknown { missing_page } => Ok((
            Gate::Withhold(format!(
                "permanence of {name} needs page {missing_page}, past the declared bound"
            )),
            None,
        )),
    }
}

fn crossing_premise(
    base: &FactBase,
    label: &str,
    degree: (i32, i32),
    r: u32,
    checks: &mut Vec<Check>,
) -> Gate {
    match crossing_check(&base.context.data, degree, r) {
        CrossingOutcome::Holds { vacuous } => {
            checks.push(Check {
                name: format!("crossing at {label} {degree:?}, page {r}"),
                outcome: if vacuous {
                    "holds (vacuous)".into()
                } else {
                    "holds".into()
                },
            });
            Gate::Ok
        }
        CrossingOutcome::Fails { witness } => Gate::Refuse(format!(
            "crossing fails at {label}: element {:?} at {:?} supports d_{} hitting {:?}",
            witness.element, witness.bidegree, witness.page, witness.target
        )),
        CrossingOutcome::Unknown { needed_page } => Gate::Withhold(format!(
            "crossing at {label} needs page {needed_page}, past the declared bound"
        )),
    }
}

/// E_1 representative of a page-`r` element, as a named chart element.
fn e1_ref(base: &FactBase, page_index: usize, elt: &PageElement) -> ElementRef {
    let tower = &base.context.data.tower;
    let e1 = &tower.pages[0];
    let coords = match tower.e1_reps[page_index].get(&elt.bidegree) {
        Some(rows) => rows.apply_left(&elt.coords),
        None => vec![0; e1.rank_at(elt.bidegree)],
    };
    let mut coords = coords;
    if let Some(g) = e1.group(elt.bidegree) {
        for (c, &o) in coords.iter_mut().zip(&g.orders) {
            *c %= o;
        }
    }
    let name = e1.element_name(&PageElement {
        bidegree: elt.bidegree,
        coords: coords.clone(),
    });
    ElementRef {
        bidegree: elt.bidegree,
        coords,
        name,
    }
}

fn gather(
    base: &mut FactBase,
    names: [&str; 3],
) -> Result<(Gate, Premises, [ElementRef; 3], [String; 3]), SseqError> {
    let mut premises = Premises {
        ids: Vec::new(),
        checks: Vec::new(),
    };
    let mut classes = Vec::new();
    let mut homotopy = Vec::new();
    for name in names {
        let Some(class) = base.context.class(name).cloned() else {
            return Err(SseqError::Consistency(format!("unknown class `{name}`")));
        };
        classes.push(class);
        let (gate, id) = permanent_premise(base, name)?;
        match gate {
            Gate::Ok => premises.ids.push(id.expect("present on Ok")),
            other => {
                return Ok((
                    other,
                    premises,
                    classes_into(classes),
                    [String::new(), String::new(), String::new()],
                ))
            }
        }
        match base.find_detects(name) {
            Some((id, h, _f)) => {
                premises.ids.push(id);
                homotopy.push(h);
            }
            None => {
                return Ok((
                    Gate::Withhold(format!("no detection recorded for {name}")),
                    premises,
                    classes_into(classes),
                    [String::new(), String::new(), String::new()],
                ))
            }
        }
    }
    let homotopy: [String; 3] = [
        homotopy[0].clone(),
        homotopy[1].clone(),
        homotopy[2].clone(),
    ];
    // vanishing homotopy products α·α' and α'·α''
    for (l, rgt) in [(0usize, 1usize), (1, 2)] {
        match base.find_zero_product(&homotopy[l], &homotopy[rgt]) {
            Some(id) => premises.ids.push(id),
            None => {
                return Ok((
                    Gate::Withhold(format!(
                        "no vanishing recorded for {}·{} in homotopy",
                        homotopy[l], homotopy[rgt]
                    )),
                    premises,
                    classes_into(classes),
                    homotopy,
                ))
            }
        }
    }
    Ok((Gate::Ok, premises, classes_into(classes), homotopy))
}

fn classes_into(mut v: Vec<ElementRef>) -> [ElementRef; 3] {
    while v.len() < 3 {
        v.push(ElementRef {
            bidegree: (0, 0),
            coords: Vec::new(),
            name: String::new(),
        });
    }
    [v.remove(0), v.remove(0), v.remove(0)]
}

/// The E_r-page convergence rule.
pub fn rule_moss_r(
    base: &mut FactBase,
    a: &str,
    a2: &str,
    a3: &str,
    r: u32,
) -> Result<RuleOutcome, SseqError> {
    let (gate, mut premises, classes, homotopy) = gather(base, [a, a2, a3])?;
    match gate {
        Gate::Refuse(p) => return Ok(RuleOutcome::Refused { failing_premise: p }),
        Gate::Withhold(p) => return Ok(RuleOutcome::Withheld { unknown_premise: p }),
        Gate::Ok => {}
    }
    let tower = &base.context.data.tower;
    tower.page(r)?;
    let elts: Vec<PageElement> = classes
        .iter()
        .map(|c| {
            // project the page-1 element to page r
            tower
                .project_element(&base.context.element_of(c), 1, r)
                .ok_or(SseqError::DoesNotSurvive)
        })
        .collect::<Result<_, _>>()?;

    // crossing at the degrees of the two products, at page r
    let d12 = (
        elts[0].bidegree.0 + elts[1].bidegree.0,
        elts[0].bidegree.1 + elts[1].bidegree.1,
    );
    let d23 = (
        elts[1].bidegree.0 + elts[2].bidegree.0,
        elts[1].bidegree.1 + elts[2].bidegree.1,
    );
    for (label, deg) in [("a·a'", d12), ("a'·a''", d23)] {
        match crossing_premise(base, label, deg, r, &mut premises.checks) {
            Gate::Ok => {}
            Gate::Refuse(p) => return Ok(RuleOutcome::Refused { failing_premise: p }),
            Gate::Withhold(p) => return Ok(RuleOutcome::Withheld { unknown_premise: p }),
        }
    }

    // products hit by d_r and the Massey coset itself
    let coset = match massey_on_page(tower, r, &elts[0], &elts[1], &elts[2]) {
        Ok(c) => c,
        Err(SseqError::MasseyUndefined { which, bidegree, class }) => {
            return Ok(RuleOutcome::Refused {
                failing_premise: format!(
                    "{which} at {bidegree:?} is not hit by d_{r} (class {class:?})"
                ),
            })
        }
        Err(SseqError::NotACycle(bid)) => {
            return Ok(RuleOutcome::Refused {
                failing_premise: format!("input at {bid:?} supports d_{r}"),
            })
        }
        Err(e) => return Err(e),
    };
    premises.checks.push(Check {
        name: "a·a' and a'·a'' hit by d_r".into(),
        outcome: "verified while solving".into(),
    });

    let strict = coset.is_strict();
    let rep = coset.canonical_rep();
    let next_page = tower.page(r + 1)?;
    let rep_name = next_page.element_name(&PageElement {
        bidegree: coset.bidegree,
        coords: rep.clone(),
    });
    let rep_e1 = e1_ref(
        base,
        (r + 1 - tower.pages[0].r) as usize,
        &PageElement {
            bidegree: coset.bidegree,
            coords: rep.clone(),
        },
    );
    let detected_name = base.context.data.detections.iter().find_map(|d| {
        (d.bidegree == rep_e1.bidegree && d.coords == rep_e1.coords).then(|| d.homotopy.clone())
    });

    let massey_fact = Fact::MasseyContains {
        inputs: classes.clone(),
        coset: CosetDesc {
            page: r + 1,
            bidegree: coset.bidegree,
            rep: rep.clone(),
            rep_name: rep_name.clone(),
            indeterminacy: (0..coset.indeterminacy.rows())
                .map(|i| coset.indeterminacy.row_dense(i))
                .collect(),
            strict,
        },
    };
    let witness = BracketWitness {
        element: if strict { detected_name.clone() } else { None },
        detected_by: Some(rep_e1.clone()),
        indeterminacy: Vec::new(),
        strict,
        description: if strict {
            format!("the permanent cycle {rep_name} detects it")
        } else {
            format!("detected by a permanent cycle in the coset of {rep_name}")
        },
    };
    let bracket_fact = Fact::BracketContains {
        bracket: homotopy.clone(),
        witness,
    };
    let mut conclusions = vec![massey_fact, bracket_fact];
    if strict && rep_e1.coords.iter().any(|&c| c != 0) {
        conclusions.push(Fact::PermanentCycle { class: rep_e1 });
    }
    let ded = base.record_deduction(
        "moss_r",
        MOSS_R_STATEMENT,
        premises.ids,
        premises.checks,
        conclusions,
    )?;
    Ok(RuleOutcome::Applied { deduction: ded })
}

/// The E_1-page convergence rule: Toda brackets of associated-graded
/// classes in place of Massey products.
pub fn rule_moss_e1(
    base: &mut FactBase,
    a: &str,
    a2: &str,
    a3: &str,
) -> Result<RuleOutcome, SseqError> {
    let (gate, mut premises, classes, homotopy) = gather(base, [a, a2, a3])?;
    match gate {
        Gate::Refuse(p) => return Ok(RuleOutcome::Refused { failing_premise: p }),
        Gate::Withhold(p) => return Ok(RuleOutcome::Withheld { unknown_premise: p }),
        Gate::Ok => {}
    }
    let e1 = &base.context.data.tower.pages[0];
    let elts: Vec<PageElement> = classes.iter().map(|c| base.context.element_of(c)).collect();

    // products vanish on the E_1 page
    for (l, rgt, label) in [(0usize, 1usize, "a·a'"), (1, 2, "a'·a''")] {
        let prod = e1.product(&elts[l], &elts[rgt]);
        if !prod.is_zero() {
            return Ok(RuleOutcome::Refused {
                failing_premise: format!("{label} is nonzero on the E_1 page"),
            });
        }
        premises.checks.push(Check {
            name: format!("{label} = 0 on E_1"),
            outcome: "verified".into(),
        });
    }

    // the E_1 bracket fact
    let Some((bracket_id, coset)) = base.find_e1_bracket([a, a2, a3]) else {
        return Ok(RuleOutcome::Withheld {
            unknown_premise: format!("no E_1 bracket recorded for ⟨{a},{a2},{a3}⟩"),
        });
    };
    premises.ids.push(bracket_id);

    // crossing ranges at the degrees of both products, page-0 form
    let d12 = (
        elts[0].bidegree.0 + elts[1].bidegree.0,
        elts[0].bidegree.1 + elts[1].bidegree.1,
    );
    let d23 = (
        elts[1].bidegree.0 + elts[2].bidegree.0,
        elts[1].bidegree.1 + elts[2].bidegree.1,
    );
    for (label, deg) in [("a·a'", d12), ("a'·a''", d23)] {
        match crossing_premise(base, label, deg, 0, &mut premises.checks) {
            Gate::Ok => {}
            Gate::Refuse(p) => return Ok(RuleOutcome::Refused { failing_premise: p }),
            Gate::Withhold(p) => return Ok(RuleOutcome::Withheld { unknown_premise: p }),
        }
    }

    let rep_ref = ElementRef {
        bidegree: coset.bidegree,
        coords: coset.rep.clone(),
        name: coset.rep_name.clone(),
    };
    let detected_name = base.context.data.detections.iter().find_map(|d| {
        (d.bidegree == rep_ref.bidegree && d.coords == rep_ref.coords)
            .then(|| d.homotopy.clone())
    });
    let witness = BracketWitness {
        element: if coset.strict { detected_name } else { None },
        detected_by: Some(rep_ref.clone()),
        indeterminacy: Vec::new(),
        strict: coset.strict,
        description: if coset.strict {
            format!("the permanent cycle {} detects it", coset.rep_name)
        } else {
            format!("detected by a permanent cycle in the coset of {}", coset.rep_name)
        },
    };
    let mut conclusions = vec![Fact::BracketContains {
        bracket: homotopy.clone(),
        witness,
    }];
    if coset.strict && rep_ref.coords.iter().any(|&c| c != 0) {
        conclusions.push(Fact::PermanentCycle { class: rep_ref });
    }
    let ded = base.record_deduction(
        "moss_e1",
        MOSS_E1_STATEMENT,
        premises.ids,
        premises.checks,
        conclusions,
    )?;
    Ok(RuleOutcome::Applied { deduction: ded })
}

/// The shuffle rule `x·⟨a,b,c⟩ = ⟨x,a,b⟩·c`. Auxiliary: the identity is
/// assumed, not derived; conclusions are labelled accordingly. Equality
/// requires the right bracket strict or its indeterminacy annihilated by
/// `c`; otherwise only a containment is emitted.
pub fn rule_shuffle(
    base: &mut FactBase,
    x: &str,
    bracket: [&str; 3],
) -> Result<RuleOutcome, SseqError> {
    let [a, b, c] = bracket;
    let Some((left_id, left_witness)) = base.find_bracket_contains([a, b, c]) else {
        return Ok(RuleOutcome::Withheld {
            unknown_premise: format!("⟨{a},{b},{c}⟩ has no recorded content"),
        });
    };
    let Some(w1) = left_witness.element.clone() else {
        return Ok(RuleOutcome::Withheld {
            unknown_premise: format!("⟨{a},{b},{c}⟩ content is not pinned to an element"),
        });
    };
    let Some((right_id, right_witness)) = base.find_bracket_contains([x, a, b]) else {
        return Ok(RuleOutcome::Withheld {
            unknown_premise: format!("⟨{x},{a},{b}⟩ has no recorded content"),
        });
    };
    let Some(w2) = right_witness.element.clone() else {
        return Ok(RuleOutcome::Withheld {
            unknown_premise: format!("⟨{x},{a},{b}⟩ content is not pinned to an element"),
        });
    };
    let mut premises = vec![left_id, right_id];
    let mut checks = vec![Check {
        name: "shuffle identity".into(),
        outcome: "assumed (auxiliary rule)".into(),
    }];

    // equality mode: the right indeterminacy must die against c
    let mut equality = true;
    if !right_witness.strict {
        for gen in &right_witness.indeterminacy {
            match base
                .find_zero_product(gen, c)
                .or_else(|| base.find_zero_product(c, gen))
            {
                Some(id) => {
                    premises.push(id);
                    checks.push(Check {
                        name: format!("indeterminacy generator {gen} annihilated by {c}"),
                        outcome: "recorded".into(),
                    });
                }
                None => {
                    equality = false;
                    checks.push(Check {
                        name: format!("indeterminacy generator {gen} annihilated by {c}"),
                        outcome: "not established".into(),
                    });
                }
            }
        }
    }
    if !left_witness.strict && !left_witness.indeterminacy.is_empty() {
        // the left indeterminacy must die against x
        for gen in &left_witness.indeterminacy {
            match base
                .find_zero_product(x, gen)
                .or_else(|| base.find_zero_product(gen, x))
            {
                Some(id) => premises.push(id),
                None => equality = false,
            }
        }
    }

    let rhs_value = base.context.product_name(&w2, c);
    let conclusion = if equality {
        let Some(value) = rhs_value else {
            return Ok(RuleOutcome::Withheld {
                unknown_premise: format!("no recorded homotopy product for {w2}·{c}"),
            });
        };
        Fact::HiddenExtension {
            factor: x.to_string(),
            on: w1.clone(),
            equals: value,
            equality: true,
        }
    } else {
        Fact::HiddenExtension {
            factor: x.to_string(),
            on: w1.clone(),
            equals: format!("⟨{x},{a},{b}⟩·{c}"),
            equality: false,
        }
    };
    let ded = base.record_deduction("shuffle", SHUFFLE_STATEMENT, premises, checks, vec![conclusion])?;
    Ok(RuleOutcome::Applied { deduction: ded })
}
