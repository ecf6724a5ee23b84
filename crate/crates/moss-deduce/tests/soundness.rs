//! Soundness gates: rules refuse on false premises, withhold on unknown
//! ones, and replaying a deduction from its premises reproduces the
//! conclusions.

use filtered_dga::DgaBuilder;
use moss_deduce::{
    explain, rule_moss_r, ChartContext, ElementRef, Fact, FactBase, Provenance, RuleOutcome,
};
use ring_linear::Modulus;
use sseq_core::{dga_tower, SseqData};
use std::collections::BTreeMap;

/// d(y) = x² with filtration(x) = 1, filtration(x²) = 2, y in filtration 1:
/// the E_1 page has a d_1 from [y] to [x²], and ⟨x,x,x⟩ is a
/// Massey-product candidate at r = 1.
fn toy_context() -> ChartContext {
    let zm = Modulus::new(2, 1).unwrap();
    let a = DgaBuilder::new(zm, 3, "1")
        .gen("1", 0, 0)
        .gen("x", 1, 1)
        .gen("xx", 2, 2)
        .gen("y", 3, 1)
        .product("x", "x", &[(1, "xx")])
        .d("y", &[(1, "xx")])
        .build()
        .unwrap();
    assert!(a.validate().is_valid());
    let tower = dga_tower(&a, 4).unwrap();
    let mut classes = BTreeMap::new();
    for (name, bid) in [("1", (0, 0)), ("x", (1, 1)), ("xx", (2, 2)), ("y", (3, 1))] {
        let rank = tower.pages[0].rank_at(bid);
        if rank == 0 {
            continue;
        }
        classes.insert(
            name.to_string(),
            ElementRef {
                bidegree: bid,
                coords: vec![1],
                name: name.to_string(),
            },
        );
    }
    ChartContext {
        data: SseqData {
            tower,
            complete_through: None,
            detections: Vec::new(),
        },
        classes,
        homotopy_products: BTreeMap::new(),
    }
}

fn base_with_axioms() -> FactBase {
    let mut base = FactBase::new(toy_context());
    let x = base.context.class("x").unwrap().clone();
    base.assert_fact(
        Fact::Detects {
            class: x,
            homotopy: "ξ".into(),
            filtration: 1,
        },
        Provenance::Axiom,
    )
    .unwrap();
    base.assert_fact(
        Fact::ZeroProductHomotopy {
            left: "ξ".into(),
            right: "ξ".into(),
        },
        Provenance::Axiom,
    )
    .unwrap();
    base
}

#[test]
fn rule_applies_with_all_premises() {
    let mut base = base_with_axioms();
    let out = rule_moss_r(&mut base, "x", "x", "x", 1).unwrap();
    let RuleOutcome::Applied { deduction } = out else {
        panic!("rule should fire, got {out:?}");
    };
    let trace = explain(&base, deduction).unwrap();
    assert!(trace.contains("moss_r"));
    assert!(trace.contains("crossing"));
    assert!(trace.contains("⟨ξ,ξ,ξ⟩"));
    // conclusions recorded with provenance pointing at the deduction
    let derived = base
        .query(|f| matches!(f, Fact::MasseyContains { .. }))
        .len();
    assert_eq!(derived, 1);
}

#[test]
fn deleting_each_axiom_stops_the_rule() {
    // no detection fact
    {
        let mut base = base_with_axioms();
        let detect_id = base
            .query(|f| matches!(f, Fact::Detects { .. }))
            .first()
            .map(|s| s.id)
            .unwrap();
        base.retract(detect_id).unwrap();
        let out = rule_moss_r(&mut base, "x", "x", "x", 1).unwrap();
        assert!(
            matches!(out, RuleOutcome::Withheld { ref unknown_premise } if unknown_premise.contains("detection")),
            "expected withholding without detection, got {out:?}"
        );
    }
    // no vanishing-product fact
    {
        let mut base = base_with_axioms();
        let zp_id = base
            .query(|f| matches!(f, Fact::ZeroProductHomotopy { .. }))
            .first()
            .map(|s| s.id)
            .unwrap();
        base.retract(zp_id).unwrap();
        let out = rule_moss_r(&mut base, "x", "x", "x", 1).unwrap();
        assert!(
            matches!(out, RuleOutcome::Withheld { ref unknown_premise } if unknown_premise.contains("vanishing")),
            "expected withholding without the product fact, got {out:?}"
        );
    }
}

#[test]
fn rule_refuses_on_non_permanent_input() {
    let mut base = base_with_axioms();
    // y supports d_1: it is not a permanent cycle, and using it as an
    // input must refuse (after registering detection facts for it).
    let y = base.context.class("y").unwrap().clone();
    let err = base.assert_fact(
        Fact::Detects {
            class: y,
            homotopy: "υ".into(),
            filtration: 1,
        },
        Provenance::Axiom,
    );
    // the consistency check already rejects the detection of a dying class
    assert!(err.is_err());
    let out = rule_moss_r(&mut base, "y", "x", "x", 1).unwrap();
    assert!(
        matches!(out, RuleOutcome::Refused { ref failing_premise } if failing_premise.contains("differential")),
        "expected refusal for a dying input, got {out:?}"
    );
}

#[test]
fn massey_not_hit_refuses() {
    // Drop the differential source: with d = 0 everywhere, x·x = [x²] is
    // nonzero on E_1 and never hit, so the rule must refuse.
    let zm = Modulus::new(2, 1).unwrap();
    let a = DgaBuilder::new(zm, 3, "1")
        .gen("1", 0, 0)
        .gen("x", 1, 1)
        .gen("xx", 2, 2)
        .product("x", "x", &[(1, "xx")])
        .build()
        .unwrap();
    let tower = dga_tower(&a, 3).unwrap();
    let mut classes = BTreeMap::new();
    classes.insert(
        "x".to_string(),
        ElementRef {
            bidegree: (1, 1),
            coords: vec![1],
            name: "x".into(),
        },
    );
    let mut base = FactBase::new(ChartContext {
        data: SseqData {
            tower,
            complete_through: None,
            detections: Vec::new(),
        },
        classes,
        homotopy_products: BTreeMap::new(),
    });
    let x = base.context.class("x").unwrap().clone();
    base.assert_fact(
        Fact::Detects {
            class: x,
            homotopy: "ξ".into(),
            filtration: 1,
        },
        Provenance::Axiom,
    )
    .unwrap();
    base.assert_fact(
        Fact::ZeroProductHomotopy {
            left: "ξ".into(),
            right: "ξ".into(),
        },
        Provenance::Axiom,
    )
    .unwrap();
    let out = rule_moss_r(&mut base, "x", "x", "x", 1).unwrap();
    assert!(
        matches!(out, RuleOutcome::Refused { ref failing_premise } if failing_premise.contains("not hit")),
        "expected refusal when the product is not hit, got {out:?}"
    );
}

#[test]
fn replay_reproduces_conclusions() {
    let mut base = base_with_axioms();
    let RuleOutcome::Applied { deduction } = rule_moss_r(&mut base, "x", "x", "x", 1).unwrap()
    else {
        panic!("rule should fire");
    };
    let first: Vec<Fact> = base
        .deduction(deduction)
        .unwrap()
        .conclusions
        .iter()
        .map(|&id| base.facts()[id].fact.clone())
        .collect();
    // a fresh base with the same axioms reproduces the conclusions bit for bit
    let mut again = base_with_axioms();
    let RuleOutcome::Applied { deduction: d2 } = rule_moss_r(&mut again, "x", "x", "x", 1).unwrap()
    else {
        panic!("rule should fire again");
    };
    let second: Vec<Fact> = again
        .deduction(d2)
        .unwrap()
        .conclusions
        .iter()
        .map(|&id| again.facts()[id].fact.clone())
        .collect();
    assert_eq!(first, second);
}
