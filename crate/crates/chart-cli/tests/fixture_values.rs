//! Fixture-level values: the mod-2^n bracket, the slice pairing, and
//! round-trip stability of every shipped description.

use chart_cli::convert::{chart_e1, chart_fact_base};
use chart_cli::fixtures::{hz2n, slice_fragment, toy_dga};
use chart_cli::schema::ChartDocument;
use filtered_dga::{parse_dga, serialize_dga, toda_bracket, Window, WindowClass};
use sseq_core::PageElement;

/// `⟨ρ, 2, 2^{n-1}⟩` in the mod-2^n model contains the order-two class
/// `2^{n-1}τ`.
#[test]
fn hz2n_bracket_contains_two_to_n_minus_one_tau() {
    for n in 2..=4u32 {
        let a = hz2n(n);
        let full = Window::new(0, a.filtration_len());
        let class_of = |chain: &[u32], degree: i32| -> WindowClass {
            let (sq, h) = a.window_homology(full, degree);
            WindowClass {
                window: full,
                degree,
                coords: h.class_of(&sq.restrict(chain)).unwrap(),
            }
        };
        let unit = a.unit_chain();
        let rho = {
            let mut c = vec![0; a.dim()];
            c[a.generator_index("ρ").unwrap()] = 1;
            c
        };
        let tau = {
            let mut c = vec![0; a.dim()];
            c[a.generator_index("τ").unwrap()] = 1;
            c
        };
        let zm = a.modulus();
        let two = unit.iter().map(|&x| zm.mul(2, x)).collect::<Vec<_>>();
        let half = unit
            .iter()
            .map(|&x| zm.mul(zm.pow_p(n - 1), x))
            .collect::<Vec<_>>();
        let coset = toda_bracket(
            &a,
            &class_of(&rho, -1),
            &class_of(&two, 0),
            &class_of(&half, 0),
        )
        .unwrap();
        let target = {
            let chain: Vec<u32> = tau.iter().map(|&x| zm.mul(zm.pow_p(n - 1), x)).collect();
            class_of(&chain, 0)
        };
        assert!(
            target.coords.iter().any(|&c| c != 0),
            "2^{{n-1}}τ must be nonzero in homology"
        );
        assert!(
            coset.contains(&target.coords),
            "⟨ρ, 2, 2^{{n-1}}⟩ must contain 2^{{n-1}}τ for n = {n}"
        );
    }
}

/// The slice pairing keeps ρ²·τα₁ - the nonzero class the d_1 hits.
#[test]
fn slice_pairing_has_rho_squared_tau_alpha() {
    let doc = slice_fragment();
    let (page, index) = chart_e1(&doc).unwrap();
    let elt = |name: &str| {
        let (bid, i) = index.position[name];
        let mut coords = vec![0u32; index.bidegrees[&bid].len()];
        coords[i] = 1;
        PageElement {
            bidegree: bid,
            coords,
        }
    };
    let prod = page.product(&elt("ρ²"), &elt("τα₁"));
    assert!(!prod.is_zero(), "ρ²·τα₁ must be a nonzero E_1 class");
    assert_eq!(page.element_name(&prod), "ρ²τα₁");
    // and it is exactly the d_1 image of τ²
    let d = page.d_apply(&elt("τ²"));
    assert_eq!(d.coords, prod.coords);
}

/// The hit class vanishes on the next page: the d_1 image dies at E_2.
#[test]
fn hit_class_dies_at_e2() {
    let doc = slice_fragment();
    let base = chart_fact_base(&doc).unwrap();
    let e2 = base.context.data.tower.page(2).unwrap();
    assert!(
        e2.group((-1, 1)).is_none(),
        "ρ²τα₁ must be gone on page 2"
    );
    // while the kernel part of (0,0) survives with the expected orders
    let mut orders = e2.orders_at((0, 0));
    orders.sort_unstable();
    assert_eq!(orders, vec![2, 2]);
}

#[test]
fn detection_annotations_resolve() {
    let doc = slice_fragment();
    let base = chart_fact_base(&doc).unwrap();
    let alpha1 = base.context.class("α₁").unwrap();
    let hit = sseq_core::detects(&base.context.data, &base.context.element_of(alpha1))
        .unwrap()
        .expect("α₁ carries an annotation");
    assert_eq!(hit.homotopy, "η");
    // a dying class cannot detect: τ² supports d_1
    let tau2 = base.context.class("τ²").unwrap();
    let none = sseq_core::detects(&base.context.data, &base.context.element_of(tau2)).unwrap();
    assert!(none.is_none());
}

#[test]
fn fixtures_round_trip() {
    let doc = slice_fragment();
    let text = doc.serialize();
    let again = ChartDocument::parse(&text).unwrap();
    assert_eq!(text, again.serialize());

    for dga in [toy_dga(), hz2n(3)] {
        let text = serialize_dga(&dga);
        let again = parse_dga(&text).unwrap();
        assert_eq!(text, serialize_dga(&again));
    }
}
