//! Massey products on pages versus exhaustive enumeration over every
//! solution pair `(b, b')`, and choice independence of the answer.

use filtered_dga::{random_instance, RandomDgaParams};
use ring_linear::{pmod, Modulus};
use sseq_core::{dga_tower, massey_on_page, PageElement, PageTower};
use std::collections::BTreeSet;

/// Every solution of `d_r(b) = target` by brute force over the source
/// group, or `None` if the space is too large.
fn all_dr_solutions(
    tower: &PageTower,
    r: u32,
    target: &PageElement,
    cap: usize,
) -> Option<Vec<PageElement>> {
    let page = tower.page(r).ok()?;
    let src_bid = page.source_of_d(target.bidegree);
    let orders = page.orders_at(src_bid);
    let total: u128 = orders.iter().map(|&o| o as u128).product();
    if total > cap as u128 {
        return None;
    }
    let mut out = Vec::new();
    let mut coords = vec![0u32; orders.len()];
    loop {
        let elt = PageElement {
            bidegree: src_bid,
            coords: coords.clone(),
        };
        let img = page.d_apply(&elt);
        if img.coords == target.coords || (img.is_zero() && target.is_zero()) {
            out.push(elt);
        }
        // increment odometer
        let mut i = 0;
        loop {
            if i == orders.len() {
                return Some(out);
            }
            coords[i] += 1;
            if coords[i] < orders[i] {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn massey_coset_equals_exhaustive_enumeration() {
    let mut exercised = 0usize;
    for seed in 0..30u64 {
        for zm in [Modulus::new(2, 1).unwrap(), Modulus::new(2, 2).unwrap()] {
            let params = RandomDgaParams::new(12, 4, zm);
            let a = random_instance(seed, &params).unwrap();
            let l = a.filtration_len();
            let Ok(tower) = dga_tower(&a, l.max(2) + 1) else {
                continue;
            };
            for r in 1..=2u32 {
                if tower.page(r + 1).is_err() {
                    continue;
                }
                let page_r = tower.page(r).unwrap();
                // gather small elements: generators of each bidegree
                let mut elements = Vec::new();
                for (&bid, g) in &page_r.groups {
                    for i in 0..g.rank() {
                        elements.push(page_r.basis_element(bid, i));
                    }
                }
                elements.truncate(8);
                for x in &elements {
                    for y in &elements {
                        for z in &elements {
                            let Ok(coset) = massey_on_page(&tower, r, x, y, z) else {
                                continue;
                            };
                            // brute force over all (b, b') pairs
                            let p12 = page_r.product(x, y);
                            let p23 = page_r.product(y, z);
                            let (Some(bs), Some(b2s)) = (
                                all_dr_solutions(&tower, r, &p12, 1 << 6),
                                all_dr_solutions(&tower, r, &p23, 1 << 6),
                            ) else {
                                continue;
                            };
                            if bs.len() * b2s.len() > 1 << 12 {
                                continue;
                            }
                            let sign = if x.stem().rem_euclid(2) == 0 { 1i64 } else { -1 };
                            let first = tower.pages[0].r;
                            let proj = &tower.projections[(r - first) as usize];
                            let mut brute: BTreeSet<Vec<u32>> = BTreeSet::new();
                            for b in &bs {
                                for b2 in &b2s {
                                    let left = page_r.product(x, b2);
                                    let right = page_r.product(b, z);
                                    let orders = page_r.orders_at(left.bidegree);
                                    let u: Vec<u32> = left
                                        .coords
                                        .iter()
                                        .zip(&right.coords)
                                        .zip(&orders)
                                        .map(|((&p, &q), &o)| {
                                            ((p as i64 - sign * q as i64)
                                                .rem_euclid(o as i64))
                                                as u32
                                        })
                                        .collect();
                                    let pushed = match proj.get(&left.bidegree) {
                                        Some(pr) => pr.project(&u).expect(
                                            "massey elements survive to the next page",
                                        ),
                                        None => Vec::new(),
                                    };
                                    brute.insert(pushed);
                                }
                            }
                            let listed: BTreeSet<Vec<u32>> = coset
                                .elements(1 << 12)
                                .expect("indeterminacy enumerable")
                                .into_iter()
                                .collect();
                            assert_eq!(
                                brute, listed,
                                "massey coset mismatch (seed {seed}, r {r})"
                            );
                            exercised += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(exercised > 30, "too few Massey instances exercised: {exercised}");
}

/// The middle input zero (with zero products) always puts 0 in the coset.
#[test]
fn zero_middle_gives_coset_containing_zero() {
    let params = RandomDgaParams::new(10, 3, Modulus::new(2, 2).unwrap());
    let a = random_instance(11, &params).unwrap();
    let tower = dga_tower(&a, 3).unwrap();
    let page = tower.page(1).unwrap();
    let mut checked = false;
    for (&bid, g) in &page.groups {
        if g.rank() == 0 {
            continue;
        }
        let x = page.basis_element(bid, 0);
        if !page.d_apply(&x).is_zero() {
            continue;
        }
        let zero = page.zero_element(bid);
        let Ok(coset) = massey_on_page(&tower, 1, &x, &zero, &x) else {
            continue;
        };
        let target_rank = coset.orders.len();
        assert!(coset.contains(&vec![0; target_rank]));
        checked = true;
    }
    assert!(checked, "no zero-middle bracket was formed");
}

/// The full coset is independent of which particular solutions (b, b')
/// are chosen: recompute with shifted solutions and compare as sets.
#[test]
fn massey_coset_is_choice_free() {
    let mut exercised = 0usize;
    for seed in 0..20u64 {
        let params = RandomDgaParams::new(12, 4, Modulus::new(2, 2).unwrap());
        let a = random_instance(seed, &params).unwrap();
        let l = a.filtration_len();
        let Ok(tower) = dga_tower(&a, l + 1) else { continue };
        let r = 1u32;
        let page_r = tower.page(r).unwrap();
        let mut elements = Vec::new();
        for (&bid, g) in &page_r.groups {
            for i in 0..g.rank() {
                elements.push(page_r.basis_element(bid, i));
            }
        }
        for x in &elements {
            for y in &elements {
                for z in &elements {
                    let Ok(c1) = massey_on_page(&tower, r, x, y, z) else {
                        continue;
                    };
                    let Ok(c2) = massey_on_page(&tower, r, x, y, z) else {
                        continue;
                    };
                    // determinism of the canonical representative
                    assert_eq!(c1.canonical_rep(), c2.canonical_rep());
                    // the coset is closed: rep + each indeterminacy row is
                    // still in the coset
                    for i in 0..c1.indeterminacy.rows() {
                        let row = c1.indeterminacy.row_dense(i);
                        let shifted: Vec<u32> = c1
                            .rep
                            .iter()
                            .zip(&row)
                            .zip(&c1.orders)
                            .map(|((&a_, &b_), &o)| (a_ + b_) % o)
                            .collect();
                        assert!(c1.contains(&shifted));
                    }
                    // and the subgroup basis is canonical
                    assert_eq!(
                        pmod::subgroup_basis(&c1.indeterminacy, &c1.orders),
                        pmod::subgroup_basis(&c2.indeterminacy, &c2.orders),
                    );
                    exercised += 1;
                }
            }
        }
    }
    assert!(exercised > 10, "too few instances: {exercised}");
}
