//! The two routes to `E_r` agree: the direct `Z_r / B_r` subquotient and
//! iterated page turning, compared through the canonical identification on
//! E_1 coordinates, exactly (group orders and differentials).

use filtered_dga::{random_instance, RandomDgaParams, Window};
use ring_linear::{pmod, Matrix, Modulus};
use sseq_core::{e1_from_filtered, er_page, pages_agree};

#[test]
fn er_equals_iterated_turning_across_seeds() {
    for seed in 0..25u64 {
        for zm in [
            Modulus::new(2, 1).unwrap(),
            Modulus::new(2, 3).unwrap(),
            Modulus::new(3, 2).unwrap(),
        ] {
            let params = RandomDgaParams::new(12, 4, zm);
            let a = random_instance(seed, &params).unwrap();
            if let Err(e) = pages_agree(&a, 6) {
                panic!("seed {seed} over {zm:?}: {e}");
            }
        }
    }
}

#[test]
fn trivial_filtration_concentrates_in_f_zero() {
    let params = RandomDgaParams::new(8, 1, Modulus::new(2, 2).unwrap());
    for seed in 0..5u64 {
        let a = random_instance(seed, &params).unwrap();
        let (e1, _) = e1_from_filtered(&a);
        for (&(n, f), g) in &e1.groups {
            if g.orders.is_empty() {
                continue;
            }
            assert_eq!(f, 0, "trivial filtration must concentrate at f = 0");
            let h = a.homology(n);
            assert_eq!(g.orders, h.orders(), "E_1 must be H(A) at stem {n}");
        }
        assert!(e1.differentials.is_empty(), "no d_1 with one filtration step");
    }
}

/// For r past the filtration length, the page stabilizes at the associated
/// graded of H(A) under the image filtration.
#[test]
fn stable_page_is_graded_homology() {
    for seed in 0..10u64 {
        let params = RandomDgaParams::new(10, 4, Modulus::new(2, 2).unwrap());
        let a = random_instance(seed, &params).unwrap();
        let l = a.filtration_len();
        let er = er_page(&a, l + 2).unwrap();
        let degs: Vec<i32> = {
            let mut d: Vec<i32> = a.generators().iter().map(|g| g.degree).collect();
            d.sort();
            d.dedup();
            d
        };
        for &n in &degs {
            let h = a.homology(n);
            for f in 0..l {
                // image filtration: im(H(X_f)) / im(H(X_{f+1})) inside H(A)
                let image_rows = |s: u32| -> Matrix {
                    let (sq, hs) = a.window_homology(Window::tail(s, l), n);
                    let mut rows = Matrix::zero(a.modulus(), 0, h.rank());
                    for i in 0..hs.rank() {
                        let amb = sq.include(&hs.generator_rep(i), a.dim());
                        rows.push_row(&h.class_of(&amb).unwrap());
                    }
                    rows
                };
                let upper = image_rows(f);
                let lower = image_rows(f + 1);
                let quot = ring_linear::SubquotientPresentation::new(
                    &pmod::subgroup_basis(&upper, h.orders()),
                    &pmod::subgroup_basis(&lower, h.orders()),
                )
                .unwrap();
                let mut expected = quot.orders().to_vec();
                expected.sort_unstable();
                let mut got = er.page.orders_at((n, f as i32));
                got.sort_unstable();
                assert_eq!(
                    got, expected,
                    "E_∞ should be gr H(A) (seed {seed}, n={n}, f={f})"
                );
            }
        }
    }
}
