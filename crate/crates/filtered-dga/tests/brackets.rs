//! Set-level verification of Toda brackets against exhaustive enumeration
//! of all nullhomotopy pairs, and the filtered-bracket projection property.

use filtered_dga::{
    homology_product, random_instance, toda_bracket, toda_filtered, FilteredDga,
    RandomDgaParams, Window, WindowClass,
};
use ring_linear::Modulus;
use std::collections::BTreeSet;

/// All chains of the given degree in a window whose differential equals
/// `target` (local coordinates). Pure brute force, capped.
fn all_bounding_chains(
    a: &FilteredDga,
    window: Window,
    degree: i32,
    target_local: &[u32],
    cap: usize,
) -> Option<Vec<Vec<u32>>> {
    let sq = a.subquotient(window.start, window.len);
    let m = a.modulus().m() as u64;
    let slice = sq.complex.degree_indices(degree + 1);
    let total = (m as f64).powi(slice.len() as i32);
    if total > cap as f64 {
        return None;
    }
    let mut out = Vec::new();
    let count = (m as u128).pow(slice.len() as u32);
    for code in 0..count {
        let mut c = code;
        let mut chain = vec![0u32; sq.complex.dim()];
        for &i in &slice {
            chain[i] = (c % m as u128) as u32;
            c /= m as u128;
        }
        if sq.complex.d_chain(&chain) == target_local.to_vec() {
            out.push(sq.include(&chain, a.dim()));
        }
    }
    Some(out)
}

fn full_window(a: &FilteredDga) -> Window {
    Window::new(0, a.filtration_len())
}

fn homology_generators(a: &FilteredDga, degree: i32) -> Vec<WindowClass> {
    let h = a.homology(degree);
    (0..h.rank())
        .map(|i| {
            let mut coords = h.zero_class();
            coords[i] = 1;
            WindowClass {
                window: full_window(a),
                degree,
                coords,
            }
        })
        .collect()
}

fn is_zero_class(c: &WindowClass) -> bool {
    c.coords.iter().all(|&x| x == 0)
}

/// Set-level oracle (seed 4 and a sweep): the coset returned by `toda_bracket`
/// equals the set of classes of `a·F - (-1)^{|a|} G·c` over every pair of
/// bounding chains, whenever the brute-force space is enumerable.
#[test]
fn bracket_set_equals_exhaustive_enumeration() {
    let mut exercised = 0usize;
    for seed in [4u64, 0, 1, 2, 3, 5, 6, 7] {
        for zm in [Modulus::new(2, 1).unwrap(), Modulus::new(2, 2).unwrap()] {
            let params = RandomDgaParams::new(9, 3, zm);
            let a = random_instance(seed, &params).unwrap();
            let degs: Vec<i32> = {
                let mut d: Vec<i32> = a.generators().iter().map(|g| g.degree).collect();
                d.sort();
                d.dedup();
                d
            };
            let mut classes = Vec::new();
            for &n in &degs {
                classes.extend(homology_generators(&a, n));
            }
            for x in &classes {
                for y in &classes {
                    for z in &classes {
                        if [x, y, z].iter().all(|c| is_zero_class(c)) {
                            continue;
                        }
                        let p1 = homology_product(&a, x, y).unwrap();
                        let p2 = homology_product(&a, y, z).unwrap();
                        if !is_zero_class(&p1) || !is_zero_class(&p2) {
                            continue;
                        }
                        let coset = toda_bracket(&a, x, y, z).unwrap();

                        // brute force over all (F, G)
                        let zx = a.class_rep(x);
                        let zy = a.class_rep(y);
                        let zz = a.class_rep(z);
                        let f_win = Window::new(y.window.start + z.window.start, y.window.len);
                        let g_win = Window::new(x.window.start + y.window.start, x.window.len);
                        let fsq = a.subquotient(f_win.start, f_win.len);
                        let gsq = a.subquotient(g_win.start, g_win.len);
                        let ft = fsq.restrict(&a.product_chains(&zy, &zz));
                        let gt = gsq.restrict(&a.product_chains(&zx, &zy));
                        let (Some(fs), Some(gs)) = (
                            all_bounding_chains(&a, f_win, y.degree + z.degree, &ft, 1 << 12),
                            all_bounding_chains(&a, g_win, x.degree + y.degree, &gt, 1 << 12),
                        ) else {
                            continue;
                        };
                        if fs.len() * gs.len() > 1 << 12 {
                            continue;
                        }
                        let out_win = Window::new(
                            x.window.start + y.window.start + z.window.start,
                            x.window.len,
                        );
                        let (osq, oh) =
                            a.window_homology(out_win, x.degree + y.degree + z.degree + 1);
                        let zmv = a.modulus();
                        let sign = if x.degree.rem_euclid(2) == 0 { 1i64 } else { -1 };
                        let mut brute: BTreeSet<Vec<u32>> = BTreeSet::new();
                        for f in &fs {
                            for g in &gs {
                                let af = a.product_chains(&zx, f);
                                let gc = a.product_chains(g, &zz);
                                let u: Vec<u32> = af
                                    .iter()
                                    .zip(&gc)
                                    .map(|(&p, &q)| zmv.add(p, zmv.reduce(-sign * q as i64)))
                                    .collect();
                                brute.insert(oh.class_of(&osq.restrict(&u)).unwrap());
                            }
                        }
                        let listed: BTreeSet<Vec<u32>> = coset
                            .elements(1 << 12)
                            .expect("indeterminacy fits the cap")
                            .into_iter()
                            .collect();
                        assert_eq!(brute, listed, "coset mismatch (seed {seed})");
                        exercised += 1;
                    }
                }
            }
        }
    }
    assert!(exercised > 20, "too few bracket instances exercised: {exercised}");
}

/// Degenerate filtration (L = 1): the filtered bracket with r = 0 agrees
/// with the plain bracket.
#[test]
fn filtered_bracket_degenerates_to_plain() {
    for seed in 0..10u64 {
        let params = RandomDgaParams::new(8, 1, Modulus::new(2, 2).unwrap());
        let a = random_instance(seed, &params).unwrap();
        let degs: Vec<i32> = {
            let mut d: Vec<i32> = a.generators().iter().map(|g| g.degree).collect();
            d.sort();
            d.dedup();
            d
        };
        for &n in &degs {
            for x in homology_generators(&a, n) {
                for y in homology_generators(&a, n) {
                    let p1 = homology_product(&a, &x, &y).unwrap();
                    let p2 = homology_product(&a, &y, &x).unwrap();
                    if !is_zero_class(&p1) || !is_zero_class(&p2) {
                        continue;
                    }
                    let plain = toda_bracket(&a, &x, &y, &x).unwrap();
                    let filt = toda_filtered(&a, &x, &y, &x, 0).unwrap();
                    assert_eq!(plain.canonical_rep(), filt.canonical_rep());
                    assert_eq!(
                        ring_linear::pmod::subgroup_basis(&plain.indeterminacy, &plain.orders),
                        ring_linear::pmod::subgroup_basis(&filt.indeterminacy, &filt.orders),
                    );
                }
            }
        }
    }
}

/// Filtered brackets (seed 5 etc.): whenever the constrained bounding
/// chains exist, the bracket is produced, and its image in H(X) lands
/// inside the plain Toda bracket of the unfiltered classes.
#[test]
fn filtered_bracket_projects_into_plain_bracket() {
    let mut produced = 0usize;
    for seed in [5u64, 0, 1, 2, 3, 8] {
        let params = RandomDgaParams::new(10, 4, Modulus::new(2, 2).unwrap());
        let a = random_instance(seed, &params).unwrap();
        let l = a.filtration_len();
        // classes of tower pieces, one filtration level at a time
        let mut tower_classes: Vec<WindowClass> = Vec::new();
        for s in 0..l {
            let win = Window::tail(s, l);
            let mut degs: Vec<i32> = a.generators().iter().map(|g| g.degree).collect();
            degs.sort();
            degs.dedup();
            for &n in &degs {
                let (_, h) = a.window_homology(win, n);
                for i in 0..h.rank() {
                    let mut coords = h.zero_class();
                    coords[i] = 1;
                    tower_classes.push(WindowClass {
                        window: win,
                        degree: n,
                        coords,
                    });
                }
            }
        }
        tower_classes.truncate(10);
        let mut attempts = 0usize;
        'seed: for r in 0..=2u32 {
            for x in &tower_classes {
                for y in &tower_classes {
                    for z in &tower_classes {
                        attempts += 1;
                        if attempts > 1500 {
                            break 'seed;
                        }
                        let Ok(filt) = toda_filtered(&a, x, y, z, r) else {
                            continue;
                        };
                        produced += 1;
                        // unfiltered classes: images in H(A)
                        let full = full_window(&a);
                        let to_full = |c: &WindowClass| -> Option<WindowClass> {
                            let rep = a.class_rep(c);
                            let h = a.homology(c.degree);
                            Some(WindowClass {
                                window: full,
                                degree: c.degree,
                                coords: h.class_of(&rep).ok()?,
                            })
                        };
                        let (Some(fx), Some(fy), Some(fz)) = (to_full(x), to_full(y), to_full(z))
                        else {
                            continue;
                        };
                        let Ok(plain) = toda_bracket(&a, &fx, &fy, &fz) else {
                            continue;
                        };
                        // push the filtered coset into H(A)
                        let h_out = a.homology(filt.degree);
                        let (fsq, fh) = a.window_homology(filt.window, filt.degree);
                        let push = |coords: &[u32]| -> Vec<u32> {
                            let local = fh.rep(coords);
                            let amb = fsq.include(&local, a.dim());
                            h_out.class_of(&amb).unwrap()
                        };
                        assert!(
                            plain.contains(&push(&filt.rep)),
                            "projection misses plain bracket (seed {seed}, r {r})"
                        );
                        for gi in 0..filt.indeterminacy.rows() {
                            let row = filt.indeterminacy.row_dense(gi);
                            let mut elt = filt.rep.clone();
                            for (e, (&rv, &o)) in
                                elt.iter_mut().zip(row.iter().zip(&filt.orders))
                            {
                                *e = (*e + rv) % o;
                            }
                            assert!(
                                plain.contains(&push(&elt)),
                                "indeterminacy escapes plain bracket (seed {seed})"
                            );
                        }
                    }
                }
            }
        }
    }
    assert!(produced > 10, "too few filtered brackets produced: {produced}");
}

/// Homology products are associative and unital across random instances.
#[test]
fn homology_product_associative_unital() {
    for seed in 0..10u64 {
        for zm in [Modulus::new(2, 2).unwrap(), Modulus::new(3, 1).unwrap()] {
            let params = RandomDgaParams::new(10, 3, zm);
            let a = random_instance(seed, &params).unwrap();
            let unit = WindowClass {
                window: full_window(&a),
                degree: 0,
                coords: a.homology(0).class_of(&a.unit_chain()).unwrap(),
            };
            let degs: Vec<i32> = {
                let mut d: Vec<i32> = a.generators().iter().map(|g| g.degree).collect();
                d.sort();
                d.dedup();
                d
            };
            let mut classes = Vec::new();
            for &n in &degs {
                classes.extend(homology_generators(&a, n));
            }
            for x in &classes {
                let ux = homology_product(&a, &unit, x).unwrap();
                assert_eq!(&ux.coords, &x.coords, "unit fails (seed {seed})");
                for y in &classes {
                    for z in &classes {
                        let xy_z = homology_product(&a, &homology_product(&a, x, y).unwrap(), z)
                            .unwrap();
                        let x_yz = homology_product(&a, x, &homology_product(&a, y, z).unwrap())
                            .unwrap();
                        assert_eq!(xy_z.coords, x_yz.coords, "associativity fails (seed {seed})");
                    }
                }
            }
        }
    }
}

/// The generator contract: 500 seeds, 100% validity, determinism.
#[test]
fn five_hundred_seeds_all_validate() {
    let params = RandomDgaParams::new(12, 4, Modulus::new(2, 2).unwrap());
    for seed in 0..500u64 {
        let a = random_instance(seed, &params).unwrap();
        assert!(a.validate().is_valid(), "seed {seed} produced invalid DGA");
    }
}
