use crate::homology::{homology_product, WindowClass};
use crate::{DgaError, FilteredDga, Subquotient, Window};
use ring_linear::{pmod, Matrix};

/// A set-valued bracket answer: representative plus indeterminacy subgroup
/// inside the homology group it lives in.
#[derive(Debug, Clone)]
pub struct Coset {
    pub window: Window,
    pub degree: i32,
    pub rep: Vec<u32>,
    /// Rows: generators of the indeterminacy subgroup, in group coords.
    pub indeterminacy: Matrix,
    pub orders: Vec<u32>,
}

impl Coset {
    pub fn is_strict(&self) -> bool {
        let basis = pmod::subgroup_basis(&self.indeterminacy, &self.orders);
        let zero = pmod::subgroup_basis(
            &Matrix::zero(self.indeterminacy.modulus(), 0, self.orders.len()),
            &self.orders,
        );
        basis == zero
    }

    pub fn contains(&self, elt: &[u32]) -> bool {
        let zm = self.indeterminacy.modulus();
        let diff: Vec<u32> = elt
            .iter()
            .zip(&self.rep)
            .map(|(&a, &b)| zm.sub(a, b))
            .collect();
        pmod::subgroup_contains(&self.indeterminacy, &self.orders, &diff)
    }

    /// Whole-coset containment: same ambient group, representative in the
    /// set, and indeterminacy no larger.
    pub fn subset_of(&self, other: &Coset) -> bool {
        other.contains(&self.rep)
            && pmod::subgroup_leq(&self.indeterminacy, &other.indeterminacy, &self.orders)
    }

    /// Lexicographically least representative.
    pub fn canonical_rep(&self) -> Vec<u32> {
        pmod::canonical_coset_rep(&self.indeterminacy, &self.orders, &self.rep)
    }

    /// Every element of the coset, if the indeterminacy subgroup has at
    /// most `cap` elements.
    pub fn elements(&self, cap: usize) -> Option<Vec<Vec<u32>>> {
        let orders = &self.orders;
        let mut sub: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
        sub.insert(vec![0; orders.len()]);
        let mut frontier: Vec<Vec<u32>> = sub.iter().cloned().collect();
        let gens: Vec<Vec<u32>> = (0..self.indeterminacy.rows())
            .map(|r| {
                let mut row = self.indeterminacy.row_dense(r);
                for (c, &o) in row.iter_mut().zip(orders) {
                    *c %= o;
                }
                row
            })
            .collect();
        while let Some(e) = frontier.pop() {
            for g in &gens {
                let next: Vec<u32> = e
                    .iter()
                    .zip(g)
                    .zip(orders)
                    .map(|((&a, &b), &o)| (a + b) % o)
                    .collect();
                if sub.insert(next.clone()) {
                    if sub.len() > cap {
                        return None;
                    }
                    frontier.push(next);
                }
            }
        }
        Some(
            sub.into_iter()
                .map(|s| {
                    s.iter()
                        .zip(&self.rep)
                        .zip(orders)
                        .map(|((&a, &b), &o)| (a + b) % o)
                        .collect()
                })
                .collect(),
        )
    }
}

/// Solve `d(c) = target` inside a window complex, with `c` in the given
/// degree. Returns the bounding chain in local window coordinates.
pub(crate) fn solve_bounding_chain(
    sq: &Subquotient,
    target_local: &[u32],
    target_degree: i32,
) -> Option<Vec<u32>> {
    let zm = sq.complex.modulus();
    let hi = sq.complex.degree_indices(target_degree + 1);
    let lo = sq.complex.degree_indices(target_degree);
    // Sanity: target supported in its own degree slice.
    for (i, &c) in target_local.iter().enumerate() {
        if c != 0 && !lo.contains(&i) {
            return None;
        }
    }
    let mut m = Matrix::zero(zm, hi.len(), lo.len());
    for (r, &i) in hi.iter().enumerate() {
        for (t, coef) in sq.complex.diff().row_iter(i) {
            if let Some(col) = lo.iter().position(|&b| b == t) {
                m.set(r, col, coef);
            }
        }
    }
    let v: Vec<u32> = lo.iter().map(|&i| target_local[i]).collect();
    let x = m.row_combination_for(&v)?;
    let mut out = vec![0; sq.complex.dim()];
    for (r, &i) in hi.iter().enumerate() {
        out[i] = x[r];
    }
    Some(out)
}

fn koszul_sign(degree: i32) -> i64 {
    if degree.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Combine `a*F - (-1)^{|a|} G*c` at chain level (ambient coordinates).
fn bracket_chain(
    dga: &FilteredDga,
    a_rep: &[u32],
    a_degree: i32,
    f_chain: &[u32],
    g_chain: &[u32],
    c_rep: &[u32],
) -> Vec<u32> {
    let zm = dga.modulus();
    let af = dga.product_chains(a_rep, f_chain);
    let gc = dga.product_chains(g_chain, c_rep);
    let sign = koszul_sign(a_degree);
    af.iter()
        .zip(&gc)
        .map(|(&x, &y)| zm.add(x, zm.reduce(-sign * y as i64)))
        .collect()
}

/// Indeterminacy subgroup `a·H(F-window) + H(G-window)·c` pushed into the
/// output homology group.
#[allow(clippy::too_many_arguments)]
fn bracket_indeterminacy(
    dga: &FilteredDga,
    a_rep: &[u32],
    c_rep: &[u32],
    f_window: Window,
    f_degree: i32,
    g_window: Window,
    g_degree: i32,
    out_sq: &Subquotient,
    out_h: &crate::HomologyGroup,
) -> Matrix {
    let zm = dga.modulus();
    let mut rows = Matrix::zero(zm, 0, out_h.rank());
    let (fsq, fh) = dga.window_homology(f_window, f_degree);
    for i in 0..fh.rank() {
        let h = fsq.include(&fh.generator_rep(i), dga.dim());
        let prod = dga.product_chains(a_rep, &h);
        let coords = out_h
            .class_of(&out_sq.restrict(&prod))
            .expect("indeterminacy products are cycles");
        rows.push_row(&coords);
    }
    let (gsq, gh) = dga.window_homology(g_window, g_degree);
    for i in 0..gh.rank() {
        let h = gsq.include(&gh.generator_rep(i), dga.dim());
        let prod = dga.product_chains(&h, c_rep);
        let coords = out_h
            .class_of(&out_sq.restrict(&prod))
            .expect("indeterminacy products are cycles");
        rows.push_row(&coords);
    }
    rows
}

/// Multiplicative Toda bracket `<a, a2, a3>` of classes in windows of equal
/// length. Defined when both products vanish in homology; the answer is the
/// full coset `{[a·F - (-1)^{|a|} G·a3]}` over all bounding chains, returned
/// as representative + indeterminacy `a·H + H·a3`.
pub fn toda_bracket(
    dga: &FilteredDga,
    a: &WindowClass,
    a2: &WindowClass,
    a3: &WindowClass,
) -> Result<Coset, DgaError> {
    let p12 = homology_product(dga, a, a2)?;
    if p12.coords.iter().any(|&c| c != 0) {
        return Err(DgaError::BracketUndefined {
            which: "a·a'".into(),
            class: p12.coords,
        });
    }
    let p23 = homology_product(dga, a2, a3)?;
    if p23.coords.iter().any(|&c| c != 0) {
        return Err(DgaError::BracketUndefined {
            which: "a'·a''".into(),
            class: p23.coords,
        });
    }
    let w = a.window.len;
    let za = dga.class_rep(a);
    let z2 = dga.class_rep(a2);
    let z3 = dga.class_rep(a3);

    let f_window = Window::new(a2.window.start + a3.window.start, w);
    let f_target_deg = a2.degree + a3.degree;
    let fsq = dga.subquotient(f_window.start, f_window.len);
    let f_local = solve_bounding_chain(
        &fsq,
        &fsq.restrict(&dga.product_chains(&z2, &z3)),
        f_target_deg,
    )
    .expect("product vanishes in homology, so it bounds");
    let f_chain = fsq.include(&f_local, dga.dim());

    let g_window = Window::new(a.window.start + a2.window.start, w);
    let g_target_deg = a.degree + a2.degree;
    let gsq = dga.subquotient(g_window.start, g_window.len);
    let g_local = solve_bounding_chain(
        &gsq,
        &gsq.restrict(&dga.product_chains(&za, &z2)),
        g_target_deg,
    )
    .expect("product vanishes in homology, so it bounds");
    let g_chain = gsq.include(&g_local, dga.dim());

    let u = bracket_chain(dga, &za, a.degree, &f_chain, &g_chain, &z3);
    let out_window = Window::new(a.window.start + a2.window.start + a3.window.start, w);
    let out_degree = a.degree + a2.degree + a3.degree + 1;
    let (out_sq, out_h) = dga.window_homology(out_window, out_degree);
    let rep = out_h.class_of(&out_sq.restrict(&u))?;
    let indet = bracket_indeterminacy(
        dga,
        &za,
        &z3,
        f_window,
        f_target_deg + 1,
        g_window,
        g_target_deg + 1,
        &out_sq,
        &out_h,
    );
    Ok(Coset {
        window: out_window,
        degree: out_degree,
        rep,
        indeterminacy: indet,
        orders: out_h.orders().to_vec(),
    })
}

fn clamp(x: i64) -> u32 {
    x.max(0) as u32
}

/// Filtered multiplicative Toda bracket: inputs are classes of the tower
/// pieces `X_{f-f'}`, `X'_{f'-f''}`, `X''_{f''}`, and the bounding chains
/// are constrained to `X'_{f'-r}` and `X_{f-f''-r}`. The result lives in
/// `H(X_{f-r})`. Negative filtration indices clamp to 0.
pub fn toda_filtered(
    dga: &FilteredDga,
    a: &WindowClass,
    a2: &WindowClass,
    a3: &WindowClass,
    r: u32,
) -> Result<Coset, DgaError> {
    let l = dga.filtration_len();
    for (name, cls) in [("a", a), ("a'", a2), ("a''", a3)] {
        if cls.window.end() < l {
            return Err(DgaError::Precondition(format!(
                "{name} must live in a tower piece X_s (window reaching F_L)"
            )));
        }
    }
    let f3 = a3.window.start;
    let f2 = a2.window.start + f3;
    let f1 = a.window.start + f2;
    let (za, z2, z3) = (dga.class_rep(a), dga.class_rep(a2), dga.class_rep(a3));

    // F bounds a2*a3 inside X'_{f'-r}; G bounds a*a2 inside X_{f-f''-r}.
    let f_start = clamp(f2 as i64 - r as i64);
    let f_window = Window::tail(f_start, l);
    let fsq = dga.subquotient(f_window.start, f_window.len);
    let f_target_deg = a2.degree + a3.degree;
    let f_local = solve_bounding_chain(
        &fsq,
        &fsq.restrict(&dga.product_chains(&z2, &z3)),
        f_target_deg,
    )
    .ok_or(DgaError::CompositionPremise {
        which: format!("a'·a'' does not bound in X'_{{{f_start}}}"),
    })?;
    let f_chain = fsq.include(&f_local, dga.dim());

    let g_start = clamp(f1 as i64 - f3 as i64 - r as i64);
    let g_window = Window::tail(g_start, l);
    let gsq = dga.subquotient(g_window.start, g_window.len);
    let g_target_deg = a.degree + a2.degree;
    let g_local = solve_bounding_chain(
        &gsq,
        &gsq.restrict(&dga.product_chains(&za, &z2)),
        g_target_deg,
    )
    .ok_or(DgaError::CompositionPremise {
        which: format!("a·a' does not bound in X_{{{g_start}}}"),
    })?;
    let g_chain = gsq.include(&g_local, dga.dim());

    let u = bracket_chain(dga, &za, a.degree, &f_chain, &g_chain, &z3);
    let out_window = Window::tail(clamp(f1 as i64 - r as i64), l);
    let out_degree = a.degree + a2.degree + a3.degree + 1;
    let (out_sq, out_h) = dga.window_homology(out_window, out_degree);
    let rep = out_h.class_of(&out_sq.restrict(&u))?;
    let indet = bracket_indeterminacy(
        dga,
        &za,
        &z3,
        f_window,
        f_target_deg + 1,
        g_window,
        g_target_deg + 1,
        &out_sq,
        &out_h,
    );
    Ok(Coset {
        window: out_window,
        degree: out_degree,
        rep,
        indeterminacy: indet,
        orders: out_h.orders().to_vec(),
    })
}

/// Construct the source of the differential hitting a class.
///
/// Given `alpha` in `H(X_f)` whose image in `H(X_{f-r})` vanishes, solve
/// `d(w) = rep(alpha)` with `w` supported in `F_{f-r}` and return the class
/// of `w` in `H(X_{f-r,r})`: the class supporting the d_r-differential that
/// hits the projection of `alpha`.
pub fn differential_source(
    dga: &FilteredDga,
    alpha: &WindowClass,
    r: u32,
) -> Result<WindowClass, DgaError> {
    let l = dga.filtration_len();
    let f = alpha.window.start;
    if alpha.window.end() < l {
        return Err(DgaError::Precondition(
            "alpha must live in a tower piece X_f".into(),
        ));
    }
    let lower = clamp(f as i64 - r as i64);
    let z = dga.class_rep(alpha);
    let (low_sq, low_h) = dga.window_homology(Window::tail(lower, l), alpha.degree);
    let image = low_h.class_of(&low_sq.restrict(&z))?;
    if image.iter().any(|&c| c != 0) {
        return Err(DgaError::Precondition(format!(
            "alpha is nonzero in H(X_{lower}), no differential source exists"
        )));
    }
    let w_local = solve_bounding_chain(&low_sq, &low_sq.restrict(&z), alpha.degree)
        .expect("zero class must bound");
    let w = low_sq.include(&w_local, dga.dim());
    let out_window = Window::new(lower, r);
    let (out_sq, out_h) = dga.window_homology(out_window, alpha.degree + 1);
    let coords = out_h.class_of(&out_sq.restrict(&w))?;
    Ok(WindowClass {
        window: out_window,
        degree: alpha.degree + 1,
        coords,
    })
}

/// Check the defining congruence of the differential source: applying
/// `κ` then `p` to the source lands on the projection of `alpha`, modulo
/// the image of `H(X_{f+1,r-1})` (the ambiguity of a Z̃_r class).
pub fn differential_source_congruence_holds(
    dga: &FilteredDga,
    alpha: &WindowClass,
    source: &WindowClass,
    r: u32,
) -> bool {
    let f = alpha.window.start;
    let zm = dga.modulus();
    let w = dga.class_rep(source);
    // d̃_r of the source: d of the canonical lift, restricted to (f, r).
    let dw = dga.d_chain(&w);
    let (mid_sq, mid_h) = dga.window_homology(Window::new(f, r), alpha.degree);
    let z = dga.class_rep(alpha);
    let lhs = match mid_h.class_of(&mid_sq.restrict(&dw)) {
        Ok(c) => c,
        Err(_) => return false,
    };
    let rhs = match mid_h.class_of(&mid_sq.restrict(&z)) {
        Ok(c) => c,
        Err(_) => return false,
    };
    let diff: Vec<u32> = lhs.iter().zip(&rhs).map(|(&a, &b)| zm.sub(a, b)).collect();
    // Ambiguity subgroup: image of H(X_{f+1, r-1}).
    let inner = dga.subquotient(f + 1, r.saturating_sub(1));
    let incl = match dga.window_map(&inner, &mid_sq) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let inner_h = crate::HomologyGroup::compute(&inner.complex, alpha.degree);
    let induced = match inner_h.induced(&incl, &mid_h) {
        Ok(m) => m,
        Err(_) => return false,
    };
    pmod::subgroup_contains(&induced, mid_h.orders(), &diff)
}
