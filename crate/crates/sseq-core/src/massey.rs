use crate::{Bidegree, Page, PageElement, PageTower, SseqError};
use ring_linear::{pmod, Matrix};

/// A Massey product answer on the `r+1` page: representative plus
/// indeterminacy subgroup `a·E_{r+1} + E_{r+1}·a''`.
#[derive(Debug, Clone)]
pub struct PageCoset {
    pub page: u32,
    pub bidegree: Bidegree,
    pub rep: Vec<u32>,
    pub indeterminacy: Matrix,
    pub orders: Vec<u32>,
}

impl PageCoset {
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

    /// Lexicographically least representative.
    pub fn canonical_rep(&self) -> Vec<u32> {
        pmod::canonical_coset_rep(&self.indeterminacy, &self.orders, &self.rep)
    }

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

/// Solve `d_r(b) = target` on a page; `None` when the target is not hit.
fn solve_dr(page: &Page, target: &PageElement) -> Option<PageElement> {
    let src_bid = page.source_of_d(target.bidegree);
    let src_rank = page.rank_at(src_bid);
    if target.is_zero() {
        return Some(PageElement {
            bidegree: src_bid,
            coords: vec![0; src_rank],
        });
    }
    if src_rank == 0 {
        return None;
    }
    let d = page.d_matrix(src_bid);
    // solve x·d ≡ target mod the target relations
    let rel = pmod::relation_rows(page.modulus, &page.orders_at(target.bidegree));
    let stacked = d.vstack(&rel);
    let combo = stacked.row_combination_for(&target.coords)?;
    Some(PageElement {
        bidegree: src_bid,
        coords: combo[..src_rank].to_vec(),
    })
}

/// The Massey product `<a, a', a''>` of d_r-cycles on page `r`, landing on
/// page `r+1`: the coset of `a·b' - (-1)^{|a|} b·a''` over solutions
/// `d_r(b') = a'·a''`, `d_r(b) = a·a'`, with indeterminacy
/// `a·E_{r+1} + E_{r+1}·a''`.
pub fn massey_on_page(
    tower: &PageTower,
    r: u32,
    a: &PageElement,
    a2: &PageElement,
    a3: &PageElement,
) -> Result<PageCoset, SseqError> {
    let page = tower.page(r)?;
    let next = tower.page(r + 1)?;
    let first = tower.pages[0].r;
    let proj = &tower.projections[(r - first) as usize];

    for x in [a, a2, a3] {
        if !page.d_apply(x).is_zero() {
            return Err(SseqError::NotACycle(x.bidegree));
        }
    }

    let p12 = page.product(a, a2);
    let b = solve_dr(page, &p12).ok_or_else(|| SseqError::MasseyUndefined {
        which: "a·a'".into(),
        bidegree: p12.bidegree,
        class: p12.coords.clone(),
    })?;
    let p23 = page.product(a2, a3);
    let b2 = solve_dr(page, &p23).ok_or_else(|| SseqError::MasseyUndefined {
        which: "a'·a''".into(),
        bidegree: p23.bidegree,
        class: p23.coords.clone(),
    })?;

    // u = a·b' - (-1)^{|a|} b·a'' on page r
    let zm = page.modulus;
    let left = page.product(a, &b2);
    let right = page.product(&b, a3);
    let out_bid = left.bidegree;
    debug_assert_eq!(out_bid, right.bidegree);
    let sign = if a.stem().rem_euclid(2) == 0 { 1i64 } else { -1 };
    let orders_r = page.orders_at(out_bid);
    let u_coords: Vec<u32> = left
        .coords
        .iter()
        .zip(&right.coords)
        .zip(&orders_r)
        .map(|((&p, &q), &o)| {
            let o = o as i64;
            ((p as i64 - sign * q as i64).rem_euclid(o)) as u32
        })
        .collect();
    let u = PageElement {
        bidegree: out_bid,
        coords: u_coords,
    };

    // push to page r+1
    let u_next = match proj.get(&out_bid) {
        Some(p) => p.project(&u.coords).map_err(|_| SseqError::DoesNotSurvive)?,
        None => Vec::new(),
    };

    // indeterminacy on page r+1: a₊·E + E·a''₊
    let project = |x: &PageElement| -> Result<PageElement, SseqError> {
        match proj.get(&x.bidegree) {
            Some(p) => Ok(PageElement {
                bidegree: x.bidegree,
                coords: p.project(&x.coords).map_err(|_| SseqError::DoesNotSurvive)?,
            }),
            None => Ok(PageElement {
                bidegree: x.bidegree,
                coords: Vec::new(),
            }),
        }
    };
    let a_up = project(a)?;
    let a3_up = project(a3)?;
    let out_rank = next.rank_at(out_bid);
    let mut indet = Matrix::zero(zm, 0, out_rank);
    for (other_bid, fixed, fixed_left) in
        [(b2.bidegree, &a_up, true), (b.bidegree, &a3_up, false)]
    {
        for i in 0..next.rank_at(other_bid) {
            let g = next.basis_element(other_bid, i);
            let prod = if fixed_left {
                next.product(fixed, &g)
            } else {
                next.product(&g, fixed)
            };
            indet.push_row(&prod.coords);
        }
    }

    Ok(PageCoset {
        page: r + 1,
        bidegree: out_bid,
        rep: u_next,
        indeterminacy: indet,
        orders: next.orders_at(out_bid),
    })
}
