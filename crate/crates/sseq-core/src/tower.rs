use crate::{Bidegree, Page, PageElement, PageGroup, SseqError};
use ring_linear::{pmod, Matrix, SubquotientPresentation};
use std::collections::BTreeMap;

/// The result of turning a page: the new page (with no differentials
/// installed yet) and, per bidegree, the presentation that projects
/// old-page coordinates of d-cycles onto new-page coordinates.
pub struct TurnedPage {
    pub page: Page,
    pub projections: BTreeMap<Bidegree, SubquotientPresentation>,
}

/// Build the name of a new generator from its representative on the old
/// page.
fn name_from_rep(old: &Page, bid: Bidegree, rep: &[u32]) -> String {
    old.element_name(&PageElement {
        bidegree: bid,
        coords: rep.to_vec(),
    })
}

/// `ker d_r / im d_r` per bidegree, with the pairing descended. The
/// Leibniz rule is verified first; the new page starts with no
/// differentials (they carry independent information and are installed by
/// the caller).
pub fn turn_page(old: &Page) -> Result<TurnedPage, SseqError> {
    old.d_squared_is_zero()?;
    old.leibniz_check()?;
    let zm = old.modulus;

    let mut bidegrees: std::collections::BTreeSet<Bidegree> = std::collections::BTreeSet::new();
    for (&bid, g) in &old.groups {
        if !g.orders.is_empty() {
            bidegrees.insert(bid);
        }
    }

    let mut groups = BTreeMap::new();
    let mut projections = BTreeMap::new();
    for &bid in &bidegrees {
        let orders = old.orders_at(bid);
        let tgt = old.target_of_d(bid);
        let src = old.source_of_d(bid);
        let kernel = pmod::map_kernel(&old.d_matrix(bid), &orders, &old.orders_at(tgt));
        let image = {
            let d_in = old.d_matrix(src);
            let rel = pmod::relation_rows(zm, &orders);
            if d_in.rows() == 0 {
                rel
            } else {
                d_in.vstack(&rel)
            }
        };
        let pres = SubquotientPresentation::new(&kernel, &image)?;
        let names = (0..pres.group.len())
            .map(|i| name_from_rep(old, bid, &pres.generator_lift(i)))
            .collect();
        groups.insert(
            bid,
            PageGroup {
                orders: pres.orders().to_vec(),
                names,
            },
        );
        projections.insert(bid, pres);
    }

    // Descend the pairing: products of representatives, projected.
    let mut pairing = BTreeMap::new();
    for &(b1, b2) in old.pairing.keys() {
        let out_bid = (b1.0 + b2.0, b1.1 + b2.1);
        let (Some(p1), Some(p2), Some(pout)) = (
            projections.get(&b1),
            projections.get(&b2),
            projections.get(&out_bid),
        ) else {
            continue;
        };
        if p1.group.is_trivial() || p2.group.is_trivial() || pout.group.is_trivial() {
            continue;
        }
        let mut table = Vec::with_capacity(p1.group.len());
        for i in 0..p1.group.len() {
            let x = PageElement {
                bidegree: b1,
                coords: p1.generator_lift(i),
            };
            let mut row = Vec::with_capacity(p2.group.len());
            for j in 0..p2.group.len() {
                let y = PageElement {
                    bidegree: b2,
                    coords: p2.generator_lift(j),
                };
                let prod = old.product(&x, &y);
                // A product of d-cycles is a d-cycle (Leibniz, verified
                // above), so it projects.
                let coords = pout.project(&prod.coords)?;
                row.push(coords);
            }
            table.push(row);
        }
        pairing.insert((b1, b2), table);
    }

    let page = Page {
        r: old.r + 1,
        modulus: zm,
        groups,
        differentials: BTreeMap::new(),
        pairing,
    };
    Ok(TurnedPage { page, projections })
}

/// A tower of pages `E_1, E_2, …` with the projection data between
/// consecutive stages and, for every generator of every stage, a
/// representative in E_1 coordinates (used to compare towers built by
/// different routes and to install differentials from a chain model).
pub struct PageTower {
    pub pages: Vec<Page>,
    /// `projections[i]` maps page `i+1` coordinates to page `i+2`.
    pub projections: Vec<BTreeMap<Bidegree, SubquotientPresentation>>,
    /// `e1_reps[i][bid]`: rows are E_1 coordinates of the page-(i+1)
    /// generators at `bid`.
    pub e1_reps: Vec<BTreeMap<Bidegree, Matrix>>,
}

impl PageTower {
    pub fn from_e1(e1: Page) -> PageTower {
        let zm = e1.modulus;
        let mut reps = BTreeMap::new();
        for (&bid, g) in &e1.groups {
            reps.insert(bid, Matrix::identity(zm, g.rank()));
        }
        PageTower {
            pages: vec![e1],
            projections: Vec::new(),
            e1_reps: vec![reps],
        }
    }

    pub fn max_page(&self) -> u32 {
        self.pages.last().map_or(0, |p| p.r)
    }

    pub fn page(&self, r: u32) -> Result<&Page, SseqError> {
        let first = self.pages.first().ok_or(SseqError::PageUnavailable(r))?.r;
        if r < first {
            return Err(SseqError::PageUnavailable(r));
        }
        self.pages
            .get((r - first) as usize)
            .ok_or(SseqError::PageUnavailable(r))
    }

    /// The page used for queries at index `r`, clamping past the last built
    /// page (pages stabilize once every differential vanishes).
    pub fn effective_page(&self, r: u32) -> &Page {
        let first = self.pages[0].r;
        let idx = r.saturating_sub(first) as usize;
        &self.pages[idx.min(self.pages.len() - 1)]
    }

    /// Turn the last page and append the result; differentials on the new
    /// page are installed by the caller via `install_differential`.
    pub fn extend(&mut self) -> Result<(), SseqError> {
        let turned = turn_page(self.pages.last().expect("tower is nonempty"))?;
        // compose E_1 representatives through the new projection
        let prev_reps = self.e1_reps.last().expect("reps tracked");
        let mut reps = BTreeMap::new();
        for (&bid, pres) in &turned.projections {
            if pres.group.is_trivial() {
                continue;
            }
            let prev = prev_reps
                .get(&bid)
                .expect("every surviving bidegree existed before");
            let mut rows = Matrix::zero(self.pages[0].modulus, pres.group.len(), prev.cols());
            for i in 0..pres.group.len() {
                let lift_prev_coords = pres.generator_lift(i);
                let e1 = prev.apply_left(&lift_prev_coords);
                rows.set_row(i, &e1);
            }
            reps.insert(bid, rows);
        }
        self.pages.push(turned.page);
        self.projections.push(turned.projections);
        self.e1_reps.push(reps);
        Ok(())
    }

    pub fn install_differential(&mut self, r: u32, bid: Bidegree, matrix: Matrix) {
        let first = self.pages[0].r;
        let page = &mut self.pages[(r - first) as usize];
        page.differentials.insert(bid, matrix);
    }

    /// Project an element from its page to a later page. `None` when the
    /// element does not survive (it supports a differential en route) —
    /// being hit is fine, that projects to zero.
    pub fn project_element(&self, elt: &PageElement, from: u32, to: u32) -> Option<PageElement> {
        let first = self.pages[0].r;
        let mut cur = elt.clone();
        for s in from..to {
            if s >= self.max_page() {
                break; // stabilized
            }
            let idx = (s - first) as usize;
            let pres = self.projections[idx].get(&cur.bidegree);
            let coords = match pres {
                Some(p) => p.project(&cur.coords).ok()?,
                None => Vec::new(),
            };
            cur = PageElement {
                bidegree: cur.bidegree,
                coords,
            };
        }
        Some(cur)
    }

    /// Push a subgroup (rows in page-`from` coordinates at `bid`) to page
    /// `to`, intersecting with kernels along the way.
    pub fn project_subgroup(
        &self,
        bid: Bidegree,
        rows: &Matrix,
        from: u32,
        to: u32,
    ) -> Matrix {
        let first = self.pages[0].r;
        let zm = self.pages[0].modulus;
        let mut cur = rows.clone();
        for s in from..to {
            if s >= self.max_page() {
                break;
            }
            let idx = (s - first) as usize;
            let page = &self.pages[idx];
            let orders = page.orders_at(bid);
            let tgt = page.target_of_d(bid);
            let kernel = pmod::map_kernel(&page.d_matrix(bid), &orders, &page.orders_at(tgt));
            let keep = pmod::subgroup_basis(&cur, &orders).span_intersection(&kernel);
            let pres = self.projections[idx].get(&bid);
            let mut next = Matrix::zero(zm, 0, self.pages[idx + 1].rank_at(bid));
            if let Some(p) = pres {
                for rr in 0..keep.rows() {
                    if let Ok(coords) = p.project(&keep.row_dense(rr)) {
                        next.push_row(&coords);
                    }
                }
            }
            cur = next;
        }
        cur
    }
}
