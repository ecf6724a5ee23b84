use crate::{Bidegree, PageElement, PageTower, SseqError};
use ring_linear::Matrix;

/// Convergence annotation: a page-1 element detects a homotopy class at a
/// filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub bidegree: Bidegree,
    pub coords: Vec<u32>,
    pub homotopy: String,
    pub filtration: i32,
}

/// A tower together with its knowledge horizon and convergence
/// annotations. `complete_through: None` means the differentials are fully
/// determined (a chain-level model computed to stabilization);
/// `Some(R)` means pages beyond `R` carry unknown differentials.
pub struct SseqData {
    pub tower: PageTower,
    pub complete_through: Option<u32>,
    pub detections: Vec<Detection>,
}

impl SseqData {
    /// Largest filtration with a nonzero group anywhere (used for
    /// vacuity bounds: differentials reaching past it are zero).
    fn max_filtration(&self) -> i32 {
        self.tower
            .pages
            .first()
            .map(|p| {
                p.groups
                    .iter()
                    .filter(|(_, g)| !g.orders.is_empty())
                    .map(|(&(_, f), _)| f)
                    .max()
                    .unwrap_or(0)
            })
            .unwrap_or(0)
    }

    /// Is `d_s` knowable at all bidegrees? True when s is within the
    /// declared bound, or the model is complete.
    fn d_known(&self, s: u32) -> bool {
        match self.complete_through {
            None => true,
            Some(bound) => s <= bound,
        }
    }

    /// Group of the page used for queries at `(bid, s)`: pages beyond the
    /// built tower are clamped (they can only shrink further, which is all
    /// the vacuity arguments need).
    fn bounding_rank(&self, bid: Bidegree, s: u32) -> usize {
        self.tower.effective_page(s).rank_at(bid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossingOutcome {
    Holds { vacuous: bool },
    Fails { witness: CrossingWitness },
    Unknown { needed_page: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingWitness {
    pub bidegree: Bidegree,
    pub page: u32,
    pub element: Vec<u32>,
    pub target: Vec<u32>,
}

/// The crossing-differential check at the E_r page in degree `(n, f)`:
/// every element of `E_{f-m+1}^{n+1, m}` must be a permanent cycle for
/// `0 <= m <= f - r - 1`.
pub fn crossing_check(data: &SseqData, degree: Bidegree, r: u32) -> CrossingOutcome {
    let (n, f) = degree;
    let top_m = f - r as i32 - 1;
    if top_m < 0 {
        return CrossingOutcome::Holds { vacuous: true };
    }
    let mut vacuous = true;
    for m in 0..=top_m {
        let s0 = (f - m + 1).max(1) as u32;
        let bid = (n + 1, m);
        match subgroup_is_permanent(data, bid, s0) {
            SubgroupPermanence::Vacuous => {}
            SubgroupPermanence::Holds => {
                vacuous = false;
            }
            SubgroupPermanence::Fails(w) => {
                return CrossingOutcome::Fails { witness: w };
            }
            SubgroupPermanence::Unknown(page) => {
                return CrossingOutcome::Unknown { needed_page: page };
            }
        }
    }
    CrossingOutcome::Holds { vacuous }
}

enum SubgroupPermanence {
    Vacuous,
    Holds,
    Fails(CrossingWitness),
    Unknown(u32),
}

/// Is every element of `E_{s0}` at `bid` a permanent cycle? Tracks the
/// surviving image subgroup page by page; being hit only shrinks the
/// subgroup and never spoils permanence.
fn subgroup_is_permanent(data: &SseqData, bid: Bidegree, s0: u32) -> SubgroupPermanence {
    let tower = &data.tower;
    let first = tower.pages[0].r;
    let zm = tower.pages[0].modulus;
    let max_built = tower.max_page();

    // The group at page s0 may itself be unknown if s0 is past the horizon;
    // it is still bounded by the clamped page, so a zero bound is decisive.
    let start_rank = data.bounding_rank(bid, s0);
    if start_rank == 0 {
        return SubgroupPermanence::Vacuous;
    }
    if !data.d_known(s0.saturating_sub(1)) && s0 > max_built {
        return SubgroupPermanence::Unknown(s0);
    }

    let s_begin = s0.max(first);
    // survivors at page s_begin (full group there)
    let mut survivors = Matrix::identity(zm, tower.effective_page(s_begin).rank_at(bid));
    let mut s = s_begin;
    loop {
        let page = tower.effective_page(s);
        let orders = page.orders_at(bid);
        if survivors.rows() == 0 || orders.is_empty() {
            return SubgroupPermanence::Holds;
        }
        // all further differentials out of bid vacuous?
        let max_f = data.max_filtration();
        let all_later_vacuous = (s..).take_while(|&t| bid.1 + (t as i32) <= max_f).all(|t| {
            data.bounding_rank((bid.0 - 1, bid.1 + t as i32), t) == 0
        }) && bid.1 + (s as i32) <= max_f
            || (s as i32) + bid.1 > max_f;
        if all_later_vacuous {
            return SubgroupPermanence::Holds;
        }
        if !data.d_known(s) {
            // the differential d_s is past the horizon; only a vanishing
            // target can rescue us, and it did not
            if data.bounding_rank((bid.0 - 1, bid.1 + s as i32), s) != 0 {
                return SubgroupPermanence::Unknown(s);
            }
        } else {
            let d = page.d_matrix(bid);
            let tgt_orders = page.orders_at(page.target_of_d(bid));
            for i in 0..survivors.rows() {
                let elt = survivors.row_dense(i);
                let mut img = d.apply_left(&elt);
                for (c, &o) in img.iter_mut().zip(&tgt_orders) {
                    *c %= o;
                }
                if img.iter().any(|&c| c != 0) {
                    return SubgroupPermanence::Fails(CrossingWitness {
                        bidegree: bid,
                        page: s,
                        element: elt,
                        target: img,
                    });
                }
            }
        }
        if s >= max_built {
            // The tower stabilized (complete model) or the horizon is
            // exhausted; vacuity above is the only honest exit for
            // incomplete charts.
            if data.complete_through.is_none() {
                return SubgroupPermanence::Holds;
            }
            return SubgroupPermanence::Unknown(s + 1);
        }
        // project the survivors one page up
        survivors = tower.project_subgroup(bid, &survivors, s, s + 1);
        s += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeathWitness {
    /// Supports `d_page` with the given nonzero target.
    Supports { target: Vec<u32>, target_name: String },
    /// The class becomes zero on the next page (it is hit by `d_page`).
    Hit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermanenceStatus {
    Permanent,
    Dies { page: u32, witness: DeathWitness },
    Unknown { missing_page: u32 },
}

/// Status of a single page-1 element under the recorded differentials and
/// the knowledge horizon. `permanent` is only reported when every later
/// differential is either recorded or vacuous.
pub fn permanent_cycle_status(data: &SseqData, elt: &PageElement) -> PermanenceStatus {
    let tower = &data.tower;
    let first = tower.pages[0].r;
    let max_built = tower.max_page();
    let bid = elt.bidegree;
    let mut cur = elt.clone();
    let mut s = first;
    if cur.is_zero() {
        return PermanenceStatus::Permanent;
    }
    loop {
        let page = tower.effective_page(s);
        if data.d_known(s) {
            let img = page.d_apply(&cur);
            if !img.is_zero() {
                return PermanenceStatus::Dies {
                    page: s,
                    witness: DeathWitness::Supports {
                        target_name: page.element_name(&img),
                        target: img.coords,
                    },
                };
            }
        } else {
            // unknown differential: vacuous only if the target bound is zero
            if data.bounding_rank((bid.0 - 1, bid.1 + s as i32), s) != 0 {
                return PermanenceStatus::Unknown { missing_page: s };
            }
        }
        if s >= max_built {
            // check that every later differential is vacuous
            let max_f = data.max_filtration();
            let mut t = s + 1;
            while bid.1 + (t as i32) <= max_f {
                if !data.d_known(t)
                    && data.bounding_rank((bid.0 - 1, bid.1 + t as i32), t) != 0
                {
                    return PermanenceStatus::Unknown { missing_page: t };
                }
                if data.d_known(t) && t > max_built {
                    // complete model: stabilized, differentials vanish
                    break;
                }
                t += 1;
            }
            return PermanenceStatus::Permanent;
        }
        // survive to the next page
        match tower.project_element(&cur, s, s + 1) {
            Some(next) => {
                if next.is_zero() && !cur.is_zero() {
                    return PermanenceStatus::Dies {
                        page: s,
                        witness: DeathWitness::Hit,
                    };
                }
                cur = next;
            }
            None => unreachable!("d(cur) = 0 was checked above"),
        }
        s += 1;
    }
}

/// Resolve the chart's convergence annotation for an element:
/// "x detects α at filtration f". Errors when the element provably dies
/// (both dying and detecting is contradictory).
pub fn detects(data: &SseqData, elt: &PageElement) -> Result<Option<Detection>, SseqError> {
    let hit = data
        .detections
        .iter()
        .find(|d| d.bidegree == elt.bidegree && d.coords == elt.coords)
        .cloned();
    if let Some(found) = &hit {
        if let PermanenceStatus::Dies { page, .. } = permanent_cycle_status(data, elt) {
            return Err(SseqError::Consistency(format!(
                "element at {:?} detects {} but dies on page {}",
                elt.bidegree, found.homotopy, page
            )));
        }
    }
    Ok(hit)
}
