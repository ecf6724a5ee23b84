use crate::SseqError;
use ring_linear::{Matrix, Modulus};
use std::collections::BTreeMap;
use std::fmt;

/// `(stem, filtration)`.
pub type Bidegree = (i32, i32);

/// One bigraded group of a page: a direct sum of cyclic p-groups with named
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageGroup {
    pub orders: Vec<u32>,
    pub names: Vec<String>,
}

impl PageGroup {
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    pub fn reduce(&self, coords: &mut [u32]) {
        for (c, &o) in coords.iter_mut().zip(&self.orders) {
            *c %= o;
        }
    }
}

/// An element of a page group, with coordinates reduced mod the orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageElement {
    pub bidegree: Bidegree,
    pub coords: Vec<u32>,
}

impl PageElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn stem(&self) -> i32 {
        self.bidegree.0
    }

    pub fn filtration(&self) -> i32 {
        self.bidegree.1
    }
}

/// One E_r page: bigraded groups, the d_r data, and the pairing as
/// structure constants on generators. Absent bidegrees are trivial groups;
/// absent differentials are zero; absent pairing entries are zero.
#[derive(Clone)]
pub struct Page {
    pub r: u32,
    pub modulus: Modulus,
    pub groups: BTreeMap<Bidegree, PageGroup>,
    /// `d_r` out of each bidegree, rows = source generators, columns =
    /// generators at `(n-1, f+r)`.
    pub differentials: BTreeMap<Bidegree, Matrix>,
    /// `pairing[(b1, b2)][i][j]` = coordinates of `gen_i * gen_j` at
    /// `(b1.0 + b2.0, b1.1 + b2.1)`.
    pub pairing: BTreeMap<(Bidegree, Bidegree), Vec<Vec<Vec<u32>>>>,
}

impl fmt::Debug for Page {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "E_{} page over {}", self.r, self.modulus)?;
        for (bid, g) in &self.groups {
            writeln!(f, "  {:?}: {:?} {:?}", bid, g.orders, g.names)?;
        }
        Ok(())
    }
}

impl Page {
    pub fn empty(r: u32, modulus: Modulus) -> Page {
        Page {
            r,
            modulus,
            groups: BTreeMap::new(),
            differentials: BTreeMap::new(),
            pairing: BTreeMap::new(),
        }
    }

    pub fn group(&self, bid: Bidegree) -> Option<&PageGroup> {
        self.groups.get(&bid).filter(|g| !g.orders.is_empty())
    }

    pub fn orders_at(&self, bid: Bidegree) -> Vec<u32> {
        self.group(bid).map_or(Vec::new(), |g| g.orders.clone())
    }

    pub fn rank_at(&self, bid: Bidegree) -> usize {
        self.group(bid).map_or(0, |g| g.rank())
    }

    pub fn zero_element(&self, bid: Bidegree) -> PageElement {
        PageElement {
            bidegree: bid,
            coords: vec![0; self.rank_at(bid)],
        }
    }

    pub fn target_of_d(&self, bid: Bidegree) -> Bidegree {
        (bid.0 - 1, bid.1 + self.r as i32)
    }

    pub fn source_of_d(&self, bid: Bidegree) -> Bidegree {
        (bid.0 + 1, bid.1 - self.r as i32)
    }

    /// The d_r matrix out of a bidegree (zero matrix when absent).
    pub fn d_matrix(&self, bid: Bidegree) -> Matrix {
        let tgt = self.target_of_d(bid);
        match self.differentials.get(&bid) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.modulus, self.rank_at(bid), self.rank_at(tgt)),
        }
    }

    /// Apply d_r to an element.
    pub fn d_apply(&self, elt: &PageElement) -> PageElement {
        let m = self.d_matrix(elt.bidegree);
        let tgt = self.target_of_d(elt.bidegree);
        let mut coords = m.apply_left(&elt.coords);
        if let Some(g) = self.group(tgt) {
            for (c, &o) in coords.iter_mut().zip(&g.orders) {
                *c %= o;
            }
        }
        PageElement {
            bidegree: tgt,
            coords,
        }
    }

    /// Bilinear product of two elements through the pairing table.
    pub fn product(&self, a: &PageElement, b: &PageElement) -> PageElement {
        let out_bid = (a.bidegree.0 + b.bidegree.0, a.bidegree.1 + b.bidegree.1);
        let rank = self.rank_at(out_bid);
        let mut coords = vec![0u32; rank];
        if let Some(table) = self.pairing.get(&(a.bidegree, b.bidegree)) {
            let orders = self.orders_at(out_bid);
            for (i, &ai) in a.coords.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.coords.iter().enumerate() {
                    if bj == 0 {
                        continue;
                    }
                    let entry = &table[i][j];
                    for (t, &e) in entry.iter().enumerate() {
                        let add = (ai as u64 * bj as u64 % self.modulus.m() as u64) as u32;
                        let add = add as u64 * e as u64 ;
                        coords[t] =
                            ((coords[t] as u64 + add) % orders[t].max(1) as u64) as u32;
                    }
                }
            }
        }
        PageElement {
            bidegree: out_bid,
            coords,
        }
    }

    /// Verify `d_r ∘ d_r = 0` on all stored differentials.
    pub fn d_squared_is_zero(&self) -> Result<(), SseqError> {
        for (&bid, m) in &self.differentials {
            let mid = self.target_of_d(bid);
            let next = self.d_matrix(mid);
            if next.rows() == 0 || m.rows() == 0 {
                continue;
            }
            let composite = m.mul(&next);
            // entries must vanish mod the target orders
            let tgt2 = self.target_of_d(mid);
            let orders = self.orders_at(tgt2);
            for r in 0..composite.rows() {
                for (c, v) in composite.row_iter(r) {
                    if orders.get(c).map_or(v != 0, |&o| v % o != 0) {
                        return Err(SseqError::DifferentialSquare(bid));
                    }
                }
            }
        }
        Ok(())
    }

    /// Verify the Leibniz rule `d(xy) = d(x)y + (-1)^{|x|} x d(y)` on all
    /// generator pairs with a stored pairing.
    pub fn leibniz_check(&self) -> Result<(), SseqError> {
        for &(b1, b2) in self.pairing.keys() {
            let g1 = self.rank_at(b1);
            let g2 = self.rank_at(b2);
            for i in 0..g1 {
                for j in 0..g2 {
                    let x = self.basis_element(b1, i);
                    let y = self.basis_element(b2, j);
                    let lhs = self.d_apply(&self.product(&x, &y));
                    let dx_y = self.product(&self.d_apply(&x), &y);
                    let x_dy = self.product(&x, &self.d_apply(&y));
                    let sign = if b1.0.rem_euclid(2) == 0 { 1i64 } else { -1 };
                    let orders = self.orders_at(lhs.bidegree);
                    let rhs: Vec<u32> = dx_y
                        .coords
                        .iter()
                        .zip(&x_dy.coords)
                        .zip(&orders)
                        .map(|((&p, &q), &o)| {
                            let o = o as i64;
                            let signed = (p as i64 + sign * q as i64).rem_euclid(o);
                            signed as u32
                        })
                        .collect();
                    if lhs.coords != rhs {
                        return Err(SseqError::LeibnizFailure {
                            page: self.r,
                            left: (b1, i),
                            right: (b2, j),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn basis_element(&self, bid: Bidegree, i: usize) -> PageElement {
        let mut coords = vec![0; self.rank_at(bid)];
        coords[i] = 1;
        PageElement {
            bidegree: bid,
            coords,
        }
    }

    /// Render an element through the generator names ("2τ²" style).
    pub fn element_name(&self, elt: &PageElement) -> String {
        let Some(g) = self.group(elt.bidegree) else {
            return "0".to_string();
        };
        let mut parts = Vec::new();
        for (i, &c) in elt.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c == 1 {
                parts.push(g.names[i].clone());
            } else {
                parts.push(format!("{}{}", c, g.names[i]));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Deterministic JSON export: groups sorted by (n, f, name).
    pub fn to_json(&self, complete_through: Option<u32>) -> serde_json::Value {
        use serde_json::json;
        let groups: Vec<_> = self
            .groups
            .iter()
            .filter(|(_, g)| !g.orders.is_empty())
            .map(|(&(n, f), g)| {
                json!({
                    "n": n,
                    "f": f,
                    "orders": g.orders,
                    "names": g.names,
                })
            })
            .collect();
        let differentials: Vec<_> = self
            .differentials
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&(n, f), m)| {
                let rows: Vec<Vec<u32>> = (0..m.rows()).map(|r| m.row_dense(r)).collect();
                json!({"n": n, "f": f, "matrix": rows})
            })
            .collect();
        let pairing: Vec<_> = self
            .pairing
            .iter()
            .filter(|(_, t)| {
                t.iter()
                    .any(|row| row.iter().any(|e| e.iter().any(|&c| c != 0)))
            })
            .map(|(&((n1, f1), (n2, f2)), t)| {
                json!({"n1": n1, "f1": f1, "n2": n2, "f2": f2, "products": t})
            })
            .collect();
        json!({
            "r": self.r,
            "groups": groups,
            "differentials": differentials,
            "pairing": pairing,
            "complete_through": complete_through,
        })
    }
}
