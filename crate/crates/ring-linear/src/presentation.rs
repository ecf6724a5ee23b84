use crate::{LinearError, Matrix, Modulus};
use std::fmt;

/// A finite abelian p-group presented as a direct sum of cyclic groups of
/// prime-power order, sorted descending. Order-1 summands are pruned.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub orders: Vec<u32>,
}

impl fmt::Debug for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z/{o}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl GroupPresentation {
    pub fn trivial() -> Self {
        GroupPresentation { orders: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn size(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    pub fn reduce(&self, coords: &mut [u32]) {
        for (c, &o) in coords.iter_mut().zip(&self.orders) {
            *c %= o;
        }
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.orders
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&o, (&x, &y))| (x + y) % o)
            .collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        self.orders
            .iter()
            .zip(a)
            .map(|(&o, &x)| if x == 0 { 0 } else { o - x })
            .collect()
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: i64, a: &[u32]) -> Vec<u32> {
        self.orders
            .iter()
            .zip(a)
            .map(|(&o, &x)| {
                let o64 = o as i64;
                let c = ((c % o64) + o64) % o64;
                ((c * x as i64) % o64) as u32
            })
            .collect()
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.orders.len()]
    }

    pub fn is_zero_elt(&self, a: &[u32]) -> bool {
        a.iter().zip(&self.orders).all(|(&x, &o)| x % o == 0)
    }

    /// All elements, in lexicographic coordinate order. Callers must bound
    /// the group size first.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &o in &self.orders {
            let mut next = Vec::with_capacity(out.len() * o as usize);
            for prefix in &out {
                for v in 0..o {
                    let mut e = prefix.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

/// Result of diagonalizing a relation matrix over `Z/p^k`. Smith-style
/// elimination works here because the ring is local: a global minimum-
/// valuation pivot divides every remaining entry.
struct Diagonalized {
    /// Diagonal entries (valuations as p-powers), one per column of the
    /// relation matrix that received a relation; absent columns are free.
    diag: Vec<u32>,
    /// Column transform: new coords = old coords * v.
    v: Matrix,
    /// Inverse of `v`: generator lifts are rows of `w`.
    w: Matrix,
}

fn diagonalize(zm: Modulus, rel: &Matrix) -> Diagonalized {
    let s = rel.cols();
    let t = rel.rows();
    let mut d = rel.clone();
    let mut v = Matrix::identity(zm, s);
    let mut w = Matrix::identity(zm, s);

    // Column ops on d are mirrored on v (same op) and w (inverse op, applied
    // on the other side) so that v * w = identity throughout.
    let col_swap = |d: &mut Matrix, v: &mut Matrix, w: &mut Matrix, a: usize, b: usize| {
        let (da, db) = (column(d, a), column(d, b));
        set_column(d, a, &db);
        set_column(d, b, &da);
        let (va, vb) = (column(v, a), column(v, b));
        set_column(v, a, &vb);
        set_column(v, b, &va);
        w.swap_rows(a, b);
    };

    let mut rank = 0usize;
    let mut diag = Vec::new();
    while rank < t.min(s) {
        // Global minimum-valuation entry in the remaining block.
        let mut best: Option<(usize, usize, u32)> = None;
        for r in rank..t {
            for (c, x) in d.row_iter(r) {
                if c < rank || x == 0 {
                    continue;
                }
                let val = zm.val(x);
                if best.is_none_or(|(_, _, bv)| val < bv) {
                    best = Some((r, c, val));
                }
            }
        }
        let Some((pr, pc, pv)) = best else { break };
        if pr != rank {
            d.swap_rows(pr, rank);
        }
        if pc != rank {
            col_swap(&mut d, &mut v, &mut w, pc, rank);
        }
        // Normalize pivot to p^v by a unit row scaling (row ops on the
        // relation matrix need no tracking: they change the relations by an
        // invertible transformation, not the generators).
        let lead = d.get(rank, rank);
        let unit = lead / zm.pow_p(pv);
        d.scale_row(rank, zm.unit_inv(unit));
        let pivot = zm.pow_p(pv);
        // Clear the pivot column with row ops.
        for r in 0..t {
            if r == rank {
                continue;
            }
            let x = d.get(r, rank);
            if x != 0 {
                debug_assert!(zm.val(x) >= pv);
                d.row_add_scaled(r, rank, zm.neg(x / pivot));
            }
        }
        // Clear the pivot row with column ops: col_c -= q * col_rank.
        for c in rank + 1..s {
            let x = d.get(rank, c);
            if x == 0 {
                continue;
            }
            debug_assert!(zm.val(x) >= pv);
            let q = x / pivot;
            let neg_q = zm.neg(q);
            // d: col_c += neg_q * col_rank; same for v; w gets the inverse
            // op on rows: row_rank += q * row_c.
            let dcol: Vec<u32> = column(&d, rank);
            add_scaled_column(&mut d, c, &dcol, neg_q, zm);
            let vcol: Vec<u32> = column(&v, rank);
            add_scaled_column(&mut v, c, &vcol, neg_q, zm);
            w.row_add_scaled(rank, c, q);
        }
        diag.push(pivot);
        rank += 1;
    }
    Diagonalized { diag, v, w }
}

fn column(m: &Matrix, c: usize) -> Vec<u32> {
    (0..m.rows()).map(|r| m.get(r, c)).collect()
}

fn set_column(m: &mut Matrix, c: usize, col: &[u32]) {
    for (r, &x) in col.iter().enumerate() {
        m.set(r, c, x);
    }
}

fn add_scaled_column(m: &mut Matrix, c: usize, src: &[u32], coef: u32, zm: Modulus) {
    for (r, &x) in src.iter().enumerate() {
        let cur = m.get(r, c);
        m.set(r, c, zm.add(cur, zm.mul(coef, x)));
    }
}

/// Presentation of `span(Z) / span(B)` as a direct sum of cyclic p-groups,
/// together with a section (generator lifts into the ambient module) and a
/// projection (ambient element of `span(Z)` to canonical coordinates).
#[derive(Clone)]
pub struct SubquotientPresentation {
    zm: Modulus,
    ambient_cols: usize,
    pub group: GroupPresentation,
    /// Rows: ambient representative of each group generator.
    lifts: Matrix,
    /// Howell form data of span(Z), for projecting.
    z_form: crate::HowellForm,
    /// Coordinate change: coefficients against the z basis -> diagonal coords.
    v: Matrix,
    /// Indices of the kept (order > 1) diagonal coordinates.
    kept: Vec<usize>,
}

impl fmt::Debug for SubquotientPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.group)
    }
}

impl SubquotientPresentation {
    /// `z` and `b` are row-span generators with `span(b) <= span(z)`.
    pub fn new(z: &Matrix, b: &Matrix) -> Result<Self, LinearError> {
        z.check_same_modulus(b)?;
        if z.cols() != b.cols() {
            return Err(LinearError::DimensionMismatch {
                context: "subquotient: ambient dimensions differ".into(),
                expected: z.cols(),
                got: b.cols(),
            });
        }
        let zm = z.modulus();
        let z_basis = z.howell_basis();
        // Re-run on the basis itself so pivots index the trimmed rows.
        let zf = z_basis.howell_form();
        let s = z_basis.rows();

        // Relations: every row of b expressed in the z basis, plus the
        // torsion relations among the Howell basis rows themselves.
        let mut rel = Matrix::zero(zm, 0, s);
        for r in 0..b.rows() {
            let row = b.row_dense(r);
            let coeffs = zf
                .coefficients_of(&row)
                .ok_or(LinearError::NotASubgroup)?;
            rel.push_row(&coeffs);
        }
        for &(row, _, pival) in &zf.pivots {
            let v = zm.val(pival);
            if v == 0 {
                continue;
            }
            let mult = zm.pow_p(zm.k() - v);
            let scaled: Vec<u32> = z_basis
                .row_dense(row)
                .iter()
                .map(|&x| zm.mul(x, mult))
                .collect();
            let coeffs = zf
                .coefficients_of(&scaled)
                .expect("torsion multiple stays in span");
            let mut relrow = coeffs.iter().map(|&c| zm.neg(c)).collect::<Vec<_>>();
            relrow[row] = zm.add(relrow[row], mult);
            rel.push_row(&relrow);
        }

        let dg = diagonalize(zm, &rel);
        let mut orders = Vec::new();
        let mut kept = Vec::new();
        for j in 0..s {
            let order = if j < dg.diag.len() {
                zm.pow_p(zm.val(dg.diag[j]))
            } else {
                zm.m()
            };
            if order > 1 {
                kept.push(j);
                orders.push(order);
            }
        }
        // Sort descending by order, keeping a stable tie order.
        let mut idx: Vec<usize> = (0..kept.len()).collect();
        idx.sort_by_key(|&i| std::cmp::Reverse(orders[i]));
        let kept: Vec<usize> = idx.iter().map(|&i| kept[i]).collect();
        let orders: Vec<u32> = idx.iter().map(|&i| orders[i]).collect();

        let mut lifts = Matrix::zero(zm, kept.len(), z.cols());
        for (out_row, &j) in kept.iter().enumerate() {
            let wj = dg.w.row_dense(j);
            let amb = z_basis.apply_left(&wj);
            lifts.set_row(out_row, &amb);
        }

        Ok(SubquotientPresentation {
            zm,
            ambient_cols: z.cols(),
            group: GroupPresentation { orders },
            lifts,
            z_form: zf,
            v: dg.v,
            kept,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.zm
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_cols
    }

    pub fn orders(&self) -> &[u32] {
        &self.group.orders
    }

    /// Ambient representative of a group element.
    pub fn lift(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.group.len());
        self.lifts.apply_left(coords)
    }

    pub fn generator_lift(&self, i: usize) -> Vec<u32> {
        self.lifts.row_dense(i)
    }

    /// Canonical coordinates of an ambient element of `span(Z)`.
    pub fn project(&self, ambient: &[u32]) -> Result<Vec<u32>, LinearError> {
        if ambient.len() != self.ambient_cols {
            return Err(LinearError::DimensionMismatch {
                context: "project: ambient dimension".into(),
                expected: self.ambient_cols,
                got: ambient.len(),
            });
        }
        let coeffs = self
            .z_form
            .coefficients_of(ambient)
            .ok_or(LinearError::NotInSpan)?;
        let diag_coords = self.v.apply_left(&coeffs);
        let out = self
            .kept
            .iter()
            .zip(&self.group.orders)
            .map(|(&j, &o)| diag_coords[j] % o)
            .collect();
        Ok(out)
    }

    pub fn contains(&self, ambient: &[u32]) -> bool {
        self.z_form.coefficients_of(ambient).is_some()
    }
}
