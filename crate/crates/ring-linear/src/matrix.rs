use crate::{LinearError, Modulus};
use std::fmt;

/// Rows narrower than this are stored dense; wider rows fall back to a
/// sorted sparse representation. Charts are wide and sparse, the chain
/// complexes in the oracle are tiny and dense.
const DENSE_COL_LIMIT: usize = 64;

#[derive(Clone, PartialEq, Eq)]
enum Row {
    Dense(Vec<u32>),
    /// Sorted by column, never stores zeros.
    Sparse(Vec<(usize, u32)>),
}

impl Row {
    fn zero(cols: usize) -> Self {
        if cols < DENSE_COL_LIMIT {
            Row::Dense(vec![0; cols])
        } else {
            Row::Sparse(Vec::new())
        }
    }

    fn get(&self, c: usize) -> u32 {
        match self {
            Row::Dense(v) => v[c],
            Row::Sparse(v) => v
                .binary_search_by_key(&c, |&(col, _)| col)
                .map(|i| v[i].1)
                .unwrap_or(0),
        }
    }

    fn set(&mut self, c: usize, val: u32) {
        match self {
            Row::Dense(v) => v[c] = val,
            Row::Sparse(v) => match v.binary_search_by_key(&c, |&(col, _)| col) {
                Ok(i) => {
                    if val == 0 {
                        v.remove(i);
                    } else {
                        v[i].1 = val;
                    }
                }
                Err(i) => {
                    if val != 0 {
                        v.insert(i, (c, val));
                    }
                }
            },
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Row::Dense(v) => v.iter().all(|&x| x == 0),
            Row::Sparse(v) => v.is_empty(),
        }
    }

    fn iter_nonzero(&self) -> Box<dyn Iterator<Item = (usize, u32)> + '_> {
        match self {
            Row::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|&(_, &x)| x != 0)
                    .map(|(c, &x)| (c, x)),
            ),
            Row::Sparse(v) => Box::new(v.iter().copied()),
        }
    }

    fn scale(&mut self, zm: &Modulus, c: u32) {
        match self {
            Row::Dense(v) => {
                for x in v.iter_mut() {
                    *x = zm.mul(*x, c);
                }
            }
            Row::Sparse(v) => {
                v.retain_mut(|(_, x)| {
                    *x = zm.mul(*x, c);
                    *x != 0
                });
            }
        }
    }

    /// `self += c * other`.
    fn add_scaled(&mut self, zm: &Modulus, other: &Row, c: u32) {
        if c == 0 {
            return;
        }
        match (self, other) {
            (Row::Dense(a), Row::Dense(b)) => {
                for (x, &y) in a.iter_mut().zip(b.iter()) {
                    *x = zm.add(*x, zm.mul(c, y));
                }
            }
            (Row::Sparse(a), Row::Sparse(b)) => {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let next = match (a.get(i), b.get(j)) {
                        (Some(&(ca, va)), Some(&(cb, vb))) => {
                            if ca < cb {
                                i += 1;
                                (ca, va)
                            } else if cb < ca {
                                j += 1;
                                (cb, zm.mul(c, vb))
                            } else {
                                i += 1;
                                j += 1;
                                (ca, zm.add(va, zm.mul(c, vb)))
                            }
                        }
                        (Some(&(ca, va)), None) => {
                            i += 1;
                            (ca, va)
                        }
                        (None, Some(&(cb, vb))) => {
                            j += 1;
                            (cb, zm.mul(c, vb))
                        }
                        (None, None) => unreachable!(),
                    };
                    if next.1 != 0 {
                        out.push(next);
                    }
                }
                *a = out;
            }
            _ => unreachable!("rows of one matrix share a representation"),
        }
    }
}

/// A matrix over `Z/p^k` with row-major storage. Vectors are row vectors and
/// matrices act on the right, so `v * M` is the basic operation and row
/// operations are cheap.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    zm: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.zm)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row_dense(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(zm: Modulus, rows: usize, cols: usize) -> Self {
        Matrix {
            zm,
            rows,
            cols,
            data: (0..rows).map(|_| Row::zero(cols)).collect(),
        }
    }

    pub fn identity(zm: Modulus, n: usize) -> Self {
        let mut m = Matrix::zero(zm, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from dense signed entries (reduced mod `m`).
    pub fn from_dense(zm: Modulus, entries: &[Vec<i64>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = Matrix::zero(zm, rows, cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, zm.reduce(x));
            }
        }
        m
    }

    pub fn from_rows(zm: Modulus, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let mut m = Matrix::zero(zm, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x % zm.m().max(1));
            }
        }
        m
    }

    pub fn modulus(&self) -> Modulus {
        self.zm
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, val: u32) {
        self.data[r].set(c, val % self.zm.m());
    }

    pub fn row_dense(&self, r: usize) -> Vec<u32> {
        let mut out = vec![0; self.cols];
        for (c, v) in self.data[r].iter_nonzero() {
            out[c] = v;
        }
        out
    }

    pub fn row_iter(&self, r: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.data[r].iter_nonzero()
    }

    pub fn set_row(&mut self, r: usize, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data[r] = Row::zero(self.cols);
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                self.data[r].set(c, v % self.zm.m());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Row::is_zero)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.data[r].is_zero()
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.push(Row::zero(self.cols));
        self.rows += 1;
        let r = self.rows - 1;
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                self.set(r, c, v);
            }
        }
    }

    /// Vertically stack `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.zm, other.zm);
        let mut out = self.clone();
        for r in 0..other.rows {
            out.data.push(other.data[r].clone());
        }
        out.rows += other.rows;
        out
    }

    /// Horizontally adjoin (`[self | other]`).
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.zm, other.zm);
        let mut out = Matrix::zero(self.zm, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for (c, v) in self.row_iter(r) {
                out.set(r, c, v);
            }
            for (c, v) in other.row_iter(r) {
                out.set(r, self.cols + c, v);
            }
        }
        out
    }

    /// Keep columns `[lo, hi)`.
    pub fn column_block(&self, lo: usize, hi: usize) -> Matrix {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = Matrix::zero(self.zm, self.rows, hi - lo);
        for r in 0..self.rows {
            for (c, v) in self.row_iter(r) {
                if c >= lo && c < hi {
                    out.set(r, c - lo, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.zm, self.cols, self.rows);
        for r in 0..self.rows {
            for (c, v) in self.row_iter(r) {
                out.set(c, r, v);
            }
        }
        out
    }

    /// `v * M` for a row vector `v`.
    pub fn apply_left(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "row vector length mismatch");
        let mut out = vec![0u32; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for (c, x) in self.row_iter(r) {
                out[c] = self.zm.add(out[c], self.zm.mul(coef, x));
            }
        }
        out
    }

    /// `M * x` for a column vector `x`.
    pub fn apply_right(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols, "column vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u32;
                for (c, v) in self.row_iter(r) {
                    acc = self.zm.add(acc, self.zm.mul(v, x[c]));
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zero(self.zm, self.rows, other.cols);
        for r in 0..self.rows {
            let prod = other.apply_left(&self.row_dense(r));
            out.set_row(r, &prod);
        }
        out
    }

    pub fn scale_row(&mut self, r: usize, c: u32) {
        self.data[r].scale(&self.zm, c);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    /// `row[dst] += c * row[src]`.
    pub fn row_add_scaled(&mut self, dst: usize, src: usize, c: u32) {
        if dst == src {
            let mut tmp = self.data[src].clone();
            tmp.scale(&self.zm, self.zm.add(1, c));
            self.data[dst] = tmp;
            return;
        }
        let src_row = std::mem::replace(&mut self.data[src], Row::zero(0));
        self.data[dst].add_scaled(&self.zm, &src_row, c);
        self.data[src] = src_row;
    }

    /// Drop zero rows (used for presentation, not for the `(H, U)` pair).
    pub fn without_zero_rows(&self) -> Matrix {
        let mut out = Matrix::zero(self.zm, 0, self.cols);
        for r in 0..self.rows {
            if !self.row_is_zero(r) {
                out.data.push(self.data[r].clone());
                out.rows += 1;
            }
        }
        out
    }

    pub fn check_same_modulus(&self, other: &Matrix) -> Result<(), LinearError> {
        if self.zm != other.zm {
            return Err(LinearError::ModulusMismatch(
                self.zm.to_string(),
                other.zm.to_string(),
            ));
        }
        Ok(())
    }
}

/// Result of `howell_form`: `h = u * m_padded` where `m_padded` is the input
/// with zero rows appended to match `h.rows()`, and `u` is invertible over
/// `Z/p^k`. Nonzero rows of `h` come first and give the unique Howell basis
/// of the row span.
#[derive(Clone)]
pub struct HowellForm {
    pub h: Matrix,
    pub u: Matrix,
    /// `(row, col, p^v)` for each pivot, in row order.
    pub pivots: Vec<(usize, usize, u32)>,
}

impl HowellForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`: the canonical Howell basis of the span.
    pub fn basis(&self) -> Matrix {
        let mut out = Matrix::zero(self.h.modulus(), 0, self.h.cols());
        for i in 0..self.rank() {
            let mut next = Matrix::zero(self.h.modulus(), 1, self.h.cols());
            next.set_row(0, &self.h.row_dense(i));
            out = out.vstack(&next);
        }
        out
    }
}

impl Matrix {
    /// Howell normal form with transformation matrix.
    ///
    /// The working matrix is padded with enough zero rows that every
    /// saturation step (`p^{k-v}` times a pivot row) is an elementary row
    /// operation into a vacant row, which keeps `u` invertible throughout.
    /// Untouched padding is trimmed before returning.
    #[allow(clippy::needless_range_loop)]
    pub fn howell_form(&self) -> HowellForm {
        let zm = self.zm;
        let pad = self.rows + self.cols;
        let mut h = Matrix::zero(zm, pad, self.cols);
        for r in 0..self.rows {
            h.data[r] = self.data[r].clone();
        }
        let mut u = Matrix::identity(zm, pad);
        let mut touched = vec![false; pad];
        for t in touched.iter_mut().take(self.rows) {
            *t = true;
        }

        let mut next = 0usize;
        let mut pivots: Vec<(usize, usize, u32)> = Vec::new();
        for col in 0..self.cols {
            // Minimum-valuation pivot among unprocessed rows.
            let mut best: Option<(usize, u32)> = None;
            for r in next..pad {
                let x = h.get(r, col);
                if x != 0 {
                    let v = zm.val(x);
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((r, v));
                    }
                }
            }
            let Some((prow, v)) = best else { continue };
            if prow != next {
                h.swap_rows(prow, next);
                u.swap_rows(prow, next);
                touched.swap(prow, next);
            }
            // Normalize the pivot to exactly p^v.
            let lead = h.get(next, col);
            let unit = lead / zm.pow_p(v);
            let inv = zm.unit_inv(unit);
            h.scale_row(next, inv);
            u.scale_row(next, inv);
            let pivot_val = zm.pow_p(v);

            // Clear the column: exact elimination below (valuation >= v by
            // pivot choice), reduction mod p^v above.
            for r in 0..pad {
                if r == next {
                    continue;
                }
                let x = h.get(r, col);
                if x == 0 {
                    continue;
                }
                let q = x / pivot_val;
                if q != 0 {
                    let c = zm.neg(q);
                    h.row_add_scaled(r, next, c);
                    u.row_add_scaled(r, next, c);
                    touched[r] = true;
                }
            }

            // Saturation: p^{k-v} times the pivot row spans the part of the
            // row span supported past this column.
            if v > 0 {
                let mult = zm.pow_p(zm.k() - v);
                let sat: Vec<u32> = h
                    .row_dense(next)
                    .iter()
                    .map(|&x| zm.mul(x, mult))
                    .collect();
                if sat.iter().any(|&x| x != 0) {
                    let z = (next + 1..pad)
                        .find(|&r| h.row_is_zero(r))
                        .expect("padding exhausted");
                    h.row_add_scaled(z, next, mult);
                    u.row_add_scaled(z, next, mult);
                    touched[z] = true;
                }
            }

            pivots.push((next, col, pivot_val));
            next += 1;
        }

        // Permute so that pivot rows keep their order and all zero rows sink
        // to the bottom; drop never-touched padding (with its identity
        // column) so u stays square and invertible.
        let mut order: Vec<usize> = (0..pad).filter(|&r| !h.row_is_zero(r)).collect();
        let zero_rows: Vec<usize> = (0..pad)
            .filter(|&r| h.row_is_zero(r) && (touched[r] || r < self.rows))
            .collect();
        order.extend_from_slice(&zero_rows);
        let dropped: Vec<usize> = (0..pad)
            .filter(|&r| h.row_is_zero(r) && !touched[r] && r >= self.rows)
            .collect();

        let out_rows = order.len();
        let mut h_out = Matrix::zero(zm, out_rows, self.cols);
        let mut u_out = Matrix::zero(zm, out_rows, out_rows);
        // An untouched padding row was never the source or destination of a
        // row operation, so its u row is a standard basis vector and that
        // basis column is empty elsewhere; removing the row/column pair
        // preserves invertibility. Swaps may have moved the row, so the
        // column to drop is read off the row itself.
        let mut dropped_cols: Vec<usize> = Vec::with_capacity(dropped.len());
        for &r in &dropped {
            let nz: Vec<(usize, u32)> = u.row_iter(r).collect();
            debug_assert!(nz.len() == 1 && nz[0].1 == 1);
            dropped_cols.push(nz[0].0);
        }
        let col_map: Vec<usize> = (0..pad).filter(|c| !dropped_cols.contains(c)).collect();
        for (i, &r) in order.iter().enumerate() {
            let dense = h.row_dense(r);
            h_out.set_row(i, &dense);
            let urow = u.row_dense(r);
            for (j, &c) in col_map.iter().enumerate() {
                if urow[c] != 0 {
                    u_out.set(i, j, urow[c]);
                }
            }
        }
        let pivots = pivots
            .into_iter()
            .enumerate()
            .map(|(i, (_, col, pv))| (i, col, pv))
            .collect();
        HowellForm {
            h: h_out,
            u: u_out,
            pivots,
        }
    }

    /// The unique Howell basis of the row span (zero rows trimmed).
    pub fn howell_basis(&self) -> Matrix {
        self.howell_form().basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    #[test]
    fn identity_is_its_own_howell_form() {
        let zm = z(2, 2);
        let m = Matrix::identity(zm, 3);
        let hf = m.howell_form();
        assert_eq!(hf.h, Matrix::identity(zm, 3));
        assert_eq!(hf.u, Matrix::identity(zm, 3));
    }

    #[test]
    fn keeps_non_unit_row() {
        // 2 generates the unique proper ideal of Z/4.
        let zm = z(2, 2);
        let m = Matrix::from_dense(zm, &[vec![2]]);
        let hf = m.howell_form();
        assert_eq!(hf.basis(), Matrix::from_dense(zm, &[vec![2]]));
    }

    #[test]
    fn saturation_row_appears() {
        // span{(2,1)} in (Z/4)^2 contains (0,2); the Howell form must show it.
        let zm = z(2, 2);
        let m = Matrix::from_dense(zm, &[vec![2, 1]]);
        let basis = m.howell_basis();
        assert_eq!(basis.rows(), 2);
        assert_eq!(basis.row_dense(0), vec![2, 1]);
        assert_eq!(basis.row_dense(1), vec![0, 2]);
    }

    #[test]
    fn h_equals_u_times_padded_input() {
        let zm = z(2, 3);
        let m = Matrix::from_dense(zm, &[vec![2, 4, 1], vec![4, 0, 6], vec![2, 4, 7]]);
        let hf = m.howell_form();
        let mut padded = m.clone();
        while padded.rows() < hf.h.rows() {
            padded.push_row(&vec![0; m.cols()]);
        }
        assert_eq!(hf.u.mul(&padded), hf.h);
        // u invertible iff its rows span everything.
        let u_basis = hf.u.howell_basis();
        assert_eq!(u_basis, Matrix::identity(zm, hf.u.rows()));
    }

    #[test]
    fn sparse_representation_used_for_wide_rows() {
        let zm = z(3, 1);
        let mut m = Matrix::zero(zm, 2, 100);
        m.set(0, 7, 2);
        m.set(1, 7, 1);
        m.set(1, 93, 1);
        let b = m.howell_basis();
        assert_eq!(b.get(0, 7), 1);
        assert_eq!(b.rows(), 2);
        assert_eq!(b.get(1, 93), 1);
    }
}
