//! Subgroup calculus for presented p-groups.
//!
//! A group `G = ⊕ Z/o_i` is handled through its coordinate module
//! `(Z/p^k)^s` together with the relation rows `o_i * e_i`. Subgroups are
//! row spans that implicitly contain the relations; maps between groups are
//! generator-image matrices. Everything reduces to Howell forms of stacked
//! matrices.

use crate::{Matrix, Modulus};

/// Diagonal relation matrix `o_i * e_i` for a presented group.
pub fn relation_rows(zm: Modulus, orders: &[u32]) -> Matrix {
    let mut m = Matrix::zero(zm, orders.len(), orders.len());
    for (i, &o) in orders.iter().enumerate() {
        m.set(i, i, o % zm.m());
    }
    m
}

/// Canonical (Howell) basis of the subgroup generated by `rows` inside the
/// group with the given orders. Two subgroups are equal iff their canonical
/// bases are equal.
pub fn subgroup_basis(rows: &Matrix, orders: &[u32]) -> Matrix {
    let rel = relation_rows(rows.modulus(), orders);
    rows.vstack(&rel).howell_basis()
}

pub fn subgroup_contains(subgroup_rows: &Matrix, orders: &[u32], elt: &[u32]) -> bool {
    let basis = subgroup_basis(subgroup_rows, orders);
    basis.row_member(elt)
}

pub fn subgroup_eq(a: &Matrix, b: &Matrix, orders: &[u32]) -> bool {
    subgroup_basis(a, orders) == subgroup_basis(b, orders)
}

/// Is every element of `inner` contained in `outer`?
pub fn subgroup_leq(inner: &Matrix, outer: &Matrix, orders: &[u32]) -> bool {
    let ob = subgroup_basis(outer, orders);
    (0..inner.rows()).all(|r| ob.row_member(&inner.row_dense(r)))
}

/// Image of a map `G -> G'` given by generator rows, as a subgroup of `G'`.
pub fn map_image(map: &Matrix, tgt_orders: &[u32]) -> Matrix {
    subgroup_basis(map, tgt_orders)
}

/// Kernel of a map `G -> G'`: all source coordinates mapping into the
/// relations of the target.
pub fn map_kernel(map: &Matrix, src_orders: &[u32], tgt_orders: &[u32]) -> Matrix {
    let zm = map.modulus();
    let rel = relation_rows(zm, tgt_orders);
    let stacked = map.vstack(&rel);
    let ker = stacked.left_kernel();
    let mut gens = Matrix::zero(zm, 0, src_orders.len());
    for r in 0..ker.rows() {
        let row = ker.row_dense(r);
        gens.push_row(&row[..src_orders.len()]);
    }
    let src_rel = relation_rows(zm, src_orders);
    gens.vstack(&src_rel).howell_basis()
}

/// Preimage of the subgroup spanned by `tgt_rows` under `map`.
pub fn map_preimage(
    map: &Matrix,
    src_orders: &[u32],
    tgt_rows: &Matrix,
    tgt_orders: &[u32],
) -> Matrix {
    let zm = map.modulus();
    let rel = relation_rows(zm, tgt_orders);
    let stacked = map.vstack(tgt_rows).vstack(&rel);
    let ker = stacked.left_kernel();
    let mut gens = Matrix::zero(zm, 0, src_orders.len());
    for r in 0..ker.rows() {
        let row = ker.row_dense(r);
        gens.push_row(&row[..src_orders.len()]);
    }
    let src_rel = relation_rows(zm, src_orders);
    gens.vstack(&src_rel).howell_basis()
}

/// Lexicographically least representative of `elt + span(subgroup)`:
/// greedy Howell reduction minimizes coordinates left to right.
pub fn canonical_coset_rep(subgroup_rows: &Matrix, orders: &[u32], elt: &[u32]) -> Vec<u32> {
    let zm = subgroup_rows.modulus();
    let basis = subgroup_basis(subgroup_rows, orders);
    let hf = basis.howell_form();
    let mut rep = elt.to_vec();
    for &(row, col, pival) in &hf.pivots {
        let t = rep[col] / pival;
        if t != 0 {
            let neg = zm.neg(t);
            for (c, v) in hf.h.row_iter(row) {
                rep[c] = zm.add(rep[c], zm.mul(neg, v));
            }
        }
    }
    rep
}
