//! Independent dense eliminator used as an oracle for the Howell form.
//!
//! The oracle works on plain `Vec<Vec<u32>>` rows with a from-scratch
//! worklist algorithm: reduce each row against the accumulated pivots,
//! install surviving rows as new pivots, and whenever a pivot has positive
//! valuation feed `p^{k-v}` times it back into the worklist. It shares no
//! code with the production path.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use ring_linear::{Matrix, Modulus};

struct DenseOracle {
    m: u32,
    p: u32,
    k: u32,
}

impl DenseOracle {
    fn new(p: u32, k: u32) -> Self {
        DenseOracle {
            m: p.pow(k),
            p,
            k,
        }
    }

    fn val(&self, x: u32) -> u32 {
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut x = x;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn inv_unit(&self, x: u32) -> u32 {
        for c in 0..self.m {
            if (c as u64 * x as u64) % self.m as u64 == 1 {
                return c;
            }
        }
        panic!("not a unit");
    }

    fn howell(&self, rows: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
        // pivots[c] = row with leading entry at column c
        let mut pivots: Vec<Option<Vec<u32>>> = vec![None; cols];
        let mut work: Vec<Vec<u32>> = rows.to_vec();
        while let Some(mut row) = work.pop() {
            // reduce against existing pivots left to right
            let mut lead = None;
            for c in 0..cols {
                if row[c] == 0 {
                    continue;
                }
                match &pivots[c] {
                    Some(pv) => {
                        let pval = self.p.pow(self.val(pv[c]));
                        if self.val(row[c]) >= self.val(pv[c]) {
                            let q = row[c] / pval;
                            for j in 0..cols {
                                row[j] = ((row[j] as u64 + self.m as u64
                                    - (q as u64 * pv[j] as u64) % self.m as u64)
                                    % self.m as u64)
                                    as u32;
                            }
                        } else {
                            // smaller valuation: swap roles
                            let old = pivots[c].take().unwrap();
                            work.push(old);
                            lead = Some(c);
                            break;
                        }
                    }
                    None => {
                        lead = Some(c);
                        break;
                    }
                }
            }
            let Some(c) = lead else { continue };
            // normalize to p^v
            let v = self.val(row[c]);
            let unit = row[c] / self.p.pow(v);
            let inv = self.inv_unit(unit);
            for x in row.iter_mut() {
                *x = ((*x as u64 * inv as u64) % self.m as u64) as u32;
            }
            // saturation
            if v > 0 {
                let mult = self.p.pow(self.k - v);
                let sat: Vec<u32> = row
                    .iter()
                    .map(|&x| ((x as u64 * mult as u64) % self.m as u64) as u32)
                    .collect();
                if sat.iter().any(|&x| x != 0) {
                    work.push(sat);
                }
            }
            pivots[c] = Some(row);
        }
        // Final inter-reduction, left to right: entries of earlier pivot
        // rows at column c end up reduced mod p^{v_c}, and later passes only
        // touch later columns.
        let cols_with: Vec<usize> = (0..cols).filter(|&c| pivots[c].is_some()).collect();
        for &c in cols_with.iter() {
            let pv = pivots[c].clone().unwrap();
            let pval = self.p.pow(self.val(pv[c]));
            for &c2 in &cols_with {
                if c2 >= c {
                    continue;
                }
                let row = pivots[c2].as_mut().unwrap();
                let q = row[c] / pval;
                if q != 0 {
                    for j in 0..cols {
                        row[j] = ((row[j] as u64 + self.m as u64
                            - (q as u64 * pv[j] as u64) % self.m as u64)
                            % self.m as u64) as u32;
                    }
                }
            }
        }
        cols_with
            .into_iter()
            .map(|c| pivots[c].clone().unwrap())
            .collect()
    }
}

fn random_matrix(rng: &mut Pcg64Mcg, zm: Modulus, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zero(zm, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.random_range(0..zm.m()));
        }
    }
    m
}

#[test]
fn howell_matches_dense_oracle_seed_1() {
    let zm = Modulus::new(2, 3).unwrap();
    let oracle = DenseOracle::new(2, 3);
    let mut rng = Pcg64Mcg::seed_from_u64(1);
    let m = random_matrix(&mut rng, zm, 6, 6);
    let dense_rows: Vec<Vec<u32>> = (0..6).map(|r| m.row_dense(r)).collect();
    let expected = oracle.howell(&dense_rows, 6);
    let got = m.howell_basis();
    assert_eq!(got.rows(), expected.len());
    for (r, exp) in expected.iter().enumerate() {
        assert_eq!(&got.row_dense(r), exp, "row {r} differs");
    }
}

#[test]
fn howell_matches_dense_oracle_many_shapes() {
    for (p, k) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)] {
        let zm = Modulus::new(p, k).unwrap();
        let oracle = DenseOracle::new(p, k);
        let mut rng = Pcg64Mcg::seed_from_u64(1000 + p as u64 * 10 + k as u64);
        for _ in 0..40 {
            let rows = rng.random_range(0..6);
            let cols = rng.random_range(1..6);
            let m = random_matrix(&mut rng, zm, rows, cols);
            let dense_rows: Vec<Vec<u32>> = (0..rows).map(|r| m.row_dense(r)).collect();
            let expected = oracle.howell(&dense_rows, cols);
            let got = m.howell_basis();
            let got_rows: Vec<Vec<u32>> = (0..got.rows()).map(|r| got.row_dense(r)).collect();
            assert_eq!(got_rows, expected, "mismatch for {rows}x{cols} mod {p}^{k}");
        }
    }
}

/// Exhaustive span check on tiny matrices: the Howell basis spans exactly
/// the set of all row combinations.
#[test]
fn howell_span_is_exact_exhaustive() {
    let zm = Modulus::new(2, 2).unwrap();
    let m = zm.m();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mat = Matrix::from_dense(zm, &[vec![a as i64, b as i64], vec![c as i64, d as i64]]);
                    let mut span = std::collections::BTreeSet::new();
                    for x in 0..m {
                        for y in 0..m {
                            let v = mat.apply_left(&[x, y]);
                            span.insert(v);
                        }
                    }
                    let basis = mat.howell_basis();
                    for v in &span {
                        assert!(basis.row_member(v), "span member missing");
                    }
                    // and the basis itself generates no more
                    let mut from_basis = std::collections::BTreeSet::new();
                    let coeffs: Vec<Vec<u32>> = match basis.rows() {
                        0 => vec![vec![]],
                        1 => (0..m).map(|x| vec![x]).collect(),
                        2 => (0..m)
                            .flat_map(|x| (0..m).map(move |y| vec![x, y]))
                            .collect(),
                        _ => panic!("basis too large"),
                    };
                    for cf in coeffs {
                        from_basis.insert(basis.apply_left(&cf));
                    }
                    assert_eq!(span, from_basis);
                }
            }
        }
    }
}
