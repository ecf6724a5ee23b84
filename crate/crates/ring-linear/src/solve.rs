use crate::matrix::HowellForm;
use crate::{LinearError, Matrix};

/// Full solution set of `M * x = v`: `x0` plus the row span of `kernel`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x0: Vec<u32>,
    pub kernel: Matrix,
}

impl HowellForm {
    /// Greedy reduction of `v` against the Howell basis. Returns the
    /// coefficient of each pivot row, or `None` if `v` is not in the span.
    pub fn coefficients_of(&self, v: &[u32]) -> Option<Vec<u32>> {
        let zm = self.h.modulus();
        assert_eq!(v.len(), self.h.cols());
        let mut residual = v.to_vec();
        let mut coeffs = vec![0u32; self.rank()];
        for &(row, col, pival) in &self.pivots {
            let x = residual[col];
            if x == 0 {
                continue;
            }
            if !x.is_multiple_of(pival) {
                return None;
            }
            let t = x / pival;
            coeffs[row] = t;
            let neg = zm.neg(t);
            for (c, hv) in self.h.row_iter(row) {
                residual[c] = zm.add(residual[c], zm.mul(neg, hv));
            }
        }
        if residual.iter().all(|&x| x == 0) {
            Some(coeffs)
        } else {
            None
        }
    }
}

impl Matrix {
    /// Is `v` in the row span? If so, return a combination of the original
    /// rows producing it.
    pub fn row_combination_for(&self, v: &[u32]) -> Option<Vec<u32>> {
        let hf = self.howell_form();
        let coeffs = hf.coefficients_of(v)?;
        let mut full = vec![0u32; hf.u.rows()];
        full[..coeffs.len()].copy_from_slice(&coeffs);
        let combo = hf.u.apply_left(&full);
        Some(combo[..self.rows()].to_vec())
    }

    pub fn row_member(&self, v: &[u32]) -> bool {
        self.howell_form().coefficients_of(v).is_some()
    }

    /// Generators of the left kernel `{ y : y * self = 0 }`, as a Howell
    /// basis. Combines the transformation rows that produced zero rows with
    /// the torsion relations `p^{k-v} * (pivot row)` re-expressed in the
    /// basis.
    pub fn left_kernel(&self) -> Matrix {
        let zm = self.modulus();
        if self.rows() == 0 {
            return Matrix::zero(zm, 0, 0);
        }
        let hf = self.howell_form();
        let mut gens = Matrix::zero(zm, 0, self.rows());
        let push_combo = |gens: &mut Matrix, z: &[u32]| {
            let combo = hf.u.apply_left(z);
            gens.push_row(&combo[..self.rows()]);
        };
        for r in hf.rank()..hf.h.rows() {
            let mut z = vec![0u32; hf.u.rows()];
            z[r] = 1;
            push_combo(&mut gens, &z);
        }
        for &(row, _, pival) in &hf.pivots {
            let v = zm.val(pival);
            if v == 0 {
                continue;
            }
            let mult = zm.pow_p(zm.k() - v);
            let scaled: Vec<u32> = hf
                .h
                .row_dense(row)
                .iter()
                .map(|&x| zm.mul(x, mult))
                .collect();
            let coeffs = hf
                .coefficients_of(&scaled)
                .expect("saturation must stay in the span");
            let mut z = vec![0u32; hf.u.rows()];
            for (i, &c) in coeffs.iter().enumerate() {
                z[i] = zm.neg(c);
            }
            z[row] = zm.add(z[row], mult);
            push_combo(&mut gens, &z);
        }
        gens.howell_basis()
    }

    /// Generators of the right kernel `{ x : self * x = 0 }` (as rows).
    pub fn right_kernel(&self) -> Matrix {
        self.transpose().left_kernel()
    }

    /// Solve `self * x = v` over `Z/p^k`. Returns `None` when unsolvable.
    pub fn solve(&self, v: &[u32]) -> Result<Option<Solution>, LinearError> {
        if v.len() != self.rows() {
            return Err(LinearError::DimensionMismatch {
                context: "solve: rhs length must equal row count".into(),
                expected: self.rows(),
                got: v.len(),
            });
        }
        let t = self.transpose();
        if self.cols() == 0 {
            let zm = self.modulus();
            return Ok(if v.iter().all(|&x| x == 0) {
                Some(Solution {
                    x0: Vec::new(),
                    kernel: Matrix::zero(zm, 0, 0),
                })
            } else {
                None
            });
        }
        match t.row_combination_for(v) {
            None => Ok(None),
            Some(x0) => Ok(Some(Solution {
                x0,
                kernel: self.right_kernel(),
            })),
        }
    }

    /// Howell basis of the intersection of two row spans.
    pub fn span_intersection(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols(), other.cols());
        let stacked = self.vstack(other);
        let rel = stacked.left_kernel();
        let mut gens = Matrix::zero(self.modulus(), 0, self.cols());
        for r in 0..rel.rows() {
            let y = rel.row_dense(r);
            let elt = self.apply_left(&y[..self.rows()]);
            gens.push_row(&elt);
        }
        gens.howell_basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Modulus;

    fn z(p: u32, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    #[test]
    fn zero_map_solves_zero() {
        let zm = z(2, 2);
        let m = Matrix::zero(zm, 2, 2);
        let sol = m.solve(&[0, 0]).unwrap().unwrap();
        assert_eq!(sol.x0, vec![0, 0]);
        assert_eq!(sol.kernel.howell_basis(), Matrix::identity(zm, 2));
    }

    #[test]
    fn two_x_equals_one_unsolvable_mod_four() {
        let zm = z(2, 2);
        let m = Matrix::from_dense(zm, &[vec![2]]);
        assert!(m.solve(&[1]).unwrap().is_none());
    }

    #[test]
    fn two_x_equals_two_mod_four() {
        let zm = z(2, 2);
        let m = Matrix::from_dense(zm, &[vec![2]]);
        let sol = m.solve(&[2]).unwrap().unwrap();
        assert_eq!(m.apply_right(&sol.x0), vec![2]);
        assert_eq!(sol.kernel, Matrix::from_dense(zm, &[vec![2]]));
    }

    #[test]
    fn kernel_members_annihilate() {
        let zm = z(2, 3);
        let m = Matrix::from_dense(zm, &[vec![2, 4], vec![4, 0], vec![6, 4]]);
        let k = m.left_kernel();
        for r in 0..k.rows() {
            let prod = m.transpose().apply_right(&k.row_dense(r));
            assert!(prod.iter().all(|&x| x == 0), "kernel row fails");
        }
    }

    #[test]
    fn intersection_of_spans() {
        let zm = z(2, 2);
        let a = Matrix::from_dense(zm, &[vec![1, 0]]);
        let b = Matrix::from_dense(zm, &[vec![2, 0], vec![0, 1]]);
        let i = a.span_intersection(&b);
        assert_eq!(i, Matrix::from_dense(zm, &[vec![2, 0]]));
    }
}
