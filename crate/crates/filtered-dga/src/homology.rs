use crate::{ChainComplex, ChainMap, DgaError, FilteredDga, Subquotient, Window};
use ring_linear::{Matrix, SubquotientPresentation};

/// `H_n` of a chain complex, presented as a direct sum of cyclic p-groups
/// with cycle representatives for each generator.
#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub degree: i32,
    /// Ambient indices of the degree-n slice inside the complex.
    indices: Vec<usize>,
    ambient_dim: usize,
    pub pres: SubquotientPresentation,
}

impl HomologyGroup {
    /// Kernel of `d` in degree `n` modulo the image from degree `n+1`.
    pub fn compute(c: &ChainComplex, n: i32) -> HomologyGroup {
        let zm = c.modulus();
        let indices = c.degree_indices(n);
        let below = c.degree_indices(n - 1);
        let above = c.degree_indices(n + 1);

        // d_n block: rows indexed by degree-n basis, columns by degree n-1.
        let mut d_n = Matrix::zero(zm, indices.len(), below.len());
        for (r, &i) in indices.iter().enumerate() {
            for (t, coef) in c.diff().row_iter(i) {
                if let Some(col) = below.iter().position(|&b| b == t) {
                    d_n.set(r, col, coef);
                }
            }
        }
        let cycles = d_n.left_kernel();

        let mut boundaries = Matrix::zero(zm, above.len(), indices.len());
        for (r, &i) in above.iter().enumerate() {
            for (t, coef) in c.diff().row_iter(i) {
                if let Some(col) = indices.iter().position(|&b| b == t) {
                    boundaries.set(r, col, coef);
                }
            }
        }

        let pres = SubquotientPresentation::new(&cycles, &boundaries)
            .expect("boundaries are cycles in a valid complex");
        HomologyGroup {
            degree: n,
            indices,
            ambient_dim: c.dim(),
            pres,
        }
    }

    pub fn orders(&self) -> &[u32] {
        self.pres.orders()
    }

    pub fn rank(&self) -> usize {
        self.pres.orders().len()
    }

    pub fn size(&self) -> u128 {
        self.pres.group.size()
    }

    pub fn is_trivial(&self) -> bool {
        self.pres.orders().is_empty()
    }

    pub fn zero_class(&self) -> Vec<u32> {
        self.pres.group.zero()
    }

    /// Class of a cycle given in full-complex coordinates.
    pub fn class_of(&self, chain: &[u32]) -> Result<Vec<u32>, DgaError> {
        assert_eq!(chain.len(), self.ambient_dim);
        let sliced: Vec<u32> = self.indices.iter().map(|&i| chain[i]).collect();
        Ok(self.pres.project(&sliced)?)
    }

    /// A cycle representative in full-complex coordinates.
    pub fn rep(&self, coords: &[u32]) -> Vec<u32> {
        let local = self.pres.lift(coords);
        let mut out = vec![0; self.ambient_dim];
        for (l, &i) in self.indices.iter().enumerate() {
            out[i] = local[l];
        }
        out
    }

    pub fn generator_rep(&self, i: usize) -> Vec<u32> {
        let mut coords = self.zero_class();
        coords[i] = 1;
        self.rep(&coords)
    }

    /// The matrix of the map induced on homology by a chain map, expressed
    /// on group generators. `self` is the source group; the target group
    /// must be in degree `self.degree + f.degree`.
    pub fn induced(&self, f: &ChainMap, target: &HomologyGroup) -> Result<Matrix, DgaError> {
        if target.degree != self.degree + f.degree {
            return Err(DgaError::DegreeMismatch {
                context: format!(
                    "induced map: target degree {} but source {} + shift {}",
                    target.degree, self.degree, f.degree
                ),
            });
        }
        let zm = self.pres.modulus();
        let mut out = Matrix::zero(zm, self.rank(), target.rank());
        for i in 0..self.rank() {
            let image = f.apply(&self.generator_rep(i));
            let coords = target.class_of(&image)?;
            out.set_row(i, &coords);
        }
        Ok(out)
    }
}

/// A homology class of a window complex of a filtered DGA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowClass {
    pub window: Window,
    pub degree: i32,
    pub coords: Vec<u32>,
}

/// Memo table for window homology: the same small groups are requested
/// constantly by page and bracket computations.
pub(crate) type HomologyCache = std::sync::RwLock<
    std::collections::BTreeMap<(u32, u32, i32), std::sync::Arc<(Subquotient, HomologyGroup)>>,
>;

impl FilteredDga {
    pub fn window_homology(&self, window: Window, n: i32) -> (Subquotient, HomologyGroup) {
        let key = (window.start, window.len, n);
        if let Some(hit) = self.homology_cache.read().unwrap().get(&key) {
            return (hit.0.clone(), hit.1.clone());
        }
        let sq = self.subquotient(window.start, window.len);
        let h = HomologyGroup::compute(&sq.complex, n);
        self.homology_cache
            .write()
            .unwrap()
            .insert(key, std::sync::Arc::new((sq.clone(), h.clone())));
        (sq, h)
    }

    /// Chain representative (in ambient coordinates) of a window class.
    pub fn class_rep(&self, class: &WindowClass) -> Vec<u32> {
        let (sq, h) = self.window_homology(class.window, class.degree);
        let local = h.rep(&class.coords);
        sq.include(&local, self.dim())
    }

    /// Homology of the whole algebra.
    pub fn homology(&self, n: i32) -> HomologyGroup {
        self.window_homology(Window::new(0, self.filtration_len()), n).1
    }
}

/// Product of homology classes in windows of equal length: the pairing
/// `X_{a,w} x X_{b,w} -> X_{a+b,w}` induced by the multiplication.
/// Independent of the chosen representatives.
pub fn homology_product(
    dga: &FilteredDga,
    left: &WindowClass,
    right: &WindowClass,
) -> Result<WindowClass, DgaError> {
    if left.window.len != right.window.len {
        return Err(DgaError::IncompatibleWindows(
            left.window.start,
            left.window.len,
            right.window.start,
            right.window.len,
        ));
    }
    let out_window = Window::new(left.window.start + right.window.start, left.window.len);
    let lrep = dga.class_rep(left);
    let rrep = dga.class_rep(right);
    let prod = dga.product_chains(&lrep, &rrep);
    let (sq, h) = dga.window_homology(out_window, left.degree + right.degree);
    let coords = h.class_of(&sq.restrict(&prod))?;
    Ok(WindowClass {
        window: out_window,
        degree: left.degree + right.degree,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::DgaBuilder;
    use ring_linear::Modulus;

    fn toy() -> FilteredDga {
        let zm = Modulus::new(2, 1).unwrap();
        DgaBuilder::new(zm, 3, "1")
            .gen("1", 0, 0)
            .gen("x", 1, 1)
            .gen("xx", 2, 2)
            .gen("y", 3, 2)
            .product("x", "x", &[(1, "xx")])
            .d("y", &[(1, "xx")])
            .build()
            .unwrap()
    }

    #[test]
    fn zero_differential_gives_chain_groups() {
        let zm = Modulus::new(3, 1).unwrap();
        let a = DgaBuilder::new(zm, 1, "1")
            .gen("1", 0, 0)
            .gen("u", 2, 0)
            .gen("v", 2, 0)
            .build()
            .unwrap();
        let h2 = a.homology(2);
        assert_eq!(h2.orders(), &[3, 3]);
    }

    #[test]
    fn boundary_is_killed_and_x_survives() {
        let a = toy();
        let h1 = a.homology(1);
        assert_eq!(h1.orders(), &[2]); // [x]
        let h2 = a.homology(2);
        assert!(h2.is_trivial()); // x^2 = d(y)
        let h3 = a.homology(3);
        assert!(h3.is_trivial()); // y supports a differential
    }

    #[test]
    fn euler_characteristic_matches_chain_level() {
        // Over F_2: alternating sum of homology dims == alternating sum of
        // chain dims (rank-nullity bookkeeping).
        let a = toy();
        let sq = a.subquotient(0, 3);
        let (lo, hi) = sq.complex.degree_range().unwrap();
        let mut chain_sum: i64 = 0;
        let mut hom_sum: i64 = 0;
        for n in lo..=hi {
            let sign = if (n - lo).rem_euclid(2) == 0 { 1 } else { -1 };
            chain_sum += sign * sq.complex.degree_indices(n).len() as i64;
            hom_sum += sign * a.homology(n).rank() as i64;
        }
        assert_eq!(chain_sum, hom_sum);
    }

    #[test]
    fn unit_product_is_identity() {
        let a = toy();
        let unit = WindowClass {
            window: Window::new(0, 3),
            degree: 0,
            coords: a.homology(0).class_of(&a.unit_chain()).unwrap(),
        };
        let h1 = a.homology(1);
        let x = WindowClass {
            window: Window::new(0, 3),
            degree: 1,
            coords: {
                let mut c = h1.zero_class();
                c[0] = 1;
                c
            },
        };
        let prod = homology_product(&a, &unit, &x).unwrap();
        assert_eq!(prod.coords, x.coords);
        let prod2 = homology_product(&a, &x, &unit).unwrap();
        assert_eq!(prod2.coords, x.coords);
    }

    #[test]
    fn incompatible_windows_error_names_both() {
        let a = toy();
        let u = WindowClass {
            window: Window::new(0, 1),
            degree: 0,
            coords: vec![1],
        };
        let v = WindowClass {
            window: Window::new(0, 2),
            degree: 0,
            coords: vec![1],
        };
        match homology_product(&a, &u, &v) {
            Err(DgaError::IncompatibleWindows(0, 1, 0, 2)) => {}
            other => panic!("expected window error, got {other:?}"),
        }
    }
}
