use crate::DgaError;
use ring_linear::{Matrix, Modulus};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub filtration: u32,
    /// Auxiliary grading tuple (e.g. motivic weight). Carried along and
    /// checked for additivity under products, otherwise inert.
    pub weight: Option<Vec<i64>>,
}

/// A finite filtered differential graded algebra over `Z/p^k`.
///
/// Immutable after construction; validation reports every violated
/// invariant rather than stopping at the first. Window homology is
/// memoized internally (the same small groups are needed over and over by
/// page and bracket computations), which is why the struct is not `Clone`
/// through derive.
pub struct FilteredDga {
    zm: Modulus,
    generators: Vec<Generator>,
    filtration_len: u32,
    diff: Matrix,
    unit: usize,
    /// Structure constants: `(i, j) -> Σ coeff * e_t`, missing means zero.
    mult: BTreeMap<(usize, usize), Vec<(u32, usize)>>,
    pub(crate) homology_cache: crate::homology::HomologyCache,
}

impl Clone for FilteredDga {
    fn clone(&self) -> Self {
        FilteredDga {
            zm: self.zm,
            generators: self.generators.clone(),
            filtration_len: self.filtration_len,
            diff: self.diff.clone(),
            unit: self.unit,
            mult: self.mult.clone(),
            homology_cache: Default::default(),
        }
    }
}

impl fmt::Debug for FilteredDga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FilteredDga(dim {}, L {}, {})",
            self.generators.len(),
            self.filtration_len,
            self.zm
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DifferentialDegree { gen: String, target: String },
    DifferentialFiltration { gen: String, target: String },
    DSquared { gen: String },
    Leibniz { left: String, right: String },
    Associativity { a: String, b: String, c: String },
    ProductDegree { left: String, right: String, target: String },
    ProductFiltration { left: String, right: String, target: String },
    WeightAdditivity { left: String, right: String, target: String },
    UnitNotIdentity { gen: String },
    UnitPlacement,
    FiltrationRange { gen: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DifferentialDegree { gen, target } => {
                write!(f, "d({gen}) hits {target} of wrong degree")
            }
            Violation::DifferentialFiltration { gen, target } => {
                write!(f, "d({gen}) hits {target} of lower filtration")
            }
            Violation::DSquared { gen } => write!(f, "d(d({gen})) != 0"),
            Violation::Leibniz { left, right } => {
                write!(f, "Leibniz fails on ({left}, {right})")
            }
            Violation::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
            Violation::ProductDegree {
                left,
                right,
                target,
            } => write!(f, "{left}*{right} hits {target} of wrong degree"),
            Violation::ProductFiltration {
                left,
                right,
                target,
            } => write!(f, "{left}*{right} hits {target} below the filtration sum"),
            Violation::WeightAdditivity {
                left,
                right,
                target,
            } => write!(f, "{left}*{right} hits {target} with non-additive weight"),
            Violation::UnitNotIdentity { gen } => write!(f, "unit does not fix {gen}"),
            Violation::UnitPlacement => write!(f, "unit must have degree 0 and filtration 0"),
            Violation::FiltrationRange { gen } => {
                write!(f, "{gen} has filtration >= L (so it is zero)")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

impl FilteredDga {
    pub fn new(
        zm: Modulus,
        generators: Vec<Generator>,
        filtration_len: u32,
        diff: Matrix,
        unit: usize,
        mult: BTreeMap<(usize, usize), Vec<(u32, usize)>>,
    ) -> Result<Self, DgaError> {
        let dim = generators.len();
        if diff.rows() != dim || diff.cols() != dim {
            return Err(DgaError::BadDescription(format!(
                "differential must be {dim}x{dim}"
            )));
        }
        if unit >= dim {
            return Err(DgaError::BadDescription("unit index out of range".into()));
        }
        let mut mult_norm = BTreeMap::new();
        for ((i, j), terms) in mult {
            if i >= dim || j >= dim {
                return Err(DgaError::BadDescription("product index out of range".into()));
            }
            let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
            for (c, t) in terms {
                if t >= dim {
                    return Err(DgaError::BadDescription("product target out of range".into()));
                }
                let e = acc.entry(t).or_insert(0);
                *e = zm.add(*e, c % zm.m());
            }
            let terms: Vec<(u32, usize)> = acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(t, c)| (c, t))
                .collect();
            if !terms.is_empty() {
                mult_norm.insert((i, j), terms);
            }
        }
        Ok(FilteredDga {
            zm,
            generators,
            filtration_len,
            diff,
            unit,
            mult: mult_norm,
            homology_cache: Default::default(),
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.zm
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, DgaError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))
    }

    pub fn filtration_len(&self) -> u32 {
        self.filtration_len
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn diff(&self) -> &Matrix {
        &self.diff
    }

    pub fn mult_table(&self) -> &BTreeMap<(usize, usize), Vec<(u32, usize)>> {
        &self.mult
    }

    pub fn unit_chain(&self) -> Vec<u32> {
        let mut c = vec![0; self.dim()];
        c[self.unit] = 1;
        c
    }

    /// `d` applied to a chain.
    pub fn d_chain(&self, chain: &[u32]) -> Vec<u32> {
        self.diff.apply_left(chain)
    }

    /// Bilinear product of two chains via the structure constants.
    pub fn product_chains(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.dim()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                if let Some(terms) = self.mult.get(&(i, j)) {
                    let c = self.zm.mul(xi, yj);
                    for &(coef, t) in terms {
                        out[t] = self.zm.add(out[t], self.zm.mul(c, coef));
                    }
                }
            }
        }
        out
    }

    fn basis_chain(&self, i: usize) -> Vec<u32> {
        let mut c = vec![0; self.dim()];
        c[i] = 1;
        c
    }

    fn chain_support_names(&self, chain: &[u32]) -> Vec<(usize, &Generator)> {
        chain
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(t, _)| (t, &self.generators[t]))
            .collect()
    }

    /// Check every structural invariant and list each violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let dim = self.dim();
        let zm = self.zm;

        let u = &self.generators[self.unit];
        if u.degree != 0 || u.filtration != 0 {
            report.violations.push(Violation::UnitPlacement);
        }

        for (i, g) in self.generators.iter().enumerate() {
            if g.filtration >= self.filtration_len {
                report.violations.push(Violation::FiltrationRange {
                    gen: g.name.clone(),
                });
            }
            // differential grading and filtration
            for (t, gt) in self.chain_support_names(&self.diff.row_dense(i)) {
                let tg = &self.generators[t];
                if tg.degree != g.degree - 1 {
                    report.violations.push(Violation::DifferentialDegree {
                        gen: g.name.clone(),
                        target: gt.name.clone(),
                    });
                }
                if tg.filtration < g.filtration {
                    report.violations.push(Violation::DifferentialFiltration {
                        gen: g.name.clone(),
                        target: gt.name.clone(),
                    });
                }
            }
            // d^2 = 0
            let dd = self.d_chain(&self.d_chain(&self.basis_chain(i)));
            if dd.iter().any(|&x| x != 0) {
                report.violations.push(Violation::DSquared {
                    gen: g.name.clone(),
                });
            }
            // unit is a two-sided identity
            let left = self.product_chains(&self.unit_chain(), &self.basis_chain(i));
            let right = self.product_chains(&self.basis_chain(i), &self.unit_chain());
            if left != self.basis_chain(i) || right != self.basis_chain(i) {
                report.violations.push(Violation::UnitNotIdentity {
                    gen: g.name.clone(),
                });
            }
        }

        // product grading, filtration, weights
        for (&(i, j), terms) in &self.mult {
            let gi = &self.generators[i];
            let gj = &self.generators[j];
            for &(_, t) in terms {
                let gt = &self.generators[t];
                if gt.degree != gi.degree + gj.degree {
                    report.violations.push(Violation::ProductDegree {
                        left: gi.name.clone(),
                        right: gj.name.clone(),
                        target: gt.name.clone(),
                    });
                }
                if gt.filtration < gi.filtration + gj.filtration {
                    report.violations.push(Violation::ProductFiltration {
                        left: gi.name.clone(),
                        right: gj.name.clone(),
                        target: gt.name.clone(),
                    });
                }
                if let (Some(wi), Some(wj), Some(wt)) = (&gi.weight, &gj.weight, &gt.weight) {
                    let sum: Vec<i64> = wi.iter().zip(wj).map(|(a, b)| a + b).collect();
                    if sum != *wt {
                        report.violations.push(Violation::WeightAdditivity {
                            left: gi.name.clone(),
                            right: gj.name.clone(),
                            target: gt.name.clone(),
                        });
                    }
                }
            }
        }

        // Leibniz on all basis pairs: d(xy) = (dx)y + (-1)^{|x|} x (dy)
        for i in 0..dim {
            for j in 0..dim {
                let ei = self.basis_chain(i);
                let ej = self.basis_chain(j);
                let lhs = self.d_chain(&self.product_chains(&ei, &ej));
                let dx_y = self.product_chains(&self.d_chain(&ei), &ej);
                let x_dy = self.product_chains(&ei, &self.d_chain(&ej));
                let sign = if self.generators[i].degree.rem_euclid(2) == 0 {
                    1i64
                } else {
                    -1
                };
                let rhs: Vec<u32> = dx_y
                    .iter()
                    .zip(&x_dy)
                    .map(|(&a, &b)| zm.add(a, zm.reduce(sign * b as i64)))
                    .collect();
                if lhs != rhs {
                    report.violations.push(Violation::Leibniz {
                        left: self.generators[i].name.clone(),
                        right: self.generators[j].name.clone(),
                    });
                }
            }
        }

        // associativity on basis triples
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let ab_c = self.product_chains(
                        &self.product_chains(&self.basis_chain(i), &self.basis_chain(j)),
                        &self.basis_chain(k),
                    );
                    let a_bc = self.product_chains(
                        &self.basis_chain(i),
                        &self.product_chains(&self.basis_chain(j), &self.basis_chain(k)),
                    );
                    if ab_c != a_bc {
                        report.violations.push(Violation::Associativity {
                            a: self.generators[i].name.clone(),
                            b: self.generators[j].name.clone(),
                            c: self.generators[k].name.clone(),
                        });
                    }
                }
            }
        }

        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// The associated graded algebra: same basis, but only the
    /// filtration-preserving part of `d` and the filtration-exact part of
    /// the product survive. Its homology in each filtration block is the
    /// E_1 page.
    pub fn associated_graded(&self) -> FilteredDga {
        let dim = self.dim();
        let mut diff = Matrix::zero(self.zm, dim, dim);
        for i in 0..dim {
            let fi = self.generators[i].filtration;
            for (t, c) in self.diff.row_iter(i) {
                if self.generators[t].filtration == fi {
                    diff.set(i, t, c);
                }
            }
        }
        let mut mult = BTreeMap::new();
        for (&(i, j), terms) in &self.mult {
            let fsum = self.generators[i].filtration + self.generators[j].filtration;
            let kept: Vec<(u32, usize)> = terms
                .iter()
                .copied()
                .filter(|&(_, t)| self.generators[t].filtration == fsum)
                .collect();
            if !kept.is_empty() {
                mult.insert((i, j), kept);
            }
        }
        FilteredDga {
            zm: self.zm,
            generators: self.generators.clone(),
            filtration_len: self.filtration_len,
            diff,
            unit: self.unit,
            mult,
            homology_cache: Default::default(),
        }
    }
}

/// `Σ coeff · generator`, by name.
pub type NamedTerms = Vec<(i64, String)>;

/// Convenience builder for hand-written algebras (fixtures and tests).
pub struct DgaBuilder {
    zm: Modulus,
    generators: Vec<Generator>,
    filtration_len: u32,
    d_entries: Vec<(String, NamedTerms)>,
    products: Vec<(String, String, NamedTerms)>,
    unit: String,
}

impl DgaBuilder {
    pub fn new(zm: Modulus, filtration_len: u32, unit: &str) -> Self {
        DgaBuilder {
            zm,
            generators: Vec::new(),
            filtration_len,
            d_entries: Vec::new(),
            products: Vec::new(),
            unit: unit.to_string(),
        }
    }

    pub fn gen(mut self, name: &str, degree: i32, filtration: u32) -> Self {
        self.generators.push(Generator {
            name: name.to_string(),
            degree,
            filtration,
            weight: None,
        });
        self
    }

    pub fn gen_weighted(mut self, name: &str, degree: i32, filtration: u32, weight: &[i64]) -> Self {
        self.generators.push(Generator {
            name: name.to_string(),
            degree,
            filtration,
            weight: Some(weight.to_vec()),
        });
        self
    }

    pub fn d(mut self, gen: &str, terms: &[(i64, &str)]) -> Self {
        self.d_entries.push((
            gen.to_string(),
            terms.iter().map(|&(c, t)| (c, t.to_string())).collect(),
        ));
        self
    }

    pub fn product(mut self, a: &str, b: &str, terms: &[(i64, &str)]) -> Self {
        self.products.push((
            a.to_string(),
            b.to_string(),
            terms.iter().map(|&(c, t)| (c, t.to_string())).collect(),
        ));
        self
    }

    /// Fill in unit products automatically and build.
    pub fn build(self) -> Result<FilteredDga, DgaError> {
        let dim = self.generators.len();
        let index = |name: &str| -> Result<usize, DgaError> {
            self.generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))
        };
        let unit = index(&self.unit)?;
        let mut diff = Matrix::zero(self.zm, dim, dim);
        for (g, terms) in &self.d_entries {
            let i = index(g)?;
            for (c, t) in terms {
                let j = index(t)?;
                let cur = diff.get(i, j);
                diff.set(i, j, self.zm.add(cur, self.zm.reduce(*c)));
            }
        }
        let mut mult: BTreeMap<(usize, usize), Vec<(u32, usize)>> = BTreeMap::new();
        for i in 0..dim {
            mult.insert((unit, i), vec![(1, i)]);
            mult.insert((i, unit), vec![(1, i)]);
        }
        for (a, b, terms) in &self.products {
            let i = index(a)?;
            let j = index(b)?;
            let mut out = Vec::new();
            for (c, t) in terms {
                out.push((self.zm.reduce(*c), index(t)?));
            }
            mult.insert((i, j), out);
        }
        FilteredDga::new(self.zm, self.generators, self.filtration_len, diff, unit, mult)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Modulus {
        Modulus::new(2, 1).unwrap()
    }

    /// Exterior algebra on one degree-1 generator in filtration 1.
    fn exterior() -> FilteredDga {
        DgaBuilder::new(z2(), 2, "1")
            .gen("1", 0, 0)
            .gen("x", 1, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn exterior_is_valid() {
        assert!(exterior().validate().is_valid());
    }

    #[test]
    fn unit_in_positive_filtration_is_flagged() {
        // d(x) = 1 breaks d(F_1) ⊆ F_1 when the unit sits in filtration 0.
        let a = DgaBuilder::new(z2(), 2, "1")
            .gen("1", 0, 0)
            .gen("x", 1, 1)
            .d("x", &[(1, "1")])
            .build()
            .unwrap();
        let report = a.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DifferentialFiltration { .. })));
    }

    #[test]
    fn broken_leibniz_is_localized() {
        // d(y) = x^2, with y*x = v and d(v) = w: then d(y*x) = w but
        // (dy)*x - y*(dx) = 0, so Leibniz fails at exactly the (y, x)
        // pair and nowhere else.
        let a = DgaBuilder::new(z2(), 4, "1")
            .gen("1", 0, 0)
            .gen("x", 1, 1)
            .gen("xx", 2, 2)
            .gen("y", 3, 2)
            .gen("v", 4, 3)
            .gen("w", 3, 3)
            .product("x", "x", &[(1, "xx")])
            .product("y", "x", &[(1, "v")])
            .d("y", &[(1, "xx")])
            .d("v", &[(1, "w")])
            .build()
            .unwrap();
        let report = a.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(
            &report.violations[0],
            Violation::Leibniz { left, right } if left == "y" && right == "x"
        ));
    }

    #[test]
    fn associated_graded_keeps_exact_terms_only() {
        let zm = Modulus::new(2, 2).unwrap();
        // d(t) = 2r where r has higher filtration than t: gr kills it.
        let a = DgaBuilder::new(zm, 3, "1")
            .gen("1", 0, 0)
            .gen("r", 1, 2)
            .gen("t", 2, 1)
            .d("t", &[(2, "r")])
            .build()
            .unwrap();
        assert!(a.validate().is_valid());
        let gr = a.associated_graded();
        assert!(gr.diff().row_dense(gr.generator_index("t").unwrap())
            .iter()
            .all(|&x| x == 0));
    }
}
