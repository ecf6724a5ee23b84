//! Chart documents: named classes on a bigraded chart, differentials,
//! products, convergence annotations, and the homotopy-level facts a chart
//! author supplies as axioms.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModulusDesc {
    pub p: u32,
    pub k: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassDesc {
    pub name: String,
    pub stem: i32,
    pub filtration: i32,
    /// Auxiliary gradings (e.g. motivic weight): carried, never consulted.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight: Option<i64>,
    /// Order of the cyclic summand this class generates.
    pub order: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DifferentialDesc {
    pub page: u32,
    pub source: String,
    pub target: String,
    #[serde(default = "one")]
    pub coeff: i64,
}

fn one() -> i64 {
    1
}

/// `left * right = Σ coeff · class`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductDesc {
    pub left: String,
    pub right: String,
    pub terms: Vec<(i64, String)>,
}

/// A chart element: a combination of named classes (usually a single one).
pub type Terms = Vec<(i64, String)>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionDesc {
    pub element: Terms,
    pub homotopy: String,
    pub filtration: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct E1BracketDesc {
    pub inputs: [String; 3],
    pub contains: Terms,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomotopyBracketDesc {
    pub bracket: [String; 3],
    pub contains: String,
    #[serde(default)]
    pub indeterminacy: Vec<String>,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomotopyProductDesc {
    pub left: String,
    pub right: String,
    pub name: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct HomotopySection {
    #[serde(default)]
    pub zero_products: Vec<(String, String)>,
    #[serde(default)]
    pub products: Vec<HomotopyProductDesc>,
    #[serde(default)]
    pub e1_brackets: Vec<E1BracketDesc>,
    #[serde(default)]
    pub brackets: Vec<HomotopyBracketDesc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartDocument {
    pub name: String,
    pub modulus: ModulusDesc,
    #[serde(default)]
    pub gradings: Vec<String>,
    /// Differentials are declared complete through this page.
    pub complete_through: u32,
    pub classes: Vec<ClassDesc>,
    #[serde(default)]
    pub differentials: Vec<DifferentialDesc>,
    #[serde(default)]
    pub products: Vec<ProductDesc>,
    #[serde(default)]
    pub detections: Vec<DetectionDesc>,
    #[serde(default)]
    pub homotopy: HomotopySection,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("chart parse error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error(
        "differential d_{page}({from_class}) = {to_class} has the wrong bidegree: \
         the source sits at ({sn}, {sf}), so the target must sit at ({en}, {ef}), \
         but {to_class} sits at ({tn}, {tf})"
    )]
    BadDifferentialBidegree {
        page: u32,
        from_class: String,
        to_class: String,
        sn: i32,
        sf: i32,
        en: i32,
        ef: i32,
        tn: i32,
        tf: i32,
    },
    #[error("differential on page {0} exceeds the declared complete_through bound {1}")]
    DifferentialPastBound(u32, u32),
    #[error("product {left}*{right} hits {target} at the wrong bidegree")]
    BadProductBidegree {
        left: String,
        right: String,
        target: String,
    },
    #[error("class `{0}` has order {1}, which does not divide the modulus")]
    BadOrder(String, u32),
    #[error("duplicate class name `{0}`")]
    DuplicateClass(String),
    #[error("chart is internally inconsistent: {0}")]
    Inconsistent(String),
}

impl ChartDocument {
    pub fn parse(text: &str) -> Result<ChartDocument, ChartError> {
        let doc: ChartDocument = serde_json::from_str(text).map_err(|e| ChartError::Schema {
            path: e.to_string(),
            message: "invalid chart JSON".into(),
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart documents serialize")
    }

    pub fn class(&self, name: &str) -> Result<&ClassDesc, ChartError> {
        self.classes
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| ChartError::UnknownClass(name.to_string()))
    }

    /// Schema-level validation: every reference resolves, orders divide the
    /// modulus, differentials respect the (stem - 1, filtration + r)
    /// convention and the completeness bound, products are bidegree
    /// consistent.
    pub fn validate(&self) -> Result<(), ChartError> {
        let m = {
            let mut m: u64 = 1;
            for _ in 0..self.modulus.k {
                m *= self.modulus.p as u64;
            }
            m as u32
        };
        let mut seen = BTreeMap::new();
        for c in &self.classes {
            if seen.insert(c.name.clone(), ()).is_some() {
                return Err(ChartError::DuplicateClass(c.name.clone()));
            }
            if c.order < 2 || m % c.order != 0 {
                return Err(ChartError::BadOrder(c.name.clone(), c.order));
            }
        }
        for d in &self.differentials {
            let s = self.class(&d.source)?;
            let t = self.class(&d.target)?;
            let expected = (s.stem - 1, s.filtration + d.page as i32);
            if (t.stem, t.filtration) != expected {
                return Err(ChartError::BadDifferentialBidegree {
                    page: d.page,
                    from_class: d.source.clone(),
                    to_class: d.target.clone(),
                    sn: s.stem,
                    sf: s.filtration,
                    en: expected.0,
                    ef: expected.1,
                    tn: t.stem,
                    tf: t.filtration,
                });
            }
            if d.page > self.complete_through {
                return Err(ChartError::DifferentialPastBound(
                    d.page,
                    self.complete_through,
                ));
            }
        }
        for p in &self.products {
            let l = self.class(&p.left)?;
            let r = self.class(&p.right)?;
            for (_, t) in &p.terms {
                let tc = self.class(t)?;
                if (tc.stem, tc.filtration) != (l.stem + r.stem, l.filtration + r.filtration) {
                    return Err(ChartError::BadProductBidegree {
                        left: p.left.clone(),
                        right: p.right.clone(),
                        target: t.clone(),
                    });
                }
            }
        }
        for det in &self.detections {
            for (_, name) in &det.element {
                self.class(name)?;
            }
        }
        for b in &self.homotopy.e1_brackets {
            for n in &b.inputs {
                self.class(n)?;
            }
            for (_, n) in &b.contains {
                self.class(n)?;
            }
        }
        Ok(())
    }
}
