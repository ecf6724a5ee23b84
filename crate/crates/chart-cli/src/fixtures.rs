//! Shipped fixtures: the slice-fragment chart, the mod-2^n bracket model,
//! and the d(y) = x² toy algebra.

use crate::schema::{
    ChartDocument, ClassDesc, DetectionDesc, DifferentialDesc, E1BracketDesc,
    HomotopyBracketDesc, HomotopyProductDesc, HomotopySection, ModulusDesc, ProductDesc,
};
use filtered_dga::{DgaBuilder, FilteredDga};
use ring_linear::Modulus;

/// A fragment of the slice chart of the 2-complete sphere: exactly the
/// classes and relations the worked examples use, nothing interpolated.
/// Weights are carried but never consulted.
pub fn slice_fragment() -> ChartDocument {
    let class = |name: &str, stem: i32, filtration: i32, weight: i64, order: u32| ClassDesc {
        name: name.into(),
        stem,
        filtration,
        weight: Some(weight),
        order,
    };
    ChartDocument {
        name: "slice-fragment".into(),
        modulus: ModulusDesc { p: 2, k: 2 },
        gradings: vec!["stem".into(), "filtration".into(), "weight".into()],
        complete_through: 1,
        classes: vec![
            class("ρ", -1, 0, -1, 2),
            class("ρ²", -2, 0, -2, 2),
            class("2", 0, 0, 0, 2),
            class("τ²", 0, 0, -2, 4),
            class("α₁", 1, 1, 1, 2),
            class("τα₁", 1, 1, 0, 2),
            class("ρ²τα₁", -1, 1, -2, 2),
            class("α_{2/2}", 3, 2, 2, 4),
        ],
        differentials: vec![DifferentialDesc {
            page: 1,
            source: "τ²".into(),
            target: "ρ²τα₁".into(),
            coeff: 1,
        }],
        products: vec![
            ProductDesc {
                left: "ρ".into(),
                right: "ρ".into(),
                terms: vec![(1, "ρ²".into())],
            },
            ProductDesc {
                left: "ρ²".into(),
                right: "τα₁".into(),
                terms: vec![(1, "ρ²τα₁".into())],
            },
            ProductDesc {
                left: "τα₁".into(),
                right: "ρ²".into(),
                terms: vec![(1, "ρ²τα₁".into())],
            },
            ProductDesc {
                left: "2".into(),
                right: "τ²".into(),
                terms: vec![(2, "τ²".into())],
            },
            ProductDesc {
                left: "τ²".into(),
                right: "2".into(),
                terms: vec![(2, "τ²".into())],
            },
        ],
        detections: vec![
            DetectionDesc {
                element: vec![(1, "ρ".into())],
                homotopy: "ρ".into(),
                filtration: 0,
            },
            DetectionDesc {
                element: vec![(1, "ρ²".into())],
                homotopy: "ρ²".into(),
                filtration: 0,
            },
            DetectionDesc {
                element: vec![(1, "2".into())],
                homotopy: "ω".into(),
                filtration: 0,
            },
            DetectionDesc {
                element: vec![(1, "α₁".into())],
                homotopy: "η".into(),
                filtration: 1,
            },
            DetectionDesc {
                element: vec![(1, "τα₁".into())],
                homotopy: "τη".into(),
                filtration: 1,
            },
            DetectionDesc {
                element: vec![(1, "α_{2/2}".into())],
                homotopy: "ν".into(),
                filtration: 2,
            },
            DetectionDesc {
                element: vec![(2, "α_{2/2}".into())],
                homotopy: "ων".into(),
                filtration: 2,
            },
            DetectionDesc {
                element: vec![(2, "τ²".into())],
                homotopy: "ωτ²".into(),
                filtration: 0,
            },
        ],
        homotopy: HomotopySection {
            zero_products: vec![
                ("ω".into(), "η".into()),
                ("η".into(), "ω".into()),
                ("ω".into(), "ρ".into()),
                ("ρ".into(), "ω".into()),
                ("ω".into(), "ρ²".into()),
                ("ρ²".into(), "ω".into()),
                ("ρ²".into(), "τη".into()),
                ("τη".into(), "ρ²".into()),
                ("ρ³ν".into(), "τη".into()),
                ("τη".into(), "ρ³ν".into()),
            ],
            products: vec![
                HomotopyProductDesc {
                    left: "ρτη".into(),
                    right: "τη".into(),
                    name: "ρ(τη)²".into(),
                },
                HomotopyProductDesc {
                    left: "τη".into(),
                    right: "ρτη".into(),
                    name: "ρ(τη)²".into(),
                },
            ],
            e1_brackets: vec![
                E1BracketDesc {
                    inputs: ["α₁".into(), "2".into(), "α₁".into()],
                    contains: vec![(2, "α_{2/2}".into())],
                    strict: true,
                },
                E1BracketDesc {
                    inputs: ["ρ".into(), "2".into(), "α₁".into()],
                    contains: vec![(1, "τα₁".into())],
                    strict: true,
                },
            ],
            brackets: vec![HomotopyBracketDesc {
                bracket: ["η".into(), "ω".into(), "ρ²".into()],
                contains: "ρτη".into(),
                indeterminacy: vec!["ρ³ν".into()],
                strict: false,
            }],
        },
    }
}

/// The mod-2^n bracket model: a two-step filtered algebra over Z/2^n with
/// d(τ) = 2ρ, in which ⟨ρ, 2, 2^{n-1}⟩ contains the order-two class
/// carried by τ.
pub fn hz2n(n: u32) -> FilteredDga {
    assert!((2..=4).contains(&n), "supported range for the model");
    let zm = Modulus::new(2, n).unwrap();
    DgaBuilder::new(zm, 2, "1")
        .gen_weighted("1", 0, 0, &[0])
        .gen_weighted("ρ", -1, 1, &[-1])
        .gen_weighted("τ", 0, 1, &[-1])
        .d("τ", &[(2, "ρ")])
        .build()
        .expect("the bracket model is a valid filtered DGA")
}

/// The d(y) = x² toy: filtration(x) = 1, filtration(x²) = 2, y in
/// filtration 1 so the differential has length one.
pub fn toy_dga() -> FilteredDga {
    let zm = Modulus::new(2, 1).unwrap();
    DgaBuilder::new(zm, 3, "1")
        .gen("1", 0, 0)
        .gen("x", 1, 1)
        .gen("xx", 2, 2)
        .gen("y", 3, 1)
        .product("x", "x", &[(1, "xx")])
        .d("y", &[(1, "xx")])
        .build()
        .expect("the toy algebra is a valid filtered DGA")
}

/// Fixture lookup by name (used by the CLI to resolve chart arguments that
/// are not paths).
pub fn fixture_chart(name: &str) -> Option<ChartDocument> {
    match name {
        "slice-fragment" => Some(slice_fragment()),
        _ => None,
    }
}

pub fn fixture_dga(name: &str) -> Option<FilteredDga> {
    match name {
        "toy-dga" => Some(toy_dga()),
        "hz2n" => Some(hz2n(3)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        slice_fragment().validate().unwrap();
        assert!(toy_dga().validate().is_valid());
        for n in 2..=4 {
            assert!(hz2n(n).validate().is_valid());
        }
    }
}
