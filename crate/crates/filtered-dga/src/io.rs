//! DGA description files: UTF-8 JSON, missing entries mean zero.
//!
//! ```json
//! {
//!   "modulus": {"p": 2, "k": 1},
//!   "generators": [{"name": "x", "degree": 1, "filtration": 1, "weight": [1]}],
//!   "d": {"y": [[1, "xx"]]},
//!   "mult": {"x*x": [[1, "xx"]]}
//! }
//! ```

use crate::{DgaError, FilteredDga, Generator};
use ring_linear::{Matrix, Modulus};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModulusDesc {
    p: u32,
    k: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GeneratorDesc {
    name: String,
    degree: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<Vec<i64>>,
    filtration: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DgaDesc {
    modulus: ModulusDesc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    filtration_length: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    unit: Option<String>,
    generators: Vec<GeneratorDesc>,
    #[serde(default)]
    d: BTreeMap<String, Vec<(i64, String)>>,
    #[serde(default)]
    mult: BTreeMap<String, Vec<(i64, String)>>,
}

/// Parse a DGA description. The unit defaults to a generator named "1";
/// the filtration length defaults to one past the maximum filtration.
pub fn parse_dga(text: &str) -> Result<FilteredDga, DgaError> {
    let desc: DgaDesc =
        serde_json::from_str(text).map_err(|e| DgaError::BadDescription(e.to_string()))?;
    let zm = Modulus::new(desc.modulus.p, desc.modulus.k)
        .map_err(|e| DgaError::BadDescription(e.to_string()))?;
    let generators: Vec<Generator> = desc
        .generators
        .iter()
        .map(|g| Generator {
            name: g.name.clone(),
            degree: g.degree,
            filtration: g.filtration,
            weight: g.weight.clone(),
        })
        .collect();
    let dim = generators.len();
    let index = |name: &str| -> Result<usize, DgaError> {
        generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))
    };
    let filtration_len = desc.filtration_length.unwrap_or_else(|| {
        generators
            .iter()
            .map(|g| g.filtration)
            .max()
            .map_or(1, |m| m + 1)
    });
    let unit_name = desc.unit.clone().unwrap_or_else(|| "1".to_string());
    let unit = index(&unit_name)?;

    let mut diff = Matrix::zero(zm, dim, dim);
    for (g, terms) in &desc.d {
        let i = index(g)?;
        for (c, t) in terms {
            let j = index(t)?;
            let cur = diff.get(i, j);
            diff.set(i, j, zm.add(cur, zm.reduce(*c)));
        }
    }

    let mut mult: BTreeMap<(usize, usize), Vec<(u32, usize)>> = BTreeMap::new();
    for (key, terms) in &desc.mult {
        let (a, b) = key
            .split_once('*')
            .ok_or_else(|| DgaError::BadDescription(format!("bad product key `{key}`")))?;
        let i = index(a.trim())?;
        let j = index(b.trim())?;
        let mut out = Vec::new();
        for (c, t) in terms {
            out.push((zm.reduce(*c), index(t)?));
        }
        mult.insert((i, j), out);
    }

    FilteredDga::new(zm, generators, filtration_len, diff, unit, mult)
}

/// Serialize with sorted keys, so parse → serialize is stable.
pub fn serialize_dga(dga: &FilteredDga) -> String {
    let generators: Vec<GeneratorDesc> = dga
        .generators()
        .iter()
        .map(|g| GeneratorDesc {
            name: g.name.clone(),
            degree: g.degree,
            weight: g.weight.clone(),
            filtration: g.filtration,
        })
        .collect();
    let mut d = BTreeMap::new();
    for (i, g) in dga.generators().iter().enumerate() {
        let terms: Vec<(i64, String)> = dga
            .diff()
            .row_iter(i)
            .map(|(t, c)| (c as i64, dga.generators()[t].name.clone()))
            .collect();
        if !terms.is_empty() {
            d.insert(g.name.clone(), terms);
        }
    }
    let mut mult = BTreeMap::new();
    for (&(i, j), terms) in dga.mult_table() {
        let key = format!(
            "{}*{}",
            dga.generators()[i].name,
            dga.generators()[j].name
        );
        let terms: Vec<(i64, String)> = terms
            .iter()
            .map(|&(c, t)| (c as i64, dga.generators()[t].name.clone()))
            .collect();
        mult.insert(key, terms);
    }
    let desc = DgaDesc {
        modulus: ModulusDesc {
            p: dga.modulus().p(),
            k: dga.modulus().k(),
        },
        filtration_length: Some(dga.filtration_len()),
        unit: Some(dga.generators()[dga.unit_index()].name.clone()),
        generators,
        d,
        mult,
    };
    serde_json::to_string_pretty(&desc).expect("serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"{
        "modulus": {"p": 2, "k": 1},
        "generators": [
            {"name": "1", "degree": 0, "filtration": 0},
            {"name": "x", "degree": 1, "filtration": 1},
            {"name": "xx", "degree": 2, "filtration": 2},
            {"name": "y", "degree": 3, "filtration": 2}
        ],
        "d": {"y": [[1, "xx"]]},
        "mult": {
            "1*1": [[1, "1"]], "1*x": [[1, "x"]], "1*xx": [[1, "xx"]], "1*y": [[1, "y"]],
            "x*1": [[1, "x"]], "xx*1": [[1, "xx"]], "y*1": [[1, "y"]],
            "x*x": [[1, "xx"]]
        }
    }"#;

    #[test]
    fn parse_and_validate_toy() {
        let dga = parse_dga(TOY).unwrap();
        assert!(dga.validate().is_valid());
        assert_eq!(dga.filtration_len(), 3);
    }

    #[test]
    fn round_trip_is_stable() {
        let dga = parse_dga(TOY).unwrap();
        let text = serialize_dga(&dga);
        let again = parse_dga(&text).unwrap();
        assert_eq!(serialize_dga(&again), text);
    }

    #[test]
    fn missing_entries_are_zero() {
        let dga = parse_dga(TOY).unwrap();
        let x = dga.generator_index("x").unwrap();
        let y = dga.generator_index("y").unwrap();
        let mut cx = vec![0; dga.dim()];
        cx[x] = 1;
        let mut cy = vec![0; dga.dim()];
        cy[y] = 1;
        assert!(dga.product_chains(&cx, &cy).iter().all(|&c| c == 0));
        assert!(dga.d_chain(&cx).iter().all(|&c| c == 0));
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let bad = TOY.replace("\"y\": [[1, \"xx\"]]", "\"y\": [[1, \"zz\"]]");
        assert!(matches!(
            parse_dga(&bad),
            Err(DgaError::UnknownGenerator(n)) if n == "zz"
        ));
    }
}
