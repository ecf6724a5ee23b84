//! Seeded generator of valid filtered DGAs.
//!
//! Instances are truncated graded-commutative monomial algebras: a handful
//! of algebra generators, the downward-closed set of monomials that fit the
//! dimension budget and the filtration bound, and a differential defined on
//! generators (targeting monomials in cycle generators, which forces
//! `d∘d = 0`) and extended by the Leibniz rule. Everything about the
//! instance is a deterministic function of the seed.

use crate::{DgaError, FilteredDga, Generator};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use ring_linear::{Matrix, Modulus};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct RandomDgaParams {
    pub dim: usize,
    pub filtration_len: u32,
    pub modulus: Modulus,
}

impl RandomDgaParams {
    pub fn new(dim: usize, filtration_len: u32, modulus: Modulus) -> Self {
        RandomDgaParams {
            dim,
            filtration_len,
            modulus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial(Vec<usize>); // sorted generator indices; empty = unit

struct AlgGen {
    name: String,
    degree: i32,
    filtration: u32,
    weight: i64,
}

fn monomial_degree(m: &Monomial, gens: &[AlgGen]) -> i32 {
    m.0.iter().map(|&i| gens[i].degree).sum()
}

fn monomial_filtration(m: &Monomial, gens: &[AlgGen]) -> u32 {
    m.0.iter().map(|&i| gens[i].filtration).sum()
}

fn monomial_name(m: &Monomial, gens: &[AlgGen]) -> String {
    if m.0.is_empty() {
        return "1".to_string();
    }
    m.0.iter().map(|&i| gens[i].name.clone()).collect()
}

/// Merge two sorted monomials, tracking the Koszul sign from moving
/// odd-degree generators past each other. Returns `None` when an
/// odd-degree generator repeats (exterior relation, p odd).
fn merge_monomials(
    a: &Monomial,
    b: &Monomial,
    gens: &[AlgGen],
    exterior: bool,
) -> Option<(i64, Monomial)> {
    let mut out = Vec::with_capacity(a.0.len() + b.0.len());
    let mut sign = 1i64;
    let (mut i, mut j) = (0, 0);
    let odd_left_from = |pos: usize| -> usize {
        a.0[pos..]
            .iter()
            .filter(|&&g| gens[g].degree.rem_euclid(2) == 1)
            .count()
    };
    while i < a.0.len() || j < b.0.len() {
        let take_b = match (a.0.get(i), b.0.get(j)) {
            (Some(&ga), Some(&gb)) => gb < ga,
            (None, Some(_)) => true,
            _ => false,
        };
        if take_b {
            let gb = b.0[j];
            if gens[gb].degree.rem_euclid(2) == 1
                && odd_left_from(i) % 2 == 1 {
                    sign = -sign;
                }
            out.push(gb);
            j += 1;
        } else {
            out.push(a.0[i]);
            i += 1;
        }
    }
    if exterior {
        for w in out.windows(2) {
            if w[0] == w[1] && gens[w[0]].degree.rem_euclid(2) == 1 {
                return None;
            }
        }
    }
    Some((sign, Monomial(out)))
}

/// Deterministically generate a valid filtered DGA. Generation retries with
/// fresh draws until the validator passes (the construction makes that the
/// overwhelmingly common case).
pub fn random_instance(seed: u64, params: &RandomDgaParams) -> Result<FilteredDga, DgaError> {
    if params.dim > 16 {
        return Err(DgaError::Bounds(format!("dim {} > 16", params.dim)));
    }
    if params.filtration_len == 0 || params.filtration_len > 5 {
        return Err(DgaError::Bounds(format!(
            "filtration length {} not in 1..=5",
            params.filtration_len
        )));
    }
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    for attempt in 0..300 {
        let dga = candidate(&mut rng, params);
        if let Ok(dga) = dga {
            if dga.validate().is_valid() {
                return Ok(dga);
            }
        }
        let _ = attempt;
    }
    Err(DgaError::GenerationFailed(300))
}

fn candidate(rng: &mut Pcg64Mcg, params: &RandomDgaParams) -> Result<FilteredDga, DgaError> {
    let zm = params.modulus;
    let l = params.filtration_len;
    let exterior = zm.p() != 2;
    let names = ["a", "b", "c", "e"];
    let n_gens = rng.random_range(2..=3.min(params.dim.saturating_sub(1)).max(2));
    let use_weights = rng.random_bool(0.5);
    let mut gens: Vec<AlgGen> = Vec::new();
    for gen_name in names.iter().take(n_gens) {
        let degree = match rng.random_range(0..10) {
            0..=4 => 1,
            5..=7 => 2,
            _ => 3,
        };
        let filtration = rng.random_range(0..l);
        gens.push(AlgGen {
            name: gen_name.to_string(),
            degree,
            filtration,
            weight: rng.random_range(-2..3),
        });
    }

    // Downward-closed monomial basis, built level by level.
    let mut basis: Vec<Monomial> = vec![Monomial(Vec::new())];
    let mut level: Vec<Monomial> = basis.clone();
    'levels: while !level.is_empty() {
        let mut next: Vec<Monomial> = Vec::new();
        for m in &level {
            for g in 0..gens.len() {
                if let Some(&last) = m.0.last() {
                    if g < last {
                        continue;
                    }
                }
                let mut v = m.0.clone();
                v.push(g);
                let cand = Monomial(v);
                if exterior
                    && gens[g].degree.rem_euclid(2) == 1
                    && m.0.iter().filter(|&&x| x == g).count() > 0
                {
                    continue;
                }
                if m.0.iter().filter(|&&x| x == g).count() >= 2 {
                    continue; // cap powers at cube
                }
                if monomial_filtration(&cand, &gens) >= l {
                    continue;
                }
                if !next.contains(&cand) {
                    next.push(cand);
                }
            }
        }
        next.sort();
        for m in next.iter() {
            if basis.len() >= params.dim {
                break 'levels;
            }
            basis.push(m.clone());
        }
        level = next;
    }
    basis.sort();
    let find = |m: &Monomial| basis.iter().position(|b| b == m);

    // Differential on algebra generators: cycle generators first, then the
    // rest may target monomials built from cycles.
    let mut is_cycle = vec![true; gens.len()];
    let mut d_gen: Vec<Vec<(u32, usize)>> = vec![Vec::new(); gens.len()];
    let mut order: Vec<usize> = (0..gens.len()).collect();
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    for &g in &order {
        if rng.random_bool(0.45) {
            continue; // stays a cycle
        }
        // candidate targets: monomials of degree deg(g)-1, filtration >=
        // filt(g), all of whose factors are cycle generators
        let candidates: Vec<usize> = basis
            .iter()
            .enumerate()
            .filter(|(_, m)| {
                monomial_degree(m, &gens) == gens[g].degree - 1
                    && monomial_filtration(m, &gens) >= gens[g].filtration
                    && m.0.iter().all(|&f| is_cycle[f] && f != g)
            })
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let t = candidates[rng.random_range(0..candidates.len())];
        let coeff = rng.random_range(1..zm.m());
        d_gen[g] = vec![(coeff, t)];
        is_cycle[g] = false;
    }

    // Multiplication table on the monomial basis.
    let dim = basis.len();
    let mut mult: BTreeMap<(usize, usize), Vec<(u32, usize)>> = BTreeMap::new();
    for i in 0..dim {
        for j in 0..dim {
            if let Some((sign, m)) = merge_monomials(&basis[i], &basis[j], &gens, exterior) {
                if let Some(t) = find(&m) {
                    let coeff = zm.reduce(sign);
                    if coeff != 0 {
                        mult.insert((i, j), vec![(coeff, t)]);
                    }
                }
            }
        }
    }

    // Extend d to monomials by the Leibniz rule, using the mult table.
    let mut diff = Matrix::zero(zm, dim, dim);
    let mut d_chain: Vec<Option<Vec<u32>>> = vec![None; dim];
    #[allow(clippy::too_many_arguments)]
    fn d_of(
        idx: usize,
        basis: &[Monomial],
        gens: &[AlgGen],
        d_gen: &[Vec<(u32, usize)>],
        mult: &BTreeMap<(usize, usize), Vec<(u32, usize)>>,
        zm: Modulus,
        memo: &mut Vec<Option<Vec<u32>>>,
        find: &dyn Fn(&Monomial) -> Option<usize>,
    ) -> Vec<u32> {
        if let Some(v) = &memo[idx] {
            return v.clone();
        }
        let m = &basis[idx];
        let dim = basis.len();
        let mut out = vec![0u32; dim];
        if m.0.len() == 1 {
            for &(c, t) in &d_gen[m.0[0]] {
                out[t] = zm.add(out[t], c);
            }
        } else if m.0.len() > 1 {
            // m = g * rest
            let g = m.0[0];
            let rest = Monomial(m.0[1..].to_vec());
            let rest_idx = find(&rest).expect("basis is downward closed");
            // d(g) * rest
            for &(c, t) in &d_gen[g] {
                // t is a monomial index; multiply with rest via mult
                if let Some(terms) = mult.get(&(t, rest_idx)) {
                    for &(c2, u) in terms {
                        out[u] = zm.add(out[u], zm.mul(c, c2));
                    }
                }
            }
            // (-1)^{|g|} g * d(rest)
            let sign = if gens[g].degree.rem_euclid(2) == 0 {
                1i64
            } else {
                -1
            };
            let g_mono = Monomial(vec![g]);
            let g_idx = find(&g_mono).expect("generators are in the basis");
            let drest = d_of(rest_idx, basis, gens, d_gen, mult, zm, memo, find);
            for (t, &c) in drest.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if let Some(terms) = mult.get(&(g_idx, t)) {
                    for &(c2, u) in terms {
                        let contrib = zm.reduce(sign * (zm.mul(c, c2) as i64));
                        out[u] = zm.add(out[u], contrib);
                    }
                }
            }
        }
        memo[idx] = Some(out.clone());
        out
    }
    for i in 0..dim {
        let row = d_of(
            i, &basis, &gens, &d_gen, &mult, zm, &mut d_chain, &find,
        );
        diff.set_row(i, &row);
    }

    let generators: Vec<Generator> = basis
        .iter()
        .map(|m| Generator {
            name: monomial_name(m, &gens),
            degree: monomial_degree(m, &gens),
            filtration: monomial_filtration(m, &gens),
            weight: if use_weights {
                Some(vec![m.0.iter().map(|&i| gens[i].weight).sum()])
            } else {
                None
            },
        })
        .collect();
    let unit = basis
        .iter()
        .position(|m| m.0.is_empty())
        .expect("unit always in basis");
    FilteredDga::new(zm, generators, l, diff, unit, mult)
}
