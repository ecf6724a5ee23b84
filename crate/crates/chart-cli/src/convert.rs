//! Build page towers, chart contexts, and fact bases out of chart
//! documents.

use crate::schema::{ChartDocument, ChartError, Terms};
use moss_deduce::{BracketWitness, ChartContext, CosetDesc, ElementRef, Fact, FactBase, Provenance};
use ring_linear::{Matrix, Modulus};
use sseq_core::{Bidegree, Detection, Page, PageElement, PageGroup, PageTower, SseqData};
use std::collections::BTreeMap;

pub struct ChartIndex {
    /// class name -> (bidegree, index within the bidegree group)
    pub position: BTreeMap<String, (Bidegree, usize)>,
    pub bidegrees: BTreeMap<Bidegree, Vec<String>>,
}

impl ChartIndex {
    fn new(doc: &ChartDocument) -> ChartIndex {
        let mut bidegrees: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        for c in &doc.classes {
            bidegrees
                .entry((c.stem, c.filtration))
                .or_default()
                .push(c.name.clone());
        }
        let mut position = BTreeMap::new();
        for (&bid, names) in &bidegrees {
            for (i, n) in names.iter().enumerate() {
                position.insert(n.clone(), (bid, i));
            }
        }
        ChartIndex {
            position,
            bidegrees,
        }
    }

    /// Coordinates of an element given by terms; all terms must live in one
    /// bidegree.
    pub fn element(&self, doc: &ChartDocument, terms: &Terms) -> Result<(Bidegree, Vec<u32>), ChartError> {
        let mut bid: Option<Bidegree> = None;
        for (_, name) in terms {
            let &(b, _) = self
                .position
                .get(name)
                .ok_or_else(|| ChartError::UnknownClass(name.clone()))?;
            match bid {
                None => bid = Some(b),
                Some(prev) if prev != b => {
                    return Err(ChartError::Inconsistent(format!(
                        "element mixes bidegrees {prev:?} and {b:?}"
                    )))
                }
                _ => {}
            }
        }
        let bid = bid.ok_or_else(|| ChartError::Inconsistent("empty element".into()))?;
        let names = &self.bidegrees[&bid];
        let mut coords = vec![0u32; names.len()];
        for (coeff, name) in terms {
            let (_, i) = self.position[name];
            let order = doc.class(name)?.order as i64;
            coords[i] = ((coords[i] as i64 + coeff.rem_euclid(order)) % order) as u32;
        }
        Ok((bid, coords))
    }

    pub fn terms_name(&self, terms: &Terms) -> String {
        let parts: Vec<String> = terms
            .iter()
            .filter(|&&(c, _)| c != 0)
            .map(|(c, n)| {
                if *c == 1 {
                    n.clone()
                } else {
                    format!("{c}{n}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// The E_1 page encoded by the chart: one cyclic summand per class, the
/// declared pairing, and the declared page-1 differentials.
pub fn chart_e1(doc: &ChartDocument) -> Result<(Page, ChartIndex), ChartError> {
    let zm = Modulus::new(doc.modulus.p, doc.modulus.k)
        .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
    let index = ChartIndex::new(doc);
    let mut page = Page::empty(1, zm);
    for (&bid, names) in &index.bidegrees {
        let orders = names
            .iter()
            .map(|n| doc.class(n).expect("indexed").order)
            .collect();
        page.groups.insert(
            bid,
            PageGroup {
                orders,
                names: names.clone(),
            },
        );
    }
    // declared products, bilinear on class generators
    for p in &doc.products {
        let (b1, i) = index.position[&p.left];
        let (b2, j) = index.position[&p.right];
        let out_bid = (b1.0 + b2.0, b1.1 + b2.1);
        let out_rank = page.rank_at(out_bid);
        if out_rank == 0 {
            continue;
        }
        let (_, coords) = index.element(doc, &p.terms)?;
        let table = page.pairing.entry((b1, b2)).or_insert_with(|| {
            vec![vec![vec![0; out_rank]; index.bidegrees[&b2].len()]; index.bidegrees[&b1].len()]
        });
        table[i][j] = coords;
    }
    // page-1 differentials
    let mut d1: BTreeMap<Bidegree, Matrix> = BTreeMap::new();
    for d in doc.differentials.iter().filter(|d| d.page == 1) {
        let (src_bid, i) = index.position[&d.source];
        let (tgt_bid, j) = index.position[&d.target];
        let m = d1.entry(src_bid).or_insert_with(|| {
            Matrix::zero(
                zm,
                index.bidegrees[&src_bid].len(),
                index.bidegrees[&tgt_bid].len(),
            )
        });
        let cur = m.get(i, j);
        m.set(i, j, zm.add(cur, zm.reduce(d.coeff)));
    }
    page.differentials = d1;
    Ok((page, index))
}

/// The full tower: turn pages up through `complete_through + 1`,
/// installing the declared differentials of each page along the way.
pub fn chart_tower(doc: &ChartDocument) -> Result<(PageTower, ChartIndex), ChartError> {
    let (e1, index) = chart_e1(doc)?;
    let zm = e1.modulus;
    let mut tower = PageTower::from_e1(e1);
    for r in 2..=doc.complete_through + 1 {
        tower
            .extend()
            .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
        // declared d_r, read through the page-r identification
        let declared: Vec<_> = doc.differentials.iter().filter(|d| d.page == r).collect();
        if declared.is_empty() {
            continue;
        }
        // E_1-level matrix of the declared differentials per source bidegree
        let mut e1_level: BTreeMap<Bidegree, Matrix> = BTreeMap::new();
        for d in &declared {
            let (src_bid, i) = index.position[&d.source];
            let (tgt_bid, j) = index.position[&d.target];
            let m = e1_level.entry(src_bid).or_insert_with(|| {
                Matrix::zero(
                    zm,
                    index.bidegrees[&src_bid].len(),
                    index.bidegrees[&tgt_bid].len(),
                )
            });
            let cur = m.get(i, j);
            m.set(i, j, zm.add(cur, zm.reduce(d.coeff)));
        }
        let page = tower
            .page(r)
            .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
        let mut to_install: Vec<(Bidegree, Matrix)> = Vec::new();
        for (&src_bid, e1_matrix) in &e1_level {
            let tgt_bid = (src_bid.0 - 1, src_bid.1 + r as i32);
            let rank = page.rank_at(src_bid);
            if rank == 0 {
                return Err(ChartError::Inconsistent(format!(
                    "a d_{r} is declared out of {src_bid:?}, but nothing survives there"
                )));
            }
            let reps = tower.e1_reps[(r - 1) as usize]
                .get(&src_bid)
                .cloned()
                .ok_or_else(|| {
                    ChartError::Inconsistent(format!("no representatives at {src_bid:?}"))
                })?;
            let mut m = Matrix::zero(zm, rank, page.rank_at(tgt_bid));
            for g in 0..rank {
                let e1_coords = reps.row_dense(g);
                let image_e1 = e1_matrix.apply_left(&e1_coords);
                let elt = PageElement {
                    bidegree: tgt_bid,
                    coords: image_e1,
                };
                let pushed = tower.project_element(&elt, 1, r).ok_or_else(|| {
                    ChartError::Inconsistent(format!(
                        "the declared d_{r} target at {tgt_bid:?} does not survive to page {r}"
                    ))
                })?;
                m.set_row(g, &pushed.coords);
            }
            to_install.push((src_bid, m));
        }
        for (bid, m) in to_install {
            tower.install_differential(r, bid, m);
        }
    }
    Ok((tower, index))
}

/// Assemble the chart context plus its axiom facts.
pub fn chart_fact_base(doc: &ChartDocument) -> Result<FactBase, ChartError> {
    let (tower, index) = chart_tower(doc)?;
    let mut detections = Vec::new();
    for det in &doc.detections {
        let (bid, coords) = index.element(doc, &det.element)?;
        detections.push(Detection {
            bidegree: bid,
            coords,
            homotopy: det.homotopy.clone(),
            filtration: det.filtration,
        });
    }
    let mut classes = BTreeMap::new();
    for c in &doc.classes {
        let (bid, i) = index.position[&c.name];
        let mut coords = vec![0u32; index.bidegrees[&bid].len()];
        coords[i] = 1;
        classes.insert(
            c.name.clone(),
            ElementRef {
                bidegree: bid,
                coords,
                name: c.name.clone(),
            },
        );
    }
    let mut homotopy_products = BTreeMap::new();
    for p in &doc.homotopy.products {
        homotopy_products.insert((p.left.clone(), p.right.clone()), p.name.clone());
    }
    let context = ChartContext {
        data: SseqData {
            tower,
            complete_through: Some(doc.complete_through),
            detections: detections.clone(),
        },
        classes,
        homotopy_products,
    };
    let mut base = FactBase::new(context);

    // axioms, in declaration order
    for det in &doc.detections {
        let (bid, coords) = index.element(doc, &det.element)?;
        base.assert_fact(
            Fact::Detects {
                class: ElementRef {
                    bidegree: bid,
                    coords,
                    name: index.terms_name(&det.element),
                },
                homotopy: det.homotopy.clone(),
                filtration: det.filtration,
            },
            Provenance::Axiom,
        )
        .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
    }
    for (l, r) in &doc.homotopy.zero_products {
        base.assert_fact(
            Fact::ZeroProductHomotopy {
                left: l.clone(),
                right: r.clone(),
            },
            Provenance::Axiom,
        )
        .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
    }
    for b in &doc.homotopy.e1_brackets {
        let inputs: Vec<ElementRef> = b
            .inputs
            .iter()
            .map(|n| {
                let (bid, i) = index.position[n];
                let mut coords = vec![0u32; index.bidegrees[&bid].len()];
                coords[i] = 1;
                ElementRef {
                    bidegree: bid,
                    coords,
                    name: n.clone(),
                }
            })
            .collect();
        let (bid, rep) = index.element(doc, &b.contains)?;
        base.assert_fact(
            Fact::MasseyContains {
                inputs: [inputs[0].clone(), inputs[1].clone(), inputs[2].clone()],
                coset: CosetDesc {
                    page: 1,
                    bidegree: bid,
                    rep,
                    rep_name: index.terms_name(&b.contains),
                    indeterminacy: Vec::new(),
                    strict: b.strict,
                },
            },
            Provenance::Axiom,
        )
        .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
    }
    for b in &doc.homotopy.brackets {
        base.assert_fact(
            Fact::BracketContains {
                bracket: b.bracket.clone(),
                witness: BracketWitness {
                    element: Some(b.contains.clone()),
                    detected_by: None,
                    indeterminacy: b.indeterminacy.clone(),
                    strict: b.strict,
                    description: format!("contains {}", b.contains),
                },
            },
            Provenance::Axiom,
        )
        .map_err(|e| ChartError::Inconsistent(e.to_string()))?;
    }
    Ok(base)
}
