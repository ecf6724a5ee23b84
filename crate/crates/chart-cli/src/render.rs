//! Chart rendering: a text grid and a minimal hand-rolled SVG emitter.
//! Stem runs horizontally, filtration vertically; differentials are drawn
//! as arrows. Output is deterministic for a fixed document.

use crate::schema::ChartDocument;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub fn render_ascii(doc: &ChartDocument) -> String {
    let mut cells: BTreeMap<(i32, i32), Vec<String>> = BTreeMap::new();
    for c in &doc.classes {
        cells
            .entry((c.stem, c.filtration))
            .or_default()
            .push(c.name.clone());
    }
    let mut out = String::new();
    let _ = writeln!(out, "chart: {}", doc.name);
    if cells.is_empty() {
        let _ = writeln!(out, "(empty)");
        return out;
    }
    let (n_min, n_max) = cells
        .keys()
        .fold((i32::MAX, i32::MIN), |(lo, hi), &(n, _)| (lo.min(n), hi.max(n)));
    let (f_min, f_max) = cells
        .keys()
        .fold((i32::MAX, i32::MIN), |(lo, hi), &(_, f)| (lo.min(f), hi.max(f)));
    // column widths
    let mut width = vec![1usize; (n_max - n_min + 1) as usize];
    for (&(n, _), names) in &cells {
        let w = names.join(",").chars().count();
        let idx = (n - n_min) as usize;
        width[idx] = width[idx].max(w);
    }
    for f in (f_min..=f_max).rev() {
        let _ = write!(out, "f={f:>2} |");
        for n in n_min..=n_max {
            let cell = cells
                .get(&(n, f))
                .map(|names| names.join(","))
                .unwrap_or_default();
            let w = width[(n - n_min) as usize];
            let pad = w.saturating_sub(cell.chars().count());
            let _ = write!(out, " {}{} ", cell, " ".repeat(pad));
        }
        let _ = writeln!(out);
    }
    let _ = write!(out, "      ");
    for n in n_min..=n_max {
        let w = width[(n - n_min) as usize];
        let label = format!("n={n}");
        let pad = w.saturating_sub(label.chars().count());
        let _ = write!(out, " {}{} ", label, " ".repeat(pad));
    }
    let _ = writeln!(out);
    if !doc.differentials.is_empty() {
        let _ = writeln!(out, "differentials:");
        for d in &doc.differentials {
            let _ = writeln!(out, "  d_{}({}) = {}{}", d.page, d.source, if d.coeff == 1 { String::new() } else { format!("{}·", d.coeff) }, d.target);
        }
    }
    out
}

const CELL: i32 = 48;
const MARGIN: i32 = 40;

pub fn render_svg(doc: &ChartDocument) -> String {
    let mut cells: BTreeMap<(i32, i32), Vec<String>> = BTreeMap::new();
    for c in &doc.classes {
        cells
            .entry((c.stem, c.filtration))
            .or_default()
            .push(c.name.clone());
    }
    let (n_min, n_max) = cells.keys().fold((0, 1), |(lo, hi), &(n, _)| {
        (lo.min(n), hi.max(n))
    });
    let (f_min, f_max) = cells.keys().fold((0, 1), |(lo, hi), &(_, f)| {
        (lo.min(f), hi.max(f))
    });
    let w = (n_max - n_min + 1) * CELL + 2 * MARGIN;
    let h = (f_max - f_min + 1) * CELL + 2 * MARGIN;
    let x_of = |n: i32| MARGIN + (n - n_min) * CELL + CELL / 2;
    let y_of = |f: i32| h - MARGIN - (f - f_min) * CELL - CELL / 2;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"##
    );
    let _ = writeln!(
        svg,
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#444"/></marker></defs>"##
    );
    let _ = writeln!(svg, r##"<rect width="{w}" height="{h}" fill="white"/>"##);
    // grid
    for n in n_min..=n_max + 1 {
        let x = MARGIN + (n - n_min) * CELL;
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}" stroke="#ddd"/>"##,
            h - MARGIN
        );
    }
    for f in f_min..=f_max + 1 {
        let y = h - MARGIN - (f - f_min) * CELL;
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/>"##,
            w - MARGIN
        );
    }
    // axis labels
    for n in n_min..=n_max {
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{}" font-size="11" text-anchor="middle" fill="#333">{n}</text>"##,
            x_of(n),
            h - MARGIN / 2
        );
    }
    for f in f_min..=f_max {
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{}" font-size="11" text-anchor="middle" fill="#333">{f}</text>"##,
            MARGIN / 2,
            y_of(f) + 4
        );
    }
    // dots with small horizontal offsets for multiple classes
    let mut dot_pos: BTreeMap<String, (i32, i32)> = BTreeMap::new();
    for (&(n, f), names) in &cells {
        let count = names.len() as i32;
        for (i, name) in names.iter().enumerate() {
            let dx = (2 * i as i32 - (count - 1)) * 7;
            let (x, y) = (x_of(n) + dx, y_of(f));
            dot_pos.insert(name.clone(), (x, y));
            let _ = writeln!(
                svg,
                r##"<circle cx="{x}" cy="{y}" r="3.5" fill="#1a1a1a"/>"##
            );
            let _ = writeln!(
                svg,
                r##"<text x="{x}" y="{}" font-size="9" text-anchor="middle" fill="#555">{name}</text>"##,
                y - 7
            );
        }
    }
    // differentials as arrows
    for d in &doc.differentials {
        let (Some(&(x1, y1)), Some(&(x2, y2))) = (dot_pos.get(&d.source), dot_pos.get(&d.target))
        else {
            continue;
        };
        let _ = writeln!(
            svg,
            r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#444" stroke-width="1.2" marker-end="url(#arrow)"/>"##
        );
    }
    let _ = writeln!(svg, "</svg>");
    svg
}
