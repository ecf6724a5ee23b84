//! The `moss` command line: chart validation, page listings, bracket
//! computations, crossing checks, rule-driven deduction, oracle campaigns,
//! and rendering.

use crate::convert::{chart_fact_base, chart_tower};
use crate::fixtures;
use crate::render::{render_ascii, render_svg};
use crate::report::markdown_report;
use crate::schema::ChartDocument;
use clap::{Parser, Subcommand};
use moss_deduce::{
    explain, rule_moss_e1, rule_moss_r, rule_shuffle, Fact, FactBase, RuleOutcome,
};
use sseq_core::{crossing_check, massey_on_page, CrossingOutcome, PageElement};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "moss",
    about = "Multiplicative spectral sequence charts: Massey products, crossing checks, \
             convergence deductions, and a chain-level oracle",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Validate a chart or DGA description file (fixture names allowed).
    Validate { input: String },
    /// Print the page groups of a chart or DGA up to a page bound.
    Pages {
        input: String,
        #[arg(long, default_value_t = 3)]
        max_page: u32,
    },
    /// Compute one Massey product on a page of a chart.
    Massey {
        chart: String,
        #[arg(long, default_value_t = 1)]
        page: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        a2: String,
        #[arg(long)]
        a3: String,
    },
    /// Run the crossing-differential check at a degree.
    Crossing {
        chart: String,
        #[arg(long, allow_negative_numbers = true)]
        n: i32,
        #[arg(long, allow_negative_numbers = true)]
        f: i32,
        #[arg(long, default_value_t = 1)]
        page: u32,
    },
    /// Load chart facts, run the selected rules, and write a deduction log.
    Deduce {
        chart: String,
        /// Rules to run, in order: moss-e1, moss-r, shuffle.
        #[arg(long = "rule")]
        rules: Vec<String>,
        /// Restrict to one input triple "a,a',a''".
        #[arg(long)]
        inputs: Option<String>,
        /// Page for moss-r.
        #[arg(long, default_value_t = 1)]
        page: u32,
        /// Left factor for the shuffle rule.
        #[arg(long)]
        factor: Option<String>,
        /// Append deductions to a JSON-lines log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run a seeded chain-level verification campaign.
    Oracle {
        #[arg(long, default_value_t = 500)]
        seeds: u64,
        #[arg(long, default_value_t = 12)]
        dim: usize,
        #[arg(long = "filtration-len", default_value_t = 4)]
        filtration_len: u32,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Force the sequential path.
        #[arg(long)]
        serial: bool,
    },
    /// Render a chart as an ASCII grid or SVG.
    Render {
        chart: String,
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a markdown report of facts and deductions.
    Report {
        chart: String,
        #[arg(long = "rule")]
        rules: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

enum Input {
    Chart(ChartDocument),
    Dga(filtered_dga::FilteredDga),
}

fn load_input(arg: &str) -> Result<Input, (i32, String)> {
    let text = if std::path::Path::new(arg).exists() {
        std::fs::read_to_string(arg).map_err(|e| (EXIT_USAGE, format!("cannot read {arg}: {e}")))?
    } else if let Some(doc) = fixtures::fixture_chart(arg) {
        return Ok(Input::Chart(doc));
    } else if let Some(dga) = fixtures::fixture_dga(arg) {
        return Ok(Input::Dga(dga));
    } else {
        return Err((
            EXIT_USAGE,
            format!("`{arg}` is neither a file nor a known fixture"),
        ));
    };
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| (EXIT_FAILURE, format!("{arg} is not valid JSON: {e}")))?;
    if value.get("classes").is_some() {
        ChartDocument::parse(&text)
            .map(Input::Chart)
            .map_err(|e| (EXIT_FAILURE, format!("invalid chart: {e}")))
    } else if value.get("generators").is_some() {
        filtered_dga::parse_dga(&text)
            .map(Input::Dga)
            .map_err(|e| (EXIT_FAILURE, format!("invalid DGA description: {e}")))
    } else {
        Err((
            EXIT_FAILURE,
            format!("{arg} is neither a chart (no `classes`) nor a DGA (no `generators`)"),
        ))
    }
}

fn load_chart(arg: &str) -> Result<ChartDocument, (i32, String)> {
    match load_input(arg)? {
        Input::Chart(doc) => Ok(doc),
        Input::Dga(_) => Err((EXIT_USAGE, "this command needs a chart, not a DGA".into())),
    }
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, (i32, String)> {
    match cli.command {
        Command::Validate { input } => match load_input(&input)? {
            Input::Chart(doc) => {
                chart_tower(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
                chart_fact_base(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
                println!("{}: valid chart ({} classes)", doc.name, doc.classes.len());
                Ok(EXIT_OK)
            }
            Input::Dga(dga) => {
                let report = dga.validate();
                if report.is_valid() {
                    println!("valid filtered DGA (dimension {})", dga.dim());
                    Ok(EXIT_OK)
                } else {
                    println!("{report}");
                    Ok(EXIT_FAILURE)
                }
            }
        },
        Command::Pages { input, max_page } => {
            match load_input(&input)? {
                Input::Chart(doc) => {
                    let (tower, _) = chart_tower(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
                    let top = max_page.min(doc.complete_through + 1);
                    if top < max_page {
                        println!(
                            "(differentials are declared complete through page {}, printing through page {top})",
                            doc.complete_through
                        );
                    }
                    for r in 1..=top {
                        print_page(tower.page(r).map_err(|e| (EXIT_FAILURE, e.to_string()))?);
                    }
                }
                Input::Dga(dga) => {
                    for r in 1..=max_page {
                        let er = sseq_core::er_page(&dga, r)
                            .map_err(|e| (EXIT_FAILURE, e.to_string()))?;
                        print_page(&er.page);
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Massey {
            chart,
            page,
            a,
            a2,
            a3,
        } => {
            let doc = load_chart(&chart)?;
            let base = chart_fact_base(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
            let tower = &base.context.data.tower;
            let elt = |name: &str| -> Result<PageElement, (i32, String)> {
                let class = base
                    .context
                    .class(name)
                    .ok_or((EXIT_USAGE, format!("unknown class `{name}`")))?;
                tower
                    .project_element(&base.context.element_of(class), 1, page)
                    .ok_or((
                        EXIT_FAILURE,
                        format!("`{name}` does not survive to page {page}"),
                    ))
            };
            let (ea, e2, e3) = (elt(&a)?, elt(&a2)?, elt(&a3)?);
            match massey_on_page(tower, page, &ea, &e2, &e3) {
                Ok(coset) => {
                    let next = tower
                        .page(page + 1)
                        .map_err(|e| (EXIT_FAILURE, e.to_string()))?;
                    let rep_name = next.element_name(&PageElement {
                        bidegree: coset.bidegree,
                        coords: coset.canonical_rep(),
                    });
                    if coset.is_strict() {
                        println!("⟨{a}, {a2}, {a3}⟩ = {{{rep_name}}} (strict)");
                    } else {
                        let gens: Vec<String> = (0..coset.indeterminacy.rows())
                            .map(|i| {
                                next.element_name(&PageElement {
                                    bidegree: coset.bidegree,
                                    coords: coset.indeterminacy.row_dense(i),
                                })
                            })
                            .filter(|s| s != "0")
                            .collect();
                        println!(
                            "⟨{a}, {a2}, {a3}⟩ ∋ {rep_name}, indeterminacy generated by {{{}}}",
                            gens.join(", ")
                        );
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => Err((EXIT_FAILURE, format!("Massey product undefined: {e}"))),
            }
        }
        Command::Crossing { chart, n, f, page } => {
            let doc = load_chart(&chart)?;
            let base = chart_fact_base(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
            match crossing_check(&base.context.data, (n, f), page) {
                CrossingOutcome::Holds { vacuous } => {
                    println!("holds{}", if vacuous { " (vacuous)" } else { "" });
                    Ok(EXIT_OK)
                }
                CrossingOutcome::Fails { witness } => {
                    println!(
                        "fails: element {:?} at {:?} supports d_{} hitting {:?}",
                        witness.element, witness.bidegree, witness.page, witness.target
                    );
                    Ok(EXIT_FAILURE)
                }
                CrossingOutcome::Unknown { needed_page } => {
                    println!("unknown: needs differentials through page {needed_page}");
                    Ok(EXIT_FAILURE)
                }
            }
        }
        Command::Deduce {
            chart,
            rules,
            inputs,
            page,
            factor,
            log,
        } => {
            let doc = load_chart(&chart)?;
            let mut base = chart_fact_base(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
            let applied = run_rules(&mut base, &rules, inputs.as_deref(), page, factor.as_deref())?;
            for &d in &applied {
                print!("{}", explain(&base, d).map_err(|e| (EXIT_FAILURE, e.to_string()))?);
            }
            if let Some(path) = log {
                let mut lines = base.deduction_log_lines().join("\n");
                lines.push('\n');
                std::fs::write(&path, lines)
                    .map_err(|e| (EXIT_FAILURE, format!("cannot write log: {e}")))?;
            }
            if applied.is_empty() {
                eprintln!("no rule applied");
                Ok(EXIT_FAILURE)
            } else {
                println!("{} deduction(s)", applied.len());
                Ok(EXIT_OK)
            }
        }
        Command::Oracle {
            seeds,
            dim,
            filtration_len,
            p,
            k,
            serial,
        } => {
            let modulus = ring_linear::Modulus::new(p, k)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let params = moss_deduce::CampaignParams {
                seeds,
                dim,
                filtration_len,
                modulus,
                ..Default::default()
            };
            let report = if serial {
                moss_deduce::run_campaign_serial(&params)
            } else {
                moss_deduce::run_campaign(&params)
            };
            println!(
                "applicable: {}, pass: {}, fail: {}",
                report.applicable, report.passed, report.failed
            );
            for f in report.failures.iter().take(10) {
                eprintln!("  {f}");
            }
            Ok(if report.failed == 0 { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Render {
            chart,
            format,
            output,
        } => {
            let doc = load_chart(&chart)?;
            let out = match format.as_str() {
                "ascii" => render_ascii(&doc),
                "svg" => render_svg(&doc),
                other => return Err((EXIT_USAGE, format!("unknown format `{other}`"))),
            };
            match output {
                Some(path) => std::fs::write(&path, out)
                    .map_err(|e| (EXIT_FAILURE, format!("cannot write: {e}")))?,
                None => print!("{out}"),
            }
            Ok(EXIT_OK)
        }
        Command::Report {
            chart,
            rules,
            output,
        } => {
            let doc = load_chart(&chart)?;
            let mut base = chart_fact_base(&doc).map_err(|e| (EXIT_FAILURE, e.to_string()))?;
            if !rules.is_empty() {
                run_rules(&mut base, &rules, None, 1, None)?;
            }
            let out = markdown_report(&doc, &base);
            match output {
                Some(path) => std::fs::write(&path, out)
                    .map_err(|e| (EXIT_FAILURE, format!("cannot write: {e}")))?,
                None => print!("{out}"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn print_page(page: &sseq_core::Page) {
    println!("E_{}:", page.r);
    for (&(n, f), g) in &page.groups {
        if g.orders.is_empty() {
            continue;
        }
        let parts: Vec<String> = g
            .orders
            .iter()
            .zip(&g.names)
            .map(|(o, name)| format!("Z/{o}⟨{name}⟩"))
            .collect();
        println!("  ({n}, {f}): {}", parts.join(" ⊕ "));
    }
    for (&(n, f), m) in &page.differentials {
        if m.is_zero() {
            continue;
        }
        for i in 0..m.rows() {
            let src = page.element_name(&page.basis_element((n, f), i));
            let tgt_bid = page.target_of_d((n, f));
            let coords = m.row_dense(i);
            let tgt = page.element_name(&PageElement {
                bidegree: tgt_bid,
                coords,
            });
            if tgt != "0" {
                println!("  d_{}({src}) = {tgt}", page.r);
            }
        }
    }
}

/// Run the selected rules in order over their candidate inputs. Returns
/// the ids of every applied deduction.
pub fn run_rules(
    base: &mut FactBase,
    rules: &[String],
    inputs: Option<&str>,
    page: u32,
    factor: Option<&str>,
) -> Result<Vec<usize>, (i32, String)> {
    let mut applied = Vec::new();
    let explicit: Option<Vec<String>> =
        inputs.map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    if let Some(names) = &explicit {
        if names.len() != 3 {
            return Err((EXIT_USAGE, "--inputs wants exactly three names".into()));
        }
    }
    for rule in rules {
        match rule.as_str() {
            "moss-e1" => {
                let candidates: Vec<[String; 3]> = match &explicit {
                    Some(names) => vec![[names[0].clone(), names[1].clone(), names[2].clone()]],
                    None => base
                        .facts()
                        .iter()
                        .filter_map(|s| match &s.fact {
                            Fact::MasseyContains { inputs, coset } if coset.page == 1 => Some([
                                inputs[0].name.clone(),
                                inputs[1].name.clone(),
                                inputs[2].name.clone(),
                            ]),
                            _ => None,
                        })
                        .collect(),
                };
                for [a, b, c] in candidates {
                    match rule_moss_e1(base, &a, &b, &c)
                        .map_err(|e| (EXIT_FAILURE, e.to_string()))?
                    {
                        RuleOutcome::Applied { deduction } => applied.push(deduction),
                        RuleOutcome::Refused { failing_premise } if explicit.is_some() => {
                            eprintln!("moss-e1 refused: {failing_premise}");
                        }
                        RuleOutcome::Withheld { unknown_premise } if explicit.is_some() => {
                            eprintln!("moss-e1 withheld: {unknown_premise}");
                        }
                        _ => {}
                    }
                }
            }
            "moss-r" => {
                let candidates: Vec<[String; 3]> = match &explicit {
                    Some(names) => vec![[names[0].clone(), names[1].clone(), names[2].clone()]],
                    None => {
                        let detected: Vec<String> = base
                            .facts()
                            .iter()
                            .filter_map(|s| match &s.fact {
                                Fact::Detects { class, .. }
                                    if class.coords.iter().filter(|&&c| c != 0).count() == 1
                                        && class.coords.contains(&1) =>
                                {
                                    Some(class.name.clone())
                                }
                                _ => None,
                            })
                            .collect();
                        let mut triples = Vec::new();
                        for a in &detected {
                            for b in &detected {
                                for c in &detected {
                                    triples.push([a.clone(), b.clone(), c.clone()]);
                                }
                            }
                        }
                        triples
                    }
                };
                for [a, b, c] in candidates {
                    match rule_moss_r(base, &a, &b, &c, page)
                        .map_err(|e| (EXIT_FAILURE, e.to_string()))?
                    {
                        RuleOutcome::Applied { deduction } => applied.push(deduction),
                        RuleOutcome::Refused { failing_premise } if explicit.is_some() => {
                            eprintln!("moss-r refused: {failing_premise}");
                        }
                        RuleOutcome::Withheld { unknown_premise } if explicit.is_some() => {
                            eprintln!("moss-r withheld: {unknown_premise}");
                        }
                        _ => {}
                    }
                }
            }
            "shuffle" => {
                let brackets: Vec<[String; 3]> = match &explicit {
                    Some(names) => vec![[names[0].clone(), names[1].clone(), names[2].clone()]],
                    None => base
                        .facts()
                        .iter()
                        .filter_map(|s| match &s.fact {
                            Fact::BracketContains { bracket, .. } => Some(bracket.clone()),
                            _ => None,
                        })
                        .collect(),
                };
                let factors: Vec<String> = match factor {
                    Some(x) => vec![x.to_string()],
                    None => base
                        .facts()
                        .iter()
                        .filter_map(|s| match &s.fact {
                            Fact::Detects { homotopy, .. } => Some(homotopy.clone()),
                            _ => None,
                        })
                        .collect(),
                };
                for b in &brackets {
                    for x in &factors {
                        match rule_shuffle(base, x, [&b[0], &b[1], &b[2]])
                            .map_err(|e| (EXIT_FAILURE, e.to_string()))?
                        {
                            RuleOutcome::Applied { deduction } => applied.push(deduction),
                            RuleOutcome::Refused { failing_premise }
                                if explicit.is_some() || factor.is_some() =>
                            {
                                eprintln!("shuffle refused: {failing_premise}");
                            }
                            _ => {}
                        }
                    }
                }
            }
            other => {
                return Err((
                    EXIT_USAGE,
                    format!("unknown rule `{other}` (expected moss-e1, moss-r, or shuffle)"),
                ))
            }
        }
    }
    Ok(applied)
}
