//! Seeded verification campaigns over random filtered DGAs. Seeds are
//! independent, so the campaign is data-parallel; the `parallel` feature
//! routes it through rayon and the sequential path stays available for
//! comparison.

use crate::oracle::{
    find_applicable_triples, find_applicable_triples_e1, oracle_verify_moss,
    oracle_verify_moss_e1,
};
use filtered_dga::{random_instance, RandomDgaParams};
use ring_linear::Modulus;

#[derive(Debug, Clone)]
pub struct CampaignParams {
    pub seeds: u64,
    pub dim: usize,
    pub filtration_len: u32,
    pub modulus: Modulus,
    /// Pages to try for the E_r form.
    pub pages: Vec<u32>,
    /// Also run the E_1 variant.
    pub include_e1: bool,
    /// Cap on applicable triples per instance.
    pub per_instance: usize,
}

impl Default for CampaignParams {
    fn default() -> Self {
        CampaignParams {
            seeds: 500,
            dim: 12,
            filtration_len: 4,
            modulus: Modulus::new(2, 2).unwrap(),
            pages: vec![1, 2],
            include_e1: true,
            per_instance: 4,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CampaignReport {
    pub instances: u64,
    pub applicable: u64,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl CampaignReport {
    fn merge(mut self, other: CampaignReport) -> CampaignReport {
        self.instances += other.instances;
        self.applicable += other.applicable;
        self.passed += other.passed;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self
    }
}

fn run_seed(seed: u64, params: &CampaignParams) -> CampaignReport {
    let mut report = CampaignReport {
        instances: 1,
        ..Default::default()
    };
    let gen_params = RandomDgaParams::new(params.dim, params.filtration_len, params.modulus);
    let Ok(a) = random_instance(seed, &gen_params) else {
        return report;
    };
    for &r in &params.pages {
        for triple in find_applicable_triples(&a, r, params.per_instance) {
            report.applicable += 1;
            let out = oracle_verify_moss(&a, &triple);
            if out.passed() {
                report.passed += 1;
            } else {
                report.failed += 1;
                report.failures.push(format!(
                    "seed {seed} page {r} triple {:?}: {:?} / {:?}",
                    triple.bidegrees, out.part1, out.part2
                ));
            }
        }
    }
    if params.include_e1 {
        for triple in find_applicable_triples_e1(&a, params.per_instance) {
            report.applicable += 1;
            let out = oracle_verify_moss_e1(&a, &triple);
            if out.passed() {
                report.passed += 1;
            } else {
                report.failed += 1;
                report.failures.push(format!(
                    "seed {seed} (E_1 form) triple {:?}: {:?} / {:?}",
                    triple.bidegrees, out.part1, out.part2
                ));
            }
        }
    }
    report
}

/// Run the campaign one seed at a time.
pub fn run_campaign_serial(params: &CampaignParams) -> CampaignReport {
    (0..params.seeds)
        .map(|seed| run_seed(seed, params))
        .fold(CampaignReport::default(), CampaignReport::merge)
}

/// Run the campaign, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn run_campaign(params: &CampaignParams) -> CampaignReport {
    use rayon::prelude::*;
    (0..params.seeds)
        .into_par_iter()
        .map(|seed| run_seed(seed, params))
        .reduce(CampaignReport::default, CampaignReport::merge)
}

#[cfg(not(feature = "parallel"))]
pub fn run_campaign(params: &CampaignParams) -> CampaignReport {
    run_campaign_serial(params)
}
