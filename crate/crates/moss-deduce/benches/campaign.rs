//! Oracle campaign throughput: sequential versus rayon data-parallel.
//! Run with `cargo bench -p moss-deduce`.

use criterion::{criterion_group, criterion_main, Criterion};
use moss_deduce::{run_campaign, run_campaign_serial, CampaignParams};

fn params() -> CampaignParams {
    CampaignParams {
        seeds: 24,
        dim: 12,
        filtration_len: 4,
        pages: vec![1, 2],
        include_e1: true,
        per_instance: 3,
        ..Default::default()
    }
}

fn bench_campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_campaign");
    group.sample_size(10);
    group.bench_function("serial", |b| {
        b.iter(|| {
            let report = run_campaign_serial(&params());
            assert_eq!(report.failed, 0);
            report.applicable
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let report = run_campaign(&params());
            assert_eq!(report.failed, 0);
            report.applicable
        })
    });
    group.finish();
}

criterion_group!(benches, bench_campaign);
criterion_main!(benches);
