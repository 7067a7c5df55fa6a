use criterion::{black_box, criterion_group, criterion_main, Criterion};
use uavfas_bench::{bench_fading, bench_fas, bench_scenario};
use uavfas_core::channel::fas_gain_cdf;
use uavfas_core::linalg::Matrix;
use uavfas_core::montecarlo::{simulate_outage_counts, CopulaSampler, trial_rng};
use uavfas_core::rsma::outage_probability;
use uavfas_core::specfun::{
    equicorr_mvt_cdf_common, mvt_cdf_qmc, student_t_quantile, EquicorrMvt,
};
use uavfas_core::{McConfig, SamplerKind};

fn specfun_kernels(c: &mut Criterion) {
    c.bench_function("student_t_quantile", |b| {
        b.iter(|| student_t_quantile(black_box(0.0123), black_box(25.0)).unwrap())
    });
    let spec = EquicorrMvt::new(4, 25.0, 0.5).unwrap();
    c.bench_function("equicorr_mvt_cdf_common dim=4", |b| {
        b.iter(|| equicorr_mvt_cdf_common(black_box(1.2), &spec).unwrap())
    });
    let corr = Matrix::equicorrelated(4, 0.5);
    c.bench_function("mvt_cdf_qmc dim=4 se=1e-3", |b| {
        b.iter(|| mvt_cdf_qmc(&[1.2; 4], &corr, 25.0, 1e-3, black_box(7)).unwrap())
    });
}

fn channel_kernels(c: &mut Criterion) {
    let f = bench_fading();
    let cfg = bench_fas();
    c.bench_function("fas_gain_cdf", |b| {
        b.iter(|| fas_gain_cdf(black_box(0.8), &f, &cfg).unwrap())
    });
    let sampler = CopulaSampler::new(&f, &cfg).unwrap();
    c.bench_function("copula_sample", |b| {
        let mut gains = Vec::new();
        let mut trial = 0u64;
        b.iter(|| {
            let mut rng = trial_rng(1, trial);
            trial += 1;
            sampler.sample_into(&mut rng, &mut gains);
            black_box(gains.len())
        })
    });
}

fn outage_paths(c: &mut Criterion) {
    let scenario = bench_scenario();
    c.bench_function("outage_probability exact", |b| {
        b.iter(|| outage_probability(black_box(0), &scenario).unwrap())
    });
    let mc = McConfig {
        trials: 10_000,
        seed: 7,
        sampler: SamplerKind::Copula,
        chunk_size: 2048,
    };
    c.bench_function("simulate 10k trials", |b| {
        b.iter(|| simulate_outage_counts(black_box(0), &scenario, &mc).unwrap())
    });
}

criterion_group!(benches, specfun_kernels, channel_kernels, outage_paths);
criterion_main!(benches);
