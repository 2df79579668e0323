use criterion::{criterion_group, criterion_main, Criterion};
use skellam_bench::{rates, type_one, type_three};
use skellam_fields::field_integrals::rl_integral_sample;
use skellam_fields::field_integrals::IntegralOrders;
use skellam_fields::fractional_field::{fsrf1_sample, fsrf3_sample};
use skellam_fields::sampling::{sample_inverse_subordinator, sample_stable_unit, BoxRegion, RngStream};
use skellam_fields::skellam_field::gsrf_count;
use std::hint::black_box;

pub fn sampler_bench(c: &mut Criterion) {
    let params = rates().to_gsrf();
    let region = BoxRegion::rectangle(1.5, 2.0).unwrap();
    let mut rng = RngStream::new(7, 0);
    c.bench_function("gsrf-count", |b| b.iter(|| gsrf_count(&params, &region, &mut rng).unwrap()));
    c.bench_function("stable-unit", |b| b.iter(|| sample_stable_unit(black_box(0.7), &mut rng).unwrap()));
    c.bench_function("inverse-subordinator", |b| {
        b.iter(|| sample_inverse_subordinator(black_box(0.7), 1.0, &mut rng).unwrap())
    });
    let one = type_one();
    let three = type_three();
    c.bench_function("fsrf1-sample", |b| b.iter(|| fsrf1_sample(&one, 1.0, 1.0, &mut rng).unwrap()));
    c.bench_function("fsrf3-sample", |b| b.iter(|| fsrf3_sample(&three, 1.0, 1.0, &mut rng).unwrap()));
    let orders = IntegralOrders::new(0.5, 1.5).unwrap();
    c.bench_function("rl-integral-sample", |b| {
        b.iter(|| rl_integral_sample(2.0, &orders, 1.0, 1.0, &mut rng).unwrap())
    });
}

criterion_group!(benches, sampler_bench);
criterion_main!(benches);
