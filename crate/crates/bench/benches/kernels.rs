use std::hint::black_box;

use bhsum_bench::{gaussian_tensor, real_form};
use bhsum_core::constants::c_constant_closed;
use bhsum_core::forms_lab::{sup_norm, SupNormMethod, SupNormOptions};
use bhsum_core::interpolation::{find_convex_weights, ExponentNode, DEFAULT_TOL};
use bhsum_core::mixed_norms::mixed_norm;
use bhsum_core::{ExponentVector, Field};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn mixed_norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("mixed_norm");
    for n in [4usize, 8, 16] {
        let t = gaussian_tensor(Field::Complex, vec![n, n, n]);
        let p = ExponentVector::new(vec![1.0, 4.0 / 3.0, 2.0]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| b.iter(|| mixed_norm(black_box(t), &p)));
    }
    group.finish();
}

fn exact_sup_norm(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_sup_norm");
    let opts = SupNormOptions::default();
    for shape in [vec![4, 4], vec![3, 3, 3], vec![4, 4, 4]] {
        let u = real_form(shape.clone());
        let label = format!("{shape:?}");
        group.bench_function(label, |b| b.iter(|| sup_norm(black_box(&u), SupNormMethod::ExactSigns, &opts)));
    }
    group.finish();
}

fn constants(c: &mut Criterion) {
    let mut group = c.benchmark_group("c_constant_closed");
    for m in [10usize, 1_000, 10_000] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| c_constant_closed(black_box(m), 1.5, Field::Complex))
        });
    }
    group.finish();
}

fn convex_weights(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_convex_weights");
    for count in [4usize, 12, 20] {
        let nodes: Vec<ExponentNode> = (0..count)
            .map(|k| {
                let q: Vec<f64> = (0..3).map(|i| 1.0 + ((k * 7 + i * 3) % 11) as f64 / 2.0).collect();
                ExponentNode::new(ExponentVector::new(q).unwrap())
            })
            .collect();
        let recip: Vec<f64> = (0..3).map(|i| nodes.iter().map(|n| n.reciprocal()[i]).sum::<f64>() / count as f64).collect();
        let target = ExponentVector::from_reciprocals(&recip).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(count), &nodes, |b, nodes| {
            b.iter(|| find_convex_weights(black_box(&target), nodes, DEFAULT_TOL))
        });
    }
    group.finish();
}

criterion_group!(benches, mixed_norms, exact_sup_norm, constants, convex_weights);
criterion_main!(benches);
