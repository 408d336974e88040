use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use seshadri_core::{
    canonical_class, compute, enumerate_minus_curves, gamma_set, half_bound_certificate, DivisorClass, MinusKind,
    PointSpec, ScanBox, SurfaceConfig,
};

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for n in [6usize, 7, 8] {
        g.bench_function(format!("minus1 n={n}"), |b| {
            b.iter(|| enumerate_minus_curves(black_box(n), MinusKind::Minus1, None).unwrap())
        });
    }
    g.bench_function("minus2 n=8", |b| b.iter(|| enumerate_minus_curves(8, MinusKind::Minus2, None).unwrap()));
    g.finish();
}

fn seshadri(c: &mut Criterion) {
    let mut g = c.benchmark_group("compute");
    let dp7 = SurfaceConfig::del_pezzo_general(7).unwrap();
    let l7 = DivisorClass::from_i64(9, &[3, 3, 3, 2, 2, 2, 1]);
    g.bench_function("gamma r=7", |b| b.iter(|| gamma_set(&dp7, &PointSpec::GenericOnSurface, None).unwrap()));
    g.bench_function("r=7 generic", |b| b.iter(|| compute(black_box(&l7), &dp7, &PointSpec::GenericOnSurface, None).unwrap()));
    let nodal = SurfaceConfig::nodal_cubic(8).unwrap();
    let k8 = -&canonical_class(8);
    g.bench_function("r=8 node", |b| b.iter(|| compute(&k8, &nodal, &PointSpec::NodeOfConfigCurve, None).unwrap()));
    g.finish();
}

fn box_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("box scan");
    g.sample_size(10);
    let scan_box = ScanBox { max_degree: 12, max_multiplicity: 4, max_t: 6 };
    for r in [9usize, 10] {
        let l = DivisorClass::uniform(4, 1, r);
        g.bench_function(format!("r={r}"), |b| b.iter(|| half_bound_certificate(r, scan_box, &l).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, enumeration, seshadri, box_scan);
criterion_main!(benches);
