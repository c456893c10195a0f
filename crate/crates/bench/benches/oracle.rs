use criterion::{black_box, criterion_group, criterion_main, Criterion};
use treeshift::{count_rooted, gms_basic, verify_snre, BasicSet};

fn bench_count(c: &mut Criterion) {
    let full = BasicSet::full_shift(2, 2).unwrap();
    c.bench_function("count full shift height 3", |b| {
        b.iter(|| count_rooted(black_box(&full), 3, 1).unwrap())
    });
    let gms = gms_basic(2, 2).unwrap();
    c.bench_function("verify gms heights 1..=3", |b| {
        b.iter(|| verify_snre(black_box(&gms), 3).unwrap())
    });
}

criterion_group!(benches, bench_count);
criterion_main!(benches);
