use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use pdcentral::{
    alternating_center, dp_distance, exhaustive_center, AlternatingOptions, CenterOptions, PNorm,
    Tendency,
};
use pdcentral_bench::{moving_point_family, random_diagram};

fn bench_distance(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_diagram(&mut rng, 24);
    let y = random_diagram(&mut rng, 20);

    let mut group = c.benchmark_group("dp_distance_24x20");
    for p in [PNorm::ONE, PNorm::TWO, PNorm::Infinity] {
        group.bench_function(format!("p={p}"), |b| {
            b.iter(|| dp_distance(black_box(&x), black_box(&y), p).unwrap())
        });
    }
    group.finish();
}

fn bench_centers(c: &mut Criterion) {
    let family = moving_point_family(3.5);
    c.bench_function("exhaustive_median_family", |b| {
        b.iter(|| {
            exhaustive_center(
                black_box(&family),
                Tendency::Median,
                &CenterOptions::default(),
            )
            .unwrap()
        })
    });

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let inputs: Vec<_> = (0..3).map(|_| random_diagram(&mut rng, 3)).collect();
    c.bench_function("exhaustive_mean_3x3", |b| {
        b.iter(|| {
            exhaustive_center(black_box(&inputs), Tendency::Mean, &CenterOptions::default())
                .unwrap()
        })
    });

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let larger: Vec<_> = (0..5).map(|_| random_diagram(&mut rng, 8)).collect();
    c.bench_function("alternating_mean_5x8", |b| {
        b.iter(|| {
            alternating_center(
                black_box(&larger),
                Tendency::Mean,
                None,
                &AlternatingOptions::default(),
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, bench_distance, bench_centers);
criterion_main!(benches);
