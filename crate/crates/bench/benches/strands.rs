use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use orbiflip::cech::cech_cohomology;
use orbiflip::checks::pushforward_agreement;
use orbiflip::functors::{roundtrip_check, RoundTrip};
use orbiflip::resolution::betti_multidegrees;
use orbiflip::{Space, TwistClass, WeightSequence};
use orbiflip_bench::{PROJECTIVE, ROUNDTRIP_CASES};

fn seq(s: &str) -> WeightSequence {
    s.parse().unwrap()
}

fn betti(c: &mut Criterion) {
    let mut g = c.benchmark_group("betti");
    for w in [vec![1, 2, 3], vec![2, 3, 5, 6], vec![1, 1, 4, 6]] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{w:?}")), &w, |b, w| {
            b.iter(|| betti_multidegrees(black_box(w), 12))
        });
    }
    g.finish();
}

fn cech(c: &mut Criterion) {
    let mut g = c.benchmark_group("cech");
    for s in PROJECTIVE {
        let seq = seq(s);
        g.bench_with_input(BenchmarkId::from_parameter(s), &seq, |b, seq| {
            b.iter(|| cech_cohomology(seq, TwistClass::Minus(-5), 6).unwrap())
        });
    }
    g.finish();
}

fn roundtrip(c: &mut Criterion) {
    let mut g = c.benchmark_group("roundtrip_gf");
    g.sample_size(20);
    for &(s, k) in ROUNDTRIP_CASES {
        let seq = seq(s);
        g.bench_with_input(BenchmarkId::new(s, k), &seq, |b, seq| {
            b.iter(|| roundtrip_check(seq, k, RoundTrip::GF).unwrap())
        });
    }
    g.finish();
}

fn pushforward(c: &mut Criterion) {
    let mut g = c.benchmark_group("pushforward");
    g.sample_size(10);
    let seq = seq("1,1;1,1");
    g.bench_function("1,1;1,1 box 4", |b| b.iter(|| pushforward_agreement(&seq, Space::Minus, -2..=2, 4).unwrap()));
    g.finish();
}

criterion_group!(benches, betti, cech, roundtrip, pushforward);
criterion_main!(benches);
