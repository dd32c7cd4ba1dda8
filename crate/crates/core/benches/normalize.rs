//! Batch normalization through `par::map` against the sequential
//! `par::map_seq`. Build with `--no-default-features` to also make the
//! per-degree column assembly sequential.

use criterion::{criterion_group, criterion_main, Criterion};
use crnormal::gq::{rat, GaussianRational as Gq};
use crnormal::normalform::normalize;
use crnormal::{par, transform, FormalMap, Germ, HoloSeries2, RealSeries3, Weighting};

fn germ(w: Weighting, n: u32, terms: &[((u32, u32, u32), Gq)]) -> Germ {
    let mut s = RealSeries3::zero(w, n);
    for (key, c) in terms {
        s.add_term(*key, c);
        if key.0 != key.1 {
            s.add_term((key.1, key.0, key.2), &c.conj());
        }
    }
    Germ::new(s).unwrap()
}

/// Images of a few models under a fixed polynomial map.
fn batch() -> Vec<(Germ, u32)> {
    let mut out = Vec::new();
    for (k, order, model) in [
        (2u32, 8u32, vec![((1, 1, 0), Gq::one())]),
        (4, 10, vec![((3, 1, 0), Gq::one())]),
        (4, 10, vec![((2, 2, 0), Gq::one())]),
        (5, 10, vec![((4, 1, 0), Gq::one()), ((3, 2, 0), Gq::new(rat(1, 2), rat(1, 1)))]),
    ] {
        let w = Weighting::new(k).unwrap();
        for s in 1..=3i64 {
            let c = Gq::new(rat(s, 3), rat(-1, s + 1));
            let f = HoloSeries2::from_terms(w, order, [((2, 0), c.clone()), ((1, 1), c.conj())]);
            let g = HoloSeries2::from_terms(w, order, [((k, 1), c.clone()), ((0, 2), Gq::from(s))]);
            let map = FormalMap::new(f, g).unwrap();
            let mut terms = model.clone();
            terms.push(((k + 1, 1, 0), c));
            out.push((transform(&germ(w, order, &terms), &map).unwrap(), order));
        }
    }
    out
}

fn bench(c: &mut Criterion) {
    let items = batch();
    let mut group = c.benchmark_group("normalize_batch");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| par::map(&items, |(g, n)| normalize(g, *n).unwrap().order))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| par::map_seq(&items, |(g, n)| normalize(g, *n).unwrap().order))
    });
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
