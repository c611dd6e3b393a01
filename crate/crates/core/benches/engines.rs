//! Sequential vs rayon on the three data-parallel hot spots: per-degree
//! invariant solving, batched traces and the full verification suite.
//! Build with `--no-default-features` to see the fallback alone.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use leibniz3::catalog::{get_family, Family};
use leibniz3::exact::Rational;
use leibniz3::invariants::{invariant_space, InvariantOptions};
use leibniz3::par::Strategy;
use leibniz3::suite::Suite;
use leibniz3::trace::{enumerate_trace_words, trace_many, multidegrees_up_to};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariant_space");
    g.sample_size(10);
    for (fam, lambda) in [(Family::L1, None), (Family::L7, Some(Rational::new(2, 1)))] {
        let rec = get_family(fam, lambda).unwrap();
        let degrees = multidegrees_up_to(3, 2);
        for (name, s) in STRATEGIES {
            let opts = InvariantOptions { diag_pruning: true, strategy: s };
            g.bench_with_input(BenchmarkId::new(name, rec.label()), &degrees, |b, d| {
                b.iter(|| invariant_space(black_box(&rec), 2, d, opts).unwrap())
            });
        }
    }
    g.finish();
}

fn traces(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace_many");
    let rec = get_family(Family::L9, None).unwrap();
    let words = enumerate_trace_words(3, 3);
    for (name, s) in STRATEGIES {
        g.bench_function(BenchmarkId::new(name, words.len()), |b| {
            b.iter(|| trace_many(black_box(&rec.table), &words, s).unwrap())
        });
    }
    g.finish();
}

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| Suite::standard(s).run()));
    }
    g.finish();
}

criterion_group!(benches, invariants, traces, suite);
criterion_main!(benches);
