use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use forkplex::catalog::{build_catalog, CatalogKey};
use forkplex::gen;
use forkplex::io::{format_complex, parse_complex, render_dot};
use forkplex::search::{thin_search, AssertionSet, SearchBudget};
use forkplex::{apply_move, check_exact, Genus, Move};

fn canonical_form(c: &mut Criterion) {
    let fixtures: Vec<_> = forkplex::catalog::fixture_entries()
        .into_iter()
        .map(|(_, key)| build_catalog(key).unwrap())
        .collect();
    c.bench_function("canonical_form/catalog", |b| {
        b.iter(|| {
            for gs in &fixtures {
                std::hint::black_box(gs.complex().canonical_form());
            }
        })
    });
    let random: Vec<_> = (0..32).map(|seed| gen::random_complex(seed, 10)).collect();
    c.bench_function("canonical_form/random10", |b| {
        b.iter(|| {
            for complex in &random {
                std::hint::black_box(complex.canonical_form());
            }
        })
    });
}

fn exactness(c: &mut Criterion) {
    let random: Vec<_> = (0..64)
        .map(|seed| gen::random_complex_loopy(seed, 12))
        .collect();
    c.bench_function("check_exact/random12", |b| {
        b.iter(|| {
            for complex in &random {
                let _ = std::hint::black_box(check_exact(complex));
            }
        })
    });
}

fn moves(c: &mut Criterion) {
    let bundle = build_catalog(CatalogKey::CircleBundleTrivial(Genus(3))).unwrap();
    let mv = forkplex::io::parse_move("weakreduce grip=S case=NU a=3 b=3").unwrap();
    c.bench_function("weak_reduce/genus7", |b| {
        b.iter(|| std::hint::black_box(apply_move(&bundle, &mv).unwrap()))
    });
    let t3 = build_catalog(CatalogKey::T3Untelescoped).unwrap();
    let stab = Move::Stabilize { grip: "S1".to_string() };
    c.bench_function("stabilize/t3", |b| {
        b.iter(|| std::hint::black_box(apply_move(&t3, &stab).unwrap()))
    });
}

fn search(c: &mut Criterion) {
    let bundle = build_catalog(CatalogKey::CircleBundleTrivial(Genus(2))).unwrap();
    let mut assertions = AssertionSet::new();
    assertions.grant("S", "weakly-reducible NU 2 2");
    assertions.grant("S", "weakly-reducible NN");
    let budget = SearchBudget::default();
    c.bench_function("thin_search/bundle_g2", |b| {
        b.iter_batched(
            || bundle.clone(),
            |gs| std::hint::black_box(thin_search(&gs, &budget, &assertions)),
            BatchSize::SmallInput,
        )
    });
}

fn io(c: &mut Criterion) {
    let gs = build_catalog(CatalogKey::F2S1UntelescopedB).unwrap();
    let text = format_complex(&gs);
    c.bench_function("parse/f2s1_b", |b| {
        b.iter(|| std::hint::black_box(parse_complex(&text).unwrap()))
    });
    c.bench_function("render_dot/f2s1_b", |b| {
        b.iter(|| std::hint::black_box(render_dot(gs.complex()).unwrap()))
    });
}

criterion_group!(benches, canonical_form, exactness, moves, search, io);
criterion_main!(benches);
