//! Benchmarks for the engine's hot paths: completing a presentation,
//! reducing a dense element, enumerating a monomial basis, and inverting a
//! power series.

use criterion::{criterion_group, criterion_main, Criterion};
use operad_forge_core::catalog::{self, PresetId};
use operad_forge_core::element::Element;
use operad_forge_core::expand::ShufflePresentation;
use operad_forge_core::monomial::enumerate_monomials;
use operad_forge_core::order::OrderSpec;
use operad_forge_core::rewrite::{RewriteSystem, DEFAULT_STEP_LIMIT};
use operad_forge_core::scalar;
use operad_forge_core::series;
use operad_forge_core::sig::{ShuffleSignature, Signature, Symmetry};

fn completed(id: PresetId, truncation: usize) -> RewriteSystem {
    let presentation = catalog::preset(id);
    let shuffle = ShufflePresentation::from_presentation(&presentation).unwrap();
    let mut system = RewriteSystem::from_presentation(
        &shuffle,
        OrderSpec::path_lex(),
        truncation,
        DEFAULT_STEP_LIMIT,
    )
    .unwrap();
    system.complete().unwrap();
    system
}

fn mixed_signature() -> ShuffleSignature {
    let sig = Signature::new(vec![
        ("o", 2, Symmetry::Symmetric),
        ("b", 2, Symmetry::Antisymmetric),
    ])
    .unwrap();
    ShuffleSignature::from_signature(&sig).unwrap()
}

fn bench_completion(c: &mut Criterion) {
    let mut group = c.benchmark_group("complete");
    group.sample_size(20);
    group.bench_function("prelie/arity4", |b| b.iter(|| completed(PresetId::PreLie, 4)));
    group.bench_function("fm/arity4", |b| b.iter(|| completed(PresetId::Fm, 4)));
    group.sample_size(10);
    group.bench_function("fm/arity5", |b| b.iter(|| completed(PresetId::Fm, 5)));
    group.finish();
}

fn bench_reduce(c: &mut Criterion) {
    let system = completed(PresetId::Fm, 4);
    let basis = enumerate_monomials(system.signature(), 4).unwrap();
    let mut dense = Element::from_monomial(basis[0].clone());
    for m in &basis[1..] {
        dense.add_term(scalar::int(1), m.clone());
    }
    c.bench_function("reduce/fm dense arity4", |b| {
        b.iter(|| system.reduce(&dense).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let sig = mixed_signature();
    c.bench_function("enumerate/two generators arity6", |b| {
        b.iter(|| enumerate_monomials(&sig, 6).unwrap())
    });
}

fn bench_series(c: &mut Criterion) {
    c.bench_function("series/invert t*exp(-t) order16", |b| {
        b.iter(|| series::t_exp_neg_t(16).comp_inverse().unwrap())
    });
}

criterion_group!(
    benches,
    bench_completion,
    bench_reduce,
    bench_enumeration,
    bench_series
);
criterion_main!(benches);
