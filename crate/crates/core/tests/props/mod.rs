//! Shared bodies of the randomized and exhaustive property suites.  The
//! `properties` target runs them one per test; the `acceptance` target runs
//! them together as one gating criterion.  Every randomized suite draws its
//! cases from a fixed seed, so a failure replays exactly.

use operad_forge_core::catalog::{self, PresetId, RhsMap};
use operad_forge_core::element::Element;
use operad_forge_core::expand::ShufflePresentation;
use operad_forge_core::expr::Presentation;
use operad_forge_core::monomial::{
    apply_permutation, compose, enumerate_monomials, straighten, Node, ShuffleTreeMonomial,
};
use operad_forge_core::occurrence::{
    divides, find_occurrences, first_occurrence_path, occurs_at, replace_occurrence,
    replace_occurrence_by_monomial,
};
use operad_forge_core::order::{CompiledOrder, OrderSpec};
use operad_forge_core::rewrite::{RewriteSystem, DEFAULT_STEP_LIMIT};
use operad_forge_core::scalar;
use operad_forge_core::sig::{ShuffleSignature, Signature, Symmetry};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn make_sig(specs: Vec<(&str, usize, Symmetry)>) -> ShuffleSignature {
    ShuffleSignature::from_signature(&Signature::new(specs).unwrap()).unwrap()
}

/// Binary signatures of all three symmetry kinds, plus a mixed one.
fn signature_pool() -> Vec<ShuffleSignature> {
    vec![
        make_sig(vec![("o", 2, Symmetry::Symmetric)]),
        make_sig(vec![("b", 2, Symmetry::Antisymmetric)]),
        make_sig(vec![("m", 2, Symmetry::NoSymmetry)]),
        make_sig(vec![
            ("o", 2, Symmetry::Symmetric),
            ("b", 2, Symmetry::Antisymmetric),
        ]),
    ]
}

/// The pool signatures with their monomial bases enumerated once per arity.
struct Pool {
    sigs: Vec<ShuffleSignature>,
    monomials: Vec<Vec<Vec<ShuffleTreeMonomial>>>,
}

impl Pool {
    fn new(max_arity: usize) -> Self {
        let sigs = signature_pool();
        let monomials = sigs
            .iter()
            .map(|sig| {
                let mut per = vec![Vec::new()];
                for n in 1..=max_arity {
                    per.push(enumerate_monomials(sig, n).unwrap());
                }
                per
            })
            .collect();
        Pool { sigs, monomials }
    }
}

/// A shuffle-composition block for grafting an `inner`-ary monomial onto
/// leaf `j` of a context, with `total` labels in the composite.
fn random_block(rng: &mut ChaCha8Rng, j: usize, inner: usize, total: usize) -> Vec<u32> {
    let mut tail: Vec<u32> = ((j + 1)..=total).map(|x| x as u32).collect();
    tail.shuffle(rng);
    let mut block: Vec<u32> = tail.into_iter().take(inner - 1).collect();
    block.push(j as u32);
    block.sort_unstable();
    block
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(rng);
    perm
}

fn random_element(
    rng: &mut ChaCha8Rng,
    basis: &[ShuffleTreeMonomial],
    arity: usize,
    max_terms: usize,
) -> Element {
    let count = rng.gen_range(1..=max_terms.min(basis.len()));
    let mut picks: Vec<usize> = (0..basis.len()).collect();
    picks.shuffle(rng);
    Element::from_terms(
        arity,
        picks[..count].iter().map(|&i| {
            let mut c = scalar::ratio(rng.gen_range(1..=3), rng.gen_range(1..=2));
            if rng.gen_bool(0.5) {
                c = -c;
            }
            (c, basis[i].clone())
        }),
    )
    .unwrap()
}

pub fn completed_presentation(p: &Presentation, truncation: usize) -> RewriteSystem {
    let sp = ShufflePresentation::from_presentation(p).unwrap();
    let mut sys =
        RewriteSystem::from_presentation(&sp, OrderSpec::path_lex(), truncation, DEFAULT_STEP_LIMIT)
            .unwrap();
    sys.complete().unwrap();
    sys
}

/// A PathLex order with random precedence, or a WeightedPathLex with random
/// weights and direction: the two admissible families.
fn random_admissible_order(rng: &mut ChaCha8Rng, sig: &ShuffleSignature) -> OrderSpec {
    let names: Vec<String> =
        sig.origin().symbols().iter().map(|s| s.name.clone()).collect();
    if rng.gen_bool(0.5) {
        let precedence = if names.len() > 1 && rng.gen_bool(0.5) {
            let mut p = names;
            p.shuffle(rng);
            Some(p)
        } else {
            None
        };
        OrderSpec::PathLex { precedence }
    } else {
        let weights = names
            .into_iter()
            .map(|n| (n, rng.gen_range(0..=3u64)))
            .collect();
        OrderSpec::WeightedPathLex {
            weights,
            heavier_first: rng.gen_bool(0.5),
            precedence: None,
        }
    }
}

/// PathLex and WeightedPathLex comparisons survive grafting on either side.
pub fn order_admissibility(cases: usize) {
    let pool = Pool::new(5);
    let mut rng = rng(1);
    assert!(OrderSpec::path_lex().is_admissible());
    assert!(!OrderSpec::xy_augmented(&["o"], &["b"], OrderSpec::path_lex()).is_admissible());

    for case in 0..cases {
        let si = rng.gen_range(0..pool.sigs.len());
        let sig = &pool.sigs[si];
        let spec = random_admissible_order(&mut rng, sig);
        assert!(spec.is_admissible());
        let ord = CompiledOrder::new(&spec, sig).unwrap();

        // a strictly ordered same-arity pair
        let n = rng.gen_range(2..=3);
        let basis = &pool.monomials[si][n];
        let a = basis.choose(&mut rng).unwrap();
        let b = basis.choose(&mut rng).unwrap();
        if a == b {
            assert_eq!(ord.cmp(a, b), Ordering::Equal);
            continue;
        }
        let (u, v) = match ord.cmp(a, b) {
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
            Ordering::Equal => panic!("case {case}: distinct monomials compare equal"),
        };
        // the sortable key realises the same comparison
        assert_eq!(ord.key(u).cmp(&ord.key(v)), Ordering::Greater);

        // grafting both into the same slot of a context preserves strictness
        let m = rng.gen_range(2..=3);
        let t = pool.monomials[si][m].choose(&mut rng).unwrap();
        let j = rng.gen_range(1..=m);
        let block = random_block(&mut rng, j, n, m + n - 1);
        let cu = compose(t, j, u, &block, sig).unwrap();
        let cv = compose(t, j, v, &block, sig).unwrap();
        assert_eq!(
            ord.cmp(&cu, &cv),
            Ordering::Greater,
            "case {case}: applying a context broke {} > {}",
            u.to_text(sig),
            v.to_text(sig),
        );

        // grafting the same monomial into both preserves strictness
        let j = rng.gen_range(1..=n);
        let block = random_block(&mut rng, j, m, n + m - 1);
        let cu = compose(u, j, t, &block, sig).unwrap();
        let cv = compose(v, j, t, &block, sig).unwrap();
        assert_eq!(
            ord.cmp(&cu, &cv),
            Ordering::Greater,
            "case {case}: substituting into {} > {} broke the order",
            u.to_text(sig),
            v.to_text(sig),
        );
    }
}

/// A random planar tree over the signature with the given leaf labels in
/// the given left-to-right order — generally not a shuffle monomial.
fn random_planar_tree(rng: &mut ChaCha8Rng, sig: &ShuffleSignature, labels: &[u32]) -> Node {
    if labels.len() == 1 {
        return Node::Leaf(labels[0]);
    }
    let fitting: Vec<_> = sig.gens().iter().filter(|g| g.arity <= labels.len()).collect();
    let g = fitting.choose(rng).unwrap();
    let mut cuts: Vec<usize> = (1..labels.len()).collect();
    cuts.shuffle(rng);
    cuts.truncate(g.arity - 1);
    cuts.sort_unstable();
    cuts.push(labels.len());
    let mut children = Vec::new();
    let mut start = 0;
    for &end in &cuts {
        children.push(random_planar_tree(rng, sig, &labels[start..end]));
        start = end;
    }
    Node::Vertex(g.id, children)
}

/// Straightening lands on a canonical monomial and fixes it afterwards.
pub fn straighten_idempotence(cases: usize) {
    let sigs = signature_pool();
    let mut rng = rng(2);
    for _ in 0..cases {
        let sig = sigs.choose(&mut rng).unwrap();
        let n = rng.gen_range(2..=6);
        let mut labels: Vec<u32> = (1..=30).collect();
        labels.shuffle(&mut rng);
        labels.truncate(n);
        let tree = random_planar_tree(&mut rng, sig, &labels);

        let (sign, canon) = straighten(&tree, sig).unwrap();
        assert!(sign == 1 || sign == -1);
        assert_eq!(canon.arity(), n);
        // straightening a canonical monomial changes nothing
        let (again_sign, again) = straighten(canon.node(), sig).unwrap();
        assert_eq!(again_sign, 1);
        assert_eq!(again, canon);
        // and the canonical form survives the text round trip
        assert_eq!(
            ShuffleTreeMonomial::parse_text(&canon.to_text(sig), sig).unwrap(),
            canon
        );
    }
}

/// The symmetric-group action is functorial and its signs multiply.
pub fn permutation_signs(cases: usize) {
    let pool = Pool::new(5);
    let mut rng = rng(3);
    for _ in 0..cases {
        let si = rng.gen_range(0..pool.sigs.len());
        let sig = &pool.sigs[si];
        let n = rng.gen_range(2..=5);
        let m = pool.monomials[si][n].choose(&mut rng).unwrap();
        let sigma = random_perm(&mut rng, n);
        let tau = random_perm(&mut rng, n);

        // the identity acts trivially
        let id: Vec<u32> = (1..=n as u32).collect();
        assert_eq!(apply_permutation(m, &id, sig).unwrap(), (1, m.clone()));

        // acting by sigma and then tau is acting by the composite
        let (s1, m1) = apply_permutation(m, &sigma, sig).unwrap();
        let (s2, m12) = apply_permutation(&m1, &tau, sig).unwrap();
        let composite: Vec<u32> = sigma.iter().map(|&s| tau[s as usize - 1]).collect();
        let (s3, m3) = apply_permutation(m, &composite, sig).unwrap();
        assert_eq!(m12, m3);
        assert_eq!(s1 * s2, s3, "signs must be multiplicative");

        // the inverse permutation undoes the action, signs cancelling
        let mut inv = vec![0u32; n];
        for (i, &s) in sigma.iter().enumerate() {
            inv[s as usize - 1] = i as u32 + 1;
        }
        let (s4, back) = apply_permutation(&m1, &inv, sig).unwrap();
        assert_eq!(&back, m);
        assert_eq!(s1 * s4, 1);

        // the linear extension inherits invertibility
        let e = random_element(&mut rng, &pool.monomials[si][n], n, 3);
        let round = e.permuted(&sigma, sig).unwrap().permuted(&inv, sig).unwrap();
        assert_eq!(round, e);
    }
}

/// Reduces by repeatedly rewriting a uniformly chosen occurrence of a
/// uniformly chosen applicable rule in a uniformly chosen reducible term —
/// the opposite of [`RewriteSystem::reduce`]'s fixed leading-term strategy.
fn random_strategy_reduce(
    sys: &RewriteSystem,
    e: &Element,
    rng: &mut ChaCha8Rng,
) -> Element {
    let mut cur = e.clone();
    for _ in 0..200_000 {
        let terms: Vec<ShuffleTreeMonomial> = cur.terms().map(|(m, _)| m.clone()).collect();
        let mut order: Vec<usize> = (0..terms.len()).collect();
        order.shuffle(rng);
        let mut acted = false;
        for &ti in &order {
            let m = &terms[ti];
            let mut options = Vec::new();
            for (ri, rule) in sys.rules().iter().enumerate() {
                if rule.lhs.arity() > m.arity() {
                    continue;
                }
                for occ in find_occurrences(m, &rule.lhs).unwrap() {
                    options.push((ri, occ.path));
                }
            }
            let Some((ri, path)) = options.choose(rng).cloned() else {
                continue;
            };
            let rule = &sys.rules()[ri];
            let c = cur.coefficient(m);
            cur.add_term(-c.clone(), m.clone());
            for (rm, rc) in rule.rhs.terms() {
                cur.add_term(
                    &c * rc,
                    replace_occurrence_by_monomial(m, &path, &rule.lhs, rm).unwrap(),
                );
            }
            acted = true;
            break;
        }
        if !acted {
            return cur;
        }
    }
    panic!("random-strategy reduction exceeded its step budget");
}

/// Reduction is a projection, is linear, and is strategy-independent on
/// completed systems.
pub fn reduction_laws(cases: usize) {
    let systems: Vec<RewriteSystem> = [PresetId::Com, PresetId::Lie, PresetId::PreLie, PresetId::Fm]
        .into_iter()
        .map(|id| completed_presentation(&catalog::preset(id), 4))
        .collect();
    let mut bases = Vec::new();
    for sys in &systems {
        let mut per = vec![Vec::new()];
        for n in 1..=4 {
            per.push(enumerate_monomials(sys.signature(), n).unwrap());
        }
        bases.push(per);
    }

    let mut rng = rng(4);
    for case in 0..cases {
        let which = rng.gen_range(0..systems.len());
        let sys = &systems[which];
        let n = rng.gen_range(1..=4);
        let e1 = random_element(&mut rng, &bases[which][n], n, 3);
        let e2 = random_element(&mut rng, &bases[which][n], n, 3);
        let r1 = sys.reduce(&e1).unwrap();
        let r2 = sys.reduce(&e2).unwrap();

        // a normal form is already normal
        assert_eq!(sys.reduce(&r1).unwrap(), r1);

        // reduction is additive and homogeneous
        assert_eq!(
            sys.reduce(&e1.add(&e2).unwrap()).unwrap(),
            r1.add(&r2).unwrap()
        );
        let mut c = scalar::ratio(rng.gen_range(1..=5), rng.gen_range(1..=5));
        if rng.gen_bool(0.5) {
            c = -c;
        }
        assert_eq!(sys.reduce(&e1.scale(&c)).unwrap(), r1.scale(&c));

        // every rewriting strategy lands on the same normal form; keep the
        // expensive arity-4 cases to a sample
        let k = if case % 10 == 0 { 4 } else { rng.gen_range(2..=3) };
        let e3 = random_element(&mut rng, &bases[which][k], k, 2);
        let expected = sys.reduce(&e3).unwrap();
        assert_eq!(
            random_strategy_reduce(sys, &e3, &mut rng),
            expected,
            "case {case}: strategies disagree on {}",
            e3.to_text(sys.signature()),
        );
    }
}

/// Composed patterns are found again, and replacement is reversible.
pub fn occurrence_round_trips(cases: usize) {
    let pool = Pool::new(5);
    let mut rng = rng(5);
    for _ in 0..cases {
        let si = rng.gen_range(0..pool.sigs.len());
        let sig = &pool.sigs[si];
        let k = rng.gen_range(2..=3);
        let ctx = rng.gen_range(2..=3);
        let pattern = pool.monomials[si][k].choose(&mut rng).unwrap();
        let t = pool.monomials[si][ctx].choose(&mut rng).unwrap();
        let j = rng.gen_range(1..=ctx);
        let block = random_block(&mut rng, j, k, ctx + k - 1);
        let host = compose(t, j, pattern, &block, sig).unwrap();

        // a pattern composed into a host is always found again
        let occs = find_occurrences(&host, pattern).unwrap();
        assert!(
            !occs.is_empty(),
            "{} lost inside {}",
            pattern.to_text(sig),
            host.to_text(sig)
        );
        assert!(divides(pattern, &host));
        assert_eq!(first_occurrence_path(&host, pattern), Some(occs[0].path.clone()));
        // the occurrence list and the point query agree everywhere
        for path in host.vertex_paths() {
            assert_eq!(
                occurs_at(&host, pattern, &path),
                occs.iter().any(|o| o.path == path)
            );
        }

        for occ in &occs {
            // substituting the pattern for itself is the identity
            let same =
                replace_occurrence(&host, occ, &Element::from_monomial(pattern.clone())).unwrap();
            assert_eq!(same, Element::from_monomial(host.clone()));

            // swapping in another monomial and back restores the host
            let r = pool.monomials[si][k].choose(&mut rng).unwrap();
            let swapped = replace_occurrence_by_monomial(&host, &occ.path, pattern, r).unwrap();
            assert!(occurs_at(&swapped, r, &occ.path));
            let back = replace_occurrence_by_monomial(&swapped, &occ.path, r, pattern).unwrap();
            assert_eq!(back, host);
        }
    }
}

/// Monomial counts follow the double-factorial pattern, exhaustively.
pub fn enumeration_counts() {
    // (2n-3)!! — the number of leaf-labeled binary tree shapes
    fn double_factorial(n: usize) -> u64 {
        (3..=n).map(|i| (2 * i - 3) as u64).product()
    }
    let sym = make_sig(vec![("o", 2, Symmetry::Symmetric)]);
    let anti = make_sig(vec![("b", 2, Symmetry::Antisymmetric)]);
    let magma = make_sig(vec![("m", 2, Symmetry::NoSymmetry)]);
    let two = make_sig(vec![
        ("o", 2, Symmetry::Symmetric),
        ("b", 2, Symmetry::Antisymmetric),
    ]);

    for n in 1..=6 {
        let shapes = double_factorial(n);
        // a signed generator leaves one monomial per shape; a shuffle pair
        // (or a second generator) doubles every vertex label independently
        let doubled = shapes * (1u64 << (n - 1));
        assert_eq!(enumerate_monomials(&sym, n).unwrap().len() as u64, shapes);
        assert_eq!(enumerate_monomials(&anti, n).unwrap().len() as u64, shapes);
        assert_eq!(enumerate_monomials(&magma, n).unwrap().len() as u64, doubled);
        assert_eq!(enumerate_monomials(&two, n).unwrap().len() as u64, doubled);
    }

    // the enumerated lists are duplicate-free and canonical
    for sig in [&sym, &anti, &magma, &two] {
        for n in 1..=5 {
            let ms = enumerate_monomials(sig, n).unwrap();
            let set: std::collections::BTreeSet<_> = ms.iter().cloned().collect();
            assert_eq!(set.len(), ms.len());
            for m in &ms {
                assert_eq!(
                    ShuffleTreeMonomial::parse_text(&m.to_text(sig), sig).unwrap(),
                    *m
                );
            }
        }
    }
}

/// Deforming the zeroed mixed monomials of an almost composite product can
/// only shrink arity-wise dimensions, never grow them.
pub fn dimension_monotonicity(cases: usize) {
    let com = catalog::preset(PresetId::Com);
    let lie = catalog::preset(PresetId::Lie);
    let baseline = completed_presentation(&catalog::almost_composite(&com, &lie).unwrap(), 4)
        .dims(4)
        .unwrap();
    assert_eq!(baseline, vec![1, 2, 9, 64]);

    // product-rooted arity-4 expressions usable as images of [a1∘a2, a3∘a4]
    let images = [
        "((a1 o a2) o a3) o a4",
        "(a1 o a2) o (a3 o a4)",
        "(a1 o a3) o (a2 o a4)",
        "a1 o (a2 o (a3 o a4))",
        "[a1, a2] o (a3 o a4)",
        "([a1, a2] o a3) o a4",
        "([a1, a3] o a2) o a4",
        "[[a1, a2], a3] o a4",
        "[a1, [a2, a3]] o a4",
        "(a1 o a2) o [a3, a4]",
        "[a1, a2] o [a3, a4]",
        "[a1, a4] o (a2 o a3)",
    ];
    let mut rng = rng(7);
    for case in 0..cases {
        let count = rng.gen_range(1..=3);
        let mut picks: Vec<usize> = (0..images.len()).collect();
        picks.shuffle(&mut rng);
        let mut text = String::new();
        for (i, &pi) in picks[..count].iter().enumerate() {
            let coeff = *[-2i64, -1, 1, 2].choose(&mut rng).unwrap();
            if i == 0 {
                if coeff < 0 {
                    text.push('-');
                }
            } else {
                text.push_str(if coeff < 0 { " - " } else { " + " });
            }
            if coeff.abs() != 1 {
                text.push_str(&format!("{}*", coeff.abs()));
            }
            text.push_str(images[pi]);
        }

        let mut f = RhsMap::zero();
        f.set("b", &["o", "o"], &text);
        let deformed = catalog::with_rewriting_rhs(&com, &lie, &f).unwrap();
        let dims = completed_presentation(&deformed, 4).dims(4).unwrap();
        for (i, (&got, &bound)) in dims.iter().zip(baseline.iter()).enumerate() {
            assert!(
                got <= bound,
                "case {case} (image {text}): arity {} dimension {got} exceeds the \
                 almost-composite bound {bound}",
                i + 1
            );
        }
    }
}
