//! Monomial orders on shuffle tree monomials.
//!
//! Three orders are provided.
//!
//! * **PathLex** — the frozen baseline convention.  Monomials are compared
//!   by arity first.  Within an arity, each leaf label `i` is assigned its
//!   *path word*: the sequence of letters `(generator rank, child slot)`
//!   read from the root down to that leaf, where the rank comes from a
//!   generator precedence list (declaration order unless overridden, with a
//!   no-symmetry generator always ranked immediately before its partner).
//!   Words are compared degree-lexicographically — longer words are larger,
//!   ties are broken letterwise by `(rank, slot)` — and monomials compare by
//!   the sequence of words for labels `1, 2, …, n`.  Distinct monomials
//!   always differ in some word, so the order is total.  It is admissible:
//!   shuffle composition extends each affected word by a fixed prefix or
//!   suffix and relabels monotonically, which preserves the first difference.
//! * **WeightedPathLex** — compares a total additive vertex weight first
//!   (with a configurable direction), then falls back to PathLex.
//!   Additivity keeps the order admissible.
//! * **XYAugmented** — compares the pair count `n(T)` first, with *larger*
//!   `n(T)` meaning *smaller* monomial, then falls back to an admissible
//!   order.  This order is total and well-founded on each arity component
//!   but is **not** admissible; rewriting with it must therefore be
//!   step-limited.

use crate::error::{Error, Result};
use crate::monomial::{Node, ShuffleTreeMonomial};
use crate::sig::{ShuffleGenId, ShuffleSignature};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// A serializable order description.  Generators are referred to by the
/// names of their originating symbols; a no-symmetry symbol covers both of
/// its shuffle generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OrderSpec {
    PathLex {
        /// Origin-symbol names, smallest rank first.  `None` means
        /// declaration order.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precedence: Option<Vec<String>>,
    },
    WeightedPathLex {
        /// Weight of each origin symbol.  Every symbol must be present.
        weights: BTreeMap<String, u64>,
        /// When true, heavier monomials are larger (i.e. lead).
        heavier_first: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precedence: Option<Vec<String>>,
    },
    #[serde(rename = "xy_augmented")]
    XyAugmented {
        /// Origin-symbol names of the X class.
        x: BTreeSet<String>,
        /// Origin-symbol names of the Y class.
        y: BTreeSet<String>,
        /// Tie-break order; must itself be admissible (not XYAugmented).
        fallback: Box<OrderSpec>,
    },
}

impl OrderSpec {
    pub fn path_lex() -> Self {
        OrderSpec::PathLex { precedence: None }
    }

    /// WeightedPathLex with the signature's filtration weights.
    pub fn weighted_from_signature(sig: &ShuffleSignature, heavier_first: bool) -> Self {
        let weights = sig
            .origin()
            .symbols()
            .iter()
            .map(|s| (s.name.clone(), s.filtration_weight))
            .collect();
        OrderSpec::WeightedPathLex { weights, heavier_first, precedence: None }
    }

    pub fn xy_augmented(x: &[&str], y: &[&str], fallback: OrderSpec) -> Self {
        OrderSpec::XyAugmented {
            x: x.iter().map(|s| s.to_string()).collect(),
            y: y.iter().map(|s| s.to_string()).collect(),
            fallback: Box::new(fallback),
        }
    }

    /// True for the admissible variants (compatible with composition).
    pub fn is_admissible(&self) -> bool {
        !matches!(self, OrderSpec::XyAugmented { .. })
    }
}

/// An order resolved against a signature, ready for fast comparisons.
#[derive(Debug, Clone)]
pub struct CompiledOrder {
    spec: OrderSpec,
    kind: CompiledKind,
    /// rank per shuffle generator id; distinct values
    rank: Vec<usize>,
}

#[derive(Debug, Clone)]
enum CompiledKind {
    PathLex,
    Weighted { gen_weight: Vec<u64>, heavier_first: bool },
    Xy { in_x: Vec<bool>, in_y: Vec<bool>, fallback: Box<CompiledOrder> },
}

impl CompiledOrder {
    pub fn new(spec: &OrderSpec, sig: &ShuffleSignature) -> Result<Self> {
        let rank = compile_precedence(spec_precedence(spec), sig)?;
        let kind = match spec {
            OrderSpec::PathLex { .. } => CompiledKind::PathLex,
            OrderSpec::WeightedPathLex { weights, heavier_first, .. } => {
                let mut gen_weight = Vec::with_capacity(sig.len());
                for g in sig.gens() {
                    let origin = &sig.origin_symbol(g.id).name;
                    let w = weights
                        .get(origin)
                        .ok_or_else(|| Error::MissingWeight(origin.clone()))?;
                    gen_weight.push(*w);
                }
                for name in weights.keys() {
                    sig.origin().by_name(name)?;
                }
                CompiledKind::Weighted { gen_weight, heavier_first: *heavier_first }
            }
            OrderSpec::XyAugmented { x, y, fallback } => {
                if !fallback.is_admissible() {
                    return Err(Error::Invalid(
                        "the fallback of an XY-augmented order must be admissible".into(),
                    ));
                }
                let (in_x, in_y) = classify(sig, x, y)?;
                let fallback = Box::new(CompiledOrder::new(fallback, sig)?);
                CompiledKind::Xy { in_x, in_y, fallback }
            }
        };
        Ok(CompiledOrder { spec: spec.clone(), kind, rank })
    }

    pub fn spec(&self) -> &OrderSpec {
        &self.spec
    }

    pub fn is_admissible(&self) -> bool {
        self.spec.is_admissible()
    }

    /// Total comparison; monomials of smaller arity come first.
    pub fn cmp(&self, a: &ShuffleTreeMonomial, b: &ShuffleTreeMonomial) -> Ordering {
        a.arity()
            .cmp(&b.arity())
            .then_with(|| self.key(a).cmp(&self.key(b)))
    }

    /// A sortable key: among monomials of one arity, key order coincides
    /// with the monomial order, and distinct monomials get distinct keys.
    pub fn key(&self, m: &ShuffleTreeMonomial) -> OrderKey {
        match &self.kind {
            CompiledKind::PathLex => {
                OrderKey { pre: Vec::new(), words: degree_words(m, &self.rank) }
            }
            CompiledKind::Weighted { gen_weight, heavier_first } => {
                let w = total_weight(m.node(), gen_weight) as i64;
                OrderKey {
                    pre: vec![if *heavier_first { w } else { -w }],
                    words: degree_words(m, &self.rank),
                }
            }
            CompiledKind::Xy { in_x, in_y, fallback } => {
                let n = count_pairs(m.node(), in_x, in_y).0 as i64;
                let mut key = fallback.key(m);
                key.pre.insert(0, -n); // larger n(T) means smaller monomial
                key
            }
        }
    }
}

/// Comparison key produced by [`CompiledOrder::key`].  `pre` holds the
/// coarse comparands (weights, pair counts) oriented so that larger means
/// larger; `words` holds the per-label path words in degree-lexicographic
/// form (length before letters).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pre: Vec<i64>,
    words: Vec<(usize, Vec<(usize, usize)>)>,
}

fn spec_precedence(spec: &OrderSpec) -> Option<&Vec<String>> {
    match spec {
        OrderSpec::PathLex { precedence } => precedence.as_ref(),
        OrderSpec::WeightedPathLex { precedence, .. } => precedence.as_ref(),
        OrderSpec::XyAugmented { fallback, .. } => spec_precedence(fallback),
    }
}

/// Ranks shuffle generators: by origin position in the precedence list
/// (declaration order by default), partners kept adjacent in expansion
/// order.  The resulting ranks are distinct.
fn compile_precedence(precedence: Option<&Vec<String>>, sig: &ShuffleSignature) -> Result<Vec<usize>> {
    let origin_pos: Vec<usize> = match precedence {
        None => (0..sig.origin().len()).collect(),
        Some(names) => {
            if names.len() != sig.origin().len() {
                return Err(Error::Invalid(format!(
                    "precedence must list all {} generators",
                    sig.origin().len()
                )));
            }
            let mut pos = vec![usize::MAX; sig.origin().len()];
            for (p, name) in names.iter().enumerate() {
                let sym = sig.origin().by_name(name)?;
                if pos[sym.id] != usize::MAX {
                    return Err(Error::DuplicateGenerator(name.clone()));
                }
                pos[sym.id] = p;
            }
            pos
        }
    };
    let mut order: Vec<ShuffleGenId> = (0..sig.len()).collect();
    order.sort_by_key(|&g| (origin_pos[sig.gens()[g].origin], g));
    let mut rank = vec![0usize; sig.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r;
    }
    Ok(rank)
}

fn degree_words(m: &ShuffleTreeMonomial, rank: &[usize]) -> Vec<(usize, Vec<(usize, usize)>)> {
    path_words(m, rank).into_iter().map(|w| (w.len(), w)).collect()
}

/// Path word per leaf label: `words[i-1]` is the `(rank, slot)` sequence
/// from the root to leaf `i`.
fn path_words(m: &ShuffleTreeMonomial, rank: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut words = vec![Vec::new(); m.arity()];
    fn go(node: &Node, prefix: &mut Vec<(usize, usize)>, rank: &[usize], words: &mut [Vec<(usize, usize)>]) {
        match node {
            Node::Leaf(l) => words[*l as usize - 1] = prefix.clone(),
            Node::Vertex(g, children) => {
                for (slot, c) in children.iter().enumerate() {
                    prefix.push((rank[*g], slot));
                    go(c, prefix, rank, words);
                    prefix.pop();
                }
            }
        }
    }
    go(m.node(), &mut Vec::new(), rank, &mut words);
    words
}

fn total_weight(node: &Node, gen_weight: &[u64]) -> u64 {
    match node {
        Node::Leaf(_) => 0,
        Node::Vertex(g, children) => {
            gen_weight[*g] + children.iter().map(|c| total_weight(c, gen_weight)).sum::<u64>()
        }
    }
}

/// Returns `(pairs, y_count)`: the number of vertex pairs `(v, v')` with
/// `v` a strict ancestor of `v'`, `v` in X and `v'` in Y, together with the
/// number of Y vertices in the subtree.
fn count_pairs(node: &Node, in_x: &[bool], in_y: &[bool]) -> (u64, u64) {
    match node {
        Node::Leaf(_) => (0, 0),
        Node::Vertex(g, children) => {
            let mut pairs = 0u64;
            let mut y_below = 0u64;
            for c in children {
                let (p, y) = count_pairs(c, in_x, in_y);
                pairs += p;
                y_below += y;
            }
            if in_x[*g] {
                pairs += y_below;
            }
            (pairs, y_below + u64::from(in_y[*g]))
        }
    }
}

/// Resolves origin-symbol name sets into per-shuffle-generator membership,
/// checking disjointness and that every generator is classified.
pub fn classify(
    sig: &ShuffleSignature,
    x: &BTreeSet<String>,
    y: &BTreeSet<String>,
) -> Result<(Vec<bool>, Vec<bool>)> {
    for name in x.iter().chain(y.iter()) {
        sig.origin().by_name(name)?;
    }
    if let Some(shared) = x.intersection(y).next() {
        return Err(Error::Invalid(format!("generator `{shared}` is in both X and Y")));
    }
    let mut in_x = vec![false; sig.len()];
    let mut in_y = vec![false; sig.len()];
    for g in sig.gens() {
        let origin = &sig.origin_symbol(g.id).name;
        if x.contains(origin) {
            in_x[g.id] = true;
        } else if y.contains(origin) {
            in_y[g.id] = true;
        } else {
            return Err(Error::UnclassifiedGenerator(origin.clone()));
        }
    }
    Ok((in_x, in_y))
}

/// The pair count n(T): vertices `v` strictly above `v'` with the label of
/// `v` originating in X and that of `v'` in Y.
pub fn n_t(
    m: &ShuffleTreeMonomial,
    x: &BTreeSet<String>,
    y: &BTreeSet<String>,
    sig: &ShuffleSignature,
) -> Result<u64> {
    let (in_x, in_y) = classify(sig, x, y)?;
    Ok(count_pairs(m.node(), &in_x, &in_y).0)
}

/// One-off comparison through a fresh compilation; rewriting-system code
/// should compile once and reuse.
pub fn compare(
    a: &ShuffleTreeMonomial,
    b: &ShuffleTreeMonomial,
    spec: &OrderSpec,
    sig: &ShuffleSignature,
) -> Result<Ordering> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch { expected: a.arity(), got: b.arity() });
    }
    Ok(CompiledOrder::new(spec, sig)?.cmp(a, b))
}
