//! Exact linear algebra over the quotient: echelon spans of elements and
//! level-wise dimensions of suboperads generated by chosen elements.
//!
//! Every arity-`n` composite of a generating set can be written as a smaller
//! composite with one more generator grafted into a leaf, so the span of
//! arity `n` is generated by `compose(u, j, g, block)` with `u` running over
//! a basis of the lower levels and `g` over the generators.  Composition is
//! bilinear and reduction linear, so working with echelon bases per arity
//! loses nothing.

use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::{combinations, compose, ShuffleTreeMonomial};
use crate::order::{CompiledOrder, OrderKey};
use crate::rewrite::RewriteSystem;
use crate::sig::ShuffleSignature;
use std::collections::BTreeMap;

/// Bilinear extension of shuffle composition: grafts `v` into leaf `j` of
/// `u` with the given label block, term by term.
pub fn compose_elements(
    u: &Element,
    j: usize,
    v: &Element,
    block: &[u32],
    sig: &ShuffleSignature,
) -> Result<Element> {
    let n = u.arity() + v.arity() - 1;
    let mut out = Element::zero(n);
    for (mu, cu) in u.terms() {
        for (mv, cv) in v.terms() {
            out.add_term(cu * cv, compose(mu, j, mv, block, sig)?);
        }
    }
    Ok(out)
}

/// All admissible label blocks for grafting an `inner_arity`-ary element
/// into leaf `j` of an `outer_arity`-ary one: the block takes `j` plus any
/// `inner_arity - 1` larger labels.
pub fn composition_blocks(j: usize, outer_arity: usize, inner_arity: usize) -> Vec<Vec<u32>> {
    let n = outer_arity + inner_arity - 1;
    let pool: Vec<u32> = ((j + 1)..=n).map(|x| x as u32).collect();
    combinations(&pool, inner_arity - 1)
        .into_iter()
        .map(|tail| {
            let mut block = Vec::with_capacity(inner_arity);
            block.push(j as u32);
            block.extend(tail);
            block
        })
        .collect()
}

/// An exact row-echelon basis of elements of one arity: rows are monic with
/// pairwise distinct leading monomials under the given order.
pub struct Echelon<'a> {
    order: &'a CompiledOrder,
    arity: usize,
    rows: BTreeMap<OrderKey, Element>,
}

impl<'a> Echelon<'a> {
    pub fn new(order: &'a CompiledOrder, arity: usize) -> Self {
        Echelon {
            order,
            arity,
            rows: BTreeMap::new(),
        }
    }

    /// Reduces `e` against the rows; returns the residual (zero iff `e` lay
    /// in the span).
    pub fn residual(&self, e: &Element) -> Result<Element> {
        if e.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: e.arity(),
            });
        }
        let mut e = e.clone();
        loop {
            let Some((lead, coeff)) = e.leading(self.order) else {
                return Ok(e); // zero
            };
            let key = self.order.key(lead);
            let Some(row) = self.rows.get(&key) else {
                return Ok(e);
            };
            let coeff = coeff.clone();
            e.add_scaled(&-coeff, row)?;
        }
    }

    /// Inserts an element; returns `true` when it enlarged the span.
    pub fn insert(&mut self, e: Element) -> Result<bool> {
        let residual = self.residual(&e)?;
        match residual.make_monic(self.order) {
            None => Ok(false),
            Some(monic) => {
                let (lead, _) = monic.leading(self.order).expect("nonzero");
                let key = self.order.key(lead);
                self.rows.insert(key, monic);
                Ok(true)
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The echelon rows, largest leading monomial first.
    pub fn rows(&self) -> Vec<&Element> {
        self.rows.values().rev().collect()
    }

    pub fn contains(&self, e: &Element) -> Result<bool> {
        Ok(self.residual(e)?.is_zero())
    }
}

/// Rank of a family of same-arity elements.
pub fn rank(elements: &[Element], order: &CompiledOrder) -> Result<usize> {
    let Some(first) = elements.first() else {
        return Ok(0);
    };
    let mut ech = Echelon::new(order, first.arity());
    for e in elements {
        ech.insert(e.clone())?;
    }
    Ok(ech.rank())
}

/// Dimensions, per arity `1..=max_arity`, of the suboperad of the completed
/// quotient generated by the given elements.  Arity 1 is always 1 (the
/// identity).  Generators are reduced to normal form on entry; each level is
/// spanned by all one-generator graftings into a basis of the lower levels.
pub fn suboperad_dims(
    system: &RewriteSystem,
    generators: &[Element],
    max_arity: usize,
) -> Result<Vec<u64>> {
    if !system.is_completed() {
        return Err(Error::Invalid(
            "suboperad dimensions require a completed system".to_string(),
        ));
    }
    if max_arity > system.truncation_arity() {
        return Err(Error::ArityAboveTruncation {
            arity: max_arity,
            max: system.truncation_arity(),
        });
    }
    let sig = system.signature();
    let order = system.order();
    let mut reduced: Vec<Element> = Vec::new();
    for g in generators {
        if g.arity() < 2 {
            return Err(Error::Invalid(
                "suboperad generators must have arity at least 2".to_string(),
            ));
        }
        let nf = system.reduce(g)?;
        if nf.is_zero() {
            return Err(Error::ZeroRelation);
        }
        reduced.push(nf);
    }

    let identity = Element::from_monomial(ShuffleTreeMonomial::identity());
    let mut levels: Vec<Vec<Element>> = vec![Vec::new(); max_arity + 1];
    if max_arity >= 1 {
        levels[1] = vec![identity];
    }
    let mut dims = Vec::with_capacity(max_arity);
    if max_arity >= 1 {
        dims.push(1);
    }
    for n in 2..=max_arity {
        let mut ech = Echelon::new(order, n);
        for g in &reduced {
            if g.arity() == n {
                ech.insert(g.clone())?;
            }
        }
        for k in 2..n {
            let inner = n + 1 - k;
            for g in &reduced {
                if g.arity() != inner {
                    continue;
                }
                for u in &levels[k] {
                    for j in 1..=k {
                        for block in composition_blocks(j, k, inner) {
                            let composite = compose_elements(u, j, g, &block, sig)?;
                            ech.insert(system.reduce(&composite)?)?;
                        }
                    }
                }
            }
        }
        dims.push(ech.rank() as u64);
        levels[n] = ech.rows().into_iter().cloned().collect();
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::ShufflePresentation;
    use crate::expr::Presentation;
    use crate::order::OrderSpec;
    use crate::rewrite::DEFAULT_STEP_LIMIT;
    use crate::scalar;
    use crate::sig::Symmetry;

    fn pre_lie_system(truncation: usize) -> RewriteSystem {
        let p = Presentation::new(
            "pl",
            vec![("m", 2, Symmetry::NoSymmetry)],
            &["m(m(a1, a2), a3) - m(a1, m(a2, a3)) - m(m(a1, a3), a2) + m(a1, m(a3, a2))"],
            Vec::new(),
        )
        .unwrap();
        let sp = ShufflePresentation::from_presentation(&p).unwrap();
        let mut system = RewriteSystem::from_presentation(
            &sp,
            OrderSpec::path_lex(),
            truncation,
            DEFAULT_STEP_LIMIT,
        )
        .unwrap();
        system.complete().unwrap();
        system
    }

    fn gen_element(text: &str, arity: usize, sig: &ShuffleSignature) -> Element {
        // tiny helper: parse "m(1,2) - m'(1,2)"-style sums of monomials
        let mut out = Element::zero(arity);
        for part in text.split(" + ") {
            for (i, piece) in part.split(" - ").enumerate() {
                let sign = if i == 0 { 1 } else { -1 };
                let m = ShuffleTreeMonomial::parse_text(piece.trim(), sig).unwrap();
                out.add_term(scalar::int(sign), m);
            }
        }
        out
    }

    #[test]
    fn echelon_ranks_small_families() {
        let system = pre_lie_system(3);
        let sig = system.signature().clone();
        let a = gen_element("m(1,2)", 2, &sig);
        let b = gen_element("m'(1,2)", 2, &sig);
        let sum = a.add(&b).unwrap();
        assert_eq!(rank(&[a.clone()], system.order()).unwrap(), 1);
        assert_eq!(rank(&[a.clone(), b.clone()], system.order()).unwrap(), 2);
        // dependent triple
        assert_eq!(rank(&[a.clone(), b.clone(), sum], system.order()).unwrap(), 2);
        let mut ech = Echelon::new(system.order(), 2);
        assert!(ech.insert(a.clone()).unwrap());
        assert!(!ech.insert(a.scale(&scalar::int(5))).unwrap());
        assert!(ech.contains(&a.scale(&scalar::ratio(-2, 7))).unwrap());
        assert!(!ech.contains(&b).unwrap());
    }

    #[test]
    fn symmetrized_product_generates_a_free_suboperad() {
        let system = pre_lie_system(4);
        let sig = system.signature().clone();
        let sym = gen_element("m(1,2) + m'(1,2)", 2, &sig);
        let dims = suboperad_dims(&system, &[sym], 4).unwrap();
        assert_eq!(dims, vec![1, 1, 3, 15]);
    }

    #[test]
    fn product_and_bracket_generate_everything() {
        let system = pre_lie_system(4);
        let sig = system.signature().clone();
        let sym = gen_element("m(1,2) + m'(1,2)", 2, &sig);
        let anti = gen_element("m(1,2) - m'(1,2)", 2, &sig);
        let dims = suboperad_dims(&system, &[sym, anti], 4).unwrap();
        assert_eq!(dims, vec![1, 2, 9, 64]);
    }

    #[test]
    fn both_shuffle_generators_span_the_associative_operad() {
        let p = Presentation::new(
            "ass",
            vec![("m", 2, Symmetry::NoSymmetry)],
            &["m(m(a1, a2), a3) - m(a1, m(a2, a3))"],
            Vec::new(),
        )
        .unwrap();
        let sp = ShufflePresentation::from_presentation(&p).unwrap();
        let mut system =
            RewriteSystem::from_presentation(&sp, OrderSpec::path_lex(), 4, DEFAULT_STEP_LIMIT)
                .unwrap();
        system.complete().unwrap();
        let sig = system.signature().clone();
        let m = gen_element("m(1,2)", 2, &sig);
        let m_op = gen_element("m'(1,2)", 2, &sig);
        // the two shuffle generators together recover the whole quotient,
        // whose dimensions are the full n! ...
        assert_eq!(
            suboperad_dims(&system, &[m.clone(), m_op], 4).unwrap(),
            vec![1, 2, 6, 24]
        );
        // ... while the principal generator alone spans strictly less from
        // arity 2 on (its partner is not a shuffle composite of it).
        let solo = suboperad_dims(&system, &[m], 4).unwrap();
        assert_eq!(solo[0], 1);
        assert!(solo[1] < 2);
    }
}
