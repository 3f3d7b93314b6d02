//! Polarization: the exact basis change between a binary product without
//! symmetry and its symmetric/antisymmetric parts.
//!
//! For a product `m` with shuffle partners `m, m'` and target generators
//! `s` (symmetric) and `a` (antisymmetric):
//!
//! ```text
//! polarize:    m  ↦ 1/2 s + 1/2 a        m' ↦ 1/2 s - 1/2 a
//! depolarize:  s  ↦ m + m'               a  ↦ m - m'
//! ```
//!
//! Both maps act vertex-by-vertex on shuffle tree monomials.  They never
//! require re-straightening: the leaf labels and the child order of every
//! vertex are untouched, so the shuffle condition is preserved verbatim.
//! The two maps are mutually inverse.

use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::{Node, ShuffleTreeMonomial};
use crate::scalar::{self, Scalar};
use crate::sig::{ShuffleGenId, ShuffleSignature, Signature, SwapBehavior, Symmetry};
use std::collections::BTreeMap;

/// A fixed polarization: a source signature (with binary no-symmetry
/// products) and the target signature where each product is replaced by a
/// symmetric/antisymmetric pair.  Other generators carry over by name.
#[derive(Debug, Clone)]
pub struct Polarization {
    source: ShuffleSignature,
    target: ShuffleSignature,
    forward: BTreeMap<ShuffleGenId, Vec<(Scalar, ShuffleGenId)>>,
    backward: BTreeMap<ShuffleGenId, Vec<(Scalar, ShuffleGenId)>>,
}

impl Polarization {
    /// `pairs` maps each no-symmetry symbol of `source` to the names of its
    /// symmetric and antisymmetric halves, e.g. `[("m", "o", "b")]`.
    pub fn new(source: &Signature, pairs: &[(&str, &str, &str)]) -> Result<Self> {
        for (name, _, _) in pairs {
            let symbol = source.by_name(name)?;
            if symbol.symmetry != Symmetry::NoSymmetry {
                return Err(Error::Invalid(format!(
                    "`{name}` is not a product without symmetry"
                )));
            }
        }
        let mut target = Signature::new(Vec::new())?;
        // (source symbol name) -> (symmetric name, antisymmetric name)
        let mut split: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
        for (name, s, a) in pairs {
            if split.insert(name, (s, a)).is_some() {
                return Err(Error::Invalid(format!("`{name}` polarized twice")));
            }
        }
        for symbol in source.symbols() {
            match symbol.symmetry {
                Symmetry::NoSymmetry => {
                    let (s, a) = split.remove(symbol.name.as_str()).ok_or_else(|| {
                        Error::Invalid(format!(
                            "product `{}` has no polarization pair",
                            symbol.name
                        ))
                    })?;
                    target.push(s, 2, Symmetry::Symmetric, symbol.filtration_weight, symbol.class_tag)?;
                    target.push(a, 2, Symmetry::Antisymmetric, symbol.filtration_weight, symbol.class_tag)?;
                }
                _ => {
                    target.push(
                        &symbol.name,
                        symbol.arity,
                        symbol.symmetry,
                        symbol.filtration_weight,
                        symbol.class_tag,
                    )?;
                }
            }
        }
        if !split.is_empty() {
            let name = split.keys().next().unwrap();
            return Err(Error::UnknownGenerator(name.to_string()));
        }

        let source_ssig = ShuffleSignature::from_signature(source)?;
        let target_ssig = ShuffleSignature::from_signature(&target)?;

        let half = scalar::ratio(1, 2);
        let one = scalar::int(1);
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for gen in source_ssig.gens() {
            let origin = source_ssig.origin_symbol(gen.id);
            match origin.symmetry {
                Symmetry::NoSymmetry => {
                    let (s_name, a_name) = pairs
                        .iter()
                        .find(|(n, _, _)| *n == origin.name)
                        .map(|(_, s, a)| (*s, *a))
                        .unwrap();
                    let s = target_ssig.by_name(s_name)?.id;
                    let a = target_ssig.by_name(a_name)?.id;
                    let is_primary = source_ssig.principal(origin.id) == gen.id;
                    let a_sign = if is_primary { half.clone() } else { -half.clone() };
                    forward.insert(gen.id, vec![(half.clone(), s), (a_sign, a)]);
                }
                _ => {
                    let image = target_ssig.by_name(&gen.name)?.id;
                    forward.insert(gen.id, vec![(one.clone(), image)]);
                }
            }
        }
        for gen in target_ssig.gens() {
            let mut mapped = false;
            for (name, s, a) in pairs {
                if gen.name == *s || gen.name == *a {
                    let symbol = source.by_name(name)?;
                    let m = source_ssig.principal(symbol.id);
                    let m_swapped = match source_ssig.get(m).swap {
                        SwapBehavior::Partner { other } => other,
                        SwapBehavior::Signed { .. } => unreachable!(),
                    };
                    let sign = if gen.name == *s { one.clone() } else { -one.clone() };
                    backward.insert(gen.id, vec![(one.clone(), m), (sign, m_swapped)]);
                    mapped = true;
                    break;
                }
            }
            if !mapped {
                let image = source_ssig.by_name(&gen.name)?.id;
                backward.insert(gen.id, vec![(one.clone(), image)]);
            }
        }

        Ok(Polarization {
            source: source_ssig,
            target: target_ssig,
            forward,
            backward,
        })
    }

    pub fn source(&self) -> &ShuffleSignature {
        &self.source
    }

    pub fn target(&self) -> &ShuffleSignature {
        &self.target
    }

    /// Source element (products) to target element (polarized pairs).
    pub fn polarize(&self, e: &Element) -> Element {
        map_element(e, &self.forward)
    }

    /// Target element back to the source basis.
    pub fn depolarize(&self, e: &Element) -> Element {
        map_element(e, &self.backward)
    }
}

fn map_element(
    e: &Element,
    images: &BTreeMap<ShuffleGenId, Vec<(Scalar, ShuffleGenId)>>,
) -> Element {
    let mut out = Element::zero(e.arity());
    for (monomial, coeff) in e.terms() {
        for (c, node) in expand_node(monomial.node(), images) {
            out.add_term(
                coeff * c,
                ShuffleTreeMonomial::new_unchecked(e.arity(), node),
            );
        }
    }
    out
}

fn expand_node(
    node: &Node,
    images: &BTreeMap<ShuffleGenId, Vec<(Scalar, ShuffleGenId)>>,
) -> Vec<(Scalar, Node)> {
    match node {
        Node::Leaf(l) => vec![(scalar::int(1), Node::Leaf(*l))],
        Node::Vertex(gen, children) => {
            let mut combos: Vec<(Scalar, Vec<Node>)> = vec![(scalar::int(1), Vec::new())];
            for child in children {
                let expansions = expand_node(child, images);
                let mut next = Vec::with_capacity(combos.len() * expansions.len());
                for (c, nodes) in &combos {
                    for (d, sub) in &expansions {
                        let mut nodes = nodes.clone();
                        nodes.push(sub.clone());
                        next.push((c * d, nodes));
                    }
                }
                combos = next;
            }
            let mut out = Vec::new();
            for (c, nodes) in combos {
                for (d, image) in &images[gen] {
                    out.push((&c * d, Node::Vertex(*image, nodes.clone())));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::enumerate_monomials;

    fn prelie_polarization() -> Polarization {
        let source = Signature::new(vec![("m", 2, Symmetry::NoSymmetry)]).unwrap();
        Polarization::new(&source, &[("m", "o", "b")]).unwrap()
    }

    #[test]
    fn polarize_expands_each_vertex() {
        use num::Signed;
        let pol = prelie_polarization();
        let m = pol.source().by_name("m").unwrap().id;
        let t = ShuffleTreeMonomial::new(
            Node::Vertex(
                m,
                vec![
                    Node::Vertex(m, vec![Node::Leaf(1), Node::Leaf(2)]),
                    Node::Leaf(3),
                ],
            ),
            pol.source(),
        )
        .unwrap();
        let image = pol.polarize(&Element::from_monomial(t));
        assert_eq!(image.len(), 4);
        for (_, c) in image.terms() {
            assert_eq!(c.abs(), scalar::ratio(1, 4), "{c}");
        }
        assert_eq!(
            image.to_text(pol.target()),
            "1/4*o(o(1,2),3) + 1/4*o(b(1,2),3) + 1/4*b(o(1,2),3) + 1/4*b(b(1,2),3)"
        );
    }

    #[test]
    fn polarize_and_depolarize_are_mutually_inverse() {
        let pol = prelie_polarization();
        for arity in 1..=3 {
            for m in enumerate_monomials(pol.source(), arity).unwrap() {
                let e = Element::from_monomial(m);
                let round = pol.depolarize(&pol.polarize(&e));
                assert_eq!(round, e);
            }
            for t in enumerate_monomials(pol.target(), arity).unwrap() {
                let e = Element::from_monomial(t);
                let round = pol.polarize(&pol.depolarize(&e));
                assert_eq!(round, e);
            }
        }
    }

    #[test]
    fn swapped_partner_gets_the_sign() {
        let pol = prelie_polarization();
        let mp = pol.source().by_name("m'").unwrap().id;
        let t = ShuffleTreeMonomial::new(
            Node::Vertex(mp, vec![Node::Leaf(1), Node::Leaf(2)]),
            pol.source(),
        )
        .unwrap();
        let image = pol.polarize(&Element::from_monomial(t));
        assert_eq!(image.to_text(pol.target()), "1/2*o(1,2) - 1/2*b(1,2)");
    }

    #[test]
    fn carried_generators_pass_through() {
        // a mixed signature: one product to polarize, one symmetric generator kept
        let source = Signature::new(vec![
            ("c", 2, Symmetry::Symmetric),
            ("m", 2, Symmetry::NoSymmetry),
        ])
        .unwrap();
        let pol = Polarization::new(&source, &[("m", "s", "a")]).unwrap();
        let c = pol.source().by_name("c").unwrap().id;
        let m = pol.source().by_name("m").unwrap().id;
        let t = ShuffleTreeMonomial::new(
            Node::Vertex(
                c,
                vec![
                    Node::Vertex(m, vec![Node::Leaf(1), Node::Leaf(3)]),
                    Node::Leaf(2),
                ],
            ),
            pol.source(),
        )
        .unwrap();
        let image = pol.polarize(&Element::from_monomial(t.clone()));
        assert_eq!(
            image.to_text(pol.target()),
            "1/2*c(s(1,3),2) + 1/2*c(a(1,3),2)"
        );
        let back = pol.depolarize(&image);
        assert_eq!(back, Element::from_monomial(t));
    }

    #[test]
    fn rejects_bad_pairings() {
        let source = Signature::new(vec![
            ("o", 2, Symmetry::Symmetric),
            ("m", 2, Symmetry::NoSymmetry),
        ])
        .unwrap();
        // symmetric generator cannot be polarized
        assert!(Polarization::new(&source, &[("o", "s", "a"), ("m", "x", "y")]).is_err());
        // missing pair for `m`
        assert!(Polarization::new(&source, &[]).is_err());
        // name clash with a carried generator
        assert!(Polarization::new(&source, &[("m", "o", "b")]).is_err());
    }
}
