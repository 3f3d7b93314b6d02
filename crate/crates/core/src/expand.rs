//! Expansion of symmetric relations into shuffle elements.
//!
//! A multilinear relation `r(a1, …, an) = 0` over a symmetric signature
//! stands for its whole `S_n`-orbit.  In the shuffle-monomial basis each
//! permutation instance `r(aσ(1), …, aσ(n))` becomes a concrete element:
//! substitute the leaf label `σ(i)` for `a_i`, send each symbol to its
//! principal shuffle generator, straighten every term and collect.  The
//! symmetric ideal generated by the relations equals the shuffle ideal
//! generated by these orbit elements.

use crate::element::Element;
use crate::error::Result;
use crate::expr::{ExprNode, Presentation, RelationExpr};
use crate::monomial::{straighten, Node};
use crate::scalar;
use crate::sig::ShuffleSignature;
use itertools::Itertools;

/// One permutation instance of a relation: `a_i ↦ leaf perm[i-1]`.
///
/// `perm` must be a bijection on `1..=arity` (checked).  The result may be
/// zero when the instance is already implied by generator symmetries.
pub fn expand_instance(
    rel: &RelationExpr,
    perm: &[u32],
    sig: &ShuffleSignature,
) -> Result<Element> {
    let n = rel.arity();
    check_permutation(perm, n)?;
    let mut out = Element::zero(n);
    for (coeff, tree) in rel.terms() {
        let node = instantiate(tree, perm, sig);
        let (sign, monomial) = straighten(&node, sig)?;
        out.add_term(coeff * scalar::int(sign as i64), monomial);
    }
    Ok(out)
}

fn check_permutation(perm: &[u32], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(crate::error::Error::BadPermutation(n));
    }
    for &p in perm {
        if p == 0 || p as usize > n || seen[p as usize - 1] {
            return Err(crate::error::Error::BadPermutation(n));
        }
        seen[p as usize - 1] = true;
    }
    Ok(())
}

fn instantiate(tree: &ExprNode, perm: &[u32], sig: &ShuffleSignature) -> Node {
    match tree {
        ExprNode::Arg(i) => Node::Leaf(perm[*i as usize - 1]),
        ExprNode::Op(symbol, children) => Node::Vertex(
            sig.principal(*symbol),
            children.iter().map(|c| instantiate(c, perm, sig)).collect(),
        ),
    }
}

/// The full orbit of a relation: one element per permutation of `1..=n`, in
/// lexicographic order of the permutation, with zero instances dropped and
/// duplicates up to a scalar factor removed (first representative kept, each
/// normalised so the structurally smallest monomial has coefficient 1).
pub fn expand_orbit(rel: &RelationExpr, sig: &ShuffleSignature) -> Result<Vec<Element>> {
    let n = rel.arity();
    let mut out: Vec<Element> = Vec::new();
    let mut seen: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for perm in (1..=n as u32).permutations(n) {
        let inst = expand_instance(rel, &perm, sig)?;
        let Some(normalized) = inst.normalized_up_to_scalar() else {
            continue; // zero instance
        };
        let key = normalized.to_text(sig);
        if seen.insert(key) {
            out.push(normalized);
        }
    }
    Ok(out)
}

/// A presentation expanded to the shuffle world: the shuffle signature plus
/// the deduplicated orbit elements of every relation, in presentation order.
#[derive(Debug, Clone)]
pub struct ShufflePresentation {
    pub name: String,
    signature: ShuffleSignature,
    relations: Vec<Element>,
}

impl ShufflePresentation {
    pub fn from_presentation(p: &Presentation) -> Result<Self> {
        let signature = ShuffleSignature::from_signature(p.signature())?;
        let mut relations = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for rel in p.relations() {
            for element in expand_orbit(rel, &signature)? {
                if seen.insert(element.to_text(&signature)) {
                    relations.push(element);
                }
            }
        }
        Ok(ShufflePresentation {
            name: p.name.clone(),
            signature,
            relations,
        })
    }

    pub fn signature(&self) -> &ShuffleSignature {
        &self.signature
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn max_relation_arity(&self) -> usize {
        self.relations.iter().map(|e| e.arity()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::{Signature, Symmetry};

    fn shuffle_ob() -> ShuffleSignature {
        let sig = Signature::new(vec![
            ("o", 2, Symmetry::Symmetric),
            ("b", 2, Symmetry::Antisymmetric),
        ])
        .unwrap();
        ShuffleSignature::from_signature(&sig).unwrap()
    }

    #[test]
    fn associativity_orbit_for_a_symmetric_product() {
        let sig = Signature::new(vec![("o", 2, Symmetry::Symmetric)]).unwrap();
        let ssig = ShuffleSignature::from_signature(&sig).unwrap();
        let rel = RelationExpr::parse("(a1 o a2) o a3 - a1 o (a2 o a3)", &sig).unwrap();
        let orbit = expand_orbit(&rel, &ssig).unwrap();
        // three distinct differences of the three arity-3 monomials
        assert_eq!(orbit.len(), 3);
        for e in &orbit {
            assert_eq!(e.arity(), 3);
            assert_eq!(e.len(), 2);
        }
    }

    #[test]
    fn jacobi_orbit_collapses_to_one_element() {
        let sig = Signature::new(vec![("b", 2, Symmetry::Antisymmetric)]).unwrap();
        let ssig = ShuffleSignature::from_signature(&sig).unwrap();
        let rel = RelationExpr::parse(
            "[[a1, a2], a3] + [[a2, a3], a1] + [[a3, a1], a2]",
            &sig,
        )
        .unwrap();
        let orbit = expand_orbit(&rel, &ssig).unwrap();
        assert_eq!(orbit.len(), 1);
        assert_eq!(orbit[0].len(), 3);
        // identity instance straightens to T1 - T2 - T3 in the canonical basis
        // (printed in structural monomial order, leaf-first trees first)
        let id_instance = expand_instance(&rel, &[1, 2, 3], &ssig).unwrap();
        assert_eq!(
            id_instance.to_text(&ssig),
            "-b(1,b(2,3)) + b(b(1,2),3) - b(b(1,3),2)"
        );
    }

    #[test]
    fn antisymmetric_sugar_instance_respects_signs() {
        let ssig = shuffle_ob();
        let rel = RelationExpr::parse("[a2, a1] o a3", ssig.origin()).unwrap();
        // [a2, a1] = -[a1, a2]; the instance at the identity permutation is
        // -o(b(1,2),3)
        let inst = expand_instance(&rel, &[1, 2, 3], &ssig).unwrap();
        assert_eq!(inst.to_text(&ssig), "-o(b(1,2),3)");
    }

    #[test]
    fn pre_lie_orbit_has_three_representatives() {
        let sig = Signature::new(vec![("m", 2, Symmetry::NoSymmetry)]).unwrap();
        let ssig = ShuffleSignature::from_signature(&sig).unwrap();
        let rel = RelationExpr::parse(
            "m(m(a1, a2), a3) - m(a1, m(a2, a3)) - m(m(a1, a3), a2) + m(a1, m(a3, a2))",
            &sig,
        )
        .unwrap();
        let orbit = expand_orbit(&rel, &ssig).unwrap();
        // the relation is antisymmetric in a2, a3, so the six instances pair up
        assert_eq!(orbit.len(), 3);
    }

    #[test]
    fn instances_are_permuted_identity_instances() {
        use itertools::Itertools;
        let ssig = shuffle_ob();
        let rel = RelationExpr::parse(
            "[a1 o a2, a3 o a4] - [a1 o a2, a3] o a4 - [a1 o a2, a4] o a3 \
             - a1 o [a2, a3 o a4] - a2 o [a1, a3 o a4] + (a1 o a3) o [a2, a4] \
             + (a2 o a3) o [a1, a4] + (a2 o a4) o [a1, a3] + (a1 o a4) o [a2, a3]",
            ssig.origin(),
        )
        .unwrap();
        assert_eq!(rel.terms().len(), 9);
        let id_instance = expand_instance(&rel, &[1, 2, 3, 4], &ssig).unwrap();
        for perm in (1u32..=4).permutations(4) {
            let direct = expand_instance(&rel, &perm, &ssig).unwrap();
            let via_action = id_instance.permuted(&perm, &ssig).unwrap();
            assert_eq!(direct, via_action);
        }
    }

    #[test]
    fn shuffle_presentation_collects_all_orbits() {
        let pres = Presentation::new(
            "demo",
            vec![("o", 2, Symmetry::Symmetric), ("b", 2, Symmetry::Antisymmetric)],
            &[
                "(a1 o a2) o a3 - a1 o (a2 o a3)",
                "[[a1, a2], a3] + [[a2, a3], a1] + [[a3, a1], a2]",
            ],
            Vec::new(),
        )
        .unwrap();
        let sp = ShufflePresentation::from_presentation(&pres).unwrap();
        assert_eq!(sp.relations().len(), 4); // 3 associativity + 1 Jacobi
        assert_eq!(sp.max_relation_arity(), 3);
        assert_eq!(sp.name, "demo");
    }
}
