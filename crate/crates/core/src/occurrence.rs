//! Divisibility of shuffle tree monomials: occurrences of a pattern inside
//! a host and linear replacement of the matched region.
//!
//! An occurrence maps the pattern's internal vertices onto a connected
//! region of the host, preserving generator labels and child slots; every
//! pattern leaf then fronts a whole host subtree.  The match is valid when
//! the minimal leaf labels of those frontier subtrees increase in the order
//! of the pattern's leaf labels — equivalently, when relabeling the frontier
//! minima order-isomorphically reproduces the pattern.  Replacing the region
//! by any monomial of the pattern's arity re-grafts the frontier subtrees
//! and never requires straightening: frontier minima keep their relative
//! order, and the label set of the region is unchanged, so the shuffle
//! condition is inherited from the host and the replacement.

use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::{Node, ShuffleTreeMonomial};

/// A single occurrence of `pattern` in `host`, rooted at `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub host: ShuffleTreeMonomial,
    pub pattern: ShuffleTreeMonomial,
    pub path: Vec<usize>,
}

/// Collects the host subtrees fronting the pattern's leaves, indexed by
/// pattern leaf label (position `s-1` holds the subtree under leaf `s`).
/// Returns `None` when the shapes or generators disagree.
fn match_frontier<'h>(
    pattern: &Node,
    host: &'h Node,
    frontier: &mut Vec<Option<&'h Node>>,
) -> bool {
    match pattern {
        Node::Leaf(s) => {
            frontier[*s as usize - 1] = Some(host);
            true
        }
        Node::Vertex(g, children) => match host {
            Node::Vertex(h, host_children) if h == g => {
                debug_assert_eq!(children.len(), host_children.len());
                children
                    .iter()
                    .zip(host_children.iter())
                    .all(|(p, c)| match_frontier(p, c, frontier))
            }
            _ => false,
        },
    }
}

fn frontier_at<'h>(
    host: &'h ShuffleTreeMonomial,
    pattern: &ShuffleTreeMonomial,
    path: &[usize],
) -> Option<Vec<&'h Node>> {
    let sub = host.subtree(path)?;
    let mut frontier: Vec<Option<&Node>> = vec![None; pattern.arity()];
    if !match_frontier(pattern.node(), sub, &mut frontier) {
        return None;
    }
    let frontier: Vec<&Node> = frontier.into_iter().map(|f| f.unwrap()).collect();
    let mins: Vec<u32> = frontier.iter().map(|f| f.min_label()).collect();
    if mins.windows(2).all(|w| w[0] < w[1]) {
        Some(frontier)
    } else {
        None
    }
}

/// All occurrences of `pattern` in `host`, in preorder of the root vertex.
/// The identity pattern (a bare leaf) is rejected: it would occur anywhere
/// and rewrite nothing.
pub fn find_occurrences(
    host: &ShuffleTreeMonomial,
    pattern: &ShuffleTreeMonomial,
) -> Result<Vec<Occurrence>> {
    if pattern.is_identity() {
        return Err(Error::IdentityPattern);
    }
    let mut out = Vec::new();
    for path in host.vertex_paths() {
        if frontier_at(host, pattern, &path).is_some() {
            out.push(Occurrence { host: host.clone(), pattern: pattern.clone(), path });
        }
    }
    Ok(out)
}

/// True iff `pattern` occurs somewhere in `host` (cheaper than collecting).
pub fn divides(pattern: &ShuffleTreeMonomial, host: &ShuffleTreeMonomial) -> bool {
    !pattern.is_identity()
        && host
            .vertex_paths()
            .into_iter()
            .any(|path| frontier_at(host, pattern, &path).is_some())
}

/// True iff `pattern` matches `host` rooted exactly at `path`.
pub fn occurs_at(host: &ShuffleTreeMonomial, pattern: &ShuffleTreeMonomial, path: &[usize]) -> bool {
    !pattern.is_identity() && frontier_at(host, pattern, path).is_some()
}

/// First occurrence in preorder, if any, as a bare path.
pub fn first_occurrence_path(
    host: &ShuffleTreeMonomial,
    pattern: &ShuffleTreeMonomial,
) -> Option<Vec<usize>> {
    if pattern.is_identity() {
        return None;
    }
    host.vertex_paths()
        .into_iter()
        .find(|path| frontier_at(host, pattern, path).is_some())
}

fn rebuild_with(node: &Node, path: &[usize], replacement: &Node) -> Node {
    match path.split_first() {
        None => replacement.clone(),
        Some((&slot, rest)) => match node {
            Node::Vertex(g, children) => {
                let mut children = children.clone();
                children[slot] = rebuild_with(&children[slot], rest, replacement);
                Node::Vertex(*g, children)
            }
            Node::Leaf(_) => unreachable!("path into a leaf"),
        },
    }
}

fn graft_frontier(node: &Node, frontier: &[&Node]) -> Node {
    match node {
        Node::Leaf(s) => frontier[*s as usize - 1].clone(),
        Node::Vertex(g, children) => {
            Node::Vertex(*g, children.iter().map(|c| graft_frontier(c, frontier)).collect())
        }
    }
}

/// Replaces one occurrence of the pattern by a monomial of the same arity,
/// re-grafting the frontier subtrees.  The result is canonical by
/// construction (see the module docs); no straightening happens.
pub fn replace_occurrence_by_monomial(
    host: &ShuffleTreeMonomial,
    path: &[usize],
    pattern: &ShuffleTreeMonomial,
    replacement: &ShuffleTreeMonomial,
) -> Result<ShuffleTreeMonomial> {
    if replacement.arity() != pattern.arity() {
        return Err(Error::ArityMismatch {
            expected: pattern.arity(),
            got: replacement.arity(),
        });
    }
    let frontier = frontier_at(host, pattern, path).ok_or(Error::StaleOccurrence)?;
    let region = graft_frontier(replacement.node(), &frontier);
    let node = rebuild_with(host.node(), path, &region);
    Ok(ShuffleTreeMonomial::new_unchecked(host.arity(), node))
}

/// Linear extension: replaces the matched region by each term of an
/// element, keeping coefficients.  Substituting the pattern itself returns
/// `1 * host`.
pub fn replace_occurrence(
    host: &ShuffleTreeMonomial,
    occ: &Occurrence,
    replacement: &Element,
) -> Result<Element> {
    if &occ.host != host {
        return Err(Error::StaleOccurrence);
    }
    if replacement.arity() != occ.pattern.arity() {
        return Err(Error::ArityMismatch {
            expected: occ.pattern.arity(),
            got: replacement.arity(),
        });
    }
    let mut out = Element::zero(host.arity());
    for (m, c) in replacement.terms() {
        out.add_term(
            c.clone(),
            replace_occurrence_by_monomial(host, &occ.path, &occ.pattern, m)?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar;
    use crate::sig::{ShuffleSignature, Signature, Symmetry};

    fn sig_m() -> ShuffleSignature {
        ShuffleSignature::from_signature(
            &Signature::new(vec![("m", 2, Symmetry::Symmetric)]).unwrap(),
        )
        .unwrap()
    }

    fn t(s: &str, sig: &ShuffleSignature) -> ShuffleTreeMonomial {
        ShuffleTreeMonomial::parse_text(s, sig).unwrap()
    }

    #[test]
    fn occurrence_counts_from_shapes() {
        let sig = sig_m();
        let host = t("m(m(m(1,2),3),4)", &sig);
        let pattern = t("m(m(1,2),3)", &sig);
        let occs = find_occurrences(&host, &pattern).unwrap();
        assert_eq!(occs.len(), 2);
        assert_eq!(occs[0].path, Vec::<usize>::new());
        assert_eq!(occs[1].path, vec![0]);
        // non-matching shape
        let host2 = t("m(1,m(2,3))", &sig);
        assert!(find_occurrences(&host2, &pattern).unwrap().is_empty());
        // host equals pattern: the identity embedding
        assert_eq!(find_occurrences(&pattern, &pattern).unwrap().len(), 1);
        // identity pattern rejected
        assert!(matches!(
            find_occurrences(&host, &ShuffleTreeMonomial::identity()),
            Err(Error::IdentityPattern)
        ));
    }

    #[test]
    fn frontier_rank_condition_filters() {
        let sig = sig_m();
        // host m(m(1,3),2): matching the comb shape maps pattern leaves
        // 1,2,3 to labels 1,3,2 — not increasing, so no occurrence
        let host = t("m(m(1,3),2)", &sig);
        let pattern = t("m(m(1,2),3)", &sig);
        assert!(find_occurrences(&host, &pattern).unwrap().is_empty());
        assert!(!divides(&pattern, &host));
        // but the corolla m(1,2) occurs twice
        let corolla = t("m(1,2)", &sig);
        assert_eq!(find_occurrences(&host, &corolla).unwrap().len(), 2);
    }

    #[test]
    fn replace_identity_substitution_is_identity() {
        let sig = sig_m();
        let pattern = t("m(m(1,2),3)", &sig);
        for host_text in ["m(m(m(1,2),3),4)", "m(m(m(1,3),2),4)", "m(m(m(1,2),4),3)"] {
            let host = t(host_text, &sig);
            for occ in find_occurrences(&host, &pattern).unwrap() {
                let e = replace_occurrence(&host, &occ, &Element::from_monomial(pattern.clone()))
                    .unwrap();
                assert_eq!(e, Element::from_monomial(host.clone()), "host {host_text}");
            }
        }
    }

    #[test]
    fn replace_with_other_monomial_and_linearity() {
        let sig = sig_m();
        let host = t("m(m(1,2),3)", &sig);
        let pattern = host.clone();
        let occ = &find_occurrences(&host, &pattern).unwrap()[0];
        let right = t("m(1,m(2,3))", &sig);
        let e = replace_occurrence(&host, occ, &Element::from_monomial(right.clone())).unwrap();
        assert_eq!(e, Element::from_monomial(right));
        // zero replacement gives zero
        let z = replace_occurrence(&host, occ, &Element::zero(3)).unwrap();
        assert!(z.is_zero());
        // coefficients pass through linearly
        let mix = Element::from_terms(
            3,
            vec![
                (scalar::ratio(1, 2), t("m(1,m(2,3))", &sig)),
                (scalar::int(-3), t("m(m(1,3),2)", &sig)),
            ],
        )
        .unwrap();
        let e = replace_occurrence(&host, occ, &mix).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coefficient(&t("m(1,m(2,3))", &sig)), scalar::ratio(1, 2));
        assert_eq!(e.coefficient(&t("m(m(1,3),2)", &sig)), scalar::int(-3));
    }

    #[test]
    fn replacement_deep_in_context_stays_canonical() {
        let sig = sig_m();
        // pattern occurrence with a non-trivial frontier and context
        let host = t("m(m(m(1,4),2),3)", &sig);
        let pattern = t("m(m(1,2),3)", &sig);
        let occs = find_occurrences(&host, &pattern).unwrap();
        assert_eq!(occs.len(), 1);
        let right = t("m(1,m(2,3))", &sig);
        let e = replace_occurrence(&host, &occs[0], &Element::from_monomial(right)).unwrap();
        // frontier subtrees were m(1,4), 2, 3 in pattern-label order
        assert_eq!(e.to_text(&sig), "m(m(1,4),m(2,3))");
    }

    #[test]
    fn stale_occurrence_rejected() {
        let sig = sig_m();
        let host = t("m(m(1,2),3)", &sig);
        let other = t("m(m(1,3),2)", &sig);
        let occ = &find_occurrences(&host, &host).unwrap()[0];
        assert!(matches!(
            replace_occurrence(&other, occ, &Element::from_monomial(host.clone())),
            Err(Error::StaleOccurrence)
        ));
    }
}
