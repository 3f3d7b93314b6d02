//! Arity-homogeneous linear combinations of shuffle tree monomials with
//! exact rational coefficients.

use crate::error::{Error, Result};
use crate::monomial::{apply_permutation, ShuffleTreeMonomial};
use crate::order::CompiledOrder;
use crate::scalar::{self, Scalar};
use crate::sig::ShuffleSignature;
use num::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Weights per origin-symbol name; the weight of a monomial is the sum over
/// its internal vertices.
pub type WeightAssignment = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    arity: usize,
    terms: BTreeMap<ShuffleTreeMonomial, Scalar>,
}

impl Element {
    pub fn zero(arity: usize) -> Self {
        Element { arity, terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: ShuffleTreeMonomial) -> Self {
        Element::from_term(scalar::int(1), m)
    }

    pub fn from_term(c: Scalar, m: ShuffleTreeMonomial) -> Self {
        let mut e = Element::zero(m.arity());
        e.add_term(c, m);
        e
    }

    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Scalar, ShuffleTreeMonomial)>,
    ) -> Result<Self> {
        let mut e = Element::zero(arity);
        for (c, m) in terms {
            if m.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: m.arity() });
            }
            e.add_term(c, m);
        }
        Ok(e)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in structural monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&ShuffleTreeMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ShuffleTreeMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `c * m` in place, dropping the monomial when it cancels.
    pub fn add_term(&mut self, c: Scalar, m: ShuffleTreeMonomial) {
        debug_assert_eq!(m.arity(), self.arity);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.scale(&scalar::int(-1)))
    }

    pub fn neg(&self) -> Element {
        self.scale(&scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(self.arity);
        }
        Element {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Adds `c * other` in place.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        for (m, x) in other.terms() {
            self.add_term(x * c, m.clone());
        }
        Ok(())
    }

    /// The maximal term under the given order; `None` on the zero element.
    pub fn leading(&self, ord: &CompiledOrder) -> Option<(&ShuffleTreeMonomial, &Scalar)> {
        self.terms.iter().max_by(|(a, _), (b, _)| ord.cmp(a, b))
    }

    /// Divides by the leading coefficient; `None` on the zero element.
    pub fn make_monic(&self, ord: &CompiledOrder) -> Option<Element> {
        let (_, lc) = self.leading(ord)?;
        let inv = Scalar::new(lc.denom().clone(), lc.numer().clone());
        Some(self.scale(&inv))
    }

    /// Normalizes so the structurally smallest monomial has coefficient 1;
    /// an order-free canonical representative of the scalar class.
    pub fn normalized_up_to_scalar(&self) -> Option<Element> {
        let (_, c) = self.terms.iter().next()?;
        let inv = Scalar::new(c.denom().clone(), c.numer().clone());
        Some(self.scale(&inv))
    }

    /// Applies a leaf permutation to every term, straightening signs into
    /// the coefficients.
    pub fn permuted(&self, perm: &[u32], sig: &ShuffleSignature) -> Result<Element> {
        let mut out = Element::zero(self.arity);
        for (m, c) in self.terms() {
            let (sign, t) = apply_permutation(m, perm, sig)?;
            out.add_term(c * scalar::int(sign as i64), t);
        }
        Ok(out)
    }

    /// Splits into weight-homogeneous components; only nonzero components
    /// appear.  Errors if a generator has no assigned weight.
    pub fn weight_components(
        &self,
        w: &WeightAssignment,
        sig: &ShuffleSignature,
    ) -> Result<BTreeMap<u64, Element>> {
        for g in sig.origin().symbols() {
            if !w.contains_key(&g.name) {
                return Err(Error::MissingWeight(g.name.clone()));
            }
        }
        let gen_weight: Vec<u64> =
            sig.gens().iter().map(|g| w[&sig.origin_symbol(g.id).name]).collect();
        let mut out: BTreeMap<u64, Element> = BTreeMap::new();
        for (m, c) in self.terms() {
            let mut weight = 0u64;
            for path in m.vertex_paths() {
                if let crate::monomial::Node::Vertex(g, _) = m.subtree(&path).unwrap() {
                    weight += gen_weight[*g];
                }
            }
            out.entry(weight)
                .or_insert_with(|| Element::zero(self.arity))
                .add_term(c.clone(), m.clone());
        }
        out.retain(|_, e| !e.is_zero());
        Ok(out)
    }

    /// Canonical text: terms in structural order, `c*monomial` with unit
    /// coefficients elided, e.g. `o(o(1,2),3) - 2*o(o(1,3),2)`.
    pub fn to_text(&self, sig: &ShuffleSignature) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Scalar::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&scalar::coeff_prefix(&mag));
            out.push_str(&m.to_text(sig));
        }
        out
    }

    /// JSON list `[{"coeff": "p/q", "monomial": …}, …]` in structural order.
    pub fn to_json(&self, sig: &ShuffleSignature) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({ "coeff": scalar::format_scalar(c), "monomial": m.to_json(sig) })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, arity: usize, sig: &ShuffleSignature) -> Result<Element> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid("element JSON must be an array".into()))?;
        let mut out = Element::zero(arity);
        for item in arr {
            let coeff = item
                .get("coeff")
                .and_then(|c| c.as_str())
                .and_then(scalar::parse_scalar)
                .ok_or_else(|| Error::Invalid("bad coefficient in element JSON".into()))?;
            let m = ShuffleTreeMonomial::from_json(
                item.get("monomial")
                    .ok_or_else(|| Error::Invalid("missing monomial in element JSON".into()))?,
                sig,
            )?;
            if m.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: m.arity() });
            }
            out.add_term(coeff, m);
        }
        Ok(out)
    }

    /// Inverse of [`Element::to_text`]: a signed sum of `coeff*monomial`
    /// terms (unit coefficients elided), or `0`.  Generator names cannot
    /// contain sign characters, so `+`/`-` outside a monomial always
    /// separate terms.
    pub fn parse_text(src: &str, sig: &ShuffleSignature) -> Result<Element> {
        let s = src.trim();
        if s.is_empty() {
            return Err(Error::Parse { at: 0, msg: "empty element text".into() });
        }
        if s == "0" {
            return Err(Error::Parse {
                at: 0,
                msg: "the zero element has no arity; parse a nonzero sum".into(),
            });
        }
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let mut out: Option<Element> = None;
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let mut negative = false;
            if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                negative = bytes[pos] == b'-';
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
            }
            if pos >= bytes.len() {
                return Err(Error::Parse { at: pos, msg: "expected a term".into() });
            }
            // optional `p/q*` coefficient: digits (and a slash) followed by `*`
            let mut coeff = Scalar::one();
            let digits_end = {
                let mut k = pos;
                while k < bytes.len() && (bytes[k].is_ascii_digit() || bytes[k] == b'/') {
                    k += 1;
                }
                k
            };
            if digits_end > pos && digits_end < bytes.len() && bytes[digits_end] == b'*' {
                coeff = scalar::parse_scalar(&s[pos..digits_end]).ok_or(Error::Parse {
                    at: pos,
                    msg: format!("bad coefficient `{}`", &s[pos..digits_end]),
                })?;
                pos = digits_end + 1;
            }
            // monomial extent: to the close of the balanced parentheses, or
            // for a bare leaf the end of its digits
            let start = pos;
            let mut depth = 0usize;
            while pos < bytes.len() {
                match bytes[pos] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            pos += 1;
                            break;
                        }
                    }
                    b'+' | b'-' if depth == 0 => break,
                    b' ' if depth == 0 => break,
                    _ => {}
                }
                pos += 1;
            }
            let monomial = ShuffleTreeMonomial::parse_text(&s[start..pos], sig)?;
            if negative {
                coeff = -coeff;
            }
            let acc = out.get_or_insert_with(|| Element::zero(monomial.arity()));
            if monomial.arity() != acc.arity() {
                return Err(Error::ArityMismatch {
                    expected: acc.arity(),
                    got: monomial.arity(),
                });
            }
            acc.add_term(coeff, monomial);
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                break;
            }
            if bytes[pos] != b'+' && bytes[pos] != b'-' {
                return Err(Error::Parse {
                    at: pos,
                    msg: format!("expected `+` or `-`, found `{}`", &s[pos..=pos]),
                });
            }
        }
        Ok(out.expect("at least one term parsed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::OrderSpec;
    use crate::sig::{Signature, Symmetry};

    fn sig_ob() -> ShuffleSignature {
        let mut s = Signature::new(vec![
            ("o", 2, Symmetry::Symmetric),
            ("b", 2, Symmetry::Antisymmetric),
        ])
        .unwrap();
        s.set_weight("b", 1).unwrap();
        ShuffleSignature::from_signature(&s).unwrap()
    }

    fn m(t: &str, sig: &ShuffleSignature) -> ShuffleTreeMonomial {
        ShuffleTreeMonomial::parse_text(t, sig).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let sig = sig_ob();
        let a = Element::from_monomial(m("o(o(1,2),3)", &sig));
        let b = Element::from_monomial(m("o(1,o(2,3))", &sig));
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.sub(&s).unwrap().is_zero());
        assert_eq!(a.scale(&scalar::ratio(1, 2)).scale(&scalar::int(2)), a);
        let two_a = a.add(&a).unwrap();
        assert_eq!(two_a.scale(&scalar::ratio(1, 2)), a);
        // arity mismatch is rejected
        let c = Element::from_monomial(m("o(1,2)", &sig));
        assert!(a.add(&c).is_err());
    }

    #[test]
    fn leading_under_pathlex() {
        let sig = sig_ob();
        let ord = CompiledOrder::new(&OrderSpec::path_lex(), &sig).unwrap();
        let e = Element::from_terms(
            3,
            vec![
                (scalar::int(1), m("o(o(1,2),3)", &sig)),
                (scalar::int(-1), m("o(1,o(2,3))", &sig)),
            ],
        )
        .unwrap();
        let (lm, lc) = e.leading(&ord).unwrap();
        assert_eq!(lm.to_text(&sig), "o(o(1,2),3)");
        assert_eq!(lc, &scalar::int(1));
        assert!(Element::zero(3).leading(&ord).is_none());
        let monic = e.scale(&scalar::int(-7)).make_monic(&ord).unwrap();
        assert_eq!(monic, e);
    }

    #[test]
    fn weight_components_split_and_sum() {
        let sig = sig_ob();
        let w: WeightAssignment =
            [("o".to_string(), 0u64), ("b".to_string(), 1u64)].into_iter().collect();
        let e = Element::from_terms(
            3,
            vec![
                (scalar::int(1), m("o(o(1,2),3)", &sig)),
                (scalar::int(2), m("b(o(1,2),3)", &sig)),
                (scalar::int(-1), m("b(b(1,2),3)", &sig)),
            ],
        )
        .unwrap();
        let parts = e.weight_components(&w, &sig).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        let mut sum = Element::zero(3);
        for p in parts.values() {
            sum = sum.add(p).unwrap();
        }
        assert_eq!(sum, e);
        // single monomial: one component
        let single = Element::from_monomial(m("b(o(1,2),3)", &sig));
        assert_eq!(single.weight_components(&w, &sig).unwrap().len(), 1);
        // missing generator weight
        let incomplete: WeightAssignment = [("o".to_string(), 0u64)].into_iter().collect();
        assert!(e.weight_components(&incomplete, &sig).is_err());
    }

    #[test]
    fn text_and_json_round_trip() {
        let sig = sig_ob();
        let e = Element::from_terms(
            3,
            vec![
                (scalar::ratio(3, 2), m("o(o(1,2),3)", &sig)),
                (scalar::int(-1), m("b(1,o(2,3))", &sig)),
            ],
        )
        .unwrap();
        assert_eq!(e.to_text(&sig), "3/2*o(o(1,2),3) - b(1,o(2,3))");
        let back = Element::from_json(&e.to_json(&sig), 3, &sig).unwrap();
        assert_eq!(back, e);
        assert_eq!(Element::zero(2).to_text(&sig), "0");
    }

    #[test]
    fn permuted_acts_with_signs() {
        let sig = sig_ob();
        let e = Element::from_monomial(m("b(1,2)", &sig));
        let f = e.permuted(&[2, 1], &sig).unwrap();
        assert_eq!(f, e.neg());
        // group action up to sign on a mixed element
        let e = Element::from_terms(
            3,
            vec![
                (scalar::int(1), m("b(o(1,2),3)", &sig)),
                (scalar::int(1), m("o(b(1,2),3)", &sig)),
            ],
        )
        .unwrap();
        let perm = [3u32, 1, 2];
        let twice = e.permuted(&perm, &sig).unwrap().permuted(&perm, &sig).unwrap();
        let thrice = twice.permuted(&perm, &sig).unwrap();
        assert_eq!(thrice, e); // 3-cycle cubed is the identity
    }

    #[test]
    fn text_round_trips() {
        let sig = sig_ob();
        for text in [
            "o(o(1,2),3) - b(1,o(2,3))",
            "3/2*o(o(1,2),3) - b(1,o(2,3)) + 2*b(o(1,2),3)",
            "-2*b(b(1,3),2)",
            "1",
            "-b(1,2)",
        ] {
            let e = Element::parse_text(text, &sig).unwrap();
            assert_eq!(Element::parse_text(&e.to_text(&sig), &sig).unwrap(), e);
        }
        // canonical printer output parses back verbatim
        let e = Element::from_terms(
            3,
            vec![
                (scalar::ratio(3, 2), m("o(o(1,2),3)", &sig)),
                (scalar::int(-1), m("b(1,o(2,3))", &sig)),
            ],
        )
        .unwrap();
        let back = Element::parse_text(&e.to_text(&sig), &sig).unwrap();
        assert_eq!(back, e);
        // arity mixing and trailing garbage are rejected
        assert!(Element::parse_text("o(1,2) + o(o(1,2),3)", &sig).is_err());
        assert!(Element::parse_text("o(1,2) o(1,2)", &sig).is_err());
        assert!(Element::parse_text("0", &sig).is_err());
    }
}
