//! The presentation library: frozen presets, the almost-composite-product
//! construction, its deformation by a rewriting right-hand side, and the
//! bracket filtration weights.
//!
//! Preset relation texts are stored verbatim as string constants; every
//! derived construction re-prints to the same canonical syntax, so equality
//! of presentations can be checked byte-for-byte on relation texts.

use crate::element::WeightAssignment;
use crate::error::{Error, Result};
use crate::expr::{self, ExprNode, Presentation, RelationExpr};
use crate::sig::{ClassTag, Signature, Symmetry};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Associativity of the commutative product `o`.
pub const ASSOCIATIVITY: &str = "(a1 o a2) o a3 - a1 o (a2 o a3)";

/// The Jacobi identity for the antisymmetric bracket.
pub const JACOBI: &str = "[[a1, a2], a3] + [[a2, a3], a1] + [[a3, a1], a2]";

/// Associativity of a product without symmetry.
pub const ASSOCIATIVITY_M: &str = "m(m(a1, a2), a3) - m(a1, m(a2, a3))";

/// The Leibniz rule: the bracket derives the product.
pub const LEIBNIZ: &str = "[a1 o a2, a3] - a1 o [a2, a3] - [a1, a3] o a2";

/// Right-symmetry of the associator of `m`.
pub const PRE_LIE: &str =
    "m(m(a1, a2), a3) - m(a1, m(a2, a3)) - m(m(a1, a3), a2) + m(a1, m(a3, a2))";

/// The Hertling–Manin relation: the weak Leibniz compatibility between the
/// product and the bracket, homogeneous of arity 4.
pub const HERTLING_MANIN: &str = "[a1 o a2, a3 o a4] - [a1 o a2, a3] o a4 - \
[a1 o a2, a4] o a3 - a1 o [a2, a3 o a4] - a2 o [a1, a3 o a4] + \
(a1 o a3) o [a2, a4] + (a2 o a3) o [a1, a4] + (a2 o a4) o [a1, a3] + \
(a1 o a4) o [a2, a3]";

/// The mixed relation of pre-Lie commutative algebras.
pub const PLC_MIXED: &str = "m(a1 o a2, a3) - m(a1, a3) o a2 - a1 o m(a2, a3)";

/// All monomials of `[a1 o a2, a3 o a4]` rewritten: the Hertling–Manin
/// relation solved for its product-rooted part.
const HERTLING_MANIN_RHS: &str = "[a1 o a2, a3] o a4 + [a1 o a2, a4] o a3 + \
a1 o [a2, a3 o a4] + a2 o [a1, a3 o a4] - (a1 o a3) o [a2, a4] - \
(a2 o a3) o [a1, a4] - (a2 o a4) o [a1, a3] - (a1 o a4) o [a2, a3]";

/// Identifier of a built-in presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PresetId {
    Com,
    Lie,
    Ass,
    Poisson,
    PreLie,
    Fm,
    Plc,
    AlmostComLie,
}

impl PresetId {
    pub const ALL: [PresetId; 8] = [
        PresetId::Com,
        PresetId::Lie,
        PresetId::Ass,
        PresetId::Poisson,
        PresetId::PreLie,
        PresetId::Fm,
        PresetId::Plc,
        PresetId::AlmostComLie,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetId::Com => "com",
            PresetId::Lie => "lie",
            PresetId::Ass => "ass",
            PresetId::Poisson => "poisson",
            PresetId::PreLie => "prelie",
            PresetId::Fm => "fm",
            PresetId::Plc => "plc",
            PresetId::AlmostComLie => "almost(com,lie)",
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresetId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// The frozen presentation behind a preset id.
pub fn preset(id: PresetId) -> Presentation {
    let built = match id {
        PresetId::Com => Presentation::new(
            "com",
            vec![("o", 2, Symmetry::Symmetric)],
            &[ASSOCIATIVITY],
            vec!["commutative associative product".to_string()],
        ),
        PresetId::Lie => Presentation::new(
            "lie",
            vec![("b", 2, Symmetry::Antisymmetric)],
            &[JACOBI],
            vec!["Lie bracket".to_string()],
        ),
        PresetId::Ass => Presentation::new(
            "ass",
            vec![("m", 2, Symmetry::NoSymmetry)],
            &[ASSOCIATIVITY_M],
            vec!["associative product".to_string()],
        ),
        PresetId::Poisson => Presentation::new(
            "poisson",
            vec![("o", 2, Symmetry::Symmetric), ("b", 2, Symmetry::Antisymmetric)],
            &[ASSOCIATIVITY, JACOBI, LEIBNIZ],
            vec!["commutative product and Lie bracket, bracket a derivation".to_string()],
        ),
        PresetId::PreLie => Presentation::new(
            "prelie",
            vec![("m", 2, Symmetry::NoSymmetry)],
            &[PRE_LIE],
            vec!["product with right-symmetric associator".to_string()],
        ),
        PresetId::Fm => Presentation::new(
            "fm",
            vec![("o", 2, Symmetry::Symmetric), ("b", 2, Symmetry::Antisymmetric)],
            &[ASSOCIATIVITY, JACOBI, HERTLING_MANIN],
            vec![
                "F-manifold operad: commutative product and Lie bracket \
                 coupled by the Hertling–Manin relation"
                    .to_string(),
            ],
        ),
        PresetId::Plc => Presentation::new(
            "plc",
            vec![("o", 2, Symmetry::Symmetric), ("m", 2, Symmetry::NoSymmetry)],
            &[ASSOCIATIVITY, PRE_LIE, PLC_MIXED],
            vec![
                "pre-Lie commutative operad: commutative product and \
                 pre-Lie product with a mixed relation"
                    .to_string(),
            ],
        ),
        PresetId::AlmostComLie => {
            return almost_composite(&preset(PresetId::Com), &preset(PresetId::Lie))
                .expect("com and lie have disjoint generators");
        }
    };
    built.expect("frozen preset text parses")
}

/// A rewriting right-hand side: for selected monomials `alpha(beta_1, ...,
/// beta_k)` (outer generator from the second presentation, all slots filled
/// by generators of the first), an image expression all of whose terms are
/// rooted at a first-presentation generator.  Images are stored as relation
/// text and parsed against the merged signature on use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RhsMap {
    entries: BTreeMap<(String, Vec<String>), String>,
}

impl RhsMap {
    /// The empty map: every selected monomial is simply set to zero.
    pub fn zero() -> Self {
        RhsMap::default()
    }

    pub fn set(&mut self, alpha: &str, betas: &[&str], image: &str) -> &mut Self {
        let key = (
            alpha.to_string(),
            betas.iter().map(|b| b.to_string()).collect(),
        );
        self.entries.insert(key, image.to_string());
        self
    }

    pub fn get(&self, alpha: &str, betas: &[String]) -> Option<&str> {
        let key = (alpha.to_string(), betas.to_vec());
        self.entries.get(&key).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    fn keys(&self) -> impl Iterator<Item = &(String, Vec<String>)> {
        self.entries.keys()
    }

    fn key_text(alpha: &str, betas: &[String]) -> String {
        format!("{alpha}({})", betas.join(","))
    }
}

/// The deformation sending `[a1 o a2, a3 o a4]` to the product-rooted side
/// of the Hertling–Manin relation.
pub fn hertling_manin_rhs() -> RhsMap {
    let mut f = RhsMap::zero();
    f.set("b", &["o", "o"], HERTLING_MANIN_RHS);
    f
}

/// The almost composite product: generators and relations of both inputs
/// plus, for every second-presentation generator `alpha` and every tuple of
/// first-presentation generators `beta_i`, the relation
/// `alpha(beta_1(...), ..., beta_k(...)) = 0`.
pub fn almost_composite(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    with_rewriting_rhs(p, q, &RhsMap::zero())
}

/// The almost composite product with the selected monomials rewritten to
/// the images of `f` instead of zero.  With `f` empty this is exactly
/// [`almost_composite`].
pub fn with_rewriting_rhs(p: &Presentation, q: &Presentation, f: &RhsMap) -> Result<Presentation> {
    for name in q.generator_names() {
        if p.generator_names().contains(&name) {
            return Err(Error::GeneratorClash(name));
        }
    }
    let mut sig = Signature::new(Vec::new())?;
    for s in p.signature().symbols() {
        sig.push(&s.name, s.arity, s.symmetry, s.filtration_weight, ClassTag::X)?;
    }
    for s in q.signature().symbols() {
        sig.push(&s.name, s.arity, s.symmetry, s.filtration_weight, ClassTag::Y)?;
    }

    let mut relations = Vec::new();
    for r in p.relations() {
        relations.push(RelationExpr::parse(&r.print(p.signature()), &sig)?);
    }
    for r in q.relations() {
        relations.push(RelationExpr::parse(&r.print(q.signature()), &sig)?);
    }

    let p_syms = p.signature().symbols();
    let mut consumed = 0usize;
    for alpha in q.signature().symbols() {
        let k = alpha.arity;
        let mut idx = vec![0usize; k];
        loop {
            let mut parts: Vec<expr::Terms> = Vec::with_capacity(k);
            let mut beta_names: Vec<String> = Vec::with_capacity(k);
            let mut next_arg = 1u32;
            for &bi in &idx {
                let beta = &p_syms[bi];
                beta_names.push(beta.name.clone());
                let args: Vec<expr::Terms> =
                    (0..beta.arity as u32).map(|t| expr::arg(next_arg + t)).collect();
                next_arg += beta.arity as u32;
                let arg_refs: Vec<&expr::Terms> = args.iter().collect();
                parts.push(expr::apply(&sig, &beta.name, &arg_refs)?);
            }
            let part_refs: Vec<&expr::Terms> = parts.iter().collect();
            let lhs = expr::apply(&sig, &alpha.name, &part_refs)?;
            let n = (next_arg - 1) as usize;
            let terms = match f.get(&alpha.name, &beta_names) {
                None => lhs,
                Some(text) => {
                    consumed += 1;
                    let key = RhsMap::key_text(&alpha.name, &beta_names);
                    let image = RelationExpr::parse(text, &sig)?;
                    if image.arity() != n {
                        return Err(Error::RhsArityMismatch {
                            key,
                            expected: n,
                            got: image.arity(),
                        });
                    }
                    for (_, node) in image.terms() {
                        let root = match node {
                            ExprNode::Op(s, _) => sig.get(*s),
                            ExprNode::Arg(_) => {
                                return Err(Error::RhsRootNotInX {
                                    key,
                                    root: "bare argument".to_string(),
                                })
                            }
                        };
                        if root.class_tag != ClassTag::X {
                            return Err(Error::RhsRootNotInX {
                                key,
                                root: root.name.clone(),
                            });
                        }
                    }
                    expr::sub(lhs, image.terms().to_vec())
                }
            };
            relations.push(RelationExpr::from_terms(terms)?);
            // odometer over tuples of first-presentation generators
            let mut pos = k;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < p_syms.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    if consumed != f.len() {
        let orphan = f
            .keys()
            .find(|(alpha, betas)| {
                let outer_ok = q
                    .signature()
                    .symbols()
                    .iter()
                    .any(|s| s.name == *alpha && s.arity == betas.len());
                let inner_ok = betas
                    .iter()
                    .all(|b| p_syms.iter().any(|s| s.name == *b));
                !(outer_ok && inner_ok)
            })
            .map(|(alpha, betas)| RhsMap::key_text(alpha, betas))
            .unwrap_or_default();
        return Err(Error::Invalid(format!(
            "rewriting right-hand side for `{orphan}` matches no generator tuple"
        )));
    }

    let name = format!("almost({},{})", p.name, q.name);
    let mut notes = vec![format!(
        "almost composite of `{}` and `{}`",
        p.name, q.name
    )];
    if !f.is_empty() {
        notes.push("selected mixed monomials rewritten instead of set to zero".to_string());
    }
    Ok(Presentation::from_parts(&name, sig, relations, notes))
}

/// Weight assignment of the bracket filtration: the unique antisymmetric
/// binary generator gets weight 1, every other generator weight 0.
pub fn lie_filtration_weights(p: &Presentation) -> Result<WeightAssignment> {
    bracket_weights(p.signature(), &p.name)
}

/// Signature-level form of [`lie_filtration_weights`]; `context` names the
/// presentation in the error.
pub fn bracket_weights(sig: &Signature, context: &str) -> Result<WeightAssignment> {
    let brackets: Vec<&str> = sig
        .symbols()
        .iter()
        .filter(|s| s.arity == 2 && s.symmetry == Symmetry::Antisymmetric)
        .map(|s| s.name.as_str())
        .collect();
    let [bracket] = brackets[..] else {
        return Err(Error::NoBracketGenerator(context.to_string()));
    };
    Ok(sig
        .symbols()
        .iter()
        .map(|s| (s.name.clone(), u64::from(s.name == bracket)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::ShufflePresentation;
    use crate::order::OrderSpec;
    use crate::rewrite::{RewriteSystem, DEFAULT_STEP_LIMIT};

    fn dims_of(p: &Presentation, order: OrderSpec, max_arity: usize) -> Vec<u64> {
        let sp = ShufflePresentation::from_presentation(p).unwrap();
        let mut system =
            RewriteSystem::from_presentation(&sp, order, max_arity, DEFAULT_STEP_LIMIT).unwrap();
        system.complete().unwrap();
        system.dims(max_arity).unwrap()
    }

    #[test]
    fn preset_ids_round_trip() {
        for id in PresetId::ALL {
            assert_eq!(id.as_str().parse::<PresetId>().unwrap(), id);
        }
        assert!(matches!(
            "comm".parse::<PresetId>(),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn preset_shapes_match_their_definitions() {
        let com = preset(PresetId::Com);
        assert_eq!(com.signature().len(), 1);
        assert_eq!(com.relations().len(), 1);

        let fm = preset(PresetId::Fm);
        let syms = fm.signature().symbols();
        assert_eq!(
            syms.iter()
                .map(|s| (s.name.as_str(), s.arity, s.symmetry))
                .collect::<Vec<_>>(),
            vec![
                ("o", 2, Symmetry::Symmetric),
                ("b", 2, Symmetry::Antisymmetric)
            ]
        );
        assert_eq!(
            fm.relations().iter().map(|r| r.arity()).collect::<Vec<_>>(),
            vec![3, 3, 4]
        );

        let plc = preset(PresetId::Plc);
        assert_eq!(plc.signature().len(), 2);
        assert_eq!(plc.relations().len(), 3);
        assert_eq!(
            plc.relation_texts(),
            vec![ASSOCIATIVITY, PRE_LIE, PLC_MIXED]
        );
    }

    #[test]
    fn every_preset_completes_at_low_arity() {
        for id in PresetId::ALL {
            let p = preset(id);
            let sp = ShufflePresentation::from_presentation(&p).unwrap();
            let mut system = RewriteSystem::from_presentation(
                &sp,
                OrderSpec::path_lex(),
                4,
                DEFAULT_STEP_LIMIT,
            )
            .unwrap();
            system.complete().unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn almost_com_lie_adds_one_arity_four_relation() {
        let a = preset(PresetId::AlmostComLie);
        assert_eq!(a.name, "almost(com,lie)");
        assert_eq!(
            a.relation_texts(),
            vec![ASSOCIATIVITY, JACOBI, "[a1 o a2, a3 o a4]"]
        );
        let tags: Vec<ClassTag> = a.signature().symbols().iter().map(|s| s.class_tag).collect();
        assert_eq!(tags, vec![ClassTag::X, ClassTag::Y]);
    }

    #[test]
    fn almost_com_lie_dims_match_rooted_tree_counts() {
        let a = preset(PresetId::AlmostComLie);
        assert_eq!(
            dims_of(&a, OrderSpec::path_lex(), 5),
            vec![1, 2, 9, 64, 625]
        );
    }

    #[test]
    fn zero_map_reproduces_the_almost_composite() {
        let com = preset(PresetId::Com);
        let lie = preset(PresetId::Lie);
        let direct = almost_composite(&com, &lie).unwrap();
        let via_map = with_rewriting_rhs(&com, &lie, &RhsMap::zero()).unwrap();
        assert_eq!(direct.to_json(), via_map.to_json());
        let sp_direct = ShufflePresentation::from_presentation(&direct).unwrap();
        let sp_map = ShufflePresentation::from_presentation(&via_map).unwrap();
        let texts = |sp: &ShufflePresentation| {
            sp.relations()
                .iter()
                .map(|e| e.to_text(sp.signature()))
                .collect::<Vec<_>>()
        };
        assert_eq!(texts(&sp_direct), texts(&sp_map));
    }

    #[test]
    fn hertling_manin_map_recovers_the_fm_relations() {
        let com = preset(PresetId::Com);
        let lie = preset(PresetId::Lie);
        let deformed = with_rewriting_rhs(&com, &lie, &hertling_manin_rhs()).unwrap();
        assert_eq!(deformed.relation_texts(), preset(PresetId::Fm).relation_texts());
        let gens = |p: &Presentation| {
            p.signature()
                .symbols()
                .iter()
                .map(|s| (s.name.clone(), s.arity, s.symmetry))
                .collect::<Vec<_>>()
        };
        assert_eq!(gens(&deformed), gens(&preset(PresetId::Fm)));
    }

    #[test]
    fn one_generator_each_side_yields_one_new_relation() {
        let com = preset(PresetId::Com);
        let com2 = Presentation::new(
            "com2",
            vec![("p", 2, Symmetry::Symmetric)],
            &["p(p(a1, a2), a3) - p(a1, p(a2, a3))"],
            Vec::new(),
        )
        .unwrap();
        let a = almost_composite(&com, &com2).unwrap();
        assert_eq!(a.relations().len(), 3);
        assert_eq!(a.relation_texts()[2], "p(a1 o a2, a3 o a4)");
        assert_eq!(a.relations()[2].arity(), 4);
    }

    #[test]
    fn rhs_map_validation_rejects_bad_images() {
        let com = preset(PresetId::Com);
        let lie = preset(PresetId::Lie);
        // bracket-rooted image term
        let mut bad_root = RhsMap::zero();
        bad_root.set("b", &["o", "o"], "[[a1, a2], a3 o a4]");
        assert!(matches!(
            with_rewriting_rhs(&com, &lie, &bad_root),
            Err(Error::RhsRootNotInX { root, .. }) if root == "b"
        ));
        // wrong arity image
        let mut bad_arity = RhsMap::zero();
        bad_arity.set("b", &["o", "o"], "(a1 o a2) o a3");
        assert!(matches!(
            with_rewriting_rhs(&com, &lie, &bad_arity),
            Err(Error::RhsArityMismatch { expected: 4, got: 3, .. })
        ));
        // key that matches no tuple
        let mut orphan = RhsMap::zero();
        orphan.set("b", &["o", "b"], "(a1 o a2) o (a3 o a4)");
        assert!(matches!(
            with_rewriting_rhs(&com, &lie, &orphan),
            Err(Error::Invalid(_))
        ));
        // generator name clash
        assert!(matches!(
            almost_composite(&com, &preset(PresetId::Poisson)),
            Err(Error::GeneratorClash(name)) if name == "o"
        ));
    }

    #[test]
    fn bracket_filtration_weights() {
        let w = lie_filtration_weights(&preset(PresetId::Fm)).unwrap();
        let expected: WeightAssignment =
            [("o".to_string(), 0), ("b".to_string(), 1)].into_iter().collect();
        assert_eq!(w, expected);
        assert_eq!(
            lie_filtration_weights(&preset(PresetId::Poisson)).unwrap(),
            expected
        );
        assert!(matches!(
            lie_filtration_weights(&preset(PresetId::Com)),
            Err(Error::NoBracketGenerator(name)) if name == "com"
        ));

        // the polarized pre-Lie signature carries the same weights
        let pl = preset(PresetId::PreLie);
        let pol =
            crate::polarize::Polarization::new(pl.signature(), &[("m", "o", "b")]).unwrap();
        assert_eq!(
            bracket_weights(pol.target().origin(), "polarized prelie").unwrap(),
            expected
        );
    }

    #[test]
    fn dims_are_stable_under_precedence_change() {
        for id in PresetId::ALL {
            let p = preset(id);
            let names: Vec<String> = p
                .signature()
                .symbols()
                .iter()
                .map(|s| s.name.clone())
                .collect();
            let forward = OrderSpec::PathLex {
                precedence: Some(names.clone()),
            };
            let reversed = OrderSpec::PathLex {
                precedence: Some(names.into_iter().rev().collect()),
            };
            let max = 4;
            assert_eq!(
                dims_of(&p, forward, max),
                dims_of(&p, reversed, max),
                "preset {id}"
            );
        }
    }

    #[test]
    fn poisson_dims_equal_ass_dims() {
        let poisson = dims_of(&preset(PresetId::Poisson), OrderSpec::path_lex(), 5);
        let ass = dims_of(&preset(PresetId::Ass), OrderSpec::path_lex(), 5);
        assert_eq!(poisson, ass);
        assert_eq!(poisson, vec![1, 2, 6, 24, 120]);
    }
}
