//! Named end-to-end verifications.  Each check runs a self-contained
//! computation — completion, reduction, rank or series arithmetic — and
//! returns a [`CheckReport`] with witnesses, dimension tables, the order
//! convention used, and content fingerprints of the presets involved.

use crate::catalog::{
    self, hertling_manin_rhs, preset, with_rewriting_rhs, PresetId, RhsMap,
};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::expand::{expand_instance, expand_orbit, ShufflePresentation};
use crate::expr::{self, Presentation, RelationExpr, Terms};
use crate::order::OrderSpec;
use crate::polarize::Polarization;
use crate::rewrite::{RewriteSystem, DEFAULT_STEP_LIMIT};
use crate::sig::ShuffleSignature;
use crate::span::suboperad_dims;
use crate::{monomial::ShuffleTreeMonomial, series};
use itertools::Itertools;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// The symmetrized product and commutator bracket of a right-symmetric
/// product satisfy this arity-3 relation.
pub const R1: &str = "(a1 o a2) o a3 - a1 o (a2 o a3) - a1 o [a2, a3] - \
[a1, a2] o a3 - 2*[a1, a3] o a2 + [a1, a2 o a3] + [a1 o a2, a3] + \
[[a1, a3], a2]";

/// The arity-4 consequence of [`R1`], obtained as the S-polynomial of the
/// relation with itself.  Transcribed term by term; the bracket count per
/// term ranges over 1, 2, 3.
pub const R2: &str = "-[a1 o a2, a3] o a4 - [a1 o a2, a4] o a3 + \
[a1, a4] o (a2 o a3) + [a1, a3] o (a2 o a4) - [a1, a3 o a4] o a2 + \
[a1 o a2, a3 o a4] + a1 o ([a2, a3] o a4) + a1 o ([a2, a4] o a3) - \
a1 o [a2, a3 o a4] + [[a1, a3], a2] o a4 + [[a1, a4], a2] o a3 + \
2*[[a1, a4], a3] o a2 + [a1, [a2, a3]] o a4 + [a1, [a2, a4]] o a3 + \
[a1, a4] o [a2, a3] + [a1, a3] o [a2, a4] + [a1, [a3, a4]] o a2 - \
[[a1, a4], a2 o a3] - [[a1, a3], a2 o a4] - [a1, [a2, a3] o a4] - \
[a1, [a2, a4] o a3] - 2*[[[a1, a4], a3], a2] - [[a1, a4], [a2, a3]] - \
[[a1, a3], [a2, a4]] - [[a1, [a3, a4]], a2]";

/// The single-bracket part of [`R2`]: the arity-4 relation that survives in
/// the associated graded object, equivalent to the Hertling–Manin relation
/// modulo associativity.
pub const GR9: &str = "-[a1 o a2, a3] o a4 - [a1 o a2, a4] o a3 + \
[a1, a4] o (a2 o a3) + [a1, a3] o (a2 o a4) - [a1, a3 o a4] o a2 + \
[a1 o a2, a3 o a4] + a1 o ([a2, a3] o a4) + a1 o ([a2, a4] o a3) - \
a1 o [a2, a3 o a4]";

pub const CHECK_NAMES: [&str; 8] = [
    "r1-in-pl",
    "r2-in-pl",
    "gr-lemma",
    "sandwich",
    "plc-proposition",
    "conjecture-probe",
    "almost-distributive",
    "series-chain",
];

/// Tunables shared by the checks; `None` fields fall back to the per-check
/// defaults documented on each function.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub max_arity: Option<usize>,
    pub step_limit: u64,
    /// Truncation order for the series check.
    pub series_order: usize,
    /// Order override for the checks that admit one; must be admissible.
    pub order: Option<OrderSpec>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_arity: None,
            step_limit: DEFAULT_STEP_LIMIT,
            series_order: series::DEFAULT_ORDER,
            order: None,
        }
    }
}

impl CheckConfig {
    fn order_spec(&self) -> OrderSpec {
        self.order.clone().unwrap_or_else(OrderSpec::path_lex)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub witnesses: Vec<Witness>,
    pub dims: BTreeMap<String, Vec<u64>>,
    /// Wall-clock milliseconds.
    pub timing: u64,
    /// The order convention the computations ran under.
    pub order: serde_json::Value,
    /// Content hashes of the presets involved (over generator and relation
    /// texts).
    pub fingerprints: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Plain-text rendering: status line, witnesses, dimension rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "info",
        };
        out.push_str(&format!("{}: {} ({} ms)\n", self.name, status, self.timing));
        for w in &self.witnesses {
            out.push_str(&format!("  {}: {}\n", w.label, w.value));
        }
        for (label, row) in &self.dims {
            out.push_str(&format!(
                "  dims {}: {}\n",
                label,
                row.iter().map(u64::to_string).join(",")
            ));
        }
        out
    }
}

struct ReportBuilder {
    name: &'static str,
    status: CheckStatus,
    witnesses: Vec<Witness>,
    dims: BTreeMap<String, Vec<u64>>,
    fingerprints: BTreeMap<String, String>,
    order: OrderSpec,
    started: Instant,
}

impl ReportBuilder {
    fn new(name: &'static str, order: OrderSpec) -> Self {
        ReportBuilder {
            name,
            status: CheckStatus::Pass,
            witnesses: Vec::new(),
            dims: BTreeMap::new(),
            fingerprints: BTreeMap::new(),
            order,
            started: Instant::now(),
        }
    }

    fn witness(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.witnesses.push(Witness {
            label: label.into(),
            value: value.into(),
        });
    }

    fn fail(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.status = CheckStatus::Fail;
        self.witness(label, value);
    }

    fn dims_row(&mut self, label: impl Into<String>, row: Vec<u64>) {
        self.dims.insert(label.into(), row);
    }

    fn fingerprint(&mut self, id: PresetId) {
        self.fingerprints
            .insert(id.as_str().to_string(), preset(id).fingerprint());
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name.to_string(),
            status: self.status,
            witnesses: self.witnesses,
            dims: self.dims,
            timing: self.started.elapsed().as_millis() as u64,
            order: serde_json::to_value(&self.order).expect("order serializes"),
            fingerprints: self.fingerprints,
        }
    }
}

/// Runs the named check.  Unknown names error; check *failures* are
/// reported, not errors.
pub fn run_check(name: &str, cfg: &CheckConfig) -> Result<CheckReport> {
    if let Some(order) = &cfg.order {
        if !order.is_admissible() {
            return Err(Error::Invalid(
                "checks need an admissible order".to_string(),
            ));
        }
    }
    match name {
        "r1-in-pl" => check_r1_in_pl(cfg),
        "r2-in-pl" => check_r2_in_pl(cfg),
        "gr-lemma" => check_gr_lemma(cfg),
        "sandwich" => check_sandwich(cfg),
        "plc-proposition" => check_plc_proposition(cfg),
        "conjecture-probe" => conjecture_probe(cfg),
        "almost-distributive" => check_almost_distributive(cfg),
        "series-chain" => check_series_chain(cfg),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

fn completed_system(
    p: &Presentation,
    order: OrderSpec,
    truncation: usize,
    step_limit: u64,
) -> Result<RewriteSystem> {
    let sp = ShufflePresentation::from_presentation(p)?;
    let mut system = RewriteSystem::from_presentation(&sp, order, truncation, step_limit)?;
    system.complete()?;
    Ok(system)
}

/// The polarization of the canonical right-symmetric product: `o` the
/// symmetrized product, `b` the commutator bracket.
fn pl_polarization() -> Polarization {
    Polarization::new(preset(PresetId::PreLie).signature(), &[("m", "o", "b")])
        .expect("the right-symmetric product polarizes")
}

/// Reduces every orbit instance of `rel` (mapped through `transform`) in
/// `system`; returns the first nonzero normal form, if any, with its index.
fn orbit_reduces_to_zero(
    system: &RewriteSystem,
    rel: &RelationExpr,
    expansion_sig: &ShuffleSignature,
    transform: impl Fn(&Element) -> Element,
) -> Result<(usize, Option<(usize, Element)>)> {
    let orbit = expand_orbit(rel, expansion_sig)?;
    let total = orbit.len();
    for (i, inst) in orbit.iter().enumerate() {
        let nf = system.reduce(&transform(inst))?;
        if !nf.is_zero() {
            return Ok((total, Some((i, nf))));
        }
    }
    Ok((total, None))
}

/// The text of [`R1`] rewritten in the right-symmetric product alone:
/// `x o y` becomes `m(x, y) + m(y, x)` and `[x, y]` becomes
/// `m(x, y) - m(y, x)`.
pub fn depolarized_r1_text() -> String {
    let pl = preset(PresetId::PreLie);
    let sig = pl.signature();
    let prod = |x: &Terms, y: &Terms| -> Terms {
        expr::add(
            expr::apply(sig, "m", &[x, y]).expect("binary m"),
            expr::apply(sig, "m", &[y, x]).expect("binary m"),
        )
    };
    let brak = |x: &Terms, y: &Terms| -> Terms {
        expr::commutator(sig, "m", x, y).expect("binary m")
    };
    let (a1, a2, a3) = (expr::arg(1), expr::arg(2), expr::arg(3));
    let mut acc = prod(&prod(&a1, &a2), &a3);
    acc = expr::sub(acc, prod(&a1, &prod(&a2, &a3)));
    acc = expr::sub(acc, prod(&a1, &brak(&a2, &a3)));
    acc = expr::sub(acc, prod(&brak(&a1, &a2), &a3));
    acc = expr::sub(acc, expr::scale(prod(&brak(&a1, &a3), &a2), &crate::scalar::int(2)));
    acc = expr::add(acc, brak(&a1, &prod(&a2, &a3)));
    acc = expr::add(acc, brak(&prod(&a1, &a2), &a3));
    acc = expr::add(acc, brak(&brak(&a1, &a3), &a2));
    RelationExpr::from_terms(acc)
        .expect("nonzero multilinear relation")
        .print(sig)
}

fn check_r1_with_text(cfg: &CheckConfig, text: &str) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let mut rb = ReportBuilder::new("r1-in-pl", order.clone());
    rb.fingerprint(PresetId::PreLie);
    let system = completed_system(&preset(PresetId::PreLie), order, 3, cfg.step_limit)?;
    let pol = pl_polarization();
    let rel = RelationExpr::parse(text, pol.target().origin())?;
    let (total, bad) =
        orbit_reduces_to_zero(&system, &rel, pol.target(), |e| pol.depolarize(e))?;
    rb.witness("orbit instances", total.to_string());
    match bad {
        None => rb.witness("normal form", "0"),
        Some((i, nf)) => rb.fail(
            format!("instance {i} normal form"),
            nf.to_text(system.signature()),
        ),
    }
    Ok(rb.finish())
}

/// The transcribed arity-3 relation holds in the completed right-symmetric
/// quotient: every orbit instance, with the product and bracket expanded,
/// reduces to zero.
pub fn check_r1_in_pl(cfg: &CheckConfig) -> Result<CheckReport> {
    check_r1_with_text(cfg, R1)
}

/// The transcribed arity-4 relation holds in the quotient, and the engine
/// regenerates its content: completing the arity-3 relation alone already
/// forces it, and the self-S-polynomials reduce to zero.
pub fn check_r2_in_pl(cfg: &CheckConfig) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let mut rb = ReportBuilder::new("r2-in-pl", order.clone());
    rb.fingerprint(PresetId::PreLie);
    let pl_system = completed_system(&preset(PresetId::PreLie), order.clone(), 4, cfg.step_limit)?;
    let pol = pl_polarization();
    let polarized_sig_origin = pol.target().origin();

    // Leg 1: the transcription, expanded to the product alone, vanishes.
    let r2 = RelationExpr::parse(R2, polarized_sig_origin)?;
    let (total, bad) =
        orbit_reduces_to_zero(&pl_system, &r2, pol.target(), |e| pol.depolarize(e))?;
    rb.witness("orbit instances", total.to_string());
    match bad {
        None => rb.witness("transcription normal form", "0"),
        Some((i, nf)) => rb.fail(
            format!("transcription instance {i} normal form"),
            nf.to_text(pl_system.signature()),
        ),
    }

    // A system over the polarized generators presented by the arity-3
    // relation alone.
    let polarized_pl = Presentation::new(
        "polarized-pl",
        vec![
            ("o", 2, crate::sig::Symmetry::Symmetric),
            ("b", 2, crate::sig::Symmetry::Antisymmetric),
        ],
        &[R1],
        Vec::new(),
    )?;

    // Leg 2: the S-polynomials of the arity-3 relation with itself are
    // nonzero and already hold in the quotient.
    let sp = ShufflePresentation::from_presentation(&polarized_pl)?;
    let mut raw = RewriteSystem::from_presentation(&sp, order.clone(), 4, cfg.step_limit)?;
    raw.seed_rules()?;
    let mut s_polys: Vec<Element> = Vec::new();
    for i in 0..raw.rules().len() {
        for j in i..raw.rules().len() {
            for pair in raw.critical_pairs_between(i, j) {
                let s = raw.s_polynomial(&pair)?;
                if !s.is_zero() {
                    s_polys.push(s);
                }
            }
        }
    }
    rb.witness("nonzero self-S-polynomials", s_polys.len().to_string());
    if s_polys.is_empty() {
        rb.fail("self-overlap", "no nonzero S-polynomial was generated");
    }
    for (i, s) in s_polys.iter().enumerate() {
        let nf = pl_system.reduce(&pol.depolarize(s))?;
        if !nf.is_zero() {
            rb.fail(
                format!("S-polynomial {i} normal form"),
                nf.to_text(pl_system.signature()),
            );
        }
    }

    // Leg 3: completing the arity-3 relation alone regenerates the content
    // of the transcription — it reduces to zero there...
    let completed_polarized =
        completed_system(&polarized_pl, order.clone(), 4, cfg.step_limit)?;
    let (_, bad) = orbit_reduces_to_zero(&completed_polarized, &r2, pol.target(), Element::clone)?;
    match bad {
        None => rb.witness("transcription modulo completed arity-3 relation", "0"),
        Some((i, nf)) => rb.fail(
            format!("instance {i} modulo completed arity-3 relation"),
            nf.to_text(completed_polarized.signature()),
        ),
    }

    // ... and the closure has the same dimensions as the quotient itself.
    let polarized_dims = completed_polarized.dims(4)?;
    let pl_dims = pl_system.dims(4)?;
    rb.dims_row("polarized closure", polarized_dims.clone());
    rb.dims_row("right-symmetric quotient", pl_dims.clone());
    if polarized_dims != pl_dims {
        rb.fail(
            "dimension comparison",
            "the completed arity-3 relation does not present the quotient",
        );
    }
    Ok(rb.finish())
}

/// The associated-graded content of the two transcriptions: the weight-0
/// part of the arity-3 relation is associativity, the weight-1 part of the
/// arity-4 relation is the reduced 9-term relation, and the latter generates
/// the Hertling–Manin relation (and vice versa) modulo associativity and
/// Jacobi at arity 4.
pub fn check_gr_lemma(cfg: &CheckConfig) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let mut rb = ReportBuilder::new("gr-lemma", order.clone());
    rb.fingerprint(PresetId::Fm);
    let fm = preset(PresetId::Fm);
    let sig = fm.signature();
    let shuffle_sig = ShuffleSignature::from_signature(sig)?;
    let weights = catalog::lie_filtration_weights(&fm)?;

    // Leg 1: weight-0 part of the arity-3 relation vs associativity, up to
    // nonzero scalar and argument permutation.
    let r1 = RelationExpr::parse(R1, sig)?;
    let r1_instance = expand_instance(&r1, &[1, 2, 3], &shuffle_sig)?;
    let parts = r1_instance.weight_components(&weights, &shuffle_sig)?;
    let weight0 = parts.get(&0).cloned().unwrap_or_else(|| Element::zero(3));
    let assoc = RelationExpr::parse(catalog::ASSOCIATIVITY, sig)?;
    let mut matched = None;
    for perm in (1..=3u32).permutations(3) {
        let candidate = expand_instance(&assoc, &perm, &shuffle_sig)?;
        if candidate.normalized_up_to_scalar() == weight0.normalized_up_to_scalar() {
            matched = Some(perm);
            break;
        }
    }
    match matched {
        Some(perm) => rb.witness(
            "weight-0 part is associativity under argument permutation",
            format!("{perm:?}"),
        ),
        None => rb.fail(
            "weight-0 part of the arity-3 relation",
            format!(
                "not proportional to any associativity instance: {}",
                weight0.to_text(&shuffle_sig)
            ),
        ),
    }

    // Leg 2: weight-1 part of the arity-4 relation vs the 9-term relation.
    let r2 = RelationExpr::parse(R2, sig)?;
    let r2_instance = expand_instance(&r2, &[1, 2, 3, 4], &shuffle_sig)?;
    let parts = r2_instance.weight_components(&weights, &shuffle_sig)?;
    let weight1 = parts.get(&1).cloned().unwrap_or_else(|| Element::zero(4));
    let gr9 = RelationExpr::parse(GR9, sig)?;
    let gr9_instance = expand_instance(&gr9, &[1, 2, 3, 4], &shuffle_sig)?;
    if weight1 == gr9_instance {
        rb.witness("weight-1 part equals the 9-term relation", "exact");
    } else {
        rb.fail(
            "weight-1 part of the arity-4 relation",
            format!("differs from the 9-term relation: {}", weight1.to_text(&shuffle_sig)),
        );
    }

    // Leg 3 forward: the 9-term relation vanishes in the completed
    // presentation with the Hertling–Manin relation.
    let fm_system = completed_system(&fm, order.clone(), 4, cfg.step_limit)?;
    let (_, bad) = orbit_reduces_to_zero(&fm_system, &gr9, &shuffle_sig, Element::clone)?;
    match bad {
        None => rb.witness("9-term relation modulo Hertling–Manin presentation", "0"),
        Some((i, nf)) => rb.fail(
            format!("9-term instance {i} modulo Hertling–Manin presentation"),
            nf.to_text(fm_system.signature()),
        ),
    }

    // Leg 3 backward: the Hertling–Manin relation vanishes modulo
    // {associativity, Jacobi, 9-term relation}.
    let gr_presented = Presentation::new(
        "gr-quotient",
        vec![
            ("o", 2, crate::sig::Symmetry::Symmetric),
            ("b", 2, crate::sig::Symmetry::Antisymmetric),
        ],
        &[catalog::ASSOCIATIVITY, catalog::JACOBI, GR9],
        Vec::new(),
    )?;
    let gr_system = completed_system(&gr_presented, order.clone(), 4, cfg.step_limit)?;
    let hm = RelationExpr::parse(catalog::HERTLING_MANIN, sig)?;
    let (_, bad) = orbit_reduces_to_zero(&gr_system, &hm, &shuffle_sig, Element::clone)?;
    match bad {
        None => rb.witness("Hertling–Manin relation modulo 9-term presentation", "0"),
        Some((i, nf)) => rb.fail(
            format!("Hertling–Manin instance {i} modulo 9-term presentation"),
            nf.to_text(gr_system.signature()),
        ),
    }

    // Informational: the same reduction without the Jacobi relation.
    let no_jacobi = Presentation::new(
        "gr-quotient-no-jacobi",
        vec![
            ("o", 2, crate::sig::Symmetry::Symmetric),
            ("b", 2, crate::sig::Symmetry::Antisymmetric),
        ],
        &[catalog::ASSOCIATIVITY, GR9],
        Vec::new(),
    )?;
    let no_jacobi_system = completed_system(&no_jacobi, order, 4, cfg.step_limit)?;
    let (_, bad) = orbit_reduces_to_zero(&no_jacobi_system, &hm, &shuffle_sig, Element::clone)?;
    rb.witness(
        "informational: Hertling–Manin without Jacobi",
        match bad {
            None => "reduces to 0".to_string(),
            Some((i, nf)) => format!(
                "instance {i} does not reduce to 0: {}",
                nf.to_text(no_jacobi_system.signature())
            ),
        },
    );
    Ok(rb.finish())
}

/// Dimensions of the three quotients agree with `n^(n-1)` up to the
/// requested arity (default 5).
pub fn check_sandwich(cfg: &CheckConfig) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let n = cfg.max_arity.unwrap_or(5);
    let mut rb = ReportBuilder::new("sandwich", order.clone());
    for id in [PresetId::PreLie, PresetId::AlmostComLie, PresetId::Fm] {
        rb.fingerprint(id);
    }
    let expected: Vec<u64> = (1..=n as u64).map(|k| k.pow((k - 1) as u32)).collect();
    rb.dims_row("expected", expected.clone());
    for id in [PresetId::PreLie, PresetId::AlmostComLie, PresetId::Fm] {
        let system = completed_system(&preset(id), order.clone(), n, cfg.step_limit)?;
        let dims = system.dims(n)?;
        rb.dims_row(id.as_str(), dims.clone());
        if let Some(k) = (0..n).find(|&k| dims[k] != expected[k]) {
            rb.fail(
                format!("{id} dimension mismatch"),
                format!("arity {}: {} vs expected {}", k + 1, dims[k], expected[k]),
            );
        }
    }
    Ok(rb.finish())
}

/// In the completed pre-Lie commutative quotient, the commutator bracket of
/// the right-symmetric product satisfies the Jacobi identity and, with the
/// commutative product, the arity-4 compatibility identity; the auxiliary
/// operation `P_a(b, c)` collapses to its arity-3 closed form.
pub fn check_plc_proposition(cfg: &CheckConfig) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let mut rb = ReportBuilder::new("plc-proposition", order.clone());
    rb.fingerprint(PresetId::Plc);
    let plc = preset(PresetId::Plc);
    let sig = plc.signature();
    let system = completed_system(&plc, order, 4, cfg.step_limit)?;
    let shuffle_sig = system.signature().clone();

    let o = |x: &Terms, y: &Terms| expr::apply(sig, "o", &[x, y]).expect("binary o");
    let m = |x: &Terms, y: &Terms| expr::apply(sig, "m", &[x, y]).expect("binary m");
    let brak = |x: &Terms, y: &Terms| expr::commutator(sig, "m", x, y).expect("binary m");
    // P_a(b, c) = [a, b o c] - [a, b] o c - [a, c] o b
    let p_of = |a: &Terms, b: &Terms, c: &Terms| {
        expr::sub(
            expr::sub(brak(a, &o(b, c)), o(&brak(a, b), c)),
            o(&brak(a, c), b),
        )
    };
    let (a1, a2, a3, a4) = (expr::arg(1), expr::arg(2), expr::arg(3), expr::arg(4));

    let legs: Vec<(&str, Terms)> = vec![
        (
            "main identity P_{a1 o a2}(a3, a4) - P_{a1}(a3, a4) o a2 - P_{a2}(a3, a4) o a1",
            expr::sub(
                expr::sub(p_of(&o(&a1, &a2), &a3, &a4), o(&p_of(&a1, &a3, &a4), &a2)),
                o(&p_of(&a2, &a3, &a4), &a1),
            ),
        ),
        (
            "Jacobi identity of the commutator bracket",
            expr::add(
                expr::add(
                    brak(&brak(&a1, &a2), &a3),
                    brak(&brak(&a2, &a3), &a1),
                ),
                brak(&brak(&a3, &a1), &a2),
            ),
        ),
        (
            "associativity of the commutative product",
            expr::sub(o(&o(&a1, &a2), &a3), o(&a1, &o(&a2, &a3))),
        ),
        (
            "intermediate identity P_{a1}(a2, a3) = a1 m (a2 o a3) - (a1 m a2) o a3 - (a1 m a3) o a2",
            expr::sub(
                p_of(&a1, &a2, &a3),
                expr::sub(
                    expr::sub(m(&a1, &o(&a2, &a3)), o(&m(&a1, &a2), &a3)),
                    o(&m(&a1, &a3), &a2),
                ),
            ),
        ),
    ];
    for (label, terms) in legs {
        let rel = RelationExpr::from_terms(terms)?;
        let (total, bad) = orbit_reduces_to_zero(&system, &rel, &shuffle_sig, Element::clone)?;
        match bad {
            None => rb.witness(label, format!("0 across {total} instances")),
            Some((i, nf)) => rb.fail(
                format!("{label} (instance {i})"),
                nf.to_text(&shuffle_sig),
            ),
        }
    }
    Ok(rb.finish())
}

/// Ranks of the suboperad generated by the commutative product and the
/// commutator bracket inside the completed pre-Lie commutative quotient,
/// reported next to `n^(n-1)`.  Informational beyond arity 2; the arity-2
/// rank must be 2.
pub fn conjecture_probe(cfg: &CheckConfig) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let n = cfg.max_arity.unwrap_or(4);
    let mut rb = ReportBuilder::new("conjecture-probe", order.clone());
    rb.fingerprint(PresetId::Plc);
    let system = completed_system(&preset(PresetId::Plc), order, n, cfg.step_limit)?;
    let sig = system.signature();
    let product = Element::from_monomial(ShuffleTreeMonomial::parse_text("o(1,2)", sig)?);
    let mut bracket = Element::from_monomial(ShuffleTreeMonomial::parse_text("m(1,2)", sig)?);
    bracket.add_term(
        crate::scalar::int(-1),
        ShuffleTreeMonomial::parse_text("m'(1,2)", sig)?,
    );
    let ranks = suboperad_dims(&system, &[product, bracket], n)?;
    let expected: Vec<u64> = (1..=n as u64).map(|k| k.pow((k - 1) as u32)).collect();
    rb.dims_row("image ranks", ranks.clone());
    rb.dims_row("expected (conjectured)", expected.clone());
    if n >= 2 && ranks[1] != 2 {
        rb.fail(
            "arity-2 rank",
            format!("{} (the product and bracket must stay independent)", ranks[1]),
        );
    } else {
        rb.status = CheckStatus::Info;
        for k in 0..n {
            if ranks[k] < expected[k] {
                rb.witness(
                    format!("rank drop at arity {}", k + 1),
                    format!(
                        "{} < {} — would refute injectivity at this arity",
                        ranks[k], expected[k]
                    ),
                );
            }
        }
        rb.witness(
            "ranks vs conjectured dimensions",
            if ranks == expected { "equal" } else { "see rows" }.to_string(),
        );
    }
    Ok(rb.finish())
}

/// Dimension equality between the deformed and undeformed quotients, per
/// arity up to `n`.
pub fn is_almost_distributive(
    p: &Presentation,
    q: &Presentation,
    f: &RhsMap,
    n: usize,
    step_limit: u64,
) -> Result<bool> {
    let deformed = with_rewriting_rhs(p, q, f)?;
    let plain = catalog::almost_composite(p, q)?;
    let deformed_dims =
        completed_system(&deformed, OrderSpec::path_lex(), n, step_limit)?.dims(n)?;
    let plain_dims = completed_system(&plain, OrderSpec::path_lex(), n, step_limit)?.dims(n)?;
    Ok(deformed_dims == plain_dims)
}

/// The Hertling–Manin right-hand side preserves the dimensions of the
/// almost composite of the commutative and Lie presets (default arity 5).
pub fn check_almost_distributive(cfg: &CheckConfig) -> Result<CheckReport> {
    let order = cfg.order_spec();
    let n = cfg.max_arity.unwrap_or(5);
    let mut rb = ReportBuilder::new("almost-distributive", order.clone());
    rb.fingerprint(PresetId::Com);
    rb.fingerprint(PresetId::Lie);
    rb.fingerprint(PresetId::Fm);
    let com = preset(PresetId::Com);
    let lie = preset(PresetId::Lie);
    let deformed = with_rewriting_rhs(&com, &lie, &hertling_manin_rhs())?;
    let plain = catalog::almost_composite(&com, &lie)?;
    let deformed_dims =
        completed_system(&deformed, order.clone(), n, cfg.step_limit)?.dims(n)?;
    let plain_dims = completed_system(&plain, order, n, cfg.step_limit)?.dims(n)?;
    rb.dims_row("deformed by the Hertling–Manin right-hand side", deformed_dims.clone());
    rb.dims_row("almost composite", plain_dims.clone());
    if deformed_dims == plain_dims {
        rb.witness("dimension equality", "the right-hand side is almost distributive");
    } else {
        let k = (0..n).find(|&k| deformed_dims[k] != plain_dims[k]).unwrap();
        rb.fail(
            "dimension mismatch",
            format!(
                "arity {}: {} vs {}",
                k + 1,
                deformed_dims[k],
                plain_dims[k]
            ),
        );
    }
    Ok(rb.finish())
}

/// The Euler-characteristic series sum to `t - t*exp(-t)`, whose missing
/// part composes with the rooted-tree series back to `t`; the inverse's
/// dims view is `n^(n-1)`.
pub fn check_series_chain(cfg: &CheckConfig) -> Result<CheckReport> {
    let order_n = cfg.series_order;
    let mut rb = ReportBuilder::new("series-chain", OrderSpec::path_lex());
    let t = series::Egf::t(order_n);
    let presets = series::euler_presets(order_n);
    let sum = presets
        .iter()
        .try_fold(series::Egf::zero(order_n), |acc, (_, s)| acc.add(s))?;
    let target = t.sub(&series::t_exp_neg_t(order_n))?;
    if sum == target {
        rb.witness("Euler series sum", "t - t*exp(-t) exactly");
    } else {
        rb.fail(
            "Euler series sum",
            format!(
                "differs from t - t*exp(-t) first at t^{}",
                (0..=order_n)
                    .find(|&k| sum.coeff(k) != target.coeff(k))
                    .unwrap_or(0)
            ),
        );
    }

    let g = series::t_exp_neg_t(order_n);
    let f = g.comp_inverse()?;
    let tree = series::tree_egf(order_n);
    if f == tree {
        rb.witness("compositional inverse of t*exp(-t)", "the rooted-tree series");
    } else {
        rb.fail("compositional inverse of t*exp(-t)", "differs from the rooted-tree series");
    }
    let dims = f.dims_view_u64()?;
    let expected: Vec<u64> = (1..=order_n as u64).map(|k| k.pow((k - 1) as u32)).collect();
    rb.dims_row("inverse dims view", dims.clone());
    if dims != expected {
        rb.fail("inverse dims view", "differs from n^(n-1)");
    }
    match g.compose(&f)? == t {
        true => rb.witness("chain composition", "t*exp(-t) composed with the inverse is t"),
        false => rb.fail("chain composition", "does not return t"),
    }
    Ok(rb.finish())
}
