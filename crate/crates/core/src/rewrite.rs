//! Rewriting systems on shuffle tree monomials: reduction to normal form,
//! critical pairs, completion up to a truncation arity, and normal-monomial
//! counting.
//!
//! A rule is a monic oriented relation `lhs -> rhs`: `lhs` is the leading
//! monomial under the system's order and every monomial of `rhs` is strictly
//! smaller.  Reduction repeatedly rewrites the largest unprocessed monomial
//! of an element; for an admissible order this terminates on its own, and a
//! configurable step limit guards the orders that are only well-founded
//! per arity.
//!
//! Completion is strictly sequential and deterministic: candidate overlaps
//! are processed in ascending (host arity, creation sequence) order, every
//! nonzero reduced S-polynomial becomes a new rule, and a final
//! inter-reduction pass tail-reduces each rule by the others and drops the
//! redundant ones.  A closing verification pass re-reduces every remaining
//! S-polynomial (in parallel — the system is read-only by then) and fails
//! loudly if anything survives, so a returned system is confluent below its
//! truncation arity by construction.

use crate::element::Element;
use crate::error::{Error, Result};
use crate::expand::ShufflePresentation;
use crate::monomial::{combinations, Node, ShuffleTreeMonomial};
use crate::occurrence::{first_occurrence_path, occurs_at, replace_occurrence_by_monomial};
use crate::order::{CompiledOrder, OrderKey, OrderSpec};
use crate::scalar::Scalar;
use num::Zero;
use crate::sig::{ShuffleSignature, Signature, Symmetry};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

/// Default bound on one-step rewrites per reduction.
pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// A monic rewrite rule `lhs -> rhs` (so `lhs - rhs` lies in the ideal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: ShuffleTreeMonomial,
    pub rhs: Element,
}

impl RewriteRule {
    /// The ideal element `lhs - rhs` the rule orients.
    pub fn as_element(&self) -> Element {
        Element::from_monomial(self.lhs.clone())
            .sub(&self.rhs)
            .expect("rule sides share an arity")
    }
}

/// An overlap of two rule left-hand sides inside a common host monomial:
/// `rules[left_rule].lhs` matches at `left_path` (always the root) and
/// `rules[right_rule].lhs` at `right_path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    pub left_rule: usize,
    pub right_rule: usize,
    pub host: ShuffleTreeMonomial,
    pub left_path: Vec<usize>,
    pub right_path: Vec<usize>,
}

/// One rewrite applied during a reduction, for replayable certificates:
/// the monomial carried coefficient `coeff` and was rewritten by rule
/// `rule` matched at `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub monomial: ShuffleTreeMonomial,
    pub rule: usize,
    pub path: Vec<usize>,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArityStats {
    pub pairs: u64,
    pub rules_added: usize,
    pub millis: u128,
}

/// What completion did, for reports and logs.
#[derive(Debug, Clone, Default)]
pub struct CompletionReport {
    pub rules_from_inputs: usize,
    pub pairs_examined: u64,
    pub rules_from_pairs: usize,
    pub rules_final: usize,
    pub max_arity_reached: usize,
    pub inter_reduction_sweeps: usize,
    pub per_arity: BTreeMap<usize, ArityStats>,
    pub total_millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct QueueItem {
    arity: usize,
    seq: u64,
    pair: CriticalPair,
}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.arity, self.seq).cmp(&(other.arity, other.seq))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A rewriting system: a shuffle signature, a monomial order, input
/// relations, and (after `complete`) a confluent rule set valid up to the
/// truncation arity.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    signature: ShuffleSignature,
    order: CompiledOrder,
    truncation_arity: usize,
    step_limit: u64,
    inputs: Vec<Element>,
    rules: Vec<RewriteRule>,
    completed: bool,
}

impl RewriteSystem {
    pub fn new(
        signature: ShuffleSignature,
        order_spec: OrderSpec,
        truncation_arity: usize,
        step_limit: u64,
    ) -> Result<Self> {
        let order = CompiledOrder::new(&order_spec, &signature)?;
        Ok(RewriteSystem {
            signature,
            order,
            truncation_arity,
            step_limit,
            inputs: Vec::new(),
            rules: Vec::new(),
            completed: false,
        })
    }

    pub fn from_presentation(
        p: &ShufflePresentation,
        order_spec: OrderSpec,
        truncation_arity: usize,
        step_limit: u64,
    ) -> Result<Self> {
        let mut system = RewriteSystem::new(
            p.signature().clone(),
            order_spec,
            truncation_arity,
            step_limit,
        )?;
        for e in p.relations() {
            system.add_input(e.clone())?;
        }
        Ok(system)
    }

    pub fn add_input(&mut self, e: Element) -> Result<()> {
        if e.is_zero() {
            return Err(Error::ZeroRelation);
        }
        if e.arity() > self.truncation_arity {
            return Err(Error::ArityAboveTruncation {
                arity: e.arity(),
                max: self.truncation_arity,
            });
        }
        self.inputs.push(e);
        self.completed = false;
        Ok(())
    }

    pub fn signature(&self) -> &ShuffleSignature {
        &self.signature
    }

    pub fn order(&self) -> &CompiledOrder {
        &self.order
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn inputs(&self) -> &[Element] {
        &self.inputs
    }

    pub fn truncation_arity(&self) -> usize {
        self.truncation_arity
    }

    pub fn step_limit(&self) -> u64 {
        self.step_limit
    }

    pub fn set_step_limit(&mut self, limit: u64) {
        self.step_limit = limit;
    }

    pub fn is_completed(&self) -> bool {
        self.completed
    }

    /// First applicable rule for a monomial: lowest rule index, then first
    /// match position in preorder.
    fn find_rewrite(&self, m: &ShuffleTreeMonomial) -> Option<(usize, Vec<usize>)> {
        for (i, rule) in self.rules.iter().enumerate() {
            if rule.lhs.arity() > m.arity() {
                continue;
            }
            if let Some(path) = first_occurrence_path(m, &rule.lhs) {
                return Some((i, path));
            }
        }
        None
    }

    /// Normal form of an element under the current rules.
    pub fn reduce(&self, e: &Element) -> Result<Element> {
        self.reduce_inner(e, None)
    }

    /// Normal form plus the list of rewrites performed, replayable via
    /// [`RewriteSystem::verify_certificate`].
    pub fn reduce_with_certificate(&self, e: &Element) -> Result<(Element, Vec<ReductionStep>)> {
        let mut steps = Vec::new();
        let nf = self.reduce_inner(e, Some(&mut steps))?;
        Ok((nf, steps))
    }

    fn reduce_inner(
        &self,
        e: &Element,
        mut trace: Option<&mut Vec<ReductionStep>>,
    ) -> Result<Element> {
        let arity = e.arity();
        let mut work: BTreeMap<OrderKey, (ShuffleTreeMonomial, Scalar)> = BTreeMap::new();
        for (m, c) in e.terms() {
            insert_work(&mut work, self.order.key(m), m.clone(), c.clone());
        }
        let mut normal: Vec<(Scalar, ShuffleTreeMonomial)> = Vec::new();
        let mut steps_used = 0u64;
        while let Some((_, (m, c))) = work.pop_last() {
            debug_assert!(!c.is_zero());
            match self.find_rewrite(&m) {
                None => normal.push((c, m)),
                Some((rule_index, path)) => {
                    steps_used += 1;
                    if steps_used > self.step_limit {
                        return Err(Error::StepLimitExceeded(self.step_limit));
                    }
                    let rule = &self.rules[rule_index];
                    for (rm, rc) in rule.rhs.terms() {
                        let replaced = replace_occurrence_by_monomial(&m, &path, &rule.lhs, rm)?;
                        insert_work(&mut work, self.order.key(&replaced), replaced, &c * rc);
                    }
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(ReductionStep {
                            monomial: m,
                            rule: rule_index,
                            path,
                            coeff: c,
                        });
                    }
                }
            }
        }
        Element::from_terms(arity, normal)
    }

    /// Replays a certificate: checks `e == nf + sum_i coeff_i * (m_i -
    /// m_i[rule_i.rhs at path_i])`, i.e. that the steps connect `e` to `nf`
    /// through the ideal.
    pub fn verify_certificate(
        &self,
        e: &Element,
        nf: &Element,
        steps: &[ReductionStep],
    ) -> Result<bool> {
        let mut acc = nf.clone();
        for step in steps {
            let rule = self
                .rules
                .get(step.rule)
                .ok_or_else(|| Error::Invalid(format!("certificate names rule {}", step.rule)))?;
            let mut replaced = Element::zero(step.monomial.arity());
            for (rm, rc) in rule.rhs.terms() {
                replaced.add_term(
                    rc.clone(),
                    replace_occurrence_by_monomial(&step.monomial, &step.path, &rule.lhs, rm)?,
                );
            }
            let instance = Element::from_monomial(step.monomial.clone()).sub(&replaced)?;
            acc.add_scaled(&step.coeff, &instance)?;
        }
        Ok(&acc == e)
    }

    /// Reduces `e`; a zero normal form proves membership in the ideal and the
    /// certificate replays the proof.
    pub fn ideal_membership(&self, e: &Element) -> Result<Option<Vec<ReductionStep>>> {
        let (nf, steps) = self.reduce_with_certificate(e)?;
        Ok(if nf.is_zero() { Some(steps) } else { None })
    }

    /// All critical pairs between rules `i` and `j`, hosts capped at the
    /// truncation arity.  For `i != j` both nestings are produced (each
    /// lhs at the root with the other inside); root-against-root overlaps
    /// appear once.
    pub fn critical_pairs_between(&self, i: usize, j: usize) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        self.overlaps_into(i, j, true, &mut out);
        if i != j {
            self.overlaps_into(j, i, false, &mut out);
        }
        out
    }

    fn overlaps_into(
        &self,
        outer: usize,
        inner: usize,
        include_root: bool,
        out: &mut Vec<CriticalPair>,
    ) {
        let lhs_outer = &self.rules[outer].lhs;
        let lhs_inner = &self.rules[inner].lhs;
        for path in lhs_outer.vertex_paths() {
            if path.is_empty() && (!include_root || outer == inner) {
                // root-on-root self-overlap is the trivial identical occurrence
                continue;
            }
            let Some(shape) = overlay_at(lhs_outer.node(), &path, lhs_inner.node()) else {
                continue;
            };
            let leaves = shape.leaf_count();
            if leaves > self.truncation_arity {
                continue;
            }
            let labels: Vec<u32> = (1..=leaves as u32).collect();
            for labeled in shape_labelings(&shape, &labels) {
                let host = ShuffleTreeMonomial::new_unchecked(leaves, labeled);
                if occurs_at(&host, lhs_outer, &[]) && occurs_at(&host, lhs_inner, &path) {
                    out.push(CriticalPair {
                        left_rule: outer,
                        right_rule: inner,
                        host,
                        left_path: Vec::new(),
                        right_path: path.clone(),
                    });
                }
            }
        }
    }

    /// The S-polynomial of a critical pair: rewrite the host by each rule at
    /// its matched position and subtract.
    pub fn s_polynomial(&self, pair: &CriticalPair) -> Result<Element> {
        let left = self.apply_rule_at(&pair.host, pair.left_rule, &pair.left_path)?;
        let right = self.apply_rule_at(&pair.host, pair.right_rule, &pair.right_path)?;
        left.sub(&right)
    }

    fn apply_rule_at(
        &self,
        host: &ShuffleTreeMonomial,
        rule_index: usize,
        path: &[usize],
    ) -> Result<Element> {
        let rule = &self.rules[rule_index];
        let mut out = Element::zero(host.arity());
        for (rm, rc) in rule.rhs.terms() {
            out.add_term(
                rc.clone(),
                replace_occurrence_by_monomial(host, path, &rule.lhs, rm)?,
            );
        }
        Ok(out)
    }

    fn rule_from_element(&self, e: Element) -> Result<RewriteRule> {
        let monic = e
            .make_monic(&self.order)
            .ok_or(Error::ZeroRelation)?;
        let (lhs, _) = monic.leading(&self.order).expect("nonzero");
        let lhs = lhs.clone();
        let rhs = Element::from_monomial(lhs.clone()).sub(&monic)?;
        for (m, _) in rhs.terms() {
            debug_assert_eq!(
                self.order.cmp(&lhs, m),
                std::cmp::Ordering::Greater,
                "rule right-hand side must be below the leading monomial"
            );
        }
        Ok(RewriteRule { lhs, rhs })
    }

    fn push_rule(
        &mut self,
        nf: Element,
        queue: &mut BinaryHeap<Reverse<QueueItem>>,
        seq: &mut u64,
    ) -> Result<()> {
        let rule = self.rule_from_element(nf)?;
        self.rules.push(rule);
        let new_index = self.rules.len() - 1;
        for i in 0..=new_index {
            for pair in self.critical_pairs_between(i, new_index) {
                *seq += 1;
                queue.push(Reverse(QueueItem {
                    arity: pair.host.arity(),
                    seq: *seq,
                    pair,
                }));
            }
        }
        Ok(())
    }

    /// Normalises the inputs into starting rules without processing any
    /// overlaps — the first phase of [`RewriteSystem::complete`] on its own,
    /// for callers that want to inspect the S-polynomials of the presented
    /// relations directly.  Returns the number of rules created.
    pub fn seed_rules(&mut self) -> Result<usize> {
        self.rules.clear();
        self.completed = false;
        let mut queue: BinaryHeap<Reverse<QueueItem>> = BinaryHeap::new();
        let mut seq = 0u64;
        for e in self.inputs.clone() {
            let nf = self.reduce(&e)?;
            if !nf.is_zero() {
                self.push_rule(nf, &mut queue, &mut seq)?;
            }
        }
        Ok(self.rules.len())
    }

    /// Runs completion: normalises the inputs into starting rules, processes
    /// every overlap in ascending (host arity, discovery order), adds each
    /// surviving S-polynomial as a rule, inter-reduces, and verifies that the
    /// final system is confluent below the truncation arity.
    pub fn complete(&mut self) -> Result<CompletionReport> {
        let started = Instant::now();
        self.rules.clear();
        self.completed = false;
        let mut report = CompletionReport::default();
        let mut queue: BinaryHeap<Reverse<QueueItem>> = BinaryHeap::new();
        let mut seq = 0u64;

        let inputs = self.inputs.clone();
        for e in inputs {
            let nf = self.reduce(&e)?;
            if !nf.is_zero() {
                self.push_rule(nf, &mut queue, &mut seq)?;
                report.rules_from_inputs += 1;
            }
        }

        while let Some(Reverse(item)) = queue.pop() {
            let arity_clock = Instant::now();
            report.pairs_examined += 1;
            let stats = report.per_arity.entry(item.arity).or_default();
            stats.pairs += 1;
            report.max_arity_reached = report.max_arity_reached.max(item.arity);
            let spoly = self.s_polynomial(&item.pair)?;
            let nf = if spoly.is_zero() {
                spoly
            } else {
                self.reduce(&spoly)?
            };
            if !nf.is_zero() {
                self.push_rule(nf, &mut queue, &mut seq)?;
                report.rules_from_pairs += 1;
                report.per_arity.get_mut(&item.arity).unwrap().rules_added += 1;
            }
            report.per_arity.get_mut(&item.arity).unwrap().millis +=
                arity_clock.elapsed().as_millis();
        }

        report.inter_reduction_sweeps = self.inter_reduce()?;
        self.completed = true;
        self.verify_confluence()?;
        report.rules_final = self.rules.len();
        report.total_millis = started.elapsed().as_millis();
        Ok(report)
    }

    /// Tail-reduces every rule by the others, dropping rules that become
    /// trivial, until a sweep changes nothing.
    fn inter_reduce(&mut self) -> Result<usize> {
        const MAX_SWEEPS: usize = 100;
        let mut sweeps = 0;
        loop {
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::InterReductionDiverged(MAX_SWEEPS));
            }
            let mut changed = false;
            let mut index = 0;
            while index < self.rules.len() {
                let removed = self.rules.remove(index);
                let nf = self.reduce(&removed.as_element())?;
                if nf.is_zero() {
                    changed = true;
                    continue;
                }
                let rebuilt = self.rule_from_element(nf)?;
                if rebuilt != removed {
                    changed = true;
                }
                self.rules.insert(index, rebuilt);
                index += 1;
            }
            if !changed {
                return Ok(sweeps);
            }
        }
    }

    /// Re-checks every critical pair of the final rules in parallel; errors
    /// if any S-polynomial fails to reduce to zero.
    fn verify_confluence(&self) -> Result<()> {
        let mut pairs = Vec::new();
        for i in 0..self.rules.len() {
            for j in i..self.rules.len() {
                pairs.extend(self.critical_pairs_between(i, j));
            }
        }
        let failures: Vec<usize> = pairs
            .par_iter()
            .enumerate()
            .map(|(k, pair)| -> Result<Option<usize>> {
                let spoly = self.s_polynomial(pair)?;
                let nf = self.reduce(&spoly)?;
                Ok(if nf.is_zero() { None } else { Some(k) })
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "completion postcondition failed: {} unresolved critical pairs",
                failures.len()
            )))
        }
    }

    /// Monomials of the given arity not divisible by any rule left-hand
    /// side.  Requires a completed system for the count to mean a dimension.
    pub fn normal_monomials(&self, arity: usize) -> Result<Vec<ShuffleTreeMonomial>> {
        if arity > self.truncation_arity {
            return Err(Error::ArityAboveTruncation {
                arity,
                max: self.truncation_arity,
            });
        }
        let all = crate::monomial::enumerate_monomials(&self.signature, arity)?;
        let lhs: Vec<&ShuffleTreeMonomial> = self
            .rules
            .iter()
            .map(|r| &r.lhs)
            .filter(|l| l.arity() <= arity)
            .collect();
        Ok(all
            .into_par_iter()
            .filter(|m| !lhs.iter().any(|l| crate::occurrence::divides(l, m)))
            .collect())
    }

    /// Dimensions of the quotient per arity `1..=max_arity` — counts of
    /// normal monomials.  Only valid after completion.
    pub fn dims(&self, max_arity: usize) -> Result<Vec<u64>> {
        if !self.completed {
            return Err(Error::Invalid(
                "dimensions require a completed system; call complete() first".to_string(),
            ));
        }
        (1..=max_arity)
            .map(|n| Ok(self.normal_monomials(n)?.len() as u64))
            .collect()
    }

    /// Serialises the signature, order, truncation, step limit and rules.
    /// The output is deterministic: object keys are sorted and the rules
    /// appear in system order with their right-hand sides in structural
    /// monomial order.
    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.signature.origin().symbols().iter().map(|s| json!({
                "name": s.name,
                "arity": s.arity,
                "symmetry": s.symmetry.as_str(),
            })).collect::<Vec<_>>(),
            "order": serde_json::to_value(self.order.spec()).expect("order spec serialises"),
            "truncation_arity": self.truncation_arity,
            "step_limit": self.step_limit,
            "rules": self.rules.iter().map(|r| json!({
                "lhs": r.lhs.to_json(&self.signature),
                "rhs": r.rhs.to_json(&self.signature),
            })).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds a completed system from [`RewriteSystem::to_json`] output.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("dump must be a JSON object".to_string()))?;
        let sig_entries = obj
            .get("signature")
            .and_then(|s| s.as_array())
            .ok_or_else(|| Error::Invalid("dump needs a `signature` array".to_string()))?;
        let mut origin = Signature::new(Vec::new())?;
        for entry in sig_entries {
            let name = entry
                .get("name")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::Invalid("signature entry needs `name`".to_string()))?;
            let arity = entry
                .get("arity")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::Invalid("signature entry needs `arity`".to_string()))?;
            let symmetry = Symmetry::parse(
                entry
                    .get("symmetry")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::Invalid("signature entry needs `symmetry`".to_string()))?,
            )?;
            origin.push(
                name,
                arity as usize,
                symmetry,
                0,
                crate::sig::ClassTag::Unassigned,
            )?;
        }
        let signature = ShuffleSignature::from_signature(&origin)?;
        let order_spec: OrderSpec = serde_json::from_value(
            obj.get("order")
                .cloned()
                .ok_or_else(|| Error::Invalid("dump needs an `order`".to_string()))?,
        )?;
        let truncation_arity = obj
            .get("truncation_arity")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Invalid("dump needs `truncation_arity`".to_string()))?
            as usize;
        let step_limit = obj
            .get("step_limit")
            .and_then(|x| x.as_u64())
            .unwrap_or(DEFAULT_STEP_LIMIT);
        let mut system =
            RewriteSystem::new(signature, order_spec, truncation_arity, step_limit)?;
        let rules = obj
            .get("rules")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Invalid("dump needs a `rules` array".to_string()))?;
        for rule in rules {
            let lhs_json = rule
                .get("lhs")
                .ok_or_else(|| Error::Invalid("rule needs `lhs`".to_string()))?;
            let lhs = ShuffleTreeMonomial::from_json(lhs_json, &system.signature)?;
            let rhs_json = rule
                .get("rhs")
                .ok_or_else(|| Error::Invalid("rule needs `rhs`".to_string()))?;
            let rhs = Element::from_json(rhs_json, lhs.arity(), &system.signature)?;
            for (m, _) in rhs.terms() {
                if system.order.cmp(&lhs, m) != std::cmp::Ordering::Greater {
                    return Err(Error::Invalid(
                        "rule right-hand side is not below its leading monomial".to_string(),
                    ));
                }
            }
            if lhs.arity() > truncation_arity {
                return Err(Error::ArityAboveTruncation {
                    arity: lhs.arity(),
                    max: truncation_arity,
                });
            }
            system.inputs.push(RewriteRule { lhs: lhs.clone(), rhs: rhs.clone() }.as_element());
            system.rules.push(RewriteRule { lhs, rhs });
        }
        system.completed = true;
        Ok(system)
    }
}

fn insert_work(
    work: &mut BTreeMap<OrderKey, (ShuffleTreeMonomial, Scalar)>,
    key: OrderKey,
    m: ShuffleTreeMonomial,
    c: Scalar,
) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match work.entry(key) {
        Entry::Vacant(slot) => {
            slot.insert((m, c));
        }
        Entry::Occupied(mut slot) => {
            debug_assert_eq!(slot.get().0, m, "order keys are injective per arity");
            slot.get_mut().1 += c;
            if slot.get().1.is_zero() {
                slot.remove();
            }
        }
    }
}

/// Union shape of a host tree and a pattern overlaid at `path`: generators
/// must agree on the shared region; where one tree ends in a leaf the other
/// continues.  Leaves of the result are unlabeled placeholders.
fn overlay_at(host: &Node, path: &[usize], pattern: &Node) -> Option<Node> {
    match path.split_first() {
        None => overlay(host, pattern),
        Some((&slot, rest)) => match host {
            Node::Vertex(g, children) => {
                let mut shape_children = Vec::with_capacity(children.len());
                for (k, child) in children.iter().enumerate() {
                    if k == slot {
                        shape_children.push(overlay_at(child, rest, pattern)?);
                    } else {
                        shape_children.push(strip_labels(child));
                    }
                }
                Some(Node::Vertex(*g, shape_children))
            }
            Node::Leaf(_) => None,
        },
    }
}

fn overlay(host: &Node, pattern: &Node) -> Option<Node> {
    match (host, pattern) {
        (_, Node::Leaf(_)) => Some(strip_labels(host)),
        (Node::Leaf(_), _) => Some(strip_labels(pattern)),
        (Node::Vertex(g, host_children), Node::Vertex(p, pattern_children)) => {
            if g != p {
                return None;
            }
            let mut children = Vec::with_capacity(host_children.len());
            for (h, q) in host_children.iter().zip(pattern_children.iter()) {
                children.push(overlay(h, q)?);
            }
            Some(Node::Vertex(*g, children))
        }
    }
}

fn strip_labels(node: &Node) -> Node {
    match node {
        Node::Leaf(_) => Node::Leaf(0),
        Node::Vertex(g, children) => {
            Node::Vertex(*g, children.iter().map(strip_labels).collect())
        }
    }
}

/// All canonical leaf labelings of an unlabeled shape over a sorted label
/// set: every vertex's children must carry strictly increasing minima.
fn shape_labelings(shape: &Node, labels: &[u32]) -> Vec<Node> {
    match shape {
        Node::Leaf(_) => {
            debug_assert_eq!(labels.len(), 1);
            vec![Node::Leaf(labels[0])]
        }
        Node::Vertex(g, children) => {
            let sizes: Vec<usize> = children.iter().map(Node::leaf_count).collect();
            let mut out = Vec::new();
            for blocks in sized_partitions(labels, &sizes) {
                let per_child: Vec<Vec<Node>> = children
                    .iter()
                    .zip(blocks.iter())
                    .map(|(c, b)| shape_labelings(c, b))
                    .collect();
                let mut choice = vec![0usize; per_child.len()];
                'odometer: loop {
                    out.push(Node::Vertex(
                        *g,
                        (0..per_child.len())
                            .map(|i| per_child[i][choice[i]].clone())
                            .collect(),
                    ));
                    let mut i = per_child.len();
                    loop {
                        if i == 0 {
                            break 'odometer;
                        }
                        i -= 1;
                        choice[i] += 1;
                        if choice[i] < per_child[i].len() {
                            break;
                        }
                        choice[i] = 0;
                    }
                }
            }
            out
        }
    }
}

/// Ordered partitions of a sorted label set into blocks of the given exact
/// sizes with strictly increasing minima.
fn sized_partitions(labels: &[u32], sizes: &[usize]) -> Vec<Vec<Vec<u32>>> {
    debug_assert_eq!(labels.len(), sizes.iter().sum::<usize>());
    if sizes.len() == 1 {
        return vec![vec![labels.to_vec()]];
    }
    let rest = &labels[1..];
    let mut out = Vec::new();
    for extra in combinations(rest, sizes[0] - 1) {
        let mut first = Vec::with_capacity(sizes[0]);
        first.push(labels[0]);
        first.extend(&extra);
        let remaining: Vec<u32> = rest
            .iter()
            .copied()
            .filter(|l| !extra.contains(l))
            .collect();
        for mut tail in sized_partitions(&remaining, &sizes[1..]) {
            let mut blocks = Vec::with_capacity(sizes.len());
            blocks.push(first.clone());
            blocks.append(&mut tail);
            out.push(blocks);
        }
    }
    out
}
