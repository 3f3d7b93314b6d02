//! Symbolic relation expressions over a symmetric signature.
//!
//! A relation is written with abstract arguments `a1, a2, …` instead of leaf
//! labels: each term is an exact rational coefficient times a tree whose
//! internal vertices carry generator symbols and whose leaves carry the
//! arguments.  Every term of a relation must be multilinear — it uses each of
//! `a1..an` exactly once — so that the relation spans a well-defined
//! `S_n`-orbit of shuffle elements.
//!
//! # Grammar
//!
//! ```text
//! element  := [ '-' ] term { ('+' | '-') term }
//! term     := [ rational '*' ] expr
//! expr     := atom [ 'o' atom ]                (infix `o` is non-associative)
//! atom     := 'a' INT
//!           | IDENT '(' expr { ',' expr } ')'
//!           | '[' expr ',' expr ']'
//!           | '(' expr ')'
//! rational := [ '-' ] INT [ '/' INT ]
//! ```
//!
//! Whitespace is insignificant.  `a<k>` is the k-th argument (so generators
//! may not be named that way); a bare `x o y` applies the binary generator
//! named `o`; `[x, y]` applies the unique antisymmetric binary generator of
//! the signature.  Iterated infix `o` must be parenthesised: `a1 o a2 o a3`
//! is rejected.  The printer emits a canonical form — infix `o` for the
//! generator named `o`, bracket sugar for the unique antisymmetric binary
//! generator, prefix calls otherwise — and parsing canonical output returns
//! the expression unchanged.

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::sig::{Signature, SymbolId, Symmetry};
use num::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A term tree: leaves are abstract arguments, internal vertices carry
/// generator symbols of the ambient signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExprNode {
    /// The argument `a<k>`, `k >= 1`.
    Arg(u32),
    /// A generator applied to child trees (child count = generator arity).
    Op(SymbolId, Vec<ExprNode>),
}

impl ExprNode {
    /// Argument indices used in this tree, in left-to-right leaf order.
    pub fn arg_indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_args(&mut out);
        out
    }

    fn collect_args(&self, out: &mut Vec<u32>) {
        match self {
            ExprNode::Arg(i) => out.push(*i),
            ExprNode::Op(_, children) => {
                for c in children {
                    c.collect_args(out);
                }
            }
        }
    }
}

/// A formal linear combination of term trees, in source order (no implicit
/// collection of like terms — the written shape is preserved).
pub type Terms = Vec<(Scalar, ExprNode)>;

/// The single-term combination `a<k>`.
pub fn arg(i: u32) -> Terms {
    vec![(Scalar::one(), ExprNode::Arg(i))]
}

/// Applies a generator multilinearly to combinations: the result is the sum
/// over one term from each part, with coefficients multiplied.
pub fn apply(sig: &Signature, name: &str, parts: &[&Terms]) -> Result<Terms> {
    let symbol = sig.by_name(name)?;
    if parts.len() != symbol.arity {
        return Err(Error::ChildCountMismatch {
            name: name.to_string(),
            arity: symbol.arity,
            got: parts.len(),
        });
    }
    let id = symbol.id;
    let mut out: Terms = vec![(Scalar::one(), ExprNode::Op(id, Vec::new()))];
    for part in parts {
        let mut next = Terms::new();
        for (c, node) in &out {
            let children = match node {
                ExprNode::Op(_, ch) => ch,
                ExprNode::Arg(_) => unreachable!(),
            };
            for (d, term) in part.iter() {
                let mut ch = children.clone();
                ch.push(term.clone());
                next.push((c * d, ExprNode::Op(id, ch)));
            }
        }
        out = next;
    }
    Ok(out)
}

/// The commutator `name(x, y) - name(y, x)` of a binary generator, applied
/// multilinearly.
pub fn commutator(sig: &Signature, name: &str, x: &Terms, y: &Terms) -> Result<Terms> {
    Ok(sub(apply(sig, name, &[x, y])?, apply(sig, name, &[y, x])?))
}

pub fn add(mut a: Terms, mut b: Terms) -> Terms {
    a.append(&mut b);
    a
}

pub fn sub(a: Terms, b: Terms) -> Terms {
    add(a, neg(b))
}

pub fn neg(t: Terms) -> Terms {
    t.into_iter().map(|(c, n)| (-c, n)).collect()
}

pub fn scale(t: Terms, k: &Scalar) -> Terms {
    t.into_iter().map(|(c, n)| (c * k, n)).collect()
}

/// A multilinear relation: an ordered list of nonzero terms, each using the
/// arguments `a1..an` exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationExpr {
    arity: usize,
    terms: Terms,
}

impl RelationExpr {
    /// Builds a relation from a combination, dropping zero-coefficient terms
    /// and validating multilinearity.
    pub fn from_terms(terms: Terms) -> Result<Self> {
        let terms: Terms = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Err(Error::ZeroRelation);
        }
        let arity = terms
            .iter()
            .flat_map(|(_, t)| t.arg_indices())
            .max()
            .unwrap_or(0) as usize;
        for (i, (_, tree)) in terms.iter().enumerate() {
            let mut found: Vec<usize> = tree.arg_indices().iter().map(|&k| k as usize).collect();
            found.sort_unstable();
            if found != (1..=arity).collect::<Vec<_>>() {
                return Err(Error::NotMultilinear {
                    term: i + 1,
                    arity,
                    found,
                });
            }
        }
        Ok(RelationExpr { arity, terms })
    }

    /// Parses the relation grammar against a signature.
    pub fn parse(src: &str, sig: &Signature) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            end: src.len(),
            sig,
        };
        let terms = parser.element()?;
        parser.expect_end()?;
        Self::from_terms(terms)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Scalar, ExprNode)] {
        &self.terms
    }

    /// Canonical text: terms in stored order, signs folded into separators,
    /// unit coefficients omitted.  Parsing the result returns `self`.
    pub fn print(&self, sig: &Signature) -> String {
        let bracket = unique_bracket(sig);
        let mut out = String::new();
        for (i, (coeff, tree)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&scalar::coeff_prefix(coeff));
            print_node(tree, sig, bracket, false, &mut out);
        }
        out
    }
}

/// The id of the unique antisymmetric binary generator, if there is exactly
/// one — the target of the `[x, y]` sugar.
fn unique_bracket(sig: &Signature) -> Option<SymbolId> {
    let mut found = None;
    for s in sig.symbols() {
        if s.symmetry == Symmetry::Antisymmetric && s.arity == 2 {
            if found.is_some() {
                return None;
            }
            found = Some(s.id);
        }
    }
    found
}

fn print_node(
    node: &ExprNode,
    sig: &Signature,
    bracket: Option<SymbolId>,
    operand_of_infix: bool,
    out: &mut String,
) {
    match node {
        ExprNode::Arg(i) => {
            out.push('a');
            out.push_str(&i.to_string());
        }
        ExprNode::Op(id, children) => {
            let symbol = sig.get(*id);
            if symbol.name == "o" && children.len() == 2 {
                if operand_of_infix {
                    out.push('(');
                }
                print_node(&children[0], sig, bracket, true, out);
                out.push_str(" o ");
                print_node(&children[1], sig, bracket, true, out);
                if operand_of_infix {
                    out.push(')');
                }
            } else if bracket == Some(*id) {
                out.push('[');
                print_node(&children[0], sig, bracket, false, out);
                out.push_str(", ");
                print_node(&children[1], sig, bracket, false, out);
                out.push(']');
            } else {
                out.push_str(&symbol.name);
                out.push('(');
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    print_node(c, sig, bracket, false, out);
                }
                out.push(')');
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer and parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Ident(String),
    Int(String),
}

struct Tok {
    kind: TokKind,
    at: usize,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let single = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Some(TokKind::Plus),
            '-' => Some(TokKind::Minus),
            '*' => Some(TokKind::Star),
            '/' => Some(TokKind::Slash),
            '(' => Some(TokKind::LParen),
            ')' => Some(TokKind::RParen),
            '[' => Some(TokKind::LBracket),
            ']' => Some(TokKind::RBracket),
            ',' => Some(TokKind::Comma),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Tok { kind, at: i });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok {
                kind: TokKind::Int(src[start..i].to_string()),
                at: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            i += 1;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Tok {
                kind: TokKind::Ident(src[start..i].to_string()),
                at: start,
            });
        } else {
            return Err(Error::Parse {
                at: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
    end: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&TokKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn at(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.at)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, msg: String) -> Error {
        Error::Parse { at: self.at(), msg }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.error("trailing input after expression".to_string()))
        }
    }

    fn element(&mut self) -> Result<Terms> {
        let mut terms = Terms::new();
        let mut sign = if self.eat(&TokKind::Minus) {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        loop {
            let (coeff, tree) = self.term()?;
            terms.push((&sign * coeff, tree));
            if self.eat(&TokKind::Plus) {
                sign = Scalar::one();
            } else if self.eat(&TokKind::Minus) {
                sign = -Scalar::one();
            } else {
                break;
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Scalar, ExprNode)> {
        let mut coeff = Scalar::one();
        let negated = matches!(self.peek(), Some(TokKind::Minus));
        if negated {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(TokKind::Int(_))) || negated {
            let at = self.at();
            coeff = self.rational(negated)?;
            if coeff.is_zero() {
                return Err(Error::Parse {
                    at,
                    msg: "zero coefficient".to_string(),
                });
            }
            self.expect(TokKind::Star, "`*` between coefficient and tree")?;
        }
        let tree = self.expr()?;
        Ok((coeff, tree))
    }

    fn rational(&mut self, negated: bool) -> Result<Scalar> {
        let numer = self.integer("a coefficient")?;
        let denom = if self.eat(&TokKind::Slash) {
            let at = self.at();
            let d = self.integer("a denominator")?;
            if d.is_zero() {
                return Err(Error::Parse {
                    at,
                    msg: "zero denominator".to_string(),
                });
            }
            d
        } else {
            num::BigInt::from(1)
        };
        let q = Scalar::new(numer, denom);
        Ok(if negated { -q } else { q })
    }

    fn integer(&mut self, what: &str) -> Result<num::BigInt> {
        let at = self.at();
        match self.bump().map(|t| &t.kind) {
            Some(TokKind::Int(s)) => s.parse().map_err(|_| Error::Parse {
                at,
                msg: format!("bad integer `{s}`"),
            }),
            _ => Err(Error::Parse {
                at,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<ExprNode> {
        let left = self.atom()?;
        if matches!(self.peek(), Some(TokKind::Ident(name)) if name == "o") {
            let at = self.at();
            self.pos += 1;
            let right = self.atom()?;
            if matches!(self.peek(), Some(TokKind::Ident(name)) if name == "o") {
                return Err(self.error(
                    "infix `o` is non-associative; parenthesise the intended grouping".to_string(),
                ));
            }
            let symbol = self.sig.by_name("o").map_err(|_| Error::Parse {
                at,
                msg: "infix `o` needs a binary generator named `o`".to_string(),
            })?;
            return Ok(ExprNode::Op(symbol.id, vec![left, right]));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<ExprNode> {
        let at = self.at();
        match self.bump().map(|t| t.kind.clone()) {
            Some(TokKind::Ident(name)) => {
                if let Some(index) = argument_index(&name) {
                    if index == 0 {
                        return Err(Error::Parse {
                            at,
                            msg: "argument indices start at a1".to_string(),
                        });
                    }
                    return Ok(ExprNode::Arg(index));
                }
                self.expect(TokKind::LParen, &format!("`(` after generator `{name}`"))?;
                let mut children = vec![self.expr()?];
                while self.eat(&TokKind::Comma) {
                    children.push(self.expr()?);
                }
                self.expect(TokKind::RParen, "`)` closing the argument list")?;
                let symbol = self.sig.by_name(&name)?;
                if children.len() != symbol.arity {
                    return Err(Error::ChildCountMismatch {
                        name,
                        arity: symbol.arity,
                        got: children.len(),
                    });
                }
                Ok(ExprNode::Op(symbol.id, children))
            }
            Some(TokKind::LBracket) => {
                let x = self.expr()?;
                self.expect(TokKind::Comma, "`,` between bracket entries")?;
                let y = self.expr()?;
                self.expect(TokKind::RBracket, "`]` closing the bracket")?;
                let id = unique_bracket(self.sig).ok_or(Error::Parse {
                    at,
                    msg: "`[x, y]` needs a unique antisymmetric binary generator".to_string(),
                })?;
                Ok(ExprNode::Op(id, vec![x, y]))
            }
            Some(TokKind::LParen) => {
                let inner = self.expr()?;
                self.expect(TokKind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Error::Parse {
                at,
                msg: "expected an argument, a generator application, `[` or `(`".to_string(),
            }),
        }
    }
}

/// `a<digits>` arguments; anything else is a generator name.
fn argument_index(name: &str) -> Option<u32> {
    let rest = name.strip_prefix('a')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

/// A named presentation: a signature plus a list of multilinear relations
/// (each asserting "this expression = 0") and free-form notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub name: String,
    pub notes: Vec<String>,
    signature: Signature,
    relations: Vec<RelationExpr>,
}

impl Presentation {
    pub fn new(
        name: &str,
        generators: Vec<(&str, usize, Symmetry)>,
        relations: &[&str],
        notes: Vec<String>,
    ) -> Result<Self> {
        let signature = Signature::new(generators)?;
        let relations = relations
            .iter()
            .map(|src| RelationExpr::parse(src, &signature))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation {
            name: name.to_string(),
            notes,
            signature,
            relations,
        })
    }

    /// Assembles a presentation from already-built parts (used when relations
    /// are constructed programmatically rather than parsed).
    pub fn from_parts(
        name: &str,
        signature: Signature,
        relations: Vec<RelationExpr>,
        notes: Vec<String>,
    ) -> Self {
        Presentation {
            name: name.to_string(),
            notes,
            signature,
            relations,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn signature_mut(&mut self) -> &mut Signature {
        &mut self.signature
    }

    pub fn relations(&self) -> &[RelationExpr] {
        &self.relations
    }

    /// Canonical relation texts, in order.
    pub fn relation_texts(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| r.print(&self.signature))
            .collect()
    }

    /// Hex SHA-256 over the generator lines and canonical relation texts —
    /// a stable fingerprint of the presentation's content.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for s in self.signature.symbols() {
            hasher.update(format!("gen {} {} {}\n", s.name, s.arity, s.symmetry.as_str()));
        }
        for text in self.relation_texts() {
            hasher.update("rel ");
            hasher.update(&text);
            hasher.update("\n");
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "generators": self.signature.symbols().iter().map(|s| serde_json::json!({
                "name": s.name,
                "arity": s.arity,
                "symmetry": s.symmetry.as_str(),
            })).collect::<Vec<_>>(),
            "relations": self.relation_texts(),
            "notes": self.notes,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Invalid("presentation must be a JSON object".to_string()))?;
        let name = obj
            .get("name")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Invalid("presentation needs a string `name`".to_string()))?;
        let gens = obj
            .get("generators")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Invalid("presentation needs a `generators` array".to_string()))?;
        let mut signature = Signature::new(Vec::new())?;
        for g in gens {
            let gname = g
                .get("name")
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::Invalid("generator needs a string `name`".to_string()))?;
            let arity = g
                .get("arity")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| Error::Invalid("generator needs an integer `arity`".to_string()))?;
            let symmetry = Symmetry::parse(
                g.get("symmetry")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Error::Invalid("generator needs a `symmetry`".to_string()))?,
            )?;
            signature.push(
                gname,
                arity as usize,
                symmetry,
                0,
                crate::sig::ClassTag::Unassigned,
            )?;
        }
        let relation_values = obj
            .get("relations")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Invalid("presentation needs a `relations` array".to_string()))?;
        let mut relations = Vec::new();
        for r in relation_values {
            let src = r
                .as_str()
                .ok_or_else(|| Error::Invalid("relations must be strings".to_string()))?;
            relations.push(RelationExpr::parse(src, &signature)?);
        }
        let notes = match obj.get("notes") {
            None => Vec::new(),
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::Invalid("`notes` must be an array".to_string()))?
                .iter()
                .map(|n| {
                    n.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Invalid("notes must be strings".to_string()))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Presentation {
            name: name.to_string(),
            notes,
            signature,
            relations,
        })
    }

    /// Maximum relation arity, or 0 if there are none.
    pub fn max_relation_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity()).max().unwrap_or(0)
    }

    /// Names of generators, as a set (for class assignments).
    pub fn generator_names(&self) -> BTreeSet<String> {
        self.signature
            .symbols()
            .iter()
            .map(|s| s.name.clone())
            .collect()
    }
}
