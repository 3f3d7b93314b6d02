//! Generator signatures.
//!
//! A `Signature` lists the generators of a symmetric-operad presentation:
//! each `GeneratorSymbol` carries a name, an arity, a symmetry type, an
//! optional filtration weight and an optional class tag (used by the
//! augmented order and the almost-composite construction).
//!
//! A `ShuffleSignature` is the expansion used by the monomial basis: a
//! symmetric or antisymmetric generator contributes one shuffle generator;
//! a binary generator with no symmetry contributes two, designated
//! partners — `m` for the order-preserving reading and `m'` for the swapped
//! one.  Straightening toggles partners when the two children of such a
//! vertex swap; a symmetric vertex reorders freely with sign `+1` and an
//! antisymmetric one picks up the sign of the reordering permutation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    NoSymmetry,
}

impl Symmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
            Symmetry::NoSymmetry => "none",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Symmetry::Symmetric),
            "antisymmetric" => Ok(Symmetry::Antisymmetric),
            "none" => Ok(Symmetry::NoSymmetry),
            other => Err(Error::Invalid(format!("unknown symmetry `{other}`"))),
        }
    }
}

/// Class tag for two-sided constructions: `X` marks generators of the left
/// (product) part, `Y` generators of the right (bracket) part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    X,
    Y,
    Unassigned,
}

pub type SymbolId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub id: SymbolId,
    pub name: String,
    pub arity: usize,
    pub symmetry: Symmetry,
    /// Weight for filtration-refined counting (e.g. bracket weight 1).
    pub filtration_weight: u64,
    pub class_tag: ClassTag,
}

fn name_is_reserved(name: &str) -> bool {
    // `a<digits>` is the argument syntax; a bare integer is a leaf.
    let mut chars = name.chars();
    match chars.next() {
        Some('a') => {
            let rest: String = chars.collect();
            !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
        }
        Some(c) if c.is_ascii_digit() => true,
        _ => false,
    }
}

fn name_is_well_formed(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        }
        _ => false,
    }
}

/// A symmetric-level signature: an ordered list of generator symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    symbols: Vec<GeneratorSymbol>,
}

impl Signature {
    pub fn new(specs: Vec<(&str, usize, Symmetry)>) -> Result<Self> {
        let mut sig = Signature { symbols: Vec::new() };
        for (name, arity, symmetry) in specs {
            sig.push(name, arity, symmetry, 0, ClassTag::Unassigned)?;
        }
        Ok(sig)
    }

    pub fn push(
        &mut self,
        name: &str,
        arity: usize,
        symmetry: Symmetry,
        filtration_weight: u64,
        class_tag: ClassTag,
    ) -> Result<SymbolId> {
        if !name_is_well_formed(name) || name_is_reserved(name) || name == "o" && arity != 2 {
            return Err(Error::BadGeneratorName(name.to_string()));
        }
        if arity == 0 {
            return Err(Error::Invalid(format!("generator `{name}` has arity 0")));
        }
        if symmetry == Symmetry::NoSymmetry && arity != 2 {
            return Err(Error::UnsupportedNoSymmetryArity(name.to_string()));
        }
        if self.symbols.iter().any(|s| s.name == name) {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        let id = self.symbols.len();
        self.symbols.push(GeneratorSymbol {
            id,
            name: name.to_string(),
            arity,
            symmetry,
            filtration_weight,
            class_tag,
        });
        Ok(id)
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, id: SymbolId) -> &GeneratorSymbol {
        &self.symbols[id]
    }

    pub fn by_name(&self, name: &str) -> Result<&GeneratorSymbol> {
        self.symbols
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn set_weight(&mut self, name: &str, w: u64) -> Result<()> {
        let id = self.by_name(name)?.id;
        self.symbols[id].filtration_weight = w;
        Ok(())
    }

    pub fn set_class(&mut self, name: &str, tag: ClassTag) -> Result<()> {
        let id = self.by_name(name)?.id;
        self.symbols[id].class_tag = tag;
        Ok(())
    }
}

pub type ShuffleGenId = usize;

/// Behaviour of a shuffle generator's vertex under child reordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwapBehavior {
    /// Children may be reordered freely; the sign is `+1` (symmetric) or the
    /// sign of the reordering permutation (antisymmetric).
    Signed { antisymmetric: bool },
    /// Binary, no symmetry: swapping the two children toggles to the partner
    /// generator with sign `+1`.
    Partner { other: ShuffleGenId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleGen {
    pub id: ShuffleGenId,
    pub name: String,
    pub arity: usize,
    pub origin: SymbolId,
    pub swap: SwapBehavior,
}

/// Shuffle expansion of a symmetric-level signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleSignature {
    origin: Signature,
    gens: Vec<ShuffleGen>,
    /// Per symmetric symbol, the shuffle generator for the order-preserving
    /// reading of its arguments.
    principal: Vec<ShuffleGenId>,
}

impl ShuffleSignature {
    pub fn from_signature(origin: &Signature) -> Result<Self> {
        let mut gens: Vec<ShuffleGen> = Vec::new();
        let mut principal = Vec::new();
        for sym in origin.symbols() {
            let id = gens.len();
            principal.push(id);
            match sym.symmetry {
                Symmetry::Symmetric | Symmetry::Antisymmetric => {
                    gens.push(ShuffleGen {
                        id,
                        name: sym.name.clone(),
                        arity: sym.arity,
                        origin: sym.id,
                        swap: SwapBehavior::Signed {
                            antisymmetric: sym.symmetry == Symmetry::Antisymmetric,
                        },
                    });
                }
                Symmetry::NoSymmetry => {
                    debug_assert_eq!(sym.arity, 2);
                    gens.push(ShuffleGen {
                        id,
                        name: sym.name.clone(),
                        arity: 2,
                        origin: sym.id,
                        swap: SwapBehavior::Partner { other: id + 1 },
                    });
                    gens.push(ShuffleGen {
                        id: id + 1,
                        name: format!("{}'", sym.name),
                        arity: 2,
                        origin: sym.id,
                        swap: SwapBehavior::Partner { other: id },
                    });
                }
            }
        }
        Ok(ShuffleSignature { origin: origin.clone(), gens, principal })
    }

    pub fn origin(&self) -> &Signature {
        &self.origin
    }

    pub fn gens(&self) -> &[ShuffleGen] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, id: ShuffleGenId) -> &ShuffleGen {
        &self.gens[id]
    }

    pub fn by_name(&self, name: &str) -> Result<&ShuffleGen> {
        self.gens
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Shuffle generator realising the order-preserving reading of a
    /// symmetric-level symbol.
    pub fn principal(&self, sym: SymbolId) -> ShuffleGenId {
        self.principal[sym]
    }

    pub fn origin_symbol(&self, gen: ShuffleGenId) -> &GeneratorSymbol {
        self.origin.get(self.gens[gen].origin)
    }
}
