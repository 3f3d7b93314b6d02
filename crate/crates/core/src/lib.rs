//! Shuffle-operad tree monomials, rewriting, presentation catalog and
//! generating functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`sig`] — generator signatures and their shuffle expansions;
//! * [`monomial`] — canonical shuffle tree monomials, straightening,
//!   composition and enumeration;
//! * [`order`] — admissible monomial orders;
//! * [`element`] — linear combinations over exact rationals;
//! * [`expr`] — the relation expression language and presentations;
//! * [`expand`] — symmetric-to-shuffle expansion of relations;
//! * [`occurrence`], [`rewrite`] — pattern matching, reduction, critical
//!   pairs and completion;
//! * [`polarize`] — the polarization change of basis;
//! * [`span`] — dimensions of suboperads spanned by chosen generators;
//! * [`catalog`] — built-in presentations and derived constructions;
//! * [`checks`] — end-to-end verification flows;
//! * [`series`] — exponential generating functions.

pub mod catalog;
pub mod checks;
pub mod element;
pub mod error;
pub mod expand;
pub mod expr;
pub mod monomial;
pub mod occurrence;
pub mod order;
pub mod polarize;
pub mod rewrite;
pub mod series;
pub mod scalar;
pub mod sig;
pub mod span;

pub use catalog::{almost_composite, hertling_manin_rhs, lie_filtration_weights, preset, with_rewriting_rhs, PresetId, RhsMap};
pub use checks::{
    is_almost_distributive, run_check, CheckConfig, CheckReport, CheckStatus, Witness,
    CHECK_NAMES,
};
pub use element::{Element, WeightAssignment};
pub use error::Error;
pub use expand::ShufflePresentation;
pub use expr::{ExprNode, Presentation, RelationExpr};
pub use monomial::ShuffleTreeMonomial;
pub use occurrence::Occurrence;
pub use order::{CompiledOrder, OrderSpec};
pub use polarize::Polarization;
pub use rewrite::{
    CompletionReport, CriticalPair, ReductionStep, RewriteRule, RewriteSystem,
    DEFAULT_STEP_LIMIT,
};
pub use scalar::Scalar;
pub use series::Egf;
pub use sig::{GeneratorSymbol, ShuffleSignature, Signature, Symmetry};
pub use span::{compose_elements, suboperad_dims, Echelon};
