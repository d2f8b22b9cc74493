//! Executable enriched category theory over finite, decidable bases.
//!
//! The crate is organized in layers:
//!
//! - [`base`] — finitely presented base bicategories (spans of finite sets,
//!   quantale-valued matrices, and the derived module bicategory), with
//!   local colimits, bounded searches, and tight-cell recognition.
//! - [`enriched`] — categories, functors, transformations, and modules
//!   enriched in a base, with law validators that report every failure.
//! - [`modcat`] — the module bicategory: composition by coequalizer,
//!   coherence cells, representability, adjunctions, and equivalence
//!   checks with definite yes/no/unknown outcomes.
//! - [`oracle`] — an independent implementation of profunctor composition
//!   over ordinary finite categories, used to cross-check the machinery.
//!
//! Everything is deterministic: the same inputs produce byte-identical
//! outputs, searches are budgeted, and caps are explicit.

pub mod base;
pub mod bridge;
pub mod collage;
pub mod comp;
pub mod corpus;
pub mod enriched;
pub mod error;
pub mod modcat;
pub mod oracle;
pub mod quantale;
pub mod report;
pub mod suite;
