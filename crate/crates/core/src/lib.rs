//! Decision procedures built on arc consistency for constraint satisfaction
//! over finite and infinite domains.
//!
//! The crate has three layers. The relational core ([`structure`], [`hom`],
//! [`pp`], [`op`], [`orbits`]) provides finite structures, the power and
//! peek-power constructions, homomorphism search, pp-formula evaluation, and
//! orbit computation. The engines ([`ac`], [`descriptor`], [`pac`]) run
//! hyperarc consistency — over set-valued domains for finite templates and
//! over finite label lattices for infinite-domain templates — and the peek
//! loop on top. [`templates`] ships the constraint languages the peek loop
//! decides (2-SAT, bipartite graphs, unbalanced orientations of cycles, the
//! point algebra, set constraints) together with independent oracles, and
//! [`meta`] turns the algebraic solvability characterizations into bounded
//! executable checks for small finite templates.

pub mod ac;
pub mod descriptor;
pub mod error;
pub mod gen;
pub mod hom;
pub mod io;
pub mod limits;
pub mod meta;
pub mod op;
pub mod orbits;
pub mod pac;
pub mod pp;
pub mod structure;
pub mod templates;

pub use ac::{ac_descriptor, ac_finite, acc_holds, AcOptions, PropagationOutcome, Status, Template};
pub use error::{Error, Result};
pub use hom::{find_homomorphism, HomSearch, Homomorphism};
pub use limits::Limits;
pub use pac::{pac_decide, pacc_holds, Decision, PacOptions, PeekReport};
pub use structure::{
    expand_with_unary, ind_peek_power, induced_substructure, power, power_structure, product,
    Element, ElementLabel, Signature, Structure, SymbolId,
};
