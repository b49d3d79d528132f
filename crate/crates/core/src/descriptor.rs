//! Finite encodings of infinite-domain templates.
//!
//! A descriptor exposes what the generalized arc consistency procedure
//! needs and nothing else: a finite meet-lattice of labels (standing for the
//! pp-definable unary relations of the template expanded by a pinned
//! constant), one pinnable representative per orbit, and a per-position
//! projection `propagate` that is contracting and monotone. Propagation
//! returns bottom at a position exactly when the corresponding projection
//! formula defines the empty set.

use crate::error::{Error, Result};
use crate::structure::{Signature, SymbolId};

/// A label in a descriptor's lattice (small integer; meaning is
/// descriptor-specific).
pub type Label = u32;

/// Index of an orbit representative.
pub type RepId = usize;

pub trait TemplateDescriptor: Send + Sync {
    fn name(&self) -> &str;

    fn signature(&self) -> &Signature;

    /// One representative per orbit of the template.
    fn representatives(&self) -> Vec<RepId>;

    fn representative_name(&self, rep: RepId) -> String;

    fn top(&self) -> Label;

    fn bottom(&self) -> Label;

    fn meet(&self, a: Label, b: Label) -> Label;

    /// The label a freshly pinned variable receives.
    fn pin(&self, rep: RepId) -> Result<Label>;

    /// Per-position refinement for one constraint of symbol `sym`. Receives
    /// the current labels at each scope position (positions sharing a
    /// variable receive the same label) and refines each position
    /// independently; the engine meets the results back into the variables.
    fn propagate(&self, sym: SymbolId, labels: &[Label]) -> Result<Vec<Label>>;

    fn label_name(&self, label: Label) -> String;
}

/// Atomic signs of a rational relative to the pinned constant 0.
const SIGN_NEG: u32 = 0b001;
const SIGN_ZERO: u32 = 0b010;
const SIGN_POS: u32 = 0b100;
const SIGN_ALL: u32 = 0b111;
const SIGN_NAMES: [(u32, &str); 3] = [(SIGN_NEG, "N"), (SIGN_ZERO, "Z"), (SIGN_POS, "P")];

/// The point algebra of temporal reasoning: the rationals with `leq` and
/// `neq`. A single orbit; labels are the nonempty sign sets
/// {negative, zero, positive} relative to the pinned point, plus bottom.
///
/// A sign pair (s, t) supports `leq` iff some rationals p <= q carry those
/// signs, which holds iff s does not rank above t; it supports `neq` unless
/// both signs are zero (the only case forcing p = q). Each table entry is
/// checked against explicit rational witnesses in the tests.
pub struct PointAlgebra {
    signature: Signature,
}

impl PointAlgebra {
    pub fn new() -> Self {
        let signature = Signature::new(vec![("leq", 2), ("neq", 2)]).expect("static signature");
        PointAlgebra { signature }
    }

    pub fn leq_symbol(&self) -> SymbolId {
        0
    }

    pub fn neq_symbol(&self) -> SymbolId {
        1
    }

    fn rank(sign: u32) -> u8 {
        match sign {
            SIGN_NEG => 0,
            SIGN_ZERO => 1,
            SIGN_POS => 2,
            _ => unreachable!("atomic sign expected"),
        }
    }

    /// Support table for atomic sign pairs.
    pub fn supports(&self, sym: SymbolId, s: u32, t: u32) -> bool {
        match sym {
            0 => Self::rank(s) <= Self::rank(t),
            1 => !(s == SIGN_ZERO && t == SIGN_ZERO),
            _ => unreachable!("point algebra has two symbols"),
        }
    }
}

impl Default for PointAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl TemplateDescriptor for PointAlgebra {
    fn name(&self) -> &str {
        "point-algebra"
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn representatives(&self) -> Vec<RepId> {
        vec![0]
    }

    fn representative_name(&self, _rep: RepId) -> String {
        "0".to_string()
    }

    fn top(&self) -> Label {
        SIGN_ALL
    }

    fn bottom(&self) -> Label {
        0
    }

    fn meet(&self, a: Label, b: Label) -> Label {
        a & b
    }

    fn pin(&self, rep: RepId) -> Result<Label> {
        if rep != 0 {
            return Err(Error::UnknownRepresentative(rep));
        }
        Ok(SIGN_ZERO)
    }

    fn propagate(&self, sym: SymbolId, labels: &[Label]) -> Result<Vec<Label>> {
        if sym > 1 {
            return Err(Error::UnknownSymbol(format!("symbol id {sym}")));
        }
        if labels.len() != 2 {
            return Err(Error::ArityMismatch {
                symbol: self.signature.name(sym).to_string(),
                expected: 2,
                got: labels.len(),
            });
        }
        let (left, right) = (labels[0], labels[1]);
        let signs = [SIGN_NEG, SIGN_ZERO, SIGN_POS];
        let mut new_left = 0;
        let mut new_right = 0;
        for &s in &signs {
            if left & s != 0 && signs.iter().any(|&t| right & t != 0 && self.supports(sym, s, t)) {
                new_left |= s;
            }
        }
        for &t in &signs {
            if right & t != 0 && signs.iter().any(|&s| left & s != 0 && self.supports(sym, s, t)) {
                new_right |= t;
            }
        }
        Ok(vec![new_left, new_right])
    }

    fn label_name(&self, label: Label) -> String {
        if label == 0 {
            return "bottom".to_string();
        }
        let parts: Vec<&str> = SIGN_NAMES
            .iter()
            .filter(|(bit, _)| label & bit != 0)
            .map(|(_, name)| *name)
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}
