//! Executable, bounded versions of the algebraic solvability
//! characterizations, for small finite templates.
//!
//! Arc consistency decides a finite template's CSP iff the power structure
//! maps homomorphically back to the template; the peek loop decides it iff
//! for every n the peek power (tuples with a singleton coordinate) maps to
//! the template. The "for all n" side is checked up to an explicit bound:
//! only failures are conclusive, matching the one-sided nature of the
//! criterion. `empirical_pac_decides` tests the same property extensionally
//! by enumerating small instances up to canonical form.

use rayon::prelude::*;

use crate::ac::Template;
use crate::error::{Error, Result};
use crate::hom::{find_homomorphism, HomSearch};
use crate::limits::Limits;
use crate::pac::pacc_holds;
use crate::pp::{eval_pp, PPFormula};
use crate::structure::{
    ind_peek_power, power_structure, Element, ElementLabel, Signature, Structure, SymbolId,
};

/// Enumeration bound for extensional checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceBound {
    pub max_vars: usize,
    pub max_tuples: usize,
}

impl Default for InstanceBound {
    fn default() -> Self {
        InstanceBound { max_vars: 3, max_tuples: 4 }
    }
}

impl InstanceBound {
    pub fn new(max_vars: usize, max_tuples: usize) -> Self {
        InstanceBound { max_vars, max_tuples }
    }
}

/// True iff the power structure of `b` maps homomorphically to `b`.
pub fn ac_solvability_check(b: &Structure, limits: &Limits) -> Result<bool> {
    let p = power_structure(b, limits)?;
    match find_homomorphism(&p, b, limits)? {
        HomSearch::Found(_) => Ok(true),
        HomSearch::NotFound => Ok(false),
        HomSearch::BudgetExhausted => Err(Error::BudgetExhausted),
    }
}

/// For `n = 1..=n_max`, checks whether the peek power of `b` maps
/// homomorphically to `b`, stopping at the first failure (the property is
/// antitone in `n`, so later values would fail too). For finite `b` the
/// peek power is itself finite, so one search per `n` covers every finite
/// substructure by restriction. A failure certifies that the peek loop does
/// not decide the template's CSP; all-passes is evidence bounded by `n_max`.
pub fn pac_characterization_check(
    b: &Structure,
    n_max: usize,
    limits: &Limits,
) -> Result<Vec<(usize, bool)>> {
    let p = power_structure(b, limits)?;
    let mut holds = Vec::new();
    for n in 1..=n_max {
        let ind = ind_peek_power(&p, n, limits)?;
        let ok = match find_homomorphism(&ind, b, limits)? {
            HomSearch::Found(_) => true,
            HomSearch::NotFound => false,
            HomSearch::BudgetExhausted => return Err(Error::BudgetExhausted),
        };
        holds.push((n, ok));
        if !ok {
            break;
        }
    }
    Ok(holds)
}

/// Combinations larger than this are outside the enumerator's remit.
const MAX_ENUM_TUPLES: usize = 16;

/// The constraint space over `v` variables: every `(symbol, variable
/// tuple)` in lexicographic order, with the variable-renaming action
/// precomputed as index maps so candidate instances can be canonicalized
/// without allocating.
pub(crate) struct InstanceSpace {
    signature: Signature,
    v: usize,
    space: Vec<(SymbolId, Vec<Element>)>,
    var_masks: Vec<u64>,
    /// For each non-identity permutation of the variables, the induced map
    /// on space indices.
    perm_maps: Vec<Vec<u32>>,
}

impl InstanceSpace {
    pub(crate) fn new(signature: &Signature, v: usize) -> Self {
        use itertools::Itertools;
        let mut space = Vec::new();
        let mut offsets = Vec::new();
        for (sym, _, arity) in signature.iter() {
            offsets.push(space.len());
            for tuple in crate::structure::tuples_lex(v, arity) {
                space.push((sym, tuple));
            }
        }
        let var_masks = space
            .iter()
            .map(|(_, t)| t.iter().fold(0u64, |m, &e| m | 1 << e))
            .collect();
        let index_of = |sym: SymbolId, tuple: &[Element]| -> u32 {
            let flat = tuple.iter().fold(0usize, |acc, &e| acc * v + e);
            (offsets[sym] + flat) as u32
        };
        let mut perm_maps = Vec::new();
        for perm in (0..v).permutations(v) {
            if perm.iter().enumerate().all(|(i, &p)| i == p) {
                continue;
            }
            let map = space
                .iter()
                .map(|(sym, tuple)| {
                    let permuted: Vec<Element> = tuple.iter().map(|&e| perm[e]).collect();
                    index_of(*sym, &permuted)
                })
                .collect();
            perm_maps.push(map);
        }
        InstanceSpace { signature: signature.clone(), v, space, var_masks, perm_maps }
    }

    pub(crate) fn len(&self) -> usize {
        self.space.len()
    }

    fn vars_used(&self, combo: &[usize]) -> bool {
        let mask = combo.iter().fold(0u64, |m, &i| m | self.var_masks[i]);
        self.v == 0 || mask == (1u64 << self.v) - 1
    }

    /// Lex-least under variable renaming; combos index into the sorted
    /// space, so the combo itself is the sorted tuple list.
    fn is_canonical(&self, combo: &[usize]) -> bool {
        debug_assert!(combo.len() <= MAX_ENUM_TUPLES);
        let mut mapped = [0u32; MAX_ENUM_TUPLES];
        let k = combo.len();
        'perm: for map in &self.perm_maps {
            for (slot, &idx) in mapped[..k].iter_mut().zip(combo.iter()) {
                *slot = map[idx];
            }
            mapped[..k].sort_unstable();
            for (m, &o) in mapped[..k].iter().zip(combo.iter()) {
                match (*m as usize).cmp(&o) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue 'perm,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    pub(crate) fn accepts(&self, combo: &[usize]) -> bool {
        self.vars_used(combo) && self.is_canonical(combo)
    }

    pub(crate) fn build(&self, combo: &[usize]) -> Structure {
        let mut relations: Vec<(String, Vec<Vec<Element>>)> = self
            .signature
            .iter()
            .map(|(_, name, _)| (name.to_string(), Vec::new()))
            .collect();
        for &idx in combo {
            let (sym, tuple) = &self.space[idx];
            relations[*sym].1.push(tuple.clone());
        }
        let labels = (0..self.v).map(|i| ElementLabel::Named(format!("a{i}"))).collect();
        Structure::with_labels(self.signature.clone(), labels, relations)
            .expect("enumerated in range")
    }
}

/// Visits every canonical instance within the bound (all variables used,
/// lex-least under renaming), in a fixed order. Stops early when the
/// visitor returns `false`.
pub fn for_each_canonical_instance<F>(
    signature: &Signature,
    bound: InstanceBound,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&Structure) -> Result<bool>,
{
    let max_tuples = bound.max_tuples.min(MAX_ENUM_TUPLES);
    for v in 0..=bound.max_vars {
        let space = InstanceSpace::new(signature, v);
        if v == 0 {
            if !visit(&space.build(&[]))? {
                return Ok(());
            }
            continue;
        }
        fn rec<F>(
            space: &InstanceSpace,
            combo: &mut Vec<usize>,
            start: usize,
            max_tuples: usize,
            visit: &mut F,
        ) -> Result<bool>
        where
            F: FnMut(&Structure) -> Result<bool>,
        {
            for idx in start..space.len() {
                combo.push(idx);
                if space.accepts(combo) && !visit(&space.build(combo))? {
                    combo.pop();
                    return Ok(false);
                }
                if combo.len() < max_tuples
                    && !rec(space, combo, idx + 1, max_tuples, visit)?
                {
                    combo.pop();
                    return Ok(false);
                }
                combo.pop();
            }
            Ok(true)
        }
        let mut combo = Vec::new();
        if !rec(&space, &mut combo, 0, max_tuples, &mut visit)? {
            return Ok(());
        }
    }
    Ok(())
}

/// Extensional check that the peek loop decides the template's CSP on every
/// canonical instance within the bound. Returns the first instance (in
/// enumeration order) accepted by the peek loop but admitting no
/// homomorphism, if any. Enumeration is parallelized per size layer with a
/// deterministic least-witness reduction.
pub fn empirical_pac_decides(
    b: &Structure,
    bound: InstanceBound,
    limits: &Limits,
) -> Result<(bool, Option<Structure>)> {
    for v in 1..=bound.max_vars {
        // the v = 0 empty instance maps trivially
        let space = InstanceSpace::new(b.signature(), v);
        for k in 1..=bound.max_tuples.min(space.len()).min(MAX_ENUM_TUPLES) {
            // parallel over the first chosen index; each task scans its
            // residual combinations in lex order
            let layer: Result<Vec<Violation>> = (0..space.len())
                .into_par_iter()
                .map(|first| {
                    let mut combo = vec![first];
                    first_violation(b, &space, k, &mut combo, first + 1, limits)
                })
                .collect();
            let earliest = layer?
                .into_iter()
                .flatten()
                .min_by(|(a, _), (b, _)| a.cmp(b));
            if let Some((_, instance)) = earliest {
                return Ok((false, Some(instance)));
            }
        }
    }
    Ok((true, None))
}

/// A peek-accepted instance without a homomorphism, keyed by its position
/// in the enumeration order.
type Violation = Option<(Vec<usize>, Structure)>;

fn first_violation(
    b: &Structure,
    space: &InstanceSpace,
    k: usize,
    combo: &mut Vec<usize>,
    start: usize,
    limits: &Limits,
) -> Result<Violation> {
    if combo.len() == k {
        if !space.accepts(combo) {
            return Ok(None);
        }
        let instance = space.build(combo);
        if pacc_holds(&instance, Template::Finite(b), limits)? {
            match find_homomorphism(&instance, b, limits)? {
                HomSearch::Found(_) => {}
                HomSearch::NotFound => return Ok(Some((combo.clone(), instance))),
                HomSearch::BudgetExhausted => return Err(Error::BudgetExhausted),
            }
        }
        return Ok(None);
    }
    for idx in start..space.len() {
        combo.push(idx);
        let hit = first_violation(b, space, k, combo, idx + 1, limits)?;
        combo.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Expansion of a structure by pp-definable relations.
pub fn pp_expand(b: &Structure, defs: &[(String, PPFormula)]) -> Result<Structure> {
    let mut names: Vec<(String, usize)> = b
        .signature()
        .iter()
        .map(|(_, name, arity)| (name.to_string(), arity))
        .collect();
    let mut relations: Vec<(String, Vec<Vec<Element>>)> = b
        .signature()
        .iter()
        .map(|(sym, name, _)| (name.to_string(), b.relation(sym).to_vec()))
        .collect();
    for (name, phi) in defs {
        if phi.arity() == 0 {
            return Err(Error::Invalid(format!("relation `{name}` would have arity 0")));
        }
        if names.iter().any(|(n, _)| n == name) {
            return Err(Error::DuplicateSymbol(name.clone()));
        }
        names.push((name.clone(), phi.arity()));
        relations.push((name.clone(), eval_pp(phi, b)?));
    }
    let signature = Signature::new(names)?;
    let labels = b.elements().map(|e| b.label(e).clone()).collect();
    Structure::with_labels(signature, labels, relations)
}

/// Everything the meta layer can say about one template.
#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub template_id: String,
    pub ac_solvable: bool,
    pub pac_bounded: Vec<(usize, bool)>,
    pub empirical_bound: InstanceBound,
    pub empirical_decides: bool,
    pub counterexample: Option<Structure>,
}

impl CharacterizationReport {
    /// Machine-readable one-line form:
    /// `template <id> ac <y/n> pac_n <n>:<y/n> ... empirical <y/n>`.
    pub fn render_line(&self) -> String {
        let yn = |b: bool| if b { "y" } else { "n" };
        let mut out = format!("template {} ac {}", self.template_id, yn(self.ac_solvable));
        for (n, ok) in &self.pac_bounded {
            out.push_str(&format!(" pac_n {}:{}", n, yn(*ok)));
        }
        out.push_str(&format!(" empirical {}", yn(self.empirical_decides)));
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("template: {}\n", self.template_id);
        out.push_str(&format!(
            "  arc consistency decides (power structure maps back): {}\n",
            self.ac_solvable
        ));
        for (n, ok) in &self.pac_bounded {
            out.push_str(&format!("  peek power n={n} maps to template: {ok}\n"));
        }
        out.push_str(&format!(
            "  empirical peek-decides up to {} vars / {} tuples: {}\n",
            self.empirical_bound.max_vars, self.empirical_bound.max_tuples, self.empirical_decides
        ));
        if let Some(cx) = &self.counterexample {
            out.push_str("  counterexample instance:\n");
            for line in crate::io::serialize_structure(cx).lines() {
                out.push_str(&format!("    {line}\n"));
            }
        }
        out
    }
}

/// Runs all three checks on one template.
pub fn characterize(
    b: &Structure,
    template_id: &str,
    n_max: usize,
    bound: InstanceBound,
    limits: &Limits,
) -> Result<CharacterizationReport> {
    let ac_solvable = ac_solvability_check(b, limits)?;
    let pac_bounded = pac_characterization_check(b, n_max, limits)?;
    let (empirical_decides, counterexample) = empirical_pac_decides(b, bound, limits)?;
    Ok(CharacterizationReport {
        template_id: template_id.to_string(),
        ac_solvable,
        pac_bounded,
        empirical_bound: bound,
        empirical_decides,
        counterexample,
    })
}
