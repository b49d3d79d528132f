//! Arc consistency engines.
//!
//! `ac_finite` propagates set-valued domains (bitmasks over a finite
//! template's universe) to the greatest fixpoint of hyperarc revision; a
//! consistent fixpoint is exactly a homomorphism from the instance to the
//! power structure of the template, pointwise greatest among all such.
//!
//! `ac_descriptor` runs the same worklist over the finite label lattice of a
//! [`TemplateDescriptor`], which is how infinite-domain templates are
//! propagated: labels stand for pp-definable unary relations and the
//! descriptor's `propagate` plays the role of the per-position projection.
//!
//! The repeated-variable convention matters: positions of a scope holding
//! the same variable read the same domain, but a supporting template tuple
//! is not required to be constant on them. This is the power-structure
//! homomorphism semantics; requiring constancy would be strictly stronger.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::descriptor::{Label, RepId, TemplateDescriptor};
use crate::error::{Error, Result};
use crate::structure::{Element, Structure, SymbolId};

/// Fixpoint status of a propagation run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Consistent,
    Inconsistent,
}

/// One domain shrink, attributed to a constraint position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkEvent<D> {
    pub constraint: usize,
    pub position: usize,
    pub variable: Element,
    pub old: D,
    pub new: D,
}

/// Final state of a propagation run. `status` is `Inconsistent` exactly when
/// some domain reached empty/bottom; the trace, when recorded, replays from
/// the initial domains to `domains`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationOutcome<D> {
    pub status: Status,
    pub domains: Vec<D>,
    pub trace: Option<Vec<ShrinkEvent<D>>>,
}

impl<D> PropagationOutcome<D> {
    pub fn is_consistent(&self) -> bool {
        self.status == Status::Consistent
    }
}

/// Engine knobs. The worklist engine and the naive restart loop compute the
/// same fixpoint; the naive mode exists for differential testing. A shuffle
/// seed randomizes worklist pops, used to exercise order independence.
#[derive(Clone, Debug, Default)]
pub struct AcOptions {
    pub naive: bool,
    pub record_trace: bool,
    pub shuffle_seed: Option<u64>,
}

/// A flattened constraint: symbol plus variable scope.
struct Constraint {
    sym: SymbolId,
    scope: Vec<Element>,
}

fn flatten_constraints(instance: &Structure) -> Vec<Constraint> {
    let mut out = Vec::new();
    for (sym, _, _) in instance.signature().iter() {
        for tuple in instance.relation(sym) {
            out.push(Constraint { sym, scope: tuple.clone() });
        }
    }
    out
}

/// Generic chaotic-iteration worklist. `revise` returns the per-position
/// refined domains for one constraint; refinements are met into the shared
/// per-variable domains. Runs until fixpoint or an empty domain.
fn run_worklist<D, F>(
    n_vars: usize,
    constraints: &[Constraint],
    domains: &mut [D],
    meet: impl Fn(D, D) -> D,
    is_empty: impl Fn(&D) -> bool,
    mut revise: F,
    options: &AcOptions,
) -> Result<(Status, Option<Vec<ShrinkEvent<D>>>)>
where
    D: Copy + Eq,
    F: FnMut(&Constraint, &[D]) -> Result<Vec<D>>,
{
    let mut trace = options.record_trace.then(Vec::new);
    if domains.iter().any(&is_empty) {
        return Ok((Status::Inconsistent, trace));
    }

    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n_vars];
    for (ci, c) in constraints.iter().enumerate() {
        for &v in &c.scope {
            if !touching[v].contains(&ci) {
                touching[v].push(ci);
            }
        }
    }

    let mut queue: Vec<usize> = (0..constraints.len()).collect();
    let mut queued = vec![true; constraints.len()];
    let mut rng = options.shuffle_seed.map(ChaCha8Rng::seed_from_u64);

    while !queue.is_empty() {
        let ci = match rng.as_mut() {
            Some(r) => queue.swap_remove(r.gen_range(0..queue.len())),
            None => queue.remove(0),
        };
        queued[ci] = false;
        let c = &constraints[ci];
        let current: Vec<D> = c.scope.iter().map(|&v| domains[v]).collect();
        let refined = revise(c, &current)?;
        debug_assert_eq!(refined.len(), c.scope.len());
        for (pos, (&var, &new_label)) in c.scope.iter().zip(refined.iter()).enumerate() {
            let old = domains[var];
            let new = meet(old, new_label);
            if new != old {
                domains[var] = new;
                if let Some(t) = trace.as_mut() {
                    t.push(ShrinkEvent { constraint: ci, position: pos, variable: var, old, new });
                }
                if is_empty(&new) {
                    return Ok((Status::Inconsistent, trace));
                }
                for &dep in &touching[var] {
                    if !queued[dep] {
                        queued[dep] = true;
                        queue.push(dep);
                    }
                }
            }
        }
    }
    Ok((Status::Consistent, trace))
}

/// Same fixpoint as [`run_worklist`], recomputing every constraint in
/// canonical order until a full pass changes nothing.
fn run_naive<D, F>(
    constraints: &[Constraint],
    domains: &mut [D],
    meet: impl Fn(D, D) -> D,
    is_empty: impl Fn(&D) -> bool,
    mut revise: F,
    record_trace: bool,
) -> Result<(Status, Option<Vec<ShrinkEvent<D>>>)>
where
    D: Copy + Eq,
    F: FnMut(&Constraint, &[D]) -> Result<Vec<D>>,
{
    let mut trace = record_trace.then(Vec::new);
    if domains.iter().any(&is_empty) {
        return Ok((Status::Inconsistent, trace));
    }
    loop {
        let mut changed = false;
        for (ci, c) in constraints.iter().enumerate() {
            let current: Vec<D> = c.scope.iter().map(|&v| domains[v]).collect();
            let refined = revise(c, &current)?;
            for (pos, (&var, &new_label)) in c.scope.iter().zip(refined.iter()).enumerate() {
                let old = domains[var];
                let new = meet(old, new_label);
                if new != old {
                    domains[var] = new;
                    changed = true;
                    if let Some(t) = trace.as_mut() {
                        t.push(ShrinkEvent {
                            constraint: ci,
                            position: pos,
                            variable: var,
                            old,
                            new,
                        });
                    }
                    if is_empty(&new) {
                        return Ok((Status::Inconsistent, trace));
                    }
                }
            }
        }
        if !changed {
            return Ok((Status::Consistent, trace));
        }
    }
}

/// Per-position supports for one constraint against a finite template: a
/// template tuple supports the constraint iff every position's entry lies in
/// the current domain of the variable at that position; position `i` then
/// collects the entry at `i`.
fn finite_revise(template: &Structure, c: &Constraint, current: &[u64]) -> Vec<u64> {
    let arity = current.len();
    let mut supports = vec![0u64; arity];
    'tuple: for tuple in template.relation(c.sym) {
        for (j, &e) in tuple.iter().enumerate() {
            if current[j] >> e & 1 == 0 {
                continue 'tuple;
            }
        }
        for (i, &e) in tuple.iter().enumerate() {
            supports[i] |= 1 << e;
        }
    }
    supports
}

/// Runs hyperarc consistency of `instance` against a finite `template`,
/// optionally pinning variables to single template values. The result's
/// domains are the greatest fixpoint: when consistent they encode the
/// pointwise-greatest homomorphism from the instance to the power structure
/// of the template (restricted to the pins).
pub fn ac_finite(
    instance: &Structure,
    template: &Structure,
    pins: &[(Element, Element)],
    options: &AcOptions,
) -> Result<PropagationOutcome<u64>> {
    if instance.signature() != template.signature() {
        return Err(Error::SignatureMismatch(
            "arc consistency needs instance and template over one signature".into(),
        ));
    }
    let m = template.size();
    if m > 64 {
        return Err(Error::UniverseCap { size: m, cap: 64 });
    }
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut domains = vec![full; instance.size()];
    for &(var, value) in pins {
        if var >= instance.size() {
            return Err(Error::ForeignElement { element: var, universe: instance.size() });
        }
        if value >= m {
            return Err(Error::ForeignElement { element: value, universe: m });
        }
        domains[var] &= 1 << value;
    }

    let constraints = flatten_constraints(instance);
    let revise = |c: &Constraint, current: &[u64]| Ok(finite_revise(template, c, current));
    let (status, trace) = if options.naive {
        run_naive(&constraints, &mut domains, |a, b| a & b, |d| *d == 0, revise, options.record_trace)?
    } else {
        run_worklist(instance.size(), &constraints, &mut domains, |a, b| a & b, |d| *d == 0, revise, options)?
    };
    Ok(PropagationOutcome { status, domains, trace })
}

/// Runs the descriptor engine: the same worklist, with domains drawn from
/// the descriptor's finite label lattice and revision delegated to the
/// descriptor's per-position projection.
pub fn ac_descriptor(
    instance: &Structure,
    desc: &dyn TemplateDescriptor,
    pins: &[(Element, RepId)],
    options: &AcOptions,
) -> Result<PropagationOutcome<Label>> {
    // instance symbols must appear in the descriptor signature (a strict
    // subset is fine; absent symbols simply contribute no constraints)
    let mut sym_map = Vec::with_capacity(instance.signature().len());
    for (_, name, arity) in instance.signature().iter() {
        let target = desc
            .signature()
            .id(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if desc.signature().arity(target) != arity {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: desc.signature().arity(target),
                got: arity,
            });
        }
        sym_map.push(target);
    }

    let mut domains = vec![desc.top(); instance.size()];
    for &(var, rep) in pins {
        if var >= instance.size() {
            return Err(Error::ForeignElement { element: var, universe: instance.size() });
        }
        let label = desc.pin(rep)?;
        domains[var] = desc.meet(domains[var], label);
    }

    let constraints = flatten_constraints(instance);
    let bottom = desc.bottom();
    let revise =
        |c: &Constraint, current: &[Label]| desc.propagate(sym_map[c.sym], current);
    let meet = |a: Label, b: Label| desc.meet(a, b);
    let is_empty = |d: &Label| *d == bottom;
    let (status, trace) = if options.naive {
        run_naive(&constraints, &mut domains, meet, is_empty, revise, options.record_trace)?
    } else {
        run_worklist(instance.size(), &constraints, &mut domains, meet, is_empty, revise, options)?
    };
    Ok(PropagationOutcome { status, domains, trace })
}

/// Either kind of constraint template.
#[derive(Clone, Copy)]
pub enum Template<'a> {
    Finite(&'a Structure),
    Descriptor(&'a dyn TemplateDescriptor),
}

impl<'a> Template<'a> {
    pub fn name(&self) -> String {
        match self {
            Template::Finite(b) => format!("finite({:?})", b),
            Template::Descriptor(d) => d.name().to_string(),
        }
    }
}

/// The arc consistency condition: does propagation without pins reach a
/// consistent fixpoint?
pub fn acc_holds(instance: &Structure, template: Template<'_>) -> Result<bool> {
    let options = AcOptions::default();
    Ok(match template {
        Template::Finite(b) => ac_finite(instance, b, &[], &options)?.is_consistent(),
        Template::Descriptor(d) => ac_descriptor(instance, d, &[], &options)?.is_consistent(),
    })
}
