//! Set constraints: containment, disjointness, and disequality between
//! set-valued variables.
//!
//! The peek decision is the pattern test matching what the peek loop would
//! compute: close containment under reflexive reachability and reject iff a
//! reflexive disequality exists, or some element is above both sides of a
//! disequality and below both sides of a disjointness. The independent
//! oracle assigns subsets of a small universe exhaustively; a universe of
//! `2^vars` elements is enough for completeness because a satisfying family
//! of arbitrary sets can be collapsed to one witness element per occupied
//! membership region.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pac::Decision;
use crate::templates::reach::Reachability;

/// A set-constraint network: `sub` pairs (x contained in y), `dis` pairs
/// (x disjoint from y), `neq` pairs (x distinct from y).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SetConstraintInstance {
    names: Vec<String>,
    subs: Vec<(usize, usize)>,
    diss: Vec<(usize, usize)>,
    neqs: Vec<(usize, usize)>,
}

impl SetConstraintInstance {
    pub fn new(n_vars: usize) -> Self {
        SetConstraintInstance {
            names: (0..n_vars).map(|i| format!("x{i}")).collect(),
            ..Default::default()
        }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        SetConstraintInstance { names, ..Default::default() }
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn subs(&self) -> &[(usize, usize)] {
        &self.subs
    }

    pub fn diss(&self) -> &[(usize, usize)] {
        &self.diss
    }

    pub fn neqs(&self) -> &[(usize, usize)] {
        &self.neqs
    }

    fn check(&self, x: usize, y: usize) -> Result<()> {
        for v in [x, y] {
            if v >= self.n_vars() {
                return Err(Error::ForeignElement { element: v, universe: self.n_vars() });
            }
        }
        Ok(())
    }

    pub fn add_sub(&mut self, x: usize, y: usize) -> Result<()> {
        self.check(x, y)?;
        self.subs.push((x, y));
        Ok(())
    }

    pub fn add_dis(&mut self, x: usize, y: usize) -> Result<()> {
        self.check(x, y)?;
        self.diss.push((x, y));
        Ok(())
    }

    pub fn add_neq(&mut self, x: usize, y: usize) -> Result<()> {
        self.check(x, y)?;
        self.neqs.push((x, y));
        Ok(())
    }

    pub fn constraint_count(&self) -> usize {
        self.subs.len() + self.diss.len() + self.neqs.len()
    }
}

/// The polynomial decision for a set-constraint network, by containment
/// closure.
///
/// Close containment under reflexive-transitive reachability. A variable is
/// forced empty when it sits below both sides of some disjointness pair
/// (possibly a reflexive one). Reject exactly when some disequality pair
/// has both endpoints in one containment cycle (mutual containment means
/// equality; reflexive disequalities are the one-variable case) or both
/// endpoints forced empty. Otherwise one witness element per surviving
/// containment class builds a model.
///
/// The reject conditions subsume the chain pattern "x and y distinct, both
/// below some e, e below two disjoint variables": such an e forces both x
/// and y empty. They also catch the degenerate networks that the chain
/// pattern alone misses, such as mutual containment plus disequality, or
/// two reflexive disjointnesses joined by a disequality.
pub fn set_constraint_pac(instance: &SetConstraintInstance) -> Decision {
    let n = instance.n_vars();
    let reach = Reachability::new(n, instance.subs.iter().copied());
    let forced_empty = |w: usize| {
        instance
            .diss
            .iter()
            .any(|&(u, v)| reach.reaches(w, u) && reach.reaches(w, v))
    };
    for &(x, y) in &instance.neqs {
        if reach.reaches(x, y) && reach.reaches(y, x) {
            return Decision::Reject;
        }
        if forced_empty(x) && forced_empty(y) {
            return Decision::Reject;
        }
    }
    Decision::Accept
}

/// Exhaustive small-model satisfiability: assign each variable a subset of
/// `{0, .., m-1}` and check every constraint. With `m = 2^vars` this is
/// complete for satisfiability over arbitrary sets. The assignment space is
/// walked variable by variable, checking each constraint as soon as both
/// endpoints are assigned.
pub fn set_constraint_oracle(
    instance: &SetConstraintInstance,
    m: usize,
    limits: &Limits,
) -> Result<bool> {
    let v = instance.n_vars();
    if v > limits.set_oracle_vars {
        return Err(Error::UniverseCap { size: v, cap: limits.set_oracle_vars });
    }
    if m > 20 {
        return Err(Error::UniverseCap { size: m, cap: 20 });
    }
    if v == 0 {
        return Ok(true);
    }

    #[derive(Clone, Copy)]
    enum Kind {
        Sub,
        Dis,
        Neq,
    }
    // constraints keyed by the later-assigned endpoint
    let mut checks_at: Vec<Vec<(Kind, usize, usize)>> = (0..v).map(|_| Vec::new()).collect();
    for &(x, y) in &instance.subs {
        checks_at[x.max(y)].push((Kind::Sub, x, y));
    }
    for &(x, y) in &instance.diss {
        checks_at[x.max(y)].push((Kind::Dis, x, y));
    }
    for &(x, y) in &instance.neqs {
        checks_at[x.max(y)].push((Kind::Neq, x, y));
    }

    fn rec(
        var: usize,
        v: usize,
        m: usize,
        sets: &mut Vec<u64>,
        checks_at: &[Vec<(Kind, usize, usize)>],
        budget: &mut u64,
    ) -> Result<bool> {
        if var == v {
            return Ok(true);
        }
        for candidate in 0..(1u64 << m) {
            if *budget == 0 {
                return Err(Error::BudgetExhausted);
            }
            *budget -= 1;
            sets.push(candidate);
            let ok = checks_at[var].iter().all(|&(kind, x, y)| match kind {
                Kind::Sub => sets[x] & !sets[y] == 0,
                Kind::Dis => sets[x] & sets[y] == 0,
                Kind::Neq => sets[x] != sets[y],
            });
            if ok && rec(var + 1, v, m, sets, checks_at, budget)? {
                return Ok(true);
            }
            sets.pop();
        }
        Ok(false)
    }

    let mut sets = Vec::with_capacity(v);
    let mut budget = limits.set_oracle_nodes;
    rec(0, v, m, &mut sets, &checks_at, &mut budget)
}

/// Default complete universe size for the oracle.
pub fn default_oracle_universe(n_vars: usize) -> usize {
    1usize << n_vars
}
