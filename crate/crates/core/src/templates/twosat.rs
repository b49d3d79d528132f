//! The two-element 2-SAT template and the clause encoding into it.
//!
//! Each relation forbids exactly one assignment pair: `Rst` holds the pairs
//! distinct from `(s, t)`. A clause maps to the relation indexed by its
//! forbidden assignment (1 for a negative literal). `R10` is the transpose
//! of `R01` — a pp-expansion added so mixed-sign clauses encode in either
//! literal order.

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// A literal: variable index plus negation flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl From<(usize, bool)> for Literal {
    fn from((var, negated): (usize, bool)) -> Self {
        Literal { var, negated }
    }
}

/// A two-literal clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clause {
    pub first: Literal,
    pub second: Literal,
}

impl Clause {
    pub fn new(first: impl Into<Literal>, second: impl Into<Literal>) -> Self {
        Clause { first: first.into(), second: second.into() }
    }

    /// True under a total assignment given as a bitmask over variables.
    pub fn satisfied(&self, assignment: u64) -> bool {
        let value = |l: &Literal| (assignment >> l.var & 1 == 1) != l.negated;
        value(&self.first) || value(&self.second)
    }
}

pub(crate) fn two_sat_signature() -> Signature {
    Signature::new(vec![("R00", 2), ("R01", 2), ("R11", 2), ("R10", 2)]).expect("static")
}

/// The 2-SAT structure on {0,1}: `R00`, `R01`, `R11` each drop one pair from
/// the full square, and `R10` is the transpose of `R01`.
pub fn two_sat_template() -> Structure {
    let all = |skip: (usize, usize)| -> Vec<Vec<usize>> {
        let mut tuples = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                if (a, b) != skip {
                    tuples.push(vec![a, b]);
                }
            }
        }
        tuples
    };
    Structure::new(
        two_sat_signature(),
        2,
        vec![
            ("R00", all((0, 0))),
            ("R01", all((0, 1))),
            ("R11", all((1, 1))),
            ("R10", all((1, 0))),
        ],
    )
    .expect("static template")
}

/// Encodes a 2-CNF over variables `0..n_vars` as an instance of the 2-SAT
/// template: clause `(l1 | l2)` becomes the tuple `(var1, var2)` in the
/// relation indexed by the forbidden assignment. An empty clause list is a
/// trivially satisfiable instance.
pub fn cnf2_to_instance(n_vars: usize, clauses: &[Clause]) -> Result<Structure> {
    let mut rels: Vec<Vec<Vec<usize>>> = vec![Vec::new(); 4];
    for clause in clauses {
        for l in [&clause.first, &clause.second] {
            if l.var >= n_vars {
                return Err(Error::ForeignElement { element: l.var, universe: n_vars });
            }
        }
        let idx = match (clause.first.negated, clause.second.negated) {
            (false, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            (true, false) => 3,
        };
        rels[idx].push(vec![clause.first.var, clause.second.var]);
    }
    Structure::new(
        two_sat_signature(),
        n_vars,
        vec![
            ("R00", rels[0].clone()),
            ("R01", rels[1].clone()),
            ("R11", rels[2].clone()),
            ("R10", rels[3].clone()),
        ],
    )
}

/// Brute-force satisfiability of a 2-CNF by assignment enumeration.
pub fn cnf2_satisfiable(n_vars: usize, clauses: &[Clause]) -> bool {
    assert!(n_vars <= 24, "oracle meant for small instances");
    (0u64..(1 << n_vars)).any(|assignment| clauses.iter().all(|c| c.satisfied(assignment)))
}
