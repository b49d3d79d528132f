//! Finitary operations on a structure's universe and the polymorphism check.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::structure::{tuples_lex, Element, Structure};

/// A total operation `f : U^arity -> U` given by its value table in
/// lexicographic argument order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operation {
    arity: usize,
    universe: usize,
    table: Vec<Element>,
}

impl Operation {
    pub fn new(arity: usize, universe: usize, table: Vec<Element>) -> Result<Self> {
        let expected = universe.pow(arity as u32);
        if table.len() != expected {
            return Err(Error::Invalid(format!(
                "operation table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= universe) {
            return Err(Error::ForeignElement { element: bad, universe });
        }
        Ok(Operation { arity, universe, table })
    }

    pub fn from_fn(
        arity: usize,
        universe: usize,
        f: impl Fn(&[Element]) -> Element,
    ) -> Result<Self> {
        let table = tuples_lex(universe, arity).map(|args| f(&args)).collect();
        Operation::new(arity, universe, table)
    }

    pub fn identity(universe: usize) -> Self {
        Operation { arity: 1, universe, table: (0..universe).collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn apply(&self, args: &[Element]) -> Element {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * self.universe + a);
        self.table[idx]
    }
}

/// True iff every relation of `b` is closed under coordinatewise application
/// of `f`, i.e. `f` is a homomorphism from `b^arity` to `b`.
pub fn is_polymorphism(f: &Operation, b: &Structure) -> Result<bool> {
    if f.universe() != b.size() {
        return Err(Error::Invalid(format!(
            "operation universe {} does not match structure universe {}",
            f.universe(),
            b.size()
        )));
    }
    for (sym, _, arity) in b.signature().iter() {
        let rel = b.relation(sym);
        let set: HashSet<&[Element]> = rel.iter().map(|t| t.as_slice()).collect();
        for combo in tuples_lex(rel.len(), f.arity()) {
            let image: Vec<Element> = (0..arity)
                .map(|i| {
                    let args: Vec<Element> = combo.iter().map(|&c| rel[c][i]).collect();
                    f.apply(&args)
                })
                .collect();
            if !set.contains(image.as_slice()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
