//! Primitive positive formulas (atoms, conjunction, existential
//! quantification) and their evaluation over finite structures.
//!
//! Evaluation is relational: atoms produce satisfying-assignment tables,
//! conjunction joins them, and an existential projects a column away. A
//! direct enumerate-all-assignments oracle lives in the tests.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::structure::{Element, Structure};

/// Body of a primitive positive formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PPBody {
    Atom { symbol: String, vars: Vec<String> },
    And(Vec<PPBody>),
    Exists(String, Box<PPBody>),
}

/// A primitive positive formula with an ordered list of free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PPFormula {
    pub free: Vec<String>,
    pub body: PPBody,
}

impl PPFormula {
    pub fn atom<S: Into<String>>(free: Vec<S>, symbol: S, vars: Vec<S>) -> Self {
        let free: Vec<String> = free.into_iter().map(Into::into).collect();
        PPFormula {
            free,
            body: PPBody::Atom {
                symbol: symbol.into(),
                vars: vars.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn arity(&self) -> usize {
        self.free.len()
    }

    /// Checks scoping (atom variables free or bound by an enclosing exists)
    /// and symbol/arity agreement against a structure's signature.
    pub fn validate(&self, b: &Structure) -> Result<()> {
        fn walk(body: &PPBody, scope: &mut Vec<String>, b: &Structure) -> Result<()> {
            match body {
                PPBody::Atom { symbol, vars } => {
                    let sym = b
                        .signature()
                        .id(symbol)
                        .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
                    let arity = b.signature().arity(sym);
                    if vars.len() != arity {
                        return Err(Error::ArityMismatch {
                            symbol: symbol.clone(),
                            expected: arity,
                            got: vars.len(),
                        });
                    }
                    for v in vars {
                        if !scope.contains(v) {
                            return Err(Error::Invalid(format!("unbound variable `{v}`")));
                        }
                    }
                    Ok(())
                }
                PPBody::And(children) => {
                    children.iter().try_for_each(|c| walk(c, scope, b))
                }
                PPBody::Exists(v, child) => {
                    scope.push(v.clone());
                    let r = walk(child, scope, b);
                    scope.pop();
                    r
                }
            }
        }
        let mut scope = self.free.clone();
        walk(&self.body, &mut scope, b)
    }

    pub fn render(&self) -> String {
        fn go(body: &PPBody) -> String {
            match body {
                PPBody::Atom { symbol, vars } => format!("{symbol}({})", vars.join(",")),
                PPBody::And(children) => {
                    let parts: Vec<String> = children.iter().map(go).collect();
                    format!("({})", parts.join(" & "))
                }
                PPBody::Exists(v, child) => format!("exists {v}. {}", go(child)),
            }
        }
        format!("phi({}) = {}", self.free.join(","), go(&self.body))
    }
}

/// A satisfying-assignment table over a list of variables.
struct Rows {
    vars: Vec<String>,
    rows: BTreeSet<Vec<Element>>,
}

fn eval_body(body: &PPBody, b: &Structure) -> Result<Rows> {
    match body {
        PPBody::Atom { symbol, vars } => {
            let sym = b
                .signature()
                .id(symbol)
                .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
            let mut distinct: Vec<String> = Vec::new();
            for v in vars {
                if !distinct.contains(v) {
                    distinct.push(v.clone());
                }
            }
            let mut rows = BTreeSet::new();
            'tuple: for tuple in b.relation(sym) {
                let mut assignment: Vec<Option<Element>> = vec![None; distinct.len()];
                for (v, &e) in vars.iter().zip(tuple.iter()) {
                    let slot = distinct.iter().position(|d| d == v).expect("collected");
                    match assignment[slot] {
                        Some(prev) if prev != e => continue 'tuple,
                        _ => assignment[slot] = Some(e),
                    }
                }
                rows.insert(assignment.into_iter().map(|o| o.expect("filled")).collect());
            }
            Ok(Rows { vars: distinct, rows })
        }
        PPBody::And(children) => {
            if children.is_empty() {
                // empty conjunction: the always-true table over no variables
                let mut rows = BTreeSet::new();
                rows.insert(Vec::new());
                return Ok(Rows { vars: Vec::new(), rows });
            }
            let mut acc = eval_body(&children[0], b)?;
            for child in &children[1..] {
                acc = join(acc, eval_body(child, b)?);
            }
            Ok(acc)
        }
        PPBody::Exists(v, child) => {
            let inner = eval_body(child, b)?;
            match inner.vars.iter().position(|x| x == v) {
                Some(idx) => {
                    let mut vars = inner.vars;
                    vars.remove(idx);
                    let rows = inner
                        .rows
                        .into_iter()
                        .map(|mut row| {
                            row.remove(idx);
                            row
                        })
                        .collect();
                    Ok(Rows { vars, rows })
                }
                None => {
                    // bound variable unused: quantifying over an empty
                    // universe still yields falsity
                    if b.size() == 0 {
                        Ok(Rows { vars: inner.vars, rows: BTreeSet::new() })
                    } else {
                        Ok(inner)
                    }
                }
            }
        }
    }
}

fn join(left: Rows, right: Rows) -> Rows {
    let shared: Vec<(usize, usize)> = left
        .vars
        .iter()
        .enumerate()
        .filter_map(|(i, v)| right.vars.iter().position(|w| w == v).map(|j| (i, j)))
        .collect();
    let right_extra: Vec<usize> = (0..right.vars.len())
        .filter(|j| !shared.iter().any(|&(_, sj)| sj == *j))
        .collect();

    let mut index: HashMap<Vec<Element>, Vec<&Vec<Element>>> = HashMap::new();
    for row in &right.rows {
        let key: Vec<Element> = shared.iter().map(|&(_, j)| row[j]).collect();
        index.entry(key).or_default().push(row);
    }

    let mut vars = left.vars.clone();
    vars.extend(right_extra.iter().map(|&j| right.vars[j].clone()));
    let mut rows = BTreeSet::new();
    for lrow in &left.rows {
        let key: Vec<Element> = shared.iter().map(|&(i, _)| lrow[i]).collect();
        if let Some(matches) = index.get(&key) {
            for rrow in matches {
                let mut combined = lrow.clone();
                combined.extend(right_extra.iter().map(|&j| rrow[j]));
                rows.insert(combined);
            }
        }
    }
    Rows { vars, rows }
}

/// Evaluates a pp-formula over a finite structure, returning the sorted set
/// of free-variable tuples that satisfy it. Free variables not occurring in
/// the body range over the whole universe.
pub fn eval_pp(formula: &PPFormula, b: &Structure) -> Result<Vec<Vec<Element>>> {
    formula.validate(b)?;
    let table = eval_body(&formula.body, b)?;
    // reorder/extend columns to the declared free-variable list
    let positions: Vec<Option<usize>> = formula
        .free
        .iter()
        .map(|v| table.vars.iter().position(|w| w == v))
        .collect();
    let missing = positions.iter().filter(|p| p.is_none()).count();
    let mut out = BTreeSet::new();
    for row in &table.rows {
        let base: Vec<Option<Element>> =
            positions.iter().map(|p| p.map(|i| row[i])).collect();
        for fill in crate::structure::tuples_lex(b.size(), missing) {
            let mut slot = 0;
            let tuple: Vec<Element> = base
                .iter()
                .map(|o| {
                    o.unwrap_or_else(|| {
                        let v = fill[slot];
                        slot += 1;
                        v
                    })
                })
                .collect();
            out.insert(tuple);
        }
    }
    Ok(out.into_iter().collect())
}
