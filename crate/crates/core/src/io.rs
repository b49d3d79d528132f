//! Text formats.
//!
//! Structures use a line-oriented format: a `universe` line listing element
//! ids, then `relation <name> <arity>` headers each followed by one tuple
//! per line. `#` starts a comment; tokens are whitespace-separated. Element
//! order in the universe line is the canonical order.
//!
//! 2-CNFs use DIMACS-like lines `l1 l2 0` with 1-based signed literals.
//! Set-constraint networks use a `vars` header followed by `sub|dis|neq x y`
//! lines.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structure::{Element, ElementLabel, Signature, Structure};
use crate::templates::{Clause, SetConstraintInstance};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

/// Parses the structure format. The signature is read off the file; relation
/// names must be unique and arities positive.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut universe: Option<Vec<String>> = None;
    let mut relations: Vec<(String, usize, Vec<Vec<Element>>, usize)> = Vec::new();
    let mut index: HashMap<String, Element> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let tokens: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "universe" => {
                if universe.is_some() {
                    return Err(Error::Parse { line, msg: "duplicate universe line".into() });
                }
                let ids: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                for (i, id) in ids.iter().enumerate() {
                    if index.insert(id.clone(), i).is_some() {
                        return Err(Error::Parse {
                            line,
                            msg: format!("duplicate element id `{id}`"),
                        });
                    }
                }
                universe = Some(ids);
            }
            "relation" => {
                if universe.is_none() {
                    return Err(Error::Parse {
                        line,
                        msg: "universe line must precede relations".into(),
                    });
                }
                if tokens.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        msg: "expected `relation <name> <arity>`".into(),
                    });
                }
                let arity: usize = tokens[2].parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad arity `{}`", tokens[2]),
                })?;
                if arity == 0 {
                    return Err(Error::Parse { line, msg: "arity must be positive".into() });
                }
                if relations.iter().any(|(name, ..)| name == tokens[1]) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate relation `{}`", tokens[1]),
                    });
                }
                relations.push((tokens[1].to_string(), arity, Vec::new(), line));
            }
            _ => {
                let Some((_, arity, tuples, _)) = relations.last_mut() else {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unexpected token `{}`", tokens[0]),
                    });
                };
                if tokens.len() != *arity {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected {arity} element ids, got {}", tokens.len()),
                    });
                }
                let tuple = tokens
                    .iter()
                    .map(|id| {
                        index.get(*id).copied().ok_or_else(|| Error::Parse {
                            line,
                            msg: format!("unknown element id `{id}`"),
                        })
                    })
                    .collect::<Result<Vec<Element>>>()?;
                tuples.push(tuple);
            }
        }
    }

    let universe = universe.ok_or(Error::Parse { line: 0, msg: "missing universe line".into() })?;
    let signature = Signature::new(
        relations.iter().map(|(name, arity, _, _)| (name.clone(), *arity)).collect(),
    )?;
    let labels = universe.into_iter().map(ElementLabel::Named).collect();
    Structure::with_labels(
        signature,
        labels,
        relations
            .into_iter()
            .map(|(name, _, tuples, _)| (name, tuples))
            .collect::<Vec<(String, Vec<Vec<Element>>)>>(),
    )
}

/// Re-homes a parsed instance onto a template's signature: relations are
/// matched by name and arity, and symbols the file does not mention become
/// empty relations.
pub fn align_to_signature(instance: &Structure, signature: &Signature) -> Result<Structure> {
    let mut relations: Vec<(String, Vec<Vec<Element>>)> = Vec::new();
    for (sym, name, arity) in instance.signature().iter() {
        let target = signature
            .id(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if signature.arity(target) != arity {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: signature.arity(target),
                got: arity,
            });
        }
        relations.push((name.to_string(), instance.relation(sym).to_vec()));
    }
    let labels = instance.elements().map(|e| ElementLabel::Named(instance.element_name(e))).collect();
    Structure::with_labels(signature.clone(), labels, relations)
}

/// Serializes a structure in the format accepted by [`parse_structure`].
pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::from("universe");
    for e in s.elements() {
        out.push(' ');
        out.push_str(&sanitize(&s.element_name(e)));
    }
    out.push('\n');
    for (sym, name, arity) in s.signature().iter() {
        out.push_str(&format!("relation {name} {arity}\n"));
        for tuple in s.relation(sym) {
            let ids: Vec<String> = tuple.iter().map(|&e| sanitize(&s.element_name(e))).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Element ids must be single whitespace-free tokens without `#`.
fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_whitespace() || c == '#' { '_' } else { c })
        .collect()
}

/// Parses DIMACS-like 2-CNF text: `c` comment lines, an optional
/// `p cnf <vars> <clauses>` header, and clause lines `l1 l2 0`.
pub fn parse_cnf2(text: &str) -> Result<(usize, Vec<Clause>)> {
    let mut clauses = Vec::new();
    let mut max_var = 0usize;
    let mut declared_vars: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('p') {
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 4 || tokens[1] != "cnf" {
                return Err(Error::Parse { line, msg: "expected `p cnf <vars> <clauses>`".into() });
            }
            declared_vars = Some(tokens[2].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad variable count `{}`", tokens[2]),
            })?);
            continue;
        }
        let lits: Vec<i64> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse { line, msg: format!("bad literal `{t}`") })
            })
            .collect::<Result<_>>()?;
        if lits.len() != 3 || lits[2] != 0 {
            return Err(Error::Parse {
                line,
                msg: "expected exactly two literals terminated by 0".into(),
            });
        }
        let mut pair = [(0usize, false); 2];
        for (slot, &lit) in pair.iter_mut().zip(&lits[..2]) {
            if lit == 0 {
                return Err(Error::Parse { line, msg: "literal 0 inside clause".into() });
            }
            let var = lit.unsigned_abs() as usize - 1;
            max_var = max_var.max(var + 1);
            *slot = (var, lit < 0);
        }
        clauses.push(Clause::new(pair[0], pair[1]));
    }
    let n_vars = declared_vars.unwrap_or(max_var).max(max_var);
    Ok((n_vars, clauses))
}

pub fn serialize_cnf2(n_vars: usize, clauses: &[Clause]) -> String {
    let mut out = format!("p cnf {n_vars} {}\n", clauses.len());
    for c in clauses {
        let lit = |l: &crate::templates::Literal| {
            let v = (l.var + 1) as i64;
            if l.negated {
                -v
            } else {
                v
            }
        };
        out.push_str(&format!("{} {} 0\n", lit(&c.first), lit(&c.second)));
    }
    out
}

/// Parses the set-constraint format: a `vars` header then `sub|dis|neq x y`
/// lines.
pub fn parse_set_constraints(text: &str) -> Result<SetConstraintInstance> {
    let mut instance: Option<SetConstraintInstance> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let tokens: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "vars" => {
                if instance.is_some() {
                    return Err(Error::Parse { line, msg: "duplicate vars line".into() });
                }
                let names: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                for (i, name) in names.iter().enumerate() {
                    if index.insert(name.clone(), i).is_some() {
                        return Err(Error::Parse {
                            line,
                            msg: format!("duplicate variable `{name}`"),
                        });
                    }
                }
                instance = Some(SetConstraintInstance::with_names(names));
            }
            kind @ ("sub" | "dis" | "neq") => {
                let Some(instance) = instance.as_mut() else {
                    return Err(Error::Parse { line, msg: "vars line must come first".into() });
                };
                if tokens.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected `{kind} <x> <y>`"),
                    });
                }
                let resolve = |t: &str| {
                    index.get(t).copied().ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("undeclared variable `{t}`"),
                    })
                };
                let (x, y) = (resolve(tokens[1])?, resolve(tokens[2])?);
                match kind {
                    "sub" => instance.add_sub(x, y),
                    "dis" => instance.add_dis(x, y),
                    _ => instance.add_neq(x, y),
                }
                .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            }
            other => {
                return Err(Error::Parse { line, msg: format!("unknown directive `{other}`") });
            }
        }
    }
    instance.ok_or(Error::Parse { line: 0, msg: "missing vars line".into() })
}

pub fn serialize_set_constraints(i: &SetConstraintInstance) -> String {
    let mut out = String::from("vars");
    for name in i.names() {
        out.push(' ');
        out.push_str(&sanitize(name));
    }
    out.push('\n');
    for &(x, y) in i.subs() {
        out.push_str(&format!("sub {} {}\n", sanitize(&i.names()[x]), sanitize(&i.names()[y])));
    }
    for &(x, y) in i.diss() {
        out.push_str(&format!("dis {} {}\n", sanitize(&i.names()[x]), sanitize(&i.names()[y])));
    }
    for &(x, y) in i.neqs() {
        out.push_str(&format!("neq {} {}\n", sanitize(&i.names()[x]), sanitize(&i.names()[y])));
    }
    out
}
