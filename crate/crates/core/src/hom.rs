//! Brute-force homomorphism search between finite structures over the same
//! signature. Used as the decision oracle everywhere a ground-truth answer
//! is needed: deterministic backtracking in lexicographic order over the
//! canonical element ordering, with forward checking (pruning the domains
//! of not-yet-assigned elements) and a node budget so callers can
//! distinguish "no homomorphism" from "gave up".

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::structure::{Element, Structure};

/// A verified or candidate map between two structures' universes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    map: Vec<Element>,
}

impl Homomorphism {
    pub fn new(map: Vec<Element>) -> Self {
        Homomorphism { map }
    }

    pub fn map(&self) -> &[Element] {
        &self.map
    }

    pub fn apply(&self, e: Element) -> Element {
        self.map[e]
    }

    /// Direct scan check: every source tuple maps into the target relation.
    pub fn verify(&self, source: &Structure, target: &Structure) -> bool {
        if self.map.len() != source.size() || self.map.iter().any(|&v| v >= target.size()) {
            return false;
        }
        if source.signature() != target.signature() {
            return false;
        }
        for (sym, _, _) in source.signature().iter() {
            for tuple in source.relation(sym) {
                let image: Vec<Element> = tuple.iter().map(|&e| self.map[e]).collect();
                if !target.has_tuple(sym, &image) {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of a budgeted search. `BudgetExhausted` is never conflated with a
/// definite `NotFound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomSearch {
    Found(Homomorphism),
    NotFound,
    BudgetExhausted,
}

impl HomSearch {
    pub fn found(&self) -> Option<&Homomorphism> {
        match self {
            HomSearch::Found(h) => Some(h),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, HomSearch::Found(_))
    }
}

/// One source constraint, preprocessed for assignment in element order:
/// `last` is the largest element in the scope, so the tuple is fully
/// assigned exactly when `last` is.
struct SourceConstraint {
    sym: usize,
    scope: Vec<Element>,
    last: Element,
    /// distinct scope elements, descending
    distinct: Vec<Element>,
}

struct Searcher<'a> {
    target: &'a Structure,
    constraints: Vec<SourceConstraint>,
    /// constraints indexed by scope member
    touching: Vec<Vec<usize>>,
    target_sets: Vec<HashSet<Vec<Element>>>,
    budget: u64,
    n: usize,
    m: usize,
}

/// Trail entry for restoring a pruned domain.
struct TrailEntry {
    depth: usize,
    var: Element,
    old: u64,
}

impl<'a> Searcher<'a> {
    fn new(source: &'a Structure, target: &'a Structure, budget: u64) -> Self {
        let mut constraints = Vec::new();
        let mut touching = vec![Vec::new(); source.size()];
        for (sym, _, _) in source.signature().iter() {
            for tuple in source.relation(sym) {
                let last = *tuple.iter().max().expect("arity >= 1");
                let mut distinct: Vec<Element> = tuple.clone();
                distinct.sort_unstable_by(|a, b| b.cmp(a));
                distinct.dedup();
                let idx = constraints.len();
                for &e in &distinct {
                    touching[e].push(idx);
                }
                constraints.push(SourceConstraint { sym, scope: tuple.clone(), last, distinct });
            }
        }
        let target_sets = target
            .signature()
            .iter()
            .map(|(sym, _, _)| target.relation(sym).iter().cloned().collect())
            .collect();
        Searcher {
            target,
            constraints,
            touching,
            target_sets,
            budget,
            n: source.size(),
            m: target.size(),
        }
    }

    /// After assigning `depth`, re-examines constraint `ci`. Returns false
    /// on refutation. With one unassigned element left in the scope its
    /// domain is pruned to the values completing the tuple; with more, a
    /// supporting target tuple (constant on each unassigned element's
    /// positions) must exist.
    fn check_constraint(
        &self,
        ci: usize,
        depth: usize,
        assigned: &[Element],
        domains: &mut [u64],
        trail: &mut Vec<TrailEntry>,
    ) -> bool {
        let c = &self.constraints[ci];
        if c.last <= depth {
            let image: Vec<Element> = c.scope.iter().map(|&e| assigned[e]).collect();
            return self.target_sets[c.sym].contains(&image);
        }
        // distinct is descending, so unassigned elements come first
        let unassigned = c.distinct.iter().take_while(|&&e| e > depth).count();
        if unassigned == 1 {
            let u = c.distinct[0];
            let mut allowed = 0u64;
            for t in self.target.relation(c.sym) {
                let mut value: Option<Element> = None;
                let mut ok = true;
                for (j, &e) in c.scope.iter().enumerate() {
                    if e == u {
                        match value {
                            None => value = Some(t[j]),
                            Some(v) if v != t[j] => {
                                ok = false;
                                break;
                            }
                            _ => {}
                        }
                    } else if t[j] != assigned[e] {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    allowed |= 1 << value.expect("u occurs in scope");
                }
            }
            let old = domains[u];
            let new = old & allowed;
            if new != old {
                trail.push(TrailEntry { depth, var: u, old });
                domains[u] = new;
            }
            return new != 0;
        }
        // several unassigned: keep the branch only if some target tuple
        // matches the assigned positions and is constant per unassigned
        // element
        self.target.relation(c.sym).iter().any(|t| {
            let mut seen: [(Element, Element); 8] = [(usize::MAX, 0); 8];
            let mut seen_len = 0;
            for (j, &e) in c.scope.iter().enumerate() {
                if e <= depth {
                    if t[j] != assigned[e] {
                        return false;
                    }
                } else if domains[e] >> t[j] & 1 == 0 {
                    return false;
                } else {
                    let mut found = false;
                    for s in &seen[..seen_len] {
                        if s.0 == e {
                            if s.1 != t[j] {
                                return false;
                            }
                            found = true;
                            break;
                        }
                    }
                    if !found && seen_len < seen.len() {
                        seen[seen_len] = (e, t[j]);
                        seen_len += 1;
                    }
                }
            }
            true
        })
    }

    fn search(&mut self) -> HomSearch {
        if self.n == 0 {
            return HomSearch::Found(Homomorphism::new(Vec::new()));
        }
        if self.m == 0 {
            return HomSearch::NotFound;
        }
        if self.m > 64 {
            return self.search_plain();
        }
        let full: u64 = if self.m == 64 { u64::MAX } else { (1u64 << self.m) - 1 };
        let mut domains = vec![full; self.n];
        let mut assigned = vec![0 as Element; self.n];
        let mut next_value = vec![0 as Element; self.n];
        let mut trail: Vec<TrailEntry> = Vec::new();
        let mut depth = 0usize;

        loop {
            let mut advanced = false;
            while next_value[depth] < self.m {
                let v = next_value[depth];
                next_value[depth] += 1;
                if domains[depth] >> v & 1 == 0 {
                    continue;
                }
                if self.budget == 0 {
                    return HomSearch::BudgetExhausted;
                }
                self.budget -= 1;
                assigned[depth] = v;
                let trail_mark = trail.len();
                let ok = self.touching[depth].iter().all(|&ci| {
                    self.check_constraint(ci, depth, &assigned, &mut domains, &mut trail)
                });
                if ok {
                    if depth + 1 == self.n {
                        return HomSearch::Found(Homomorphism::new(assigned));
                    }
                    depth += 1;
                    next_value[depth] = 0;
                    advanced = true;
                    break;
                }
                while trail.len() > trail_mark {
                    let entry = trail.pop().expect("marked");
                    domains[entry.var] = entry.old;
                }
            }
            if !advanced {
                if depth == 0 {
                    return HomSearch::NotFound;
                }
                depth -= 1;
                while trail.last().is_some_and(|e| e.depth >= depth) {
                    let entry = trail.pop().expect("checked");
                    domains[entry.var] = entry.old;
                }
            }
        }
    }

    /// Fallback without domain bitmasks for targets larger than 64
    /// elements: plain backtracking with full/partial tuple checks.
    fn search_plain(&mut self) -> HomSearch {
        let mut assigned: Vec<Option<Element>> = vec![None; self.n];
        let mut next_value = vec![0 as Element; self.n];
        let mut depth = 0usize;
        loop {
            let mut advanced = false;
            while next_value[depth] < self.m {
                let v = next_value[depth];
                next_value[depth] += 1;
                if self.budget == 0 {
                    return HomSearch::BudgetExhausted;
                }
                self.budget -= 1;
                assigned[depth] = Some(v);
                let ok = self.touching[depth].iter().all(|&ci| {
                    let c = &self.constraints[ci];
                    if c.last <= depth {
                        let image: Vec<Element> =
                            c.scope.iter().map(|&e| assigned[e].expect("assigned")).collect();
                        self.target_sets[c.sym].contains(&image)
                    } else {
                        self.target.relation(c.sym).iter().any(|t| {
                            c.scope
                                .iter()
                                .zip(t.iter())
                                .all(|(&e, &w)| assigned[e].is_none_or(|x| x == w))
                        })
                    }
                });
                if ok {
                    if depth + 1 == self.n {
                        let map = assigned.iter().map(|o| o.expect("complete")).collect();
                        return HomSearch::Found(Homomorphism::new(map));
                    }
                    depth += 1;
                    next_value[depth] = 0;
                    advanced = true;
                    break;
                }
                assigned[depth] = None;
            }
            if !advanced {
                assigned[depth] = None;
                if depth == 0 {
                    return HomSearch::NotFound;
                }
                depth -= 1;
                assigned[depth] = None;
            }
        }
    }
}

/// Searches for a homomorphism from `source` to `target`. Elements of the
/// source are assigned in canonical order and target values are tried in
/// ascending order, so the witness (when one exists within budget) is the
/// lexicographically least homomorphism.
pub fn find_homomorphism(
    source: &Structure,
    target: &Structure,
    limits: &Limits,
) -> Result<HomSearch> {
    if source.signature() != target.signature() {
        return Err(Error::SignatureMismatch(
            "homomorphism search needs equal signatures".into(),
        ));
    }
    let mut searcher = Searcher::new(source, target, limits.hom_budget);
    Ok(searcher.search())
}
