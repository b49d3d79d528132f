//! Orbits of a finite structure under its automorphism group, computed by
//! permutation enumeration. Callers above the size cap fall back to treating
//! every element as its own representative, which only costs redundant peeks.

use std::collections::HashSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::structure::{Element, Structure};

fn is_automorphism(b: &Structure, perm: &[Element], sets: &[HashSet<&[Element]>]) -> bool {
    let inverse = {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    };
    for (sym, _, _) in b.signature().iter() {
        for tuple in b.relation(sym) {
            let forward: Vec<Element> = tuple.iter().map(|&e| perm[e]).collect();
            if !sets[sym].contains(forward.as_slice()) {
                return false;
            }
            let backward: Vec<Element> = tuple.iter().map(|&e| inverse[e]).collect();
            if !sets[sym].contains(backward.as_slice()) {
                return false;
            }
        }
    }
    true
}

/// The orbit partition of the universe under the automorphism group. Orbits
/// are sorted by least element; the least element is the canonical
/// representative.
pub fn automorphism_orbits(b: &Structure, limits: &Limits) -> Result<Vec<Vec<Element>>> {
    let n = b.size();
    if n > limits.orbit_universe {
        return Err(Error::UniverseCap { size: n, cap: limits.orbit_universe });
    }
    let sets: Vec<HashSet<&[Element]>> = b
        .signature()
        .iter()
        .map(|(sym, _, _)| b.relation(sym).iter().map(|t| t.as_slice()).collect())
        .collect();

    let mut parent: Vec<Element> = (0..n).collect();
    fn find(parent: &mut Vec<Element>, x: Element) -> Element {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }

    for perm in (0..n).permutations(n) {
        if is_automorphism(b, &perm, &sets) {
            for (i, &p) in perm.iter().enumerate() {
                let (a, b_) = (find(&mut parent, i), find(&mut parent, p));
                if a != b_ {
                    parent[a.max(b_)] = a.min(b_);
                }
            }
        }
    }

    let mut orbits: Vec<Vec<Element>> = Vec::new();
    let mut root_to_orbit: Vec<Option<usize>> = vec![None; n];
    for e in 0..n {
        let root = find(&mut parent, e);
        match root_to_orbit[root] {
            Some(idx) => orbits[idx].push(e),
            None => {
                root_to_orbit[root] = Some(orbits.len());
                orbits.push(vec![e]);
            }
        }
    }
    Ok(orbits)
}

/// Least element of each orbit, or every element when the universe exceeds
/// the permutation-search cap.
pub fn orbit_representatives(b: &Structure, limits: &Limits) -> Vec<Element> {
    match automorphism_orbits(b, limits) {
        Ok(orbits) => orbits.into_iter().map(|o| o[0]).collect(),
        Err(_) => b.elements().collect(),
    }
}
