//! K2 and the reduction of bipartite-graph templates to it via
//! homomorphic equivalence.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::hom::Homomorphism;
use crate::structure::{Element, Signature, Structure};

/// The single-edge graph on {0,1}.
pub fn k2_template() -> Structure {
    let sig = Signature::new(vec![("E", 2)]).expect("static");
    Structure::new(sig, 2, vec![("E", vec![vec![0, 1], vec![1, 0]])]).expect("static")
}

/// Result of reducing a symmetric graph template to K2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BipartiteReduction {
    /// No edges: every instance without edge tuples maps trivially, any
    /// instance with one is rejected.
    EmptyEdges,
    /// The graph is bipartite with at least one edge: both witness maps of
    /// the homomorphic equivalence with K2, verified.
    Equivalent { to_k2: Homomorphism, from_k2: Homomorphism },
    /// The part-collapse map does not exist.
    NotBipartite,
}

/// Checks symmetry, then 2-colors the graph. For a bipartite graph with an
/// edge `(s, s')` the witnesses are the part-collapse map into K2 and the
/// map sending 0 to `s` and 1 to `s'`.
pub fn bipartite_reduce(g: &Structure) -> Result<BipartiteReduction> {
    let sym = g
        .signature()
        .id("E")
        .ok_or_else(|| Error::UnknownSymbol("E".into()))?;
    if g.signature().arity(sym) != 2 {
        return Err(Error::ArityMismatch { symbol: "E".into(), expected: 2, got: g.signature().arity(sym) });
    }
    for t in g.relation(sym) {
        if !g.has_tuple(sym, &[t[1], t[0]]) {
            return Err(Error::Invalid(format!(
                "edge relation is not symmetric: ({}, {}) has no reverse",
                t[0], t[1]
            )));
        }
    }
    let edges = g.relation(sym);
    let Some(first) = edges.first() else {
        return Ok(BipartiteReduction::EmptyEdges);
    };

    // BFS 2-coloring over every component
    let mut color: Vec<Option<usize>> = vec![None; g.size()];
    let mut adjacency: Vec<Vec<Element>> = vec![Vec::new(); g.size()];
    for t in edges {
        adjacency[t[0]].push(t[1]);
    }
    for start in g.elements() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("colored before queueing");
            for &v in &adjacency[u] {
                match color[v] {
                    None => {
                        color[v] = Some(1 - cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return Ok(BipartiteReduction::NotBipartite),
                    Some(_) => {}
                }
            }
        }
    }

    let (s, s_prime) = (first[0], first[1]);
    // orient the collapse so that s lands on 0
    let base = color[s].expect("s is colored");
    let to_k2 = Homomorphism::new(
        color.iter().map(|c| c.expect("all colored") ^ base).collect(),
    );
    let from_k2 = Homomorphism::new(vec![s, s_prime]);
    let k2 = k2_template();
    debug_assert!(to_k2.verify(g, &k2));
    debug_assert!(from_k2.verify(&k2, g));
    Ok(BipartiteReduction::Equivalent { to_k2, from_k2 })
}
