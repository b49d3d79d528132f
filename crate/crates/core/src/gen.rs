//! Seeded random generators for instances and pp-formulas. Everything is
//! driven by a ChaCha stream cipher, so a fixed seed reproduces byte-equal
//! output on any platform.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::pp::{PPBody, PPFormula};
use crate::structure::{Signature, Structure};
use crate::templates::{point_algebra_instance, Clause, SetConstraintInstance};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric loop-free graph over the single symbol `E`.
pub fn gen_graph(n: usize, edge_prob: f64, seed: u64) -> Structure {
    let mut rng = rng_from_seed(seed);
    let sig = Signature::new(vec![("E", 2)]).expect("static");
    let mut tuples = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                tuples.push(vec![u, v]);
                tuples.push(vec![v, u]);
            }
        }
    }
    Structure::new(sig, n, vec![("E", tuples)]).expect("in range")
}

/// Random 2-CNF with exactly `n_clauses` clauses over `n_vars` variables.
pub fn gen_2cnf(n_vars: usize, n_clauses: usize, seed: u64) -> Vec<Clause> {
    let mut rng = rng_from_seed(seed);
    (0..n_clauses)
        .map(|_| {
            Clause::new(
                (rng.gen_range(0..n_vars), rng.gen_bool(0.5)),
                (rng.gen_range(0..n_vars), rng.gen_bool(0.5)),
            )
        })
        .collect()
}

/// Random point-algebra network with the given expected densities (edges
/// per variable).
pub fn gen_point_algebra(
    n: usize,
    leq_per_var: f64,
    neq_per_var: f64,
    seed: u64,
) -> Structure {
    let mut rng = rng_from_seed(seed);
    let leq_count = (n as f64 * leq_per_var).round() as usize;
    let neq_count = (n as f64 * neq_per_var).round() as usize;
    let mut leqs = Vec::with_capacity(leq_count);
    let mut neqs = Vec::with_capacity(neq_count);
    for _ in 0..leq_count {
        leqs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    for _ in 0..neq_count {
        neqs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    point_algebra_instance(n, &leqs, &neqs).expect("in range")
}

/// Random set-constraint network with the given constraint counts.
pub fn gen_set_constraints(
    n: usize,
    subs: usize,
    diss: usize,
    neqs: usize,
    seed: u64,
) -> SetConstraintInstance {
    let mut rng = rng_from_seed(seed);
    let mut instance = SetConstraintInstance::new(n);
    for _ in 0..subs {
        instance.add_sub(rng.gen_range(0..n), rng.gen_range(0..n)).expect("in range");
    }
    for _ in 0..diss {
        instance.add_dis(rng.gen_range(0..n), rng.gen_range(0..n)).expect("in range");
    }
    for _ in 0..neqs {
        // avoid the degenerate reflexive disequality in generated networks
        let x = rng.gen_range(0..n);
        let mut y = rng.gen_range(0..n);
        if n > 1 {
            while y == x {
                y = rng.gen_range(0..n);
            }
        }
        instance.add_neq(x, y).expect("in range");
    }
    instance
}

/// Random pp-formula over `signature` with body depth at most `max_depth`
/// and free variables `v0..v{k}` for a random `k <= max_free`.
pub fn gen_pp_formula(
    signature: &Signature,
    max_depth: usize,
    max_free: usize,
    rng: &mut ChaCha8Rng,
) -> PPFormula {
    let n_free = rng.gen_range(1..=max_free.max(1));
    let free: Vec<String> = (0..n_free).map(|i| format!("v{i}")).collect();
    let mut bound_counter = 0usize;
    let body = gen_body(signature, max_depth, &free.clone(), &mut bound_counter, rng);
    PPFormula { free, body }
}

fn gen_atom(signature: &Signature, scope: &[String], rng: &mut ChaCha8Rng) -> PPBody {
    let sym = rng.gen_range(0..signature.len());
    let arity = signature.arity(sym);
    let vars = (0..arity)
        .map(|_| scope[rng.gen_range(0..scope.len())].clone())
        .collect();
    PPBody::Atom { symbol: signature.name(sym).to_string(), vars }
}

fn gen_body(
    signature: &Signature,
    depth: usize,
    scope: &[String],
    bound_counter: &mut usize,
    rng: &mut ChaCha8Rng,
) -> PPBody {
    if depth == 0 {
        return gen_atom(signature, scope, rng);
    }
    match rng.gen_range(0..3) {
        0 => gen_atom(signature, scope, rng),
        1 => {
            let n_children = rng.gen_range(2..=3);
            PPBody::And(
                (0..n_children)
                    .map(|_| gen_body(signature, depth - 1, scope, bound_counter, rng))
                    .collect(),
            )
        }
        _ => {
            let fresh = format!("w{}", *bound_counter);
            *bound_counter += 1;
            let mut inner_scope = scope.to_vec();
            inner_scope.push(fresh.clone());
            PPBody::Exists(
                fresh,
                Box::new(gen_body(signature, depth - 1, &inner_scope, bound_counter, rng)),
            )
        }
    }
}
