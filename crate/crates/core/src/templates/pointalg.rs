//! The point algebra (the rationals with `leq` and `neq`): instance
//! construction, the descriptor-backed peek decision, and the independent
//! order-theoretic oracle.

use crate::ac::Template;
use crate::descriptor::{PointAlgebra, TemplateDescriptor};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pac::{pac_decide, Decision, PacOptions, PeekReport};
use crate::structure::{Signature, Structure};
use crate::templates::reach::Reachability;

pub fn point_algebra_signature() -> Signature {
    Signature::new(vec![("leq", 2), ("neq", 2)]).expect("static")
}

/// Builds a point-algebra instance over `n` variables from ordered `leq`
/// pairs and `neq` pairs.
pub fn point_algebra_instance(
    n: usize,
    leqs: &[(usize, usize)],
    neqs: &[(usize, usize)],
) -> Result<Structure> {
    let leq_tuples: Vec<Vec<usize>> = leqs.iter().map(|&(u, v)| vec![u, v]).collect();
    let neq_tuples: Vec<Vec<usize>> = neqs.iter().map(|&(u, v)| vec![u, v]).collect();
    Structure::new(
        point_algebra_signature(),
        n,
        vec![("leq", leq_tuples), ("neq", neq_tuples)],
    )
}

/// Runs the peek loop with the point-algebra descriptor (a single orbit, so
/// one representative per variable).
pub fn point_algebra_pac(a: &Structure, workers: usize, limits: &Limits) -> Result<PeekReport> {
    let pa = PointAlgebra::new();
    for (_, name, _) in a.signature().iter() {
        if pa.signature().id(name).is_none() {
            return Err(Error::UnknownSymbol(name.to_string()));
        }
    }
    pac_decide(a, Template::Descriptor(&pa), workers, &PacOptions::default(), limits)
}

/// Satisfiability oracle: close the `leq` digraph under reflexive-transitive
/// reachability and condense; the instance is unsatisfiable exactly when
/// some `neq` pair (self-pairs included) has both endpoints in one strongly
/// connected component, i.e. each reaches the other.
pub fn point_algebra_oracle(a: &Structure) -> Result<bool> {
    let leq = a
        .signature()
        .id("leq")
        .ok_or_else(|| Error::UnknownSymbol("leq".into()))?;
    let neq = a
        .signature()
        .id("neq")
        .ok_or_else(|| Error::UnknownSymbol("neq".into()))?;
    let reach = Reachability::new(
        a.size(),
        a.relation(leq).iter().map(|t| (t[0], t[1])),
    );
    for t in a.relation(neq) {
        if reach.reaches(t[0], t[1]) && reach.reaches(t[1], t[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper matching the engine's decision vocabulary.
pub fn point_algebra_oracle_decision(a: &Structure) -> Result<Decision> {
    Ok(if point_algebra_oracle(a)? { Decision::Accept } else { Decision::Reject })
}
