//! Orientations of cycles: the digraph template, the unbalancedness test,
//! and the search for a linear order whose median preserves the template.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::op::is_polymorphism;
use crate::structure::{Element, Signature, Structure};
use crate::templates::ternary::median_op;

/// An orientation of a cycle on `n >= 3` vertices: edge `i` joins vertex `i`
/// to vertex `(i+1) mod n`, pointing forward when `forward[i]` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleOrientation {
    forward: Vec<bool>,
}

impl CycleOrientation {
    pub fn new(forward: Vec<bool>) -> Result<Self> {
        if forward.len() < 3 {
            return Err(Error::Invalid("a cycle needs at least 3 vertices".into()));
        }
        Ok(CycleOrientation { forward })
    }

    /// Parses a direction string like "FFB" (forward/backward per edge).
    pub fn parse(text: &str) -> Result<Self> {
        let forward = text
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'F' => Ok(true),
                'B' => Ok(false),
                other => Err(Error::Invalid(format!("expected F or B, got `{other}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        CycleOrientation::new(forward)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn forward_count(&self) -> usize {
        self.forward.iter().filter(|&&f| f).count()
    }

    pub fn arcs(&self) -> Vec<(Element, Element)> {
        let n = self.len();
        (0..n)
            .map(|i| if self.forward[i] { (i, (i + 1) % n) } else { ((i + 1) % n, i) })
            .collect()
    }
}

/// The digraph structure of an oriented cycle, over the single binary
/// symbol `E`.
pub fn cycle_template(c: &CycleOrientation) -> Structure {
    let sig = Signature::new(vec![("E", 2)]).expect("static");
    let tuples: Vec<Vec<Element>> = c.arcs().into_iter().map(|(u, v)| vec![u, v]).collect();
    Structure::new(sig, c.len(), vec![("E", tuples)]).expect("arcs are in range")
}

/// Unbalanced: the forward-arc count differs from half the cycle length.
pub fn is_unbalanced(c: &CycleOrientation) -> bool {
    2 * c.forward_count() != c.len()
}

/// Searches every linear order on the vertices for one whose median
/// operation is a polymorphism of the cycle template. Returns the first
/// found in lexicographic order; `None` is the expected outcome for
/// balanced cycles.
pub fn find_median_order(c: &CycleOrientation) -> Result<Option<Vec<Element>>> {
    let n = c.len();
    if n > 10 {
        return Err(Error::UniverseCap { size: n, cap: 10 });
    }
    let template = cycle_template(c);
    for order in (0..n).permutations(n) {
        let med = median_op(&order).to_operation();
        if is_polymorphism(&med, &template)? {
            return Ok(Some(order));
        }
    }
    Ok(None)
}
