//! Ternary operations: the dual discriminator, medians of linear orders,
//! and the slice-semilattice check (every section `x (+)_b y = t(x,y,b)`
//! associative, commutative, idempotent).

use crate::op::Operation;
use crate::structure::Element;

/// A total ternary operation on `0..universe`, tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryOp {
    universe: usize,
    table: Vec<Element>,
}

impl TernaryOp {
    pub fn from_fn(universe: usize, f: impl Fn(Element, Element, Element) -> Element) -> Self {
        let mut table = Vec::with_capacity(universe.pow(3));
        for x in 0..universe {
            for y in 0..universe {
                for z in 0..universe {
                    let v = f(x, y, z);
                    assert!(v < universe, "operation must stay inside the universe");
                    table.push(v);
                }
            }
        }
        TernaryOp { universe, table }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn apply(&self, x: Element, y: Element, z: Element) -> Element {
        self.table[(x * self.universe + y) * self.universe + z]
    }

    pub fn to_operation(&self) -> Operation {
        Operation::new(3, self.universe, self.table.clone()).expect("table is total")
    }
}

/// The dual discriminator: `x` if `x == y`, else `z`.
pub fn dual_discriminator(universe: usize) -> TernaryOp {
    TernaryOp::from_fn(universe, |x, y, z| if x == y { x } else { z })
}

/// The median with respect to a linear order, given as the list of elements
/// from least to greatest.
pub fn median_op(order: &[Element]) -> TernaryOp {
    let universe = order.len();
    let mut rank = vec![0usize; universe];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    TernaryOp::from_fn(universe, |x, y, z| {
        let mut args = [x, y, z];
        args.sort_by_key(|&e| rank[e]);
        args[1]
    })
}

/// True iff every section `(+)_b (x, y) = t(x, y, b)` is a semilattice
/// operation: idempotent, commutative, associative. Checked by full
/// enumeration.
pub fn is_slice_semilattice(t: &TernaryOp) -> bool {
    let m = t.universe();
    for b in 0..m {
        for x in 0..m {
            if t.apply(x, x, b) != x {
                return false;
            }
            for y in 0..m {
                if t.apply(x, y, b) != t.apply(y, x, b) {
                    return false;
                }
                for z in 0..m {
                    let left = t.apply(t.apply(x, y, b), z, b);
                    let right = t.apply(x, t.apply(y, z, b), b);
                    if left != right {
                        return false;
                    }
                }
            }
        }
    }
    true
}
