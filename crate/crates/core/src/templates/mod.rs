//! Constraint languages shipped with the engine, their encodings, and the
//! independent decision oracles used to test them: 2-SAT, graphs vs K2,
//! orientations of cycles, the point algebra, and set constraints, plus the
//! slice-semilattice polymorphism tooling.

mod bipartite;
mod cycles;
mod pointalg;
mod reach;
mod setcon;
mod ternary;
mod twosat;

pub use bipartite::{bipartite_reduce, k2_template, BipartiteReduction};
pub use cycles::{cycle_template, find_median_order, is_unbalanced, CycleOrientation};
pub use pointalg::{
    point_algebra_instance, point_algebra_oracle, point_algebra_oracle_decision,
    point_algebra_pac, point_algebra_signature,
};
pub use setcon::{
    default_oracle_universe, set_constraint_oracle, set_constraint_pac, SetConstraintInstance,
};
pub use ternary::{dual_discriminator, is_slice_semilattice, median_op, TernaryOp};
pub use twosat::{cnf2_satisfiable, cnf2_to_instance, two_sat_template, Clause, Literal};
