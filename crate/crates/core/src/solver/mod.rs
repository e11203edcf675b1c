//! Case-split deduction over the functional equation.
//!
//! Unknowns are the values of `f` on prime powers. Equation instances become
//! polynomial constraints; [`propagate`] runs the rewrite rules to a fixed
//! point, [`classify`] splits on zero/nonzero cases when stuck, and every
//! change is logged in a [`DerivationLedger`] that [`replay`] can re-check.

mod cite;
mod combine;
mod constraint;
mod entries;
mod knowledge;
mod propagate;
mod tree;
mod witness;

pub use cite::cite_equation;
pub use combine::reduced_echelon;
pub use constraint::{generate_constraints, value_poly, Constraint, ConstraintId, Origin};
pub use knowledge::{reduced_instance, replay, DerivationLedger, Divergence, Knowledge, Step};
pub use propagate::{propagate, Status, VisitOrder, MAX_PASSES};
pub use tree::{branch, classify, CaseTree, ClassifyConfig, Leaf, Outcome, SolutionFamily};
pub use witness::{exception_witness, Witness, WitnessKind};
