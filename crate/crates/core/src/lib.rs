//! Multiplicative functions `f` with
//! `f(a²+b²+c²+d²) = f(a²+b²) + f(c²+d²)` for positive `a, b, c, d`.
//!
//! - [`repr`]: sums of nonzero squares, the k-square exception lists and a
//!   brute-force oracle for them.
//! - [`multfn`]: multiplicative functions on prime powers, the solution
//!   families, and checkers for the equation and for multiplicativity.
//! - [`solver`]: constraint generation, propagation with exact rationals,
//!   case splitting, and a replayable derivation ledger.

pub mod error;
pub mod multfn;
pub mod poly;
pub mod rational;
pub mod repr;
pub mod solver;

pub use error::{Error, Result};
pub use multfn::{make_family, ArithmeticFn, FamilySpec, FamilyTag, MultFn, ValueTable, Violation};
pub use poly::{Atom, Monomial, Poly};
pub use rational::Q;
pub use repr::{FourSplit, SquarePair};
