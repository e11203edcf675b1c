//! Inputs shared by the criterion benches.

use sqadd_core::multfn::{make_family, FamilySpec, MultFn};

/// Bounds used by the equation-checking benches.
pub const VERIFY_BOUNDS: [u64; 3] = [500, 1000, 2000];

/// Bounds used by the classification benches.
pub const CLASSIFY_BOUNDS: [u64; 2] = [60, 100];

/// The identity function tabulated up to `bound`.
pub fn identity(bound: u64) -> MultFn {
    make_family(&FamilySpec::identity(), bound).expect("identity is valid")
}
