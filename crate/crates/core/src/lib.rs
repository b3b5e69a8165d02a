//! Exact fixed-point combinatorics for Hamiltonian circle actions with
//! isolated fixed points.
//!
//! Everything here works from the weights of the isotropy representations at
//! the fixed points. The crate validates such data, evaluates Chern numbers by
//! localization, enumerates admissible toric 1-skeletons, checks the
//! equivariant pseudo-index bounds and certifies (or refutes) that a dataset
//! carries the fixed-point data of a standard circle action on `CP^n`.
//!
//! All arithmetic is exact, over `BigInt` and `BigRational`.

pub mod betti_chern;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod format;
pub mod laurent;
pub mod localization;
pub mod model;
#[cfg(test)]
mod properties;
pub mod report;
pub mod rigidity;
pub mod selftest;
pub mod skeleton;

pub use betti_chern::{c_integer, check_bounds, chern_number_from_betti, BoundReport, CIntegerBreakdown};
pub use corpus::{gen_product, gen_standard_cpn, mutate, MutationKind};
pub use error::{Error, Result};
pub use exact::{elem_sym, BigInt, BigRational};
pub use laurent::{laurent_ratio, LaurentPoly, NotDivisible};
pub use localization::{abbv_integral, chern_number_c1cn1, ChernMonomial};
pub use model::{
    morse_profile, point_invariants, validate, BettiVector, FixedPoint, FixedPointData, MorseProfile, PointInvariants,
    ValidationReport, WeightMultiset,
};
pub use rigidity::{rigidity_verdict, RigidityCertificate, Stage, Verdict};
pub use skeleton::{analyze_skeleton, enumerate_skeletons, SkeletonAnalysis, SkeletonEdge, SkeletonSet, ToricSkeleton};
