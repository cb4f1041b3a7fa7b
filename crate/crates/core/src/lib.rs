//! Computational tools for backward orbits of critical points of polynomial maps.
//!
//! The crate is split along the natural seams of the problem:
//!
//! * [`exactpoly`]: exact univariate arithmetic over the rationals (iterates,
//!   resultants, discriminants, specialization, Eisenstein criteria).
//! * [`modp`]: prime sieve, polynomials over prime fields, factorization
//!   patterns and critical-orbit cycle detection.
//! * [`newton`]: p-adic valuations, Newton polygons and the valuation
//!   hypotheses behind the transitive-inertia argument.
//! * [`wreath`]: fixed-point proportions of iterated wreath products of
//!   symmetric groups and the preimage-tree shape.
//! * [`density`]: prime-scan drivers (attracting densities, Chebotarev-style
//!   root frequencies, symmetric-group certificates, common good primes).
//! * [`cli`]: the `critorbit` command-line front end.

pub mod cli;
pub mod density;
pub mod exactpoly;
pub mod modp;
pub mod newton;
pub mod padic;
pub mod wreath;

pub use exactpoly::{DiscriminantValue, ExactPoly, PolyError};
pub use modp::{FactorSignature, ModPoly, OrbitVerdict};
pub use newton::NewtonPolygon;
pub use padic::{PadicValuation, Valuation};
pub use wreath::FppTable;
