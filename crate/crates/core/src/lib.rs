//! Combinatorial dynamics of cyclic patterns.
//!
//! The crate decides the forcing relation between cyclic permutations by
//! working on the canonical connect-the-dots map of a pattern, computes
//! pattern entropy from the signed Markov graph, and realizes the same
//! patterns as periodic orbits of horizontal bands for uncoupled
//! quasiperiodically forced skew-products on the cylinder.
//!
//! Everything that decides membership or equality is exact: interval maps
//! are evaluated over arbitrary-precision rationals and characteristic
//! polynomials are integer polynomials. Floating point only appears when an
//! entropy value is reported.

pub mod cylinder;
pub mod entropy;
pub mod error;
pub mod forcing;
pub mod loops;
pub mod markov;
pub mod pattern;
pub mod plmap;

pub use cylinder::{
    default_omega, fmt_decimal, CylinderPoint, HorizontalBand, HorizontalOrbit,
    UncoupledSkewProduct,
};
pub use entropy::{
    char_poly, entropy_lower_bound, horseshoe_branches, horseshoe_count, lambda_root, lap_count,
    pattern_entropy, spectral_radius, EntropyReport, HorseshoeCertificate, IntPolynomial,
    RootEnclosure, DEFAULT_TOL,
};
pub use error::{Error, Result};
pub use forcing::{
    check_sharkovskii_tail, forced_patterns, forces, has_period, is_sharkovskii_tail, periods,
};
pub use loops::{
    enumerate_loops, induced_pattern, lex_compare, lex_pattern, loop_orbit, Degeneracy, Loop,
    LoopOrbit, OrbitOutcome,
};
pub use markov::{BasicInterval, Sign, SignedArrow, SignedGraph, TransitionMatrix};
pub use pattern::{
    all_patterns, double_pattern, min_entropy_pattern, sharkovskii_compare, sharkovskii_decompose,
    stefan_pattern, Pattern, SharkovskiiKey,
};
pub use plmap::{
    fmt_rational, parse_rational, AffineMap, FixedPoints, PLMap, PiecewiseLinear, Rational,
    RationalInterval,
};
