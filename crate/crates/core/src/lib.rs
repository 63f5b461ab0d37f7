//! Exact computation with generalized beta-transformations.
//!
//! A generalized beta-transformation is the map `x -> beta*x mod 1` with some
//! branches replaced by branches of slope `-beta`, encoded by a sign
//! configuration `E`. This crate computes `(beta, E)`-expansions and orbits
//! exactly over `Z[beta]`, detects post-critically finite maps, builds the
//! associated Parry polynomials and their zero sets, manufactures new Parry
//! numbers from integer criterion sequences, traces the boundary curve of the
//! class of power series with coefficients in `[-1, 1]`, and cross-checks
//! topological entropy of unimodal maps by lap counting.
//!
//! Module layout:
//!
//! - [`poly`] — integer polynomials, Sturm sequences, real-root isolation
//! - [`dyadic`] — arbitrary-precision dyadic floats and complex points
//! - [`algebraic`] — real algebraic numbers and exact `Z[beta]` arithmetic
//! - [`roots`] — simultaneous complex root finding (Aberth-Ehrlich)
//! - [`map`] — the transformation itself: expansions, itineraries, PCF detection
//! - [`parry`] — Parry polynomials, analytic identities, the criterion construction
//! - [`spectra`] — mass generation of conjugate sets, bounds, CSV/SVG output
//! - [`boundary`] — power series with restricted coefficients and the curve `phi -> lambda_phi`
//! - [`unimodal`] — piecewise-linear unimodal maps, normalization, lap entropy
//! - [`verify`] — named verification suites used by the CLI

pub mod algebraic;
pub mod boundary;
pub mod dyadic;
pub mod error;
pub mod map;
pub mod parry;
pub mod poly;
pub mod rng;
pub mod roots;
pub mod spectra;
pub mod unimodal;
pub mod verify;

pub use algebraic::{AlgebraicReal, BetaContext, QBetaElement, ZBetaElement};
pub use dyadic::{ComplexPoint, Dyadic};
pub use error::Error;
pub use map::{Expansion, ExpansionStep, GBetaMap, Itinerary, Shape, SignConfiguration};
pub use parry::{CriterionSequence, ParryPolynomial};
pub use poly::IntPolynomial;
pub use roots::RootFinder;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
