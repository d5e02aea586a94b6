//! Exact Ross-Darboux-Stieltjes integration.
//!
//! Integrands are piecewise polynomials with independent point values (plus
//! the Dirichlet function); integrators are bounded-variation functions
//! split into a continuous piecewise-monotone part and two reduced jump
//! series. All arithmetic is over the rationals.

pub mod engine;
pub mod error;
pub mod integrator;
pub mod numerics;
pub mod pwfn;
pub mod riemann;

pub use engine::{IntegralResult, Settings, Value};
pub use error::{Error, Result};
pub use integrator::{Chirality, Integrator, SaltusPart, Set};
pub use numerics::{Poly, Rational};
pub use pwfn::{Function, Partition, PiecewiseFn, StepFn};
pub use riemann::TaggedPartition;
