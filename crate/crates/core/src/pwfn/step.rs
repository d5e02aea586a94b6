use std::fmt;
use std::ops::Deref;

use super::{Partition, PiecewiseFn};
use crate::error::{Error, Result};
use crate::numerics::{Poly, Rational};

/// A piecewise-constant function. Interval constants and point values are
/// independent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StepFn(PiecewiseFn);

impl StepFn {
    pub fn new(breakpoints: Vec<Rational>, constants: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        let pieces = constants.into_iter().map(Poly::constant).collect();
        PiecewiseFn::new_uncapped(breakpoints, pieces, values).map(StepFn)
    }

    /// Step function on `p` with constant `c_i` on each open interval and
    /// the given values at the points.
    pub fn on_partition(p: &Partition, constants: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        Self::new(p.points().to_vec(), constants, values)
    }

    pub fn constant(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        PiecewiseFn::constant(a, b, c).map(StepFn)
    }

    /// `H_c(x - at)` on `[a, b]`.
    pub fn heaviside(a: Rational, b: Rational, c: Rational, at: Rational) -> Result<Self> {
        PiecewiseFn::heaviside(a, b, c, at).map(StepFn)
    }

    pub fn from_piecewise(f: PiecewiseFn) -> Result<Self> {
        if f.is_step() {
            Ok(StepFn(f))
        } else {
            Err(Error::InvalidPiecewise("a step function needs constant pieces".into()))
        }
    }

    /// The constant on each open interval.
    pub fn constants(&self) -> Vec<Rational> {
        self.0.pieces().iter().map(Poly::constant_term).collect()
    }

    pub fn as_piecewise(&self) -> &PiecewiseFn {
        &self.0
    }

    pub fn into_piecewise(self) -> PiecewiseFn {
        self.0
    }

    pub fn refine(&self, extra: impl IntoIterator<Item = Rational>) -> StepFn {
        StepFn(self.0.refine(extra))
    }

    pub fn add(&self, other: &StepFn) -> Result<StepFn> {
        self.0.add(&other.0).map(StepFn)
    }

    pub fn sub(&self, other: &StepFn) -> Result<StepFn> {
        self.0.sub(&other.0).map(StepFn)
    }

    pub fn scale(&self, r: &Rational) -> StepFn {
        StepFn(self.0.scale(r))
    }

    pub fn restrict(&self, c: &Rational, d: &Rational) -> Result<StepFn> {
        self.0.restrict(c, d).map(StepFn)
    }

    pub fn abs(&self) -> Result<StepFn> {
        self.0.abs().map(StepFn)
    }
}

impl Deref for StepFn {
    type Target = PiecewiseFn;
    fn deref(&self) -> &PiecewiseFn {
        &self.0
    }
}

impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StepFn({})", self.0)
    }
}
