//! Exact scalars, polynomials over the rationals, and certified range bounds.

mod poly;
mod rational;
mod roots;

pub use poly::{max_degree, set_max_degree, Poly, DEFAULT_MAX_DEGREE};
pub use rational::{
    format_rational, int, max_of, midpoint, min_of, parse_rational, pow2_neg, rat, ParseRationalError, Rational,
};
pub use roots::{poly_range, real_roots, sign_changes, Root, SignChanges, EXACT_FALLBACK_SLACK_BITS};

/// Horner evaluation of `p` at `x`.
pub fn poly_eval(p: &Poly, x: &Rational) -> Rational {
    p.eval(x)
}

/// Antiderivative of `p` with zero constant term.
pub fn poly_antiderivative(p: &Poly) -> Poly {
    p.antiderivative()
}
