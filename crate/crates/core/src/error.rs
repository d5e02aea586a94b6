use thiserror::Error;

use crate::numerics::Rational;

/// Errors raised by the exact integration machinery.
///
/// Every variant carries a stable code (see [`Error::code`]) so front ends
/// can map failures to fixed message identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: Rational, a: Rational, b: Rational },

    #[error("domain mismatch: [{left_a}, {left_b}] vs [{right_a}, {right_b}]")]
    DomainMismatch {
        left_a: Rational,
        left_b: Rational,
        right_a: Rational,
        right_b: Rational,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("sign change of a piece on ({lo}, {hi}) occurs at an irrational point")]
    IrrationalRoot { lo: Rational, hi: Rational },

    #[error("piece on ({lo}, {hi}) is not monotone: its derivative changes sign at an irrational point")]
    NonMonotonePiece { lo: Rational, hi: Rational },

    #[error("function is not of bounded variation")]
    NotBv,

    #[error("integrator is not increasing")]
    NotIncreasing,

    #[error("integrator jumps at the endpoint {0}; normalization would move the jump outside the domain")]
    EndpointDiscontinuity(Rational),

    #[error("the Dirichlet function is only integrable here against integrators with a constant continuous part")]
    DirichletUnsupported,

    #[error("integrand is not Darboux-Stieltjes integrable against this integrator")]
    NotDsIntegrable,

    #[error("alpha-mesh {0} cannot be reached")]
    MeshUnachievable(Rational),

    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeTooHigh { degree: usize, cap: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid piecewise function: {0}")]
    InvalidPiecewise(String),

    #[error("invalid integrator: {0}")]
    InvalidIntegrator(String),
}

impl Error {
    /// Stable identifier used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OutOfDomain { .. } => "E301",
            Error::DomainMismatch { .. } => "E302",
            Error::Unsupported(_) => "E303",
            Error::IrrationalRoot { .. } => "E304",
            Error::NonMonotonePiece { .. } => "E305",
            Error::NotBv => "E306",
            Error::NotIncreasing => "E307",
            Error::EndpointDiscontinuity(_) => "E308",
            Error::DirichletUnsupported => "E309",
            Error::NotDsIntegrable => "E310",
            Error::MeshUnachievable(_) => "E311",
            Error::DegreeTooHigh { .. } => "E312",
            Error::InvalidPartition(_) => "E313",
            Error::InvalidPiecewise(_) => "E314",
            Error::InvalidIntegrator(_) => "E315",
        }
    }

    pub(crate) fn domain_mismatch(l: (&Rational, &Rational), r: (&Rational, &Rational)) -> Self {
        Error::DomainMismatch {
            left_a: l.0.clone(),
            left_b: l.1.clone(),
            right_a: r.0.clone(),
            right_b: r.1.clone(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
