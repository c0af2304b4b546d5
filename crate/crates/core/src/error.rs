use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {at} lies within {distance:e} of a pole")]
    PoleProximity { at: Complex64, distance: f64 },

    #[error("series did not converge after {terms} terms ({what})")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("order {nu} is too close to an integer and the limit branch is disabled")]
    NearIntegerOrder { nu: Complex64 },

    #[error("leading symbol is undefined for the zero frequency")]
    ZeroKappa,

    #[error("zero-mode cusp kernel is undefined at s = 1/2 (got s = {s})")]
    HalfPole { s: Complex64 },

    #[error("point {s} lies on a singular set of the bound function")]
    OnSingularSet { s: Complex64 },

    #[error("contour integral {value} is not within 0.01 of an integer")]
    NotInteger { value: f64 },

    #[error("matrix family is singular or ill-conditioned at contour node {node}")]
    SingularOnContour { node: usize },

    #[error("phase jump of {jump} rad between nodes {node} and {next}; refine the contour")]
    PhaseJump { node: usize, next: usize, jump: f64 },

    #[error("contour passes within {distance:e} of the singular point {point}")]
    ContourTooClose { point: Complex64, distance: f64 },

    #[error("linear system is ill-conditioned (condition number {cond:e})")]
    IllConditioned { cond: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidInput(_))
    }
}
