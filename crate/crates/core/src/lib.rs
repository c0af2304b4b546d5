//! Explicit scattering theory for twisted hyperbolic model ends.
//!
//! The crate covers the two model ends of a geometrically finite hyperbolic
//! surface twisted by a unitary representation:
//!
//! * funnels (hyperbolic half-cylinders), where the scattering matrix is
//!   diagonal in Fourier modes with explicit Gamma-function coefficients and
//!   the resonances form an explicit lattice in the left half-plane;
//! * cusps (parabolic cylinders), whose resolvent decomposes into modal Green
//!   kernels built from modified Bessel functions.
//!
//! On top of that it provides genus-2 Weierstrass products over resonance
//! multisets, an argument-principle engine for scalar and matrix-valued
//! meromorphic families, and a verification suite in [`verify`].

pub mod cusp;
pub mod ends;
pub mod error;
pub mod funnel;
pub mod gs;
pub mod specfun;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use specfun::EvalOptions;
