//! Numerical inverse scattering and long-time asymptotics for the Hirota equation
//!
//! ```text
//! i q_t + α (q_xx + 2|q|² q) + i β (q_xxx + 6|q|² q_x) = 0
//! ```
//!
//! The crate covers the direct scattering map (Jost solutions, reflection
//! coefficient, discrete spectrum), the reflectionless N-soliton solver, the
//! steepest-descent output (conjugation factors, parabolic-cylinder constants
//! and the leading radiation term) and a pseudo-spectral integrator used as
//! ground truth.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod error;
pub mod mat2;
pub mod params;
pub mod quadrature;
pub mod scatter;
pub mod simulate;
pub mod soliton;
pub mod special;
pub mod spectrum;
pub mod spline;

pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use asymptotic::{AntidiagonalSign, AsymptoticFrame, AsymptoticSolver, PcCoeffs};
pub use error::{Error, ErrorClass, Result};
pub use mat2::Mat2;
pub use params::{
    discriminant_root, phase_theta, soliton_speed, stationary_points, t_theta, Cone, Params, SpaceTimePoint,
};
pub use scatter::{InitialProfile, ReflectionCoefficient, ScatteringSample};
pub use simulate::{FieldState, SimConfig, SimDiagnostics};
pub use soliton::{SolitonModel, TriangleSplit};
pub use special::log_gamma;
pub use spectrum::{DiscreteSpectrum, Pole, SearchBox};
