//! Polarization-frequency two-photon states from collinear, frequency
//! degenerate type-II down-conversion.
//!
//! The crystal's e-o delay `tau0` puts the singlet Bell state `Psi-` at the
//! offsets `W tau0 = +-pi/2` of the natural spectrum, and the triplet `Psi+`
//! at its center. This crate models that state, the optics used to probe it
//! (waveplates, compensator, beamsplitter with analyzers, dispersive fibre),
//! closed-form coincidence curves, and an event-level Monte Carlo of the
//! coincidence measurement.
//!
//! The analytic modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`. The Monte Carlo sampler is `f64`
//! only.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod curve;
pub mod error;
pub mod matrix;
pub mod montecarlo;
pub mod numeric;
pub mod optics;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real, SPEED_OF_LIGHT};

pub type SourceParams = state::SourceParams<f64>;
pub type FrequencyGrid = state::FrequencyGrid<f64>;
pub type BiphotonAmplitude = state::BiphotonAmplitude<f64>;
pub type BellWeights = state::BellWeights<f64>;
pub type JonesElement = optics::JonesElement<f64>;
pub type FibreParams = optics::FibreParams<f64>;
pub type TimeAmplitudeCurve = optics::TimeAmplitudeCurve<f64>;
pub type SpectralFilter = analytics::SpectralFilter<f64>;
pub type CoincidenceCurve = curve::CoincidenceCurve<f64>;
pub type Mat2 = matrix::Mat2<f64>;

pub type SourceParams32 = state::SourceParams<f32>;
pub type FrequencyGrid32 = state::FrequencyGrid<f32>;
pub type BiphotonAmplitude32 = state::BiphotonAmplitude<f32>;
pub type CoincidenceCurve32 = curve::CoincidenceCurve<f32>;
