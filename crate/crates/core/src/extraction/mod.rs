//! Amplitude extraction from exact finite-size data.
//!
//! The scaled ratio phi(L, theta) L^(3 theta^2/4 pi^2 - 1/12) is modelled as
//! a finite sum of terms c L^(-e) (ln L)^j with exponents
//! e = 3n^2 + 3n theta/pi + k over winding sectors n and correction orders
//! k. The coefficients are obtained from two square high-precision solves on
//! staggered windows of the largest available L; their agreement measures
//! how far each estimate can be trusted.

mod data;
mod fit;

pub use data::{compute_lhs, CachedExactData, ExactData, LhsMode, LhsSource, SyntheticData, MAX_FIT_DERIVATIVE};
pub use fit::{default_sectors, fit_amplitudes, recognize, Estimate, FitModel, FitResult, FitTerm, MIN_RECOGNITION_DIGITS};
