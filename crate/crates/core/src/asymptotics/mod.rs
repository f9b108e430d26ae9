//! Large-L asymptotics of D(L, theta) and phi(L, theta).
//!
//! D is assembled as a winding sum over sectors theta + 2 pi n of the term
//! f(L, theta), which carries a six-fold Barnes G amplitude and the exponent
//! corrections R_2k(theta) / L^2k. Magnitudes such as (3 sqrt 3 / 4)^(L^2)
//! are kept in log space throughout.

mod amplitude;
mod rpoly;
mod series;
mod winding;
mod zeros;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use amplitude::{a0_signed, amplitude_a0, log_a0_derivative, log_deriv_a0, sector_ratio_exact, SectorW};
pub use rpoly::{RPolynomialTable, MAX_K};
pub use series::{
    htsasm_sq_log_series, ln_htsasm_sq_asym, log_g_series, special_leading_constant, special_series,
    special_series_coefficients, symbolic_phi_series, SpecialPoint,
};
pub use winding::{d_asym, f_term, phi_asym, relative_error, winding_sum, DAsym, FTerm};
pub use zeros::zero_sum_check;

/// Parity of the system size L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(l: usize) -> Self {
        if l % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Parse(format!("unknown parity {s:?}"))),
        }
    }
}

/// Truncation of the winding sum and of the correction series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AsymptoticParams {
    /// Sectors |n| <= n_max are summed.
    pub n_max: u32,
    /// Number of R_2k corrections, at most [`MAX_K`].
    pub k_max: usize,
}

impl Default for AsymptoticParams {
    fn default() -> Self {
        Self { n_max: 6, k_max: MAX_K }
    }
}

impl AsymptoticParams {
    pub fn new(n_max: u32, k_max: usize) -> Result<Self> {
        if k_max > MAX_K {
            return Err(Error::InvalidParams(format!("k_max = {k_max} exceeds {MAX_K}")));
        }
        Ok(Self { n_max, k_max })
    }
}
