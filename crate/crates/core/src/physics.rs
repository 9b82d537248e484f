//! Conversion of exact level differences into photon energy, frequency and
//! wavelength.
//!
//! Level `n` sits at `-E_o / n^2`. Differences are carried as exact multiples
//! of `E_o` and only rounded to `f64` at the final step.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::pairs::Transition;

/// Planck constant in eV s (CODATA 2018, exact).
pub const PLANCK_EV_S: f64 = 4.135_667_696e-15;

/// `h c` in eV nm (CODATA 2018).
pub const HC_EV_NM: f64 = 1_239.841_984;

/// Which value of the Rydberg energy `E_o` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ConstantsProfile {
    /// `E_o = 13.6 eV`.
    #[default]
    Paper,
    /// `E_o = 13.605693122994 eV` (CODATA 2018).
    Codata,
}

impl ConstantsProfile {
    /// `E_o` in eV as an exact decimal fraction.
    pub fn rydberg_ev(self) -> ExactRational {
        let (num, den): (i64, i64) = match self {
            ConstantsProfile::Paper => (136, 10),
            ConstantsProfile::Codata => (13_605_693_122_994, 1_000_000_000_000),
        };
        ExactRational::new(num, den).expect("nonzero denominator")
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstantsProfile::Paper => "paper",
            ConstantsProfile::Codata => "codata",
        }
    }
}

impl fmt::Display for ConstantsProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstantsProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ConstantsProfile::Paper),
            "codata" => Ok(ConstantsProfile::Codata),
            other => Err(Error::Parse(format!("constants profile {other:?} (expected paper|codata)"))),
        }
    }
}

/// A spectral line: the exact difference plus its derived physical values.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalLine {
    pub delta_exact: ExactRational,
    pub profile: ConstantsProfile,
    /// eV
    pub energy: f64,
    /// Hz
    pub frequency: f64,
    /// nm
    pub wavelength: f64,
}

/// `1/lower^2 - 1/upper^2` in units of `E_o`.
pub fn delta_energy(t: &Transition) -> ExactRational {
    t.delta()
}

pub fn to_physical(delta: &ExactRational, profile: ConstantsProfile) -> Result<PhysicalLine> {
    if !delta.is_positive() {
        return Err(Error::NonPositiveDelta(Box::new(delta.clone())));
    }
    // Energy is rounded once, from the exact product.
    let energy = (delta * &profile.rydberg_ev()).to_f64();
    Ok(PhysicalLine {
        delta_exact: delta.clone(),
        profile,
        energy,
        frequency: energy / PLANCK_EV_S,
        wavelength: HC_EV_NM / energy,
    })
}

pub fn line_for(t: &Transition, profile: ConstantsProfile) -> Result<PhysicalLine> {
    to_physical(&delta_energy(t), profile)
}
