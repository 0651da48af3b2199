//! Twist strengths at multiples of `pi j / 2` and their known recurrence periods.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spin::{Parity, SpinParams};

/// `kappa = n * pi * j / 2` for `n = 0..=8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum KappaClass {
    Zero,
    HalfPiJ,
    PiJ,
    ThreeHalvesPiJ,
    TwoPiJ,
    FiveHalvesPiJ,
    ThreePiJ,
    SevenHalvesPiJ,
    FourPiJ,
}

impl KappaClass {
    pub const ALL: [KappaClass; 9] = [
        KappaClass::Zero,
        KappaClass::HalfPiJ,
        KappaClass::PiJ,
        KappaClass::ThreeHalvesPiJ,
        KappaClass::TwoPiJ,
        KappaClass::FiveHalvesPiJ,
        KappaClass::ThreePiJ,
        KappaClass::SevenHalvesPiJ,
        KappaClass::FourPiJ,
    ];

    /// `n` in `kappa = n pi j / 2`.
    pub fn half_multiple(self) -> u32 {
        self as u32
    }

    pub fn kappa(self, spin: SpinParams) -> f64 {
        self.half_multiple() as f64 * PI * spin.j() / 2.0
    }

    pub fn name(self) -> &'static str {
        match self {
            KappaClass::Zero => "0",
            KappaClass::HalfPiJ => "pj/2",
            KappaClass::PiJ => "pj",
            KappaClass::ThreeHalvesPiJ => "3pj/2",
            KappaClass::TwoPiJ => "2pj",
            KappaClass::FiveHalvesPiJ => "5pj/2",
            KappaClass::ThreePiJ => "3pj",
            KappaClass::SevenHalvesPiJ => "7pj/2",
            KappaClass::FourPiJ => "4pj",
        }
    }

    /// Recurrence period as tabulated for generic spins at `p = pi/2`.
    pub fn table_period(self, parity: Parity) -> Option<usize> {
        let odd_half = self.half_multiple() % 2 == 1;
        match (self, parity) {
            (KappaClass::Zero | KappaClass::FourPiJ, _) => Some(4),
            (KappaClass::PiJ | KappaClass::ThreePiJ, Parity::Integer) => Some(8),
            (KappaClass::PiJ | KappaClass::ThreePiJ, Parity::HalfInteger) => Some(12),
            (KappaClass::TwoPiJ, Parity::Integer) => Some(2),
            (KappaClass::TwoPiJ, Parity::HalfInteger) => Some(4),
            _ if odd_half && parity == Parity::Integer => Some(48),
            _ => None,
        }
    }

    /// Minimal recurrence period at `p = pi/2` including the low-dimensional
    /// exceptions: at `j = 1/2` every twist is a global phase so the period is
    /// that of the quarter rotation, and `j = 1, 3` recur after 16 kicks on
    /// the odd multiples of `pi j / 2`.
    pub fn expected_period(self, spin: SpinParams) -> Option<usize> {
        let odd_half = self.half_multiple() % 2 == 1;
        match spin.twice_j() {
            1 => Some(4),
            2 | 6 if odd_half => Some(16),
            _ => self.table_period(spin.parity()),
        }
    }

    /// Whether `kappa = pi j r / s` with coprime `r, s` lands on one of these
    /// classes (up to the `4 pi j` symmetry). Only the denominator matters.
    pub fn is_class_ratio(s: u32) -> bool {
        s == 1 || s == 2
    }
}

impl fmt::Display for KappaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KappaClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.trim().to_ascii_lowercase().replace("pi", "p");
        KappaClass::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::UnknownKappaClass(s.to_string()))
    }
}

impl From<KappaClass> for String {
    fn from(c: KappaClass) -> String {
        c.name().to_string()
    }
}

impl TryFrom<String> for KappaClass {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}
