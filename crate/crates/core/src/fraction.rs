//! Exact non-negative rationals in lowest terms.
//!
//! Eigenphases and coin phases are stored as fractions of a full turn, so
//! `ReducedFraction::phase(m, n)` denotes the angle `2π·m/n` reduced into `[0, 1)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedFraction {
    num: u64,
    den: u64,
}

impl ReducedFraction {
    pub const ZERO: Self = Self { num: 0, den: 1 };

    /// Builds `num/den` in lowest terms. `den` must be positive.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = num.gcd(&den);
        Ok(Self { num: num / g, den: den / g })
    }

    /// The phase `num/den` taken modulo one, for any signed numerator.
    pub fn phase(num: i128, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let m = num.rem_euclid(den as i128) as u64;
        Self::new(m, den)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `2π·num/den` in radians.
    pub fn radians(&self) -> f64 {
        std::f64::consts::TAU * self.value()
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `self + other` modulo one.
    pub fn add_turns(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let num = self.num as i128 * (den / self.den) as i128
            + other.num as i128 * (den / other.den) as i128;
        Self::phase(num, den).expect("nonzero denominator")
    }

    /// `-self` modulo one.
    pub fn neg_turns(&self) -> Self {
        Self::phase(-(self.num as i128), self.den).expect("nonzero denominator")
    }

    /// `self - other` modulo one.
    pub fn sub_turns(&self, other: &Self) -> Self {
        self.add_turns(&other.neg_turns())
    }

    /// `factor·self` modulo one.
    pub fn scale_turns(&self, factor: i64) -> Self {
        Self::phase(self.num as i128 * factor as i128, self.den).expect("nonzero denominator")
    }

    /// Both solutions `x` in `[0, 1)` of `2x ≡ self (mod 1)`.
    pub fn halves(&self) -> [Self; 2] {
        let den = self.den.checked_mul(2).expect("denominator overflow");
        let a = Self::phase(self.num as i128, den).expect("nonzero denominator");
        [a, a.add_turns(&Self { num: 1, den: 2 })]
    }

    /// Distance between the phases `self` and `x` on the unit circle, in turns.
    pub fn circular_distance(&self, x: f64) -> f64 {
        let d = (self.value() - x).rem_euclid(1.0);
        d.min(1.0 - d)
    }
}

impl Default for ReducedFraction {
    fn default() -> Self {
        Self::ZERO
    }
}

impl PartialOrd for ReducedFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReducedFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ReducedFraction {
    type Err = Error;

    /// Accepts `m/n` or a bare integer `m`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a fraction m/n, got {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((m, n)) => {
                let m = m.trim().parse::<u64>().map_err(|_| bad())?;
                let n = n.trim().parse::<u64>().map_err(|_| bad())?;
                Self::new(m, n).map_err(|_| bad())
            }
            None => Self::new(s.parse::<u64>().map_err(|_| bad())?, 1),
        }
    }
}

/// Least common multiple with overflow detection.
pub fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / a.gcd(&b))
        .checked_mul(b)
        .ok_or_else(|| Error::Range(format!("lcm({a}, {b}) overflows u64")))
}
