//! Value parsers for numeric flags.

use cycle_revival::expr::{eval, ExactValue};
use cycle_revival::{ReducedFraction, C64};

pub fn exact(s: &str) -> Result<ExactValue, String> {
    ExactValue::parse(s).map_err(|e| e.to_string())
}

pub fn real(s: &str) -> Result<f64, String> {
    eval(s).map_err(|e| e.to_string())
}

pub fn fraction(s: &str) -> Result<ReducedFraction, String> {
    s.parse().map_err(|e: cycle_revival::error::Error| e.to_string())
}

pub fn positive(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{s} must be positive"))
    }
}

/// `re` or `re:im`, each side an expression.
pub fn complex(s: &str) -> Result<C64, String> {
    match s.split_once(':') {
        Some((re, im)) => Ok(C64::new(real(re)?, real(im)?)),
        None => Ok(C64::new(real(s)?, 0.0)),
    }
}

/// Comma-separated list of [`complex`] values.
pub fn complex_list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(|p| complex(p.trim())).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// `|0,↑⟩`.
    Up0,
    /// `(|0,↑⟩ + i|0,↓⟩)/√2`.
    Symmetric,
    /// Amplitudes in basis order `2·position + coin`.
    Explicit(Vec<C64>),
}

pub fn initial(s: &str) -> Result<Initial, String> {
    match s.trim() {
        "up0" => Ok(Initial::Up0),
        "symmetric" => Ok(Initial::Symmetric),
        other => complex_list(other).map(Initial::Explicit),
    }
}

impl Initial {
    /// Amplitudes for `sites` positions, padding explicit lists with zeros.
    pub fn amplitudes(&self, sites: usize) -> Result<Vec<C64>, String> {
        let mut v = vec![C64::new(0.0, 0.0); 2 * sites];
        match self {
            Initial::Up0 => v[0] = C64::new(1.0, 0.0),
            Initial::Symmetric => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                v[0] = C64::new(h, 0.0);
                v[1] = C64::new(0.0, h);
            }
            Initial::Explicit(a) => {
                if a.len() > v.len() {
                    return Err(format!("{} amplitudes for {} sites", a.len(), sites));
                }
                v[..a.len()].copy_from_slice(a);
            }
        }
        Ok(v)
    }
}
