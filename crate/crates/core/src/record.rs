//! JSON form of a solver result, one object per line in solution streams.
//!
//! ```text
//! {"k":2,"N":30,"rho":{"value":0.3...,"expr":"..."},
//!  "delta":{"two_pi_num":2,"two_pi_den":3},
//!  "generators":[{"num":4,"den":15},...],"max_deviation":1e-15,"case_tag":"k2_seeded"}
//! ```
//!
//! Floats are written in shortest round-trip form, so parse then serialize
//! reproduces the input exactly.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraction::ReducedFraction;
use crate::revival::{reconstruct_fraction, RevivalCertificate};
use crate::solver::{CaseTag, Solution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoField {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaField {
    pub two_pi_num: u64,
    pub two_pi_den: u64,
    /// Present when `δ/2π` is not exactly the fraction above.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radians: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionField {
    pub num: u64,
    pub den: u64,
}

impl From<ReducedFraction> for FractionField {
    fn from(f: ReducedFraction) -> Self {
        Self { num: f.num(), den: f.den() }
    }
}

impl TryFrom<FractionField> for ReducedFraction {
    type Error = Error;

    fn try_from(f: FractionField) -> Result<Self> {
        ReducedFraction::new(f.num, f.den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub rho: RhoField,
    pub delta: DeltaField,
    pub generators: Vec<FractionField>,
    pub max_deviation: f64,
    pub case_tag: String,
    /// Per-class companion sets (primed family first for two-form results).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<Vec<FractionField>>,
}

impl SolutionRecord {
    pub fn from_solution(s: &Solution) -> Self {
        let c = &s.certificate;
        let delta = match s.delta {
            Some(d) => DeltaField { two_pi_num: d.num(), two_pi_den: d.den(), radians: None },
            None => {
                let turns = c.delta.rem_euclid(TAU) / TAU;
                let approx = reconstruct_fraction(turns * TAU, 1_000_000, 1e-12);
                match approx {
                    Some(d) if (d.radians() - c.delta.rem_euclid(TAU)).abs() < 1e-15 => {
                        DeltaField { two_pi_num: d.num(), two_pi_den: d.den(), radians: None }
                    }
                    Some(d) => DeltaField {
                        two_pi_num: d.num(),
                        two_pi_den: d.den(),
                        radians: Some(c.delta),
                    },
                    None => DeltaField { two_pi_num: 0, two_pi_den: 1, radians: Some(c.delta) },
                }
            }
        };
        Self {
            k: c.k,
            n: c.n,
            rho: RhoField { value: c.rho, expr: s.rho_expr.clone() },
            delta,
            generators: c.generators.iter().map(|&g| g.into()).collect(),
            max_deviation: c.max_deviation,
            case_tag: s.case.as_str().to_string(),
            forms: s
                .forms
                .iter()
                .map(|f| f.iter().map(|&g| g.into()).collect())
                .collect(),
        }
    }

    /// `δ` in radians.
    pub fn delta_radians(&self) -> Result<f64> {
        match self.delta.radians {
            Some(r) => Ok(r),
            None => Ok(ReducedFraction::new(self.delta.two_pi_num, self.delta.two_pi_den)?.radians()),
        }
    }

    pub fn to_certificate(&self) -> Result<RevivalCertificate> {
        Ok(RevivalCertificate {
            k: self.k,
            n: self.n,
            rho: self.rho.value,
            delta: self.delta_radians()?,
            generators: self
                .generators
                .iter()
                .map(|&g| g.try_into())
                .collect::<Result<Vec<ReducedFraction>>>()?,
            max_deviation: self.max_deviation,
        })
    }

    pub fn case(&self) -> Option<CaseTag> {
        serde_json::from_value(serde_json::Value::String(self.case_tag.clone())).ok()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
