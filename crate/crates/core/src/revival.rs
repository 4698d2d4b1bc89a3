//! The revival criterion.
//!
//! `U_k^N = I` iff every eigenvalue is a de Moivre number `e^{2πi m_j/n_j}`, in
//! which case `N = lcm(n_j)`. Block `l` has such an eigenvalue exactly when
//! `ρ = ρ_l(m/n) = (1 - cos(4π m/n - δ)) / (1 - cos(4π l/k + δ))`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fraction::{checked_lcm, ReducedFraction};
use crate::linalg::{identity_deviation, matrix_power, C64};
use crate::spectral::{full_spectrum, power_eigenphase};
use crate::walk::{build_walk_operator, CoinParams, WalkOperator};

/// Tolerance on `|phase/2π - m/n|` when reconstructing eigenphases.
pub const PHASE_TOL: f64 = 1e-9;
/// Bound on `‖U^N - I‖_max` for a certified revival.
pub const CERTIFY_TOL: f64 = 1e-9;
/// Below this the denominator of `ρ_l` counts as zero.
pub const UNDEFINED_TOL: f64 = 1e-12;
/// Default bound on denominators and periods.
pub const DEFAULT_MAX_N: u64 = 1000;
/// Largest `N` for which certification also multiplies the dense matrix.
pub const DIRECT_POWER_LIMIT: u64 = 1000;

/// Value of `ρ_l`, or `Undefined` when the block's denominator vanishes and its
/// eigenvalues no longer depend on `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rho {
    Value(f64),
    Undefined,
}

impl Rho {
    pub fn value(self) -> Option<f64> {
        match self {
            Rho::Value(v) => Some(v),
            Rho::Undefined => None,
        }
    }
}

/// `1 - cos(4πl/k + δ)`.
pub fn block_denominator(k: usize, l: usize, delta: f64) -> f64 {
    let t = ((2 * l) % k) as f64 / k as f64;
    1.0 - (TAU * t + delta).cos()
}

/// The `ρ` for which block `l` has eigenvalue `e^{2πi·mn}`. May fall outside `[0, 1]`.
pub fn rho_for(k: usize, l: usize, mn: ReducedFraction, delta: f64) -> Result<Rho> {
    if k < 2 || l >= k {
        return invalid(format!("block index l = {l} out of range for k = {k}"));
    }
    let den = block_denominator(k, l, delta);
    if den.abs() < UNDEFINED_TOL {
        return Ok(Rho::Undefined);
    }
    let num = 1.0 - (2.0 * mn.radians() - delta).cos();
    Ok(Rho::Value(num / den))
}

/// The `ρ`-independent eigenvalues `{e^{-2πil/k}, -e^{-2πil/k}}` of a block
/// whose `ρ_l` is undefined at `delta`.
pub fn undefined_rho_eigenvalues(k: usize, l: usize, delta: f64) -> Result<(C64, C64)> {
    if k < 2 || l >= k {
        return invalid(format!("block index l = {l} out of range for k = {k}"));
    }
    let den = block_denominator(k, l, delta);
    if den.abs() >= UNDEFINED_TOL {
        return invalid(format!(
            "ρ_{l} is defined at δ = {delta} (denominator {den:e}); eigenvalues depend on ρ"
        ));
    }
    let e = C64::from_polar(1.0, -TAU * (l as f64 / k as f64));
    Ok((e, -e))
}

/// Exact phases of a constant block, as fractions of a turn.
pub fn undefined_rho_phases(k: usize, l: usize) -> Result<[ReducedFraction; 2]> {
    let a = ReducedFraction::phase(-(l as i128), k as u64)?;
    Ok([a, a.add_turns(&ReducedFraction::new(1, 2)?)])
}

/// LCM of all denominators and extra integers.
pub fn lcm_denominators(fractions: &[ReducedFraction], extra: &[u64]) -> Result<u64> {
    if fractions.is_empty() && extra.is_empty() {
        return invalid("lcm of an empty set");
    }
    fractions
        .iter()
        .map(|f| f.den())
        .chain(extra.iter().copied())
        .try_fold(1u64, checked_lcm)
}

/// Continued-fraction reconstruction of `phase/2π` (mod 1).
///
/// Returns the first convergent `p/q` with `q ≤ max_den` and
/// `|phase/2π - p/q| < tol`, reduced into `[0, 1)`.
pub fn reconstruct_fraction(phase: f64, max_den: u64, tol: f64) -> Option<ReducedFraction> {
    if max_den < 1 || tol <= 0.0 || !phase.is_finite() {
        return None;
    }
    let x = (phase / TAU).rem_euclid(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 as u128 > max_den as u128 {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() < tol {
            return ReducedFraction::phase(p2, q2 as u64).ok();
        }
        let frac = rem - a;
        if frac < 1e-18 {
            return None;
        }
        rem = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

/// A verified full revival `U_k^N = I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevivalCertificate {
    pub k: usize,
    pub n: u64,
    pub rho: f64,
    /// `δ` in radians.
    pub delta: f64,
    /// Distinct nonzero eigenphases `m_j/n_j`, sorted.
    pub generators: Vec<ReducedFraction>,
    /// `‖U^N - I‖_max`.
    pub max_deviation: f64,
}

impl RevivalCertificate {
    /// `lcm` of the generator denominators (1 for an empty set).
    pub fn generator_lcm(&self) -> Result<u64> {
        lcm_denominators(&self.generators, &[1])
    }

    pub fn params(&self) -> Result<CoinParams> {
        CoinParams::from_delta(self.rho, self.delta.rem_euclid(TAU))
    }

    /// `‖U_{k'}^N - I‖_max` for the same `(N, ρ, δ)` on another cycle length.
    pub fn deviation_on(&self, k: usize) -> Result<f64> {
        let op = build_walk_operator(k, &self.params()?)?;
        power_deviation(&op, self.n)
    }
}

/// `‖U^n - I‖_max` from eigenphase powering, cross-checked by repeated
/// squaring when `n ≤ DIRECT_POWER_LIMIT`. The larger of the two is returned.
pub fn power_deviation(op: &WalkOperator, n: u64) -> Result<f64> {
    let fast = identity_deviation(&power_eigenphase(op, n)?);
    if n <= DIRECT_POWER_LIMIT {
        let direct = identity_deviation(&matrix_power(op.matrix(), n));
        return Ok(fast.max(direct));
    }
    Ok(fast)
}

/// Eigenphases of `U_k` reconstructed as fractions, `None` if any is not a
/// de Moivre number with denominator `≤ max_den`.
pub fn spectrum_fractions(k: usize, params: &CoinParams, max_den: u64) -> Result<Option<Vec<ReducedFraction>>> {
    let spectrum = full_spectrum(k, params)?;
    Ok(spectrum
        .iter()
        .map(|z| reconstruct_fraction(z.arg(), max_den, PHASE_TOL))
        .collect())
}

/// Smallest `N ≤ max_n` with `U_k^N = I`, certified within `tol`.
pub fn revival_period(
    k: usize,
    params: &CoinParams,
    max_n: u64,
    tol: f64,
) -> Result<Option<RevivalCertificate>> {
    if max_n < 1 {
        return invalid("max_n must be at least 1");
    }
    let Some(mut fractions) = spectrum_fractions(k, params, max_n)? else {
        return Ok(None);
    };
    let n = match lcm_denominators(&fractions, &[1]) {
        Ok(n) => n,
        Err(Error::Range(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if n > max_n {
        return Ok(None);
    }
    let op = build_walk_operator(k, params)?;
    let max_deviation = power_deviation(&op, n)?;
    if max_deviation >= tol {
        return Ok(None);
    }
    fractions.retain(|f| !f.is_zero());
    fractions.sort();
    fractions.dedup();
    Ok(Some(RevivalCertificate {
        k,
        n,
        rho: params.rho(),
        delta: params.delta(),
        generators: fractions,
        max_deviation,
    }))
}

/// Smallest `‖U^N - I‖_max` over `1 ≤ N ≤ max_n`, by stepwise multiplication.
pub fn min_deviation_up_to(op: &WalkOperator, max_n: u64) -> (u64, f64) {
    let mut power = op.matrix().clone();
    let mut best = (1, identity_deviation(&power));
    for n in 2..=max_n {
        power = op.matrix() * &power;
        let d = identity_deviation(&power);
        if d < best.1 {
            best = (n, d);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn f(m: u64, n: u64) -> ReducedFraction {
        ReducedFraction::new(m, n).unwrap()
    }

    #[test]
    fn rho_k3_one_eighth() {
        let r = rho_for(3, 1, f(1, 8), 0.0).unwrap().value().unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rho_k2_worked_example() {
        let r = rho_for(2, 0, f(2, 5), 4.0 * PI / 3.0).unwrap().value().unwrap();
        let want = (2.0 / 3.0) * (1.0 - (7.0 * PI / 30.0).sin());
        assert!((r - want).abs() < 1e-14);
        assert!((r - 0.220_58).abs() < 1e-5);
    }

    #[test]
    fn rho_half_turn_is_zero() {
        for (k, l, d) in [(3, 1, 0.0), (5, 2, 0.0), (7, 6, 0.0)] {
            assert_eq!(rho_for(k, l, f(1, 2), d).unwrap(), Rho::Value(0.0));
        }
    }

    #[test]
    fn rho_undefined_when_denominator_vanishes() {
        assert_eq!(rho_for(3, 0, f(1, 8), 0.0).unwrap(), Rho::Undefined);
        assert_eq!(rho_for(4, 1, f(1, 8), PI).unwrap(), Rho::Undefined);
        assert!(rho_for(3, 3, f(1, 8), 0.0).is_err());
    }

    fn same_pair(got: (C64, C64), want: (C64, C64)) -> bool {
        let direct = (got.0 - want.0).norm() < 1e-12 && (got.1 - want.1).norm() < 1e-12;
        let swapped = (got.0 - want.1).norm() < 1e-12 && (got.1 - want.0).norm() < 1e-12;
        direct || swapped
    }

    #[test]
    fn constant_eigenvalues() {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        assert!(same_pair(undefined_rho_eigenvalues(4, 1, PI).unwrap(), (-i, i)));
        assert!(same_pair(undefined_rho_eigenvalues(3, 0, 0.0).unwrap(), (one, -one)));
        assert!(same_pair(undefined_rho_eigenvalues(2, 1, 0.0).unwrap(), (-one, one)));
        assert!(undefined_rho_eigenvalues(4, 1, 0.0).is_err());
    }

    #[test]
    fn constant_phases_are_exact() {
        assert_eq!(undefined_rho_phases(4, 1).unwrap(), [f(3, 4), f(1, 4)]);
        assert_eq!(undefined_rho_phases(3, 0).unwrap(), [ReducedFraction::ZERO, f(1, 2)]);
    }

    #[test]
    fn lcm_examples() {
        let fr = [f(4, 15), f(2, 5), f(23, 30), f(9, 10)];
        assert_eq!(lcm_denominators(&fr, &[]).unwrap(), 30);
        assert_eq!(lcm_denominators(&[f(3, 7)], &[]).unwrap(), 7);
        assert_eq!(lcm_denominators(&[], &[2, 3, 6]).unwrap(), 6);
        assert!(lcm_denominators(&[], &[]).is_err());
        assert!(matches!(
            lcm_denominators(&[], &[u64::MAX, u64::MAX - 1]),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn reconstruct_simple_phases() {
        assert_eq!(reconstruct_fraction(PI, 10, PHASE_TOL), Some(f(1, 2)));
        assert_eq!(reconstruct_fraction(TAU * 7.0 / 60.0 + 1e-13, 100, PHASE_TOL), Some(f(7, 60)));
        assert_eq!(reconstruct_fraction(0.0, 10, PHASE_TOL), Some(ReducedFraction::ZERO));
        assert_eq!(reconstruct_fraction(-PI / 2.0, 10, PHASE_TOL), Some(f(3, 4)));
        // Just below a full turn wraps to zero.
        assert_eq!(reconstruct_fraction(TAU - 1e-13, 10, PHASE_TOL), Some(ReducedFraction::ZERO));
        assert_eq!(reconstruct_fraction(TAU * 7.0 / 60.0, 59, PHASE_TOL), None);
    }

    #[test]
    fn one_radian_is_not_de_moivre() {
        assert_eq!(reconstruct_fraction(1.0, 1000, 1e-9), None);
        // Exhaustive oracle: no q ≤ 1000 has any p with |1/2π - p/q| < 1e-9.
        let x = 1.0 / TAU;
        for q in 1..=1000u64 {
            let p = (x * q as f64).round();
            assert!((x - p / q as f64).abs() >= 1e-9);
        }
    }

    #[test]
    fn k3_two_thirds_period_eight() {
        let p = CoinParams::new(2.0 / 3.0, 0.0, 0.0).unwrap();
        let c = revival_period(3, &p, 100, CERTIFY_TOL).unwrap().unwrap();
        assert_eq!(c.n, 8);
        assert!(c.max_deviation < 1e-12);
        assert_eq!(c.generator_lcm().unwrap(), 8);
    }

    #[test]
    fn k2_delta_zero_period_two() {
        let p = CoinParams::new(0.37, 0.0, 0.0).unwrap();
        let c = revival_period(2, &p, DEFAULT_MAX_N, CERTIFY_TOL).unwrap().unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.generators, vec![f(1, 2)]);
    }

    #[test]
    fn k7_half_has_no_revival() {
        let p = CoinParams::new(0.5, 0.0, 0.0).unwrap();
        assert!(revival_period(7, &p, 500, CERTIFY_TOL).unwrap().is_none());
        let op = build_walk_operator(7, &p).unwrap();
        let (_, best) = min_deviation_up_to(&op, 500);
        // The closest approach for N ≤ 500 is about 0.063.
        assert!(best > 0.05, "min deviation {best}");
    }

    #[test]
    fn revival_period_respects_max_n() {
        let p = CoinParams::new(2.0 / 3.0, 0.0, 0.0).unwrap();
        assert!(revival_period(3, &p, 7, CERTIFY_TOL).unwrap().is_none());
        assert!(revival_period(3, &p, 0, CERTIFY_TOL).is_err());
    }
}
