//! Rational approximation when no exact revival is known.
//!
//! Each eigenphase `x` of block `l` sits in an interval of phases `x'` with
//! `|ρ_l(x') - ρ| ≤ ε`. The reported `N` is the smallest one for which every
//! such interval holds some `m/N`, so widening `ε` can only lower `N`. Blocks
//! with constant eigenvalues contribute their exact phases.

use std::f64::consts::TAU;

use super::{CaseTag, Solution};
use crate::error::{invalid, Result};
use crate::fraction::ReducedFraction;
use crate::linalg::turns;
use crate::revival::{
    block_denominator, lcm_denominators, power_deviation, undefined_rho_phases,
    RevivalCertificate, UNDEFINED_TOL,
};
use crate::spectral::eigenvalues_closed_form;
use crate::walk::{build_walk_operator, CoinParams};

/// Largest period the approximate search will consider.
pub const APPROX_MAX_N: u64 = 1_000_000;

/// Phases `x` (unwrapped, possibly outside `[0, 1)`) around eigenphase `t`.
fn admissible(t: f64, d: f64, big_d: f64, rho: f64, eps: f64) -> (f64, f64) {
    let c_hi = 1.0 - (rho - eps) * big_d;
    let c_lo = 1.0 - (rho + eps) * big_d;
    let a_lo = c_hi.min(1.0).acos() / TAU;
    let a_hi = c_lo.max(-1.0).acos() / TAU;
    let y0 = (2.0 * t - d).rem_euclid(1.0);
    let low_half = y0 <= 0.5;
    let (mut ya, mut yb) = if low_half { (a_lo, a_hi) } else { (1.0 - a_hi, 1.0 - a_lo) };
    if c_hi >= 1.0 && c_lo <= -1.0 {
        ya = y0 - 0.5;
        yb = y0 + 0.5;
    } else if c_hi >= 1.0 {
        // The interval runs through y = 0.
        if low_half {
            ya = -a_hi;
        } else {
            yb = 1.0 + a_hi;
        }
    } else if c_lo <= -1.0 {
        // Through y = 1/2.
        if low_half {
            yb = 1.0 - a_lo;
        } else {
            ya = a_lo;
        }
    }
    let x0 = (y0 + d) / 2.0;
    let h = ((t - x0) * 2.0).round() / 2.0;
    ((ya + d) / 2.0 + h, (yb + d) / 2.0 + h)
}

fn hit(lo: f64, hi: f64, n: u64) -> Option<i128> {
    let nf = n as f64;
    let m = (lo * nf).ceil();
    (m <= hi * nf).then_some(m as i128)
}

/// Smallest `N ≤ 10⁶` approximating every `ρ_l` to within `ε`.
///
/// `delta` is in radians; `delta_fraction` only labels the result. The
/// certificate's deviation is whatever `‖U^N - I‖` turns out to be.
pub fn solve_approximate(
    k: usize,
    rho: f64,
    delta: f64,
    delta_fraction: Option<ReducedFraction>,
    epsilon: f64,
) -> Result<Option<Solution>> {
    if !(rho > 0.0 && rho < 1.0) {
        return invalid(format!("rho = {rho} must lie strictly between 0 and 1"));
    }
    if !(epsilon > 0.0) {
        return invalid(format!("epsilon = {epsilon} must be positive"));
    }
    let params = CoinParams::from_delta(rho, delta)?;
    let d = params.delta() / TAU;

    let mut exact = Vec::new();
    let mut intervals = Vec::new();
    for l in 0..k {
        let big_d = block_denominator(k, l, params.delta());
        if big_d.abs() < UNDEFINED_TOL {
            exact.extend(undefined_rho_phases(k, l)?);
            continue;
        }
        let pair = eigenvalues_closed_form(k, l, &params)?;
        for z in [pair.plus, pair.minus] {
            let t = turns(z);
            let (lo, hi) = admissible(t, d, big_d, rho, epsilon);
            intervals.push((t, lo, hi));
        }
    }
    let step = lcm_denominators(&exact, &[1])?;

    let mut n = step;
    let found = loop {
        if n > APPROX_MAX_N {
            break None;
        }
        if intervals.iter().all(|&(_, lo, hi)| hit(lo, hi, n).is_some()) {
            break Some(n);
        }
        n += step;
    };
    let Some(n) = found else {
        return Ok(None);
    };

    let mut generators = exact;
    for &(t, lo, hi) in &intervals {
        let first = hit(lo, hi, n).expect("checked above");
        let last = (hi * n as f64).floor() as i128;
        let m = ((t * n as f64).round() as i128).clamp(first, last);
        generators.push(ReducedFraction::phase(m, n)?);
    }
    generators.sort();
    generators.dedup();
    generators.retain(|g| !g.is_zero());

    let op = build_walk_operator(k, &params)?;
    let certificate = RevivalCertificate {
        k,
        n,
        rho,
        delta: params.delta(),
        generators,
        max_deviation: power_deviation(&op, n)?,
    };
    Ok(Some(Solution {
        case: CaseTag::Approximate,
        delta: delta_fraction,
        rho_expr: None,
        certificate,
        forms: Vec::new(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_epsilon_recovers_exact_period() {
        let s = solve_approximate(3, 2.0 / 3.0, 0.0, None, 1e-12).unwrap().unwrap();
        assert_eq!(s.certificate.n, 8);
        assert!(s.certificate.max_deviation < 1e-9);
        assert_eq!(s.certificate.generator_lcm().unwrap(), 8);
    }

    #[test]
    fn k7_regression() {
        let s = solve_approximate(7, 0.5, 0.0, None, 1e-3).unwrap().unwrap();
        let c = &s.certificate;
        assert!(c.n > 1 && c.n <= APPROX_MAX_N);
        assert_eq!(c.generator_lcm().unwrap(), c.n);
        assert!(c.max_deviation > 0.0);
        assert!(c.max_deviation < 0.1, "deviation {}", c.max_deviation);
    }

    #[test]
    fn larger_epsilon_never_raises_n() {
        let mut last = u64::MAX;
        for eps in [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1] {
            let n = solve_approximate(5, 0.3, 0.7, None, eps).unwrap().unwrap().certificate.n;
            assert!(n <= last, "eps {eps}: {n} > {last}");
            last = n;
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_approximate(3, 0.0, 0.0, None, 1e-3).is_err());
        assert!(solve_approximate(3, 0.5, 0.0, None, 0.0).is_err());
    }
}
