//! Exact solution assembly for rational `δ/2π`.
//!
//! For a given `δ`, block `l` of `U_k` depends on `a_l = 2l/k + δ/2π (mod 1)`
//! only through `cos 2πa_l`. Blocks with `a_l = 0` have constant eigenvalues;
//! the rest fall into classes sharing `D = 1 - cos 2πa_l`. Within a class an
//! eigenphase `x` pins `ρ = (1 - cos 2π(2x - δ/2π)) / D`, and every other phase
//! with the same `ρ` solves `2x' - δ/2π ≡ ±(2x - δ/2π) (mod 1)`. All of this is
//! exact integer arithmetic on [`ReducedFraction`].

use std::f64::consts::TAU;

use crate::error::{invalid, Error, Result};
use crate::fraction::ReducedFraction;
use crate::linalg::turns;
use crate::revival::{
    lcm_denominators, power_deviation, undefined_rho_phases, RevivalCertificate, CERTIFY_TOL,
    PHASE_TOL,
};
use crate::spectral::full_spectrum;
use crate::walk::{build_walk_operator, CoinParams};

/// Blocks sharing one value of `1 - cos 2πa_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockClass {
    /// `min(a_l, 1 - a_l)`, in `(0, 1/2]`.
    pub key: ReducedFraction,
    pub blocks: Vec<usize>,
    /// `1 - cos 2π·key`.
    pub denominator: f64,
}

impl BlockClass {
    /// `ρ` at which this class has eigenphase `x`.
    pub fn rho_at(&self, x: ReducedFraction, delta: ReducedFraction) -> f64 {
        let t = x.scale_turns(2).sub_turns(&delta);
        (1.0 - (TAU * t.value()).cos()) / self.denominator
    }
}

/// How the blocks of `U_k` split for a rational `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaLayout {
    pub k: usize,
    /// `δ/2π`.
    pub delta: ReducedFraction,
    pub constant_blocks: Vec<usize>,
    /// Sorted by key.
    pub classes: Vec<BlockClass>,
}

impl DeltaLayout {
    pub fn new(k: usize, delta: ReducedFraction) -> Result<Self> {
        if k < 2 {
            return invalid(format!("cycle length k = {k} must be at least 2"));
        }
        if delta.value() >= 1.0 {
            return invalid(format!("delta fraction {delta} must be below 1"));
        }
        let mut constant_blocks = Vec::new();
        let mut classes: Vec<BlockClass> = Vec::new();
        for l in 0..k {
            let a = ReducedFraction::phase(2 * l as i128, k as u64)?.add_turns(&delta);
            if a.is_zero() {
                constant_blocks.push(l);
                continue;
            }
            let key = a.min(a.neg_turns());
            match classes.iter_mut().find(|c| c.key == key) {
                Some(c) => c.blocks.push(l),
                None => classes.push(BlockClass {
                    key,
                    blocks: vec![l],
                    denominator: 1.0 - (TAU * key.value()).cos(),
                }),
            }
        }
        classes.sort_by_key(|c| c.key);
        Ok(Self { k, delta, constant_blocks, classes })
    }

    /// Exact eigenphases of every constant block.
    pub fn constant_phases(&self) -> Result<Vec<ReducedFraction>> {
        let mut out = Vec::new();
        for &l in &self.constant_blocks {
            out.extend(undefined_rho_phases(self.k, l)?);
        }
        Ok(out)
    }
}

/// All `x` in `[0, 1)` sharing a class `ρ` with `seed`.
pub fn companions(seed: ReducedFraction, delta: ReducedFraction) -> Vec<ReducedFraction> {
    let t0 = seed.scale_turns(2).sub_turns(&delta);
    let mut out: Vec<ReducedFraction> = [delta.add_turns(&t0), delta.sub_turns(&t0)]
        .iter()
        .flat_map(|t| t.halves())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// An exact revival together with its per-class generator sets.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub certificate: RevivalCertificate,
    /// `δ/2π`.
    pub delta: ReducedFraction,
    /// Nonzero companion phases, one sorted list per class, in class order.
    pub forms: Vec<Vec<ReducedFraction>>,
}

/// Builds and verifies the revival for `ρ` with one seed phase per class.
///
/// Every eigenvalue of `U_k` must coincide with a companion or constant phase;
/// the generators are the ones that occur, so `N` is the exact order of `U_k`.
pub fn assemble(
    layout: &DeltaLayout,
    rho: f64,
    seeds: &[ReducedFraction],
) -> Result<ExactSolution> {
    if seeds.len() != layout.classes.len() {
        return invalid(format!(
            "{} block classes need {} seeds, got {}",
            layout.classes.len(),
            layout.classes.len(),
            seeds.len()
        ));
    }
    if !(0.0..=1.0).contains(&rho) {
        return invalid(format!("rho = {rho} is outside [0, 1]"));
    }
    let mut candidates = layout.constant_phases()?;
    let mut forms = Vec::with_capacity(seeds.len());
    for (class, &seed) in layout.classes.iter().zip(seeds) {
        let r = class.rho_at(seed, layout.delta);
        if (r - rho).abs() > 1e-10 {
            return invalid(format!(
                "seed {seed} gives rho {r} in class {}, not {rho}",
                class.key
            ));
        }
        let set = companions(seed, layout.delta);
        candidates.extend(&set);
        forms.push(set.into_iter().filter(|x| !x.is_zero()).collect());
    }
    candidates.sort();
    candidates.dedup();

    let params = CoinParams::from_delta_fraction(rho, layout.delta)?;
    let mut used = Vec::new();
    for z in full_spectrum(layout.k, &params)? {
        let t = turns(z);
        let hit = candidates
            .iter()
            .find(|c| c.circular_distance(t) < PHASE_TOL)
            .ok_or_else(|| {
                Error::InternalConsistency(format!("eigenphase {t} matches no generator candidate"))
            })?;
        used.push(*hit);
    }
    used.sort();
    used.dedup();
    let n = lcm_denominators(&used, &[1])?;
    let op = build_walk_operator(layout.k, &params)?;
    let max_deviation = power_deviation(&op, n)?;
    if max_deviation >= CERTIFY_TOL {
        return Err(Error::InternalConsistency(format!(
            "k = {}, N = {n}, rho = {rho}: ‖U^N - I‖ = {max_deviation:e}",
            layout.k
        )));
    }
    used.retain(|x| !x.is_zero());
    Ok(ExactSolution {
        certificate: RevivalCertificate {
            k: layout.k,
            n,
            rho,
            delta: params.delta(),
            generators: used,
            max_deviation,
        },
        delta: layout.delta,
        forms,
    })
}

/// Reduced fractions `m/n` in `[0, 1)` with `n ≤ max_den`.
pub fn fractions_up_to(max_den: u64) -> impl Iterator<Item = ReducedFraction> {
    (1..=max_den).flat_map(move |n| {
        (0..n).filter_map(move |m| {
            if num_integer::gcd(m, n) == 1 {
                Some(ReducedFraction::new(m, n).expect("n ≥ 1"))
            } else {
                None
            }
        })
    })
}
