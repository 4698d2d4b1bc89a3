//! Coin, shift and step operators for walks on cycles and on the line.
//!
//! Basis ordering is position-major with the coin index fastest: the state
//! `|i, s⟩` (with `s = 0` for coin-up and `s = 1` for coin-down) sits at flat
//! index `2i + s`. Coin-up amplitude moves to `i - 1`, coin-down to `i + 1`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fraction::ReducedFraction;
use crate::linalg::{kron, unitarity_defect, CMat, C64, ONE, ZERO};
use crate::spectral;

/// Step count above which [`evolve`] powers the block-diagonal form instead of
/// multiplying step by step.
pub const EIGENPHASE_THRESHOLD: u64 = 64;

/// Parameters of the coin
/// `[[√ρ, √(1-ρ)e^{iα}], [√(1-ρ)e^{iβ}, -√ρ e^{i(α+β)}]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    rho: f64,
    alpha: f64,
    beta: f64,
}

impl CoinParams {
    /// `0 ≤ ρ ≤ 1`, `0 ≤ α, β ≤ π`.
    pub fn new(rho: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_rho(rho)?;
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=PI).contains(&v) {
                return invalid(format!("{name} = {v} is outside [0, π]"));
            }
        }
        Ok(Self { rho, alpha, beta })
    }

    /// Coin with the combined phase `δ = α + β` given directly, `δ ∈ [0, 2π)`.
    /// Stored as `α = δ, β = 0`; the spectrum only sees `δ`.
    pub fn from_delta(rho: f64, delta: f64) -> Result<Self> {
        check_rho(rho)?;
        if !(0.0..TAU).contains(&delta) {
            return invalid(format!("delta = {delta} is outside [0, 2π)"));
        }
        Ok(Self { rho, alpha: delta, beta: 0.0 })
    }

    /// `δ = 2π·frac`, with `frac` in `[0, 1)`.
    pub fn from_delta_fraction(rho: f64, frac: ReducedFraction) -> Result<Self> {
        if frac.value() >= 1.0 {
            return invalid(format!("delta fraction {frac} must be below 1"));
        }
        Self::from_delta(rho, frac.radians())
    }

    pub fn hadamard() -> Self {
        Self { rho: 0.5, alpha: 0.0, beta: 0.0 }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.alpha + self.beta
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return invalid(format!("rho = {rho} is outside [0, 1]"));
    }
    Ok(())
}

/// Normalized amplitudes over `k` sites ⊗ coin.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    k: usize,
    amplitudes: DVector<C64>,
}

impl WalkerState {
    pub const NORM_TOL: f64 = 1e-12;

    /// Wraps amplitudes that must already be normalized to within `1e-12`.
    pub fn new(k: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(k, amplitudes)?;
        let norm2 = state.norm_sqr();
        if (norm2 - 1.0).abs() > Self::NORM_TOL {
            return invalid(format!("state is not normalized: Σ|a|² = {norm2}"));
        }
        Ok(state)
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(k: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let mut state = Self::unchecked(k, amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if norm < 1e-300 {
            return invalid("cannot normalize the zero vector");
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    /// The basis state `|position, coin⟩`.
    pub fn basis(k: usize, position: usize, coin: usize) -> Result<Self> {
        if position >= k || coin > 1 {
            return invalid(format!("|{position},{coin}⟩ is not a basis state for k = {k}"));
        }
        let mut amps = vec![ZERO; 2 * k];
        amps[2 * position + coin] = ONE;
        Self::new(k, amps)
    }

    fn unchecked(k: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if k < 2 {
            return invalid(format!("cycle length k = {k} must be at least 2"));
        }
        if amplitudes.len() != 2 * k {
            return invalid(format!(
                "expected {} amplitudes for k = {k}, got {}",
                2 * k,
                amplitudes.len()
            ));
        }
        Ok(Self { k, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub(crate) fn from_vector(k: usize, amplitudes: DVector<C64>) -> Self {
        Self { k, amplitudes }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, position: usize, coin: usize) -> C64 {
        self.amplitudes[2 * position + coin]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of finding the walker at each site.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.k)
            .map(|i| self.amplitudes[2 * i].norm_sqr() + self.amplitudes[2 * i + 1].norm_sqr())
            .collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WalkerState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Largest entrywise difference to another state.
    pub fn max_diff(&self, other: &WalkerState) -> f64 {
        (&self.amplitudes - &other.amplitudes).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// The one-step operator `U_k = S_k (I_k ⊗ C)` as a dense `2k × 2k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkOperator {
    k: usize,
    matrix: CMat,
    params: CoinParams,
}

impl WalkOperator {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn params(&self) -> &CoinParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        2 * self.k
    }
}

pub fn build_coin(params: &CoinParams) -> Matrix2<C64> {
    let s = params.rho.sqrt();
    let c = (1.0 - params.rho).sqrt();
    Matrix2::new(
        C64::new(s, 0.0),
        C64::from_polar(c, params.alpha),
        C64::from_polar(c, params.beta),
        -C64::from_polar(s, params.alpha + params.beta),
    )
}

/// Conditional shift on a `k`-cycle: `|i,↑⟩ → |i-1,↑⟩`, `|i,↓⟩ → |i+1,↓⟩`.
pub fn build_shift_cycle(k: usize) -> Result<CMat> {
    if k < 2 {
        return invalid(format!("cycle length k = {k} must be at least 2"));
    }
    let mut s = CMat::zeros(2 * k, 2 * k);
    for i in 0..k {
        s[(2 * ((i + k - 1) % k), 2 * i)] = ONE;
        s[(2 * ((i + 1) % k) + 1, 2 * i + 1)] = ONE;
    }
    Ok(s)
}

pub fn build_walk_operator(k: usize, params: &CoinParams) -> Result<WalkOperator> {
    let shift = build_shift_cycle(k)?;
    let coin = build_coin(params);
    let coin = CMat::from_iterator(2, 2, coin.iter().copied());
    let matrix = shift * kron(&CMat::identity(k, k), &coin);
    debug_assert!(unitarity_defect(&matrix) < 1e-12);
    Ok(WalkOperator { k, matrix, params: *params })
}

/// `U^steps ψ`. Above [`EIGENPHASE_THRESHOLD`] steps the block-diagonal
/// eigenphase form is powered instead of multiplying step by step.
pub fn evolve(state: &WalkerState, op: &WalkOperator, steps: u64) -> Result<WalkerState> {
    if state.k != op.k {
        return invalid(format!("state has k = {}, operator has k = {}", state.k, op.k));
    }
    if steps > EIGENPHASE_THRESHOLD {
        return spectral::evolve_eigenphase(state, op, steps);
    }
    let mut v = state.amplitudes.clone();
    for _ in 0..steps {
        v = &op.matrix * v;
    }
    Ok(WalkerState::from_vector(state.k, v))
}

/// Every intermediate state `ψ, Uψ, …, U^steps ψ`.
pub fn trajectory(state: &WalkerState, op: &WalkOperator, steps: u64) -> Result<Vec<WalkerState>> {
    if state.k != op.k {
        return invalid(format!("state has k = {}, operator has k = {}", state.k, op.k));
    }
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(state.clone());
    let mut v = state.amplitudes.clone();
    for _ in 0..steps {
        v = &op.matrix * v;
        out.push(WalkerState::from_vector(state.k, v.clone()));
    }
    Ok(out)
}

/// Amplitudes of a walk on the integer line over a finite window.
#[derive(Debug, Clone, PartialEq)]
pub struct LineWalkTable {
    /// Position of `amplitudes[0]`.
    pub min_position: i64,
    /// `[up, down]` amplitudes per site.
    pub amplitudes: Vec<[C64; 2]>,
}

impl LineWalkTable {
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.amplitudes.len() as i64).map(move |i| self.min_position + i)
    }

    pub fn amplitude(&self, position: i64, coin: usize) -> C64 {
        let idx = position - self.min_position;
        if idx < 0 || idx as usize >= self.amplitudes.len() {
            return ZERO;
        }
        self.amplitudes[idx as usize][coin]
    }

    pub fn probability(&self, position: i64) -> f64 {
        self.amplitude(position, 0).norm_sqr() + self.amplitude(position, 1).norm_sqr()
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(|[u, d]| u.norm_sqr() + d.norm_sqr()).sum()
    }

    /// Total probability strictly left and strictly right of the origin.
    pub fn left_right(&self) -> (f64, f64) {
        let mut left = 0.0;
        let mut right = 0.0;
        for x in self.positions() {
            match x.cmp(&0) {
                std::cmp::Ordering::Less => left += self.probability(x),
                std::cmp::Ordering::Greater => right += self.probability(x),
                std::cmp::Ordering::Equal => {}
            }
        }
        (left, right)
    }
}

/// Coin-then-shift walk on the line, keeping every intermediate table.
///
/// The window is the initial support widened by `steps` on both sides; the
/// walk cannot leave it.
pub fn line_walk_trajectory(
    initial: &BTreeMap<i64, [C64; 2]>,
    params: &CoinParams,
    steps: usize,
) -> Result<Vec<LineWalkTable>> {
    let (Some((&lo, _)), Some((&hi, _))) = (initial.first_key_value(), initial.last_key_value())
    else {
        return invalid("initial line state is empty");
    };
    let norm: f64 = initial.values().map(|[u, d]| u.norm_sqr() + d.norm_sqr()).sum();
    if (norm - 1.0).abs() > WalkerState::NORM_TOL {
        return invalid(format!("initial line state is not normalized: Σ|a|² = {norm}"));
    }
    let min_position = lo - steps as i64;
    let width = (hi - lo) as usize + 2 * steps + 1;
    let mut amps = vec![[ZERO; 2]; width];
    for (&x, &a) in initial {
        amps[(x - min_position) as usize] = a;
    }
    let coin = build_coin(params);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(LineWalkTable { min_position, amplitudes: amps.clone() });
    for _ in 0..steps {
        let mut next = vec![[ZERO; 2]; width];
        for (i, [u, d]) in amps.iter().enumerate() {
            if *u == ZERO && *d == ZERO {
                continue;
            }
            let up = coin[(0, 0)] * u + coin[(0, 1)] * d;
            let down = coin[(1, 0)] * u + coin[(1, 1)] * d;
            next[i - 1][0] += up;
            next[i + 1][1] += down;
        }
        amps = next;
        out.push(LineWalkTable { min_position, amplitudes: amps.clone() });
    }
    Ok(out)
}

/// Final table of [`line_walk_trajectory`].
pub fn line_walk(
    initial: &BTreeMap<i64, [C64; 2]>,
    params: &CoinParams,
    steps: usize,
) -> Result<LineWalkTable> {
    Ok(line_walk_trajectory(initial, params, steps)?.pop().expect("at least the initial table"))
}
