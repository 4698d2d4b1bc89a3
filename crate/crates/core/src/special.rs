//! States that revive although `U_k^N ≠ I`.
//!
//! A state built only from eigenvectors whose eigenvalues are `N`-th roots of
//! unity returns to itself after `N` steps even when the rest of the spectrum
//! does not. Eigenvectors come from the `2×2` Fourier blocks mapped back by
//! `F†`.

use std::fmt;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fraction::{checked_lcm, ReducedFraction};
use crate::linalg::{turns, C64, CMat, ZERO};
use crate::revival::{reconstruct_fraction, PHASE_TOL};
use crate::spectral::{block_diagonalize, block_fourier, eigenvalues_closed_form, unit_power};
use crate::walk::{build_walk_operator, evolve, CoinParams, WalkOperator, WalkerState};

/// Largest accepted `‖U v - λ v‖` for a basis vector.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenEntry {
    pub value: C64,
    /// Unit eigenvector in the position-coin basis.
    pub vector: DVector<C64>,
    pub block: usize,
    pub branch: Branch,
    /// The block is a multiple of the identity; the vector is one of an
    /// arbitrary orthonormal pair.
    pub degenerate: bool,
}

impl EigenEntry {
    /// `λ` as a fraction of a turn, if it is a root of unity of order `≤ max_den`.
    pub fn phase_fraction(&self, max_den: u64) -> Option<ReducedFraction> {
        reconstruct_fraction(self.value.arg(), max_den, PHASE_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    pub k: usize,
    pub params: CoinParams,
    /// Block by block, in phase order within a block.
    pub entries: Vec<EigenEntry>,
}

impl EigenBasis {
    pub fn find(&self, block: usize, branch: Branch) -> Option<&EigenEntry> {
        self.entries.iter().find(|e| e.block == block && e.branch == branch)
    }

    /// Largest `‖U v - λ v‖` over the basis.
    pub fn max_residual(&self, op: &WalkOperator) -> f64 {
        self.entries
            .iter()
            .map(|e| (op.matrix() * &e.vector - &e.vector * e.value).norm())
            .fold(0.0, f64::max)
    }

    /// Number of singular values of the basis matrix above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let cols: Vec<DVector<C64>> = self.entries.iter().map(|e| e.vector.clone()).collect();
        let m = CMat::from_columns(&cols);
        m.singular_values().iter().filter(|&&s| s > tol).count()
    }
}

/// Eigenvectors of `U_k` labelled by block and by the `±` branch of the
/// closed-form eigenvalues.
pub fn eigenbasis(k: usize, params: &CoinParams) -> Result<EigenBasis> {
    let op = build_walk_operator(k, params)?;
    let form = block_diagonalize(&op)?;
    let f_adj = block_fourier(k)?.adjoint();
    let mut entries = Vec::with_capacity(2 * k);
    for (l, pairs) in form.eigenpairs.iter().enumerate() {
        let degenerate = form.degenerate[l];
        let closed = eigenvalues_closed_form(k, l, params)?;
        let first = if degenerate
            || (pairs[0].value - closed.plus).norm() <= (pairs[0].value - closed.minus).norm()
        {
            Branch::Plus
        } else {
            Branch::Minus
        };
        for (i, p) in pairs.iter().enumerate() {
            let branch = match (i, first) {
                (0, b) => b,
                (_, Branch::Plus) => Branch::Minus,
                (_, Branch::Minus) => Branch::Plus,
            };
            let mut hat = DVector::from_element(2 * k, ZERO);
            hat[2 * l] = p.vector[0];
            hat[2 * l + 1] = p.vector[1];
            entries.push(EigenEntry {
                value: p.value,
                vector: &f_adj * hat,
                block: l,
                branch,
                degenerate,
            });
        }
    }
    let basis = EigenBasis { k, params: *params, entries };
    let residual = basis.max_residual(&op);
    if residual >= RESIDUAL_TOL {
        return Err(Error::InternalConsistency(format!(
            "eigenvector residual {residual:e} for k = {k}"
        )));
    }
    Ok(basis)
}

/// Entries with `|λ^N - 1| < tol`. May be empty.
pub fn demoivre_subspace(basis: &EigenBasis, n_target: u64, tol: f64) -> Result<Vec<EigenEntry>> {
    if n_target < 1 {
        return invalid("n_target must be at least 1");
    }
    Ok(basis
        .entries
        .iter()
        .filter(|e| (unit_power(e.value, n_target) - 1.0).norm() < tol)
        .cloned()
        .collect())
}

/// Exact period of a generic state in the span of `subset`: the lcm of the
/// orders of its eigenvalues, each read as the nearest `N`-th root of unity.
/// Divides `n_target`; smaller when no selected eigenvalue is primitive enough.
pub fn subspace_period(subset: &[EigenEntry], n_target: u64) -> Result<u64> {
    if n_target < 1 {
        return invalid("n_target must be at least 1");
    }
    let mut period = 1;
    for e in subset {
        let m = (turns(e.value) * n_target as f64).round() as i128;
        let order = ReducedFraction::phase(m, n_target)?.den();
        period = checked_lcm(period, order)?;
    }
    Ok(period)
}

/// Normalized `Σ c_j v_j`.
pub fn build_special_state(subset: &[EigenEntry], coefficients: &[C64]) -> Result<WalkerState> {
    if subset.is_empty() {
        return invalid("empty eigenvector subset");
    }
    if subset.len() != coefficients.len() {
        return invalid(format!(
            "{} coefficients for {} eigenvectors",
            coefficients.len(),
            subset.len()
        ));
    }
    let dim = subset[0].vector.len();
    if subset.iter().any(|e| e.vector.len() != dim) {
        return invalid("eigenvectors from different cycle lengths");
    }
    let mut v = DVector::from_element(dim, ZERO);
    for (e, &c) in subset.iter().zip(coefficients) {
        v += &e.vector * c;
    }
    WalkerState::normalized(dim / 2, v.iter().copied().collect())
}

/// `|⟨ψ|U^t|ψ⟩|`.
pub fn fidelity(state: &WalkerState, op: &WalkOperator, t: u64) -> Result<f64> {
    Ok(state.inner(&evolve(state, op, t)?).norm())
}

/// `|⟨ψ|U^t|ψ⟩|` for `t = 0..=steps`, by repeated single steps.
pub fn fidelity_series(state: &WalkerState, op: &WalkOperator, steps: u64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(steps as usize + 1);
    let mut cur = state.clone();
    out.push(state.inner(&cur).norm());
    for _ in 0..steps {
        cur = evolve(&cur, op, 1)?;
        out.push(state.inner(&cur).norm());
    }
    Ok(out)
}

/// Smallest `t ≥ 1` with `‖U^t ψ - ψ‖ < tol`, stepping up to `max_t`.
pub fn state_period(state: &WalkerState, op: &WalkOperator, max_t: u64, tol: f64) -> Result<Option<u64>> {
    let mut cur = state.clone();
    for t in 1..=max_t {
        cur = evolve(&cur, op, 1)?;
        if cur.max_diff(state) < tol {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Eigenphases as fractions of a turn, for display.
pub fn entry_turns(e: &EigenEntry) -> f64 {
    turns(e.value)
}
