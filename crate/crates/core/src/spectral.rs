//! Block-circulant structure of `U_k` and its Fourier block diagonalization.
//!
//! With `F = F^k ⊗ F^2`, `F U_k F†` is block diagonal with 2×2 blocks `U_{k,l}`,
//! `l = 0..k`. Each block has a closed form in `(ρ, α, β)` and its eigenvalues
//! depend on the coin phases only through `δ = α + β`.

use std::f64::consts::TAU;

use nalgebra::{DVector, Matrix2, Vector2};

use crate::error::{invalid, Error, Result};
use crate::linalg::{eig2_normal, kron, phase_distance, turns, CMat, C64, ZERO};
use crate::walk::{CoinParams, WalkOperator, WalkerState};

/// Off-block residual allowed after Fourier conjugation.
pub const DIAGONALIZATION_TOL: f64 = 1e-10;

/// `F^M` with entries `e^{2πi·mn/M}/√M`.
pub fn fourier_matrix(m: usize) -> Result<CMat> {
    if m < 1 {
        return invalid("Fourier matrix size must be at least 1");
    }
    let scale = 1.0 / (m as f64).sqrt();
    Ok(CMat::from_fn(m, m, |r, c| {
        // Reduce r·c mod m before converting so large products stay exact.
        let t = ((r * c) % m) as f64 / m as f64;
        C64::from_polar(scale, TAU * t)
    }))
}

/// `F^k ⊗ F^2`, position factor first.
pub fn block_fourier(k: usize) -> Result<CMat> {
    Ok(kron(&fourier_matrix(k)?, &fourier_matrix(2)?))
}

/// First block row `(a_0, …, a_{k-1})` of a 2×2 block-circulant matrix
/// `A_{m,n} = a_{(n-m) mod k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCirculantVector {
    pub k: usize,
    pub blocks: Vec<Matrix2<C64>>,
}

impl BlockCirculantVector {
    pub fn from_operator(op: &WalkOperator) -> Self {
        let k = op.k();
        let m = op.matrix();
        let blocks = (0..k)
            .map(|n| Matrix2::from_fn(|r, c| m[(r, 2 * n + c)]))
            .collect();
        Self { k, blocks }
    }

    /// Indices of blocks with any nonzero entry.
    pub fn nonzero_indices(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.iter().any(|z| z.norm() > 0.0))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_matrix(&self) -> CMat {
        let k = self.k;
        let mut out = CMat::zeros(2 * k, 2 * k);
        for m in 0..k {
            for n in 0..k {
                let b = &self.blocks[(n + k - m) % k];
                for r in 0..2 {
                    for c in 0..2 {
                        out[(2 * m + r, 2 * n + c)] = b[(r, c)];
                    }
                }
            }
        }
        out
    }
}

/// One eigenvalue of a diagonal block with its unit eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEigenpair {
    pub value: C64,
    pub vector: Vector2<C64>,
}

/// The diagonal blocks of `F U_k F†` with their eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalForm {
    pub k: usize,
    pub blocks: Vec<Matrix2<C64>>,
    /// Per block, sorted by phase in `[0, 2π)`.
    pub eigenpairs: Vec<[BlockEigenpair; 2]>,
    /// Blocks whose two eigenvalues coincide (the block is a scalar).
    pub degenerate: Vec<bool>,
    /// Largest off-block entry of `F U_k F†`.
    pub residual: f64,
}

impl BlockDiagonalForm {
    /// `F U_k^n F†` block by block, `B_l^n = Σ λ^n v v†`.
    pub fn powered_blocks(&self, n: u64) -> Vec<Matrix2<C64>> {
        self.eigenpairs
            .iter()
            .map(|pairs| {
                pairs.iter().fold(Matrix2::zeros(), |acc, p| {
                    acc + p.vector * p.vector.adjoint() * unit_power(p.value, n)
                })
            })
            .collect()
    }

    pub fn spectrum(&self) -> Vec<C64> {
        self.eigenpairs.iter().flat_map(|p| p.iter().map(|e| e.value)).collect()
    }
}

/// `λ^n` for `|λ| = 1`, reducing the phase multiple modulo one turn.
pub(crate) fn unit_power(lambda: C64, n: u64) -> C64 {
    let t = turns(lambda);
    let hi = (n >> 26) as f64 * 67_108_864.0;
    let lo = (n & ((1 << 26) - 1)) as f64;
    let frac = ((hi * t).rem_euclid(1.0) + (lo * t).rem_euclid(1.0)).rem_euclid(1.0);
    C64::from_polar(1.0, TAU * frac)
}

pub fn block_diagonalize(op: &WalkOperator) -> Result<BlockDiagonalForm> {
    let k = op.k();
    let f = block_fourier(k)?;
    let d = &f * op.matrix() * f.adjoint();
    let mut residual = 0.0f64;
    for r in 0..2 * k {
        for c in 0..2 * k {
            if r / 2 != c / 2 {
                residual = residual.max(d[(r, c)].norm());
            }
        }
    }
    if residual >= DIAGONALIZATION_TOL {
        return Err(Error::InternalConsistency(format!(
            "off-block residual {residual:e} after Fourier conjugation"
        )));
    }
    let blocks: Vec<Matrix2<C64>> = (0..k)
        .map(|l| Matrix2::from_fn(|r, c| d[(2 * l + r, 2 * l + c)]))
        .collect();
    let mut eigenpairs = Vec::with_capacity(k);
    let mut degenerate = Vec::with_capacity(k);
    for b in &blocks {
        let (pairs, deg) = eig2_normal(b);
        eigenpairs.push(pairs.map(|(value, vector)| BlockEigenpair { value, vector }));
        degenerate.push(deg);
    }
    Ok(BlockDiagonalForm { k, blocks, eigenpairs, degenerate, residual })
}

fn check_block_index(k: usize, l: usize) -> Result<()> {
    if k < 2 {
        return invalid(format!("cycle length k = {k} must be at least 2"));
    }
    if l >= k {
        return invalid(format!("block index l = {l} out of range for k = {k}"));
    }
    Ok(())
}

/// `e^{2πi·(l/k)}` with the product reduced exactly.
fn root_of_unity(l: usize, k: usize, sign: f64) -> C64 {
    C64::from_polar(1.0, sign * TAU * ((l % k) as f64 / k as f64))
}

/// Closed-form `l`-th diagonal block of `F U_k F†`.
pub fn block_formula(k: usize, l: usize, params: &CoinParams) -> Result<Matrix2<C64>> {
    check_block_index(k, l)?;
    let e = root_of_unity(l, k, -1.0);
    let f = root_of_unity(l, k, 1.0);
    let ea = C64::from_polar(1.0, params.alpha());
    let eb = C64::from_polar(1.0, params.beta());
    let ed = C64::from_polar(1.0, params.delta());
    let c = (1.0 - params.rho()).sqrt();
    let s = params.rho().sqrt();
    let half = 0.5;
    Ok(Matrix2::new(
        ((e * ea + f * eb) * c + (e - f * ed) * s) * half,
        ((-e * ea + f * eb) * c + (e + f * ed) * s) * half,
        ((e * ea - f * eb) * c + (e + f * ed) * s) * half,
        ((-e * ea - f * eb) * c + (e - f * ed) * s) * half,
    ))
}

/// The labelled eigenvalue pair `(λ⁺, λ⁻)` of block `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvaluePair {
    pub plus: C64,
    pub minus: C64,
}

impl EigenvaluePair {
    /// Both values sorted by phase in `[0, 2π)`.
    pub fn sorted(&self) -> [C64; 2] {
        if turns(self.minus) < turns(self.plus) {
            [self.minus, self.plus]
        } else {
            [self.plus, self.minus]
        }
    }
}

/// `4πl/k + δ` reduced into `(-π, π]`, snapping values within `1e-12` of `±π` to `π`.
fn doubled_block_angle(k: usize, l: usize, delta: f64) -> f64 {
    let t = ((2 * l) % k) as f64 / k as f64 + delta / TAU;
    let mut t = t.rem_euclid(1.0);
    if t > 0.5 && (t - 0.5).abs() > 1e-12 {
        t -= 1.0;
    } else if (t - 0.5).abs() <= 1e-12 {
        t = 0.5;
    }
    TAU * t
}

/// Closed-form eigenvalues of block `l`:
/// `λ± = ½ e^{-2πil/k} [ (1 - e^{iφ})√ρ ± 2 √(e^{iφ}(1 - ρ sin²(φ/2))) ]`,
/// `φ = 4πl/k + δ`.
///
/// The square root is taken as `e^{iφ/2}√(1 - ρ sin²(φ/2))` with `φ` reduced
/// into `(-π, π]`, which is the principal branch. The pair is checked against
/// the trace and determinant of [`block_formula`]; the root's sign is flipped
/// if that check fails.
pub fn eigenvalues_closed_form(k: usize, l: usize, params: &CoinParams) -> Result<EigenvaluePair> {
    check_block_index(k, l)?;
    let rho = params.rho();
    let phi = doubled_block_angle(k, l, params.delta());
    let e = root_of_unity(l, k, -1.0);
    let ephi = C64::from_polar(1.0, phi);
    let linear = (C64::new(1.0, 0.0) - ephi) * rho.sqrt();
    let radial = (1.0 - rho * (phi / 2.0).sin().powi(2)).max(0.0).sqrt();
    let root = C64::from_polar(radial, phi / 2.0);

    let block = block_formula(k, l, params)?;
    let trace = block[(0, 0)] + block[(1, 1)];
    let det = block.determinant();
    let consistent = |r: C64| {
        let plus = e * (linear + r * 2.0) * 0.5;
        let minus = e * (linear - r * 2.0) * 0.5;
        let ok = (plus + minus - trace).norm() < 1e-8 && (plus * minus - det).norm() < 1e-8;
        (EigenvaluePair { plus, minus }, ok)
    };
    match consistent(root) {
        (pair, true) => Ok(pair),
        _ => match consistent(-root) {
            (pair, true) => Ok(pair),
            _ => Err(Error::InternalConsistency(format!(
                "closed-form eigenvalues of block l = {l}, k = {k} disagree with its trace/determinant"
            ))),
        },
    }
}

/// All `2k` eigenvalues, block by block, each block's pair sorted by phase.
pub fn full_spectrum(k: usize, params: &CoinParams) -> Result<Vec<C64>> {
    if k < 2 {
        return invalid(format!("cycle length k = {k} must be at least 2"));
    }
    let mut out = Vec::with_capacity(2 * k);
    for l in 0..k {
        out.extend(eigenvalues_closed_form(k, l, params)?.sorted());
    }
    Ok(out)
}

/// Eigenvalues of the dense operator from a general complex Schur decomposition.
///
/// This path never uses the block structure and serves as an independent check
/// on [`full_spectrum`].
pub fn dense_spectrum(op: &WalkOperator) -> Result<Vec<C64>> {
    let schur = nalgebra::linalg::Schur::try_new(op.matrix().clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::InternalConsistency("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Largest phase error of the best greedy pairing between two multisets of
/// unit complex numbers, in radians. Returns infinity on a length mismatch.
pub fn spectrum_mismatch(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| turns(a[i]).total_cmp(&turns(a[j])));
    for i in order {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, z)| (j, phase_distance(a[i], *z)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("lengths match");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// `U^n` assembled from powered Fourier blocks.
pub fn power_eigenphase(op: &WalkOperator, n: u64) -> Result<CMat> {
    let k = op.k();
    let form = block_diagonalize(op)?;
    let powered = form.powered_blocks(n);
    let mut d = CMat::zeros(2 * k, 2 * k);
    for (l, b) in powered.iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                d[(2 * l + r, 2 * l + c)] = b[(r, c)];
            }
        }
    }
    let f = block_fourier(k)?;
    Ok(f.adjoint() * d * f)
}

pub(crate) fn evolve_eigenphase(state: &WalkerState, op: &WalkOperator, n: u64) -> Result<WalkerState> {
    let k = op.k();
    let form = block_diagonalize(op)?;
    let f = block_fourier(k)?;
    let hat = &f * state.amplitudes();
    let mut out_hat = DVector::from_element(2 * k, ZERO);
    for (l, b) in form.powered_blocks(n).iter().enumerate() {
        let v = b * Vector2::new(hat[2 * l], hat[2 * l + 1]);
        out_hat[2 * l] = v[0];
        out_hat[2 * l + 1] = v[1];
    }
    Ok(WalkerState::from_vector(k, f.adjoint() * out_hat))
}

/// Maximum entry of `|F F† - I|`, used by tests and diagnostics.
pub fn fourier_defect(m: usize) -> Result<f64> {
    let f = fourier_matrix(m)?;
    Ok(crate::linalg::identity_deviation(&(&f * f.adjoint())))
}

/// Largest entrywise difference between a closed-form block and the numeric one.
pub fn block_formula_error(op: &WalkOperator) -> Result<f64> {
    let form = block_diagonalize(op)?;
    let mut worst = 0.0f64;
    for (l, b) in form.blocks.iter().enumerate() {
        let closed = block_formula(op.k(), l, op.params())?;
        worst = worst.max((b - closed).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}
