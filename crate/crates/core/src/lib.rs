//! Discrete-time quantum walks on k-cycles and their full quantum-state revivals.
//!
//! A walker on a ring of `k` sites carries a two-level coin. One step applies the
//! coin `C(ρ, α, β)` at every site and then shifts the coin-up amplitude one site
//! to the left and the coin-down amplitude one site to the right. The step
//! operator `U_k` is block circulant, so the Fourier matrix `F^k ⊗ F^2` reduces it
//! to `k` independent 2×2 blocks whose eigenvalues are available in closed form.
//!
//! `U_k^N = I` holds exactly when every eigenvalue is a root of unity
//! `e^{2πi m/n}`, and then `N = lcm(n_j)`. The modules here build the operators
//! ([`walk`]), diagonalize them ([`spectral`]), test and certify revivals
//! ([`revival`]), enumerate exact solution families ([`solver`]) and construct
//! states that revive without a full revival ([`special`]).
//!
//! ```
//! use cycle_revival::{CoinParams, revival};
//!
//! let params = CoinParams::new(2.0 / 3.0, 0.0, 0.0).unwrap();
//! let cert = revival::revival_period(3, &params, 100, 1e-9).unwrap().unwrap();
//! assert_eq!(cert.n, 8);
//! ```

pub mod error;
pub mod expr;
pub mod fraction;
pub(crate) mod linalg;
pub mod record;
pub mod revival;
pub mod solver;
pub mod special;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use fraction::ReducedFraction;
pub use linalg::{CMat, C64};
pub use revival::RevivalCertificate;
pub use walk::{CoinParams, WalkOperator, WalkerState};
