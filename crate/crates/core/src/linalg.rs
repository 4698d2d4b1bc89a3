//! Dense complex helpers shared by the walk and spectral modules.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Largest entry modulus.
#[cfg(test)]
pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |m - I|` entrywise.
pub(crate) fn identity_deviation(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for ((r, c), z) in m.iter().enumerate().map(|(i, z)| ((i % m.nrows(), i / m.nrows()), z)) {
        let target = if r == c { ONE } else { ZERO };
        worst = worst.max((z - target).norm());
    }
    worst
}

/// `U U† - I`, max-norm.
pub(crate) fn unitarity_defect(m: &CMat) -> f64 {
    identity_deviation(&(m * m.adjoint()))
}

pub(crate) fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Exact-path power by repeated squaring.
pub(crate) fn matrix_power(m: &CMat, mut n: u64) -> CMat {
    let mut result = CMat::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Phase of a nonzero complex number as a fraction of a turn in `[0, 1)`.
pub(crate) fn turns(z: C64) -> f64 {
    let t = z.arg() / std::f64::consts::TAU;
    let t = t.rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Signed circular distance between two unit phases, in radians.
pub(crate) fn phase_distance(a: C64, b: C64) -> f64 {
    (a * b.conj()).arg().abs()
}

/// Eigen-decomposition of a normal 2×2 matrix.
///
/// Returns eigenvalues sorted by phase in `[0, 2π)` with orthonormal
/// eigenvectors. A repeated eigenvalue means the block is a multiple of the
/// identity, so the coin basis is returned and the flag is set.
pub(crate) fn eig2_normal(b: &Matrix2<C64>) -> ([(C64, Vector2<C64>); 2], bool) {
    let tr = b[(0, 0)] + b[(1, 1)];
    // (a - d)² + 4bc avoids the cancellation in tr² - 4det for nearly scalar blocks.
    let gap = b[(0, 0)] - b[(1, 1)];
    let disc = (gap * gap + b[(0, 1)] * b[(1, 0)] * 4.0).sqrt();
    let mut l1 = (tr + disc) * 0.5;
    let mut l2 = (tr - disc) * 0.5;
    if turns(l2) < turns(l1) {
        std::mem::swap(&mut l1, &mut l2);
    }
    if (l1 - l2).norm() < 1e-12 {
        let e0 = Vector2::new(ONE, ZERO);
        let e1 = Vector2::new(ZERO, ONE);
        return ([(l1, e0), (l2, e1)], true);
    }
    let v1 = null_vector(b, l1);
    // Orthogonal complement of v1 spans the other eigenspace of a normal matrix.
    let v2 = Vector2::new(-v1[1].conj(), v1[0].conj());
    ([(l1, v1), (l2, v2)], false)
}

fn null_vector(b: &Matrix2<C64>, lambda: C64) -> Vector2<C64> {
    let a = b - Matrix2::identity() * lambda;
    // Rows of (B - λI) are orthogonal to the eigenvector; use the larger row.
    let r0 = Vector2::new(a[(0, 0)], a[(0, 1)]);
    let r1 = Vector2::new(a[(1, 0)], a[(1, 1)]);
    let row = if r0.norm() >= r1.norm() { r0 } else { r1 };
    let v = Vector2::new(-row[1], row[0]);
    v / C64::new(v.norm(), 0.0)
}
