//! Cyclic complex Jacobi eigensolver for Hermitian matrices and the
//! positivity tests built on it.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{QdsError, Result};

/// Maximum relative Hermiticity defect accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_TOL: f64 = 1e-14;

/// Eigenvalues in ascending order; column `j` of `vectors` belongs to `values[j]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn check_hermitian(m: &ComplexMatrix) -> Result<usize> {
    let n = m.require_square()?;
    let norm = m.frobenius_norm();
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * norm {
        return Err(QdsError::NonHermitianInput { defect: defect / norm.max(f64::MIN_POSITIVE) });
    }
    Ok(n)
}

/// Eigendecomposition M = V diag(λ) V* of a Hermitian matrix.
///
/// The input may deviate from Hermitian by at most `1e-9 * ‖M‖_F`; it is
/// symmetrized before the sweeps start.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = check_hermitian(m)?;
    let norm = m.frobenius_norm();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let threshold = OFF_DIAG_TOL * norm;
    let mut converged = norm == 0.0 || off_diagonal_norm(&a) < threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) < threshold;
    }
    if !converged {
        return Err(QdsError::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation zeroing a[p][q].
///
/// With a[p][q] = |a| e^{iφ} the rotation restricted to (p, q) is
/// [[c, s e^{iφ}], [-s e^{-iφ}, c]], which reduces to the real symmetric
/// case after the phase is absorbed.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip when the element is already negligible against both diagonal entries.
    if mag * 1e18 < app.abs() && mag * 1e18 < aqq.abs() {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = a.rows();
    let jpq = phase * s; // J[p][q]
    let jqp = -phase.conj() * s; // J[q][p]

    // A <- A J (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * jpq + akq * c;
    }
    // A <- J* A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * jqp.conj();
        a[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

pub fn min_eig_hermitian(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(m)?;
    Ok(eig.values.first().copied().unwrap_or(0.0))
}

/// True iff the smallest eigenvalue is at least `-tol * max(1, ‖M‖_F)`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let min = min_eig_hermitian(m)?;
    Ok(min >= -tol * m.frobenius_norm().max(1.0))
}
