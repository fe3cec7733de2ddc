use super::matrix::{ComplexMatrix, ONE};
use crate::error::{QdsError, Result};

const TAYLOR_TERMS: usize = 20;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The input is scaled by 2^-s until its Frobenius norm is below 1/2, the
/// 20-term series is evaluated in Horner form, and the result squared s times.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm >= 0.5 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let x = m.scale_real(0.5f64.powi(squarings as i32));

    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_TERMS).rev() {
        acc = &id + &(&x * &acc).scale_real(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    Ok(acc)
}

/// Inverse by LU factorization with partial pivoting.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let scale = m.max_abs();
    if scale == 0.0 {
        return Err(QdsError::Singular);
    }
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
            .expect("non-empty range");
        let pivot = a[(pivot_row, col)];
        if pivot.norm() <= f64::EPSILON * scale * n as f64 {
            return Err(QdsError::Singular);
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot_row, j)];
                a[(pivot_row, j)] = tmp;
                let tmp = inv[(col, j)];
                inv[(col, j)] = inv[(pivot_row, j)];
                inv[(pivot_row, j)] = tmp;
            }
        }
        let recip = ONE / pivot;
        for j in 0..n {
            a[(col, j)] *= recip;
            inv[(col, j)] *= recip;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[(r, col)];
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let ac = a[(col, j)];
                let ic = inv[(col, j)];
                a[(r, j)] -= factor * ac;
                inv[(r, j)] -= factor * ic;
            }
        }
    }
    Ok(inv)
}

/// Integer power by repeated squaring.
pub fn matrix_power(m: &ComplexMatrix, mut exponent: u64) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let mut result = ComplexMatrix::identity(n);
    let mut base = m.clone();
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = &result * &base;
        }
        exponent >>= 1;
        if exponent > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}
