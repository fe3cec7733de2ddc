//! Seeded random ensembles used by the sampler and the certificate checks.
//!
//! Every function takes the generator explicitly; nothing here touches
//! global random state.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, C64, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re = gaussian(rng);
    let im = gaussian(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Gaussian unitary ensemble sample (X + X*)/2.
pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary via Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Unit vector drawn uniformly from the complex sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

pub fn outer(u: &[C64], v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

/// Positive semidefinite matrix B B* with B of random rank in 1..=n.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let rank = rng.random_range(1..=n);
    let b = gaussian_matrix(rng, n, rank);
    &b * &b.adjoint()
}

/// Pure-state projector |ψ⟩⟨ψ|.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let v = random_unit_vector(rng, n);
    outer(&v, &v)
}

/// Density matrix: random PSD matrix normalized to unit trace.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let p = random_psd(rng, n);
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// Orthonormalizes `candidates` against `fixed` and each other under the
/// Hilbert–Schmidt inner product (modified Gram–Schmidt, two passes).
/// Candidates whose residual norm falls below `drop_tol` are discarded.
pub fn orthonormalize_against(
    fixed: &[ComplexMatrix],
    candidates: impl IntoIterator<Item = ComplexMatrix>,
    drop_tol: f64,
    limit: usize,
) -> Vec<ComplexMatrix> {
    let mut accepted: Vec<ComplexMatrix> = Vec::new();
    for mut m in candidates {
        if accepted.len() >= limit {
            break;
        }
        for _ in 0..2 {
            for f in fixed.iter().chain(accepted.iter()) {
                let proj = m.hs_inner(f);
                if proj != ZERO {
                    m -= &f.scale(proj);
                }
            }
        }
        let norm = m.frobenius_norm();
        if norm > drop_tol {
            accepted.push(m.scale_real(1.0 / norm));
        }
    }
    accepted
}
