//! Orthonormal Hilbert–Schmidt bases of N×N matrices.

use crate::error::{QdsError, Result};
use crate::linalg::{ComplexMatrix, C64, I};

/// Tolerance for orthonormality of user-supplied bases.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Ordered orthonormal basis F_1 … F_{N²} of the N×N matrices whose last
/// element is I/√N.
#[derive(Debug, Clone, PartialEq)]
pub struct HSBasis {
    n: usize,
    elements: Vec<ComplexMatrix>,
}

impl HSBasis {
    /// Validates orthonormality (within 1e-12) and the identity-last element.
    pub fn new(n: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(QdsError::InvalidDimension("basis dimension must be >= 1".into()));
        }
        if elements.len() != n * n {
            return Err(QdsError::DimensionMismatch(format!("{} basis elements for n = {n}", elements.len())));
        }
        if let Some(e) = elements.iter().find(|e| e.shape() != (n, n)) {
            return Err(QdsError::DimensionMismatch(format!("basis element of shape {:?}", e.shape())));
        }
        let worst = gram_defect(&elements);
        if worst > ORTHONORMAL_TOL {
            return Err(QdsError::InvariantViolation(format!("basis not orthonormal (defect {worst:.3e})")));
        }
        let scaled_identity = ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt());
        if elements[n * n - 1].distance(&scaled_identity) > ORTHONORMAL_TOL {
            return Err(QdsError::InvariantViolation("last basis element is not I/sqrt(n)".into()));
        }
        Ok(Self { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The traceless elements F_1 … F_{N²-1}.
    pub fn traceless(&self) -> &[ComplexMatrix] {
        &self.elements[..self.elements.len() - 1]
    }

    /// ∑_α F_α A F_α*, which equals tr(A)·I for any orthonormal basis.
    pub fn completeness_sum(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        completeness_sum(&self.elements, a)
    }
}

/// Largest entry of |G - I| where G is the Gram matrix of HS inner products.
pub fn gram_defect(elements: &[ComplexMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (a, fa) in elements.iter().enumerate() {
        for (b, fb) in elements.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((fa.hs_inner(fb) - want).norm());
        }
    }
    worst
}

/// ∑_α F_α A F_α* over an arbitrary family of n×n matrices.
pub fn completeness_sum(elements: &[ComplexMatrix], a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let mut acc = ComplexMatrix::zeros(n, n);
    for f in elements {
        if f.shape() != (n, n) {
            return Err(QdsError::DimensionMismatch(format!(
                "basis element {:?} vs matrix {n}x{n}",
                f.shape()
            )));
        }
        acc += &(&(f * a) * &f.adjoint());
    }
    Ok(acc)
}

/// Generalized Gell-Mann basis: symmetric pairs (E_ij+E_ji)/√2 for i<j,
/// antisymmetric pairs -i(E_ij-E_ji)/√2 for i<j, the n-1 traceless diagonal
/// elements, then I/√n.
pub fn gell_mann_basis(n: usize) -> Result<HSBasis> {
    if n == 0 {
        return Err(QdsError::InvalidDimension("basis dimension must be >= 1".into()));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut elements = Vec::with_capacity(n * n);
    for &(i, j) in &pairs {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(i, j)] = C64::new(r, 0.0);
        m[(j, i)] = C64::new(r, 0.0);
        elements.push(m);
    }
    for &(i, j) in &pairs {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(i, j)] = -I * r;
        m[(j, i)] = I * r;
        elements.push(m);
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(n, n);
        for k in 0..l {
            m[(k, k)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        elements.push(m);
    }
    elements.push(ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt()));
    Ok(HSBasis { n, elements })
}

/// Matrix units E_ij (1 at row i, column j) in lexicographic (i, j) order.
pub fn matrix_units(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n == 0 {
        return Err(QdsError::InvalidDimension("matrix units need n >= 1".into()));
    }
    Ok((0..n).flat_map(|i| (0..n).map(move |j| ComplexMatrix::unit(n, i, j))).collect())
}

/// Applies a unitary mixing `u` (of size (N²-1)×(N²-1)) to the traceless part
/// of `basis`, keeping I/√N last. The result is again an identity-last basis.
pub fn rotate_traceless(basis: &HSBasis, u: &ComplexMatrix) -> Result<HSBasis> {
    let m = basis.len() - 1;
    if u.shape() != (m, m) {
        return Err(QdsError::DimensionMismatch(format!("rotation {:?} for {m} traceless elements", u.shape())));
    }
    let n = basis.n;
    let mut elements: Vec<ComplexMatrix> = (0..m)
        .map(|a| {
            let mut acc = ComplexMatrix::zeros(n, n);
            for (b, f) in basis.traceless().iter().enumerate() {
                acc += &f.scale(u[(b, a)]);
            }
            acc
        })
        .collect();
    elements.push(basis.elements[m].clone());
    HSBasis::new(n, elements)
}

/// Applies a unitary mixing to every element of a family: G_a = ∑_b u[b,a] F_b.
pub fn rotate_family(elements: &[ComplexMatrix], u: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let (rows, cols) = elements[0].shape();
    (0..elements.len())
        .map(|a| {
            let mut acc = ComplexMatrix::zeros(rows, cols);
            for (b, f) in elements.iter().enumerate() {
                acc += &f.scale(u[(b, a)]);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::random::{gaussian_matrix, haar_unitary, seeded};

    fn sigma(k: usize) -> ComplexMatrix {
        match k {
            0 => ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            1 => ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => -I,
                (1, 0) => I,
                _ => C64::new(0.0, 0.0),
            }),
            _ => ComplexMatrix::diag_real(&[1.0, -1.0]),
        }
    }

    #[test]
    fn n1_is_identity() {
        let b = gell_mann_basis(1).unwrap();
        assert_eq!(b.elements(), &[ComplexMatrix::identity(1)]);
    }

    #[test]
    fn n2_is_normalized_pauli() {
        let b = gell_mann_basis(2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for k in 0..3 {
            assert!(b.elements()[k].distance(&sigma(k).scale_real(r)) < 1e-15);
        }
        assert!(b.elements()[3].distance(&ComplexMatrix::identity(2).scale_real(r)) < 1e-15);
    }

    #[test]
    fn gram_matrix_is_identity() {
        for n in 1..=6 {
            let b = gell_mann_basis(n).unwrap();
            assert_eq!(b.len(), n * n);
            assert!(gram_defect(b.elements()) < 1e-12, "n = {n}");
            for f in b.traceless() {
                assert!(f.trace().norm() < 1e-12);
            }
            // round-trips through the validating constructor
            HSBasis::new(n, b.elements().to_vec()).unwrap();
        }
    }

    #[test]
    fn invalid_dimension() {
        assert!(matches!(gell_mann_basis(0), Err(QdsError::InvalidDimension(_))));
        assert!(matches!(matrix_units(0), Err(QdsError::InvalidDimension(_))));
    }

    #[test]
    fn matrix_units_examples() {
        let units = matrix_units(2).unwrap();
        assert_eq!(units.len(), 4);
        assert_eq!(units[1], ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        let units3 = matrix_units(3).unwrap();
        let diag_sum = (0..3).fold(ComplexMatrix::zeros(3, 3), |acc, i| &acc + &units3[i * 3 + i]);
        assert_eq!(diag_sum, ComplexMatrix::identity(3));
        assert_eq!(gram_defect(&units3), 0.0);
    }

    #[test]
    fn matrix_unit_sandwich_picks_diagonal() {
        let n = 3;
        let a = gaussian_matrix(&mut seeded(5), n, n);
        let units = matrix_units(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let lhs = &(&units[i * n + j] * &a) * &units[j * n + i];
                let rhs = units[i * n + i].scale(a[(j, j)]);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn completeness_examples() {
        let b = gell_mann_basis(2).unwrap();
        let s = b.completeness_sum(&ComplexMatrix::identity(2)).unwrap();
        assert!(s.distance(&ComplexMatrix::identity(2).scale_real(2.0)) < 1e-14);
        let s = b.completeness_sum(&ComplexMatrix::unit(2, 0, 0)).unwrap();
        assert!(s.distance(&ComplexMatrix::identity(2)) < 1e-14);
        let s = b.completeness_sum(&ComplexMatrix::unit(2, 0, 1)).unwrap();
        assert!(s.frobenius_norm() < 1e-14);
        assert!(b.completeness_sum(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn new_rejects_bad_bases() {
        let units = matrix_units(2).unwrap();
        assert!(matches!(HSBasis::new(2, units), Err(QdsError::InvariantViolation(_))));
        let mut els = gell_mann_basis(2).unwrap().elements().to_vec();
        els[0] = els[0].scale(ONE * 2.0);
        assert!(HSBasis::new(2, els).is_err());
        assert!(HSBasis::new(2, vec![ComplexMatrix::identity(2)]).is_err());
    }

    #[test]
    fn rotated_basis_stays_valid() {
        let mut rng = seeded(9);
        let b = gell_mann_basis(3).unwrap();
        let u = haar_unitary(&mut rng, 8);
        let r = rotate_traceless(&b, &u).unwrap();
        assert!(gram_defect(r.elements()) < 1e-12);
    }
}
