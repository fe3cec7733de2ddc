//! Linear maps on N×N matrices, stored as N²×N² matrices acting on
//! column-stacked vectorizations.

use crate::basis::{gell_mann_basis, HSBasis};
use crate::error::{QdsError, Result};
use crate::linalg::{kron, unvec, vec, ComplexMatrix, C64, ZERO};

/// Default relative tolerance for the structural predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    n: usize,
    mat: ComplexMatrix,
}

/// Coefficients c_{αβ} of L(A) = ∑ c_{αβ} F_α A F_β* in a given basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffMatrix {
    pub n: usize,
    pub c: ComplexMatrix,
}

impl CoeffMatrix {
    pub fn new(n: usize, c: ComplexMatrix) -> Result<Self> {
        if c.shape() != (n * n, n * n) {
            return Err(QdsError::DimensionMismatch(format!("coefficient matrix {:?} for n = {n}", c.shape())));
        }
        Ok(Self { n, c })
    }

    /// ‖c − c*‖ / max(1, ‖c‖).
    pub fn hermiticity_defect(&self) -> f64 {
        self.c.hermiticity_defect() / self.c.frobenius_norm().max(1.0)
    }
}

fn check_square(a: &ComplexMatrix, n: usize, what: &str) -> Result<()> {
    if a.shape() != (n, n) {
        return Err(QdsError::DimensionMismatch(format!("{what} is {:?}, expected {n}x{n}", a.shape())));
    }
    Ok(())
}

impl SuperOperator {
    pub fn new(n: usize, mat: ComplexMatrix) -> Result<Self> {
        if n == 0 {
            return Err(QdsError::InvalidDimension("superoperator on 0x0 matrices".into()));
        }
        if mat.shape() != (n * n, n * n) {
            return Err(QdsError::DimensionMismatch(format!(
                "superoperator matrix {:?}, expected {}x{}",
                mat.shape(),
                n * n,
                n * n
            )));
        }
        Ok(Self { n, mat })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, mat: ComplexMatrix::identity(n * n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, mat: ComplexMatrix::zeros(n * n, n * n) }
    }

    /// A ↦ ∑_t X_t A Y_t, compiled through vec(X A Y) = kron(Yᵀ, X) vec(A).
    pub fn from_sandwich_terms(n: usize, terms: &[(ComplexMatrix, ComplexMatrix)]) -> Result<Self> {
        if n == 0 {
            return Err(QdsError::InvalidDimension("superoperator on 0x0 matrices".into()));
        }
        let mut mat = ComplexMatrix::zeros(n * n, n * n);
        for (x, y) in terms {
            check_square(x, n, "sandwich X")?;
            check_square(y, n, "sandwich Y")?;
            mat += &kron(&y.transpose(), x);
        }
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    /// Frobenius norm of the N²×N² representation.
    pub fn norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.mat.distance(&other.mat)
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_square(a, self.n, "argument")?;
        unvec(&self.mat.mul_vec(&vec(a)), self.n)
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(QdsError::DimensionMismatch(format!("compose n = {} with n = {}", self.n, other.n)));
        }
        Ok(Self { n: self.n, mat: &self.mat * &other.mat })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, mat: self.mat.scale_real(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(QdsError::DimensionMismatch(format!("add n = {} with n = {}", self.n, other.n)));
        }
        Ok(Self { n: self.n, mat: &self.mat + &other.mat })
    }

    /// c_{αβ} = ⟨L, Γ_{αβ}⟩ with Γ_{αβ}(A) = F_α A F_β*, evaluated as
    /// ∑_k tr((F_α F_k F_β*)* L(F_k)).
    ///
    /// By cyclicity each term equals tr(F_α* L(F_k) F_β F_k*), so the sum over
    /// k is accumulated once per β.
    pub fn to_coeff_matrix(&self, basis: &HSBasis) -> Result<CoeffMatrix> {
        if basis.n() != self.n {
            return Err(QdsError::DimensionMismatch(format!("basis n = {} for map n = {}", basis.n(), self.n)));
        }
        let f = basis.elements();
        let images: Vec<ComplexMatrix> = f.iter().map(|fk| self.apply(fk)).collect::<Result<_>>()?;
        let adjoints: Vec<ComplexMatrix> = f.iter().map(|fk| fk.adjoint()).collect();
        let d = f.len();
        let mut c = ComplexMatrix::zeros(d, d);
        for (beta, fb) in f.iter().enumerate() {
            let mut m_beta = ComplexMatrix::zeros(self.n, self.n);
            for (yk, fk_adj) in images.iter().zip(&adjoints) {
                m_beta += &(&(yk * fb) * fk_adj);
            }
            for (alpha, fa) in f.iter().enumerate() {
                c[(alpha, beta)] = m_beta.hs_inner(fa);
            }
        }
        CoeffMatrix::new(self.n, c)
    }

    /// Inverse of [`to_coeff_matrix`]: the map A ↦ ∑ c_{αβ} F_α A F_β*.
    pub fn from_coeff_matrix(coeff: &CoeffMatrix, basis: &HSBasis) -> Result<Self> {
        let n = coeff.n;
        if basis.n() != n {
            return Err(QdsError::DimensionMismatch(format!("basis n = {} for coefficients n = {n}", basis.n())));
        }
        CoeffMatrix::new(n, coeff.c.clone())?;
        // Φ[(i,k), α] = (F_α)_{ik}; S = Φ c Φ* is the reshuffled superoperator.
        let phi = ComplexMatrix::from_fn(n * n, n * n, |row, alpha| basis.elements()[alpha].as_slice()[row]);
        let s = &(&phi * &coeff.c) * &phi.adjoint();
        let mut mat = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        mat[(j * n + i, l * n + k)] = s[(i * n + k, j * n + l)];
                    }
                }
            }
        }
        Ok(Self { n, mat })
    }

    /// Relative Hermiticity defect of the coefficient matrix in the default basis.
    pub fn hermiticity_defect(&self) -> f64 {
        let basis = gell_mann_basis(self.n).expect("n >= 1");
        self.to_coeff_matrix(&basis).expect("dimensions agree").hermiticity_defect()
    }

    /// L(A*) = L(A)* for all A, tested as Hermiticity of c within `tol`.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// max_k |tr L(F_k)| over the default basis.
    pub fn trace_defect(&self) -> f64 {
        let basis = gell_mann_basis(self.n).expect("n >= 1");
        basis
            .elements()
            .iter()
            .map(|f| self.apply(f).expect("dimensions agree").trace().norm())
            .fold(0.0, f64::max)
    }

    pub fn is_trace_annihilating(&self, tol: f64) -> bool {
        self.trace_defect() <= tol
    }

    /// L^{(k)} on (nk)×(nk) matrices, defined by A ⊗ E_ij ↦ L(A) ⊗ E_ij with
    /// the standard Kronecker product (system factor first).
    pub fn ampliate(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(QdsError::InvalidDimension("ampliation order must be >= 1".into()));
        }
        let n = self.n;
        let m = n * k;
        let mut out = ComplexMatrix::zeros(m * m, m * m);
        for p in 0..n {
            for q in 0..n {
                let src_col = q * n + p;
                for r in 0..n {
                    for s in 0..n {
                        let v = self.mat[(s * n + r, src_col)];
                        if v == ZERO {
                            continue;
                        }
                        for i in 0..k {
                            for j in 0..k {
                                let row = (s * k + j) * m + r * k + i;
                                let col = (q * k + j) * m + p * k + i;
                                out[(row, col)] = v;
                            }
                        }
                    }
                }
            }
        }
        Ok(Self { n: m, mat: out })
    }

    /// Choi matrix ∑_ij L(E_ij) ⊗ E_ij.
    pub fn choi(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        out[(a * n + i, b * n + j)] = self.mat[(b * n + a, j * n + i)];
                    }
                }
            }
        }
        out
    }

    /// Returns the map whose matrix is `f(mat)`, e.g. the exponential.
    pub fn map_matrix(&self, f: impl FnOnce(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Self> {
        Self::new(self.n, f(&self.mat)?)
    }
}

/// Convenience: the scalar multiple `z·I` as a sandwich factor.
pub fn scaled_identity(n: usize, z: C64) -> ComplexMatrix {
    ComplexMatrix::identity(n).scale(z)
}
