//! Decomposition of Hermiticity-preserving maps into the K-form
//! `A ↦ AK* + KA + ∑ λ_p G_p A G_p*` and, for trace-annihilating maps, into the
//! GKSL commutator form `A ↦ -i[H, A] + ½ ∑ λ_p ([G_p, A G_p*] + [G_p A, G_p*])`.
//!
//! Jump operators are unique only up to unitary mixing inside degenerate rate
//! eigenspaces, so forms should be compared through their reconstructed maps.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::basis::{gell_mann_basis, gram_defect, HSBasis};
use crate::error::{QdsError, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64, I, ONE};
use crate::random::{gaussian, gaussian_hermitian, gaussian_matrix, orthonormalize_against, seeded};
use crate::superop::{CoeffMatrix, SuperOperator, DEFAULT_TOL};

/// Relative threshold below which an eigenvalue of the coefficient block is dropped.
pub const ZERO_RATE_TOL: f64 = 1e-12;
/// Relative threshold for the sign test on rates.
pub const RATE_SIGN_TOL: f64 = 1e-9;
/// Tolerance of the Re(K) consistency certificate, relative to max(1, ‖K‖).
pub const RE_K_CERT_TOL: f64 = 1e-9;

const PHASE_TOL: f64 = 1e-10;
const TRACELESS_TOL: f64 = 1e-10;
const ORTHONORMAL_TOL: f64 = 1e-9;
const HAMILTONIAN_TOL: f64 = 1e-10;

/// A rate together with its jump operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub rate: f64,
    pub op: ComplexMatrix,
}

/// L(A) = AK* + KA + ∑ λ_p G_p A G_p*, with tr(K) = trace_defect / 2.
#[derive(Debug, Clone, PartialEq)]
pub struct KForm {
    pub n: usize,
    pub k: ComplexMatrix,
    pub jumps: Vec<Jump>,
    pub trace_defect: f64,
}

/// L(A) = -i[H, A] + ½ ∑ λ_p ([G_p, A G_p*] + [G_p A, G_p*]).
#[derive(Debug, Clone, PartialEq)]
pub struct GksForm {
    pub n: usize,
    pub hamiltonian: ComplexMatrix,
    pub jumps: Vec<Jump>,
}

/// Everything produced on the way to the GKSL form.
#[derive(Debug, Clone)]
pub struct GksDecomposition {
    pub k_form: KForm,
    pub form: GksForm,
    /// ‖Re(K) + ½ ∑ λ_p G_p* G_p‖_F, which must vanish for trace-annihilating maps.
    pub re_k_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    General,
    StarSemigroupGen,
    StarTraceSemigroupGen,
    QdsGen,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::General => "GENERAL",
            Verdict::StarSemigroupGen => "STAR_SEMIGROUP_GEN",
            Verdict::StarTraceSemigroupGen => "STAR_TRACE_SEMIGROUP_GEN",
            Verdict::QdsGen => "QDS_GEN",
        }
    }

    /// Most specific class consistent with the three properties.
    pub fn from_flags(hermiticity_preserving: bool, trace_annihilating: bool, rates_nonnegative: bool) -> Self {
        match (hermiticity_preserving, trace_annihilating, rates_nonnegative) {
            (true, true, true) => Verdict::QdsGen,
            (true, true, false) => Verdict::StarTraceSemigroupGen,
            (true, false, _) => Verdict::StarSemigroupGen,
            (false, _, _) => Verdict::General,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "GENERAL" => Ok(Verdict::General),
            "STAR_SEMIGROUP_GEN" => Ok(Verdict::StarSemigroupGen),
            "STAR_TRACE_SEMIGROUP_GEN" => Ok(Verdict::StarTraceSemigroupGen),
            "QDS_GEN" => Ok(Verdict::QdsGen),
            other => Err(format!("unknown generator class {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorClass {
    pub hermiticity_preserving: bool,
    pub trace_annihilating: bool,
    pub rates_nonnegative: bool,
    pub verdict: Verdict,
}

/// Classification together with the measured quantities behind it.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: GeneratorClass,
    /// Relative Hermiticity defect of the coefficient matrix.
    pub hermiticity_defect: f64,
    /// max |tr L(F_k)| over the default basis.
    pub trace_defect: f64,
    /// K-form rates in descending order; empty when the map is not Hermiticity preserving.
    pub rates: Vec<f64>,
}

fn phase_fix(g: &mut ComplexMatrix) {
    if let Some(&z) = g.as_slice().iter().find(|z| z.norm() > PHASE_TOL) {
        let phase = z.conj() / z.norm();
        *g = g.scale(phase);
    }
}

fn lexicographic(a: &ComplexMatrix, b: &ComplexMatrix) -> Ordering {
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Descending rates; runs of rates within `tie_tol` ordered lexicographically
/// by their (phase-fixed) jump matrices.
fn sort_jumps(jumps: &mut [Jump], tie_tol: f64) {
    jumps.sort_by(|a, b| b.rate.total_cmp(&a.rate));
    let mut start = 0;
    while start < jumps.len() {
        let mut end = start + 1;
        while end < jumps.len() && jumps[end - 1].rate - jumps[end].rate <= tie_tol {
            end += 1;
        }
        jumps[start..end].sort_by(|a, b| lexicographic(&a.op, &b.op));
        start = end;
    }
}

fn require_same_n(basis: &HSBasis, n: usize) -> Result<()> {
    if basis.n() != n {
        return Err(QdsError::DimensionMismatch(format!("basis n = {} for map n = {n}", basis.n())));
    }
    Ok(())
}

/// K-form from an already computed coefficient matrix.
fn k_form_from_coeff(coeff: &CoeffMatrix, basis: &HSBasis) -> Result<KForm> {
    let n = coeff.n;
    let defect = coeff.hermiticity_defect();
    if defect > DEFAULT_TOL {
        return Err(QdsError::NotHermiticityPreserving { defect });
    }
    let c = coeff.c.hermitian_part();
    let c_norm = c.frobenius_norm().max(1.0);
    let last = n * n - 1;
    let f = basis.elements();

    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let trace_defect = c[(last, last)].re;
    let mut k = ComplexMatrix::identity(n).scale_real(trace_defect / (2.0 * n as f64));
    for (alpha, fa) in basis.traceless().iter().enumerate() {
        k += &fa.scale(c[(alpha, last)] * inv_sqrt_n);
    }

    let mut jumps = Vec::new();
    if last > 0 {
        let block = c.block(0, 0, last, last);
        let eig = hermitian_eig(&block)?;
        for (p, &rate) in eig.values.iter().enumerate() {
            if rate.abs() < ZERO_RATE_TOL * c_norm {
                continue;
            }
            // Block = V diag(λ) V*, so G_p = ∑_α V[α, p] F_α.
            let mut g = ComplexMatrix::zeros(n, n);
            for (alpha, fa) in f[..last].iter().enumerate() {
                g += &fa.scale(eig.vectors[(alpha, p)]);
            }
            phase_fix(&mut g);
            jumps.push(Jump { rate, op: g });
        }
    }
    sort_jumps(&mut jumps, 1e-10 * c_norm);
    Ok(KForm { n, k, jumps, trace_defect })
}

/// Writes a Hermiticity-preserving map as A ↦ AK* + KA + ∑ λ_p G_p A G_p*.
pub fn decompose_k_form(l: &SuperOperator, basis: &HSBasis) -> Result<KForm> {
    require_same_n(basis, l.n())?;
    let coeff = l.to_coeff_matrix(basis)?;
    k_form_from_coeff(&coeff, basis)
}

fn check_jumps(n: usize, jumps: &[Jump]) -> Result<()> {
    if jumps.len() > n * n - 1 {
        return Err(QdsError::InvariantViolation(format!("{} jumps exceed n^2 - 1 = {}", jumps.len(), n * n - 1)));
    }
    for (p, j) in jumps.iter().enumerate() {
        if j.op.shape() != (n, n) {
            return Err(QdsError::DimensionMismatch(format!("jump {p} has shape {:?}", j.op.shape())));
        }
        if !j.rate.is_finite() {
            return Err(QdsError::InvariantViolation(format!("jump {p} has non-finite rate")));
        }
        let tr = j.op.trace().norm();
        if tr > TRACELESS_TOL {
            return Err(QdsError::InvariantViolation(format!("jump {p} has trace {tr:.3e}")));
        }
    }
    let ops: Vec<ComplexMatrix> = jumps.iter().map(|j| j.op.clone()).collect();
    let gram = gram_defect(&ops);
    if gram > ORTHONORMAL_TOL {
        return Err(QdsError::InvariantViolation(format!("jumps not orthonormal (defect {gram:.3e})")));
    }
    Ok(())
}

/// Rebuilds A ↦ AK* + KA + ∑ λ_p G_p A G_p*.
pub fn reconstruct_k(form: &KForm) -> Result<SuperOperator> {
    let n = form.n;
    if n == 0 {
        return Err(QdsError::InvalidDimension("n must be >= 1".into()));
    }
    if form.k.shape() != (n, n) {
        return Err(QdsError::DimensionMismatch(format!("K has shape {:?}", form.k.shape())));
    }
    check_jumps(n, &form.jumps)?;
    let tr_k = form.k.trace();
    let want = 0.5 * form.trace_defect;
    if (tr_k - C64::new(want, 0.0)).norm() > 1e-9 * want.abs().max(1.0) {
        return Err(QdsError::InvariantViolation(format!("tr(K) = {tr_k} but trace_defect / 2 = {want}")));
    }
    let id = ComplexMatrix::identity(n);
    let mut terms = vec![(form.k.clone(), id.clone()), (id, form.k.adjoint())];
    for j in &form.jumps {
        terms.push((j.op.scale_real(j.rate), j.op.adjoint()));
    }
    SuperOperator::from_sandwich_terms(n, &terms)
}

/// Writes a Hermiticity-preserving, trace-annihilating map in GKSL form.
pub fn decompose_gksl(l: &SuperOperator, basis: &HSBasis) -> Result<GksForm> {
    decompose_gksl_detailed(l, basis).map(|d| d.form)
}

pub fn decompose_gksl_detailed(l: &SuperOperator, basis: &HSBasis) -> Result<GksDecomposition> {
    require_same_n(basis, l.n())?;
    let coeff = l.to_coeff_matrix(basis)?;
    let defect = coeff.hermiticity_defect();
    if defect > DEFAULT_TOL {
        return Err(QdsError::NotHermiticityPreserving { defect });
    }
    let trace_defect = l.trace_defect();
    if trace_defect > DEFAULT_TOL {
        return Err(QdsError::NotTraceAnnihilating { defect: trace_defect });
    }
    let k_form = k_form_from_coeff(&coeff, basis)?;
    let n = l.n();

    let mut dissipator = ComplexMatrix::zeros(n, n);
    for j in &k_form.jumps {
        dissipator += &(&j.op.adjoint() * &j.op).scale_real(0.5 * j.rate);
    }
    let re_k = k_form.k.hermitian_part();
    let re_k_residual = (&re_k + &dissipator).frobenius_norm();
    if re_k_residual > RE_K_CERT_TOL * k_form.k.frobenius_norm().max(1.0) {
        return Err(QdsError::InternalConsistency(format!(
            "Re(K) + 1/2 sum rate G*G has norm {re_k_residual:.3e}"
        )));
    }
    let hamiltonian = k_form.k.skew_part().scale_real(-1.0);
    let form = GksForm { n, hamiltonian, jumps: k_form.jumps.clone() };
    Ok(GksDecomposition { k_form, form, re_k_residual })
}

/// Rebuilds -iHA + iAH + ∑ λ_p (G_p A G_p* − ½ G_p*G_p A − ½ A G_p*G_p).
pub fn reconstruct_gksl(form: &GksForm) -> Result<SuperOperator> {
    let n = form.n;
    if n == 0 {
        return Err(QdsError::InvalidDimension("n must be >= 1".into()));
    }
    let h = &form.hamiltonian;
    if h.shape() != (n, n) {
        return Err(QdsError::DimensionMismatch(format!("H has shape {:?}", h.shape())));
    }
    let h_scale = h.frobenius_norm().max(1.0);
    if h.hermiticity_defect() > HAMILTONIAN_TOL * h_scale {
        return Err(QdsError::InvariantViolation("H is not Hermitian".into()));
    }
    if h.trace().norm() > HAMILTONIAN_TOL * h_scale {
        return Err(QdsError::InvariantViolation(format!("tr(H) = {}", h.trace())));
    }
    check_jumps(n, &form.jumps)?;

    let id = ComplexMatrix::identity(n);
    let mut terms = vec![(h.scale(-I), id.clone()), (id.clone(), h.scale(I))];
    for j in &form.jumps {
        let g_adj = j.op.adjoint();
        let half = (&g_adj * &j.op).scale_real(-0.5 * j.rate);
        terms.push((j.op.scale_real(j.rate), g_adj));
        terms.push((half.clone(), id.clone()));
        terms.push((id.clone(), half));
    }
    let l = SuperOperator::from_sandwich_terms(n, &terms)?;
    debug_assert!(l.is_hermiticity_preserving(DEFAULT_TOL));
    debug_assert!(l.trace_defect() <= DEFAULT_TOL * l.norm().max(1.0));
    Ok(l)
}

/// Extends `jumps` to a full orthonormal traceless set of n²−1 operators by
/// pivoted modified Gram–Schmidt over the traceless basis elements.
/// Added operators carry rate 0.
pub fn complete_jump_set(n: usize, jumps: &[Jump], basis: &HSBasis) -> Result<Vec<Jump>> {
    require_same_n(basis, n)?;
    check_jumps(n, jumps)?;
    let mut fixed: Vec<ComplexMatrix> = vec![basis.elements()[n * n - 1].clone()];
    fixed.extend(jumps.iter().map(|j| j.op.clone()));
    let mut candidates: Vec<ComplexMatrix> = basis.traceless().to_vec();
    let mut out = jumps.to_vec();
    while out.len() < n * n - 1 {
        for cand in candidates.iter_mut() {
            for _ in 0..2 {
                for f in &fixed {
                    let proj = cand.hs_inner(f);
                    *cand -= &f.scale(proj);
                }
            }
        }
        let (best, norm) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.frobenius_norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| QdsError::InternalConsistency("no candidates left for padding".into()))?;
        if norm < 1e-6 {
            return Err(QdsError::InternalConsistency("basis complement exhausted while padding".into()));
        }
        let mut g = candidates.swap_remove(best).scale_real(1.0 / norm);
        phase_fix(&mut g);
        fixed.push(g.clone());
        out.push(Jump { rate: 0.0, op: g });
    }
    Ok(out)
}

impl GksForm {
    /// Same form with zero-rate jumps appended up to n²−1 operators.
    pub fn padded(&self) -> Result<GksForm> {
        let basis = gell_mann_basis(self.n)?;
        let jumps = complete_jump_set(self.n, &self.jumps, &basis)?;
        Ok(GksForm { n: self.n, hamiltonian: self.hamiltonian.clone(), jumps })
    }

    pub fn rates(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.rate).collect()
    }
}

impl KForm {
    pub fn rates(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.rate).collect()
    }
}

pub fn classify_detailed(l: &SuperOperator) -> Classification {
    let basis = gell_mann_basis(l.n()).expect("n >= 1");
    let coeff = l.to_coeff_matrix(&basis).expect("dimensions agree");
    let hermiticity_defect = coeff.hermiticity_defect();
    let trace_defect = l.trace_defect();
    let hermiticity_preserving = hermiticity_defect <= DEFAULT_TOL;
    let trace_annihilating = trace_defect <= DEFAULT_TOL;

    let (rates, rates_nonnegative) = if hermiticity_preserving {
        match k_form_from_coeff(&coeff, &basis) {
            Ok(kf) => {
                let floor = -RATE_SIGN_TOL * coeff.c.frobenius_norm().max(1.0);
                let rates = kf.rates();
                let ok = rates.iter().all(|&r| r >= floor);
                (rates, ok)
            }
            Err(_) => (Vec::new(), false),
        }
    } else {
        (Vec::new(), false)
    };
    let verdict = Verdict::from_flags(hermiticity_preserving, trace_annihilating, rates_nonnegative);
    Classification {
        class: GeneratorClass { hermiticity_preserving, trace_annihilating, rates_nonnegative, verdict },
        hermiticity_defect,
        trace_defect,
        rates,
    }
}

/// Total classification of a map against the three generator properties.
pub fn classify(l: &SuperOperator) -> GeneratorClass {
    classify_detailed(l).class
}

/// n²−1 orthonormal traceless operators from Gaussian candidates.
fn sample_jump_ops(rng: &mut crate::random::SeededRng, n: usize) -> Vec<ComplexMatrix> {
    let identity_dir = ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt());
    let candidates = std::iter::repeat_with(|| gaussian_matrix(rng, n, n));
    orthonormalize_against(&[identity_dir], candidates, 1e-8, n * n - 1)
}

fn traceless_hamiltonian(rng: &mut crate::random::SeededRng, n: usize) -> ComplexMatrix {
    let h = gaussian_hermitian(rng, n);
    let shift = h.trace() / n as f64;
    &h - &ComplexMatrix::identity(n).scale(shift)
}

/// Deterministic random generator of the requested class.
///
/// QDS_GEN draws nonnegative rates |g|; STAR_TRACE_SEMIGROUP_GEN draws signed
/// rates and forces one of them to at most −0.1; STAR_SEMIGROUP_GEN adds a
/// random K whose trace is a nonzero real number; GENERAL draws a Gaussian
/// N²×N² matrix.
pub fn sample_generator(n: usize, seed: u64, class: Verdict) -> Result<SuperOperator> {
    if n == 0 {
        return Err(QdsError::InvalidDimension("n must be >= 1".into()));
    }
    let mut rng = seeded(seed);
    match class {
        Verdict::General => SuperOperator::new(n, gaussian_matrix(&mut rng, n * n, n * n)),
        Verdict::QdsGen => {
            let hamiltonian = traceless_hamiltonian(&mut rng, n);
            let jumps = sample_jump_ops(&mut rng, n)
                .into_iter()
                .map(|op| Jump { rate: gaussian(&mut rng).abs(), op })
                .collect();
            reconstruct_gksl(&GksForm { n, hamiltonian, jumps })
        }
        Verdict::StarTraceSemigroupGen => {
            if n < 2 {
                return Err(QdsError::UnsatisfiableClass(class.to_string(), n));
            }
            let hamiltonian = traceless_hamiltonian(&mut rng, n);
            let ops = sample_jump_ops(&mut rng, n);
            let mut rates: Vec<f64> = ops.iter().map(|_| gaussian(&mut rng)).collect();
            let forced = rng.random_range(0..rates.len());
            rates[forced] = -(0.1 + gaussian(&mut rng).abs());
            let jumps = ops.into_iter().zip(rates).map(|(op, rate)| Jump { rate, op }).collect();
            reconstruct_gksl(&GksForm { n, hamiltonian, jumps })
        }
        Verdict::StarSemigroupGen => {
            let ops = if n >= 2 { sample_jump_ops(&mut rng, n) } else { Vec::new() };
            let jumps: Vec<Jump> = ops.into_iter().map(|op| Jump { rate: gaussian(&mut rng), op }).collect();
            let sign = if gaussian(&mut rng) < 0.0 { -1.0 } else { 1.0 };
            let trace_defect = sign * (0.5 + gaussian(&mut rng).abs());
            let raw = gaussian_matrix(&mut rng, n, n);
            let shift = (C64::new(trace_defect / 2.0, 0.0) - raw.trace()) / n as f64;
            let k = &raw + &ComplexMatrix::identity(n).scale(shift);
            reconstruct_k(&KForm { n, k, jumps, trace_defect })
        }
    }
}

/// The pure dephasing generator A ↦ γ(σz A σz − A)/2 on a qubit; γ = 2 gives
/// σz A σz − A.
pub fn dephasing(gamma: f64) -> SuperOperator {
    let sz = ComplexMatrix::diag_real(&[1.0, -1.0]);
    let id = ComplexMatrix::identity(2);
    SuperOperator::from_sandwich_terms(2, &[(sz.scale_real(gamma / 2.0), sz), (id.scale(-ONE * (gamma / 2.0)), id.clone())])
        .expect("2x2 terms")
}
