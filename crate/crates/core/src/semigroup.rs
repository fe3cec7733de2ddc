//! The semigroup T_t = e^{tL}: propagation, positivity and trace certificates,
//! the resolvent route to e^{tL}, and the projection-family rate oracle.

use crate::basis::HSBasis;
use crate::error::{QdsError, Result};
use crate::gksl::{complete_jump_set, decompose_gksl, Jump};
use crate::linalg::{expm, inverse, is_psd, kron, matrix_power, min_eig_hermitian, unvec, vec, ComplexMatrix, HERMITIAN_TOL};
use crate::random::{gaussian_matrix, random_psd, random_pure_state, random_unit_vector, seeded};
use crate::superop::SuperOperator;

/// Tolerance on the projection-family identities R_q* = R_q, R_q R_s = δ R_q, ∑ R_q = I.
pub const PROJECTION_FAMILY_TOL: f64 = 1e-9;

/// ∑_ij T(E_ij) ⊗ E_ij for some map T on n×n matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub n: usize,
    pub mat: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ComplexMatrix>,
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(QdsError::UnsortedTimes);
    }
    Ok(())
}

fn check_operand(l: &SuperOperator, a: &ComplexMatrix, what: &str) -> Result<()> {
    if a.shape() != (l.n(), l.n()) {
        return Err(QdsError::DimensionMismatch(format!("{what} is {:?}, generator acts on {n}x{n}", a.shape(), n = l.n())));
    }
    Ok(())
}

/// T_t = e^{tL} as a superoperator.
pub fn semigroup_at(l: &SuperOperator, t: f64) -> Result<SuperOperator> {
    l.map_matrix(|m| expm(&m.scale_real(t)))
}

/// states[i] = unvec(expm(times[i]·L) vec(ρ₀)).
pub fn propagate(l: &SuperOperator, rho0: &ComplexMatrix, times: &[f64]) -> Result<Trajectory> {
    check_operand(l, rho0, "rho0")?;
    check_times(times)?;
    let v0 = vec(rho0);
    let states = times
        .iter()
        .map(|&t| {
            let prop = expm(&l.mat().scale_real(t))?;
            unvec(&prop.mul_vec(&v0), l.n())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times: times.to_vec(), states })
}

pub fn choi_of_exp(l: &SuperOperator, t: f64) -> Result<ChoiMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(QdsError::UnsortedTimes);
    }
    let tt = semigroup_at(l, t)?;
    Ok(ChoiMatrix { n: l.n(), mat: tt.choi() })
}

/// Smallest Choi eigenvalue of e^{tL}; `None` when the Choi matrix is not
/// Hermitian (the semigroup then does not even preserve adjoints).
pub fn min_choi_eigenvalue(l: &SuperOperator, t: f64) -> Result<Option<f64>> {
    let choi = choi_of_exp(l, t)?;
    match min_eig_hermitian(&choi.mat) {
        Ok(v) => Ok(Some(v)),
        Err(QdsError::NonHermitianInput { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Complete positivity of e^{tL} through positivity of its Choi matrix.
pub fn is_cp_at(l: &SuperOperator, t: f64, tol: f64) -> Result<bool> {
    let choi = choi_of_exp(l, t)?;
    match is_psd(&choi.mat, tol) {
        Ok(b) => Ok(b),
        Err(QdsError::NonHermitianInput { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// max |tr T_t(ρ) − tr ρ| / max(1, ‖T_t(ρ)‖_F) over all sample pairs.
pub fn max_trace_drift(l: &SuperOperator, rho_samples: &[ComplexMatrix], t_samples: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in t_samples {
        let tt = semigroup_at(l, t)?;
        for rho in rho_samples {
            check_operand(l, rho, "sample state")?;
            let out = tt.apply(rho)?;
            let scale = out.frobenius_norm().max(1.0);
            worst = worst.max((out.trace() - rho.trace()).norm() / scale);
        }
    }
    Ok(worst)
}

pub fn verify_trace_preservation(l: &SuperOperator, rho_samples: &[ComplexMatrix], t_samples: &[f64], tol: f64) -> Result<bool> {
    Ok(max_trace_drift(l, rho_samples, t_samples)? <= tol)
}

/// D(x) = L(x*x) − x*L(x) − L(x*)x + x*L(1)x, which is positive for every x
/// exactly when L is conditionally completely positive at this level.
pub fn dissipation_form(l: &SuperOperator, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_operand(l, x, "x")?;
    let xa = x.adjoint();
    let l_xx = l.apply(&(&xa * x))?;
    let l_x = l.apply(x)?;
    let l_xa = l.apply(&xa)?;
    let l_one = l.apply(&ComplexMatrix::identity(l.n()))?;
    let mut d = l_xx;
    d -= &(&xa * &l_x);
    d -= &(&l_xa * x);
    d += &(&(&xa * &l_one) * x);
    Ok(d)
}

/// Returns (D(x) ⪰ 0 within tol, D(x)). A non-Hermitian D counts as a failure.
pub fn dissipativity_check(l: &SuperOperator, x: &ComplexMatrix, tol: f64) -> Result<(bool, ComplexMatrix)> {
    let d = dissipation_form(l, x)?;
    let ok = match is_psd(&d, tol) {
        Ok(b) => b,
        Err(QdsError::NonHermitianInput { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok((ok, d))
}

/// An input on which the dissipativity inequality fails.
#[derive(Debug, Clone)]
pub struct DissipativityWitness {
    /// Ampliation level the witness lives at.
    pub k: usize,
    pub x: ComplexMatrix,
    pub form: ComplexMatrix,
    pub min_eigenvalue: f64,
}

fn witness_if_failing(amp: &SuperOperator, k: usize, x: ComplexMatrix, tol: f64) -> Result<Option<DissipativityWitness>> {
    let (ok, d) = dissipativity_check(amp, &x, tol)?;
    if ok {
        return Ok(None);
    }
    let min_eigenvalue = min_eig_hermitian(&d).unwrap_or(f64::NAN);
    Ok(Some(DissipativityWitness { k, x, form: d, min_eigenvalue }))
}

/// Structured witnesses at level n for each negative-rate jump G: with
/// Ω = ∑ e_i ⊗ e_i and u = (G* ⊗ 1)Ω, the rank-one x = Ω u* / √n gives
/// Ω* D(x) Ω = λ.
fn structured_witnesses(n: usize, jumps: &[Jump]) -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(n);
    let omega = vec(&id);
    let w: Vec<_> = omega.iter().map(|z| z / (n as f64).sqrt()).collect();
    jumps
        .iter()
        .filter(|j| j.rate < 0.0)
        .map(|j| {
            let u = kron(&j.op.adjoint(), &id).mul_vec(&omega);
            crate::random::outer(&w, &u)
        })
        .collect()
}

/// Test inputs for the dissipativity inequality as (level, x) pairs: random
/// Gaussian x at levels 1 and 2, then the structured rank-one candidates at
/// level n built from the negative-rate jumps of the GKSL decomposition (when
/// the map has one).
pub fn dissipativity_candidates(l: &SuperOperator, trials_k1: usize, trials_k2: usize, seed: u64) -> Result<Vec<(usize, ComplexMatrix)>> {
    let mut rng = seeded(seed);
    let n = l.n();
    let mut out = Vec::with_capacity(trials_k1 + trials_k2);
    for (k, trials) in [(1usize, trials_k1), (2, trials_k2)] {
        for _ in 0..trials {
            out.push((k, gaussian_matrix(&mut rng, n * k, n * k)));
        }
    }
    let basis = crate::basis::gell_mann_basis(n)?;
    match decompose_gksl(l, &basis) {
        Ok(form) => out.extend(structured_witnesses(n, &form.jumps).into_iter().map(|x| (n, x))),
        Err(QdsError::NotHermiticityPreserving { .. }) | Err(QdsError::NotTraceAnnihilating { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// First candidate from [`dissipativity_candidates`] (with `trials` random
/// inputs per level) that violates the inequality.
pub fn search_dissipativity_witness(l: &SuperOperator, trials: usize, seed: u64, tol: f64) -> Result<Option<DissipativityWitness>> {
    let mut amps: Vec<Option<SuperOperator>> = vec![None; l.n() + 3];
    for (k, x) in dissipativity_candidates(l, trials, trials, seed)? {
        if amps[k].is_none() {
            amps[k] = Some(l.ampliate(k)?);
        }
        if let Some(w) = witness_if_failing(amps[k].as_ref().unwrap(), k, x, tol)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// (1 − λ⁻¹L)⁻¹, defined for λ above the Frobenius norm of L.
pub fn resolvent(l: &SuperOperator, lambda: f64) -> Result<SuperOperator> {
    let bound = l.norm();
    if !(lambda > bound && lambda > 0.0) {
        return Err(QdsError::LambdaTooSmall { lambda, bound });
    }
    let m = l.n() * l.n();
    let shifted = &ComplexMatrix::identity(m) - &l.mat().scale_real(1.0 / lambda);
    let inv = inverse(&shifted).map_err(|_| QdsError::SingularResolvent(lambda))?;
    SuperOperator::new(l.n(), inv)
}

/// Applies the resolvent to `trials` seeded PSD matrices (alternating pure
/// states and random-rank PSD matrices) and checks every image is PSD.
pub fn resolvent_positivity_check(l: &SuperOperator, lambda: f64, trials: usize, seed: u64, tol: f64) -> Result<bool> {
    Ok(resolvent_worst_eigenvalue(l, lambda, trials, seed)? >= -tol)
}

/// Smallest eigenvalue of R(A)/max(1, ‖R(A)‖) over the seeded trials;
/// −∞ when an image fails to be Hermitian.
pub fn resolvent_worst_eigenvalue(l: &SuperOperator, lambda: f64, trials: usize, seed: u64) -> Result<f64> {
    let r = resolvent(l, lambda)?;
    let mut rng = seeded(seed);
    let n = l.n();
    let mut worst = f64::INFINITY;
    for trial in 0..trials {
        let a = if trial % 2 == 0 { random_pure_state(&mut rng, n) } else { random_psd(&mut rng, n) };
        let out = r.apply(&a)?;
        let scale = out.frobenius_norm().max(1.0);
        if out.hermiticity_defect() > HERMITIAN_TOL * scale {
            return Ok(f64::NEG_INFINITY);
        }
        worst = worst.min(min_eig_hermitian(&out)? / scale);
    }
    Ok(worst)
}

/// ((1 − (t/n)L)⁻¹)ⁿ, which converges to e^{tL} at rate O(1/n).
pub fn resolvent_power_approx(l: &SuperOperator, t: f64, n_steps: u64) -> Result<SuperOperator> {
    if n_steps == 0 {
        return Err(QdsError::InvalidDimension("n_steps must be >= 1".into()));
    }
    let step = t / n_steps as f64;
    let product = step.abs() * l.norm();
    if product >= 1.0 {
        return Err(QdsError::StepTooLarge { step, product });
    }
    let m = l.n() * l.n();
    let shifted = &ComplexMatrix::identity(m) - &l.mat().scale_real(step);
    let r = inverse(&shifted).map_err(|_| QdsError::SingularResolvent(1.0 / step))?;
    SuperOperator::new(l.n(), matrix_power(&r, n_steps)?)
}

/// R = ∑_ij G E_ij G* ⊗ E_ij for each G in `ops`.
pub fn projection_family(ops: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    ops.iter()
        .map(|g| {
            let n = g.rows();
            let ga = g.adjoint();
            let mut r = ComplexMatrix::zeros(n * n, n * n);
            for i in 0..n {
                for j in 0..n {
                    let e = ComplexMatrix::unit(n, i, j);
                    r += &kron(&(&(g * &e) * &ga), &e);
                }
            }
            r
        })
        .collect()
}

/// Largest violation of R_q* = R_q, R_q R_s = δ_qs R_q and ∑ R_q = 1.
pub fn projection_family_defect(family: &[ComplexMatrix]) -> f64 {
    let Some(first) = family.first() else {
        return 0.0;
    };
    let dim = first.rows();
    let mut worst = 0.0f64;
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for (q, rq) in family.iter().enumerate() {
        worst = worst.max(rq.hermiticity_defect());
        sum += rq;
        for (s, rs) in family.iter().enumerate() {
            let prod = rq * rs;
            let err = if q == s { prod.distance(rq) } else { prod.frobenius_norm() };
            worst = worst.max(err);
        }
    }
    worst.max(sum.distance(&ComplexMatrix::identity(dim)))
}

/// Result of the projection-family rate computation.
#[derive(Debug, Clone)]
pub struct RateOracle {
    /// N·tr(R_q L^{(N)}(R_{N²})) for q = 1..N²−1, in the order of `jumps`.
    pub rates: Vec<f64>,
    /// Decomposition jumps padded with zero-rate operators to N²−1 entries.
    pub jumps: Vec<Jump>,
    pub family_defect: f64,
}

/// Recomputes every rate through the ampliated map and the projection
/// family built from the (padded) jump operators, without using the
/// eigendecomposition's eigenvalues.
pub fn projection_rate_oracle(l: &SuperOperator, basis: &HSBasis) -> Result<RateOracle> {
    let n = l.n();
    let form = decompose_gksl(l, basis)?;
    let jumps = complete_jump_set(n, &form.jumps, basis)?;
    let mut ops: Vec<ComplexMatrix> = jumps.iter().map(|j| j.op.clone()).collect();
    ops.push(ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt()));
    let family = projection_family(&ops);
    let family_defect = projection_family_defect(&family);
    if family_defect > PROJECTION_FAMILY_TOL {
        return Err(QdsError::InternalConsistency(format!("projection family defect {family_defect:.3e}")));
    }
    let amp = l.ampliate(n)?;
    let image = amp.apply(&family[n * n - 1])?;
    let rates = family[..n * n - 1]
        .iter()
        .map(|rq| n as f64 * rq.trace_of_product(&image).re)
        .collect();
    Ok(RateOracle { rates, jumps, family_defect })
}

pub fn projection_rate_check(l: &SuperOperator, basis: &HSBasis) -> Result<Vec<f64>> {
    projection_rate_oracle(l, basis).map(|o| o.rates)
}

/// tr(P_r L(P_s)), nonnegative for orthogonal projections when L generates a
/// positive semigroup.
pub fn transition_rate(l: &SuperOperator, p_r: &ComplexMatrix, p_s: &ComplexMatrix) -> Result<f64> {
    check_operand(l, p_r, "P_r")?;
    Ok(p_r.trace_of_product(&l.apply(p_s)?).re)
}

/// Random pair of orthogonal rank-one projections.
pub fn random_orthogonal_projections(n: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = seeded(seed);
    let u = random_unit_vector(&mut rng, n);
    let mut v = random_unit_vector(&mut rng, n);
    let overlap: crate::linalg::C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    for (vi, ui) in v.iter_mut().zip(&u) {
        *vi -= overlap * ui;
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for vi in &mut v {
        *vi /= norm;
    }
    (crate::random::outer(&u, &u), crate::random::outer(&v, &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::gell_mann_basis;
    use crate::gksl::{dephasing, reconstruct_gksl, GksForm};
    use crate::linalg::C64;

    fn negative_dephasing() -> SuperOperator {
        let g = ComplexMatrix::diag_real(&[1.0, -1.0]).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        reconstruct_gksl(&GksForm { n: 2, hamiltonian: ComplexMatrix::zeros(2, 2), jumps: vec![Jump { rate: -1.0, op: g }] })
            .unwrap()
    }

    fn plus_state() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
    }

    #[test]
    fn propagate_at_zero_returns_initial_state() {
        let l = crate::gksl::sample_generator(3, 1, crate::gksl::Verdict::QdsGen).unwrap();
        let rho = crate::random::random_density_matrix(&mut seeded(0), 3);
        let traj = propagate(&l, &rho, &[0.0]).unwrap();
        assert_eq!(traj.states[0], rho);
    }

    #[test]
    fn dephasing_trajectory() {
        let traj = propagate(&dephasing(2.0), &plus_state(), &[0.0, 0.5, 1.0]).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let want = 0.5 * (-2.0 * t).exp();
            assert!((s[(0, 1)] - C64::new(want, 0.0)).norm() < 1e-12);
            assert!((s[(0, 0)].re - 0.5).abs() < 1e-12);
        }
        let e11 = ComplexMatrix::unit(2, 0, 0);
        let traj = propagate(&dephasing(2.0), &e11, &[0.0, 1.0, 5.0]).unwrap();
        for s in &traj.states {
            assert!(s.distance(&e11) < 1e-13);
        }
    }

    #[test]
    fn propagate_rejects_bad_input() {
        let l = dephasing(2.0);
        assert_eq!(propagate(&l, &plus_state(), &[1.0, 0.5]), Err(QdsError::UnsortedTimes));
        assert_eq!(propagate(&l, &plus_state(), &[-1.0]), Err(QdsError::UnsortedTimes));
        assert!(matches!(propagate(&l, &ComplexMatrix::identity(3), &[0.0]), Err(QdsError::DimensionMismatch(_))));
    }

    #[test]
    fn choi_of_zero_generator() {
        let choi = choi_of_exp(&SuperOperator::zero(2), 0.7).unwrap();
        let eig = crate::linalg::hermitian_eig(&choi.mat).unwrap();
        assert!((eig.values[3] - 2.0).abs() < 1e-14);
        assert!(eig.values[..3].iter().all(|v| v.abs() < 1e-14));
        // eigenvector ∝ vec(I)
        let top = eig.vectors.column(3);
        let overlap = (top[0] + top[3]).norm() / 2f64.sqrt();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cp_examples() {
        assert!(is_cp_at(&dephasing(2.0), 1.0, 1e-9).unwrap());
        let l = negative_dephasing();
        assert!(!is_cp_at(&l, 0.1, 1e-9).unwrap());
        let min = min_choi_eigenvalue(&l, 0.1).unwrap().unwrap();
        // off-diagonal grows by e^{t}; Choi eigenvalue 1 − e^{t} ≈ −t
        assert!((min - (1.0 - 0.1f64.exp())).abs() < 1e-12);
    }

    #[test]
    fn trace_preservation_examples() {
        let rho = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(verify_trace_preservation(&dephasing(2.0), std::slice::from_ref(&rho), &[0.1, 1.0, 10.0], 1e-9).unwrap());
        assert!(!verify_trace_preservation(&SuperOperator::identity(2), std::slice::from_ref(&rho), &[1.0], 1e-9).unwrap());
        let drift = max_trace_drift(&SuperOperator::identity(2), std::slice::from_ref(&rho), &[1.0]).unwrap();
        let e = 1f64.exp();
        assert!((drift - (e - 1.0) / (e / 2f64.sqrt())).abs() < 1e-12);
        assert!(verify_trace_preservation(&SuperOperator::zero(2), &[rho], &[3.0], 1e-12).unwrap());
    }

    #[test]
    fn dissipativity_examples() {
        let e12 = ComplexMatrix::unit(2, 0, 1);
        let (ok, d) = dissipativity_check(&dephasing(2.0), &e12, 1e-9).unwrap();
        assert!(ok);
        assert!(d.distance(&ComplexMatrix::unit(2, 1, 1).scale_real(4.0)) < 1e-14);

        let l = crate::gksl::sample_generator(3, 2, crate::gksl::Verdict::StarTraceSemigroupGen).unwrap();
        let (_, d) = dissipativity_check(&l, &ComplexMatrix::identity(3), 1e-9).unwrap();
        assert!(d.frobenius_norm() < 1e-12);

        let (ok, _) = dissipativity_check(&negative_dephasing(), &e12, 1e-9).unwrap();
        assert!(!ok);
    }

    #[test]
    fn witness_search_finds_structured_witness() {
        // Rates (1, 1, −0.2) on σx, σy, σz: random x rarely catches this.
        let b = gell_mann_basis(2).unwrap();
        let jumps = vec![
            Jump { rate: 1.0, op: b.elements()[0].clone() },
            Jump { rate: 1.0, op: b.elements()[1].clone() },
            Jump { rate: -0.2, op: b.elements()[2].clone() },
        ];
        let l = reconstruct_gksl(&GksForm { n: 2, hamiltonian: ComplexMatrix::zeros(2, 2), jumps }).unwrap();
        let w = search_dissipativity_witness(&l, 5, 0, 1e-8).unwrap().expect("witness");
        assert!(w.min_eigenvalue < -1e-3);
        assert!(search_dissipativity_witness(&dephasing(2.0), 5, 0, 1e-8).unwrap().is_none());
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent(&SuperOperator::zero(2), 1.0).unwrap();
        assert_eq!(r, SuperOperator::identity(2));
        assert!(resolvent_positivity_check(&SuperOperator::zero(2), 1.0, 10, 0, 1e-9).unwrap());
        assert!(resolvent_positivity_check(&dephasing(2.0), 10.0, 100, 0, 1e-9).unwrap());
        assert!(!resolvent_positivity_check(&negative_dephasing(), 10.0, 100, 0, 1e-9).unwrap());
        assert!(matches!(resolvent(&dephasing(2.0), 1.0), Err(QdsError::LambdaTooSmall { .. })));
    }

    #[test]
    fn resolvent_power_examples() {
        for steps in [1u64, 7, 64] {
            assert_eq!(resolvent_power_approx(&SuperOperator::zero(2), 1.0, steps).unwrap(), SuperOperator::identity(2));
        }
        let l = dephasing(2.0);
        let exact = semigroup_at(&l, 1.0).unwrap();
        let e64 = resolvent_power_approx(&l, 1.0, 64).unwrap().distance(&exact);
        let e128 = resolvent_power_approx(&l, 1.0, 128).unwrap().distance(&exact);
        let ratio = e64 / e128;
        assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
        assert!(resolvent_power_approx(&l, 1.0, 4096).unwrap().distance(&exact) < 1e-3);
        assert!(matches!(resolvent_power_approx(&l, 1.0, 2), Err(QdsError::StepTooLarge { .. })));
    }

    #[test]
    fn projection_oracle_examples() {
        let b = gell_mann_basis(2).unwrap();
        let rates = projection_rate_check(&dephasing(2.0), &b).unwrap();
        assert_eq!(rates.len(), 3);
        assert!((rates[0] - 2.0).abs() < 1e-12);
        assert!(rates[1].abs() < 1e-12 && rates[2].abs() < 1e-12);

        let zero = projection_rate_check(&SuperOperator::zero(2), &b).unwrap();
        assert!(zero.iter().all(|r| r.abs() < 1e-14));

        let sm = ComplexMatrix::unit(2, 1, 0);
        let damping = reconstruct_gksl(&GksForm {
            n: 2,
            hamiltonian: ComplexMatrix::zeros(2, 2),
            jumps: vec![Jump { rate: 1.0, op: sm }],
        })
        .unwrap();
        let rates = projection_rate_check(&damping, &b).unwrap();
        assert!((rates[0] - 1.0).abs() < 1e-12);
        assert!(rates[1].abs() < 1e-12 && rates[2].abs() < 1e-12);

        assert!(matches!(
            projection_rate_check(&SuperOperator::identity(2), &b),
            Err(QdsError::NotTraceAnnihilating { .. })
        ));
    }

    #[test]
    fn transition_rates_nonnegative_for_dephasing_and_damping() {
        let (p, q) = random_orthogonal_projections(2, 3);
        assert!((&p * &q).frobenius_norm() < 1e-14);
        assert!(transition_rate(&dephasing(2.0), &p, &q).unwrap() >= -1e-12);
    }
}
