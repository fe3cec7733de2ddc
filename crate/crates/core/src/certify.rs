//! Certificate suites run by `qds verify`.

use std::fmt;
use std::str::FromStr;

use crate::basis::gell_mann_basis;
use crate::error::{QdsError, Result};
use crate::gksl::{complete_jump_set, decompose_gksl, decompose_k_form, reconstruct_gksl, reconstruct_k};
use crate::linalg::{min_eig_hermitian, ComplexMatrix, HERMITIAN_TOL};
use crate::random::{random_density_matrix, seeded};
use crate::semigroup::{
    choi_of_exp, dissipation_form, dissipativity_candidates, max_trace_drift, projection_rate_oracle,
    resolvent_worst_eigenvalue,
};
use crate::superop::{CoeffMatrix, SuperOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Roundtrip,
    Cp,
    Trace,
    Resolvent,
    Dissipativity,
    RateOracle,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Roundtrip, Check::Cp, Check::Trace, Check::Resolvent, Check::Dissipativity, Check::RateOracle];

    pub fn name(self) -> &'static str {
        match self {
            Check::Roundtrip => "roundtrip",
            Check::Cp => "cp",
            Check::Trace => "trace",
            Check::Resolvent => "resolvent",
            Check::Dissipativity => "dissipativity",
            Check::RateOracle => "rate-oracle",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Grids, trial counts and tolerances for the certificate suites.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateConfig {
    pub cp_times: Vec<f64>,
    pub trace_times: Vec<f64>,
    pub trace_samples: usize,
    pub dissipativity_trials_k1: usize,
    pub dissipativity_trials_k2: usize,
    pub resolvent_trials: usize,
    /// λ = resolvent_factor·‖L‖_F (λ = 1 for the zero map).
    pub resolvent_factor: f64,
    pub roundtrip_tol: f64,
    pub cp_tol: f64,
    pub trace_tol: f64,
    pub resolvent_tol: f64,
    pub dissipativity_tol: f64,
    pub rate_tol: f64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        Self {
            cp_times: vec![0.1, 1.0, 10.0],
            trace_times: vec![0.1, 1.0, 10.0],
            trace_samples: 5,
            dissipativity_trials_k1: 20,
            dissipativity_trials_k2: 10,
            resolvent_trials: 100,
            resolvent_factor: 2.0,
            roundtrip_tol: 1e-9,
            cp_tol: 1e-8,
            trace_tol: 1e-9,
            resolvent_tol: 1e-9,
            dissipativity_tol: 1e-8,
            rate_tol: 1e-8,
        }
    }
}

/// Geometric time grid 1e-3, 1e-2, …, 10 with `per_decade` points per decade.
pub fn geometric_grid(per_decade: usize) -> Vec<f64> {
    let steps = 4 * per_decade;
    (0..=steps).map(|i| 10f64.powf(-3.0 + i as f64 / per_decade as f64)).collect()
}

/// Outcome of one suite. `worst_value` is the quantity compared against the
/// tolerance; `None` when the suite does not apply to the map (which counts
/// as a failure) or the value is not finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub pass: bool,
    pub worst_value: Option<f64>,
}

impl CheckOutcome {
    fn at_most(value: f64, tol: f64) -> Self {
        Self { pass: value <= tol, worst_value: value.is_finite().then_some(value) }
    }

    fn at_least(value: f64, floor: f64) -> Self {
        Self { pass: value >= floor, worst_value: value.is_finite().then_some(value) }
    }

    fn inapplicable() -> Self {
        Self { pass: false, worst_value: None }
    }
}

fn relative_min_eig(m: &ComplexMatrix) -> Result<Option<f64>> {
    let scale = m.frobenius_norm().max(1.0);
    if m.hermiticity_defect() > HERMITIAN_TOL * scale {
        return Ok(None);
    }
    Ok(Some(min_eig_hermitian(m)? / scale))
}

/// Relative round-trip error through the most specific decomposition the
/// map admits: GKSL form, K-form, or the plain coefficient matrix.
pub fn roundtrip_error(l: &SuperOperator) -> Result<f64> {
    let basis = gell_mann_basis(l.n())?;
    let back = match decompose_gksl(l, &basis) {
        Ok(form) => reconstruct_gksl(&form)?,
        Err(QdsError::NotTraceAnnihilating { .. }) => reconstruct_k(&decompose_k_form(l, &basis)?)?,
        Err(QdsError::NotHermiticityPreserving { .. }) => {
            let c: CoeffMatrix = l.to_coeff_matrix(&basis)?;
            SuperOperator::from_coeff_matrix(&c, &basis)?
        }
        Err(e) => return Err(e),
    };
    Ok(back.distance(l) / l.norm().max(1.0))
}

fn check_cp(l: &SuperOperator, cfg: &CertificateConfig) -> Result<CheckOutcome> {
    let mut worst = f64::INFINITY;
    for &t in &cfg.cp_times {
        match relative_min_eig(&choi_of_exp(l, t)?.mat)? {
            Some(v) => worst = worst.min(v),
            None => return Ok(CheckOutcome::inapplicable()),
        }
    }
    Ok(CheckOutcome::at_least(worst, -cfg.cp_tol))
}

fn check_dissipativity(l: &SuperOperator, cfg: &CertificateConfig, seed: u64) -> Result<CheckOutcome> {
    let candidates = dissipativity_candidates(l, cfg.dissipativity_trials_k1, cfg.dissipativity_trials_k2, seed)?;
    let mut amps: Vec<Option<SuperOperator>> = vec![None; l.n() + 3];
    let mut worst = f64::INFINITY;
    for (k, x) in candidates {
        if amps[k].is_none() {
            amps[k] = Some(l.ampliate(k)?);
        }
        let d = dissipation_form(amps[k].as_ref().expect("just filled"), &x)?;
        match relative_min_eig(&d)? {
            Some(v) => worst = worst.min(v),
            None => return Ok(CheckOutcome::inapplicable()),
        }
    }
    Ok(CheckOutcome::at_least(worst, -cfg.dissipativity_tol))
}

/// Largest gap between the projection-family rates and the decomposition
/// rates (zero-padded, compared as sorted lists).
pub fn rate_oracle_gap(l: &SuperOperator) -> Result<f64> {
    let basis = gell_mann_basis(l.n())?;
    let oracle = projection_rate_oracle(l, &basis)?;
    let form = decompose_gksl(l, &basis)?;
    let mut expected: Vec<f64> = complete_jump_set(l.n(), &form.jumps, &basis)?.iter().map(|j| j.rate).collect();
    let mut got = oracle.rates.clone();
    expected.sort_by(f64::total_cmp);
    got.sort_by(f64::total_cmp);
    Ok(expected.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Runs one suite on `l`; all randomness derives from `seed`.
pub fn run_check(l: &SuperOperator, check: Check, cfg: &CertificateConfig, seed: u64) -> Result<CheckOutcome> {
    match check {
        Check::Roundtrip => Ok(CheckOutcome::at_most(roundtrip_error(l)?, cfg.roundtrip_tol)),
        Check::Cp => check_cp(l, cfg),
        Check::Trace => {
            let mut rng = seeded(seed);
            let samples: Vec<_> = (0..cfg.trace_samples).map(|_| random_density_matrix(&mut rng, l.n())).collect();
            Ok(CheckOutcome::at_most(max_trace_drift(l, &samples, &cfg.trace_times)?, cfg.trace_tol))
        }
        Check::Resolvent => {
            let norm = l.norm();
            let lambda = if norm > 0.0 { cfg.resolvent_factor * norm } else { 1.0 };
            let worst = resolvent_worst_eigenvalue(l, lambda, cfg.resolvent_trials, seed)?;
            Ok(CheckOutcome::at_least(worst, -cfg.resolvent_tol))
        }
        Check::Dissipativity => check_dissipativity(l, cfg, seed),
        Check::RateOracle => match rate_oracle_gap(l) {
            Ok(gap) => Ok(CheckOutcome::at_most(gap, cfg.rate_tol)),
            Err(QdsError::NotHermiticityPreserving { .. }) | Err(QdsError::NotTraceAnnihilating { .. }) => {
                Ok(CheckOutcome::inapplicable())
            }
            Err(e) => Err(e),
        },
    }
}

pub fn run_checks(l: &SuperOperator, checks: &[Check], cfg: &CertificateConfig, seed: u64) -> Result<Vec<(Check, CheckOutcome)>> {
    checks.iter().map(|&c| run_check(l, c, cfg, seed).map(|o| (c, o))).collect()
}
