use proptest::prelude::*;
use proptest::test_runner::Config;

use qds::basis::{completeness_sum, gell_mann_basis, matrix_units, rotate_traceless};
use qds::gksl::{
    classify, classify_detailed, decompose_gksl, decompose_k_form, reconstruct_gksl, sample_generator, GksForm, Jump,
    Verdict,
};
use qds::linalg::{expm, hermitian_eig, kron, vec, ComplexMatrix, C64};
use qds::random::{gaussian_hermitian, gaussian_matrix, haar_unitary, random_density_matrix, seeded};
use qds::semigroup::{
    is_cp_at, projection_family, projection_family_defect, random_orthogonal_projections, transition_rate,
};
use qds::superop::{CoeffMatrix, SuperOperator};

fn config(cases: u32) -> Config {
    Config { cases, failure_persistence: None, ..Config::default() }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// GKSL generator with the given rates on random orthonormal traceless jumps.
fn generator_with_rates(n: usize, seed: u64, rates: &[f64]) -> SuperOperator {
    let mut rng = seeded(seed);
    let basis = gell_mann_basis(n).unwrap();
    let rotated = rotate_traceless(&basis, &haar_unitary(&mut rng, n * n - 1)).unwrap();
    let h = gaussian_hermitian(&mut rng, n);
    let h = &h - &ComplexMatrix::identity(n).scale(h.trace() / n as f64);
    let jumps = rates.iter().zip(rotated.traceless()).map(|(&rate, g)| Jump { rate, op: g.clone() }).collect();
    reconstruct_gksl(&GksForm { n, hamiltonian: h, jumps }).unwrap()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn hermitian_eig_reconstructs(seed in any::<u64>(), n in 2usize..=8) {
        let m = gaussian_hermitian(&mut seeded(seed), n);
        let e = hermitian_eig(&m).unwrap();
        let d = ComplexMatrix::diag_real(&e.values);
        let back = &(&e.vectors * &d) * &e.vectors.adjoint();
        prop_assert!(back.distance(&m) <= 1e-10 * m.frobenius_norm().max(1.0));
        prop_assert!((&e.vectors.adjoint() * &e.vectors).distance(&ComplexMatrix::identity(n)) <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn expm_inverse_and_block_diagonal(seed in any::<u64>(), n in 1usize..=5, radius in 0.0f64..5.0) {
        let mut rng = seeded(seed);
        let g = gaussian_matrix(&mut rng, n, n);
        let m = g.scale_real(radius / g.frobenius_norm().max(1e-300));
        let prod = &expm(&m).unwrap() * &expm(&m.scale_real(-1.0)).unwrap();
        prop_assert!(prod.distance(&ComplexMatrix::identity(n)) <= 1e-9);

        let b = gaussian_matrix(&mut rng, 2, 2);
        let joint = ComplexMatrix::from_fn(n + 2, n + 2, |i, j| match (i < n, j < n) {
            (true, true) => m[(i, j)],
            (false, false) => b[(i - n, j - n)],
            _ => C64::new(0.0, 0.0),
        });
        let ej = expm(&joint).unwrap();
        let (ea, eb) = (expm(&m).unwrap(), expm(&b).unwrap());
        prop_assert!(ej.block(0, 0, n, n).distance(&ea) <= 1e-10 * ea.frobenius_norm().max(1.0));
        prop_assert!(ej.block(n, n, 2, 2).distance(&eb) <= 1e-10 * eb.frobenius_norm().max(1.0));
        prop_assert!(ej.block(0, n, n, 2).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn vec_is_linear_isometry(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = seeded(seed);
        let a = gaussian_matrix(&mut rng, n, n);
        let b = gaussian_matrix(&mut rng, n, n);
        let z = C64::new(0.3, -1.7);
        let va = vec(&a);
        let norm = va.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((norm - a.frobenius_norm()).abs() <= 1e-13 * norm.max(1.0));
        let lhs = vec(&(&a.scale(z) + &b));
        for ((l, x), y) in lhs.iter().zip(&va).zip(vec(&b)) {
            prop_assert!((l - (z * x + y)).norm() <= 1e-13);
        }
    }

    #[test]
    fn kron_vec_identity(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = seeded(seed);
        let a = gaussian_matrix(&mut rng, n, n);
        let b = gaussian_matrix(&mut rng, n, n);
        let x = gaussian_matrix(&mut rng, n, n);
        let lhs = vec(&(&(&b * &x) * &a.transpose()));
        let rhs = kron(&a, &b).mul_vec(&vec(&x));
        let err = lhs.iter().zip(&rhs).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * (a.frobenius_norm() * b.frobenius_norm() * x.frobenius_norm()).max(1.0));
    }

    #[test]
    fn completeness_is_basis_independent(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = seeded(seed);
        let basis = gell_mann_basis(n).unwrap();
        let rotated = qds::basis::rotate_family(basis.elements(), &haar_unitary(&mut rng, n * n));
        let a = gaussian_matrix(&mut rng, n, n);
        let s = completeness_sum(basis.elements(), &a).unwrap();
        let units = matrix_units(n).unwrap();
        let e = completeness_sum(&units, &a).unwrap();
        prop_assert!(completeness_sum(&rotated, &a).unwrap().distance(&s) <= 1e-10 * a.frobenius_norm().max(1.0));
        prop_assert!(e.distance(&s) <= 1e-10 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn matrix_unit_sandwich(seed in any::<u64>(), n in 1usize..=5) {
        let a = gaussian_matrix(&mut seeded(seed), n, n);
        let units = matrix_units(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let lhs = &(&units[i * n + j] * &a) * &units[j * n + i];
                prop_assert_eq!(lhs, units[i * n + i].scale(a[(j, j)]));
            }
        }
    }

    #[test]
    fn hermiticity_preservation_matches_direct_test(seed in any::<u64>(), n in 2usize..=3, hp in any::<bool>()) {
        let mut rng = seeded(seed);
        let basis = gell_mann_basis(n).unwrap();
        let c = if hp { gaussian_hermitian(&mut rng, n * n) } else { gaussian_matrix(&mut rng, n * n, n * n) };
        let l = SuperOperator::from_coeff_matrix(&CoeffMatrix::new(n, c).unwrap(), &basis).unwrap();
        let direct = (0..50).all(|_| {
            let a = gaussian_matrix(&mut rng, n, n);
            let lhs = l.apply(&a.adjoint()).unwrap();
            let rhs = l.apply(&a).unwrap().adjoint();
            lhs.distance(&rhs) <= 1e-9 * lhs.frobenius_norm().max(1.0)
        });
        prop_assert_eq!(l.is_hermiticity_preserving(1e-9), direct);
        prop_assert_eq!(direct, hp);
    }

    #[test]
    fn ampliation_keeps_structure(seed in any::<u64>(), n in 2usize..=3, k in 1usize..=3) {
        let l = sample_generator(n, seed, Verdict::StarTraceSemigroupGen).unwrap();
        let amp = l.ampliate(k).unwrap();
        prop_assert!(amp.is_hermiticity_preserving(1e-9));
        prop_assert!(amp.is_trace_annihilating(1e-9));
        let star = sample_generator(n, seed, Verdict::StarSemigroupGen).unwrap().ampliate(k).unwrap();
        prop_assert!(star.is_hermiticity_preserving(1e-9));
    }

    #[test]
    fn decomposition_rates_are_basis_independent(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded(seed ^ 0x5eed);
        let l = sample_generator(n, seed, Verdict::StarTraceSemigroupGen).unwrap();
        let basis = gell_mann_basis(n).unwrap();
        let rotated = rotate_traceless(&basis, &haar_unitary(&mut rng, n * n - 1)).unwrap();
        let a = sorted(decompose_k_form(&l, &basis).unwrap().rates());
        let b = sorted(decompose_k_form(&l, &rotated).unwrap().rates());
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8);
        }
        let form = decompose_gksl(&l, &rotated).unwrap();
        prop_assert!(reconstruct_gksl(&form).unwrap().distance(&l) <= 1e-9 * l.norm().max(1.0));
    }

    #[test]
    fn k_trace_is_half_trace_defect(seed in any::<u64>(), n in 2usize..=4) {
        let l = sample_generator(n, seed, Verdict::StarSemigroupGen).unwrap();
        let kf = decompose_k_form(&l, &gell_mann_basis(n).unwrap()).unwrap();
        prop_assert!((kf.k.trace() - C64::new(kf.trace_defect / 2.0, 0.0)).norm() <= 1e-9);
        prop_assert!(kf.trace_defect.abs() > 1e-3);
    }

    #[test]
    fn reconstructed_forms_are_generators(seed in any::<u64>(), n in 2usize..=3, signed in any::<bool>()) {
        let mut rng = seeded(seed);
        let rates: Vec<f64> = (0..n * n - 1)
            .map(|_| {
                let g = qds::random::gaussian(&mut rng);
                if signed { g } else { g.abs() }
            })
            .collect();
        let l = generator_with_rates(n, seed, &rates);
        prop_assert!(l.is_trace_annihilating(1e-10));
        prop_assert!(l.is_hermiticity_preserving(1e-10));
        let class = classify(&l);
        if rates.iter().all(|&r| r >= 0.0) {
            prop_assert_eq!(class.verdict, Verdict::QdsGen);
        } else if rates.iter().any(|&r| r < -1e-6) {
            prop_assert_eq!(class.verdict, Verdict::StarTraceSemigroupGen);
        }
    }

    #[test]
    fn projection_family_from_any_orthonormal_set(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded(seed);
        let basis = gell_mann_basis(n).unwrap();
        let rotated = rotate_traceless(&basis, &haar_unitary(&mut rng, n * n - 1)).unwrap();
        prop_assert!(projection_family_defect(&projection_family(rotated.elements())) <= 1e-9);
    }

    #[test]
    fn transition_rates_nonnegative(seed in any::<u64>(), n in 2usize..=3) {
        let l = sample_generator(n, seed, Verdict::QdsGen).unwrap();
        for pair in 0..10 {
            let (p, q) = random_orthogonal_projections(n, seed.wrapping_add(pair));
            prop_assert!(transition_rate(&l, &p, &q).unwrap() >= -1e-9);
        }
    }
}

#[test]
fn choi_positivity_iff_nonnegative_rates() {
    let grid: Vec<f64> = (0..=8).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect();
    let mut agree = 0;
    for seed in 0..50u64 {
        let n = 2 + (seed % 2) as usize;
        let mut rng = seeded(1000 + seed);
        // Even seeds keep every rate nonnegative; odd seeds flip at least one sign.
        let mut rates: Vec<f64> = (0..n * n - 1).map(|_| 0.05 + qds::random::gaussian(&mut rng).abs()).collect();
        if seed % 2 == 1 {
            for r in rates.iter_mut().step_by(2) {
                *r = -*r;
            }
        }
        let l = generator_with_rates(n, seed, &rates);
        let nonneg = classify_detailed(&l).class.rates_nonnegative;
        let cp_everywhere = grid.iter().all(|&t| is_cp_at(&l, t, 1e-8).unwrap());
        assert_eq!(nonneg, cp_everywhere, "seed {seed}");
        assert_eq!(nonneg, seed % 2 == 0);
        agree += 1;
    }
    assert_eq!(agree, 50);
}

#[test]
fn qds_semigroups_map_states_to_states() {
    for seed in 0..10u64 {
        let l = sample_generator(3, seed, Verdict::QdsGen).unwrap();
        let rho = random_density_matrix(&mut seeded(seed), 3);
        let traj = qds::semigroup::propagate(&l, &rho, &[0.0, 0.3, 2.0, 20.0]).unwrap();
        for s in &traj.states {
            assert!((s.trace().re - 1.0).abs() < 1e-10);
            assert!(qds::linalg::min_eig_hermitian(&s.hermitian_part()).unwrap() > -1e-10);
            assert!(s.hermiticity_defect() < 1e-10);
        }
    }
}
