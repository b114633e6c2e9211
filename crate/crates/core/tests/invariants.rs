//! Property tests. Matrices are drawn from a seeded ChaCha stream so that
//! proptest shrinks over `(n, seed)` rather than over raw entries.

use ndefect::catalog::*;
use ndefect::commutator::*;
use ndefect::commuting::*;
use ndefect::complex::*;
use ndefect::generators::*;
use ndefect::numerics::*;
use ndefect::real::*;
use ndefect::separability::*;
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rows: usize, cols: usize, r: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| c(r.sample(StandardNormal), r.sample(StandardNormal)))
}

fn hermitian(n: usize, r: &mut ChaCha8Rng) -> Matrix {
    let g = gaussian(n, n, r);
    (&g + &g.adjoint()).scale_re(0.5)
}

fn unitary_residual(u: &Matrix) -> f64 {
    (&(&u.adjoint() * u) - &Matrix::identity(u.cols())).frobenius_norm()
}

/// Failure seeds live in `invariants.proptest-regressions` beside this file.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: Some(Box::new(FileFailurePersistence::WithSource("proptest-regressions"))),
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn eig_reconstructs_hermitian(n in 1usize..=12, seed: u64) {
        let h = hermitian(n, &mut rng(seed));
        let e = hermitian_eig(&h, &tol()).unwrap();
        prop_assert!((&h - &e.reconstruct()).frobenius_norm() <= tol().residual_tol * h.frobenius_norm());
        prop_assert!(unitary_residual(&e.vectors) <= tol().residual_tol);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn lower_bound_at_most_unitary_defect(n in 1usize..=8, seed: u64) {
        let a = gaussian(n, n, &mut rng(seed));
        prop_assert!(nd_lower_bound(&a, &tol()).unwrap() <= unitary_defect(&a, &tol()).unwrap());
    }
}

proptest! {
    #![proptest_config(config(ProptestConfig::default().cases))]
    #[test]
    fn svd_reconstructs_with_orthonormal_factors(rows in 1usize..=9, cols in 1usize..=9, seed: u64) {
        let a = gaussian(rows, cols, &mut rng(seed));
        let s = svd(&a, &tol()).unwrap();
        prop_assert!((&a - &s.reconstruct()).frobenius_norm() <= tol().residual_tol * a.frobenius_norm());
        prop_assert!(unitary_residual(&s.u) <= tol().residual_tol);
        prop_assert!(unitary_residual(&s.v) <= tol().residual_tol);
        prop_assert!(s.singulars.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.singulars.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn svd_of_rank_deficient_input(n in 2usize..=8, k in 1usize..=7, seed: u64) {
        let k = k.min(n - 1);
        let mut r = rng(seed);
        let a = &gaussian(n, k, &mut r) * &gaussian(k, n, &mut r);
        prop_assert_eq!(numerical_rank(&a, &tol()).unwrap(), k);
        let ns = nullspace_basis(&a, &tol()).unwrap();
        prop_assert_eq!(ns.cols(), n - k);
        prop_assert!((&a * &ns).frobenius_norm() <= 1e-9 * a.frobenius_norm());
    }

    #[test]
    fn takagi_of_unitary_symmetric(n in 1usize..=10, seed: u64) {
        let q = random_unitary(n, &mut rng(seed));
        let s = &q * &q.transpose();
        let t = takagi_symmetric(&s, &tol()).unwrap();
        let ggt = &t.g * &t.g.transpose();
        prop_assert!((&s - &ggt).frobenius_norm() <= tol().residual_tol);
        prop_assert!(unitary_residual(&t.g) <= tol().residual_tol);
        prop_assert!(t.values.iter().all(|v| (v - 1.0).abs() <= 1e-9));
    }

    #[test]
    fn takagi_of_general_symmetric(n in 1usize..=6, seed: u64) {
        let g = gaussian(n, n, &mut rng(seed));
        let s = (&g + &g.transpose()).scale_re(0.5);
        let t = takagi_symmetric(&s, &tol()).unwrap();
        prop_assert!((&s - &t.reconstruct()).frobenius_norm() <= 1e-9 * s.frobenius_norm());
        prop_assert!(unitary_residual(&t.g) <= 1e-9);
    }

    #[test]
    fn rank_is_unitarily_invariant(n in 2usize..=8, k in 0usize..=8, seed: u64) {
        let k = k.min(n);
        let mut r = rng(seed);
        let a = &gaussian(n, k, &mut r) * &gaussian(k, n, &mut r);
        let w = random_unitary(n, &mut r);
        let b = &(&w * &a) * &w.adjoint();
        prop_assert_eq!(numerical_rank(&a, &tol()).unwrap(), numerical_rank(&b, &tol()).unwrap());
    }

    #[test]
    fn commutator_is_traceless_hermitian_and_never_rank_one(n in 1usize..=8, seed: u64, structured: bool) {
        let mut r = rng(seed);
        let a = if structured && n >= 2 { random_rank_condition_complex(n, &mut r) } else { gaussian(n, n, &mut r) };
        let cm = self_commutator(&a).unwrap();
        let scale = a.frobenius_norm().powi(2);
        prop_assert!(cm.trace().norm() <= 1e-12 * scale);
        prop_assert!(cm.hermitian_residual() <= 1e-12 * scale);
        prop_assert_ne!(numerical_rank(&cm, &tol()).unwrap(), 1);
    }

    #[test]
    fn minimal_unitary_completion_is_scaled_unitary(n in 1usize..=7, seed: u64) {
        let a = gaussian(n, n, &mut rng(seed));
        let ud = unitary_defect(&a, &tol()).unwrap();
        let b = minimal_unitary_completion(&a, &tol()).unwrap();
        prop_assert_eq!(b.rows(), n + ud);
        prop_assert_eq!(b.submatrix(0, 0, n, n), a.clone());
        let s = singular_values(&b).unwrap();
        prop_assert!((s[0] - s[s.len() - 1]).abs() <= tol().residual_tol * s[0]);
    }

    #[test]
    fn profile_is_conjugation_covariant(n in 2usize..=8, seed: u64) {
        let mut r = rng(seed);
        let a = random_rank_condition_complex(n, &mut r);
        let v = random_unitary(n, &mut r);
        let b = &(&v.adjoint() * &a) * &v;
        let (p, q) = (profile(&a, &tol()).unwrap(), profile(&b, &tol()).unwrap());
        prop_assert!((p.d - q.d).abs() <= 1e-9 * p.d);
        prop_assert_eq!(p.inertia, q.inertia);
        // V*u₁ spans the same line as the new u₁.
        let moved = v.adjoint().mul_vec(&p.u1);
        prop_assert!((dot(&q.u1, &moved).norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn verdict_is_phase_invariant(n in 3usize..=7, seed: u64, a1 in 0.0..6.3f64, a2 in 0.0..6.3f64) {
        let a = random_rank_condition_complex(n, &mut rng(seed));
        let p = profile(&a, &tol()).unwrap();
        let base = solve_feasibility(&assemble_tableau(&a, &p, &tol()).unwrap(), p.d, &tol()).unwrap();
        let q = p.rephased(a1, a2);
        let moved = solve_feasibility(&assemble_tableau(&a, &q, &tol()).unwrap(), q.d, &tol()).unwrap();
        prop_assert_eq!(base.is_feasible(), moved.is_feasible());
        if let Some(s) = moved.solutions() {
            let pair = s.principal();
            let b = build_completion(&a, &q, &pair, c(1.0, 0.0), &tol()).unwrap();
            prop_assert!(verify_normal(&b, &tol()).unwrap().normal);
        }
    }

    #[test]
    fn refined_and_standard_agree(n in 3usize..=9, seed: u64) {
        let a = random_rank_condition_complex(n, &mut rng(seed));
        let s = nd_status_with(&a, &tol(), TableauMode::Standard).unwrap();
        let r = nd_status_with(&a, &tol(), TableauMode::Refined).unwrap();
        prop_assert_eq!(s.is_one(), r.is_one());
    }

    #[test]
    fn completions_are_sound_and_pass_the_dependency_test(n in 3usize..=10, seed: u64) {
        let (_, a) = sample_nd1_complex(n, seed, &tol()).unwrap();
        let NdStatus::One(f) = nd_status(&a, &tol()).unwrap() else {
            return Err(TestCaseError::fail("generator output not recognised"));
        };
        for pair in f.sample(3, seed) {
            let b = f.completion(&pair, c(1.0, 0.0), &tol()).unwrap();
            prop_assert_eq!(b.submatrix(0, 0, n, n), a.clone());
            prop_assert!(verify_normal(&b, &tol()).unwrap().residual <= 1e-9);
            let p = &f.profile;
            let x = add_vec(&scale_vec(pair.x1, &p.u1), &scale_vec(pair.x2, &p.u2));
            let y = add_vec(&scale_vec(pair.x2.conj(), &p.u1), &scale_vec(pair.x1.conj(), &p.u2));
            match dependency_test(&a, &x, &y, &tol()) {
                Ok(dep) => prop_assert!(dep),
                Err(e) => prop_assert_eq!(e, ndefect::Error::DependentWitness),
            }
        }
    }

    #[test]
    fn doubling_d_scales_samples_by_sqrt2(n in 3usize..=7, seed: u64) {
        let (_, a) = sample_nd1_complex(n, seed, &tol()).unwrap();
        let b = a.scale_re(std::f64::consts::SQRT_2);
        let (NdStatus::One(f), NdStatus::One(g)) = (nd_status(&a, &tol()).unwrap(), nd_status(&b, &tol()).unwrap()) else {
            return Err(TestCaseError::fail("verdict changed under scaling"));
        };
        prop_assert!((g.d() - 2.0 * f.d()).abs() <= 1e-9 * f.d());
        for (p, q) in f.sample(4, seed).iter().zip(g.sample(4, seed)) {
            prop_assert!((q.level() - 2.0 * p.level()).abs() <= 1e-9 * f.d());
            if f.solutions.f.max_abs_diff(&g.solutions.f) <= 1e-12 {
                let s = std::f64::consts::SQRT_2;
                prop_assert!((q.x1 - p.x1 * s).norm() + (q.x2 - p.x2 * s).norm() <= 1e-6 * (1.0 + p.x1.norm()));
            }
        }
    }

    #[test]
    fn real_completions_are_real_and_solve_their_case(n in 2usize..=8, seed: u64) {
        let a = random_rank_condition_real(n, &mut rng(seed));
        if let RndStatus::One(f) = rnd_status(&a, &tol()).unwrap() {
            for s in &f.solutions {
                let b = f.completion(s, &tol()).unwrap();
                prop_assert!(b.is_real());
                let scale = a.frobenius_norm().max(1.0) * (s.x1.abs() + s.x2.abs()).max(1.0);
                prop_assert!(real_equation_residual(&a, &f.profile, s.case, s.x1, s.x2) <= tol().residual_tol * scale);
                prop_assert!(verify_normal(&b, &tol()).unwrap().normal);
            }
        }
    }

    #[test]
    fn real_verdict_ignores_eigenvector_signs(n in 2usize..=8, seed: u64) {
        let mut r = rng(seed);
        let a = random_rank_condition_real(n, &mut r);
        let (rep, p) = real_case_analysis(&a, &tol()).unwrap();
        let flipped = |v: &[C64]| v.iter().map(|z| -z).collect::<Vec<_>>();
        for (s1, s2) in [(true, false), (false, true), (true, true)] {
            let u1 = if s1 { flipped(&p.u1) } else { p.u1.clone() };
            let u2 = if s2 { flipped(&p.u2) } else { p.u2.clone() };
            let q = p.with_eigenvectors(u1, u2, &tol()).unwrap();
            // Flipping one sign negates the last row, which swaps the two
            // cases; flipping both leaves them in place.
            let swap = s1 != s2;
            if let RndStatus::One(f) = rnd_status(&a, &tol()).unwrap() {
                for s in &f.solutions {
                    let (x1, x2) = (if s1 { -s.x1 } else { s.x1 }, if s2 { -s.x2 } else { s.x2 });
                    let case = match (s.case, swap) {
                        (c, false) => c,
                        (RealCase::Case1, true) => RealCase::Case2,
                        (RealCase::Case2, true) => RealCase::Case1,
                    };
                    let scale = a.frobenius_norm().max(1.0) * (x1.abs() + x2.abs()).max(1.0);
                    prop_assert!(real_equation_residual(&a, &q, case, x1, x2) <= tol().residual_tol * scale);
                    let b = build_real_completion(&a, &q, case, x1, x2, &tol()).unwrap();
                    prop_assert!(verify_normal(&b, &tol()).unwrap().normal);
                }
            }
        }
        // Orthogonal conjugation may flip either eigenvector sign, so the
        // case codes agree up to swapping the two systems.
        let o = random_orthogonal(n, &mut r);
        let b = &(&o.transpose() * &a) * &o;
        let (rep_b, _) = real_case_analysis(&b, &tol()).unwrap();
        let codes = |r: &RealCaseReport| (r.case1.code, r.case2.code);
        let (p1, p2) = codes(&rep);
        prop_assert!(codes(&rep_b) == (p1, p2) || codes(&rep_b) == (p2, p1));
        prop_assert_eq!(rep.rnd_one(), rep_b.rnd_one());
    }

    #[test]
    fn real_system_vectors_are_orthogonal(n in 2usize..=8, seed: u64) {
        let a = random_rank_condition_real(n, &mut rng(seed));
        let p = profile(&a, &tol()).unwrap();
        let at = a.transpose();
        let pr = |v: Vec<C64>| p.projection.mul_vec(&v);
        let u = pr(at.mul_vec(&p.u1));
        let v = pr(at.mul_vec(&p.u2));
        let w = pr(a.mul_vec(&p.u1));
        let q = pr(a.mul_vec(&p.u2));
        let scale = a.frobenius_norm().powi(2);
        for plus in [add_vec(&u, &q), add_vec(&v, &w)] {
            for minus in [sub_vec(&u, &q), sub_vec(&v, &w)] {
                prop_assert!(dot(&plus, &minus).norm() <= tol().residual_tol * scale);
            }
        }
    }

    #[test]
    fn guard_matches_direct_normality_test(n in 2usize..=8, seed: u64, real: bool) {
        let mut r = rng(seed);
        let spec = if real && n % 2 == 0 { random_spec_real_even(n, &mut r).unwrap() } else { random_spec_complex(n, &mut r) };
        let m = spec.compression();
        let mnm = &(&m * &spec.normal) * &m;
        let direct = verify_normal(&mnm, &tol()).unwrap();
        let guard = nonnormality_guard(&spec.normal, spec.t, &tol()).unwrap();
        // The two tests use different scales; they agree away from the boundary.
        if direct.relative > 1e-6 || direct.relative < 1e-13 {
            prop_assert_eq!(guard, direct.relative > 1e-6);
        }
    }

    #[test]
    fn generators_are_deterministic(n in 2usize..=8, seed: u64) {
        let (s1, a1) = sample_nd1_complex(n, seed, &tol()).unwrap();
        let (s2, a2) = sample_nd1_complex(n, seed, &tol()).unwrap();
        prop_assert_eq!(s1, s2);
        prop_assert_eq!(a1.entries(), a2.entries());
        if n % 2 == 0 {
            let (_, r1) = sample_rnd1_real_even(n, seed, &tol()).unwrap();
            let (_, r2) = sample_rnd1_real_even(n, seed, &tol()).unwrap();
            prop_assert_eq!(r1.entries(), r2.entries());
        }
        if let NdStatus::One(f) = nd_status(&a1, &tol()).unwrap() {
            prop_assert_eq!(f.sample(3, seed), f.sample(3, seed));
        }
    }

    #[test]
    fn t_variables_round_trip_exactly_on_dyadic_values(k in proptest::array::uniform4(-4096i32..4096)) {
        let v: Vec<f64> = k.iter().map(|&x| x as f64 / 64.0).collect();
        let pair = SolutionPair::new(c(v[0], v[1]), c(v[2], v[3]));
        let (t1, t2) = t_from_x(&pair);
        prop_assert_eq!(x_from_t(t1, t2), pair);
    }

    #[test]
    fn t_variables_round_trip_to_rounding(v in proptest::array::uniform4(-1e3f64..1e3)) {
        let pair = SolutionPair::new(c(v[0], v[1]), c(v[2], v[3]));
        let (t1, t2) = t_from_x(&pair);
        let back = x_from_t(t1, t2);
        let size = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        prop_assert!((back.x1 - pair.x1).norm() + (back.x2 - pair.x2).norm() <= 8.0 * f64::EPSILON * size);
    }

    #[test]
    fn chd_matches_nd_status(n in 2usize..=7, seed: u64) {
        let a = random_rank_condition_complex(n, &mut rng(seed));
        let h1 = (&a + &a.adjoint()).scale_re(0.5);
        let h2 = (&a - &a.adjoint()).scale(c(0.0, -0.5));
        let pair = chd_solve(&h1, &h2, &tol()).unwrap();
        prop_assert_eq!(pair.is_one(), nd_status(&a, &tol()).unwrap().is_one());
        if let CommuteStatus::One(f) = pair {
            for pc in f.sample(2, seed, &tol()).unwrap() {
                prop_assert!(pc.structure_residual() <= tol().residual_tol);
                let scale = pc.b1.frobenius_norm() * pc.b2.frobenius_norm();
                prop_assert!(pc.commutator_residual() <= tol().residual_tol * scale);
            }
        }
    }

    #[test]
    fn product_states_pass_the_peres_test(n in 1usize..=4, k in 1usize..=6, seed: u64) {
        let mut r = rng(seed);
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for _ in 0..k {
            let psi = gaussian(2, 1, &mut r).column(0);
            let phi = gaussian(n, 1, &mut r).column(0);
            let v: Vec<C64> = psi.iter().flat_map(|a| phi.iter().map(move |b| a * b)).collect();
            m = &m + &outer(&v, &v).scale_re(r.random_range(0.1..1.0));
        }
        prop_assert!(peres_test(&m, &tol()).unwrap().0);
    }

    #[test]
    fn separable_witnesses_are_sound(n in 1usize..=3, seed: u64) {
        let (b, cm) = random_rank_one_state(n, &mut rng(seed)).unwrap();
        let v = sep_check(&b, &cm, &tol()).unwrap();
        let Separability::Separable { witness: Some(w), .. } = &v.verdict else {
            return Err(TestCaseError::fail(format!("verdict {}", v.verdict.label())));
        };
        prop_assert_eq!(w.submatrix(0, 0, n, n), b.clone());
        prop_assert!(verify_normal(w, &tol()).unwrap().residual <= 1e-9);
        prop_assert!(witness_factor_residual(&b, &cm, &v).unwrap() <= 1e-9);
    }
}

#[test]
fn partial_transpose_is_an_involution() {
    let mut r = rng(3);
    let m = gaussian(6, 6, &mut r);
    assert_eq!(partial_transpose(&partial_transpose(&m).unwrap()).unwrap(), m);
}

#[test]
fn fixtures_keep_their_verdicts() {
    let t = tol();
    assert!(nd_status(&shift(4), &t).unwrap().is_one());
    assert!(!nd_status(&rank_condition_not_sufficient(), &t).unwrap().is_one());
    assert!(nd_status(&jordan_cell_3(), &t).unwrap().is_one());
    assert!(nd_status(&three_eigenvalues(), &t).unwrap().is_one());
    assert!(nd_status(&eigenvector_witness_fails(), &t).unwrap().is_one());
    let b = eigenvector_witness_fails_completion();
    assert!(verify_normal(&b, &t).unwrap().normal);
}

#[test]
fn refined_path_converges_on_clustered_spectra() {
    // The refined system runs eigensolvers on spectra clustered at ±1;
    // this sample once stalled the Jacobi sweep.
    let (_, a) = sample_nd1_complex(5, 10870841710083742796, &tol()).unwrap();
    assert!(nd_status_with(&a, &tol(), TableauMode::Refined).unwrap().is_one());
}
