use proptest::prelude::*;
use radcomp::linalg::{eigvalsh, SymMatrix};
use radcomp::{p2_matrix, potential_matrix, r2_matrix, BasisSpec, RadialBasis};

fn square(m: &SymMatrix<f64>) -> SymMatrix<f64> {
    let n = m.dim();
    let full = m.matmul(m);
    SymMatrix::from_fn(n, |i, j| full[i * n + j])
}

#[test]
fn quadratic_polynomial_in_r2_is_exact() {
    let bs = BasisSpec::new(1, 10, 0.9).unwrap();
    let r2 = r2_matrix(&bs);
    let v = potential_matrix(&bs, |r: f64| 0.3 - 2.0 * r * r).unwrap();
    let want = &(&SymMatrix::identity(10) * 0.3) + &(&r2 * -2.0);
    assert!((&v - &want).max_abs() < 1e-11);
}

#[test]
fn quartic_polynomial_matches_away_from_truncation_edge() {
    // r⁴ couples states two apart, so only entries touching the last basis
    // state see the truncation.
    let n = 12;
    let bs = BasisSpec::new(0, n, 1.3).unwrap();
    let v = potential_matrix(&bs, |r: f64| 1.0 + r.powi(2) + 0.5 * r.powi(4)).unwrap();
    let bigger = r2_matrix(&bs.with_size(n + 2).unwrap());
    let r4_exact = square(&bigger).leading(n);
    let want = &(&SymMatrix::identity(n) + &r2_matrix(&bs)) + &(&r4_exact * 0.5);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            assert!((v.get(i, j) - want.get(i, j)).abs() < 1e-9, "({i}, {j})");
        }
    }
    let exact_power = RadialBasis::new(0, n).unwrap().power_matrix(1.3, 4.0).unwrap();
    assert!((&exact_power - &r4_exact).max_abs() < 1e-9 * r4_exact.max_abs());
}

#[test]
fn coulomb_ground_level_drifts_toward_exact_value() {
    let ground = |n: usize| {
        let bs = BasisSpec::new(0, n, 1.0).unwrap();
        let h = &(&p2_matrix(&bs) * 0.5) + &potential_matrix(&bs, |r: f64| -1.0 / r).unwrap();
        eigvalsh(&h).unwrap()[0]
    };
    let errs: Vec<f64> = [10, 30, 90].iter().map(|&n| (ground(n) + 0.5).abs()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 2e-2, "{errs:?}");
}

#[test]
fn exact_power_elements_match_polynomials() {
    let rb = RadialBasis::new(2, 8).unwrap();
    let bs = BasisSpec::new(2, 8, 0.6).unwrap();
    let r2 = r2_matrix(&bs);
    assert!((&rb.power_matrix(0.6, 2.0).unwrap() - &r2).max_abs() < 1e-12);
    let r4 = square(&r2_matrix(&bs.with_size(10).unwrap())).leading(8);
    assert!((&rb.power_matrix(0.6, 4.0).unwrap() - &r4).max_abs() < 1e-11);
}

#[test]
fn exact_inverse_radius_against_quadrature() {
    // ⟨i|1/r|j⟩ by a fine midpoint rule in x = r²/b² on the α-weighted
    // Laguerre functions, built from their three-term recurrence.
    let (l, n, b) = (0usize, 5usize, 1.0f64);
    let alpha = l as f64 + 0.5;
    let exact = RadialBasis::new(l, n).unwrap().power_matrix(b, -1.0).unwrap();
    let gamma_a1 = 0.5 * std::f64::consts::PI.sqrt(); // Γ(3/2)
    let steps = 400_000;
    let upper = 80.0;
    let h = upper / steps as f64;
    let mut acc = vec![0.0; n * n];
    for s in 0..steps {
        let x = (s as f64 + 0.5) * h;
        let mut q = vec![1.0 / gamma_a1.sqrt(); n];
        if n > 1 {
            q[1] = (alpha + 1.0 - x) * q[0] / (alpha + 1.0).sqrt();
        }
        for k in 1..n - 1 {
            let kf = k as f64;
            q[k + 1] = ((2.0 * kf + alpha + 1.0 - x) * q[k] - (kf * (kf + alpha)).sqrt() * q[k - 1])
                / ((kf + 1.0) * (kf + 1.0 + alpha)).sqrt();
        }
        let w = x.powf(alpha) * (-x).exp() / (b * x.sqrt()) * h;
        for i in 0..n {
            for j in 0..n {
                acc[i * n + j] += w * q[i] * q[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert!((exact.get(i, j) - acc[i * n + j]).abs() < 1e-6, "({i}, {j})");
        }
    }
}

proptest! {
    #[test]
    fn scaling_covariance(l in 0usize..5, n in 2usize..20, b in 0.05f64..20.0) {
        let bs = BasisSpec::new(l, n, b).unwrap();
        let unit = bs.with_b(1.0).unwrap();
        let (r2, r2u) = (r2_matrix(&bs), r2_matrix(&unit));
        let (p2, p2u) = (p2_matrix(&bs), p2_matrix(&unit));
        for i in 0..n {
            for j in 0..n {
                prop_assert!((r2.get(i, j) - b * b * r2u.get(i, j)).abs() <= 1e-14 * r2.max_abs());
                prop_assert!((p2.get(i, j) - p2u.get(i, j) / (b * b)).abs() <= 1e-14 * p2.max_abs());
            }
        }
    }

    #[test]
    fn mesh_positivity(l in 0usize..8, n in 2usize..60, b in 0.01f64..100.0) {
        let bs = BasisSpec::new(l, n, b).unwrap();
        prop_assert!(eigvalsh(&r2_matrix(&bs)).unwrap()[0] > 0.0);
        prop_assert!(eigvalsh(&p2_matrix(&bs)).unwrap()[0] > 0.0);
        let rb = RadialBasis::new(l, n).unwrap();
        prop_assert!(rb.radial_mesh(b).iter().all(|&r| r > 0.0));
    }

    #[test]
    fn cached_block_matches_free_functions(l in 0usize..4, n in 2usize..16, b in 0.2f64..5.0) {
        let bs = BasisSpec::new(l, n, b).unwrap();
        let rb = RadialBasis::new(l, n).unwrap();
        let v = |r: f64| (-r).exp() * r;
        let diff = &rb.potential_matrix(b, v).unwrap() - &potential_matrix(&bs, v).unwrap();
        prop_assert!(diff.max_abs() == 0.0);
    }
}
