use proptest::prelude::*;
use radcomp::analytic::{
    bracket_polynomial, bracket_polynomial_min, coulomb_energy, ho_energy, level_difference,
    nonrel_rest_coulomb, salpeter_coulomb_bound, salpeter_squared_gap, tangent_harmonic_difference,
    AnalyticInputs,
};
use radcomp::PotentialSpec;

/// Golden-section minimum of a unimodal function on [lo, hi].
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn bracket_minimum_against_search_and_dense_grid() {
    for n in 0..5 {
        for l in 0..5 {
            let (x_star, value) = bracket_polynomial_min::<f64>(n, l);
            let f = |x| bracket_polynomial(x, n, l);
            let found = golden_min(f, 1e-6, 50.0);
            assert!((found - x_star).abs() < 1e-6, "({n}, {l})");
            assert!((f(x_star) - value).abs() < 1e-9 * value.abs().max(1.0));
            let dense = (1..=200_000).map(|k| f(k as f64 * 5e-4)).fold(f64::INFINITY, f64::min);
            assert!(dense >= value - 1e-9 && dense - value < 1e-4 * value.max(1.0));
            assert!(value > 0.0);
        }
    }
}

#[test]
fn level_difference_from_the_two_closed_forms() {
    // Tangent harmonic = λr² + c with λ = κ/(2r₀³), c = −3κ/(2r₀).
    for (kappa, mu, r0) in [(1.0f64, 1.0f64, 1.0f64), (0.7, 2.3, 0.4), (3.0, 0.5, 2.0)] {
        let lambda = kappa / (2.0 * r0 * r0 * r0);
        let shift = -1.5 * kappa / r0;
        for n in 0..4 {
            for l in 0..4 {
                let direct = ho_energy(mu, lambda, n, l) + shift - coulomb_energy(mu, kappa, n, l);
                let closed = level_difference(kappa, mu, r0, n, l);
                assert!((direct - closed).abs() < 1e-12 * direct.abs().max(1.0));
                assert!(closed > 0.0);
            }
        }
    }
    assert!((level_difference(1.0f64, 1.0, 1.0, 0, 0) - 0.5).abs() < 1e-15);
}

#[test]
fn tangent_harmonic_touches_coulomb_at_r0() {
    for (kappa, r0) in [(1.0f64, 1.0f64), (0.3, 2.5)] {
        let th = PotentialSpec::TangentHarmonic { kappa, r0 };
        let c = PotentialSpec::Coulomb { kappa };
        let diff = |r: f64| th.eval(r) - c.eval(r);
        assert!(diff(r0).abs() < 1e-14);
        let h = 1e-5;
        let slope = (diff(r0 + h) - diff(r0 - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-8);
        assert_eq!(tangent_harmonic_difference(kappa, r0, r0), 0.0);
    }
}

#[test]
fn salpeter_boundary_and_ordering() {
    for n in 0..3 {
        for l in 0..3 {
            let qc = (n + l + 1) as f64;
            let edge = salpeter_coulomb_bound(1.0, 2.0 * qc, n, l).unwrap();
            assert!(edge.at_boundary && edge.energy == 0.0);
            assert!(salpeter_coulomb_bound(1.0, 2.0 * qc + 1e-9, n, l).is_err());
        }
    }
}

#[test]
fn inputs_recompute_x() {
    let inp = AnalyticInputs::new(1.5f64, 1.0, 2.0, 0.5, 3.0, 1, 2).unwrap();
    assert!((inp.x() - 3.0).abs() < 1e-15);
    assert!(AnalyticInputs::new(1.0f64, -1.0, 1.0, 1.0, 1.0, 0, 0).is_err());
    assert!(AnalyticInputs::new(1.0f64, 1.0, 1.0, f64::NAN, 1.0, 0, 0).is_err());
}

proptest! {
    #[test]
    fn salpeter_gap_identity(m in 0.1f64..10.0, frac in 0.01f64..0.99, n in 0usize..5, l in 0usize..5) {
        let kappa = frac * 2.0 * (n + l + 1) as f64;
        let bound = salpeter_coulomb_bound(m, kappa, n, l).unwrap().energy;
        let upper = nonrel_rest_coulomb(m, kappa, n, l);
        let gap = upper * upper - bound * bound;
        let want = salpeter_squared_gap(m, kappa, n, l);
        // The subtraction cancels: error scales with the squares, not the gap.
        prop_assert!((gap - want).abs() < 1e-14 * upper * upper);
        prop_assert!(bound < upper);
    }

    #[test]
    fn level_difference_is_positive(kappa in 0.01f64..10.0, mu in 0.01f64..10.0, r0 in 0.01f64..10.0,
                                    n in 0usize..6, l in 0usize..6) {
        prop_assert!(level_difference(kappa, mu, r0, n, l) > 0.0);
    }
}
