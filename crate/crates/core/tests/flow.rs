use proptest::prelude::*;
use radcomp::analytic::{level_difference, tangent_harmonic_difference};
use radcomp::flow::{
    flow_matrices, linear_grid, log_grid, uniform_grid, worst_spectral_violation, DEFAULT_TOLERANCE,
};
use radcomp::linalg::SymMatrix;
use radcomp::{
    flow_levels, ordering_report, pointwise_ordering, solve_levels, Derivative, FlowSpec, Hamiltonian,
    KineticSpec, OscillatorLength, PotentialSpec,
};

fn coulomb_to_tangent() -> (Hamiltonian<f64>, Hamiltonian<f64>) {
    let k = KineticSpec::NonRel { mu: 1.0 };
    (
        Hamiltonian::new(k.clone(), PotentialSpec::Coulomb { kappa: 1.0 }).unwrap(),
        Hamiltonian::new(k, PotentialSpec::TangentHarmonic { kappa: 1.0, r0: 1.0 }).unwrap(),
    )
}

fn ground_flow(points: usize) -> FlowSpec<f64> {
    let (h1, h2) = coulomb_to_tangent();
    FlowSpec::new(h1, h2, 40, OscillatorLength::Optimized, uniform_grid(points), vec![(0, 0)]).unwrap()
}

#[test]
fn endpoints_reproduce_direct_solves_exactly() {
    let (h1, h2) = coulomb_to_tangent();
    let levels = vec![(0, 0), (1, 0), (0, 1)];
    for length in [OscillatorLength::Fixed(0.8), OscillatorLength::Optimized] {
        let spec = FlowSpec::new(h1.clone(), h2.clone(), 30, length, uniform_grid(11), levels.clone()).unwrap();
        let flow = flow_levels(&spec).unwrap();
        for track in &flow.tracks {
            let basis = spec.block(track.l).unwrap().basis;
            let first = solve_levels(&h1.kinetic, &h1.potential, &basis, track.n + 1).unwrap();
            let second = solve_levels(&h2.kinetic, &h2.potential, &basis, track.n + 1).unwrap();
            assert_eq!(track.energy[0], first[track.n].energy);
            assert_eq!(*track.energy.last().unwrap(), second[track.n].energy);
        }
    }
}

#[test]
fn identical_endpoints_give_a_flat_flow() {
    let (h1, _) = coulomb_to_tangent();
    let spec = FlowSpec::new(h1.clone(), h1, 20, OscillatorLength::Fixed(1.0), uniform_grid(21), vec![(0, 0), (2, 0)])
        .unwrap();
    assert_eq!(spec.psd_gap().unwrap(), 0.0);
    let flow = flow_levels(&spec).unwrap();
    for t in &flow.tracks {
        assert!(t.hf_expectation.iter().all(|&x| x == 0.0));
        assert!(t.energy.iter().all(|&e| (e - t.energy[0]).abs() < 1e-12));
        assert!(t.max_residual() < 1e-10);
    }
    let report = ordering_report(&spec, DEFAULT_TOLERANCE).unwrap();
    assert!(report.hypothesis_holds() && report.all_ordered());
}

#[test]
fn coulomb_to_tangent_harmonic_ground_level() {
    let flow = flow_levels(&ground_flow(101)).unwrap();
    let t = &flow.tracks[0];
    assert!((t.energy[0] + 0.5).abs() < 1e-3);
    assert!(t.energy[100].abs() < 1e-3);
    assert!((t.endpoint_difference() - level_difference(1.0, 1.0, 1.0, 0, 0)).abs() < 2e-3);
    assert!(t.energy.windows(2).all(|w| w[1] > w[0]));
    assert!(!t.has_degeneracy());
}

#[test]
fn richardson_refinement_meets_residual_bound() {
    let spec = ground_flow(101).with_derivative(Derivative::Richardson { levels: 4 }).unwrap();
    let flow = flow_levels(&spec).unwrap();
    assert!(flow.max_residual() < 1e-5, "{}", flow.max_residual());
    assert!(spec.with_derivative(Derivative::Richardson { levels: 0 }).is_err());
}

#[test]
fn grid_residual_is_second_order_at_fixed_nodes() {
    let base = ground_flow(11);
    let mut logs = Vec::new();
    for points in [11usize, 101, 1001] {
        let flow = flow_levels(&base.with_grid(uniform_grid(points)).unwrap()).unwrap();
        let stride = (points - 1) / 10;
        let r = flow.tracks[0].residuals();
        let worst = (1..10).map(|j| r[j * stride]).fold(0.0, f64::max);
        logs.push(worst.log10());
    }
    // Least-squares slope against log10 h = −1, −2, −3.
    let slope = (logs[0] - logs[2]) / 2.0;
    assert!((slope - 2.0).abs() < 0.2, "{logs:?}");
}

#[test]
fn potential_and_kinetic_comparisons_are_ordered() {
    let (h1, h2) = coulomb_to_tangent();
    let levels = vec![(0, 0), (1, 0), (0, 1), (0, 2)];
    let spec = FlowSpec::new(h1, h2, 40, OscillatorLength::Optimized, uniform_grid(51), levels).unwrap();
    let report = ordering_report(&spec, DEFAULT_TOLERANCE).unwrap();
    assert!(report.psd_gap >= -1e-9);
    assert!(report.all_ordered(), "{report:?}");

    let coulomb = PotentialSpec::Coulomb { kappa: 0.5 };
    let salpeter = Hamiltonian::new(KineticSpec::Salpeter { m: 1.0 }, coulomb.clone()).unwrap();
    let two_body = Hamiltonian::new(KineticSpec::NonRelTwoBody { m: 1.0 }, coulomb).unwrap();
    let spec = FlowSpec::new(salpeter, two_body, 40, OscillatorLength::Optimized, uniform_grid(51), vec![(0, 0), (1, 0), (0, 1)])
        .unwrap();
    let report = ordering_report(&spec, DEFAULT_TOLERANCE).unwrap();
    assert!(report.psd_gap >= -1e-9);
    assert!(report.all_ordered());
    for v in &report.levels {
        assert!(v.second_energy > v.first_energy);
    }
}

#[test]
fn reversed_comparison_fails_hypothesis() {
    let (h1, h2) = coulomb_to_tangent();
    let spec = FlowSpec::new(h2, h1, 30, OscillatorLength::Fixed(1.0), uniform_grid(11), vec![(0, 0)]).unwrap();
    let report = ordering_report(&spec, DEFAULT_TOLERANCE).unwrap();
    assert!(!report.hypothesis_holds());
    assert!(!report.all_ordered());
}

#[test]
fn pointwise_potential_comparison() {
    let grid: Vec<f64> = log_grid(1e-3, 50.0, 200);
    let coulomb = PotentialSpec::Coulomb { kappa: 1.0f64 };
    let tangent = PotentialSpec::TangentHarmonic { kappa: 1.0, r0: 1.0 };
    let v = pointwise_ordering(|r| coulomb.eval(r), |r| tangent.eval(r), &grid, 0.0).unwrap();
    assert!(v.ordered && v.min_difference >= 0.0);
    assert!((v.at - 1.0).abs() < 0.05, "{}", v.at);
    for &r in &grid {
        let d = tangent.eval(r) - coulomb.eval(r);
        assert!((d - tangent_harmonic_difference(1.0, 1.0, r)).abs() < 1e-9 * d.abs().max(1.0));
    }
}

#[test]
fn pointwise_kinetic_comparison() {
    let grid = linear_grid(0.0, 50.0, 501);
    let (salpeter, two_body) = (KineticSpec::Salpeter { m: 1.0 }, KineticSpec::NonRelTwoBody { m: 1.0 });
    let v = pointwise_ordering(|p: f64| salpeter.eval(p * p), |p: f64| two_body.eval(p * p), &grid, 0.0).unwrap();
    assert!(v.ordered);
    assert_eq!(v.min_difference, 0.0);
    assert_eq!(v.at, 0.0);
    let same = pointwise_ordering(|p: f64| p.sin(), |p: f64| p.sin(), &grid, 0.0).unwrap();
    assert_eq!(same.min_difference, 0.0);
}

fn pair_strategy() -> impl Strategy<Value = (SymMatrix<f64>, SymMatrix<f64>)> {
    (prop::collection::vec(-1.0f64..1.0, 30 * 30), prop::collection::vec(-1.0f64..1.0, 30 * 30)).prop_map(|(h, p)| {
        let n = 30;
        let h = SymMatrix::from_fn(n, |i, j| h[i.min(j) * n + i.max(j)]);
        // PᵀP is positive semidefinite by construction.
        let ptp = SymMatrix::from_fn(n, |i, j| (0..n).map(|k| p[k * n + i] * p[k * n + j]).sum());
        let shifted = &h + &ptp;
        (h, shifted)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn positive_perturbation_orders_every_eigenvalue((h, shifted) in pair_strategy()) {
        prop_assert!(worst_spectral_violation(&h, &shifted).unwrap() <= 1e-10);
        let flow = flow_matrices(&h, &shifted, &uniform_grid(21), &[0, 7, 29], Derivative::Grid).unwrap();
        prop_assert!(flow.psd_gap >= -1e-9);
        prop_assert!(flow.min_hf_expectation() >= -1e-9);
        prop_assert!(flow.is_monotone(1e-10));
    }
}
