//! Cross-module properties of the first-order pipeline and the oracle.

use gravdeco::oracle::{compare, exact_ground_state};
use gravdeco::perturbation::{build_gamma, deficits, ground_state_energy, mode_report};
use gravdeco::{ModeParams, QuadratureSpec, TruncationSpec};
use proptest::prelude::*;

fn trunc(n_max: usize) -> TruncationSpec {
    TruncationSpec::new(n_max, 1e-10).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn report_bounds(log_omega in -8.0f64..0.3, lc in 0.3f64..4.0) {
        let p = ModeParams::new(10f64.powf(log_omega), lc).unwrap();
        let r = mode_report(&p, &trunc(16), &QuadratureSpec::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.fidelity));
        prop_assert!(r.purity <= 1.0 && r.purity >= 1.0 / 17.0);
        prop_assert!(r.fidelity * r.fidelity <= r.purity);
        prop_assert!(r.one_minus_eta >= 0.0 && r.one_minus_fidelity >= 0.0);
        prop_assert!(r.z_squared >= 1.0);
    }

    #[test]
    fn deficits_shrink_with_lc_at_weak_coupling(log_omega in -4.0f64..-1.0, lc in 0.3f64..3.0) {
        let w = 10f64.powf(log_omega);
        let a = mode_report(&ModeParams::new(w, lc).unwrap(), &trunc(16), &QuadratureSpec::default()).unwrap();
        let b = mode_report(&ModeParams::new(w, 1.5 * lc).unwrap(), &trunc(16), &QuadratureSpec::default()).unwrap();
        prop_assert!(b.one_minus_eta < a.one_minus_eta);
        prop_assert!(b.one_minus_fidelity < a.one_minus_fidelity);
    }
}

#[test]
fn fidelity_decreases_along_the_weak_coupling_axis() {
    let mut last = 1.0;
    for i in 0..=24 {
        let w = 10f64.powf(-3.0 + 0.125 * i as f64);
        let r = mode_report(&ModeParams::new(w, 1.0).unwrap(), &trunc(24), &QuadratureSpec::default()).unwrap();
        assert!(r.fidelity < last, "omega {w}");
        last = r.fidelity;
    }
}

#[test]
fn truncation_change_falls_with_cutoff() {
    let p = ModeParams::new(0.1, 1.0).unwrap();
    let spec = QuadratureSpec::default();
    let changes: Vec<f64> = [8, 16, 32, 64].iter().map(|&n| build_gamma(&p, &trunc(n), &spec).unwrap().truncation_change()).collect();
    assert!(changes.windows(2).all(|w| w[1] < w[0]), "{changes:?}");
    let g = build_gamma(&ModeParams::new(1.0, 1.0).unwrap(), &TruncationSpec::new(128, 1e-10).unwrap(), &spec).unwrap();
    assert!(g.converged());
    let coarse = deficits(&build_gamma(&ModeParams::new(1.0, 1.0).unwrap(), &trunc(64), &spec).unwrap());
    let fine = deficits(&g);
    assert!(((fine.one_minus_eta - coarse.one_minus_eta) / fine.one_minus_eta).abs() < 1e-8);
}

#[test]
fn energy_correction_is_second_order() {
    // ℰ₀₀ - E_exact is the second-order shift, ∝ x⁴ ln²(1/x) at small x
    let spec = QuadratureSpec::default();
    let mut points = Vec::new();
    for w in [0.01, 0.02, 0.05] {
        let p = ModeParams::new(w, 1.0).unwrap();
        let e = exact_ground_state(&p, &trunc(24), &spec).unwrap();
        let gap = ground_state_energy(&p) - e.energy;
        assert!(gap > 0.0);
        points.push((w.ln(), gap.ln(), gap / (w.powi(4) * w.ln().powi(2))));
    }
    let slope = (points[2].1 - points[0].1) / (points[2].0 - points[0].0);
    assert!((3.0..4.0).contains(&slope), "slope {slope}");
    let c: Vec<f64> = points.iter().map(|p| p.2).collect();
    assert!(c.iter().all(|&v| v > 0.5 * c[0] && v < 2.0 * c[0]), "{c:?}");
}

#[test]
fn exact_energy_is_stable_under_basis_growth() {
    let p = ModeParams::new(0.01, 1.0).unwrap();
    let spec = QuadratureSpec::default();
    let a = exact_ground_state(&p, &trunc(32), &spec).unwrap();
    let b = exact_ground_state(&p, &trunc(40), &spec).unwrap();
    assert!((a.energy - b.energy).abs() <= 1e-9, "{} vs {}", a.energy, b.energy);
    assert!(b.energy <= a.energy + 1e-15);
}

#[test]
fn comparison_at_weak_coupling() {
    let r = compare(&ModeParams::new(0.01, 2.0).unwrap(), &trunc(24), &QuadratureSpec::default()).unwrap();
    assert!(r.passes(&Default::default()), "{r:?}");
    assert!(r.state_infidelity <= 1e-8);
    assert!(r.energy_gap >= 0.0);
}
