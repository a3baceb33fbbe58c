use dicke_core::dicke::{self, DickeParams};
use dicke_core::gaussian::{self, GaussianState};
use dicke_core::measurements::{fi_homodyne, quadrature_distribution, HomodyneSetting, Subsystem};
use dicke_core::qfi::{qfi, state_derivative};
use dicke_oracle::{closed_form_moments, fi_gaussian_outcomes, fidelity_qfi};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn ground_state_matches_closed_forms() {
    for (w, w0) in [(1.0f64, 1.0f64), (1.0, 2.0), (0.5, 1.5)] {
        let lc = (w * w0).sqrt() / 2.0;
        for x in [0.02, 0.5, 0.9, 0.99, 1.01, 1.2, 3.0, 10.0] {
            let p = DickeParams::new(w, w0, x * lc, 100).unwrap();
            let gs = dicke::ground_state(&p).unwrap();
            let cf = closed_form_moments(&p);
            let scale = cf.cov.amax();
            assert!(
                (gs.cov() - &cf.cov).amax() < 1e-10 * scale,
                "ω={w} ω0={w0} λ/λc={x}"
            );
            assert!((gs.mean() - &cf.mean).amax() < 1e-10 * cf.mean.amax().max(1.0));
        }
    }
}

#[test]
fn numerical_derivative_matches_forward_mode() {
    for lam in [0.1, 0.3, 0.45, 0.6, 1.0, 2.0] {
        let p = DickeParams::resonant(lam);
        let d = state_derivative(&p, None).unwrap();
        let cf = closed_form_moments(&p);
        let scale = cf.dcov.amax();
        assert!((&d.dcov - &cf.dcov).amax() < 1e-6 * scale, "λ={lam}");
        if lam > 0.5 {
            assert!(
                (&d.dmean - &cf.dmean).amax() < 1e-6 * cf.dmean.amax(),
                "λ={lam}"
            );
        }
    }
}

#[test]
fn qfi_matches_fidelity_susceptibility() {
    for lam in [0.1, 0.3, 0.45, 0.6, 1.0, 2.0] {
        let p = DickeParams::resonant(lam);
        let delta = 1e-5;
        let a = dicke::ground_state(&p).unwrap();
        let b = dicke::ground_state(&p.with_lambda(lam + delta)).unwrap();
        let h_fid = fidelity_qfi(&a, &b, delta).unwrap();
        let h = qfi(&p).unwrap().qfi;
        assert!(rel(h, h_fid) < 1e-3, "λ={lam}: {h} vs {h_fid}");
    }
}

#[test]
fn homodyne_closed_form_matches_quadrature() {
    for lam in [0.2, 0.45, 0.55, 1.5] {
        for phi in [0.0, 0.7, 1.3, std::f64::consts::FRAC_PI_2] {
            for target in [Subsystem::Radiation, Subsystem::Atoms] {
                let p = DickeParams::resonant(lam);
                let fi = fi_homodyne(&p, &HomodyneSetting { phi, target }).unwrap();
                let moments = |l: f64| {
                    let gs = dicke::ground_state(&p.with_lambda(l)).unwrap();
                    let red = gaussian::partial_trace(&gs, &[target.mode()]).unwrap();
                    quadrature_distribution(&red, phi).unwrap()
                };
                let h = 1e-3 * (lam - 0.5f64).abs();
                let oracle = fi_gaussian_outcomes(moments, lam, h, 60).unwrap();
                assert!(
                    rel(fi, oracle) < 1e-6,
                    "λ={lam} φ={phi} {target:?}: {fi} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn atomic_weak_coupling_limit_swaps_frequencies() {
    // FI/H ≈ 2[a + (ω + ω0) cos 2φ]² λ² / (a² (ω + ω0)²), a = ω for the
    // field and a = ω0 for the atoms
    let (w, w0, lam) = (1.0f64, 2.0f64, 0.01f64);
    let p = DickeParams::new(w, w0, lam, 100).unwrap();
    let h = qfi(&p).unwrap().qfi;
    let table = |a: f64, phi: f64| {
        2.0 * (a + (w + w0) * (2.0 * phi).cos()).powi(2) * lam * lam / (a * a * (w + w0).powi(2))
    };
    for phi in [0.0, std::f64::consts::FRAC_PI_4] {
        let rad = fi_homodyne(&p, &HomodyneSetting::radiation(phi)).unwrap() / h;
        let atom = fi_homodyne(&p, &HomodyneSetting::atoms(phi)).unwrap() / h;
        assert!(
            rel(rad, table(w, phi)) < 0.05,
            "φ={phi}: {rad} vs {}",
            table(w, phi)
        );
        assert!(
            rel(atom, table(w0, phi)) < 0.05,
            "φ={phi}: {atom} vs {}",
            table(w0, phi)
        );
    }
}

#[test]
fn quarter_turn_homodyne_is_not_optimal_at_criticality() {
    let mut samples = Vec::new();
    for d in [1e-2, 3e-3, 1e-3, 3e-4] {
        let p = DickeParams::resonant(0.5 - d);
        let fi = fi_homodyne(&p, &HomodyneSetting::radiation(std::f64::consts::FRAC_PI_2)).unwrap();
        let ratio = fi / qfi(&p).unwrap().qfi;
        assert!(ratio < 0.999, "|λ−λc|={d}: {ratio}");
        samples.push((0.5 - d, fi));
    }
    let fit = dicke_core::fit::fit_power_law(&samples, 0.5).unwrap();
    assert!(fit.exponent < 0.0);
}

#[test]
fn pure_two_mode_states_have_unit_overlap_only_with_themselves() {
    let a = dicke::ground_state(&DickeParams::resonant(0.4)).unwrap();
    let b = dicke::ground_state(&DickeParams::resonant(0.41)).unwrap();
    let same = dicke_oracle::pure_overlap(&a, &a).unwrap();
    assert!((same - 1.0).abs() < 1e-12);
    let ab = dicke_oracle::pure_overlap(&a, &b).unwrap();
    let ba = dicke_oracle::pure_overlap(&b, &a).unwrap();
    assert!(ab < 1.0 && (ab - ba).abs() < 1e-15);
    assert!(dicke_oracle::pure_overlap(&a, &GaussianState::vacuum(2)).unwrap() < 1.0);
}
