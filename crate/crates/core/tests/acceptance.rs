//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::time::Instant;

use dicke_core::dicke::{self, DickeParams};
use dicke_core::fit::{fit_power_law, log_spaced};
use dicke_core::gaussian::{log_negativity, purity, symplectic_form, SymplecticTransform};
use dicke_core::measurements::{
    fi_homodyne, fi_photon_counting, mean_photon_decomposition, photon_distribution, Cutoff,
    DstsParams, HomodyneSetting, Subsystem,
};
use dicke_core::qfi::{qfi, sld_coefficients, sld_local_frame};
use dicke_core::Result;
use dicke_oracle::{build_dsts_fock_adaptive, closed_form_moments, fidelity_qfi};
use nalgebra::DMatrix;
use rand::{rngs::StdRng, Rng, SeedableRng};

const LC: f64 = 0.5;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn ratio_hom(lam: f64, phi: f64, target: Subsystem) -> Result<f64> {
    let p = DickeParams::resonant(lam);
    Ok(fi_homodyne(&p, &HomodyneSetting { phi, target })? / qfi(&p)?.qfi)
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for above in [false, true] {
        let grid = log_spaced(LC, 1e-3, 1e-2, 11, above);
        let mut total = Vec::new();
        let mut quadratic = Vec::new();
        for &lam in &grid {
            let h = qfi(&DickeParams::resonant(lam))?;
            total.push((lam, h.qfi));
            quadratic.push((lam, h.quadratic_term));
        }
        let fit = fit_power_law(&total, LC)?;
        let quad = fit_power_law(&quadratic, LC)?;
        let ok = (fit.exponent + 2.0).abs() <= 0.05 && (fit.prefactor / 0.125 - 1.0).abs() <= 0.05;
        pass &= ok;
        detail.push(format!(
            "{}: exponent {:.4} prefactor {:.5} (quadratic term alone: {:.4}, {:.5})",
            if above { "superradiant" } else { "normal" },
            fit.exponent,
            fit.prefactor,
            quad.exponent,
            quad.prefactor
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 1.0;
    detail.push(format!("{elapsed:.3} s"));
    Ok(Outcome::new(pass, detail.join("; ")))
}

fn criterion_2() -> Result<Outcome> {
    let small = qfi(&DickeParams::resonant(1e-4))?.qfi;
    let large = qfi(&DickeParams::resonant(50.0))?.qfi;
    let pass = (small - 1.0).abs() <= 1e-3 && (large / 400.0 - 1.0).abs() <= 0.01;
    Ok(Outcome::new(
        pass,
        format!("H(1e-4) = {small:.8} (target 1), H(50) = {large:.5} (target 400)"),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let mut pass = true;
    let mut worst = (f64::INFINITY, String::new());
    let mut best = f64::NEG_INFINITY;
    for lam in [LC - 1e-3, LC + 1e-3] {
        for phi in [0.0, FRAC_PI_3] {
            for target in [Subsystem::Radiation, Subsystem::Atoms] {
                let r = ratio_hom(lam, phi, target)?;
                pass &= (0.99..=1.0 + 1e-6).contains(&r);
                best = best.max(r);
                if r < worst.0 {
                    worst = (r, format!("λ={lam} φ={phi:.4} {target:?}"));
                }
            }
        }
    }
    Ok(Outcome::new(
        pass,
        format!(
            "FI/H ranges over [{:.4}, {:.4}]; minimum at {}",
            worst.0, best, worst.1
        ),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for phi in [0.0, FRAC_PI_6, FRAC_PI_3] {
        let r = ratio_hom(50.0, phi, Subsystem::Radiation)?;
        let target = phi.cos().powi(2);
        pass &= (r / target - 1.0).abs() <= 0.01;
        parts.push(format!("φ={phi:.4}: {r:.5} vs {target:.5}"));
    }
    let atoms = ratio_hom(50.0, 0.0, Subsystem::Atoms)?;
    pass &= atoms < 1e-3;
    parts.push(format!("atoms {atoms:.2e}"));
    Ok(Outcome::new(pass, parts.join(", ")))
}

fn criterion_5() -> Result<Outcome> {
    let lam = 1e-2;
    let (w, w0) = (1.0f64, 1.0f64);
    let mut pass = true;
    let mut parts = Vec::new();
    for phi in [0.0, FRAC_PI_4] {
        for (target, a) in [(Subsystem::Radiation, w), (Subsystem::Atoms, w0)] {
            let expected = 2.0 * (a + (w + w0) * (2.0 * phi).cos()).powi(2) * lam * lam
                / (a * a * (w + w0).powi(2));
            let r = ratio_hom(lam, phi, target)?;
            pass &= (r / expected - 1.0).abs() <= 0.05;
            parts.push(format!("φ={phi:.4} {target:?}: {r:.4e} vs {expected:.4e}"));
        }
    }
    Ok(Outcome::new(pass, parts.join(", ")))
}

fn criterion_6() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20_240_611);
    let (mut max_dp, mut max_norm, mut max_mean) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let p = DstsParams::new(
            rng.random_range(0.0..=2.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-2.0..=2.0),
        )?;
        let state = p.to_state()?;
        let mean = mean_photon_decomposition(&state)?.total;
        let fock = build_dsts_fock_adaptive(&p, 31)
            .map_err(|e| dicke_core::Error::InvalidParameter(e.to_string()))?
            .diagonal();
        let fixed = photon_distribution(&state, Cutoff::Fixed(30))?;
        for (p, f) in fixed.probs.iter().zip(&fock).take(31) {
            max_dp = max_dp.max((p - f).abs());
        }
        let full = photon_distribution(&state, Cutoff::default())?;
        max_norm = max_norm.max((full.total() - 1.0).abs());
        max_mean = max_mean.max(((full.mean() - mean) / mean.max(1e-300)).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = max_dp <= 1e-8 && max_norm <= 1e-8 && max_mean <= 1e-6 && elapsed < 30.0;
    Ok(Outcome::new(
        pass,
        format!(
            "max |Δp| {max_dp:.2e}, max |Σp − 1| {max_norm:.2e}, max rel ⟨N⟩ error {max_mean:.2e}, {elapsed:.2} s"
        ),
    ))
}

fn photon_ratio(lam: f64) -> Result<f64> {
    let p = DickeParams::resonant(lam);
    Ok(fi_photon_counting(&p)?.fi / qfi(&p)?.qfi)
}

fn criterion_7() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for lam in [0.49, 0.51] {
        let r = photon_ratio(lam)?;
        pass &= r >= 0.9;
        parts.push(format!("FI/H({lam}) = {r:.4}"));
    }
    for sign in [-1.0, 1.0] {
        let ratios = [0.1, 0.05, 0.02, 0.01]
            .iter()
            .map(|d| photon_ratio(LC + sign * d))
            .collect::<Result<Vec<_>>>()?;
        let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
        pass &= monotone;
        parts.push(format!(
            "{} side over |λ−λc| = 0.1, 0.05, 0.02, 0.01: {} ({})",
            if sign < 0.0 { "normal" } else { "superradiant" },
            ratios
                .iter()
                .map(|r| format!("{r:.4}"))
                .collect::<Vec<_>>()
                .join(", "),
            if monotone {
                "increasing"
            } else {
                "not increasing"
            }
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn criterion_8() -> Result<Outcome> {
    let delta = 1e-5;
    let mut worst = 0.0f64;
    for lam in [0.1, 0.3, 0.45, 0.6, 1.0, 2.0] {
        let p = DickeParams::resonant(lam);
        let a = dicke::ground_state(&p)?;
        let b = dicke::ground_state(&p.with_lambda(lam + delta))?;
        let h_fid = fidelity_qfi(&a, &b, delta)
            .map_err(|e| dicke_core::Error::InvalidParameter(e.to_string()))?;
        let h = qfi(&p)?.qfi;
        worst = worst.max(((h - h_fid) / h).abs());
    }
    Ok(Outcome::new(
        worst < 1e-3,
        format!("max |H − H_fid|/H = {worst:.2e}"),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let omega = symplectic_form(2);
    let (mut purity_err, mut sympl_err, mut nu_max, mut cf_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for i in 0..200 {
        let lam = 2.0 * i as f64 / 199.0;
        if (lam - LC).abs() < 1e-4 {
            continue;
        }
        count += 1;
        let p = DickeParams::resonant(lam);
        let state = dicke::ground_state(&p)?;
        purity_err = purity_err.max((purity(state.cov())? - 1.0).abs());
        let chain = dicke::symplectic_chain(&dicke::derive(&p)?)?;
        for t in [chain.diagonalizing()?, chain.state_preparation()?] {
            let m = t.matrix();
            sympl_err = sympl_err.max((m * &omega * m.transpose() - &omega).amax());
        }
        nu_max = nu_max.max(sld_coefficients(&p)?.nu.abs());
        let prep: SymplecticTransform = chain.state_preparation()?;
        let half = DMatrix::<f64>::identity(4, 4) * 0.5;
        let f_cov = prep.matrix() * half * prep.matrix().transpose();
        cf_err = cf_err.max((f_cov - closed_form_moments(&p).cov).amax());
    }
    let pass = purity_err <= 1e-10 && sympl_err < 1e-10 && nu_max <= 1e-6 && cf_err <= 1e-10;
    Ok(Outcome::new(
        pass,
        format!(
            "{count} points: |μ − 1| {purity_err:.1e}, ‖FΩFᵀ − Ω‖ {sympl_err:.1e}, |ν| {nu_max:.1e}, closed form {cf_err:.1e}"
        ),
    ))
}

fn criterion_10() -> Result<Outcome> {
    let step = 0.005;
    let mut grid = Vec::new();
    for i in 0..=200 {
        let lam = i as f64 * step;
        if (lam - LC).abs() < 1e-12 {
            continue;
        }
        let en = log_negativity(dicke::ground_state(&DickeParams::resonant(lam))?.cov())?;
        grid.push((lam, en));
    }
    let at_zero = grid[0].1;
    let positive = grid
        .iter()
        .filter(|(l, _)| *l > 0.0 && *l < LC)
        .all(|(_, e)| *e > 0.0);
    let (peak, max) = grid
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    let pass = at_zero == 0.0 && positive && (peak - LC).abs() <= step * (1.0 + 1e-9);
    Ok(Outcome::new(
        pass,
        format!(
            "E_N(0) = {at_zero}, positive below λc: {positive}, peak E_N = {max:.4} at λ = {peak}"
        ),
    ))
}

fn criterion_11() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for above in [false, true] {
        let samples = log_spaced(LC, 1e-3, 1e-2, 9, above)
            .into_iter()
            .map(|lam| {
                let (phi, _) = sld_local_frame(&DickeParams::resonant(lam))?;
                Ok((lam, phi.amax()))
            })
            .collect::<Result<Vec<_>>>()?;
        let fit = fit_power_law(&samples, LC)?;
        pass &= (fit.exponent + 1.5).abs() <= 0.05;
        parts.push(format!(
            "Φ' exponent ({}) {:.4}",
            if above { "superradiant" } else { "normal" },
            fit.exponent
        ));
    }
    // |ζ'| → √(32N / (ω³ω0²(ω² + ω0²))) · |(ω0², −ω²)|
    let (w, w0, n) = (1.0f64, 1.0f64, 100.0f64);
    let limit = (32.0 * n / (w.powi(3) * w0 * w0 * (w * w + w0 * w0))).sqrt()
        * (w0.powi(4) + w.powi(4)).sqrt();
    let mut worst = 0.0f64;
    let mut norms = Vec::new();
    for lam in log_spaced(LC, 1e-3, 1e-2, 9, true) {
        let (_, zeta) = sld_local_frame(&DickeParams::resonant(lam))?;
        let norm = zeta.norm();
        worst = worst.max((norm / limit - 1.0).abs());
        norms.push(norm);
    }
    pass &= worst <= 0.02;
    parts.push(format!(
        "|ζ'| from {:.3} (|λ−λc|=1e-2) to {:.3} (1e-3), limit {limit:.3}, max deviation {:.2}%",
        norms[0],
        norms[norms.len() - 1],
        100.0 * worst
    ));
    Ok(Outcome::new(pass, parts.join("; ")))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 11] = [
        ("QFI critical scaling", criterion_1),
        ("QFI weak and strong coupling limits", criterion_2),
        ("homodyne optimality at criticality", criterion_3),
        ("homodyne strong-coupling limit", criterion_4),
        ("homodyne weak-coupling limit", criterion_5),
        ("photon statistics vs Fock oracle", criterion_6),
        ("photon-counting near-optimality", criterion_7),
        ("QFI vs fidelity oracle", criterion_8),
        ("structural suite", criterion_9),
        ("entanglement curve shape", criterion_10),
        ("SLD asymptotics", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
