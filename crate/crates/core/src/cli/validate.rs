//! Self-check suite behind `ris-ssk validate`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{
    cf_quadratic_form, ped, ped_high_snr, ped_low_snr, ped_rpm_conditional, ped_ssk, ped_zero_snr, pped_ssk,
    rpm_moments, ssk_moments,
};
use crate::channel::{beta_mean, beta_variance, ChannelSampler, NakagamiParams};
use crate::error::Result;
use crate::linkmodel::{Scheme, SystemConfig};
use crate::montecarlo::{estimate_ped, McConfig, McMode};
use crate::verify::{appendix_b_identity, mgf_by_quadrature};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
struct Budget {
    grid: usize,
    mc_trials: u64,
    channel_draws: usize,
}

const FULL: Budget = Budget {
    grid: 200,
    mc_trials: 2_000_000,
    channel_draws: 1_000_000,
};

const QUICK: Budget = Budget {
    grid: 40,
    mc_trials: 200_000,
    channel_draws: 100_000,
};

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

fn config(scheme: Scheme, n: usize, nr: usize, m: f64, k: f64, gamma: f64) -> Result<SystemConfig> {
    SystemConfig::new(n, nr, gamma, k, scheme, NakagamiParams::with_shape(m)?)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn random_config(rng: &mut ChaCha8Rng) -> Result<(SystemConfig, f64)> {
    let n = rng.random_range(4..=256);
    let m = rng.random_range(0.5..=8.0);
    let k = rng.random_range(0.0..=0.3);
    let gamma = 10f64.powf(rng.random_range(-4.0..=6.0));
    let psi = rng.random_range(0.0..std::f64::consts::TAU);
    Ok((config(Scheme::Ssk, n, 2, m, k, gamma)?, psi))
}

fn check_moments(b: Budget) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for m in [0.5, 1.0, 2.0, 4.0] {
        let params = NakagamiParams::with_shape(m)?;
        let sampler = ChannelSampler::new(&params);
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..b.channel_draws {
            let beta = sampler.sample_gain(&mut rng).norm();
            s1 += beta;
            s2 += beta * beta;
        }
        let n = b.channel_draws as f64;
        let mean = s1 / n;
        let se = (beta_variance(&params) / n).sqrt();
        worst = worst.max((mean - beta_mean(&params)).abs() / se);
        // E[β²] = Ω with Var[β²] = Ω²/m.
        let se2 = params.omega() * (1.0 / m / n).sqrt();
        worst = worst.max((s2 / n - params.omega()).abs() / se2);
    }
    Ok(outcome("channel moments", worst < 4.0, format!("worst deviation {worst:.2} stderr")))
}

fn check_identity() -> Result<CheckOutcome> {
    let mut bad = Vec::new();
    for l in 1..=64 {
        let (lhs, rhs) = appendix_b_identity(l)?;
        if lhs != rhs {
            bad.push(l);
        }
    }
    Ok(outcome("binomial identity L=1..64", bad.is_empty(), format!("failing orders {bad:?}")))
}

fn check_quadrature(b: Budget) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..b.grid {
        let (cfg, psi) = random_config(&mut rng)?;
        let a = cfg.n_elements() as f64 * cfg.gamma_av() * (1.0 + cfg.k() * cfg.k()) + 1.0;
        let s = -rng.random_range(1..=4) as f64 / a;
        let ssk = ssk_moments(&cfg);
        let rpm = rpm_moments(&cfg, psi);
        for (cf, quad) in [
            (cf_quadratic_form(&ssk, s)?, mgf_by_quadrature(&ssk, s)?.value),
            (cf_quadratic_form(&rpm, s)?, mgf_by_quadrature(&rpm, s)?.value),
        ] {
            worst = worst.max(rel(cf, quad));
        }
    }
    Ok(outcome("closed form vs quadrature", worst < 1e-10, format!("worst relative error {worst:.2e}")))
}

fn check_reductions(b: Budget) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..b.grid {
        let (cfg, _) = random_config(&mut rng)?;
        worst = worst.max(rel(ped_ssk(&cfg)?.value, pped_ssk(&cfg)?.value));
        for nr in [2, 4, 8] {
            let c = cfg.with_branches(nr)?;
            let rpm = ped_rpm_conditional(&c.with_scheme(Scheme::Rpm { order: 4 })?, 0.0)?.value;
            worst = worst.max(rel(rpm, ped_ssk(&c)?.value));
        }
    }
    Ok(outcome("reduction identities", worst < 1e-13, format!("worst relative error {worst:.2e}")))
}

fn check_limits() -> Result<CheckOutcome> {
    let mut worst_high: f64 = 0.0;
    let mut worst_low: f64 = 0.0;
    for scheme in [Scheme::Ssk, Scheme::Rpm { order: 8 }] {
        for n in [4, 8, 16] {
            for nr in [2, 4] {
                for m in [0.5, 1.0, 4.0] {
                    let hi = config(scheme, n, nr, m, 0.1, 1e6)?;
                    worst_high = worst_high.max(rel(ped(&hi)?.value, ped_high_snr(&hi)?.value));
                    let lo = config(scheme, n, nr, m, 0.1, 1e-4)?;
                    worst_low = worst_low.max(rel(ped(&lo)?.value, ped_low_snr(&lo)?.value));
                }
            }
        }
    }
    Ok(outcome(
        "asymptotic limits (N <= 16)",
        worst_high < 1e-3 && worst_low < 1e-3,
        format!("high {worst_high:.2e}, low {worst_low:.2e}"),
    ))
}

fn check_zero_snr(b: Budget) -> Result<CheckOutcome> {
    let mut ok = true;
    let mut notes = Vec::new();
    for nr in [2, 4, 8] {
        let target = ped_zero_snr(nr)?.value;
        for scheme in [Scheme::Ssk, Scheme::Rpm { order: 4 }] {
            let cfg = config(scheme, 16, nr, 1.0, 0.1, 0.0)?;
            ok &= (ped(&cfg)?.value - target).abs() < 1e-12;
        }
        let cfg = config(Scheme::Ssk, 16, nr, 1.0, 0.1, 0.0)?;
        let mc = McConfig::new(b.mc_trials / 4, 21 + nr as u64, McMode::Exact)?;
        let z = estimate_ped(&cfg, &mc, None).z_distance(target);
        ok &= z < 3.0;
        notes.push(format!("N_R={nr}: {z:.2}σ"));
    }
    Ok(outcome("zero-SNR limit", ok, notes.join(", ")))
}

fn check_determinism() -> Result<CheckOutcome> {
    let cfg = config(Scheme::Rpm { order: 8 }, 16, 4, 1.0, 0.1, 0.05)?;
    let mc = McConfig::new(40_000, 5, McMode::Exact)?.with_chunk_size(4_000)?;
    let one = estimate_ped(&cfg, &mc.with_workers(1), None);
    let four = estimate_ped(&cfg, &mc.with_workers(4), None);
    let ok = one == four;
    Ok(outcome("worker-count determinism", ok, format!("{} vs {} errors", one.errors, four.errors)))
}

fn check_surrogate(b: Budget) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for (i, (scheme, n, nr, gamma)) in [
        (Scheme::Ssk, 16, 2, 0.02),
        (Scheme::Ssk, 64, 4, 0.005),
        (Scheme::Rpm { order: 8 }, 32, 2, 0.01),
        (Scheme::Rpm { order: 4 }, 16, 4, 0.03),
    ]
    .into_iter()
    .enumerate()
    {
        let cfg = config(scheme, n, nr, 1.0, 0.3, gamma)?;
        let mc = McConfig::new(b.mc_trials, 31 + i as u64, McMode::Surrogate)?;
        worst = worst.max(estimate_ped(&cfg, &mc, None).z_distance(ped(&cfg)?.value));
    }
    // 99.9% two-sided
    Ok(outcome("surrogate MC vs closed form", worst < 3.29, format!("worst {worst:.2}σ")))
}

fn check_exact(b: Budget) -> Result<CheckOutcome> {
    // Ideal hardware, bulk of the distribution. With k > 0 the exact model has
    // a distortion variance growing like N², which the closed form does not track.
    let cfg = config(Scheme::Ssk, 32, 4, 1.0, 0.0, 0.01)?;
    let mc = McConfig::new(b.mc_trials / 4, 41, McMode::Exact)?;
    let z = estimate_ped(&cfg, &mc, None).z_distance(ped(&cfg)?.value);
    Ok(outcome("exact MC vs closed form (SSK, k=0)", z < 4.0, format!("{z:.2}σ")))
}

pub fn run(quick: bool) -> Result<Vec<CheckOutcome>> {
    let b = if quick { QUICK } else { FULL };
    Ok(vec![
        check_moments(b)?,
        check_identity()?,
        check_quadrature(b)?,
        check_reductions(b)?,
        check_limits()?,
        check_zero_snr(b)?,
        check_determinism()?,
        check_surrogate(b)?,
        check_exact(b)?,
    ])
}
