//! Closed-form error probabilities of the greedy detector.
//!
//! Under the central-limit surrogate the target-branch energy is a
//! two-component Gaussian quadratic form `X = U² + V²` and every non-target
//! energy is exponential with mean `a`. The pairwise error probability is
//! then `E[e^{-X/a}]`, i.e. the moment generating function of `X` evaluated
//! at `s = -1/a`, and the `L`-interferer error probability is the
//! alternating binomial series
//!
//! ```text
//! P_e = Σ_{r=1}^{L} (-1)^{r-1} C(L, r) E[e^{-r X / a}]
//! ```
//!
//! Every expression in this module, including the high- and low-SNR
//! limits, is evaluated through a moment bundle and the factorized scalar
//! MGF `E[e^{sU²}] = exp{sμ²/(1-2sσ²)} / sqrt(1-2sσ²)`. The bundles are
//! normalized by `N_0`, so `E_s Ω` becomes `Γ_av`.

use crate::error::{domain, Error, Result};
use crate::linkmodel::{constellation, Scheme, SystemConfig};
use crate::numerics::{signed_binomial_series, GaussianComponent, QuadraticForm, MAX_BINOMIAL_ORDER};

/// Statistics of the aligned target branch and the non-target energy scale
/// for plain SSK.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SskMoments {
    /// Mean of the in-phase target component.
    pub mu1: f64,
    /// Mean energy of a non-target branch.
    pub a: f64,
    /// Fading variance of the aligned sum.
    pub b_sk: f64,
    /// Per-component distortion plus noise variance.
    pub c_sk: f64,
}

/// Statistics of the target branch for SSK-RPM, conditioned on `ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpmMoments {
    pub mu_h1: f64,
    pub mu_h2: f64,
    pub b_rp: f64,
    pub c_rp: f64,
    pub d_rp: f64,
    /// Non-target energy scale, shared with SSK.
    pub a: f64,
}

impl QuadraticForm for SskMoments {
    fn components(&self) -> [GaussianComponent; 2] {
        [
            GaussianComponent::new(self.mu1, self.b_sk + self.c_sk),
            GaussianComponent::new(0.0, self.c_sk),
        ]
    }
}

impl QuadraticForm for RpmMoments {
    fn components(&self) -> [GaussianComponent; 2] {
        [
            GaussianComponent::new(self.mu_h1, self.b_rp + self.c_rp),
            GaussianComponent::new(self.mu_h2, self.d_rp + self.c_rp),
        ]
    }
}

/// Shared ingredients of both bundles for a given `E_s Ω` and `N_0`.
struct Ingredients {
    mu1: f64,
    a: f64,
    b: f64,
    c: f64,
}

fn ingredients(cfg: &SystemConfig, es_omega: f64, n0: f64) -> Ingredients {
    let n = cfg.n_elements() as f64;
    let k2 = cfg.k() * cfg.k();
    let gr = cfg.channel().gamma_ratio();
    let g = gr.squared_over_m();
    Ingredients {
        mu1: n * gr.value() * (es_omega / gr.m()).sqrt(),
        a: n * es_omega + n * k2 * es_omega + n0,
        b: n * es_omega * (1.0 - g),
        c: n * k2 * es_omega / 2.0 * (1.0 + g) + n0 / 2.0,
    }
}

impl Ingredients {
    fn ssk(&self) -> SskMoments {
        SskMoments {
            mu1: self.mu1,
            a: self.a,
            b_sk: self.b,
            c_sk: self.c,
        }
    }

    fn rpm(&self, psi: f64) -> RpmMoments {
        let (sin, cos) = psi.sin_cos();
        RpmMoments {
            mu_h1: self.mu1 * sin,
            mu_h2: self.mu1 * cos,
            b_rp: self.b * sin * sin,
            c_rp: self.c,
            d_rp: self.b * cos * cos,
            a: self.a,
        }
    }
}

/// Moment bundle in the configuration's own units (`E_s`, `Ω`, `N_0`).
pub fn ssk_moments(cfg: &SystemConfig) -> SskMoments {
    ingredients(cfg, cfg.es() * cfg.channel().omega(), cfg.n0()).ssk()
}

pub fn rpm_moments(cfg: &SystemConfig, psi: f64) -> RpmMoments {
    ingredients(cfg, cfg.es() * cfg.channel().omega(), cfg.n0()).rpm(psi)
}

fn normalized(cfg: &SystemConfig) -> Ingredients {
    ingredients(cfg, cfg.gamma_av(), 1.0)
}

/// Bundle after dividing by `N Γ_av N_0` and letting `Γ_av → ∞`.
fn high_snr_limit(cfg: &SystemConfig) -> Ingredients {
    let n = cfg.n_elements() as f64;
    let k2 = cfg.k() * cfg.k();
    let g = cfg.channel().gamma_ratio().squared_over_m();
    Ingredients {
        mu1: (n * g).sqrt(),
        a: 1.0 + k2,
        b: 1.0 - g,
        c: k2 / 2.0 * (1.0 + g),
    }
}

/// Bundle with every `N Γ_av` term dropped next to `N_0`; only the mean
/// `N² Γ_av G²/m` survives.
fn low_snr_limit(cfg: &SystemConfig) -> Ingredients {
    let n = cfg.n_elements() as f64;
    let g = cfg.channel().gamma_ratio().squared_over_m();
    Ingredients {
        mu1: n * (cfg.gamma_av() * g).sqrt(),
        a: 1.0,
        b: 0.0,
        c: 0.5,
    }
}

/// `E[e^{sX}]` for `X = U² + V²`, `s <= 0`.
pub fn cf_quadratic_form<Q: QuadraticForm + ?Sized>(form: &Q, s: f64) -> Result<f64> {
    if !(s <= 0.0) {
        return Err(domain(format!("MGF is evaluated on s <= 0, got {s}")));
    }
    let log: f64 = form
        .components()
        .iter()
        .map(|c| {
            let t = -2.0 * s * c.variance;
            s * c.mean * c.mean / (1.0 + t) - 0.5 * t.ln_1p()
        })
        .sum();
    Ok(log.exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PedResult {
    pub value: f64,
    pub scheme: Scheme,
    pub n_branches: usize,
    /// RPM phase when the value is conditioned on a single symbol.
    pub psi: Option<f64>,
    /// `None` for the configuration-free zero-SNR limit.
    pub config: Option<SystemConfig>,
}

fn interferers(n_branches: usize) -> Result<u32> {
    if n_branches < 2 {
        return Err(domain(format!("need at least two branches, got {n_branches}")));
    }
    let l = n_branches - 1;
    if l > MAX_BINOMIAL_ORDER as usize {
        return Err(Error::Overflow(format!(
            "N_R = {n_branches} exceeds the supported {} branches",
            MAX_BINOMIAL_ORDER + 1
        )));
    }
    Ok(l as u32)
}

fn series<Q: QuadraticForm>(l: u32, a: f64, form: &Q) -> Result<f64> {
    let mut err = None;
    let v = signed_binomial_series(l, |r| {
        cf_quadratic_form(form, -f64::from(r) / a).unwrap_or_else(|e| {
            err = Some(e);
            f64::NAN
        })
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

fn rpm_average(l: u32, order: u32, ing: &Ingredients) -> Result<f64> {
    let mut total = 0.0;
    for sym in constellation(order) {
        total += series(l, ing.a, &ing.rpm(sym.phase()))?;
    }
    Ok(total / f64::from(order))
}

fn rpm_order(cfg: &SystemConfig) -> Result<u32> {
    cfg.scheme()
        .rpm_order()
        .ok_or_else(|| Error::InvalidConfig("configuration is not an RPM scheme".into()))
}

fn result(value: f64, cfg: &SystemConfig, n_branches: usize, psi: Option<f64>) -> PedResult {
    PedResult {
        value,
        scheme: cfg.scheme(),
        n_branches,
        psi,
        config: Some(*cfg),
    }
}

/// Pairwise error probability for SSK, regardless of `cfg.n_branches()`.
pub fn pped_ssk(cfg: &SystemConfig) -> Result<PedResult> {
    let ing = normalized(cfg);
    let v = cf_quadratic_form(&ing.ssk(), -1.0 / ing.a)?;
    Ok(result(v, cfg, 2, None))
}

pub fn ped_ssk(cfg: &SystemConfig) -> Result<PedResult> {
    let l = interferers(cfg.n_branches())?;
    let ing = normalized(cfg);
    Ok(result(series(l, ing.a, &ing.ssk())?, cfg, cfg.n_branches(), None))
}

pub fn ped_ssk_high_snr(cfg: &SystemConfig) -> Result<PedResult> {
    let l = interferers(cfg.n_branches())?;
    let ing = high_snr_limit(cfg);
    Ok(result(series(l, ing.a, &ing.ssk())?, cfg, cfg.n_branches(), None))
}

pub fn ped_ssk_low_snr(cfg: &SystemConfig) -> Result<PedResult> {
    let l = interferers(cfg.n_branches())?;
    let ing = low_snr_limit(cfg);
    Ok(result(series(l, ing.a, &ing.ssk())?, cfg, cfg.n_branches(), None))
}

/// `L / (L + 1)`, exact up to the final rounding.
pub fn ped_zero_snr(n_branches: usize) -> Result<PedResult> {
    let l = interferers(n_branches)?;
    Ok(PedResult {
        value: f64::from(l) / f64::from(l + 1),
        scheme: Scheme::Ssk,
        n_branches,
        psi: None,
        config: None,
    })
}

/// Pairwise error probability for SSK-RPM conditioned on the phase `psi`.
pub fn pped_rpm_conditional(cfg: &SystemConfig, psi: f64) -> Result<PedResult> {
    let ing = normalized(cfg);
    let v = cf_quadratic_form(&ing.rpm(psi), -1.0 / ing.a)?;
    Ok(result(v, cfg, 2, Some(psi)))
}

/// `L`-interferer error probability for SSK-RPM conditioned on `psi`.
pub fn ped_rpm_conditional(cfg: &SystemConfig, psi: f64) -> Result<PedResult> {
    let l = interferers(cfg.n_branches())?;
    let ing = normalized(cfg);
    Ok(result(series(l, ing.a, &ing.rpm(psi))?, cfg, cfg.n_branches(), Some(psi)))
}

/// Error probability averaged over the equiprobable RPM constellation.
pub fn ped_rpm(cfg: &SystemConfig) -> Result<PedResult> {
    let order = rpm_order(cfg)?;
    let l = interferers(cfg.n_branches())?;
    let v = rpm_average(l, order, &normalized(cfg))?;
    Ok(result(v, cfg, cfg.n_branches(), None))
}

pub fn ped_rpm_high_snr(cfg: &SystemConfig) -> Result<PedResult> {
    let order = rpm_order(cfg)?;
    let l = interferers(cfg.n_branches())?;
    let v = rpm_average(l, order, &high_snr_limit(cfg))?;
    Ok(result(v, cfg, cfg.n_branches(), None))
}

pub fn ped_rpm_low_snr(cfg: &SystemConfig) -> Result<PedResult> {
    let order = rpm_order(cfg)?;
    let l = interferers(cfg.n_branches())?;
    let v = rpm_average(l, order, &low_snr_limit(cfg))?;
    Ok(result(v, cfg, cfg.n_branches(), None))
}

pub fn ped_rpm_zero_snr(n_branches: usize) -> Result<PedResult> {
    let mut r = ped_zero_snr(n_branches)?;
    r.scheme = Scheme::Rpm { order: 2 };
    Ok(r)
}

/// Scheme-dispatching general error probability.
pub fn ped(cfg: &SystemConfig) -> Result<PedResult> {
    match cfg.scheme() {
        Scheme::Ssk => ped_ssk(cfg),
        Scheme::Rpm { .. } => ped_rpm(cfg),
    }
}

pub fn ped_high_snr(cfg: &SystemConfig) -> Result<PedResult> {
    match cfg.scheme() {
        Scheme::Ssk => ped_ssk_high_snr(cfg),
        Scheme::Rpm { .. } => ped_rpm_high_snr(cfg),
    }
}

pub fn ped_low_snr(cfg: &SystemConfig) -> Result<PedResult> {
    match cfg.scheme() {
        Scheme::Ssk => ped_ssk_low_snr(cfg),
        Scheme::Rpm { .. } => ped_rpm_low_snr(cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerBound {
    pub value: f64,
    /// Set when the bound exceeds 1/2 and carries no information.
    pub vacuous: bool,
}

/// `BER <= (N_R / 2) P_e`.
pub fn ber_union_bound(ped: f64, n_branches: usize) -> Result<BerBound> {
    if !(0.0..=1.0).contains(&ped) {
        return Err(domain(format!("PED must lie in [0, 1], got {ped}")));
    }
    if n_branches < 2 || !n_branches.is_power_of_two() {
        return Err(domain(format!(
            "union bound needs N_R a power of two >= 2, got {n_branches}"
        )));
    }
    let value = n_branches as f64 / 2.0 * ped;
    Ok(BerBound {
        value,
        vacuous: value > 0.5,
    })
}
