//! Received-signal model with optimal RIS phase alignment, aggregate
//! transceiver distortion and AWGN, plus the greedy energy detector.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{ChannelMatrix, ChannelSampler, NakagamiParams};
use crate::error::{domain, Error, Result};

/// Largest RPM constellation accepted.
pub const MAX_RPM_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ssk,
    /// SSK with `order`-ary reflection phase modulation at the RIS.
    Rpm { order: u32 },
}

impl Scheme {
    pub fn rpm(order: u32) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() || order > MAX_RPM_ORDER {
            return Err(Error::InvalidConfig(format!(
                "RPM order must be a power of two >= 2, got {order}"
            )));
        }
        Ok(Scheme::Rpm { order })
    }

    pub fn rpm_order(&self) -> Option<u32> {
        match self {
            Scheme::Ssk => None,
            Scheme::Rpm { order } => Some(*order),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Ssk => f.write_str("ssk"),
            Scheme::Rpm { order } => write!(f, "rpm{order}"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    /// Accepts `ssk`, `rpmM` and `rpm-M` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "ssk" {
            return Ok(Scheme::Ssk);
        }
        let order = s
            .strip_prefix("rpm")
            .map(|rest| rest.trim_start_matches(['-', '_']))
            .and_then(|digits| digits.parse::<u32>().ok())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown scheme '{s}'")))?;
        Scheme::rpm(order)
    }
}

/// One point of the M-PSK reflection-phase constellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpmSymbol {
    index: u32,
    phase: f64,
}

impl RpmSymbol {
    /// Symbol `n ∈ 1..=order` with phase `2π(n-1)/order`.
    pub fn new(index: u32, order: u32) -> Result<Self> {
        if order == 0 || index == 0 || index > order {
            return Err(domain(format!("RPM symbol {index} outside 1..={order}")));
        }
        Ok(Self {
            index,
            phase: 2.0 * PI * f64::from(index - 1) / f64::from(order),
        })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

/// All `order` symbols in index order.
pub fn constellation(order: u32) -> Vec<RpmSymbol> {
    (1..=order)
        .map(|n| RpmSymbol::new(n, order).expect("index within order"))
        .collect()
}

/// `k = sqrt(k_t² + k_r²)`.
pub fn aggregate_k(kt: f64, kr: f64) -> Result<f64> {
    if !(kt >= 0.0 && kr >= 0.0 && kt.is_finite() && kr.is_finite()) {
        return Err(domain(format!("impairment levels must be >= 0, got ({kt}, {kr})")));
    }
    Ok(kt.hypot(kr))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    n_elements: usize,
    n_branches: usize,
    es: f64,
    n0: f64,
    k: f64,
    scheme: Scheme,
    channel: NakagamiParams,
}

impl SystemConfig {
    /// Builds a configuration from the average SNR `Γ_av = E_s Ω / N_0`,
    /// with `N_0 = 1`.
    pub fn new(
        n_elements: usize,
        n_branches: usize,
        gamma_av: f64,
        k: f64,
        scheme: Scheme,
        channel: NakagamiParams,
    ) -> Result<Self> {
        if !(gamma_av.is_finite() && gamma_av >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "average SNR must be finite and >= 0, got {gamma_av}"
            )));
        }
        Self::with_energies(
            n_elements,
            n_branches,
            gamma_av / channel.omega(),
            1.0,
            k,
            scheme,
            channel,
        )
    }

    pub fn with_energies(
        n_elements: usize,
        n_branches: usize,
        es: f64,
        n0: f64,
        k: f64,
        scheme: Scheme,
        channel: NakagamiParams,
    ) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::InvalidConfig("N must be >= 1".into()));
        }
        if n_branches < 2 {
            return Err(Error::InvalidConfig(format!(
                "N_R must be >= 2, got {n_branches}"
            )));
        }
        if !(es.is_finite() && es >= 0.0) {
            return Err(Error::InvalidConfig(format!("E_s must be finite and >= 0, got {es}")));
        }
        if !(n0.is_finite() && n0 > 0.0) {
            return Err(Error::InvalidConfig(format!("N_0 must be finite and > 0, got {n0}")));
        }
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::InvalidConfig(format!("k must lie in [0, 1], got {k}")));
        }
        if let Scheme::Rpm { order } = scheme {
            Scheme::rpm(order)?;
        }
        let cfg = Self {
            n_elements,
            n_branches,
            es,
            n0,
            k,
            scheme,
            channel,
        };
        if !cfg.gamma_av().is_finite() {
            return Err(Error::InvalidConfig("average SNR overflows".into()));
        }
        Ok(cfg)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_branches(&self) -> usize {
        self.n_branches
    }

    /// Number of non-target branches, `L = N_R - 1`.
    pub fn interferers(&self) -> usize {
        self.n_branches - 1
    }

    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn channel(&self) -> &NakagamiParams {
        &self.channel
    }

    pub fn gamma_av(&self) -> f64 {
        self.es * self.channel.omega() / self.n0
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Result<Self> {
        if let Scheme::Rpm { order } = scheme {
            Scheme::rpm(order)?;
        }
        self.scheme = scheme;
        Ok(self)
    }

    pub fn with_gamma_av(self, gamma_av: f64) -> Result<Self> {
        Self::new(
            self.n_elements,
            self.n_branches,
            gamma_av,
            self.k,
            self.scheme,
            self.channel,
        )
    }

    pub fn with_k(self, k: f64) -> Result<Self> {
        Self::with_energies(
            self.n_elements,
            self.n_branches,
            self.es,
            self.n0,
            k,
            self.scheme,
            self.channel,
        )
    }

    pub fn with_branches(self, n_branches: usize) -> Result<Self> {
        Self::with_energies(
            self.n_elements,
            n_branches,
            self.es,
            self.n0,
            self.k,
            self.scheme,
            self.channel,
        )
    }
}

#[inline]
fn circular_gaussian<R: Rng + ?Sized>(rng: &mut R, std_per_component: f64) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * std_per_component, im * std_per_component)
}

fn check_dims(channel: &ChannelMatrix, target: usize, cfg: &SystemConfig) -> Result<()> {
    if channel.n_elements() != cfg.n_elements || channel.n_branches() != cfg.n_branches {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", cfg.n_elements, cfg.n_branches),
            actual: format!("{}x{}", channel.n_elements(), channel.n_branches()),
        });
    }
    if target >= cfg.n_branches {
        return Err(Error::DimensionMismatch {
            expected: format!("target branch < {}", cfg.n_branches),
            actual: target.to_string(),
        });
    }
    Ok(())
}

/// Effective per-branch channel after the RIS co-phases every element
/// towards `target`: `S_p = Σ_u h_{u,p} e^{jθ_{u,target}}`.
///
/// `S_target` is real and equals `Σ_u β_{u,target}`.
pub fn aligned_sums(channel: &ChannelMatrix, target: usize, out: &mut [Complex64]) {
    out.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
    for u in 0..channel.n_elements() {
        let ht = channel.gain(u, target);
        let mag = ht.norm();
        if mag == 0.0 {
            continue;
        }
        let steer = ht.conj() / mag;
        for (p, s) in out.iter_mut().enumerate() {
            *s += if p == target {
                Complex64::new(mag, 0.0)
            } else {
                channel.gain(u, p) * steer
            };
        }
    }
}

/// `|z_p|²` for every branch given explicit distortion and noise draws.
pub fn received_energies_with(
    channel: &ChannelMatrix,
    target: usize,
    cfg: &SystemConfig,
    symbol: Option<RpmSymbol>,
    distortion: Complex64,
    noise: &[Complex64],
) -> Result<Vec<f64>> {
    check_dims(channel, target, cfg)?;
    if noise.len() != cfg.n_branches {
        return Err(Error::DimensionMismatch {
            expected: format!("{} noise samples", cfg.n_branches),
            actual: noise.len().to_string(),
        });
    }
    let mut sums = vec![Complex64::new(0.0, 0.0); cfg.n_branches];
    aligned_sums(channel, target, &mut sums);
    let rotation = symbol.map_or(Complex64::new(1.0, 0.0), |s| Complex64::from_polar(1.0, s.phase));
    let amplitude = (Complex64::new(cfg.es.sqrt(), 0.0) + distortion) * rotation;
    Ok(sums
        .iter()
        .zip(noise)
        .map(|(s, n)| (amplitude * s + n).norm_sqr())
        .collect())
}

/// Draws one distortion sample `q ~ CN(0, k² E_s)` shared by all branches and
/// independent AWGN `n_p ~ CN(0, N_0)`, then returns `|z_p|²`.
pub fn received_energies<R: Rng + ?Sized>(
    channel: &ChannelMatrix,
    target: usize,
    cfg: &SystemConfig,
    symbol: Option<RpmSymbol>,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_dims(channel, target, cfg)?;
    let q = circular_gaussian(rng, (cfg.k * cfg.k * cfg.es / 2.0).sqrt());
    let noise_std = (cfg.n0 / 2.0).sqrt();
    let noise: Vec<Complex64> = (0..cfg.n_branches)
        .map(|_| circular_gaussian(rng, noise_std))
        .collect();
    received_energies_with(channel, target, cfg, symbol, q, &noise)
}

/// Index of the largest energy; ties go to the lowest index.
pub fn greedy_detect(energies: &[f64]) -> Result<usize> {
    if energies.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut best = 0;
    for (i, &e) in energies.iter().enumerate().skip(1) {
        if e > energies[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Allocation-free single-realization simulator used by the Monte-Carlo
/// estimator. Branch 0 is the target.
#[derive(Debug, Clone)]
pub struct ExactLink {
    cfg: SystemConfig,
    sampler: ChannelSampler,
    channel: ChannelMatrix,
    sums: Vec<Complex64>,
    distortion_std: f64,
    noise_std: f64,
}

impl ExactLink {
    pub fn new(cfg: &SystemConfig) -> Self {
        Self {
            cfg: *cfg,
            sampler: ChannelSampler::new(&cfg.channel),
            channel: ChannelMatrix::zeros(cfg.n_elements, cfg.n_branches),
            sums: vec![Complex64::new(0.0, 0.0); cfg.n_branches],
            distortion_std: (cfg.k * cfg.k * cfg.es / 2.0).sqrt(),
            noise_std: (cfg.n0 / 2.0).sqrt(),
        }
    }

    /// Runs one realization and reports whether the detector missed the
    /// target. `phase` is the RPM rotation, `None` for plain SSK.
    pub fn trial<R: Rng + ?Sized>(&mut self, rng: &mut R, phase: Option<f64>) -> bool {
        self.sampler.fill(&mut self.channel, rng);
        aligned_sums(&self.channel, 0, &mut self.sums);
        let q = if self.distortion_std > 0.0 {
            circular_gaussian(rng, self.distortion_std)
        } else {
            Complex64::new(0.0, 0.0)
        };
        let rotation = phase.map_or(Complex64::new(1.0, 0.0), |psi| Complex64::from_polar(1.0, psi));
        let amplitude = (Complex64::new(self.cfg.es.sqrt(), 0.0) + q) * rotation;
        let mut best = 0;
        let mut best_energy = f64::NEG_INFINITY;
        for (p, s) in self.sums.iter().enumerate() {
            let e = (amplitude * s + circular_gaussian(rng, self.noise_std)).norm_sqr();
            if e > best_energy {
                best = p;
                best_energy = e;
            }
        }
        best != 0
    }
}
