//! Monte-Carlo estimators of the error probability.
//!
//! Two models are simulated:
//!
//! * `Exact` runs the full received-signal model of [`crate::linkmodel`]
//!   with fresh Nakagami channels, distortion and noise per trial.
//! * `Surrogate` draws the target energy from the Gaussian quadratic form
//!   given by the moment bundles and the non-target energies as
//!   independent exponentials with mean `a`. Its expectation equals the
//!   closed forms exactly, so it checks the algebra without CLT error.
//!
//! Trials are split into fixed-size chunks. Chunk `i` owns the ChaCha
//! stream `i` of the key derived from the seed, so the error count of every
//! chunk, and therefore the estimate, does not depend on how many workers
//! run the chunks or in which order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::analytic::{rpm_moments, ssk_moments, RpmMoments};
use crate::error::{Error, Result};
use crate::linkmodel::{constellation, ExactLink, Scheme, SystemConfig};
use crate::numerics::{GaussianComponent, QuadraticForm};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum McMode {
    Exact,
    Surrogate,
}

impl fmt::Display for McMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            McMode::Exact => "exact",
            McMode::Surrogate => "surrogate",
        })
    }
}

impl FromStr for McMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(McMode::Exact),
            "surrogate" => Ok(McMode::Surrogate),
            other => Err(Error::InvalidConfig(format!("unknown Monte-Carlo mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub mode: McMode,
    pub confidence_level: f64,
    /// Worker threads; `0` uses the global rayon pool. Never affects results.
    pub workers: usize,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64, mode: McMode) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidConfig("trial count must be positive".into()));
        }
        Ok(Self {
            trials,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE.min(trials),
            mode,
            confidence_level: DEFAULT_CONFIDENCE,
            workers: 0,
        })
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Result<Self> {
        if chunk_size == 0 || chunk_size > self.trials {
            return Err(Error::InvalidConfig(format!(
                "chunk size must lie in 1..={}, got {chunk_size}",
                self.trials
            )));
        }
        self.chunk_size = chunk_size;
        Ok(self)
    }

    pub fn with_confidence(mut self, level: f64) -> Result<Self> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "confidence level must lie in (0, 1), got {level}"
            )));
        }
        self.confidence_level = level;
        Ok(self)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_mode(mut self, mode: McMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn n_chunks(&self) -> u64 {
        self.trials.div_ceil(self.chunk_size)
    }

    /// `(index, trials)` of every chunk; the lengths sum to `trials`.
    pub fn chunks(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..self.n_chunks()).map(move |i| {
            let start = i * self.chunk_size;
            (i, self.chunk_size.min(self.trials - start))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub errors: u64,
    pub trials: u64,
    pub mode: McMode,
    pub confidence_level: f64,
    pub seed: u64,
    pub config: SystemConfig,
}

impl McEstimate {
    fn from_counts(errors: u64, cfg: &SystemConfig, mc: &McConfig) -> Self {
        let n = mc.trials as f64;
        let p_hat = errors as f64 / n;
        let stderr = (p_hat * (1.0 - p_hat) / n).sqrt();
        let z = z_score(mc.confidence_level);
        Self {
            p_hat,
            stderr,
            ci_low: (p_hat - z * stderr).max(0.0),
            ci_high: (p_hat + z * stderr).min(1.0),
            errors,
            trials: mc.trials,
            mode: mc.mode,
            confidence_level: mc.confidence_level,
            seed: mc.seed,
            config: *cfg,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.ci_low..=self.ci_high).contains(&value)
    }

    /// `|value - p̂| / stderr`, infinite when the estimate has no spread.
    pub fn z_distance(&self, value: f64) -> f64 {
        let d = (value - self.p_hat).abs();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Two-sided normal quantile for a confidence level.
pub fn z_score(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}

/// Random stream for one chunk.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn run_chunks<F>(mc: &McConfig, count: F) -> u64
where
    F: Fn(&mut ChaCha8Rng, u64) -> u64 + Sync,
{
    let work = |(i, n): (u64, u64)| count(&mut chunk_rng(mc.seed, i), n);
    let chunks: Vec<(u64, u64)> = mc.chunks().collect();
    let per_chunk: Vec<u64> = match mc.workers {
        1 => chunks.into_iter().map(work).collect(),
        0 => chunks.into_par_iter().map(work).collect(),
        w => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("thread pool")
            .install(|| chunks.into_par_iter().map(work).collect()),
    };
    // Fixed chunk order; integer sums are exact anyway.
    per_chunk.iter().sum()
}

/// Exact-model estimate; RPM symbols are drawn uniformly per trial.
pub fn estimate_ped_exact(cfg: &SystemConfig, mc: &McConfig) -> McEstimate {
    estimate_ped_exact_with_phase(cfg, mc, None)
}

/// Exact-model estimate with an optional pinned RPM phase.
pub fn estimate_ped_exact_with_phase(cfg: &SystemConfig, mc: &McConfig, psi: Option<f64>) -> McEstimate {
    let phases: Option<Vec<f64>> = cfg
        .scheme()
        .rpm_order()
        .map(|order| constellation(order).iter().map(|s| s.phase()).collect());
    let errors = run_chunks(mc, |rng, n| {
        let mut link = ExactLink::new(cfg);
        let mut errors = 0;
        for _ in 0..n {
            let phase = match (psi, &phases) {
                (Some(p), _) => Some(p),
                (None, Some(ph)) => Some(ph[rng.random_range(0..ph.len())]),
                (None, None) => None,
            };
            errors += u64::from(link.trial(rng, phase));
        }
        errors
    });
    McEstimate::from_counts(errors, cfg, mc)
}

#[inline]
fn gaussian<R: Rng + ?Sized>(rng: &mut R, c: &GaussianComponent) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    c.mean + c.variance.sqrt() * z
}

#[inline]
fn any_exceeds<R: Rng + ?Sized>(rng: &mut R, x: f64, a: f64, l: usize) -> bool {
    let mut hit = false;
    for _ in 0..l {
        let y: f64 = Exp1.sample(rng);
        hit |= a * y > x;
    }
    hit
}

/// Surrogate-model estimate. For RPM `psi` pins the phase; otherwise the
/// symbol is drawn uniformly per trial.
pub fn estimate_ped_surrogate(cfg: &SystemConfig, mc: &McConfig, psi: Option<f64>) -> McEstimate {
    let l = cfg.interferers();
    let errors = match cfg.scheme() {
        Scheme::Ssk => {
            let mo = ssk_moments(cfg);
            let w0 = GaussianComponent::new(mo.mu1, mo.b_sk);
            let w12 = GaussianComponent::new(0.0, mo.c_sk);
            run_chunks(mc, |rng, n| {
                let mut errors = 0;
                for _ in 0..n {
                    let re = gaussian(rng, &w0) + gaussian(rng, &w12);
                    let im = gaussian(rng, &w12);
                    errors += u64::from(any_exceeds(rng, re * re + im * im, mo.a, l));
                }
                errors
            })
        }
        Scheme::Rpm { order } => {
            let forms: Vec<RpmMoments> = match psi {
                Some(p) => vec![rpm_moments(cfg, p)],
                None => constellation(order)
                    .iter()
                    .map(|s| rpm_moments(cfg, s.phase()))
                    .collect(),
            };
            let comps: Vec<[GaussianComponent; 2]> = forms.iter().map(|f| f.components()).collect();
            let a = forms[0].a;
            run_chunks(mc, |rng, n| {
                let mut errors = 0;
                for _ in 0..n {
                    let c = if comps.len() == 1 {
                        &comps[0]
                    } else {
                        &comps[rng.random_range(0..comps.len())]
                    };
                    let u = gaussian(rng, &c[0]);
                    let v = gaussian(rng, &c[1]);
                    errors += u64::from(any_exceeds(rng, u * u + v * v, a, l));
                }
                errors
            })
        }
    };
    McEstimate::from_counts(errors, cfg, mc)
}

/// Dispatches on `mc.mode`.
pub fn estimate_ped(cfg: &SystemConfig, mc: &McConfig, psi: Option<f64>) -> McEstimate {
    match mc.mode {
        McMode::Exact => estimate_ped_exact_with_phase(cfg, mc, psi),
        McMode::Surrogate => estimate_ped_surrogate(cfg, mc, psi),
    }
}
