//! Nakagami-m complex channel gains between RIS elements and receive
//! branches.
//!
//! Each gain is `h = X + jY = β e^{-jθ}` where `X²` and `Y²` are Gamma
//! variates with shapes `(1 ± p) m / 2` and common scale `Ω / m`, each
//! carrying an independent random sign. The magnitude `β` is then
//! Nakagami-m with spread `Ω`, and the phase follows the coupled law of the
//! joint magnitude/phase density.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{domain, Result};
use crate::numerics::GammaRatio;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NakagamiParams {
    m: f64,
    omega: f64,
    p: f64,
}

impl Default for NakagamiParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            omega: 1.0,
            p: 0.0,
        }
    }
}

impl NakagamiParams {
    pub fn new(m: f64, omega: f64, p: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(domain(format!("Nakagami shape m must be > 0, got {m}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(domain(format!("Nakagami spread omega must be > 0, got {omega}")));
        }
        if !(p.is_finite() && p > -1.0 && p < 1.0) {
            return Err(domain(format!("power balance p must lie in (-1, 1), got {p}")));
        }
        Ok(Self { m, omega, p })
    }

    /// Balanced in-phase/quadrature power (`p = 0`), unit spread.
    pub fn with_shape(m: f64) -> Result<Self> {
        Self::new(m, 1.0, 0.0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn in_phase_shape(&self) -> f64 {
        (1.0 + self.p) * self.m / 2.0
    }

    pub fn quadrature_shape(&self) -> f64 {
        (1.0 - self.p) * self.m / 2.0
    }

    pub fn gamma_ratio(&self) -> GammaRatio {
        // m > 0 is an invariant of the type.
        GammaRatio::new(self.m).expect("validated shape")
    }
}

/// `E[β] = sqrt(Ω/m) Γ(m+1/2)/Γ(m)`.
pub fn beta_mean(params: &NakagamiParams) -> f64 {
    (params.omega / params.m).sqrt() * params.gamma_ratio().value()
}

/// `Var[β] = Ω (1 - (Γ(m+1/2)/Γ(m))² / m)`.
pub fn beta_variance(params: &NakagamiParams) -> f64 {
    params.omega * (1.0 - params.gamma_ratio().squared_over_m())
}

/// `N × N_R` gains, row-major by RIS element.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    n_elements: usize,
    n_branches: usize,
    gains: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn zeros(n_elements: usize, n_branches: usize) -> Self {
        Self {
            n_elements,
            n_branches,
            gains: vec![Complex64::new(0.0, 0.0); n_elements * n_branches],
        }
    }

    pub fn from_gains(n_elements: usize, n_branches: usize, gains: Vec<Complex64>) -> Result<Self> {
        if gains.len() != n_elements * n_branches {
            return Err(domain(format!(
                "expected {} gains for a {n_elements}x{n_branches} channel, got {}",
                n_elements * n_branches,
                gains.len()
            )));
        }
        Ok(Self {
            n_elements,
            n_branches,
            gains,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_branches(&self) -> usize {
        self.n_branches
    }

    #[inline]
    pub fn gain(&self, element: usize, branch: usize) -> Complex64 {
        self.gains[element * self.n_branches + branch]
    }

    /// `β_{u,w} = |h_{u,w}|`.
    pub fn magnitude(&self, element: usize, branch: usize) -> f64 {
        self.gain(element, branch).norm()
    }

    /// `θ_{u,w}` with the convention `h = β e^{-jθ}`.
    pub fn phase(&self, element: usize, branch: usize) -> f64 {
        -self.gain(element, branch).arg()
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    pub(crate) fn gains_mut(&mut self) -> &mut [Complex64] {
        &mut self.gains
    }
}

/// One signed square-root-of-Gamma component.
#[derive(Debug, Clone, Copy)]
enum ComponentLaw {
    // Gamma(1/2, θ) = θ Z² / 2 with Z standard normal.
    HalfShape { std_dev: f64 },
    General(Gamma<f64>),
}

impl ComponentLaw {
    fn new(shape: f64, scale: f64) -> Self {
        if shape == 0.5 {
            ComponentLaw::HalfShape {
                std_dev: (scale / 2.0).sqrt(),
            }
        } else {
            ComponentLaw::General(Gamma::new(shape, scale).expect("positive shape and scale"))
        }
    }

    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ComponentLaw::HalfShape { std_dev } => {
                let z: f64 = StandardNormal.sample(rng);
                std_dev * z
            }
            ComponentLaw::General(g) => {
                let mag = g.sample(rng).sqrt();
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
        }
    }
}

/// Reusable sampler for i.i.d. channel gains with a fixed law.
#[derive(Debug, Clone, Copy)]
pub struct ChannelSampler {
    in_phase: ComponentLaw,
    quadrature: ComponentLaw,
}

impl ChannelSampler {
    pub fn new(params: &NakagamiParams) -> Self {
        let scale = params.omega / params.m;
        Self {
            in_phase: ComponentLaw::new(params.in_phase_shape(), scale),
            quadrature: ComponentLaw::new(params.quadrature_shape(), scale),
        }
    }

    #[inline]
    pub fn sample_gain<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let x = self.in_phase.sample(rng);
        let y = self.quadrature.sample(rng);
        Complex64::new(x, y)
    }

    pub fn fill<R: Rng + ?Sized>(&self, channel: &mut ChannelMatrix, rng: &mut R) {
        for g in channel.gains_mut() {
            *g = self.sample_gain(rng);
        }
    }
}

pub fn sample_channel<R: Rng + ?Sized>(
    params: &NakagamiParams,
    n_elements: usize,
    n_branches: usize,
    rng: &mut R,
) -> ChannelMatrix {
    let mut ch = ChannelMatrix::zeros(n_elements, n_branches);
    ChannelSampler::new(params).fill(&mut ch, rng);
    ch
}
