//! Independent numerical oracles for the closed forms.
//!
//! Nothing here calls into [`crate::analytic`]; the oracles only consume the
//! component means and variances of a quadratic form and integrate them
//! numerically, or evaluate identities in exact rational arithmetic.

use std::num::NonZeroUsize;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use gauss_quad::hermite::GaussHermite;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{domain, Result};
use crate::numerics::{binomial, GaussianComponent, QuadraticForm, MAX_BINOMIAL_ORDER};

pub const DEFAULT_NODES: usize = 96;

/// Relative change under node doubling above which a result is flagged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub components: [GaussianComponent; 2],
    pub shift: f64,
}

impl QuadratureSpec {
    pub fn new<Q: QuadraticForm + ?Sized>(form: &Q, shift: f64) -> Self {
        Self {
            node_count: DEFAULT_NODES,
            components: form.components(),
            shift,
        }
    }

    pub fn with_nodes(mut self, node_count: usize) -> Self {
        self.node_count = node_count;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Same integral with twice the nodes.
    pub refined: f64,
    pub converged: bool,
}

fn rule(nodes: usize) -> &'static GaussHermite {
    // Rules are built once per node count and live for the process.
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussHermite>>> = OnceLock::new();
    let mut cache = CACHE
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("quadrature cache poisoned");
    cache.entry(nodes).or_insert_with(|| {
        let r = GaussHermite::new(NonZeroUsize::new(nodes).expect("nonzero node count"));
        Box::leak(Box::new(r))
    })
}

/// Locates the maximum of a smooth log-integrand by Newton steps on
/// central finite differences. Returns the mode and `-d²ℓ/dt²` there.
fn laplace_point<F: Fn(f64) -> f64>(log_f: F) -> (f64, f64) {
    let mut t = 0.0;
    let mut h = 1e-3;
    let mut curvature = 1.0;
    for _ in 0..60 {
        let (lm, l0, lp) = (log_f(t - h), log_f(t), log_f(t + h));
        let d1 = (lp - lm) / (2.0 * h);
        let d2 = (lp - 2.0 * l0 + lm) / (h * h);
        curvature = -d2;
        if !(curvature > 0.0) {
            // Not locally concave yet; take a cautious ascent step.
            t += d1.signum() * h * 10.0;
            continue;
        }
        let step = d1 / curvature;
        t += step;
        h = 1e-3 / curvature.sqrt();
        if step.abs() < 1e-14 * (1.0 + t.abs()) {
            break;
        }
    }
    (t, curvature)
}

/// `E[exp(s U²)]` for `U ~ N(mean, variance)` by adaptive Gauss–Hermite
/// quadrature centred on the numerically located mode of the integrand.
fn scalar_mgf(rule: &GaussHermite, c: GaussianComponent, s: f64) -> f64 {
    let sigma = c.variance.sqrt();
    if sigma == 0.0 {
        return (s * c.mean * c.mean).exp();
    }
    // U = mean + sigma t, t ~ N(0, 1)
    let log_f = |t: f64| {
        let u = c.mean + sigma * t;
        s * u * u - 0.5 * t * t
    };
    let (mode, curvature) = laplace_point(log_f);
    let tau = 1.0 / curvature.sqrt();
    let peak = log_f(mode);
    let scale = std::f64::consts::SQRT_2 * tau;
    let sum = rule.integrate(|x| (log_f(mode + scale * x) - peak + x * x).exp());
    // 1/sqrt(2π) · √2 τ · e^{peak} · Σ
    (peak + (scale * sum).ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()).exp()
}

pub fn mgf_with_spec(spec: &QuadratureSpec) -> Result<QuadratureResult> {
    if !(spec.shift <= 0.0) {
        return Err(domain(format!("quadrature shift must be <= 0, got {}", spec.shift)));
    }
    if spec.node_count == 0 || !spec.node_count.is_multiple_of(2) {
        return Err(domain(format!("node count must be even and positive, got {}", spec.node_count)));
    }
    if spec.components.iter().any(|c| !(c.variance > 0.0)) {
        return Err(domain("quadrature components need positive variances"));
    }
    let eval = |nodes: usize| {
        let r = rule(nodes);
        spec.components
            .iter()
            .map(|&c| scalar_mgf(r, c, spec.shift))
            .product::<f64>()
    };
    let value = eval(spec.node_count);
    let refined = eval(2 * spec.node_count);
    let converged = refined == value || ((refined - value) / value).abs() <= CONVERGENCE_TOLERANCE;
    Ok(QuadratureResult {
        value,
        refined,
        converged,
    })
}

/// `E[e^{sX}]` of a two-component Gaussian quadratic form by quadrature.
pub fn mgf_by_quadrature<Q: QuadraticForm + ?Sized>(form: &Q, s: f64) -> Result<QuadratureResult> {
    mgf_with_spec(&QuadratureSpec::new(form, s))
}

/// Exact `(Σ_{r=1}^{L} (-1)^{r-1} C(L,r)/(r+1), L/(L+1))`.
pub fn appendix_b_identity(order: u32) -> Result<(BigRational, BigRational)> {
    if order == 0 || order > MAX_BINOMIAL_ORDER {
        return Err(domain(format!("identity evaluated for 1 <= L <= 64, got {order}")));
    }
    let mut lhs = BigRational::zero();
    for r in 1..=order {
        let term = BigRational::new(BigInt::from(binomial(order, r)?), BigInt::from(r + 1));
        if r % 2 == 1 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = BigRational::new(BigInt::from(order), BigInt::from(order + 1));
    Ok((lhs, rhs))
}
