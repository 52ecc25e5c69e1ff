//! Direct, term-by-term transcriptions of the printed closed forms, written
//! independently of `ris_ssk::analytic`. Used as a second implementation.
#![allow(dead_code)]

use std::f64::consts::TAU;

use ris_ssk::numerics::gamma_ratio;

pub struct Printed {
    pub n: f64,
    pub gamma: f64,
    pub k: f64,
    pub m: f64,
}

fn binom(n: u32, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn sign(r: u32) -> f64 {
    if r % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

impl Printed {
    fn g(&self) -> f64 {
        let gr = gamma_ratio(self.m).unwrap();
        gr * gr / self.m
    }

    fn a(&self) -> f64 {
        self.n * self.gamma + self.n * self.k * self.k * self.gamma + 1.0
    }

    /// Pairwise SSK probability.
    pub fn pped_ssk(&self) -> f64 {
        let (n, gm, k2, g) = (self.n, self.gamma, self.k * self.k, self.g());
        let t1 = n * gm + n * k2 * gm * (2.0 + g) + 2.0;
        let t2 = t1 + 2.0 * (n * gm * (1.0 - g));
        self.a() / t1.sqrt() * (-(n * n * gm * g) / t2).exp() / t2.sqrt()
    }

    pub fn ped_ssk(&self, l: u32) -> f64 {
        let (n, gm, k2, g) = (self.n, self.gamma, self.k * self.k, self.g());
        let mut sum = 0.0;
        for r in 1..=l {
            let rf = f64::from(r);
            let d1 = n * gm + rf + 1.0 + n * k2 * gm * (1.0 + rf * (1.0 + g));
            let d2 = d1 + 2.0 * rf * (n * gm * (1.0 - g));
            sum += sign(r) * binom(l, r) / d1.sqrt() * (-(rf * n * n * gm * g) / d2).exp() / d2.sqrt();
        }
        self.a() * sum
    }

    pub fn ped_ssk_high(&self, l: u32) -> f64 {
        let (n, k2, g) = (self.n, self.k * self.k, self.g());
        let mut sum = 0.0;
        for r in 1..=l {
            let rf = f64::from(r);
            let e1 = 1.0 + k2 * (1.0 + rf * (1.0 + g));
            let e2 = e1 + 2.0 * rf * (1.0 - g);
            sum += sign(r) * binom(l, r) * (-(rf * n * g) / e2).exp() / (e2.sqrt() * e1.sqrt());
        }
        (1.0 + k2) * sum
    }

    pub fn ped_ssk_low(&self, l: u32) -> f64 {
        let (n, gm, g) = (self.n, self.gamma, self.g());
        (1..=l)
            .map(|r| {
                let rf = f64::from(r);
                sign(r) * binom(l, r) * (-(rf * n * n * gm * g) / (rf + 1.0)).exp() / (rf + 1.0)
            })
            .sum()
    }

    /// Pairwise SSK-RPM probability conditioned on `psi`.
    pub fn pped_rpm(&self, psi: f64) -> f64 {
        self.rpm_term(1, psi)
    }

    /// Conditional `L`-interferer SSK-RPM sum for one phase.
    pub fn ped_rpm_conditional(&self, l: u32, psi: f64) -> f64 {
        (1..=l).map(|r| sign(r) * binom(l, r) * self.rpm_term(r, psi)).sum()
    }

    fn rpm_term(&self, r: u32, psi: f64) -> f64 {
        let (n, gm, k2, g) = (self.n, self.gamma, self.k * self.k, self.g());
        let rf = f64::from(r);
        let (s2, c2) = (psi.sin().powi(2), psi.cos().powi(2));
        let dist = n * k2 * gm * (1.0 + rf * (1.0 + g));
        let ds = rf + 1.0 + n * gm * (1.0 + 2.0 * rf * s2 * (1.0 - g)) + dist;
        let dc = rf + 1.0 + n * gm * (1.0 + 2.0 * rf * c2 * (1.0 - g)) + dist;
        let num = rf * n * n * gm * g;
        self.a() * (-(num * s2) / ds).exp() / ds.sqrt() * (-(num * c2) / dc).exp() / dc.sqrt()
    }

    pub fn ped_rpm(&self, l: u32, order: u32) -> f64 {
        phases(order).map(|p| self.ped_rpm_conditional(l, p)).sum::<f64>() / f64::from(order)
    }

    pub fn ped_rpm_high(&self, l: u32, order: u32) -> f64 {
        let (n, k2, g) = (self.n, self.k * self.k, self.g());
        let mut total = 0.0;
        for psi in phases(order) {
            let (s2, c2) = (psi.sin().powi(2), psi.cos().powi(2));
            for r in 1..=l {
                let rf = f64::from(r);
                let dist = k2 * (1.0 + rf * (1.0 + g));
                let fs = 1.0 + 2.0 * rf * s2 * (1.0 - g) + dist;
                let fc = 1.0 + 2.0 * rf * c2 * (1.0 - g) + dist;
                let num = rf * n * g;
                total += sign(r) * binom(l, r) * (-(num * s2) / fs).exp() / fs.sqrt() * (-(num * c2) / fc).exp()
                    / fc.sqrt();
            }
        }
        (1.0 + k2) * total / f64::from(order)
    }

    pub fn ped_rpm_low(&self, l: u32, order: u32) -> f64 {
        let (n, gm, g) = (self.n, self.gamma, self.g());
        let mut total = 0.0;
        for psi in phases(order) {
            let (s2, c2) = (psi.sin().powi(2), psi.cos().powi(2));
            for r in 1..=l {
                let rf = f64::from(r);
                let e = rf * n * n * gm * g / (rf + 1.0);
                total += sign(r) * binom(l, r) / (rf + 1.0) * (-e * s2).exp() * (-e * c2).exp();
            }
        }
        total / f64::from(order)
    }
}

pub fn phases(order: u32) -> impl Iterator<Item = f64> {
    (0..order).map(move |i| TAU * f64::from(i) / f64::from(order))
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}
