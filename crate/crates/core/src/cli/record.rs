//! CSV rows.

use std::fmt::Write as _;

use crate::analytic::{ber_union_bound, ped, ped_high_snr, ped_low_snr, ped_rpm_conditional, ped_zero_snr};
use crate::error::Result;
use crate::linkmodel::{Scheme, SystemConfig};
use crate::montecarlo::{estimate_ped, McConfig, McEstimate};

pub const HEADER: &str = "scheme,N,N_R,m,omega,p,k,M,gamma_db,trials,mode,ped_mc,ped_mc_stderr,\
ped_analytic,ped_high_snr,ped_low_snr,ped_zero_snr,ber_bound,vacuous";

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub config: SystemConfig,
    pub gamma_db: f64,
    pub mc: Option<McEstimate>,
    pub ped_analytic: f64,
    pub ped_high_snr: f64,
    pub ped_low_snr: f64,
    pub ped_zero_snr: f64,
    pub ber_bound: Option<f64>,
    pub vacuous: Option<bool>,
}

/// Analytic values for one point, plus an MC estimate when `mc` is set.
/// A pinned `psi` conditions both the RPM analytic value and the estimate.
pub fn evaluate(cfg: &SystemConfig, gamma_db: f64, mc: Option<&McConfig>, psi: Option<f64>) -> Result<Record> {
    let analytic = match (cfg.scheme(), psi) {
        (Scheme::Rpm { .. }, Some(p)) => ped_rpm_conditional(cfg, p)?.value,
        _ => ped(cfg)?.value,
    };
    let psi = match cfg.scheme() {
        Scheme::Rpm { .. } => psi,
        Scheme::Ssk => None,
    };
    let nr = cfg.n_branches();
    let ber = if nr.is_power_of_two() {
        Some(ber_union_bound(analytic, nr)?)
    } else {
        None
    };
    Ok(Record {
        config: *cfg,
        gamma_db,
        mc: mc.map(|mc| estimate_ped(cfg, mc, psi)),
        ped_analytic: analytic,
        ped_high_snr: ped_high_snr(cfg)?.value,
        ped_low_snr: ped_low_snr(cfg)?.value,
        ped_zero_snr: ped_zero_snr(nr)?.value,
        ber_bound: ber.map(|b| b.value),
        vacuous: ber.map(|b| b.vacuous),
    })
}

fn prob(v: f64) -> String {
    format!("{v:.9e}")
}

fn param(v: f64) -> String {
    // Shortest representation that round-trips.
    format!("{v}")
}

impl Record {
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let ch = c.channel();
        let (name, order) = match c.scheme() {
            Scheme::Ssk => ("ssk", String::new()),
            Scheme::Rpm { order } => ("rpm", order.to_string()),
        };
        let mut s = String::with_capacity(256);
        let _ = write!(
            s,
            "{name},{},{},{},{},{},{},{order},{},",
            c.n_elements(),
            c.n_branches(),
            param(ch.m()),
            param(ch.omega()),
            param(ch.p()),
            param(c.k()),
            param(self.gamma_db),
        );
        match &self.mc {
            Some(e) => {
                let _ = write!(s, "{},{},{},{},", e.trials, e.mode, prob(e.p_hat), prob(e.stderr));
            }
            None => s.push_str(",,,,"),
        }
        let _ = write!(
            s,
            "{},{},{},{},",
            prob(self.ped_analytic),
            prob(self.ped_high_snr),
            prob(self.ped_low_snr),
            prob(self.ped_zero_snr)
        );
        match (self.ber_bound, self.vacuous) {
            (Some(b), Some(v)) => {
                let _ = write!(s, "{},{}", prob(b), u8::from(v));
            }
            _ => s.push(','),
        }
        s
    }
}
