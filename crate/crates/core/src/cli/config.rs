//! Sweep configuration files.
//!
//! ```text
//! # comment
//! scheme   = ssk, rpm
//! M        = 4, 8
//! N        = 16, 32
//! N_R      = 2, 4
//! m        = 1
//! k        = 0.1
//! gamma_db = -40:10:5
//! trials   = 100000
//! seed     = 1
//! mode     = surrogate
//! output   = fig1.csv
//! ```
//!
//! Keys are case-sensitive. `rpm` expands over the `M` list; explicit
//! entries such as `rpm8` are also accepted.

use std::path::{Path, PathBuf};

use crate::channel::NakagamiParams;
use crate::error::{Error, Result};
use crate::linkmodel::{Scheme, SystemConfig};
use crate::montecarlo::McMode;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub schemes: Vec<Scheme>,
    pub n_elements: Vec<usize>,
    pub n_branches: Vec<usize>,
    pub m: Vec<f64>,
    pub omega: Vec<f64>,
    pub p: Vec<f64>,
    pub k: Vec<f64>,
    pub gamma_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub mode: McMode,
    pub psi: Option<f64>,
    pub output: Option<PathBuf>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            schemes: vec![Scheme::Ssk],
            n_elements: vec![32],
            n_branches: vec![2],
            m: vec![1.0],
            omega: vec![1.0],
            p: vec![0.0],
            k: vec![0.0],
            gamma_db: Vec::new(),
            trials: 0,
            seed: 0,
            mode: McMode::Exact,
            psi: None,
            output: None,
        }
    }
}

/// One evaluation point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub config: SystemConfig,
    pub gamma_db: f64,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn list<T, F>(line: usize, key: &str, value: &str, mut f: F) -> Result<Vec<T>>
where
    F: FnMut(&str) -> std::result::Result<T, String>,
{
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).map_err(|e| parse_err(line, format!("{key}: {e}"))))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(parse_err(line, format!("{key}: empty list")));
    }
    Ok(items)
}

fn number<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("invalid number '{s}'"))
}

/// `start:stop:step` inclusive of `stop` up to rounding, or a plain list.
pub fn parse_db_grid(value: &str) -> std::result::Result<Vec<f64>, String> {
    let value = value.trim();
    if !value.contains(':') {
        return value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(number::<f64>)
            .collect();
    }
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!("grid '{value}' is not start:stop:step"));
    };
    let (start, stop, step): (f64, f64, f64) = (number(start)?, number(stop)?, number(step)?);
    if !(step.is_finite() && step != 0.0) {
        return Err("grid step must be non-zero".into());
    }
    let span = (stop - start) / step;
    if span < -1e-9 {
        return Err(format!("grid step {step} never reaches {stop} from {start}"));
    }
    let count = (span + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(format!("grid has {count} points"));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

impl SweepSpec {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = SweepSpec::default();
        let mut scheme_names: Option<(usize, Vec<String>)> = None;
        let mut orders: Option<(usize, Vec<u32>)> = None;
        let mut saw_grid = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(parse_err(line, format!("expected 'key = value', got '{body}'")));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "scheme" => {
                    let names = list(line, key, value, |s| Ok(s.to_ascii_lowercase()))?;
                    scheme_names = Some((line, names));
                }
                "M" => orders = Some((line, list(line, key, value, number::<u32>)?)),
                "N" => spec.n_elements = list(line, key, value, number)?,
                "N_R" => spec.n_branches = list(line, key, value, number)?,
                "m" => spec.m = list(line, key, value, number)?,
                "omega" => spec.omega = list(line, key, value, number)?,
                "p" => spec.p = list(line, key, value, number)?,
                "k" => spec.k = list(line, key, value, number)?,
                "gamma_db" => {
                    spec.gamma_db = parse_db_grid(value).map_err(|e| parse_err(line, format!("{key}: {e}")))?;
                    saw_grid = true;
                }
                "trials" => spec.trials = number(value).map_err(|e| parse_err(line, e))?,
                "seed" => spec.seed = number(value).map_err(|e| parse_err(line, e))?,
                "mode" => spec.mode = value.parse().map_err(|e: Error| parse_err(line, e.to_string()))?,
                "psi" => spec.psi = Some(number(value).map_err(|e| parse_err(line, e))?),
                "output" => spec.output = Some(PathBuf::from(value)),
                other => return Err(parse_err(line, format!("unknown key '{other}'"))),
            }
        }

        if !saw_grid || spec.gamma_db.is_empty() {
            return Err(Error::InvalidConfig("gamma_db grid is empty".into()));
        }
        if let Some((line, names)) = scheme_names {
            spec.schemes = expand_schemes(line, &names, orders.as_ref().map(|o| o.1.as_slice()))?;
        } else if let Some((line, _)) = &orders {
            return Err(parse_err(*line, "M given without an rpm scheme"));
        }
        spec.check()?;
        Ok(spec)
    }

    /// Validates every grid value against the type invariants.
    fn check(&self) -> Result<()> {
        for point in self.points() {
            point?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.schemes.len()
            * self.n_elements.len()
            * self.n_branches.len()
            * self.m.len()
            * self.omega.len()
            * self.p.len()
            * self.k.len()
            * self.gamma_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in CSV row order; `gamma_db` varies fastest.
    pub fn points(&self) -> impl Iterator<Item = Result<SweepPoint>> + '_ {
        let mut out = Vec::with_capacity(self.len());
        for &scheme in &self.schemes {
            for &n in &self.n_elements {
                for &nr in &self.n_branches {
                    for &m in &self.m {
                        for &omega in &self.omega {
                            for &p in &self.p {
                                for &k in &self.k {
                                    for &db in &self.gamma_db {
                                        out.push(point(scheme, n, nr, m, omega, p, k, db));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out.into_iter()
    }
}

#[allow(clippy::too_many_arguments)]
fn point(scheme: Scheme, n: usize, nr: usize, m: f64, omega: f64, p: f64, k: f64, db: f64) -> Result<SweepPoint> {
    if !db.is_finite() {
        return Err(Error::InvalidConfig(format!("gamma_db must be finite, got {db}")));
    }
    let channel = NakagamiParams::new(m, omega, p)?;
    let config = SystemConfig::new(n, nr, db_to_linear(db), k, scheme, channel)?;
    Ok(SweepPoint { config, gamma_db: db })
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn expand_schemes(line: usize, names: &[String], orders: Option<&[u32]>) -> Result<Vec<Scheme>> {
    let mut out = Vec::new();
    for name in names {
        if name == "rpm" {
            let Some(orders) = orders else {
                return Err(parse_err(line, "scheme 'rpm' needs an M list"));
            };
            for &order in orders {
                out.push(Scheme::rpm(order).map_err(|e| parse_err(line, e.to_string()))?);
            }
        } else {
            out.push(name.parse().map_err(|e: Error| parse_err(line, e.to_string()))?);
        }
    }
    Ok(out)
}
