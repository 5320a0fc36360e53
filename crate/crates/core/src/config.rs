//! Sectioned `key = value` run configuration, named presets and command-line overrides.
//!
//! ```text
//! [run]
//! a = 0
//! b = 1
//! n_elems = 512
//! t_final = 0.5
//! ic = step
//!
//! [phys]
//! gamma = 1e-4
//! mu = 0
//! ```
//!
//! Keys mirror the fields of [`RunConfig`], [`SchemeConfig`] and
//! [`NewtonConfig`]; unknown sections or keys are rejected.

use std::fmt::Write as _;
use std::path::Path;

use ini::Ini;

use crate::driver::{InitialCondition, QInit, RunConfig};
use crate::physics::{DoubleWell, PhysParams};
use crate::scheme::{FluxFamily, SchemeConfig};
use crate::solver::NewtonConfig;
use crate::{Error, Result};

pub const PRESETS: &[&str] = &[
    "ek-step",
    "nsk-step-mu1e-7",
    "nsk-step-mu1e-6",
    "nsk-step-mu1e-5",
    "bench-gamma1e-4",
    "bench-gamma1e-5",
    "bench-gamma1e-6",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    Step,
    Tanh,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    Conservative,
    Dissipative,
}

/// Every user-settable parameter, grouped by section.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    // [run]
    pub a: f64,
    pub b: f64,
    pub n_elems: usize,
    pub t_final: f64,
    pub ic: IcKind,
    pub ic_rho: f64,
    pub ic_v: f64,
    pub record_every: usize,
    pub q_init: QInit,
    pub balance_tol: f64,
    pub snapshot_times: Vec<f64>,
    pub snapshot_points: usize,
    // [phys]
    pub gamma: f64,
    pub mu: f64,
    // [scheme]
    pub degree: usize,
    pub dt: f64,
    /// `None` means `10 p^2`.
    pub sigma: Option<f64>,
    pub sigma_min: Option<f64>,
    pub flux: FluxKind,
    pub alpha: f64,
    pub beta: f64,
    // [newton]
    pub tol: f64,
    pub max_iters: usize,
    pub damping: Option<f64>,
    // [benchmark]
    pub n_list: Vec<usize>,
}

impl Default for Config {
    /// Inviscid step problem on `[0, 1]`.
    fn default() -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            n_elems: 512,
            t_final: 0.5,
            ic: IcKind::Step,
            ic_rho: 1.5,
            ic_v: 0.0,
            record_every: 1,
            q_init: QInit::Lift,
            balance_tol: 1e-8,
            snapshot_times: Vec::new(),
            snapshot_points: 5,
            gamma: 1e-4,
            mu: 0.0,
            degree: 1,
            dt: 1e-3,
            sigma: None,
            sigma_min: None,
            flux: FluxKind::Conservative,
            alpha: 0.0,
            beta: 0.0,
            tol: 1e-10,
            max_iters: 50,
            damping: None,
            n_list: vec![32, 64, 128, 256, 512, 1024],
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::InvalidConfig(format!("cannot parse value {value:?} for key {key}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse(key, s)).collect()
}

fn parse_optional(key: &str, value: &str) -> Result<Option<f64>> {
    match value.trim() {
        "" | "none" | "default" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl Config {
    /// Defaults for the steady tanh convergence study on `[-1, 1]`.
    pub fn benchmark_default() -> Self {
        Self { a: -1.0, b: 1.0, n_elems: 32, t_final: 1.0, ic: IcKind::Tanh, dt: 1.0 / 32.0, tol: 1e-12, ..Self::default() }
    }

    pub fn preset(name: &str) -> Result<Self> {
        let step = |mu: f64| Self { mu, ..Self::default() };
        let bench = |gamma: f64| Self { gamma, ..Self::benchmark_default() };
        Ok(match name {
            "ek-step" => step(0.0),
            "nsk-step-mu1e-7" => step(1e-7),
            "nsk-step-mu1e-6" => step(1e-6),
            "nsk-step-mu1e-5" => step(1e-5),
            "bench-gamma1e-4" => bench(1e-4),
            "bench-gamma1e-5" => Self { n_list: vec![32, 64, 128, 256, 512, 1024, 2048, 4096], ..bench(1e-5) },
            "bench-gamma1e-6" => Self { n_list: vec![32, 64, 128, 256, 512, 1024, 2048, 4096], ..bench(1e-6) },
            _ => {
                return Err(Error::InvalidConfig(format!("unknown preset {name:?}; available: {}", PRESETS.join(", "))))
            }
        })
    }

    /// Sets one parameter; `section` and `key` must name a known field.
    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        let full = format!("{section}.{key}");
        let k = full.as_str();
        match (section, key) {
            ("run", "a") => self.a = parse(k, value)?,
            ("run", "b") => self.b = parse(k, value)?,
            ("run", "n_elems") => self.n_elems = parse(k, value)?,
            ("run", "t_final") => self.t_final = parse(k, value)?,
            ("run", "ic") => {
                self.ic = match value.trim() {
                    "step" => IcKind::Step,
                    "tanh" => IcKind::Tanh,
                    "constant" => IcKind::Constant,
                    v => return Err(Error::InvalidConfig(format!("{k}: expected step, tanh or constant, got {v:?}"))),
                }
            }
            ("run", "ic_rho") => self.ic_rho = parse(k, value)?,
            ("run", "ic_v") => self.ic_v = parse(k, value)?,
            ("run", "record_every") => self.record_every = parse(k, value)?,
            ("run", "q_init") => {
                self.q_init = match value.trim() {
                    "lift" => QInit::Lift,
                    "project" => QInit::Project,
                    v => return Err(Error::InvalidConfig(format!("{k}: expected lift or project, got {v:?}"))),
                }
            }
            ("run", "balance_tol") => self.balance_tol = parse(k, value)?,
            ("run", "snapshot_times") => self.snapshot_times = parse_list(k, value)?,
            ("run", "snapshot_points") => self.snapshot_points = parse(k, value)?,
            ("phys", "gamma") => self.gamma = parse(k, value)?,
            ("phys", "mu") => self.mu = parse(k, value)?,
            ("scheme", "degree") => self.degree = parse(k, value)?,
            ("scheme", "dt") => self.dt = parse(k, value)?,
            ("scheme", "sigma") => self.sigma = parse_optional(k, value)?,
            ("scheme", "sigma_min") => self.sigma_min = parse_optional(k, value)?,
            ("scheme", "flux") => {
                self.flux = match value.trim() {
                    "conservative" => FluxKind::Conservative,
                    "dissipative" => FluxKind::Dissipative,
                    v => return Err(Error::InvalidConfig(format!("{k}: expected conservative or dissipative, got {v:?}"))),
                }
            }
            ("scheme", "alpha") => self.alpha = parse(k, value)?,
            ("scheme", "beta") => self.beta = parse(k, value)?,
            ("newton", "tol") => self.tol = parse(k, value)?,
            ("newton", "max_iters") => self.max_iters = parse(k, value)?,
            ("newton", "damping") => self.damping = parse_optional(k, value)?,
            ("benchmark", "n_list") => self.n_list = parse_list(k, value)?,
            _ => return Err(Error::InvalidConfig(format!("unknown config key {full:?}"))),
        }
        Ok(())
    }

    /// Applies a `section.key=value` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (path, value) =
            spec.split_once('=').ok_or_else(|| Error::InvalidConfig(format!("override {spec:?} is not of the form section.key=value")))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::InvalidConfig(format!("override key {path:?} must be written as section.key")))?;
        self.set(section, key, value)
    }

    /// Applies every entry of a config text on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::InvalidConfig(format!("malformed config: {e}")))?;
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(Error::InvalidConfig(format!("key {key:?} appears outside any section")));
                }
                continue;
            };
            for (key, value) in props.iter() {
                self.set(section, key, value)?;
            }
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.merge_str(&text)
    }

    pub fn flux_family(&self) -> FluxFamily {
        match self.flux {
            FluxKind::Conservative => FluxFamily::Conservative,
            FluxKind::Dissipative => FluxFamily::Dissipative { alpha: self.alpha, beta: self.beta },
        }
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        let phys = PhysParams { gamma: self.gamma, mu: self.mu, well: DoubleWell::default() };
        let mut s = SchemeConfig::new(phys, self.degree, self.dt);
        if let Some(sigma) = self.sigma {
            s.sigma = sigma;
        }
        s.sigma_min = self.sigma_min.unwrap_or(SchemeConfig::default_sigma(self.degree).min(s.sigma));
        s.flux = self.flux_family();
        s.validate()?;
        Ok(s)
    }

    pub fn newton_config(&self) -> NewtonConfig {
        NewtonConfig { tol: self.tol, max_iters: self.max_iters, damping: self.damping }
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let ic = match self.ic {
            IcKind::Step => InitialCondition::Step,
            IcKind::Tanh => InitialCondition::TanhSteady,
            IcKind::Constant => InitialCondition::Constant { rho: self.ic_rho, v: self.ic_v },
        };
        if self.snapshot_points == 0 {
            return Err(Error::InvalidConfig("snapshot_points must be at least 1".into()));
        }
        let mut cfg = RunConfig::new(self.a, self.b, self.n_elems, self.scheme_config()?, self.t_final, ic);
        cfg.newton = self.newton_config();
        cfg.record_every = self.record_every;
        cfg.q_init = self.q_init;
        cfg.balance_tol = self.balance_tol;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Full parameter listing in the input format, with defaults resolved.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("default".to_string(), |x| x.to_string());
        let ic = match self.ic {
            IcKind::Step => "step",
            IcKind::Tanh => "tanh",
            IcKind::Constant => "constant",
        };
        let q_init = match self.q_init {
            QInit::Lift => "lift",
            QInit::Project => "project",
        };
        let flux = match self.flux {
            FluxKind::Conservative => "conservative",
            FluxKind::Dissipative => "dissipative",
        };
        let sigma = self.sigma.unwrap_or(SchemeConfig::default_sigma(self.degree));
        let mut s = String::new();
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "a = {}\nb = {}\nn_elems = {}\nt_final = {}", self.a, self.b, self.n_elems, self.t_final);
        let _ = writeln!(s, "ic = {ic}\nic_rho = {}\nic_v = {}", self.ic_rho, self.ic_v);
        let _ = writeln!(s, "record_every = {}\nq_init = {q_init}\nbalance_tol = {}", self.record_every, self.balance_tol);
        let _ = writeln!(s, "snapshot_times = {}\nsnapshot_points = {}", join(&self.snapshot_times), self.snapshot_points);
        let _ = writeln!(s, "\n[phys]\ngamma = {}\nmu = {}", self.gamma, self.mu);
        let _ = writeln!(s, "\n[scheme]\ndegree = {}\ndt = {}\nsigma = {sigma}\nsigma_min = {}", self.degree, self.dt, opt(self.sigma_min));
        let _ = writeln!(s, "flux = {flux}\nalpha = {}\nbeta = {}", self.alpha, self.beta);
        let _ = writeln!(s, "\n[newton]\ntol = {}\nmax_iters = {}\ndamping = {}", self.tol, self.max_iters, opt(self.damping));
        let _ = writeln!(s, "\n[benchmark]\nn_list = {}", join(&self.n_list));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for name in PRESETS {
            let c = Config::preset(name).unwrap();
            c.run_config().unwrap();
        }
        assert!(Config::preset("nope").is_err());
    }

    #[test]
    fn text_roundtrip() {
        let mut c = Config::preset("nsk-step-mu1e-6").unwrap();
        c.snapshot_times = vec![0.01, 0.05];
        c.damping = Some(0.5);
        let mut back = Config::default();
        back.merge_str(&c.to_text()).unwrap();
        c.sigma = Some(10.0);
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_key_is_named() {
        let mut c = Config::default();
        let err = c.merge_str("[phys]\ngama = 1e-4\n").unwrap_err().to_string();
        assert!(err.contains("phys.gama"), "{err}");
        let err = c.apply_override("scheme.dtt=0.1").unwrap_err().to_string();
        assert!(err.contains("scheme.dtt"), "{err}");
        assert!(c.merge_str("gamma = 1\n").is_err());
    }

    #[test]
    fn overrides_and_validation() {
        let mut c = Config::default();
        c.apply_override("phys.mu=1e-6").unwrap();
        c.apply_override("benchmark.n_list=8, 16,32").unwrap();
        assert_eq!(c.mu, 1e-6);
        assert_eq!(c.n_list, vec![8, 16, 32]);
        assert!(c.apply_override("phys.mu").is_err());
        c.apply_override("scheme.dt=2").unwrap();
        assert!(c.run_config().is_err());
    }
}
