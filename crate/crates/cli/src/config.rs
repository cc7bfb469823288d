//! Run configuration: plain `key = value` text or a flat JSON object.

use crate::CliError;
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::sync::Arc;
use tms_core::separable::{FormFactor, FormProfile};
use tms_core::stmform::{CutoffKind, CutoffProfile, ModelParams};
use tms_core::Grid;

/// Every accepted key with its default and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("beta", "0.0", "two-body coupling β"),
    ("gamma", "1.5", "three-body regularization strength γ"),
    ("lambda", "1.0", "spectral shift λ of the charge operator"),
    ("cutoff", "one", "cutoff profile θ: one, indicator, exponential, smooth_compact"),
    ("cutoff_b", "1.0", "cutoff radius b"),
    ("p_min", "0.0001", "smallest node of the momentum grid"),
    ("p_max", "10000.0", "largest node of the momentum grid"),
    ("grid_n", "256", "number of grid nodes"),
    ("l_max", "4", "largest sector written by `symbols`"),
    ("k_max", "10.0", "symbol table covers k in [-k_max, k_max]"),
    ("k_points", "201", "symbol table points per sector"),
    ("spectrum_l", "0", "sector searched by `spectrum`"),
    ("spectrum_lambda_min", "0.001", "lower end of the bound-state sweep in λ"),
    ("spectrum_lambda_max", "1000000.0", "upper end of the bound-state sweep in λ"),
    ("bound_max", "3", "largest number of bound states reported"),
    ("thomas_gammas", "0.5,0.6,0.7,0.75,0.8,0.85,0.9,1.0,1.1,1.2", "couplings scanned by `thomas`"),
    ("thomas_sizes", "256,1024", "grid sizes of the collapse probes"),
    ("form_factor", "gaussian", "form-factor profile: gaussian or exponential"),
    ("sigma", "1.0", "form-factor width"),
    ("eps", "0.4,0.2,0.1,0.05,0.025", "decreasing geometric ε ladder of `approx`"),
    ("approx_gamma", "auto", "γ of the finite-range study; auto is γ₀ + 1/2"),
    ("approx_beta", "auto", "β of the finite-range study; auto is γ/8"),
    ("approx_cutoff", "exponential", "cutoff profile of the finite-range study"),
    ("approx_cutoff_b", "4.0", "cutoff radius of the finite-range study"),
    ("approx_lambda", "2.0", "λ of the finite-range study"),
    ("approx_p_min", "0.001", "smallest node of the finite-range study grid"),
    ("approx_p_max", "1000.0", "largest node of the finite-range study grid"),
    ("seed", "1", "seed of every random test charge"),
    ("charges", "100", "number of random charges in randomized checks"),
    ("out_dir", "out", "directory receiving CSV and JSON reports"),
];

/// All settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub cutoff: CutoffKind,
    pub cutoff_b: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub grid_n: usize,
    pub l_max: usize,
    pub k_max: f64,
    pub k_points: usize,
    pub spectrum_l: usize,
    pub spectrum_lambda_min: f64,
    pub spectrum_lambda_max: f64,
    pub bound_max: usize,
    pub thomas_gammas: Vec<f64>,
    pub thomas_sizes: Vec<usize>,
    pub form_factor: FormProfile,
    pub sigma: f64,
    pub eps: Vec<f64>,
    pub approx_gamma: Option<f64>,
    pub approx_beta: Option<f64>,
    pub approx_cutoff: CutoffKind,
    pub approx_cutoff_b: f64,
    pub approx_lambda: f64,
    pub approx_p_min: f64,
    pub approx_p_max: f64,
    pub seed: u64,
    pub charges: usize,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut cfg = RunConfig {
            beta: 0.0,
            gamma: 0.0,
            lambda: 0.0,
            cutoff: CutoffKind::One,
            cutoff_b: 0.0,
            p_min: 0.0,
            p_max: 0.0,
            grid_n: 0,
            l_max: 0,
            k_max: 0.0,
            k_points: 0,
            spectrum_l: 0,
            spectrum_lambda_min: 0.0,
            spectrum_lambda_max: 0.0,
            bound_max: 0,
            thomas_gammas: Vec::new(),
            thomas_sizes: Vec::new(),
            form_factor: FormProfile::Gaussian,
            sigma: 0.0,
            eps: Vec::new(),
            approx_gamma: None,
            approx_beta: None,
            approx_cutoff: CutoffKind::One,
            approx_cutoff_b: 0.0,
            approx_lambda: 0.0,
            approx_p_min: 0.0,
            approx_p_max: 0.0,
            seed: 0,
            charges: 0,
            out_dir: String::new(),
        };
        for (key, value, _) in KEYS {
            cfg.set(key, value).expect("documented defaults parse");
        }
        cfg
    }
}

fn bad(key: &str, value: &str, what: &str) -> CliError {
    CliError::Config(format!("{key} = {value:?}: {what}"))
}

fn float(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = v.parse().map_err(|_| bad(key, v, "expected a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, v, "expected a finite number"))
    }
}

fn count(key: &str, v: &str) -> Result<usize, CliError> {
    v.parse().map_err(|_| bad(key, v, "expected a non-negative integer"))
}

fn auto(key: &str, v: &str) -> Result<Option<f64>, CliError> {
    if v == "auto" {
        Ok(None)
    } else {
        float(key, v).map(Some)
    }
}

fn list<T, F: Fn(&str, &str) -> Result<T, CliError>>(key: &str, v: &str, item: F) -> Result<Vec<T>, CliError> {
    let out = v.split(',').map(|s| item(key, s.trim())).collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(bad(key, v, "expected a non-empty list"));
    }
    Ok(out)
}

fn cutoff(key: &str, v: &str) -> Result<CutoffKind, CliError> {
    CutoffKind::parse(v).map_err(|e| bad(key, v, &e.to_string()))
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn join_f(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "auto".to_string(), num)
}

impl RunConfig {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "beta" => self.beta = float(key, v)?,
            "gamma" => self.gamma = float(key, v)?,
            "lambda" => self.lambda = float(key, v)?,
            "cutoff" => self.cutoff = cutoff(key, v)?,
            "cutoff_b" => self.cutoff_b = float(key, v)?,
            "p_min" => self.p_min = float(key, v)?,
            "p_max" => self.p_max = float(key, v)?,
            "grid_n" => self.grid_n = count(key, v)?,
            "l_max" => self.l_max = count(key, v)?,
            "k_max" => self.k_max = float(key, v)?,
            "k_points" => self.k_points = count(key, v)?,
            "spectrum_l" => self.spectrum_l = count(key, v)?,
            "spectrum_lambda_min" => self.spectrum_lambda_min = float(key, v)?,
            "spectrum_lambda_max" => self.spectrum_lambda_max = float(key, v)?,
            "bound_max" => self.bound_max = count(key, v)?,
            "thomas_gammas" => self.thomas_gammas = list(key, v, float)?,
            "thomas_sizes" => self.thomas_sizes = list(key, v, count)?,
            "form_factor" => self.form_factor = FormProfile::parse(v).map_err(|e| bad(key, v, &e.to_string()))?,
            "sigma" => self.sigma = float(key, v)?,
            "eps" => self.eps = list(key, v, float)?,
            "approx_gamma" => self.approx_gamma = auto(key, v)?,
            "approx_beta" => self.approx_beta = auto(key, v)?,
            "approx_cutoff" => self.approx_cutoff = cutoff(key, v)?,
            "approx_cutoff_b" => self.approx_cutoff_b = float(key, v)?,
            "approx_lambda" => self.approx_lambda = float(key, v)?,
            "approx_p_min" => self.approx_p_min = float(key, v)?,
            "approx_p_max" => self.approx_p_max = float(key, v)?,
            "seed" => self.seed = v.parse().map_err(|_| bad(key, v, "expected an unsigned integer"))?,
            "charges" => self.charges = count(key, v)?,
            "out_dir" => {
                if v.is_empty() {
                    return Err(bad(key, v, "expected a path"));
                }
                self.out_dir = v.to_string()
            }
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Every key with its current value, in the order of [`KEYS`].
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let values = [
            num(self.beta),
            num(self.gamma),
            num(self.lambda),
            self.cutoff.name().to_string(),
            num(self.cutoff_b),
            num(self.p_min),
            num(self.p_max),
            self.grid_n.to_string(),
            self.l_max.to_string(),
            num(self.k_max),
            self.k_points.to_string(),
            self.spectrum_l.to_string(),
            num(self.spectrum_lambda_min),
            num(self.spectrum_lambda_max),
            self.bound_max.to_string(),
            join_f(&self.thomas_gammas),
            join(&self.thomas_sizes),
            self.form_factor.name().to_string(),
            num(self.sigma),
            join_f(&self.eps),
            opt(self.approx_gamma),
            opt(self.approx_beta),
            self.approx_cutoff.name().to_string(),
            num(self.approx_cutoff_b),
            num(self.approx_lambda),
            num(self.approx_p_min),
            num(self.approx_p_max),
            self.seed.to_string(),
            self.charges.to_string(),
            self.out_dir.clone(),
        ];
        KEYS.iter().map(|k| k.0).zip(values).collect()
    }

    /// Parses `key = value` lines; `#` starts a comment. Text whose first
    /// non-blank character is `{` is read as a flat JSON object instead.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            return Self::parse_json(text);
        }
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Self::from_pairs(pairs)
    }

    fn parse_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let obj = value.as_object().ok_or_else(|| CliError::Config("JSON config must be an object".into()))?;
        let scalar = |k: &str, v: &serde_json::Value| match v {
            serde_json::Value::String(s) => Ok(s.clone()),
            serde_json::Value::Number(n) => Ok(n.to_string()),
            _ => Err(CliError::Config(format!("{k}: expected a string or a number"))),
        };
        let pairs = obj
            .iter()
            .map(|(k, v)| {
                let text = match v {
                    serde_json::Value::Array(items) => {
                        items.iter().map(|x| scalar(k, x)).collect::<Result<Vec<_>, _>>()?.join(",")
                    }
                    other => scalar(k, other)?,
                };
                Ok((k.clone(), text))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Self::from_pairs(pairs)
    }

    fn from_pairs(pairs: Vec<(String, String)>) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = BTreeSet::new();
        for (k, v) in pairs {
            if !seen.insert(k.clone()) {
                return Err(CliError::Config(format!("duplicate key {k:?}")));
            }
            cfg.set(&k, &v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical `key = value` text with every key.
    pub fn emit(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// The same settings as a JSON object of strings.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self.entries().into_iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v))).collect();
        serde_json::Value::Object(map)
    }

    /// Hex SHA-256 of [`RunConfig::emit`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.emit().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks the settings that can be judged without running anything.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        if !(self.p_min > 0.0 && self.p_max > self.p_min) {
            return fail(format!("need 0 < p_min < p_max, got {} and {}", self.p_min, self.p_max));
        }
        if !(self.approx_p_min > 0.0 && self.approx_p_max > self.approx_p_min) {
            return fail("need 0 < approx_p_min < approx_p_max".into());
        }
        if self.grid_n < 8 {
            return fail(format!("grid_n = {} is too small", self.grid_n));
        }
        if self.k_points == 0 || !(self.k_max >= 0.0) {
            return fail("symbol table needs k_points > 0 and k_max >= 0".into());
        }
        if !(self.spectrum_lambda_min > 0.0 && self.spectrum_lambda_max > self.spectrum_lambda_min) {
            return fail("need 0 < spectrum_lambda_min < spectrum_lambda_max".into());
        }
        if self.thomas_sizes.iter().any(|&n| n < 8) {
            return fail("thomas_sizes entries must be at least 8".into());
        }
        if !(self.sigma > 0.0) {
            return fail(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.eps.iter().any(|&e| !(e > 0.0)) {
            return fail("eps entries must be positive".into());
        }
        self.model_params()?;
        Ok(())
    }

    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.beta, self.gamma, self.lambda, CutoffProfile::new(self.cutoff, self.cutoff_b)?)?)
    }

    pub fn grid(&self) -> Result<Arc<Grid>, CliError> {
        Ok(Arc::new(Grid::new(self.p_min, self.p_max, self.grid_n)?))
    }

    pub fn approx_grid(&self) -> Result<Arc<Grid>, CliError> {
        Ok(Arc::new(Grid::new(self.approx_p_min, self.approx_p_max, self.grid_n)?))
    }

    pub fn form(&self) -> Result<FormFactor, CliError> {
        Ok(FormFactor::new(self.form_factor, self.sigma)?)
    }

    /// Model of the finite-range study with the `auto` entries resolved.
    pub fn approx_params(&self) -> Result<ModelParams, CliError> {
        let gamma0 = tms_core::separable::chi_constants(&self.form()?)?.gamma0;
        let gamma = self.approx_gamma.unwrap_or(gamma0 + 0.5);
        let beta = self.approx_beta.unwrap_or(gamma / 8.0);
        let cut = CutoffProfile::new(self.approx_cutoff, self.approx_cutoff_b)?;
        Ok(ModelParams::new(beta, gamma, self.approx_lambda, cut)?)
    }
}
