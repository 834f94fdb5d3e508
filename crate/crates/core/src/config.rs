//! Flat `key = value` run configuration.
//!
//! Recognised keys: `beta, delta, gamma, a, k, bc, u0, q0, h0, u_inf, lambda,
//! tol, max_iter`. Blank lines and `#` comments are ignored; unknown or
//! repeated keys are errors. `a`, `k` and `gamma` default to 1.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{BcKind, BoundaryCondition, LatentHeatLaw, MaterialParams, ProblemSpec, RawSpec};
use crate::solver::{DEFAULT_MAX_ITER, DEFAULT_TOL};

pub const KEYS: [&str; 13] = [
    "beta", "delta", "gamma", "a", "k", "bc", "u0", "q0", "h0", "u_inf", "lambda", "tol", "max_iter",
];

/// Partially specified configuration; every key optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigValues {
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    pub k: Option<f64>,
    pub bc: Option<BcKind>,
    pub u0: Option<f64>,
    pub q0: Option<f64>,
    pub h0: Option<f64>,
    pub u_inf: Option<f64>,
    pub lambda: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl ConfigValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigValues::default();
        let mut seen = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.contains(&key) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            seen.push(key);
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| format!("`{key}` expects a number, got `{value}`"))
        };
        match key {
            "beta" => self.beta = Some(num()?),
            "delta" => self.delta = Some(num()?),
            "gamma" => self.gamma = Some(num()?),
            "a" => self.a = Some(num()?),
            "k" => self.k = Some(num()?),
            "u0" => self.u0 = Some(num()?),
            "q0" => self.q0 = Some(num()?),
            "h0" => self.h0 = Some(num()?),
            "u_inf" => self.u_inf = Some(num()?),
            "lambda" => self.lambda = Some(num()?),
            "tol" => self.tol = Some(num()?),
            "bc" => self.bc = Some(value.parse().map_err(|e: Error| e.to_string())?),
            "max_iter" => {
                self.max_iter = Some(
                    value
                        .parse()
                        .map_err(|_| format!("`max_iter` expects an integer, got `{value}`"))?,
                )
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Values present in `over` replace those in `self`.
    pub fn merged(self, over: ConfigValues) -> ConfigValues {
        ConfigValues {
            beta: over.beta.or(self.beta),
            delta: over.delta.or(self.delta),
            gamma: over.gamma.or(self.gamma),
            a: over.a.or(self.a),
            k: over.k.or(self.k),
            bc: over.bc.or(self.bc),
            u0: over.u0.or(self.u0),
            q0: over.q0.or(self.q0),
            h0: over.h0.or(self.h0),
            u_inf: over.u_inf.or(self.u_inf),
            lambda: over.lambda.or(self.lambda),
            tol: over.tol.or(self.tol),
            max_iter: over.max_iter.or(self.max_iter),
        }
    }

    pub fn material(&self) -> MaterialParams {
        MaterialParams {
            a: self.a.unwrap_or(1.0),
            k: self.k.unwrap_or(1.0),
            gamma: self.gamma.unwrap_or(1.0),
        }
    }

    pub fn law(&self) -> Result<LatentHeatLaw> {
        Ok(LatentHeatLaw::new(
            required(self.beta, "beta")?,
            required(self.delta, "delta")?,
        ))
    }

    pub fn boundary_condition(&self) -> Result<BoundaryCondition> {
        let kind = self.bc.ok_or_else(|| Error::Config("missing key `bc`".into()))?;
        Ok(match kind {
            BcKind::Dirichlet => BoundaryCondition::Dirichlet {
                u0: required(self.u0, "u0")?,
            },
            BcKind::Neumann => BoundaryCondition::Neumann {
                q0: required(self.q0, "q0")?,
            },
            BcKind::Robin => BoundaryCondition::Robin {
                h0: required(self.h0, "h0")?,
                u_inf: required(self.u_inf, "u_inf")?,
            },
            BcKind::General => BoundaryCondition::General {
                lambda: required(self.lambda, "lambda")?,
                h0: required(self.h0, "h0")?,
                u_inf: required(self.u_inf, "u_inf")?,
            },
        })
    }

    pub fn to_run_config(&self) -> Result<RunConfig> {
        let spec = RawSpec::new(self.material(), self.law()?, self.boundary_condition()?).validate()?;
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Config(format!("tol must be a positive number (got {tol})")));
        }
        let max_iter = self.max_iter.unwrap_or(DEFAULT_MAX_ITER);
        if max_iter == 0 {
            return Err(Error::Config("max_iter must be >= 1".into()));
        }
        Ok(RunConfig {
            spec,
            tol,
            max_iter,
        })
    }
}

fn required(v: Option<f64>, key: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("missing key `{key}`")))
}

/// A validated problem together with solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    pub tol: f64,
    pub max_iter: usize,
}
