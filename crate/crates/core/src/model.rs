//! Problem data: material constants, the latent-heat law L = γ s^β ṡ^δ, and
//! the condition imposed at the fixed face x = 0.
//!
//! Units are not tracked. In SI: `a` in m/s^½ (a² is the diffusivity in
//! m²/s), `k` in W/(m·°C), and `gamma` in whatever makes γ s^β ṡ^δ a latent
//! heat per unit volume.

use crate::error::{Error, Result, Violation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Square root of the diffusivity.
    pub a: f64,
    /// Thermal conductivity.
    pub k: f64,
    /// Latent-heat coefficient γ.
    pub gamma: f64,
}

/// L = γ s^β ṡ^δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatentHeatLaw {
    pub beta: f64,
    pub delta: f64,
}

impl LatentHeatLaw {
    pub fn new(beta: f64, delta: f64) -> Self {
        Self { beta, delta }
    }

    /// α = β − δ, the time power of the fixed-face data.
    pub fn alpha(&self) -> f64 {
        self.beta - self.delta
    }

    /// β + δ + 1, the power of z on the right of the front equation.
    pub fn front_power(&self) -> f64 {
        self.beta + self.delta + 1.0
    }

    fn violations(&self, out: &mut Vec<Violation>) {
        let (beta, delta) = (self.beta, self.delta);
        if !beta.is_finite() {
            out.push(Violation::NotFinite { name: "beta" });
        }
        if !delta.is_finite() {
            out.push(Violation::NotFinite { name: "delta" });
        }
        if !(beta.is_finite() && delta.is_finite()) {
            return;
        }
        if beta < delta {
            out.push(Violation::BetaBelowDelta { beta, delta });
        }
        let sum = self.front_power();
        if sum <= 0.0 {
            out.push(Violation::NonPositiveExponentSum { sum });
        }
    }
}

/// Condition at the fixed face x = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// u(0,t) = u0 t^{α/2}
    Dirichlet { u0: f64 },
    /// k u_x(0,t) = −q0 t^{(α−1)/2}
    Neumann { q0: f64 },
    /// k u_x(0,t) = (h0/√t) [u(0,t) − u_inf t^{α/2}]
    Robin { h0: f64, u_inf: f64 },
    /// k u_x(0,t) = (h0/√t) [λ u(0,t) − u_inf t^{α/2}]
    General { lambda: f64, h0: f64, u_inf: f64 },
}

/// Data of the generalized convective condition (λ, h0, u∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvectiveData {
    pub lambda: f64,
    pub h0: f64,
    pub u_inf: f64,
}

impl BoundaryCondition {
    pub fn kind(&self) -> BcKind {
        match self {
            BoundaryCondition::Dirichlet { .. } => BcKind::Dirichlet,
            BoundaryCondition::Neumann { .. } => BcKind::Neumann,
            BoundaryCondition::Robin { .. } => BcKind::Robin,
            BoundaryCondition::General { .. } => BcKind::General,
        }
    }

    /// The condition written in the (λ, h0, u∞) form. A Neumann flux q0 only
    /// enters through the product h0·u∞, so it maps to λ = 0, h0 = q0, u∞ = 1.
    /// `None` for Dirichlet.
    pub fn as_convective(&self) -> Option<ConvectiveData> {
        match *self {
            BoundaryCondition::Dirichlet { .. } => None,
            BoundaryCondition::Neumann { q0 } => Some(ConvectiveData {
                lambda: 0.0,
                h0: q0,
                u_inf: 1.0,
            }),
            BoundaryCondition::Robin { h0, u_inf } => Some(ConvectiveData {
                lambda: 1.0,
                h0,
                u_inf,
            }),
            BoundaryCondition::General { lambda, h0, u_inf } => {
                Some(ConvectiveData { lambda, h0, u_inf })
            }
        }
    }

    fn violations(&self, out: &mut Vec<Violation>) {
        let mut positive = |name: &'static str, value: f64| {
            if !value.is_finite() {
                out.push(Violation::NotFinite { name });
            } else if value <= 0.0 {
                out.push(Violation::Boundary { name, value });
            }
        };
        match *self {
            BoundaryCondition::Dirichlet { u0 } => positive("u0", u0),
            BoundaryCondition::Neumann { q0 } => positive("q0", q0),
            BoundaryCondition::Robin { h0, u_inf } => {
                positive("h0", h0);
                positive("u_inf", u_inf);
            }
            BoundaryCondition::General { lambda, h0, u_inf } => {
                positive("h0", h0);
                positive("u_inf", u_inf);
                if !lambda.is_finite() {
                    out.push(Violation::NotFinite { name: "lambda" });
                } else if lambda < 0.0 {
                    out.push(Violation::Boundary {
                        name: "lambda",
                        value: lambda,
                    });
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
    General,
}

impl BcKind {
    pub fn name(&self) -> &'static str {
        match self {
            BcKind::Dirichlet => "dirichlet",
            BcKind::Neumann => "neumann",
            BcKind::Robin => "robin",
            BcKind::General => "general",
        }
    }
}

impl std::str::FromStr for BcKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BcKind::Dirichlet),
            "neumann" => Ok(BcKind::Neumann),
            "robin" => Ok(BcKind::Robin),
            "general" => Ok(BcKind::General),
            other => Err(Error::Config(format!(
                "unknown bc `{other}` (expected dirichlet, neumann, robin or general)"
            ))),
        }
    }
}

/// Unvalidated problem description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawSpec {
    pub material: MaterialParams,
    pub law: LatentHeatLaw,
    pub bc: BoundaryCondition,
}

impl RawSpec {
    pub fn new(material: MaterialParams, law: LatentHeatLaw, bc: BoundaryCondition) -> Self {
        Self { material, law, bc }
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(self) -> Result<ProblemSpec> {
        let mut violations = Vec::new();
        for (name, value) in [
            ("a", self.material.a),
            ("k", self.material.k),
            ("gamma", self.material.gamma),
        ] {
            if !value.is_finite() {
                violations.push(Violation::NotFinite { name });
            } else if value <= 0.0 {
                violations.push(Violation::Material { name, value });
            }
        }
        self.law.violations(&mut violations);
        self.bc.violations(&mut violations);
        if violations.is_empty() {
            Ok(ProblemSpec {
                raw: self,
                alpha: self.law.alpha(),
            })
        } else {
            Err(Error::Validation(violations))
        }
    }
}

/// A validated problem. Immutable; only obtainable through [`RawSpec::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    raw: RawSpec,
    alpha: f64,
}

impl ProblemSpec {
    pub fn material(&self) -> &MaterialParams {
        &self.raw.material
    }

    pub fn law(&self) -> &LatentHeatLaw {
        &self.raw.law
    }

    pub fn bc(&self) -> &BoundaryCondition {
        &self.raw.bc
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn raw(&self) -> RawSpec {
        self.raw
    }

    /// Same material and law with a different fixed-face condition.
    pub fn with_bc(&self, bc: BoundaryCondition) -> Result<ProblemSpec> {
        RawSpec { bc, ..self.raw }.validate()
    }

    pub fn dimensionless(&self) -> DimensionlessGroups {
        dimensionless(self)
    }
}

/// Q (flux number), Ste (generalized Stefan number), Bi (generalized Biot number).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DimensionlessGroups {
    pub q: Option<f64>,
    pub ste: Option<f64>,
    pub bi: Option<f64>,
}

/// Groups defined for the spec's boundary condition:
/// `Q = q0/(γ a^{β+δ+1})`, `Ste = u∞ k/(γ a^{β+δ+2})`, `Bi = a h0/k`.
/// Nothing is defined for a Dirichlet condition.
pub fn dimensionless(spec: &ProblemSpec) -> DimensionlessGroups {
    let MaterialParams { a, k, gamma } = *spec.material();
    let p = spec.law().front_power();
    let ste = |u_inf: f64| u_inf * k / (gamma * a.powf(p + 1.0));
    let bi = |h0: f64| a * h0 / k;
    match *spec.bc() {
        BoundaryCondition::Dirichlet { .. } => DimensionlessGroups::default(),
        BoundaryCondition::Neumann { q0 } => DimensionlessGroups {
            q: Some(q0 / (gamma * a.powf(p))),
            ..Default::default()
        },
        BoundaryCondition::Robin { h0, u_inf } | BoundaryCondition::General { h0, u_inf, .. } => {
            DimensionlessGroups {
                q: None,
                ste: Some(ste(u_inf)),
                bi: Some(bi(h0)),
            }
        }
    }
}

/// Inverse of [`dimensionless`] for the Neumann flux: q0 giving flux number `q`.
pub fn q0_for_flux_number(material: &MaterialParams, law: &LatentHeatLaw, q: f64) -> f64 {
    q * material.gamma * material.a.powf(law.front_power())
}

/// u∞ (or u0) giving Stefan number `ste`.
pub fn temperature_for_stefan_number(material: &MaterialParams, law: &LatentHeatLaw, ste: f64) -> f64 {
    ste * material.gamma * material.a.powf(law.front_power() + 1.0) / material.k
}

/// h0 giving Biot number `bi`.
pub fn h0_for_biot_number(material: &MaterialParams, bi: f64) -> f64 {
    bi * material.k / material.a
}
