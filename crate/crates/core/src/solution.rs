//! The similarity solution
//!
//! ```text
//! u(x,t) = t^{α/2} [C1 M(−α/2, ½, −η²) + C2 η M(−α/2+½, 3/2, −η²)],  η = x/(2a√t)
//! s(t)   = 2ξa√t
//! ```
//!
//! defined on 0 ≤ x ≤ s(t), t > 0.

use crate::error::{Error, Result};
use crate::kummer::kummer_m;
use crate::model::{BoundaryCondition, MaterialParams, ProblemSpec};
use crate::solver::{self, RootReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilaritySolution {
    spec: ProblemSpec,
    xi: f64,
    c1: f64,
    c2: f64,
}

/// Growth regime of L(t) ∝ t^p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatentRegime {
    Sublinear,
    Linear,
    Superlinear,
}

impl LatentRegime {
    pub fn name(&self) -> &'static str {
        match self {
            LatentRegime::Sublinear => "sublinear",
            LatentRegime::Linear => "linear",
            LatentRegime::Superlinear => "superlinear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatentHeat {
    pub value: f64,
    pub power: f64,
    pub regime: LatentRegime,
}

/// M(−α/2, ½, −ξ²) and M(−α/2+½, 3/2, −ξ²).
fn front_kummers(alpha: f64, xi: f64) -> Result<(f64, f64)> {
    let w = -xi * xi;
    Ok((
        kummer_m(-alpha / 2.0, 0.5, w)?,
        kummer_m(-alpha / 2.0 + 0.5, 1.5, w)?,
    ))
}

/// Solves `spec` with default settings and assembles the solution.
pub fn solve(spec: &ProblemSpec) -> Result<SimilaritySolution> {
    let root = solver::solve(spec)?;
    assemble(spec, &root)
}

/// C1 and C2 for the solved front coefficient.
pub fn assemble(spec: &ProblemSpec, root: &RootReport) -> Result<SimilaritySolution> {
    let xi = root.xi;
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::Degenerate(format!("xi = {xi} is not a positive number")));
    }
    let alpha = spec.alpha();
    let MaterialParams { a, k, .. } = *spec.material();
    let (m1, m2) = front_kummers(alpha, xi)?;
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::Degenerate(format!(
            "front Kummer values not positive at xi = {xi}: {m1}, {m2}"
        )));
    }
    let (c1, c2) = match *spec.bc() {
        BoundaryCondition::Dirichlet { u0 } => (u0, -u0 * m1 / (xi * m2)),
        BoundaryCondition::Neumann { q0 } => {
            let c2 = -2.0 * a * q0 / k;
            (-c2 * xi * m2 / m1, c2)
        }
        BoundaryCondition::Robin { .. } | BoundaryCondition::General { .. } => {
            let c = spec.bc().as_convective().expect("convective condition");
            let den = k / (2.0 * a * c.h0) * m1 + c.lambda * xi * m2;
            if !(den > 0.0) {
                return Err(Error::Degenerate(format!("C1 denominator {den} is not positive")));
            }
            (c.u_inf * xi * m2 / den, -c.u_inf * m1 / den)
        }
    };
    Ok(SimilaritySolution {
        spec: *spec,
        xi,
        c1,
        c2,
    })
}

impl SimilaritySolution {
    /// Builds a solution from given coefficients without any checks. Meant
    /// for tests and for exercising the verification harness.
    pub fn from_parts(spec: ProblemSpec, xi: f64, c1: f64, c2: f64) -> Self {
        Self { spec, xi, c1, c2 }
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn alpha(&self) -> f64 {
        self.spec.alpha()
    }

    fn a(&self) -> f64 {
        self.spec.material().a
    }

    fn check_time(t: f64) -> Result<()> {
        if t > 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!("t = {t} must be positive")))
        }
    }

    /// η-profile φ(η) = C1 M(−α/2, ½, −η²) + C2 η M(−α/2+½, 3/2, −η²).
    /// Defined for every η ≥ 0, including past the front.
    pub fn profile(&self, eta: f64) -> Result<f64> {
        let alpha = self.alpha();
        let w = -eta * eta;
        Ok(self.c1 * kummer_m(-alpha / 2.0, 0.5, w)?
            + self.c2 * eta * kummer_m(-alpha / 2.0 + 0.5, 1.5, w)?)
    }

    /// φ'(η) = 2αC1 η M(−α/2+1, 3/2, −η²) + C2 M(−α/2+½, ½, −η²).
    pub fn profile_derivative(&self, eta: f64) -> Result<f64> {
        let alpha = self.alpha();
        let w = -eta * eta;
        Ok(2.0 * alpha * self.c1 * eta * kummer_m(-alpha / 2.0 + 1.0, 1.5, w)?
            + self.c2 * kummer_m(-alpha / 2.0 + 0.5, 0.5, w)?)
    }

    /// u(x,t) for 0 ≤ x ≤ s(t).
    pub fn eval_u(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let (s, _) = self.eval_front(t)?;
        if !(x >= 0.0) || x > s {
            return Err(Error::Domain(format!(
                "x = {x} lies outside the phase [0, s(t) = {s}]"
            )));
        }
        self.eval_u_unchecked(x, t)
    }

    /// u(x,t), taken as 0 beyond the front.
    pub fn eval_u_zero_extended(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let (s, _) = self.eval_front(t)?;
        if x > s {
            return Ok(0.0);
        }
        self.eval_u(x, t)
    }

    /// The closed form evaluated at any x ≥ 0, without the phase check.
    pub fn eval_u_unchecked(&self, x: f64, t: f64) -> Result<f64> {
        let eta = x / (2.0 * self.a() * t.sqrt());
        Ok(t.powf(self.alpha() / 2.0) * self.profile(eta)?)
    }

    /// ∂u/∂x from the closed form.
    pub fn eval_u_x(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let a = self.a();
        let eta = x / (2.0 * a * t.sqrt());
        Ok(t.powf((self.alpha() - 1.0) / 2.0) / (2.0 * a) * self.profile_derivative(eta)?)
    }

    /// (s(t), ṡ(t)) = (2ξa√t, ξa/√t).
    pub fn eval_front(&self, t: f64) -> Result<(f64, f64)> {
        Self::check_time(t)?;
        let a = self.a();
        Ok((2.0 * self.xi * a * t.sqrt(), self.xi * a / t.sqrt()))
    }

    /// L = γ s^β ṡ^δ = γ 2^β a^{β+δ} ξ^{β+δ} t^{(β−δ)/2}.
    pub fn latent_heat(&self, t: f64) -> Result<LatentHeat> {
        Self::check_time(t)?;
        let law = self.spec.law();
        let MaterialParams { a, gamma, .. } = *self.spec.material();
        let sum = law.beta + law.delta;
        let power = (law.beta - law.delta) / 2.0;
        let value = gamma
            * 2f64.powf(law.beta)
            * a.powf(sum)
            * self.xi.powf(sum)
            * t.powf(power);
        let regime = if (power - 1.0).abs() <= 1e-12 {
            LatentRegime::Linear
        } else if power < 1.0 {
            LatentRegime::Sublinear
        } else {
            LatentRegime::Superlinear
        };
        Ok(LatentHeat {
            value,
            power,
            regime,
        })
    }

    /// k ∂u/∂x(0,t) = k C2 t^{(α−1)/2} / (2a).
    pub fn eval_fixed_face_flux(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let MaterialParams { a, k, .. } = *self.spec.material();
        Ok(k * self.c2 * t.powf((self.alpha() - 1.0) / 2.0) / (2.0 * a))
    }

    /// ∂u/∂x(s(t),t) in the reduced form t^{(α−1)/2} C2 / (2a M(α/2+½, ½, ξ²)),
    /// which follows from u(s,t) = 0 and avoids the cancellation between the
    /// C1 and C2 terms at the front.
    pub fn front_gradient(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let alpha = self.alpha();
        let m = kummer_m(alpha / 2.0 + 0.5, 0.5, self.xi * self.xi)?;
        Ok(t.powf((alpha - 1.0) / 2.0) * self.c2 / (2.0 * self.a() * m))
    }

    /// Right-hand side of the Stefan condition, γ s^β ṡ^{δ+1}.
    pub fn stefan_flux(&self, t: f64) -> Result<f64> {
        let (s, sdot) = self.eval_front(t)?;
        let law = self.spec.law();
        Ok(self.spec.material().gamma * s.powf(law.beta) * sdot.powf(law.delta + 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kummer::erf;
    use crate::model::{LatentHeatLaw, RawSpec};

    fn spec(beta: f64, delta: f64, bc: BoundaryCondition) -> ProblemSpec {
        RawSpec::new(
            MaterialParams {
                a: 1.0,
                k: 1.0,
                gamma: 1.0,
            },
            LatentHeatLaw::new(beta, delta),
            bc,
        )
        .validate()
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn dirichlet_coefficients() {
        let s = spec(1.0, 0.0, BoundaryCondition::Dirichlet { u0: 1.0 });
        let sol = solve(&s).unwrap();
        assert_eq!(sol.c1(), 1.0);
        assert!(rel(sol.eval_u(0.0, 2.0).unwrap(), 2f64.powf(0.5)) < 1e-15);
    }

    #[test]
    fn neumann_coefficients() {
        let s = spec(0.0, 0.0, BoundaryCondition::Neumann { q0: 1.0 });
        assert_eq!(solve(&s).unwrap().c2(), -2.0);

        let s = spec(0.0, 0.0, BoundaryCondition::Neumann { q0: 0.1 });
        let root = RootReport {
            xi: 0.0990,
            iterations: 0,
            residual: 0.0,
            method: solver::RootMethod::Newton,
            bracket: (0.0, 1.0),
        };
        let sol = assemble(&s, &root).unwrap();
        // M(1/2, 3/2, −x) = Σ (−x)^n / ((2n+1) n!)
        let x: f64 = 0.0990 * 0.0990;
        let m: f64 = (0..10)
            .map(|n| (-x).powi(n) / ((2 * n + 1) as f64 * (1..=n).product::<i32>().max(1) as f64))
            .sum();
        assert!((m - 0.996_742).abs() < 1e-6);
        assert!(rel(sol.c1(), 2.0 * 0.1 * 0.0990 * m) < 1e-14);
        assert!((sol.c1() - 0.019_735).abs() < 1e-6);
    }

    #[test]
    fn classical_dirichlet_matches_erf_profile() {
        let s = spec(0.0, 0.0, BoundaryCondition::Dirichlet { u0: 1.0 });
        let sol = solve(&s).unwrap();
        let xi = sol.xi();
        let t: f64 = 1.7;
        for i in 0..=10 {
            let eta = xi * i as f64 / 10.0;
            let x = 2.0 * eta * t.sqrt();
            let expected = 1.0 - erf(eta) / erf(xi);
            assert!((sol.eval_u(x, t).unwrap() - expected).abs() < 1e-14);
        }
        // spot value at η = ξ/2 with ξ ≈ 0.4648
        let u = 1.0 - erf(0.2324) / erf(0.4648);
        assert!((u - 0.4733).abs() < 1e-4);
    }

    #[test]
    fn front_temperature_vanishes() {
        let s = spec(1.0, -0.5, BoundaryCondition::Robin { h0: 10.0, u_inf: 0.5 });
        let sol = solve(&s).unwrap();
        for &t in &[0.1, 1.0, 9.0] {
            let (front, _) = sol.eval_front(t).unwrap();
            assert!(sol.eval_u(front, t).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn outside_phase_is_error() {
        let s = spec(0.0, 0.0, BoundaryCondition::Dirichlet { u0: 1.0 });
        let sol = solve(&s).unwrap();
        let (front, _) = sol.eval_front(1.0).unwrap();
        assert!(matches!(sol.eval_u(front * 1.01, 1.0), Err(Error::Domain(_))));
        assert!(matches!(sol.eval_u(0.0, 0.0), Err(Error::Domain(_))));
        assert_eq!(sol.eval_u_zero_extended(front * 1.01, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn front_examples() {
        let s = spec(0.0, 0.0, BoundaryCondition::Dirichlet { u0: 1.0 });
        let sol = SimilaritySolution::from_parts(s, 0.5, 1.0, -1.0);
        assert_eq!(sol.eval_front(1.0).unwrap(), (1.0, 0.5));
        let (s1, _) = sol.eval_front(1.0).unwrap();
        let (s4, _) = sol.eval_front(4.0).unwrap();
        assert_eq!(s4, 2.0 * s1);
        for &t in &[0.3, 2.0, 11.0] {
            let (s, sdot) = sol.eval_front(t).unwrap();
            assert!(rel(2.0 * t * sdot, s) < 1e-15);
        }
    }

    #[test]
    fn latent_heat_regimes() {
        let classical = solve(&spec(0.0, 0.0, BoundaryCondition::Dirichlet { u0: 1.0 })).unwrap();
        let l = classical.latent_heat(3.0).unwrap();
        assert_eq!((l.value, l.power, l.regime), (1.0, 0.0, LatentRegime::Sublinear));

        let lin = solve(&spec(3.0, 1.0, BoundaryCondition::Neumann { q0: 0.5 })).unwrap();
        let l = lin.latent_heat(1.0).unwrap();
        assert_eq!((l.power, l.regime), (1.0, LatentRegime::Linear));

        let sup = solve(&spec(4.0, 1.0, BoundaryCondition::Neumann { q0: 0.5 })).unwrap();
        let l = sup.latent_heat(1.0).unwrap();
        assert_eq!((l.power, l.regime), (1.5, LatentRegime::Superlinear));
        // consistent with γ s^β ṡ^δ
        let (s, sdot) = sup.eval_front(2.5).unwrap();
        assert!(rel(sup.latent_heat(2.5).unwrap().value, s.powf(4.0) * sdot) < 1e-13);
    }

    #[test]
    fn fixed_face_flux_identities() {
        let n = solve(&spec(1.0, 0.0, BoundaryCondition::Neumann { q0: 0.3 })).unwrap();
        for &t in &[0.5f64, 2.0] {
            let expected = -0.3 * t.powf(0.0);
            assert!(rel(n.eval_fixed_face_flux(t).unwrap(), expected) < 1e-14);
        }

        for lambda in [1.0, 2.0] {
            let s = spec(
                1.0,
                -0.5,
                BoundaryCondition::General {
                    lambda,
                    h0: 3.0,
                    u_inf: 0.5,
                },
            );
            let sol = solve(&s).unwrap();
            for &t in &[0.5f64, 2.0] {
                let u0 = sol.eval_u(0.0, t).unwrap();
                let rhs = 3.0 / t.sqrt() * (lambda * u0 - 0.5 * t.powf(0.75));
                assert!(rel(sol.eval_fixed_face_flux(t).unwrap(), rhs) < 1e-10);
            }
        }
    }

    #[test]
    fn front_gradient_matches_direct_derivative() {
        let s = spec(3.0, 1.0, BoundaryCondition::Robin { h0: 1.0, u_inf: 0.5 });
        let sol = solve(&s).unwrap();
        let (front, _) = sol.eval_front(2.0).unwrap();
        let direct = sol.eval_u_x(front, 2.0).unwrap();
        assert!(rel(sol.front_gradient(2.0).unwrap(), direct) < 1e-12);
        let k = s.material().k;
        assert!(rel(-k * direct, sol.stefan_flux(2.0).unwrap()) < 1e-10);
    }
}
