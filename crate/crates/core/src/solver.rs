//! The front coefficient ξ in s(t) = 2ξa√t.
//!
//! Every boundary condition leads to an equation of the form
//!
//! ```text
//! F(z) = C / D(z) − z^{β+δ+1} = 0,   z > 0
//! ```
//!
//! with a positive constant C and an increasing denominator D:
//!
//! | condition        | D(z)                                                 |
//! |------------------|------------------------------------------------------|
//! | general / Robin  | k/(2ah0)·M(α/2+½, ½, z²) + λ z M(α/2+1, 3/2, z²)     |
//! | Neumann          | M(α/2+½, ½, z²)                                      |
//! | Dirichlet        | z M(α/2+1, 3/2, z²)                                  |
//!
//! F is strictly decreasing with F(0⁺) > 0 and F(∞) = −∞, so the positive
//! root is unique. It is found by Newton's method inside a sign-change
//! bracket; a step that would leave the bracket is replaced by bisection.

use crate::error::{Error, Result};
use crate::kummer::kummer_m;
use crate::model::{BoundaryCondition, LatentHeatLaw, MaterialParams, ProblemSpec};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Largest accepted |F(ξ)| / max(1, ξ^{β+δ+1}).
pub const RESIDUAL_LIMIT: f64 = 1e-9;

const BRACKET_LO: f64 = 1e-12;
const BRACKET_HI_MAX: f64 = 1e3;
/// Above this power of z the equation is solved for ln z.
const LOG_SOLVE_POWER: f64 = 6.0;
/// f values below this are reported as 0.
const UNDERFLOW: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Newton,
    /// At least one Newton step was replaced by bisection.
    BisectionFallback,
}

impl RootMethod {
    pub fn name(&self) -> &'static str {
        match self {
            RootMethod::Newton => "newton",
            RootMethod::BisectionFallback => "bisection-fallback",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport {
    pub xi: f64,
    pub iterations: usize,
    /// |F(ξ)| / max(1, ξ^{β+δ+1}).
    pub residual: f64,
    pub method: RootMethod,
    /// Sign-change bracket the iteration started from.
    pub bracket: (f64, f64),
}

/// Which denominator D(z) the front equation uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// k/(2ah0)·M(α/2+½, ½, z²) + λ z M(α/2+1, 3/2, z²); `kappa` = k/(2ah0).
    Convective { kappa: f64, lambda: f64 },
    /// M(α/2+½, ½, z²)
    Flux,
    /// z M(α/2+1, 3/2, z²)
    Temperature,
}

/// F(z) = constant / D(z) − z^power for one problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontEquation {
    pub constant: f64,
    pub shape: Shape,
    pub alpha: f64,
    pub power: f64,
}

/// D(z) and D'(z); `None` when D is too large to represent.
fn denominator(shape: Shape, alpha: f64, z: f64) -> Result<Option<(f64, f64)>> {
    let w = z * z;
    let h = alpha / 2.0;
    let m = |a: f64, b: f64| match kummer_m(a, b, w) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Overflow(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let out = match shape {
        Shape::Convective { kappa, lambda } => {
            let (Some(m0), Some(m1)) = (m(h + 0.5, 0.5)?, m(h + 1.5, 1.5)?) else {
                return Ok(None);
            };
            let mut d = kappa * m0;
            let mut dd = 2.0 * (alpha + 1.0) * kappa * z * m1;
            if lambda != 0.0 {
                let (Some(m2), Some(m3)) = (m(h + 1.0, 1.5)?, m(h + 1.0, 0.5)?) else {
                    return Ok(None);
                };
                d += lambda * z * m2;
                dd += lambda * m3;
            }
            (d, dd)
        }
        Shape::Flux => {
            let (Some(m0), Some(m1)) = (m(h + 0.5, 0.5)?, m(h + 1.5, 1.5)?) else {
                return Ok(None);
            };
            (m0, 2.0 * (alpha + 1.0) * z * m1)
        }
        Shape::Temperature => {
            let (Some(m0), Some(m1)) = (m(h + 1.0, 1.5)?, m(h + 1.0, 0.5)?) else {
                return Ok(None);
            };
            (z * m0, m1)
        }
    };
    Ok(if out.0.is_finite() && out.1.is_finite() {
        Some(out)
    } else {
        None
    })
}

impl FrontEquation {
    pub fn for_spec(spec: &ProblemSpec) -> Self {
        let MaterialParams { a, k, gamma } = *spec.material();
        let law = spec.law();
        let beta = law.beta;
        let power = law.front_power();
        let (constant, shape) = match *spec.bc() {
            BoundaryCondition::Dirichlet { u0 } => (
                k * u0 / (gamma * a.powf(power + 1.0) * 2f64.powf(beta + 1.0)),
                Shape::Temperature,
            ),
            BoundaryCondition::Neumann { q0 } => {
                (q0 / (gamma * 2f64.powf(beta) * a.powf(power)), Shape::Flux)
            }
            BoundaryCondition::Robin { .. } | BoundaryCondition::General { .. } => {
                let c = spec.bc().as_convective().expect("convective condition");
                (
                    k * c.u_inf / (gamma * 2f64.powf(beta + 1.0) * a.powf(power + 1.0)),
                    Shape::Convective {
                        kappa: k / (2.0 * a * c.h0),
                        lambda: c.lambda,
                    },
                )
            }
        };
        Self {
            constant,
            shape,
            alpha: spec.alpha(),
            power,
        }
    }

    /// 1/D(z), with 0 once D overflows.
    pub fn shape_value(&self, z: f64) -> Result<f64> {
        Ok(match denominator(self.shape, self.alpha, z)? {
            Some((d, _)) => flush(1.0 / d),
            None => 0.0,
        })
    }

    /// d/dz of 1/D(z) = −D'/D².
    pub fn shape_derivative(&self, z: f64) -> Result<f64> {
        Ok(match denominator(self.shape, self.alpha, z)? {
            Some((d, dd)) => {
                let f = 1.0 / d;
                -flush(dd * f * f)
            }
            None => 0.0,
        })
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        Ok(self.constant * self.shape_value(z)? - z.powf(self.power))
    }

    pub fn derivative(&self, z: f64) -> Result<f64> {
        Ok(self.constant * self.shape_derivative(z)? - self.power * z.powf(self.power - 1.0))
    }

    /// |F(z)| / max(1, z^power).
    pub fn scaled_residual(&self, z: f64) -> Result<f64> {
        Ok(self.value(z)?.abs() / z.powf(self.power).max(1.0))
    }

    /// F and F' at z.
    fn eval_z(&self, z: f64) -> Result<(f64, f64)> {
        let rhs = z.powf(self.power);
        let drhs = self.power * z.powf(self.power - 1.0);
        Ok(match denominator(self.shape, self.alpha, z)? {
            Some((d, dd)) => {
                let f = 1.0 / d;
                (self.constant * f - rhs, -self.constant * dd * f * f - drhs)
            }
            None => (-rhs, -drhs),
        })
    }

    /// G(w) = ln C − ln D(e^w) − power·w and G'(w).
    fn eval_log(&self, w: f64) -> Result<(f64, f64)> {
        let z = w.exp();
        Ok(match denominator(self.shape, self.alpha, z)? {
            Some((d, dd)) => (
                self.constant.ln() - d.ln() - self.power * w,
                -z * dd / d - self.power,
            ),
            None => (f64::NEG_INFINITY, f64::NAN),
        })
    }
}

fn flush(v: f64) -> f64 {
    if v.abs() < UNDERFLOW {
        0.0
    } else {
        v
    }
}

fn convective_equation(spec: &ProblemSpec) -> Result<FrontEquation> {
    let c = spec.bc().as_convective().ok_or_else(|| {
        Error::InvalidParameter("f_lambda needs a general, Robin or Neumann condition".into())
    })?;
    let MaterialParams { a, k, .. } = *spec.material();
    Ok(FrontEquation {
        constant: 1.0,
        shape: Shape::Convective {
            kappa: k / (2.0 * a * c.h0),
            lambda: c.lambda,
        },
        alpha: spec.alpha(),
        power: spec.law().front_power(),
    })
}

/// f_λ(z) = 1 / [k/(2ah0)·M(α/2+½, ½, z²) + λ z M(α/2+1, 3/2, z²)].
pub fn f_general(z: f64, spec: &ProblemSpec) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("f_lambda needs z >= 0 (got {z})")));
    }
    convective_equation(spec)?.shape_value(z)
}

/// df_λ/dz, always negative.
pub fn f_general_prime(z: f64, spec: &ProblemSpec) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("f_lambda' needs z >= 0 (got {z})")));
    }
    convective_equation(spec)?.shape_derivative(z)
}

/// g(z) = 1 / M(α/2+½, ½, z²), the Neumann form of f_0.
pub fn g_flux(z: f64, law: &LatentHeatLaw) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("g needs z >= 0 (got {z})")));
    }
    Ok(1.0 / kummer_m(law.alpha() / 2.0 + 0.5, 0.5, z * z)?)
}

/// f(z) = 1 / (z M(α/2+1, 3/2, z²)), the Dirichlet shape.
pub fn f_dirichlet(z: f64, law: &LatentHeatLaw) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("f needs z > 0 (got {z})")));
    }
    Ok(1.0 / (z * kummer_m(law.alpha() / 2.0 + 1.0, 1.5, z * z)?))
}

/// Solves with the default tolerance and iteration cap.
pub fn solve(spec: &ProblemSpec) -> Result<RootReport> {
    solve_xi(spec, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Unique positive root ξ of the front equation for `spec`.
///
/// Iterates until two successive iterates differ by less than
/// `tol·min(1, z)`, then rejects the result if the scaled residual exceeds
/// [`RESIDUAL_LIMIT`].
pub fn solve_xi(spec: &ProblemSpec, tol: f64, max_iter: usize) -> Result<RootReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0 (got {tol})")));
    }
    let eq = FrontEquation::for_spec(spec);
    let report = solve_equation(&eq, tol, max_iter)?;

    if let BoundaryCondition::Neumann { .. } = spec.bc() {
        // The flux shape g must agree with f_0 of the convective form.
        let general = convective_equation(spec)?;
        let c = spec.bc().as_convective().expect("neumann maps to convective");
        let MaterialParams { a, k, .. } = *spec.material();
        let c_general = eq.constant * k / (2.0 * a * c.h0);
        let lhs = c_general * general.shape_value(report.xi)?;
        let rhs = eq.constant * eq.shape_value(report.xi)?;
        if (lhs - rhs).abs() > 1e-12 * rhs.abs().max(1e-300) {
            return Err(Error::Degenerate(format!(
                "flux and convective forms disagree at xi = {}: {lhs} vs {rhs}",
                report.xi
            )));
        }
    }
    Ok(report)
}

/// Solves `eq` directly; used by [`solve_xi`] and by callers that build an
/// equation by hand.
pub fn solve_equation(eq: &FrontEquation, tol: f64, max_iter: usize) -> Result<RootReport> {
    let mut lo = BRACKET_LO;
    while eq.value(lo)? <= 0.0 {
        lo *= 1e-6;
        if lo < 1e-300 {
            return Err(Error::Bracketing { hi: BRACKET_HI_MAX });
        }
    }
    let mut hi = 1.0_f64;
    while eq.value(hi)? >= 0.0 {
        if hi >= BRACKET_HI_MAX {
            return Err(Error::Bracketing { hi });
        }
        hi = (2.0 * hi).min(BRACKET_HI_MAX);
    }

    let guess = (eq.constant * eq.shape_value(1.0)?)
        .powf(1.0 / eq.power)
        .min(0.5);

    let (xi, iterations, method) = if eq.power > LOG_SOLVE_POWER {
        let start = if guess > lo && guess < hi {
            guess.ln()
        } else {
            0.5 * (lo.ln() + hi.ln())
        };
        // a step in ln z is already relative
        let (w, n, m) =
            safeguarded_newton(|w| eq.eval_log(w), lo.ln(), hi.ln(), start, |_| tol, max_iter)?;
        (w.exp(), n, m)
    } else {
        safeguarded_newton(|z| eq.eval_z(z), lo, hi, guess, |z| tol * z.min(1.0), max_iter)?
    };

    let residual = eq.scaled_residual(xi)?;
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(Error::Residual {
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(RootReport {
        xi,
        iterations,
        residual,
        method,
        bracket: (lo, hi),
    })
}

/// Newton's method for a decreasing function with f(lo) > 0 > f(hi).
/// Steps leaving (lo, hi) are replaced by bisection of the current bracket.
/// Stops once a step is shorter than `step_tol(x)`.
fn safeguarded_newton<F, T>(
    eval: F,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    step_tol: T,
    max_iter: usize,
) -> Result<(f64, usize, RootMethod)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
    T: Fn(f64) -> f64,
{
    let mut method = RootMethod::Newton;
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    for iteration in 1..=max_iter {
        let (fx, dfx) = eval(x)?;
        if fx == 0.0 {
            return Ok((x, iteration, method));
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = fx / dfx;
        if step.abs() < step_tol(x) && x - step >= lo && x - step <= hi {
            return Ok((x - step, iteration, method));
        }
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
            method = RootMethod::BisectionFallback;
        }
        if (next - x).abs() < step_tol(x) {
            return Ok((next, iteration, method));
        }
        x = next;
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        last: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RawSpec;

    fn unit() -> MaterialParams {
        MaterialParams {
            a: 1.0,
            k: 1.0,
            gamma: 1.0,
        }
    }

    fn spec(beta: f64, delta: f64, bc: BoundaryCondition) -> ProblemSpec {
        RawSpec::new(unit(), LatentHeatLaw::new(beta, delta), bc)
            .validate()
            .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn f_general_at_origin() {
        let s = spec(1.0, -0.5, BoundaryCondition::Robin { h0: 3.0, u_inf: 1.0 });
        assert!(rel(f_general(0.0, &s).unwrap(), 6.0) < 1e-15);
        assert!(rel(f_general(1e-9, &s).unwrap(), 6.0) < 1e-8);
    }

    #[test]
    fn f_general_classical_flux_form() {
        // λ = 0, α = 0, 2ah0/k = 1 → f = e^{-z²}
        let s = spec(
            0.0,
            0.0,
            BoundaryCondition::General {
                lambda: 0.0,
                h0: 0.5,
                u_inf: 1.0,
            },
        );
        assert!(rel(f_general(1.0, &s).unwrap(), (-1f64).exp()) < 1e-15);
        assert!(rel(f_general_prime(1.0, &s).unwrap(), -2.0 * (-1f64).exp()) < 1e-15);
    }

    #[test]
    fn f_general_far_tail_is_zero() {
        let s = spec(0.0, 0.0, BoundaryCondition::Robin { h0: 1.0, u_inf: 1.0 });
        assert_eq!(f_general(30.0, &s).unwrap(), 0.0);
        assert_eq!(f_general_prime(30.0, &s).unwrap(), 0.0);
    }

    #[test]
    fn f_dirichlet_examples() {
        let law = LatentHeatLaw::new(0.0, 0.0);
        let expected = 2.0 / (std::f64::consts::PI.sqrt() * 1f64.exp() * crate::kummer::erf(1.0));
        assert!(rel(f_dirichlet(1.0, &law).unwrap(), expected) < 1e-14);
        assert!((f_dirichlet(1.0, &law).unwrap() - 0.492_592).abs() < 1e-6);
        // four-term series of M(1, 3/2, 0.01)
        let x: f64 = 0.01;
        let m = 1.0 + x / 1.5 + x * x / (1.5 * 2.5) + x.powi(3) / (1.5 * 2.5 * 3.5);
        assert!(rel(f_dirichlet(0.1, &law).unwrap(), 1.0 / (0.1 * m)) < 1e-9);
        assert!((f_dirichlet(0.1, &law).unwrap() - 9.933_45).abs() < 1e-4);
        assert!(matches!(f_dirichlet(0.0, &law), Err(Error::Domain(_))));
        for i in 0..=8 {
            let law = LatentHeatLaw::new(i as f64 * 0.5, 0.0);
            assert!(f_dirichlet(1.0, &law).unwrap() > f_dirichlet(2.0, &law).unwrap());
        }
    }

    #[test]
    fn flux_shape_matches_convective_shape() {
        let s = spec(1.0, -0.5, BoundaryCondition::General { lambda: 0.0, h0: 0.5, u_inf: 1.0 });
        for &z in &[0.05, 0.3, 1.1, 2.4] {
            let g = g_flux(z, s.law()).unwrap();
            assert!(rel(f_general(z, &s).unwrap(), g) < 1e-14);
        }
    }

    #[test]
    fn neumann_classical_root() {
        let s = spec(0.0, 0.0, BoundaryCondition::Neumann { q0: 0.1 });
        let r = solve(&s).unwrap();
        assert!((r.xi - 0.0990).abs() < 5e-5);
        assert!(r.xi > r.bracket.0 && r.xi < r.bracket.1);
        assert!(r.residual <= RESIDUAL_LIMIT);
    }

    #[test]
    fn robin_classical_root() {
        let s = spec(0.0, 0.0, BoundaryCondition::Robin { h0: 1.0, u_inf: 0.5 });
        assert!((solve(&s).unwrap().xi - 0.2926).abs() < 5e-5);
    }

    #[test]
    fn large_power_uses_log_variable() {
        // β + δ + 1 = 8
        let s = spec(4.0, 3.0, BoundaryCondition::Dirichlet { u0: 0.5 });
        let r = solve(&s).unwrap();
        let eq = FrontEquation::for_spec(&s);
        assert!(eq.value(r.xi).unwrap().abs() < 1e-12);
    }

    #[test]
    fn iteration_cap_reported() {
        let s = spec(0.0, 0.0, BoundaryCondition::Neumann { q0: 0.3 });
        match solve_xi(&s, 1e-10, 1) {
            Err(Error::NonConvergence { iterations: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tiny_power_still_brackets() {
        // β + δ + 1 = 0.02: z^0.02 is not small at z = 1e-12
        let s = spec(0.01, -0.99, BoundaryCondition::Neumann { q0: 0.5 });
        let r = solve(&s).unwrap();
        assert!(FrontEquation::for_spec(&s).value(r.xi).unwrap().abs() < 1e-9);
    }
}
