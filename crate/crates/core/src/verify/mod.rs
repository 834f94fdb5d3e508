//! Independent checks of a similarity solution. Finite-difference residuals
//! cover the field equation and boundary conditions. Bisection and an
//! extended-precision Kummer series serve as oracles.

mod bigdec;

pub use bigdec::BigDec;

use crate::error::{Error, Result};
use crate::kummer::kummer_m;
use crate::model::{BoundaryCondition, ProblemSpec};
use crate::solution::SimilaritySolution;

pub const PDE_GATE: f64 = 1e-6;
pub const PHASE_TEMP_GATE: f64 = 1e-12;
pub const STEFAN_GATE: f64 = 1e-6;
pub const FIXED_FACE_GATE: f64 = 1e-8;

/// Relative x-range of the interior grid, as fractions of s(t).
pub const X_RANGE: (f64, f64) = (0.05, 0.95);
/// x-step as a fraction of s(t).
const DX_FRACTION: f64 = 1.0 / 200.0;
/// t-step as a fraction of t.
const DT_FRACTION: f64 = 1.0 / 1000.0;
const FLOOR_FACTOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub nt: usize,
    pub t_range: (f64, f64),
    pub x_range: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub pde_max_rel: f64,
    pub phase_temp_max_abs: f64,
    pub stefan_max_rel: f64,
    pub fixed_face_max_rel: f64,
    pub grid: Grid,
}

impl ResidualReport {
    /// Names of the fields above their gate, in declaration order.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            ("pde_max_rel", self.pde_max_rel, PDE_GATE),
            ("phase_temp_max_abs", self.phase_temp_max_abs, PHASE_TEMP_GATE),
            ("stefan_max_rel", self.stefan_max_rel, STEFAN_GATE),
            ("fixed_face_max_rel", self.fixed_face_max_rel, FIXED_FACE_GATE),
        ];
        checks
            .iter()
            .filter(|(_, value, gate)| !(value <= gate))
            .map(|(name, _, _)| *name)
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn check(&self) -> Result<()> {
        let failed = self.failures();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::Verification(format!("gate exceeded: {}", failed.join(", "))))
        }
    }
}

/// (−f(+2h) + 8f(+h) − 8f(−h) + f(−2h)) / 12h
fn central_first(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h))
}

/// (−f(+2h) + 16f(+h) − 30f + 16f(−h) − f(−2h)) / 12h²
fn central_second(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((-f(x + 2.0 * h)? + 16.0 * f(x + h)? - 30.0 * f(x)? + 16.0 * f(x - h)?
        - f(x - 2.0 * h)?)
        / (12.0 * h * h))
}

/// Fourth-order one-sided first derivative using f(x), f(x+h), …, f(x+4h);
/// `h` may be negative.
fn one_sided_first(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let v = |i: f64| f(x + i * h);
    Ok((-25.0 * v(0.0)? + 48.0 * v(1.0)? - 36.0 * v(2.0)? + 16.0 * v(3.0)? - 3.0 * v(4.0)?)
        / (12.0 * h))
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Residuals of the field equation and of the front and fixed-face
/// conditions on `nx × nt` points, x = r·s(t) with r in [0.05, 0.95] and t
/// uniform in `t_range`.
pub fn pde_residual(
    sol: &SimilaritySolution,
    nx: usize,
    nt: usize,
    t_range: (f64, f64),
) -> Result<ResidualReport> {
    let (t0, t1) = t_range;
    if nx < 16 || nt < 8 {
        return Err(Error::InvalidParameter(format!(
            "grid {nx} x {nt} is too coarse (need nx >= 16, nt >= 8)"
        )));
    }
    if !(t0 > 0.0 && t1 > t0 && t1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "time range ({t0}, {t1}) must satisfy 0 < t0 < t1"
        )));
    }
    let spec = sol.spec();
    let a = spec.material().a;
    let k = spec.material().k;
    let u = |x: f64, t: f64| sol.eval_u_unchecked(x, t);

    let mut pairs = Vec::with_capacity(nx * nt);
    let mut phase_temp = 0f64;
    let mut stefan = 0f64;
    let mut face = 0f64;
    for j in 0..nt {
        let t = t0 + (t1 - t0) * j as f64 / (nt - 1) as f64;
        let (s, _) = sol.eval_front(t)?;
        let dx = s * DX_FRACTION;
        let dt = t * DT_FRACTION;
        for i in 0..nx {
            let r = X_RANGE.0 + (X_RANGE.1 - X_RANGE.0) * i as f64 / (nx - 1) as f64;
            let x = r * s;
            let u_t = central_first(|tt| u(x, tt), t, dt)?;
            let u_xx = central_second(|xx| u(xx, t), x, dx)?;
            pairs.push((u_t, a * a * u_xx));
        }

        phase_temp = phase_temp.max(sol.eval_u(s, t)?.abs());

        let rhs = sol.stefan_flux(t)?;
        let fd = -k * one_sided_first(|xx| u(xx, t), s, -dx)?;
        let analytic = -k * sol.front_gradient(t)?;
        stefan = stefan.max(rel_diff(fd, rhs)).max(rel_diff(analytic, rhs));

        face = face.max(fixed_face_residual(sol, t, dx)?);
    }

    let scale = pairs
        .iter()
        .fold(0f64, |m, (p, q)| m.max(p.abs()).max(q.abs()));
    let floor = FLOOR_FACTOR * scale;
    let pde = pairs.iter().fold(0f64, |m, &(p, q)| {
        let den = p.abs().max(q.abs()).max(floor);
        if den == 0.0 {
            m
        } else {
            m.max((p - q).abs() / den)
        }
    });

    Ok(ResidualReport {
        pde_max_rel: pde,
        phase_temp_max_abs: phase_temp,
        stefan_max_rel: stefan,
        fixed_face_max_rel: face,
        grid: Grid {
            nx,
            nt,
            t_range,
            x_range: X_RANGE,
        },
    })
}

fn fixed_face_residual(sol: &SimilaritySolution, t: f64, dx: f64) -> Result<f64> {
    let spec = sol.spec();
    let k = spec.material().k;
    let alpha = spec.alpha();
    let u0 = sol.eval_u(0.0, t)?;
    let flux = || -> Result<f64> {
        Ok(k * one_sided_first(|xx| sol.eval_u_unchecked(xx, t), 0.0, dx)?)
    };
    Ok(match *spec.bc() {
        BoundaryCondition::Dirichlet { u0: data } => rel_diff(u0, data * t.powf(alpha / 2.0)),
        BoundaryCondition::Neumann { q0 } => {
            rel_diff(flux()?, -q0 * t.powf((alpha - 1.0) / 2.0))
        }
        _ => {
            let c = spec.bc().as_convective().expect("convective condition");
            let rhs = c.h0 / t.sqrt() * (c.lambda * u0 - c.u_inf * t.powf(alpha / 2.0));
            rel_diff(flux()?, rhs)
        }
    })
}

/// Which factor multiplies the constant in the front equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    General,
    Neumann,
    Dirichlet,
}

impl ShapeKind {
    pub fn for_spec(spec: &ProblemSpec) -> Self {
        match spec.bc() {
            BoundaryCondition::Dirichlet { .. } => ShapeKind::Dirichlet,
            BoundaryCondition::Neumann { .. } => ShapeKind::Neumann,
            _ => ShapeKind::General,
        }
    }
}

/// Constant factor of the front equation written as C·shape(z) = z^{β+δ+1}.
pub fn front_constant(spec: &ProblemSpec) -> f64 {
    let m = spec.material();
    let law = spec.law();
    let p = law.beta + law.delta + 1.0;
    match *spec.bc() {
        BoundaryCondition::Dirichlet { u0 } => {
            m.k * u0 / (m.gamma * m.a.powf(p + 1.0) * 2f64.powf(law.beta + 1.0))
        }
        BoundaryCondition::Neumann { q0 } => q0 / (m.gamma * 2f64.powf(law.beta) * m.a.powf(p)),
        BoundaryCondition::Robin { u_inf, .. } | BoundaryCondition::General { u_inf, .. } => {
            m.k * u_inf / (m.gamma * 2f64.powf(law.beta + 1.0) * m.a.powf(p + 1.0))
        }
    }
}

fn shape_value(shape: ShapeKind, spec: &ProblemSpec, z: f64) -> f64 {
    let alpha = spec.alpha();
    let z2 = z * z;
    let den = match shape {
        ShapeKind::Neumann => kummer_m(alpha / 2.0 + 0.5, 0.5, z2),
        ShapeKind::Dirichlet => kummer_m(alpha / 2.0 + 1.0, 1.5, z2).map(|m| z * m),
        ShapeKind::General => {
            let m = spec.material();
            let (h0, lambda) = match *spec.bc() {
                BoundaryCondition::Robin { h0, .. } => (h0, 1.0),
                BoundaryCondition::General { h0, lambda, .. } => (h0, lambda),
                BoundaryCondition::Neumann { q0 } => (q0, 0.0),
                BoundaryCondition::Dirichlet { .. } => (f64::INFINITY, 1.0),
            };
            let kappa = m.k / (2.0 * m.a * h0);
            kummer_m(alpha / 2.0 + 0.5, 0.5, z2)
                .and_then(|m1| kummer_m(alpha / 2.0 + 1.0, 1.5, z2).map(|m2| kappa * m1 + lambda * z * m2))
        }
    };
    match den {
        Ok(d) if d.is_finite() => 1.0 / d,
        _ => 0.0,
    }
}

/// Root of C·shape(z) − z^{β+δ+1} on [lo, hi] by plain bisection down to an
/// interval of width `tol`.
pub fn bisection_root(
    constant: f64,
    shape: ShapeKind,
    spec: &ProblemSpec,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let p = spec.law().beta + spec.law().delta + 1.0;
    let f = |z: f64| constant * shape_value(shape, spec, z) - z.powf(p);
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo * fhi < 0.0) {
        return Err(Error::Bracketing { hi });
    }
    let rising = flo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Front coefficient of `spec` by bisection, with a bracket found by
/// doubling from 1.
pub fn bisection_xi(spec: &ProblemSpec, tol: f64) -> Result<f64> {
    let c = front_constant(spec);
    let shape = ShapeKind::for_spec(spec);
    let mut hi = 1.0;
    let p = spec.law().beta + spec.law().delta + 1.0;
    while c * shape_value(shape, spec, hi) - hi.powf(p) >= 0.0 {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::Bracketing { hi });
        }
    }
    bisection_root(c, shape, spec, 1e-12, hi, tol)
}

/// M(a,b,z) from the raw Taylor series in decimal arithmetic with `digits`
/// significant digits, rounded to the nearest double.
pub fn kummer_oracle(a: f64, b: f64, z: f64, digits: u32) -> Result<f64> {
    if digits < 30 {
        return Err(Error::InvalidParameter(format!(
            "oracle needs at least 30 digits (got {digits})"
        )));
    }
    if !(z.abs() <= 60.0) {
        return Err(Error::InvalidParameter(format!("oracle needs |z| <= 60 (got {z})")));
    }
    if !(a.is_finite() && b.is_finite()) || (b <= 0.0 && b == b.trunc()) {
        return Err(Error::InvalidParameter(format!("invalid parameters a = {a}, b = {b}")));
    }
    let p = digits + 5;
    let (da, db, dz) = (BigDec::from_f64(a), BigDec::from_f64(b), BigDec::from_f64(z));
    let mut term = BigDec::from_i64(1);
    let mut sum = BigDec::from_i64(1);
    let mut largest = term.log10_abs();
    let mut n: i64 = 0;
    loop {
        let dn = BigDec::from_i64(n);
        let num = da.add(&dn, p).mul(&dz, p);
        let den = db.add(&dn, p).mul(&BigDec::from_i64(n + 1), p);
        term = term.mul(&num, p).div(&den, p);
        n += 1;
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term, p);
        let mag = term.log10_abs();
        largest = largest.max(mag);
        if n as f64 > z.abs() + (a.abs() - b).max(0.0) && mag < largest - p as f64 - 2.0 {
            break;
        }
        if n > 20_000 {
            return Err(Error::NonConvergence {
                iterations: n as usize,
                last: sum.to_f64(),
            });
        }
    }
    let cancellation = largest - sum.log10_abs();
    if cancellation > (digits as f64 - 17.0) {
        return Err(Error::PrecisionInsufficient {
            needed: cancellation.ceil() as i64 + 17,
            available: digits,
        });
    }
    Ok(sum.to_f64())
}
