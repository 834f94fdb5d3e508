//! Maps between fixed-face conditions that produce the same front, plus the
//! large-Biot limit of the Robin problem.

use crate::error::{Error, Result};
use crate::kummer::kummer_m;
use crate::model::{h0_for_biot_number, BoundaryCondition, ProblemSpec};
use crate::solution::{self, SimilaritySolution};

/// Source and mapped problems with their front coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceRecord {
    pub source_spec: ProblemSpec,
    pub target_spec: ProblemSpec,
    pub xi_source: f64,
    pub xi_target: f64,
    pub max_xi_gap: f64,
}

impl EquivalenceRecord {
    fn new(source: &SimilaritySolution, target: &SimilaritySolution) -> Self {
        Self {
            source_spec: *source.spec(),
            target_spec: *target.spec(),
            xi_source: source.xi(),
            xi_target: target.xi(),
            max_xi_gap: (source.xi() - target.xi()).abs(),
        }
    }
}

/// M(−α/2, ½, −ξ²) and M(−α/2+½, 3/2, −ξ²).
fn front_kummers(alpha: f64, xi: f64) -> Result<(f64, f64)> {
    let w = -xi * xi;
    Ok((
        kummer_m(-alpha / 2.0, 0.5, w)?,
        kummer_m(-alpha / 2.0 + 0.5, 1.5, w)?,
    ))
}

/// The Dirichlet problem whose fixed-face temperature u0·t^{α/2} reproduces
/// the front of `sol`.
pub fn dirichlet_from_general(spec: &ProblemSpec, sol: &SimilaritySolution) -> Result<ProblemSpec> {
    let xi = sol.xi();
    let (m1, m2) = front_kummers(spec.alpha(), xi)?;
    let a = spec.material().a;
    let k = spec.material().k;
    let u0 = match *spec.bc() {
        BoundaryCondition::Dirichlet { u0 } => u0,
        BoundaryCondition::Neumann { q0 } => 2.0 * a * q0 * xi * m2 / (k * m1),
        _ => {
            let c = spec.bc().as_convective().expect("convective condition");
            c.u_inf * xi * m2 / (k / (2.0 * a * c.h0) * m1 + c.lambda * xi * m2)
        }
    };
    spec.with_bc(BoundaryCondition::Dirichlet { u0 })
}

/// The general convective problem with the given λ and u∞ whose front
/// matches the Dirichlet solution `dsol`.
pub fn h0_from_dirichlet(
    dspec: &ProblemSpec,
    dsol: &SimilaritySolution,
    lambda: f64,
    u_inf: f64,
) -> Result<ProblemSpec> {
    let u0 = match *dspec.bc() {
        BoundaryCondition::Dirichlet { u0 } => u0,
        _ => {
            return Err(Error::Precondition(
                "the source problem must have a Dirichlet condition".into(),
            ))
        }
    };
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Precondition(format!("lambda = {lambda} must be >= 0")));
    }
    if !(lambda * u0 < u_inf) {
        return Err(Error::Precondition(format!(
            "lambda*u0 = {} must be below u_inf = {u_inf}",
            lambda * u0
        )));
    }
    let xi = dsol.xi();
    let (m1, m2) = front_kummers(dspec.alpha(), xi)?;
    let a = dspec.material().a;
    let k = dspec.material().k;
    let h0 = -k * u0 * m1 / (2.0 * a * xi * m2 * (lambda * u0 - u_inf));
    dspec.with_bc(BoundaryCondition::General { lambda, h0, u_inf })
}

/// Solves `spec`, maps it to its Dirichlet counterpart and solves that.
pub fn to_dirichlet(spec: &ProblemSpec) -> Result<EquivalenceRecord> {
    let source = solution::solve(spec)?;
    let target = solution::solve(&dirichlet_from_general(spec, &source)?)?;
    Ok(EquivalenceRecord::new(&source, &target))
}

/// Solves the Dirichlet `dspec`, maps it to a general convective problem
/// with the given λ and u∞ and solves that.
pub fn from_dirichlet(dspec: &ProblemSpec, lambda: f64, u_inf: f64) -> Result<EquivalenceRecord> {
    let source = solution::solve(dspec)?;
    let target = solution::solve(&h0_from_dirichlet(dspec, &source, lambda, u_inf)?)?;
    Ok(EquivalenceRecord::new(&source, &target))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub bi: f64,
    pub xi: f64,
    /// ξ_D∞ − ξ_R(Bi).
    pub gap: f64,
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitStudy {
    pub rows: Vec<LimitRow>,
    /// Front coefficient of the Dirichlet problem with u0 = u∞.
    pub xi_dirichlet: f64,
    pub limit: SimilaritySolution,
}

impl LimitStudy {
    /// 0 < ξ_R < ξ_D∞ everywhere and ξ_R strictly increasing.
    pub fn is_sandwiched_and_increasing(&self) -> bool {
        self.rows.iter().all(|r| r.xi > 0.0 && r.gap > 0.0)
            && self.rows.windows(2).all(|w| w[1].xi > w[0].xi)
    }
}

/// Robin fronts for each Biot number in ascending `bi_values`, against the
/// Dirichlet limit u(0,t) = u∞ t^{α/2}.
pub fn robin_limit_study(base: &ProblemSpec, bi_values: &[f64]) -> Result<LimitStudy> {
    let u_inf = match *base.bc() {
        BoundaryCondition::Robin { u_inf, .. } => u_inf,
        _ => {
            return Err(Error::Precondition(
                "the limit study needs a Robin condition".into(),
            ))
        }
    };
    if bi_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition("Biot numbers must be strictly ascending".into()));
    }
    if let Some(bad) = bi_values.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return Err(Error::Precondition(format!("Biot number {bad} must be positive")));
    }
    let limit = solution::solve(&base.with_bc(BoundaryCondition::Dirichlet { u0: u_inf })?)?;
    let rows = bi_values
        .iter()
        .map(|&bi| {
            let h0 = h0_for_biot_number(base.material(), bi);
            let sol = solution::solve(&base.with_bc(BoundaryCondition::Robin { h0, u_inf })?)?;
            Ok(LimitRow {
                bi,
                xi: sol.xi(),
                gap: limit.xi() - sol.xi(),
                c1: sol.c1(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitStudy {
        rows,
        xi_dirichlet: limit.xi(),
        limit,
    })
}
