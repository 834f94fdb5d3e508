//! Reference parameter grids: front coefficients over flux numbers for the
//! Neumann problem and over Biot numbers for the Robin problem, with unit
//! material constants.

use crate::error::Result;
use crate::model::{
    h0_for_biot_number, q0_for_flux_number, temperature_for_stefan_number, BoundaryCondition,
    LatentHeatLaw, MaterialParams, ProblemSpec, RawSpec,
};
use crate::solver;

/// (δ, β) rows shared by both tables.
pub const ROWS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (0.0, 1.0),
    (-0.5, 0.0),
    (-0.5, 1.0),
    (1.0, 1.0),
    (1.0, 3.0),
];

pub const FLUX_NUMBERS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
pub const BIOT_NUMBERS: [f64; 4] = [1.0, 10.0, 50.0, 100.0];
pub const STEFAN_NUMBER: f64 = 0.5;

/// Marker for published cells that disagree with the computed root.
pub const SUSPECT_MARKER: &str = "suspect-paper-cell";

/// (δ, β, Q) cells of the flux table whose published values are not
/// reproduced.
pub const SUSPECT_CELLS: [(f64, f64, f64); 2] = [(0.0, 0.0, 0.5), (-0.5, 1.0, 0.5)];

pub fn is_suspect(delta: f64, beta: f64, q: f64) -> bool {
    SUSPECT_CELLS.contains(&(delta, beta, q))
}

pub const UNIT_MATERIAL: MaterialParams = MaterialParams {
    a: 1.0,
    k: 1.0,
    gamma: 1.0,
};

pub fn neumann_spec(delta: f64, beta: f64, q: f64) -> Result<ProblemSpec> {
    let law = LatentHeatLaw::new(beta, delta);
    let q0 = q0_for_flux_number(&UNIT_MATERIAL, &law, q);
    RawSpec::new(UNIT_MATERIAL, law, BoundaryCondition::Neumann { q0 }).validate()
}

pub fn robin_spec(delta: f64, beta: f64, ste: f64, bi: f64) -> Result<ProblemSpec> {
    let law = LatentHeatLaw::new(beta, delta);
    let u_inf = temperature_for_stefan_number(&UNIT_MATERIAL, &law, ste);
    let h0 = h0_for_biot_number(&UNIT_MATERIAL, bi);
    RawSpec::new(UNIT_MATERIAL, law, BoundaryCondition::Robin { h0, u_inf }).validate()
}

/// Dirichlet problem with u0 = u∞, the large-Biot limit of [`robin_spec`].
pub fn dirichlet_limit_spec(delta: f64, beta: f64, ste: f64) -> Result<ProblemSpec> {
    let law = LatentHeatLaw::new(beta, delta);
    let u0 = temperature_for_stefan_number(&UNIT_MATERIAL, &law, ste);
    RawSpec::new(UNIT_MATERIAL, law, BoundaryCondition::Dirichlet { u0 }).validate()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxRow {
    pub delta: f64,
    pub beta: f64,
    pub xi: [f64; 5],
    pub suspect: [bool; 5],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiotRow {
    pub delta: f64,
    pub beta: f64,
    pub xi_robin: [f64; 4],
    pub xi_dirichlet: f64,
}

pub fn flux_table() -> Result<Vec<FluxRow>> {
    ROWS.iter()
        .map(|&(delta, beta)| {
            let mut xi = [0.0; 5];
            let mut suspect = [false; 5];
            for (i, &q) in FLUX_NUMBERS.iter().enumerate() {
                xi[i] = solver::solve(&neumann_spec(delta, beta, q)?)?.xi;
                suspect[i] = is_suspect(delta, beta, q);
            }
            Ok(FluxRow {
                delta,
                beta,
                xi,
                suspect,
            })
        })
        .collect()
}

pub fn biot_table() -> Result<Vec<BiotRow>> {
    ROWS.iter()
        .map(|&(delta, beta)| {
            let mut xi_robin = [0.0; 4];
            for (i, &bi) in BIOT_NUMBERS.iter().enumerate() {
                xi_robin[i] = solver::solve(&robin_spec(delta, beta, STEFAN_NUMBER, bi)?)?.xi;
            }
            let xi_dirichlet = solver::solve(&dirichlet_limit_spec(delta, beta, STEFAN_NUMBER)?)?.xi;
            Ok(BiotRow {
                delta,
                beta,
                xi_robin,
                xi_dirichlet,
            })
        })
        .collect()
}

/// Every configuration of both tables, 60 in total.
pub fn all_configurations() -> Result<Vec<ProblemSpec>> {
    let mut out = Vec::with_capacity(60);
    for &(delta, beta) in &ROWS {
        for &q in &FLUX_NUMBERS {
            out.push(neumann_spec(delta, beta, q)?);
        }
    }
    for &(delta, beta) in &ROWS {
        for &bi in &BIOT_NUMBERS {
            out.push(robin_spec(delta, beta, STEFAN_NUMBER, bi)?);
        }
        out.push(dirichlet_limit_spec(delta, beta, STEFAN_NUMBER)?);
    }
    Ok(out)
}
