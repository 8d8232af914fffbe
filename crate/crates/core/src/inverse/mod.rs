//! Fastening identification from the first three natural frequencies.
//!
//! The frequencies give three rows `(f1, f2, f3, f4)(s_i)` of a homogeneous
//! system in the minors `(M12, M13, M24, M34)`. Its null direction is
//! projected onto the Plücker quadric, turned into a canonical boundary
//! matrix and compared with the known fastenings.

mod classify;
mod plucker;
mod reconstruct;
mod system;

pub use classify::{
    classify, classify_minors, stiffness_sweep, Classification, NAMED_PREFERENCE_ANGLE,
    SIMILARITY_THRESHOLD, SWEEP_MAX_STIFFNESS, SWEEP_MIN_STIFFNESS, SWEEP_POINTS, UNKNOWN_LABEL,
};
pub use plucker::{
    plucker_defect, project_to_plucker, relative_plucker_defect, PluckerPoint,
    ON_QUADRIC_TOLERANCE,
};
pub use reconstruct::{choose_chart, reconstruct, Chart, CHART_FALLBACK_RATIO};
pub use system::{
    build_system, solve_minors, MinorSolution, MinorSystem, NullSpaceMethod,
    ILL_CONDITIONED_THRESHOLD, RANK_RELATIVE_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::forward::{BoundaryConditions, MinorVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rank: usize,
    pub condition: f64,
    pub singular_values: [f64; 3],
    /// Relative residual of the raw minors in the system.
    pub residual: f64,
    pub null_space_method: NullSpaceMethod,
    pub cross_check_angle: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentificationResult {
    pub sqrt_s: [f64; 3],
    /// Null direction of the system, unit length.
    pub raw_minors: MinorVector,
    pub raw_plucker_defect: f64,
    /// Nearest point of the quadric, same scale as `raw_minors`.
    pub projected_minors: MinorVector,
    pub multiplier: f64,
    pub boundary_conditions: BoundaryConditions,
    pub chart: Chart,
    pub classification: Classification,
    pub diagnostics: Diagnostics,
}

/// Runs projection, reconstruction and classification on a minor estimate.
pub fn identify_from_minors(
    raw: &MinorVector,
) -> Result<(PluckerPoint, BoundaryConditions, Chart, Classification)> {
    let point = project_to_plucker(raw).map_err(Error::at(Stage::Projection))?;
    let (bc, chart) = reconstruct(&point).map_err(Error::at(Stage::Reconstruction))?;
    let classification = classify(&bc);
    Ok((point, bc, chart, classification))
}

/// Identifies the fastening from three ascending frequencies `sqrt(s_i)`.
pub fn identify(sqrt_s: [f64; 3]) -> Result<IdentificationResult> {
    let system = build_system(sqrt_s).map_err(Error::at(Stage::BuildSystem))?;
    let solution = solve_minors(&system).map_err(Error::at(Stage::SolveMinors))?;
    let raw = solution.minors;
    let (point, bc, chart, classification) = identify_from_minors(&raw)?;
    let projected = point.minors().map_err(Error::at(Stage::Projection))?;

    let mut warnings = Vec::new();
    if solution.ill_conditioned {
        warnings.push(format!(
            "ill-conditioned system: condition {:.3e} exceeds {:.0e}",
            system.condition, ILL_CONDITIONED_THRESHOLD
        ));
    }
    if chart.is_extension() {
        warnings.push(format!(
            "P12 and P13 are negligible; reconstructed in the {chart:?} chart"
        ));
    }
    if classification.fastening.is_none() {
        warnings.push(format!(
            "no reference fastening within similarity {SIMILARITY_THRESHOLD}"
        ));
    }

    Ok(IdentificationResult {
        sqrt_s,
        raw_plucker_defect: plucker_defect(&raw),
        raw_minors: raw,
        projected_minors: projected,
        multiplier: point.multiplier,
        boundary_conditions: bc.with_label(classification.label.clone()),
        chart,
        classification,
        diagnostics: Diagnostics {
            rank: system.rank,
            condition: system.condition,
            singular_values: system.singular_values,
            residual: solution.residual,
            null_space_method: solution.method,
            cross_check_angle: solution.cross_check_angle,
            warnings,
        },
    })
}
