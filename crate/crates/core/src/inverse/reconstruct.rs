//! Canonical boundary matrix from minors on the quadric.
//!
//! With the structural zeros the minor block `[[M12, M13], [M24, M34]]`
//! equals `(a11, -a14)^T (a22, a23)`, a rank-one matrix. Fixing one of its
//! entries to one picks a chart:
//!
//! * `M12 = 1`: `[[1, 0, 0, -M24], [0, 1, M13, 0]]`
//! * `M13 = 1`: `[[1, 0, 0, -M34], [0, M12, 1, 0]]`
//! * `M24` pivot: `[[-M12/M24, 0, 0, 1], [0, 1, M34/M24, 0]]`
//! * `M34` pivot: `[[-M13/M34, 0, 0, 1], [0, M24/M34, 1, 0]]`
//!
//! The last two cover fastenings such as the free edge where both `M12`
//! and `M13` vanish.

use serde::{Deserialize, Serialize};

use super::plucker::PluckerPoint;
use crate::error::{Error, Result};
use crate::forward::BoundaryConditions;

/// The `M24`/`M34` charts are used only when `max(|P12|, |P13|)` falls below
/// this fraction of `max(|P24|, |P34|)`.
pub const CHART_FALLBACK_RATIO: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    M12,
    M13,
    M24,
    M34,
}

impl Chart {
    /// True for the two charts `M24`/`M34` that extend the `M12`/`M13` pair.
    pub fn is_extension(&self) -> bool {
        matches!(self, Chart::M24 | Chart::M34)
    }
}

pub fn choose_chart(p12: f64, p13: f64, p24: f64, p34: f64) -> Option<Chart> {
    let primary = p12.abs().max(p13.abs());
    let secondary = p24.abs().max(p34.abs());
    if primary > 0.0 && primary >= CHART_FALLBACK_RATIO * secondary {
        Some(if p12.abs() >= p13.abs() { Chart::M12 } else { Chart::M13 })
    } else if secondary > 0.0 {
        Some(if p24.abs() >= p34.abs() { Chart::M24 } else { Chart::M34 })
    } else {
        None
    }
}

/// Boundary matrix whose minors are proportional to the point's minors.
pub fn reconstruct(point: &PluckerPoint) -> Result<(BoundaryConditions, Chart)> {
    let [p12, p34, p13, neg_p24] = point.x;
    let p24 = -neg_p24;
    let chart = choose_chart(p12, p13, p24, p34).ok_or(Error::Unreconstructable)?;
    let (a11, a14, a22, a23) = match chart {
        Chart::M12 => (1.0, -p24 / p12, 1.0, p13 / p12),
        Chart::M13 => (1.0, -p34 / p13, p12 / p13, 1.0),
        Chart::M24 => (-p12 / p24, 1.0, 1.0, p34 / p24),
        Chart::M34 => (-p13 / p34, 1.0, p24 / p34, 1.0),
    };
    let bc = BoundaryConditions::from_entries(a11, a14, a22, a23)?;
    Ok((bc, chart))
}
