//! Nearest point on the Plücker quadric `P12 P34 - P13 P24 = 0`.
//!
//! In the coordinates `x = (P12, P34, P13, -P24)` the quadric is
//! `x1 x2 + x3 x4 = 0`, i.e. `(X, X*) = 0` with `X* = (x2, x1, x4, x3)`.
//! Stationary points of `|X - Y|^2 + 2p (x1 x2 + x3 x4)` satisfy
//! `Y = X + p X*`, hence `X = (Y - p Y*) / (1 - p^2)` where `p` solves
//! `p^2 - 2p (Y,Y)/(Y,Y*) + 1 = 0`. The root of smaller magnitude gives the
//! nearest point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::MinorVector;

/// Relative defect below which a vector is treated as lying on the quadric.
pub const ON_QUADRIC_TOLERANCE: f64 = 1e-14;

/// `|p|` may not come closer to one than this.
const MULTIPLIER_MARGIN: f64 = 1e-12;

/// `(M12 M34 - M13 M24) / max(1, |M|^2)`.
pub fn plucker_defect(m: &MinorVector) -> f64 {
    m.raw_plucker_defect() / m.norm().powi(2).max(1.0)
}

/// `(M12 M34 - M13 M24) / |M|^2`, invariant under rescaling.
pub fn relative_plucker_defect(m: &MinorVector) -> f64 {
    m.raw_plucker_defect() / m.norm().powi(2)
}

/// A point of the quadric with the multiplier that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PluckerPoint {
    /// `(P12, P34, P13, -P24)`.
    pub x: [f64; 4],
    pub multiplier: f64,
}

impl PluckerPoint {
    pub fn from_minors(m: &MinorVector) -> Self {
        Self {
            x: to_quadric_coordinates(m),
            multiplier: 0.0,
        }
    }

    pub fn minors(&self) -> Result<MinorVector> {
        let [x1, x2, x3, x4] = self.x;
        MinorVector::new(x1, x3, -x4, x2)
    }

    /// `x1 x2 + x3 x4`.
    pub fn quadric_value(&self) -> f64 {
        let [x1, x2, x3, x4] = self.x;
        x1 * x2 + x3 * x4
    }
}

fn to_quadric_coordinates(m: &MinorVector) -> [f64; 4] {
    [m.m12(), m.m34(), m.m13(), -m.m24()]
}

fn swapped(y: &[f64; 4]) -> [f64; 4] {
    [y[1], y[0], y[3], y[2]]
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection of a minor estimate onto the quadric.
pub fn project_to_plucker(m: &MinorVector) -> Result<PluckerPoint> {
    if relative_plucker_defect(m).abs() < ON_QUADRIC_TOLERANCE {
        return Ok(PluckerPoint::from_minors(m));
    }
    let scale = m.norm();
    let y = to_quadric_coordinates(m).map(|v| v / scale);
    let y_star = swapped(&y);
    let yy = dot(&y, &y);
    let yy_star = dot(&y, &y_star);
    debug_assert!(yy_star != 0.0, "(Y, Y*) is twice the nonzero defect");

    // Smaller root of the quadratic, written without cancellation.
    let p = yy_star / (yy + (yy * yy - yy_star * yy_star).max(0.0).sqrt());
    let denom = 1.0 - p * p;
    if denom < MULTIPLIER_MARGIN {
        return Err(Error::DegenerateProjection);
    }
    let x = std::array::from_fn(|i| scale * (y[i] - p * y_star[i]) / denom);
    Ok(PluckerPoint { x, multiplier: p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(a: [f64; 4]) -> MinorVector {
        MinorVector::from_array(a).unwrap()
    }

    #[test]
    fn defect_examples() {
        assert_eq!(plucker_defect(&mv([1.0, 0.0, 0.0, 0.0])), 0.0);
        assert_eq!(plucker_defect(&mv([1.0, 0.0, 1.0, 0.0])), 0.0);
        let raw = mv([645330.0, 19.947, 2.4157, 1.0]).raw_plucker_defect();
        assert!((raw - (645330.0 - 19.947 * 2.4157)).abs() < 1e-9);
        assert!(plucker_defect(&mv([645330.0, 19.947, 2.4157, 1.0])) != 0.0);
    }

    #[test]
    fn on_quadric_is_fixed() {
        let m = mv([2.0, 3.0, 4.0, 6.0]);
        let point = project_to_plucker(&m).unwrap();
        assert_eq!(point.multiplier, 0.0);
        assert_eq!(point.minors().unwrap(), m);
    }

    #[test]
    fn projection_lands_on_quadric() {
        let m = mv([1.0, 0.3, -0.2, 0.5]);
        let point = project_to_plucker(&m).unwrap();
        assert!(point.quadric_value().abs() < 1e-14);
        assert!(point.multiplier.abs() < 1.0);
        let x = point.x;
        assert!(dot(&x, &swapped(&x)).abs() < 1e-14);
    }

    #[test]
    fn degenerate_pairing() {
        // Y = (1, 1, 0, 0): Y* = Y, every stationary point has p = 1.
        let m = mv([1.0, 0.0, 0.0, 1.0]);
        assert_eq!(project_to_plucker(&m), Err(Error::DegenerateProjection));
    }
}
