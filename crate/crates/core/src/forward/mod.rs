//! Characteristic determinant of a fastening and its positive roots.

mod fastening;

pub use fastening::{preset, Fastening};

use serde::{Deserialize, Serialize};

use crate::basis::{eval_basis, BasisEval, SpectralParameter};
use crate::error::{Error, Result};

/// Boundary matrix `A` of the two rim conditions
/// `U_i(u) = sum_j a_ij (L_j u)(1)`.
///
/// Only `a11, a14` (first row) and `a22, a23` (second row) may be nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundaryConditionsRepr", into = "BoundaryConditionsRepr")]
pub struct BoundaryConditions {
    rows: [[f64; 4]; 2],
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct BoundaryConditionsRepr {
    rows: [[f64; 4]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl TryFrom<BoundaryConditionsRepr> for BoundaryConditions {
    type Error = Error;

    fn try_from(repr: BoundaryConditionsRepr) -> Result<Self> {
        let bc = BoundaryConditions::from_rows(repr.rows)?;
        Ok(match repr.label {
            Some(label) => bc.with_label(label),
            None => bc,
        })
    }
}

impl From<BoundaryConditions> for BoundaryConditionsRepr {
    fn from(bc: BoundaryConditions) -> Self {
        Self {
            rows: bc.rows,
            label: bc.label,
        }
    }
}

/// Positions `(row, column)` that must be zero.
const STRUCTURAL_ZEROS: [(usize, usize); 4] = [(0, 1), (0, 2), (1, 0), (1, 3)];

impl BoundaryConditions {
    pub fn from_rows(rows: [[f64; 4]; 2]) -> Result<Self> {
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundaryConditions(
                "entries must be finite".into(),
            ));
        }
        if let Some(&(i, j)) = STRUCTURAL_ZEROS.iter().find(|&&(i, j)| rows[i][j] != 0.0) {
            return Err(Error::InvalidBoundaryConditions(format!(
                "a{}{} must be zero",
                i + 1,
                j + 1
            )));
        }
        // The rows have disjoint supports, so rank 2 means both are nonzero.
        if rows.iter().any(|row| row.iter().all(|&v| v == 0.0)) {
            return Err(Error::InvalidBoundaryConditions(
                "matrix must have rank two".into(),
            ));
        }
        Ok(Self { rows, label: None })
    }

    /// Builds `[[a11, 0, 0, a14], [0, a22, a23, 0]]`.
    pub fn from_entries(a11: f64, a14: f64, a22: f64, a23: f64) -> Result<Self> {
        Self::from_rows([[a11, 0.0, 0.0, a14], [0.0, a22, a23, 0.0]])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rows(&self) -> [[f64; 4]; 2] {
        self.rows
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Entry `a_ij` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i - 1][j - 1]
    }

    /// Minor `M_ij` built from columns `i` and `j` (1-based).
    pub fn minor(&self, i: usize, j: usize) -> f64 {
        let [r1, r2] = &self.rows;
        r1[i - 1] * r2[j - 1] - r1[j - 1] * r2[i - 1]
    }

    /// All six minors `(M12, M13, M14, M23, M24, M34)`.
    pub fn all_minors(&self) -> [f64; 6] {
        [
            self.minor(1, 2),
            self.minor(1, 3),
            self.minor(1, 4),
            self.minor(2, 3),
            self.minor(2, 4),
            self.minor(3, 4),
        ]
    }

    /// The four minors that enter the characteristic determinant.
    pub fn minors(&self) -> MinorVector {
        MinorVector::new(
            self.minor(1, 2),
            self.minor(1, 3),
            self.minor(2, 4),
            self.minor(3, 4),
        )
        .expect("a rank-two matrix has a nonzero minor")
    }

    /// Multiplies row `i` (1-based) by `factor`.
    pub fn scale_row(&self, i: usize, factor: f64) -> Result<Self> {
        let mut rows = self.rows;
        rows[i - 1].iter_mut().for_each(|v| *v *= factor);
        let scaled = Self::from_rows(rows)?;
        Ok(Self {
            label: self.label.clone(),
            ..scaled
        })
    }
}

/// The four free minors `(M12, M13, M24, M34)`; `M14 = M23 = 0`.
///
/// Defined up to a common nonzero factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MinorVectorRepr", into = "MinorVectorRepr")]
pub struct MinorVector {
    m: [f64; 4],
}

#[derive(Serialize, Deserialize)]
struct MinorVectorRepr {
    m12: f64,
    m13: f64,
    m24: f64,
    m34: f64,
}

impl TryFrom<MinorVectorRepr> for MinorVector {
    type Error = Error;

    fn try_from(r: MinorVectorRepr) -> Result<Self> {
        MinorVector::new(r.m12, r.m13, r.m24, r.m34)
    }
}

impl From<MinorVector> for MinorVectorRepr {
    fn from(v: MinorVector) -> Self {
        let [m12, m13, m24, m34] = v.m;
        Self { m12, m13, m24, m34 }
    }
}

impl MinorVector {
    pub fn new(m12: f64, m13: f64, m24: f64, m34: f64) -> Result<Self> {
        Self::from_array([m12, m13, m24, m34])
    }

    pub fn from_array(m: [f64; 4]) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) || m.iter().all(|&v| v == 0.0) {
            return Err(Error::DegenerateMinors);
        }
        Ok(Self { m })
    }

    pub fn m12(&self) -> f64 {
        self.m[0]
    }

    pub fn m13(&self) -> f64 {
        self.m[1]
    }

    pub fn m24(&self) -> f64 {
        self.m[2]
    }

    pub fn m34(&self) -> f64 {
        self.m[3]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.m
    }

    pub fn norm(&self) -> f64 {
        self.m.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Returns the vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_array(self.m.map(|v| v * factor))
    }

    /// Unit vector whose largest-magnitude component is positive.
    pub fn normalized(&self) -> Self {
        let pivot = self
            .m
            .iter()
            .copied()
            .fold(0.0f64, |best, v| if v.abs() > best.abs() { v } else { best });
        let factor = pivot.signum() / self.norm();
        Self {
            m: self.m.map(|v| v * factor),
        }
    }

    /// `M12 M34 - M13 M24`; zero exactly when the vector is realizable as
    /// the minors of a boundary matrix.
    pub fn raw_plucker_defect(&self) -> f64 {
        self.m12() * self.m34() - self.m13() * self.m24()
    }

    /// Angle in radians between the lines spanned by two minor vectors.
    pub fn angle_to(&self, other: &MinorVector) -> f64 {
        let a = self.m.map(|v| v / self.norm());
        let b = other.m.map(|v| v / other.norm());
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let sign = if dot < 0.0 { -1.0 } else { 1.0 };
        let chord = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - sign * y).powi(2))
            .sum::<f64>()
            .sqrt();
        2.0 * (0.5 * chord).min(1.0).asin()
    }

    /// `|cos|` of the angle between the two lines.
    pub fn similarity(&self, other: &MinorVector) -> f64 {
        self.angle_to(other).cos()
    }
}

/// Minors of a boundary matrix.
pub fn minors_of(bc: &BoundaryConditions) -> MinorVector {
    bc.minors()
}

/// `Delta(s) = M12 f1 + M13 f2 + M24 f3 + M34 f4`.
pub fn characteristic_det(minors: &MinorVector, param: SpectralParameter) -> Result<f64> {
    let f = eval_basis(param)?;
    Ok(combine(minors, &f))
}

fn combine(minors: &MinorVector, f: &BasisEval) -> f64 {
    minors
        .as_array()
        .iter()
        .zip(f.as_array())
        .map(|(m, v)| m * v)
        .sum()
}

/// `|Delta| / (|M| max_k |f_k|)` together with `Delta`.
fn det_and_residual(minors: &MinorVector, sqrt_s: f64) -> Result<(f64, f64)> {
    let f = eval_basis(SpectralParameter::from_sqrt(sqrt_s)?)?;
    let det = combine(minors, &f);
    let scale = minors.norm() * f.max_abs();
    let residual = if scale > 0.0 { det.abs() / scale } else { 0.0 };
    Ok((det, residual))
}

/// One located root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub sqrt_s: f64,
    /// Relative residual `|Delta| / (|M| max|f_k|)` at the root.
    pub residual: f64,
    /// Final bracket in `sqrt(s)`; `Delta` changes sign across it.
    pub bracket: [f64; 2],
}

/// First positive roots of a characteristic determinant, ascending in `sqrt(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub roots: Vec<Root>,
    pub sqrt_s_max: f64,
    pub grid_step: f64,
}

impl Spectrum {
    pub fn sqrt_s_values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.sqrt_s).collect()
    }
}

/// Scan-and-bisect root search in `sqrt(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    pub sqrt_s_max: f64,
    pub grid_step: f64,
    pub width_tolerance: f64,
    pub residual_tolerance: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self {
            sqrt_s_max: 10.0,
            grid_step: 0.01,
            width_tolerance: 1e-10,
            residual_tolerance: 1e-10,
        }
    }
}

const MAX_BISECTIONS: usize = 200;

impl RootSearch {
    pub fn with_ceiling(sqrt_s_max: f64) -> Self {
        Self {
            sqrt_s_max,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.sqrt_s_max.is_finite()
            && self.sqrt_s_max > 0.0
            && self.grid_step.is_finite()
            && self.grid_step > 0.0
            && self.grid_step < self.sqrt_s_max
            && self.width_tolerance > 0.0
            && self.residual_tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid root search settings {self:?}"
            )))
        }
    }

    /// First `count` positive roots of the determinant with the given minors.
    ///
    /// Roots where `Delta` touches zero without changing sign are not found.
    pub fn find(&self, minors: &MinorVector, count: usize) -> Result<Spectrum> {
        self.validate()?;
        if count == 0 {
            return Err(Error::InvalidParameter("root count must be at least 1".into()));
        }
        let mut roots = Vec::with_capacity(count);
        let mut lo = self.grid_step;
        let (mut det_lo, _) = det_and_residual(minors, lo)?;
        let mut i = 1usize;
        while roots.len() < count {
            let hi = self.grid_step * (i + 1) as f64;
            if hi > self.sqrt_s_max {
                break;
            }
            let (det_hi, res_hi) = det_and_residual(minors, hi)?;
            if det_hi == 0.0 {
                roots.push(Root {
                    sqrt_s: hi,
                    residual: res_hi,
                    bracket: [hi, hi],
                });
            } else if det_lo != 0.0 && (det_lo < 0.0) != (det_hi < 0.0) {
                roots.push(self.bisect(minors, (lo, det_lo), hi)?);
            }
            lo = hi;
            det_lo = det_hi;
            i += 1;
        }
        if roots.len() < count {
            return Err(Error::InsufficientRoots {
                found: roots.len(),
                requested: count,
                ceiling: self.sqrt_s_max,
            });
        }
        Ok(Spectrum {
            roots,
            sqrt_s_max: self.sqrt_s_max,
            grid_step: self.grid_step,
        })
    }

    fn bisect(&self, minors: &MinorVector, (mut lo, mut det_lo): (f64, f64), mut hi: f64) -> Result<Root> {
        let mut mid = 0.5 * (lo + hi);
        let (mut det_mid, mut residual) = det_and_residual(minors, mid)?;
        for _ in 0..MAX_BISECTIONS {
            let converged =
                hi - lo < self.width_tolerance && residual < self.residual_tolerance;
            if converged || det_mid == 0.0 {
                break;
            }
            if (det_mid < 0.0) == (det_lo < 0.0) {
                lo = mid;
                det_lo = det_mid;
            } else {
                hi = mid;
            }
            let next = 0.5 * (lo + hi);
            if next <= lo || next >= hi {
                break;
            }
            mid = next;
            (det_mid, residual) = det_and_residual(minors, mid)?;
        }
        Ok(Root {
            sqrt_s: mid,
            residual,
            bracket: [lo, hi],
        })
    }
}

/// First `count` roots of `Delta` for `bc` below `sqrt_s_max`, with the
/// default grid step of 0.01.
pub fn find_roots(bc: &BoundaryConditions, count: usize, sqrt_s_max: f64) -> Result<Spectrum> {
    RootSearch::with_ceiling(sqrt_s_max).find(&bc.minors(), count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_zeros_enforced() {
        let bad = BoundaryConditions::from_rows([[1.0, 0.5, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]);
        assert!(matches!(bad, Err(Error::InvalidBoundaryConditions(_))));
        assert!(BoundaryConditions::from_entries(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(BoundaryConditions::from_entries(1.0, f64::INFINITY, 1.0, 0.0).is_err());
    }

    #[test]
    fn minors_of_examples() {
        let clamp = BoundaryConditions::from_entries(1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(minors_of(&clamp).as_array(), [1.0, 0.0, 0.0, 0.0]);
        let elastic = BoundaryConditions::from_entries(1.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(minors_of(&elastic).as_array(), [1.0, 0.0, 1.0, 0.0]);
        let support = BoundaryConditions::from_entries(1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(minors_of(&support).as_array(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn off_pattern_minors_vanish() {
        let bc = BoundaryConditions::from_entries(0.3, -2.0, 1.7, 0.4).unwrap();
        let all = bc.all_minors();
        assert_eq!(all[2], 0.0);
        assert_eq!(all[3], 0.0);
        assert!(bc.minors().raw_plucker_defect().abs() < 1e-15);
    }

    #[test]
    fn zero_minors_rejected() {
        assert!(matches!(
            MinorVector::new(0.0, 0.0, 0.0, 0.0),
            Err(Error::DegenerateMinors)
        ));
    }

    #[test]
    fn determinant_vanishes_at_published_roots() {
        let s = SpectralParameter::from_sqrt(3.0739).unwrap();
        let clamp = MinorVector::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let f = eval_basis(s).unwrap();
        assert!(characteristic_det(&clamp, s).unwrap().abs() < 1e-3 * f.max_abs());

        let s = SpectralParameter::from_sqrt(1.5178).unwrap();
        let elastic = MinorVector::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let f = eval_basis(s).unwrap();
        assert!(characteristic_det(&elastic, s).unwrap().abs() < 1e-3 * f.max_abs());
    }

    #[test]
    fn rigid_clamp_roots() {
        let spectrum = find_roots(&Fastening::RigidClamp.boundary_conditions(), 3, 10.0).unwrap();
        let expected = [3.0739, 5.1995, 7.3054];
        for (root, e) in spectrum.roots.iter().zip(expected) {
            assert!((root.sqrt_s - e).abs() < 1e-3, "{root:?} vs {e}");
            assert!(root.residual < 1e-10);
            assert!(root.bracket[1] - root.bracket[0] < 1e-10);
        }
    }

    #[test]
    fn insufficient_roots() {
        let err = find_roots(&Fastening::RigidClamp.boundary_conditions(), 3, 6.0).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientRoots {
                found: 2,
                requested: 3,
                ceiling: 6.0
            }
        );
    }

    #[test]
    fn invalid_search_settings() {
        let bc = Fastening::RigidClamp.boundary_conditions();
        assert!(find_roots(&bc, 0, 10.0).is_err());
        assert!(find_roots(&bc, 3, -1.0).is_err());
    }

    #[test]
    fn angle_is_sign_free() {
        let a = MinorVector::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let b = MinorVector::new(-2.0, 0.0, -2.0, 0.0).unwrap();
        assert!(a.angle_to(&b) < 1e-15);
        let c = MinorVector::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((a.angle_to(&c) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let bc = Fastening::ElasticFixing.boundary_conditions();
        let text = serde_json::to_string(&bc).unwrap();
        assert_eq!(serde_json::from_str::<BoundaryConditions>(&text).unwrap(), bc);
        let bad = r#"{"rows": [[1, 1, 0, 0], [0, 1, 0, 0]]}"#;
        assert!(serde_json::from_str::<BoundaryConditions>(bad).is_err());
    }
}
