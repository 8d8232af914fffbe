use nalgebra::{Matrix3, Matrix3x4, Matrix4};
use serde::{Deserialize, Serialize};

use crate::basis::{eval_basis, SpectralParameter};
use crate::error::{Error, Result};
use crate::forward::MinorVector;

/// A singular value below this fraction of the largest one counts as zero.
pub const RANK_RELATIVE_TOLERANCE: f64 = 1e-14;

/// Condition estimate above which the minor solution is flagged.
pub const ILL_CONDITIONED_THRESHOLD: f64 = 1e12;

/// The homogeneous system `sum_k M_k f_k(s_i) = 0` for three frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorSystem {
    /// Row `i` is `(f1, f2, f3, f4)` at the `i`-th frequency.
    pub rows: [[f64; 4]; 3],
    pub sqrt_s: [f64; 3],
    /// Singular values of the row-normalised system, descending.
    pub singular_values: [f64; 3],
    pub rank: usize,
    /// `sigma_max / sigma_min` of the row-normalised system.
    pub condition: f64,
}

impl MinorSystem {
    pub fn is_ill_conditioned(&self) -> bool {
        self.condition.is_nan() || self.condition > ILL_CONDITIONED_THRESHOLD
    }

    fn normalized_rows(&self) -> [[f64; 4]; 3] {
        self.rows.map(|row| {
            let n = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            row.map(|v| v / n)
        })
    }

    /// Largest `|row_i . m| / (|row_i| |m|)`.
    pub fn residual(&self, minors: &MinorVector) -> f64 {
        let m = minors.as_array();
        let m_norm = minors.norm();
        self.rows
            .iter()
            .map(|row| {
                let dot: f64 = row.iter().zip(&m).map(|(a, b)| a * b).sum();
                let row_norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                dot.abs() / (row_norm * m_norm)
            })
            .fold(0.0, f64::max)
    }
}

/// Evaluates `f1..f4` at three measured frequencies `sqrt(s_i)`.
pub fn build_system(sqrt_s: [f64; 3]) -> Result<MinorSystem> {
    if let Some(bad) = sqrt_s.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidFrequencies(format!(
            "frequencies must be positive and finite, got {bad}"
        )));
    }
    for pair in sqrt_s.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::InvalidFrequencies(format!(
                "duplicate frequency {}",
                pair[0]
            )));
        }
        if pair[0] > pair[1] {
            return Err(Error::InvalidFrequencies(format!(
                "frequencies must be strictly increasing, got {} before {}",
                pair[0], pair[1]
            )));
        }
    }

    let mut rows = [[0.0; 4]; 3];
    for (row, &k) in rows.iter_mut().zip(&sqrt_s) {
        *row = eval_basis(SpectralParameter::from_sqrt(k)?)?.as_array();
    }
    if rows.iter().any(|row| row.iter().all(|&v| v == 0.0)) {
        return Err(Error::InvalidFrequencies("a system row vanishes".into()));
    }

    let mut system = MinorSystem {
        rows,
        sqrt_s,
        singular_values: [0.0; 3],
        rank: 0,
        condition: f64::INFINITY,
    };
    let normalized = Matrix3x4::from_fn(|i, j| system.normalized_rows()[i][j]);
    let mut sv: Vec<f64> = normalized.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    system.singular_values = [sv[0], sv[1], sv[2]];
    system.rank = sv
        .iter()
        .filter(|&&v| v > sv[0] * RANK_RELATIVE_TOLERANCE)
        .count();
    system.condition = if sv[2] > 0.0 { sv[0] / sv[2] } else { f64::INFINITY };
    Ok(system)
}

/// Which construction produced the null vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullSpaceMethod {
    Cofactor,
    Svd,
}

/// Null direction of a [`MinorSystem`] with its checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorSolution {
    /// Unit vector, largest-magnitude component positive.
    pub minors: MinorVector,
    pub method: NullSpaceMethod,
    pub residual: f64,
    /// Angle between the cofactor and SVD null directions.
    pub cross_check_angle: f64,
    pub ill_conditioned: bool,
}

/// Signed 3x3 cofactors: `m_c = (-1)^c det(rows without column c)`.
fn cofactor_null_vector(rows: &[[f64; 4]; 3]) -> [f64; 4] {
    std::array::from_fn(|c| {
        let sub = Matrix3::from_fn(|i, j| rows[i][if j < c { j } else { j + 1 }]);
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        sign * sub.determinant()
    })
}

/// Right singular vector of the smallest singular value of the zero-padded
/// 4x4 system.
fn svd_null_vector(rows: &[[f64; 4]; 3]) -> Option<[f64; 4]> {
    let padded = Matrix4::from_fn(|i, j| if i < 3 { rows[i][j] } else { 0.0 });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    Some(std::array::from_fn(|j| v_t[(idx, j)]))
}

/// Null direction of the 3x4 minor system.
///
/// The signed cofactor vector is the primary answer; an SVD null vector is
/// computed alongside and wins when its residual is smaller.
pub fn solve_minors(system: &MinorSystem) -> Result<MinorSolution> {
    if system.rank < 3 {
        return Err(Error::RankDeficient {
            rank: system.rank,
            condition: system.condition,
        });
    }
    let rows = system.normalized_rows();
    let cofactor = MinorVector::from_array(cofactor_null_vector(&rows)).ok();
    let svd = svd_null_vector(&rows).and_then(|v| MinorVector::from_array(v).ok());

    let (minors, method) = match (cofactor, svd) {
        (Some(c), Some(s)) if system.residual(&s) < system.residual(&c) => (s, NullSpaceMethod::Svd),
        (Some(c), _) => (c, NullSpaceMethod::Cofactor),
        (None, Some(s)) => (s, NullSpaceMethod::Svd),
        (None, None) => {
            return Err(Error::RankDeficient {
                rank: system.rank,
                condition: system.condition,
            })
        }
    };
    let cross_check_angle = match (cofactor, svd) {
        (Some(c), Some(s)) => c.angle_to(&s),
        _ => f64::NAN,
    };
    let minors = minors.normalized();
    Ok(MinorSolution {
        residual: system.residual(&minors),
        minors,
        method,
        cross_check_angle,
        ill_conditioned: system.is_ill_conditioned(),
    })
}
