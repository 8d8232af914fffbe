use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BoundaryConditions, MinorVector};
use crate::error::{Error, Result};

/// Named ways of fastening the disc rim.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Fastening {
    /// `u = u' = 0`.
    RigidClamp,
    /// `u = 0`, `L3 u = 0`.
    FreeSupport,
    /// `L4 u = 0`, `L3 u = 0`.
    FreeEdge,
    /// `L4 u = 0`, `u' = 0`.
    FloatingFixing,
    /// `c u - L4 u = 0`, `u' = 0` with stiffness `c > 0`.
    ElasticClamp { stiffness: f64 },
    /// Elastic clamp with unit stiffness.
    ElasticFixing,
}

impl Fastening {
    /// Every named fastening without a free parameter.
    pub const NAMED: [Fastening; 5] = [
        Fastening::RigidClamp,
        Fastening::FreeSupport,
        Fastening::FreeEdge,
        Fastening::FloatingFixing,
        Fastening::ElasticFixing,
    ];

    pub fn elastic_clamp(stiffness: f64) -> Result<Self> {
        if !(stiffness.is_finite() && stiffness > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "elastic-clamp stiffness must be positive and finite, got {stiffness}"
            )));
        }
        Ok(Fastening::ElasticClamp { stiffness })
    }

    /// CLI label, e.g. `rigid-clamp`.
    pub fn slug(&self) -> &'static str {
        match self {
            Fastening::RigidClamp => "rigid-clamp",
            Fastening::FreeSupport => "free-support",
            Fastening::FreeEdge => "free-edge",
            Fastening::FloatingFixing => "floating-fixing",
            Fastening::ElasticClamp { .. } => "elastic-clamp",
            Fastening::ElasticFixing => "elastic-fixing",
        }
    }

    /// Human-readable classification label.
    pub fn description(&self) -> String {
        match self {
            Fastening::RigidClamp => "rigid clamping".into(),
            Fastening::FreeSupport => "free support".into(),
            Fastening::FreeEdge => "free edge".into(),
            Fastening::FloatingFixing => "floating fixing".into(),
            Fastening::ElasticClamp { stiffness } => {
                // Five significant digits, printed without trailing zeros.
                let c: f64 = format!("{stiffness:.4e}").parse().expect("formatted float parses");
                format!("elastic clamping (c = {c})")
            }
            Fastening::ElasticFixing => "elastic fixing".into(),
        }
    }

    /// Free entries `(a11, a14, a22, a23)` of the boundary matrix.
    fn entries(&self) -> [f64; 4] {
        match *self {
            Fastening::RigidClamp => [1.0, 0.0, 1.0, 0.0],
            Fastening::FreeSupport => [1.0, 0.0, 0.0, 1.0],
            Fastening::FreeEdge => [0.0, 1.0, 0.0, 1.0],
            Fastening::FloatingFixing => [0.0, 1.0, 1.0, 0.0],
            Fastening::ElasticClamp { stiffness } => [stiffness, -1.0, 1.0, 0.0],
            Fastening::ElasticFixing => [1.0, -1.0, 1.0, 0.0],
        }
    }

    pub fn boundary_conditions(&self) -> BoundaryConditions {
        let [a11, a14, a22, a23] = self.entries();
        BoundaryConditions::from_entries(a11, a14, a22, a23)
            .expect("preset matrices have rank two")
            .with_label(self.slug())
    }

    pub fn minors(&self) -> MinorVector {
        self.boundary_conditions().minors()
    }
}

impl fmt::Display for Fastening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description())
    }
}

impl FromStr for Fastening {
    type Err = Error;

    /// Parses a label; `elastic-clamp` takes its stiffness as `elastic-clamp:c`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let stiffness = param
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad stiffness `{p}`")))
            })
            .transpose()?;
        preset(name.trim(), stiffness).map(|(f, _)| f)
    }
}

/// Boundary matrix of a named fastening; `stiffness` is required for
/// `elastic-clamp` and rejected for the others.
pub fn preset(name: &str, stiffness: Option<f64>) -> Result<(Fastening, BoundaryConditions)> {
    let fastening = match (name, stiffness) {
        ("elastic-clamp", Some(c)) => Fastening::elastic_clamp(c)?,
        ("elastic-clamp", None) => {
            return Err(Error::InvalidParameter(
                "elastic-clamp needs a stiffness".into(),
            ))
        }
        (other, Some(_)) if Fastening::NAMED.iter().any(|f| f.slug() == other) => {
            return Err(Error::InvalidParameter(format!(
                "`{other}` takes no stiffness parameter"
            )))
        }
        (other, None) => *Fastening::NAMED
            .iter()
            .find(|f| f.slug() == other)
            .ok_or_else(|| Error::UnknownPreset(other.to_string()))?,
        (other, Some(_)) => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok((fastening, fastening.boundary_conditions()))
}
