use serde::{Deserialize, Serialize};

use crate::forward::{BoundaryConditions, Fastening, MinorVector};

/// Below this `|cos|` no reference fastening is accepted.
pub const SIMILARITY_THRESHOLD: f64 = 0.999;

/// A named fastening within this angle (radians) wins over any point of the
/// elastic-clamp sweep.
pub const NAMED_PREFERENCE_ANGLE: f64 = 1e-3;

/// Elastic-clamp stiffness sweep: log-spaced points on `[min, max]`.
pub const SWEEP_POINTS: usize = 64;
pub const SWEEP_MIN_STIFFNESS: f64 = 1e-5;
pub const SWEEP_MAX_STIFFNESS: f64 = 1e5;

pub const UNKNOWN_LABEL: &str = "elastic/unknown fastening";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: String,
    /// Matched reference, `None` when no reference reached the threshold.
    pub fastening: Option<Fastening>,
    /// `|cos|` between the identified and nearest reference minor directions.
    pub similarity: f64,
    pub angle: f64,
    pub reference_minors: MinorVector,
}

impl Classification {
    /// Same kind of fastening; elastic clamps match regardless of stiffness.
    pub fn same_kind(&self, other: &Classification) -> bool {
        match (&self.fastening, &other.fastening) {
            (Some(a), Some(b)) => a.slug() == b.slug(),
            (None, None) => true,
            _ => false,
        }
    }
}

pub fn stiffness_sweep() -> impl Iterator<Item = f64> {
    let (lo, hi) = (SWEEP_MIN_STIFFNESS.log10(), SWEEP_MAX_STIFFNESS.log10());
    (0..SWEEP_POINTS).map(move |i| {
        let t = i as f64 / (SWEEP_POINTS - 1) as f64;
        10f64.powf(lo + t * (hi - lo))
    })
}

fn nearest<I: Iterator<Item = Fastening>>(target: &MinorVector, candidates: I) -> Option<(Fastening, f64)> {
    candidates
        .map(|f| (f, target.angle_to(&f.minors())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Nearest reference fastening by the angle between minor directions.
pub fn classify(bc: &BoundaryConditions) -> Classification {
    classify_minors(&bc.minors())
}

/// Stiffness whose minors `(c, 0, 1, 0)` best match `M12 : M24`, if it is
/// inside the sweep range.
fn refined_stiffness(minors: &MinorVector) -> Option<f64> {
    let c = minors.m12() / minors.m24();
    (c.is_finite() && (SWEEP_MIN_STIFFNESS..=SWEEP_MAX_STIFFNESS).contains(&c)).then_some(c)
}

pub fn classify_minors(minors: &MinorVector) -> Classification {
    let named = nearest(minors, Fastening::NAMED.into_iter()).expect("named fastenings exist");
    let swept = nearest(
        minors,
        stiffness_sweep()
            .chain(refined_stiffness(minors))
            .map(|c| Fastening::ElasticClamp { stiffness: c }),
    )
    .expect("sweep is not empty");

    let (best, angle) = if named.1 <= NAMED_PREFERENCE_ANGLE || named.1 <= swept.1 {
        named
    } else {
        swept
    };
    let similarity = angle.cos();
    let accepted = similarity >= SIMILARITY_THRESHOLD;
    Classification {
        label: if accepted {
            best.description()
        } else {
            UNKNOWN_LABEL.to_string()
        },
        fastening: accepted.then_some(best),
        similarity,
        angle,
        reference_minors: best.minors(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_classify_as_themselves() {
        for f in Fastening::NAMED {
            let c = classify(&f.boundary_conditions());
            assert_eq!(c.fastening, Some(f));
            assert_eq!(c.label, f.description());
            assert!(c.similarity > 1.0 - 1e-15);
        }
    }

    #[test]
    fn elastic_clamp_is_found_by_sweep() {
        let bc = Fastening::ElasticClamp { stiffness: 10.0 }.boundary_conditions();
        let c = classify(&bc);
        assert!(matches!(c.fastening, Some(Fastening::ElasticClamp { .. })));
        assert!(c.similarity > SIMILARITY_THRESHOLD);
    }

    #[test]
    fn stiffness_between_sweep_points() {
        let bc = Fastening::ElasticClamp { stiffness: 2.0 }.boundary_conditions();
        let c = classify(&bc);
        assert_eq!(c.fastening, Some(Fastening::ElasticClamp { stiffness: 2.0 }));
        assert!(c.angle < 1e-12);
    }

    #[test]
    fn stiff_clamp_reads_as_rigid() {
        let bc = Fastening::ElasticClamp { stiffness: 1e4 }.boundary_conditions();
        assert_eq!(classify(&bc).fastening, Some(Fastening::RigidClamp));
    }

    #[test]
    fn far_from_references_is_unknown() {
        let bc = BoundaryConditions::from_entries(1.0, -1.0, 1.0, 1.0).unwrap();
        let c = classify(&bc);
        assert_eq!(c.label, UNKNOWN_LABEL);
        assert!(c.fastening.is_none());
    }

    #[test]
    fn sweep_spans_range() {
        let pts: Vec<f64> = stiffness_sweep().collect();
        assert_eq!(pts.len(), SWEEP_POINTS);
        assert!((pts[0] - 1e-5).abs() < 1e-18);
        assert!((pts[SWEEP_POINTS - 1] / 1e5 - 1.0).abs() < 1e-12);
    }
}
