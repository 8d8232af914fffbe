//! Monte-Carlo study of how frequency errors propagate into the identified
//! boundary matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{BoundaryConditions, RootSearch};
use crate::inverse::{identify, IdentificationResult};

pub const MAX_DELTA: f64 = 0.1;
pub const MIN_TRIALS: usize = 10;

/// Statistics for one perturbation level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub delta: f64,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub preserved: usize,
    /// Fraction of all trials whose classification matched the base one.
    pub preservation_rate: f64,
    pub max_coefficient_deviation: f64,
    pub mean_coefficient_deviation: f64,
    pub max_angle: f64,
    /// Trials reconstructed in a different chart than the base.
    pub chart_switches: usize,
}

impl LevelStats {
    /// `max_coefficient_deviation / delta`.
    pub fn amplification(&self) -> f64 {
        self.max_coefficient_deviation / self.delta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub base_label: String,
    pub base_sqrt_s: [f64; 3],
    pub base_matrix: BoundaryConditions,
    pub seed: u64,
    pub trials: usize,
    pub levels: Vec<LevelStats>,
}

const CSV_HEADER: [&str; 11] = [
    "delta",
    "trials",
    "failures",
    "failure_rate",
    "preserved",
    "preservation_rate",
    "max_coefficient_deviation",
    "mean_coefficient_deviation",
    "max_angle",
    "chart_switches",
    "amplification",
];

impl PerturbationReport {
    /// One row per perturbation level.
    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).map_err(io)?;
        for l in &self.levels {
            w.write_record([
                format!("{:e}", l.delta),
                l.trials.to_string(),
                l.failures.to_string(),
                l.failure_rate.to_string(),
                l.preserved.to_string(),
                l.preservation_rate.to_string(),
                format!("{:e}", l.max_coefficient_deviation),
                format!("{:e}", l.mean_coefficient_deviation),
                format!("{:e}", l.max_angle),
                l.chart_switches.to_string(),
                format!("{:e}", l.amplification()),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| io(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

enum Trial {
    Failed,
    Done { preserved: bool, deviation: f64, angle: f64, switched: bool },
}

fn max_entry_difference(a: &BoundaryConditions, b: &BoundaryConditions) -> f64 {
    a.rows()
        .iter()
        .flatten()
        .zip(b.rows().iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn evaluate(base: &IdentificationResult, sqrt_s: [f64; 3]) -> Trial {
    let Ok(result) = identify(sqrt_s) else {
        return Trial::Failed;
    };
    let angle = result
        .projected_minors
        .angle_to(&base.projected_minors);
    let switched = result.chart != base.chart;
    // Matrices in different charts are not comparable entrywise.
    let deviation = if switched {
        angle
    } else {
        max_entry_difference(&result.boundary_conditions, &base.boundary_conditions)
    };
    Trial::Done {
        preserved: result.classification.same_kind(&base.classification),
        deviation,
        angle,
        switched,
    }
}

/// Perturbs each of the first three frequencies of `bc` by independent
/// uniform noise in `[-delta, delta]` and re-identifies, `trials` times per
/// level. Deterministic for a given seed.
pub fn perturb_and_identify(
    bc: &BoundaryConditions,
    deltas: &[f64],
    trials: usize,
    seed: u64,
) -> Result<PerturbationReport> {
    if deltas.is_empty() {
        return Err(Error::InvalidParameter("at least one delta is required".into()));
    }
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0 && **d <= MAX_DELTA)) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, {MAX_DELTA}], got {d}"
        )));
    }
    if deltas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "deltas must be strictly increasing".into(),
        ));
    }
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_TRIALS} trials are required, got {trials}"
        )));
    }

    let spectrum = RootSearch::default().find(&bc.minors(), 3)?;
    let values = spectrum.sqrt_s_values();
    let base_sqrt_s = [values[0], values[1], values[2]];
    let base = identify(base_sqrt_s)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<[f64; 3]>> = deltas
        .iter()
        .map(|&d| {
            (0..trials)
                .map(|_| base_sqrt_s.map(|k| k + rng.random_range(-d..=d)))
                .collect()
        })
        .collect();

    let levels = deltas
        .iter()
        .zip(&inputs)
        .map(|(&delta, level_inputs)| {
            let outcomes: Vec<Trial> = level_inputs
                .par_iter()
                .map(|&sqrt_s| evaluate(&base, sqrt_s))
                .collect();
            summarize(delta, &outcomes)
        })
        .collect();

    Ok(PerturbationReport {
        base_label: base.classification.label.clone(),
        base_sqrt_s,
        base_matrix: base.boundary_conditions,
        seed,
        trials,
        levels,
    })
}

fn summarize(delta: f64, outcomes: &[Trial]) -> LevelStats {
    let trials = outcomes.len();
    let mut failures = 0;
    let mut preserved = 0;
    let mut switches = 0;
    let mut max_dev = 0.0f64;
    let mut sum_dev = 0.0;
    let mut max_angle = 0.0f64;
    for outcome in outcomes {
        match *outcome {
            Trial::Failed => failures += 1,
            Trial::Done { preserved: p, deviation, angle, switched } => {
                preserved += usize::from(p);
                switches += usize::from(switched);
                max_dev = max_dev.max(deviation);
                sum_dev += deviation;
                max_angle = max_angle.max(angle);
            }
        }
    }
    let done = trials - failures;
    LevelStats {
        delta,
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        preserved,
        preservation_rate: preserved as f64 / trials as f64,
        max_coefficient_deviation: max_dev,
        mean_coefficient_deviation: if done > 0 { sum_dev / done as f64 } else { f64::NAN },
        max_angle,
        chart_switches: switches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::Fastening;

    #[test]
    fn validates_arguments() {
        let bc = Fastening::RigidClamp.boundary_conditions();
        assert!(perturb_and_identify(&bc, &[], 10, 1).is_err());
        assert!(perturb_and_identify(&bc, &[0.2], 10, 1).is_err());
        assert!(perturb_and_identify(&bc, &[0.0], 10, 1).is_err());
        assert!(perturb_and_identify(&bc, &[1e-4, 1e-5], 10, 1).is_err());
        assert!(perturb_and_identify(&bc, &[1e-4], 5, 1).is_err());
    }

    #[test]
    fn vanishing_noise_reproduces_base() {
        let bc = Fastening::ElasticFixing.boundary_conditions();
        let report = perturb_and_identify(&bc, &[1e-13], 10, 7).unwrap();
        let level = &report.levels[0];
        assert_eq!(level.failures, 0);
        assert_eq!(level.preserved, 10);
        assert!(level.max_coefficient_deviation < 1e-8, "{level:?}");
    }

    #[test]
    fn same_seed_same_report() {
        let bc = Fastening::FreeSupport.boundary_conditions();
        let a = perturb_and_identify(&bc, &[1e-5, 1e-4], 12, 42).unwrap();
        let b = perturb_and_identify(&bc, &[1e-5, 1e-4], 12, 42).unwrap();
        assert_eq!(a, b);
        let c = perturb_and_identify(&bc, &[1e-5, 1e-4], 12, 43).unwrap();
        assert_ne!(a.levels, c.levels);
    }

    #[test]
    fn csv_has_one_row_per_level() {
        let bc = Fastening::RigidClamp.boundary_conditions();
        let report = perturb_and_identify(&bc, &[1e-6, 1e-5, 1e-4], 10, 3).unwrap();
        let csv = report.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("delta,trials,failures"));
    }
}
