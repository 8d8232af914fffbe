//! Argument parsing and report rendering for the `fastening` binary.
//!
//! All quantities are dimensionless. Frequencies are the parameters
//! `sqrt(s)`; turning them into physical frequencies needs the Young's
//! modulus, density and reference thickness of the actual disc, which this
//! tool does not model.

use std::fmt::{self, Write as _};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fastening_core::error::Error;
use fastening_core::forward::{preset, BoundaryConditions, Fastening, RootSearch, Spectrum};
use fastening_core::inverse::{identify, IdentificationResult};
use fastening_core::reference::{compare, Comparison, Fixture};
use fastening_core::report::to_canonical_json;
use fastening_core::stability::{perturb_and_identify, PerturbationReport};
use serde::Serialize;

const ABOUT: &str = "Natural frequencies and fastening identification for a disc with \
rigidity D0 r^2.\n\nAll inputs and outputs are dimensionless frequency parameters \
sqrt(s). Converting them to physical frequencies requires the material and thickness \
of the real disc and is left to the user.";

#[derive(Debug, Parser)]
#[command(name = "fastening", version, about = ABOUT)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First natural frequencies of a fastening.
    Forward {
        #[command(flatten)]
        fastening: FasteningArgs,

        /// Number of roots to report.
        #[arg(long, default_value_t = 3)]
        roots: usize,

        /// Upper end of the root scan in sqrt(s).
        #[arg(long, default_value_t = 10.0)]
        sqrt_s_max: f64,

        /// Scan step in sqrt(s).
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,

        /// Bisection tolerance on bracket width and relative residual.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },

    /// Identify the fastening from three ascending frequencies sqrt(s).
    Inverse {
        #[arg(num_args = 3, value_names = ["S1", "S2", "S3"], allow_negative_numbers = true)]
        sqrt_s: Vec<f64>,
    },

    /// Monte-Carlo sensitivity of the identification to frequency noise.
    Stability {
        #[command(flatten)]
        fastening: FasteningArgs,

        /// Noise half-widths, strictly increasing, each in (0, 0.1].
        #[arg(long, value_delimiter = ',', default_values_t = [1e-6, 1e-5, 1e-4])]
        deltas: Vec<f64>,

        /// Trials per noise level (at least 10).
        #[arg(long, default_value_t = 100)]
        trials: usize,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Compare against an embedded published fixture.
    Reproduce {
        #[arg(value_enum)]
        fixture: FixtureName,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FasteningArgs {
    /// Named fastening: rigid-clamp, free-support, free-edge, floating-fixing,
    /// elastic-fixing or elastic-clamp (with --stiffness, or as elastic-clamp:C).
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    pub preset: Option<String>,

    /// Stiffness c of an elastic clamp.
    #[arg(long, requires = "preset")]
    pub stiffness: Option<f64>,

    /// Free matrix entries a11,a14,a22,a23.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub matrix: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    Table1,
    Example1,
    Example2,
    Example3,
    Series,
}

impl FixtureName {
    fn fixture(self) -> Fixture {
        match self {
            FixtureName::Table1 => Fixture::Table1,
            FixtureName::Example1 => Fixture::Example(1),
            FixtureName::Example2 => Fixture::Example(2),
            FixtureName::Example3 => Fixture::Example(3),
            FixtureName::Series => Fixture::Series,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FixtureName::Table1 => "table1",
            FixtureName::Example1 => "example1",
            FixtureName::Example2 => "example2",
            FixtureName::Example3 => "example3",
            FixtureName::Series => "series",
        }
    }
}

/// Why a run produced no report.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad input; exit status 2.
    Usage(String),
    /// A numerical stage failed; exit status 1.
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root_cause() {
            Error::InvalidParameter(_)
            | Error::UnknownPreset(_)
            | Error::InvalidBoundaryConditions(_)
            | Error::InvalidFrequencies(_)
            | Error::InvalidSpectralParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

/// Rendered report and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Forward {
            fastening,
            roots,
            sqrt_s_max,
            grid_step,
            tolerance,
        } => {
            let bc = fastening.resolve()?;
            let search = RootSearch {
                sqrt_s_max: *sqrt_s_max,
                grid_step: *grid_step,
                width_tolerance: *tolerance,
                residual_tolerance: *tolerance,
            };
            let spectrum = search.find(&bc.minors(), *roots)?;
            render_spectrum(&bc, &spectrum, cli.format).map(Output::ok)
        }
        Command::Inverse { sqrt_s } => {
            let values: [f64; 3] = sqrt_s
                .as_slice()
                .try_into()
                .map_err(|_| Failure::Usage("inverse takes exactly three values".into()))?;
            let result = identify(values)?;
            render_identification(&result, cli.format).map(Output::ok)
        }
        Command::Stability {
            fastening,
            deltas,
            trials,
            seed,
        } => {
            let bc = fastening.resolve()?;
            let report = perturb_and_identify(&bc, deltas, *trials, *seed)?;
            render_stability(&report, cli.format).map(Output::ok)
        }
        Command::Reproduce { fixture } => {
            let cells = compare(fixture.fixture())?;
            let code = if cells.iter().all(|c| c.pass) { 0 } else { 1 };
            let stdout = render_comparisons(fixture.name(), &cells, cli.format)?;
            Ok(Output { stdout, code })
        }
    }
}

impl FasteningArgs {
    pub fn resolve(&self) -> Result<BoundaryConditions, Failure> {
        match (&self.preset, &self.matrix) {
            (Some(name), None) => {
                let fastening = match self.stiffness {
                    Some(_) if name.contains(':') => {
                        return Err(Failure::Usage(format!(
                            "stiffness given twice: `{name}` and --stiffness"
                        )))
                    }
                    Some(c) => preset(name, Some(c))?.0,
                    None => name.parse::<Fastening>()?,
                };
                Ok(fastening.boundary_conditions())
            }
            (None, Some(entries)) => match entries.as_slice() {
                &[a11, a14, a22, a23] => Ok(BoundaryConditions::from_entries(a11, a14, a22, a23)?),
                _ => Err(Failure::Usage(format!(
                    "--matrix takes four values a11,a14,a22,a23, got {}",
                    entries.len()
                ))),
            },
            _ => Err(Failure::Usage("give exactly one of --preset or --matrix".into())),
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    to_canonical_json(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Numerical(format!("serialization failed: {e}")))
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let fail = |e: csv::Error| Failure::Numerical(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Numerical(format!("csv output failed: {}", e.error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn g(x: f64) -> String {
    format!("{x:.12e}")
}

fn render_spectrum(bc: &BoundaryConditions, spectrum: &Spectrum, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => json(spectrum),
        Format::Csv => csv_text(
            &["index", "sqrt_s", "s", "residual", "bracket_lo", "bracket_hi"],
            spectrum.roots.iter().enumerate().map(|(i, r)| {
                vec![
                    (i + 1).to_string(),
                    g(r.sqrt_s),
                    g(r.sqrt_s * r.sqrt_s),
                    g(r.residual),
                    g(r.bracket[0]),
                    g(r.bracket[1]),
                ]
            }),
        ),
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "fastening {} rows {:?}", bc.label().unwrap_or("custom"), bc.rows());
            let _ = writeln!(out, "{:>3}  {:>16}  {:>10}", "n", "sqrt(s)", "residual");
            for (i, r) in spectrum.roots.iter().enumerate() {
                let _ = writeln!(out, "{:>3}  {:>16.10}  {:>10.2e}", i + 1, r.sqrt_s, r.residual);
            }
            Ok(out)
        }
    }
}

fn render_identification(result: &IdentificationResult, format: Format) -> Result<String, Failure> {
    let rows = result.boundary_conditions.rows();
    match format {
        Format::Json => json(result),
        Format::Csv => {
            let raw = result.raw_minors.as_array();
            let projected = result.projected_minors.as_array();
            let mut record = vec![
                result.classification.label.clone(),
                g(result.classification.similarity),
                format!("{:?}", result.chart),
            ];
            record.extend([rows[0][0], rows[0][3], rows[1][1], rows[1][2]].map(g));
            record.extend(raw.map(g));
            record.extend(projected.map(g));
            record.push(g(result.multiplier));
            record.push(g(result.diagnostics.condition));
            record.push(result.diagnostics.warnings.join("; "));
            csv_text(
                &[
                    "label", "similarity", "chart", "a11", "a14", "a22", "a23", "m12", "m13",
                    "m24", "m34", "p12", "p13", "p24", "p34", "multiplier", "condition",
                    "warnings",
                ],
                [record],
            )
        }
        Format::Human => {
            let mut out = String::new();
            let c = &result.classification;
            let _ = writeln!(out, "fastening: {} (similarity {:.6})", c.label, c.similarity);
            let _ = writeln!(out, "chart: {:?}", result.chart);
            for row in rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>14.6e}")).collect();
                let _ = writeln!(out, "  [{}]", cells.join(" "));
            }
            let _ = writeln!(out, "raw minors (M12, M13, M24, M34): {:?}", result.raw_minors.as_array());
            let _ = writeln!(out, "projected minors:                {:?}", result.projected_minors.as_array());
            let d = &result.diagnostics;
            let _ = writeln!(
                out,
                "rank {} condition {:.3e} residual {:.2e} multiplier {:.3e}",
                d.rank, d.condition, d.residual, result.multiplier
            );
            for w in &d.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            Ok(out)
        }
    }
}

fn render_stability(report: &PerturbationReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => json(report),
        Format::Csv => report.to_csv().map_err(Failure::from),
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "base: {} at sqrt(s) = {:?}, {} trials per level, seed {}",
                report.base_label, report.base_sqrt_s, report.trials, report.seed
            );
            let _ = writeln!(
                out,
                "{:>10}  {:>8}  {:>8}  {:>12}  {:>12}  {:>10}",
                "delta", "kept", "failed", "max dev", "mean dev", "max angle"
            );
            for l in &report.levels {
                let _ = writeln!(
                    out,
                    "{:>10.1e}  {:>7.1}%  {:>8}  {:>12.3e}  {:>12.3e}  {:>10.2e}",
                    l.delta,
                    100.0 * l.preservation_rate,
                    l.failures,
                    l.max_coefficient_deviation,
                    l.mean_coefficient_deviation,
                    l.max_angle
                );
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct ComparisonReport<'a> {
    fixture: &'a str,
    passed: usize,
    total: usize,
    comparisons: &'a [Comparison],
}

fn render_comparisons(name: &str, cells: &[Comparison], format: Format) -> Result<String, Failure> {
    let passed = cells.iter().filter(|c| c.pass).count();
    match format {
        Format::Json => json(&ComparisonReport {
            fixture: name,
            passed,
            total: cells.len(),
            comparisons: cells,
        }),
        Format::Csv => csv_text(
            &["item", "expected", "actual", "tolerance", "pass"],
            cells.iter().map(|c| {
                vec![
                    c.item.clone(),
                    c.expected.clone(),
                    c.actual.clone(),
                    c.tolerance.clone(),
                    c.pass.to_string(),
                ]
            }),
        ),
        Format::Human => {
            let mut out = String::new();
            for c in cells {
                let _ = writeln!(
                    out,
                    "{}  {:<28} expected {:<16} got {:<18} ({})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.item,
                    c.expected,
                    c.actual,
                    c.tolerance
                );
            }
            let _ = writeln!(out, "{name}: {passed}/{} passed", cells.len());
            Ok(out)
        }
    }
}
