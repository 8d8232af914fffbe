//! Embedded reference data and comparisons against it.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::basis::series_table;
use crate::error::{Error, Result};
use crate::forward::{find_roots, Fastening};
use crate::inverse::identify;

const TABLE1: &str = include_str!("../fixtures/table1.toml");
const EXAMPLES: &str = include_str!("../fixtures/examples.toml");
const SERIES: &str = include_str!("../fixtures/series.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Table1 {
    pub tolerance: f64,
    pub column: Vec<Table1Column>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table1Column {
    pub label: String,
    /// Elastic-clamp stiffness; absent for the rigid limit.
    pub stiffness: Option<f64>,
    pub sqrt_s: [f64; 3],
}

impl Table1Column {
    pub fn fastening(&self) -> Result<Fastening> {
        match self.stiffness {
            Some(c) => Fastening::elastic_clamp(c),
            None => Ok(Fastening::RigidClamp),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Examples {
    pub raw_tolerance: f64,
    pub projected_tolerance: f64,
    pub example: Vec<Example>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Example {
    pub name: String,
    pub sqrt_s: [f64; 3],
    pub label: String,
    pub raw_minors: [f64; 4],
    pub projected_minors: [f64; 4],
    #[serde(default)]
    pub entry: Vec<MatrixEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MatrixEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SeriesReference {
    pub max_power: u32,
    pub f1: Vec<(u32, String)>,
    pub f2: Vec<(u32, String)>,
    pub f3: Vec<(u32, String)>,
    pub f4: Vec<(u32, String)>,
}

fn parse<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> T {
    toml::from_str(text).unwrap_or_else(|e| panic!("embedded fixture {name} is malformed: {e}"))
}

pub fn table1() -> Table1 {
    parse("table1.toml", TABLE1)
}

pub fn examples() -> Examples {
    parse("examples.toml", EXAMPLES)
}

pub fn series_reference() -> SeriesReference {
    parse("series.toml", SERIES)
}

/// One checked cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub item: String,
    pub expected: String,
    pub actual: String,
    /// Human-readable tolerance, e.g. `abs 1e-3`.
    pub tolerance: String,
    pub pass: bool,
}

impl Comparison {
    fn absolute(item: String, expected: f64, actual: f64, tol: f64) -> Self {
        Self {
            item,
            expected: format!("{expected}"),
            actual: format!("{actual:.6}"),
            tolerance: format!("abs {tol:e}"),
            pass: (actual - expected).abs() <= tol,
        }
    }

    fn relative(item: String, expected: f64, actual: f64, tol: f64) -> Self {
        Self {
            item,
            expected: format!("{expected}"),
            actual: format!("{actual:.9e}"),
            tolerance: format!("rel {tol:e}"),
            pass: ((actual - expected) / expected).abs() <= tol,
        }
    }

    fn exact(item: String, expected: String, actual: String) -> Self {
        Self {
            pass: expected == actual,
            item,
            expected,
            actual,
            tolerance: "exact".into(),
        }
    }
}

/// Which published fixture to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Table1,
    Example(usize),
    Series,
}

impl std::str::FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Fixture::Table1),
            "series" => Ok(Fixture::Series),
            "example1" => Ok(Fixture::Example(1)),
            "example2" => Ok(Fixture::Example(2)),
            "example3" => Ok(Fixture::Example(3)),
            other => Err(Error::InvalidParameter(format!("unknown fixture `{other}`"))),
        }
    }
}

pub fn compare(fixture: Fixture) -> Result<Vec<Comparison>> {
    match fixture {
        Fixture::Table1 => compare_table1(),
        Fixture::Example(n) => compare_example(n),
        Fixture::Series => compare_series(),
    }
}

pub fn compare_table1() -> Result<Vec<Comparison>> {
    let table = table1();
    let mut out = Vec::new();
    for column in &table.column {
        let fastening = column.fastening()?;
        let spectrum = find_roots(&fastening.boundary_conditions(), 3, 10.0)?;
        for (i, (root, &expected)) in spectrum.roots.iter().zip(&column.sqrt_s).enumerate() {
            out.push(Comparison::absolute(
                format!("{} sqrt(s{})", column.label, i + 1),
                expected,
                root.sqrt_s,
                table.tolerance,
            ));
        }
    }
    Ok(out)
}

const MINOR_NAMES: [&str; 4] = ["M12", "M13", "M24", "M34"];

pub fn compare_example(number: usize) -> Result<Vec<Comparison>> {
    let examples = examples();
    let example = examples
        .example
        .get(number.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParameter(format!("no example {number}")))?;
    let result = identify(example.sqrt_s)?;

    let mut out = vec![Comparison::exact(
        "classification".into(),
        example.label.clone(),
        result.classification.label.clone(),
    )];

    // Both minor sets are reported on the scale where the raw M34 is one.
    let raw = result.raw_minors.as_array();
    let scale = raw[3];
    for (i, name) in MINOR_NAMES.iter().enumerate() {
        out.push(Comparison::relative(
            format!("raw {name}/M34"),
            example.raw_minors[i],
            raw[i] / scale,
            examples.raw_tolerance,
        ));
    }
    let projected = result.projected_minors.as_array();
    for (i, name) in MINOR_NAMES.iter().enumerate() {
        out.push(Comparison::relative(
            format!("projected P{}", &name[1..]),
            example.projected_minors[i],
            projected[i] / scale,
            examples.projected_tolerance,
        ));
    }
    for entry in &example.entry {
        let (i, j) = parse_entry_name(&entry.name)?;
        out.push(Comparison::absolute(
            entry.name.clone(),
            entry.value,
            result.boundary_conditions.entry(i, j),
            entry.tolerance,
        ));
    }
    Ok(out)
}

fn parse_entry_name(name: &str) -> Result<(usize, usize)> {
    let digits: Vec<usize> = name
        .strip_prefix('a')
        .map(|d| d.chars().filter_map(|c| c.to_digit(10).map(|v| v as usize)).collect())
        .unwrap_or_default();
    match digits.as_slice() {
        &[i @ 1..=2, j @ 1..=4] => Ok((i, j)),
        _ => Err(Error::InvalidParameter(format!("bad matrix entry `{name}`"))),
    }
}

pub fn compare_series() -> Result<Vec<Comparison>> {
    let reference = series_reference();
    let table = series_table(reference.max_power)?;
    let published = [&reference.f1, &reference.f2, &reference.f3, &reference.f4];
    let mut out = Vec::new();
    for (k, coefficients) in published.iter().enumerate() {
        for (power, text) in coefficients.iter() {
            let expected: BigRational = text
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad rational `{text}`")))?;
            let actual = table.coefficient(k + 1, *power);
            out.push(Comparison::exact(
                format!("f{} s^{}", k + 1, power),
                expected.to_string(),
                actual.to_string(),
            ));
        }
    }
    Ok(out)
}
