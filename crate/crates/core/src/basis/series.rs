//! Exact Maclaurin coefficients of `f1..f4` in powers of `s`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Form index pairs `(a, b)` defining `f_k = L_a u1 L_b u2 - L_b u1 L_a u2`.
const FORM_PAIRS: [(usize, usize); 4] = [(0, 1), (0, 2), (1, 3), (2, 3)];

/// One nonzero coefficient of a series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub power: u32,
    pub numerator: String,
    pub denominator: String,
}

/// Exact coefficients of `f1..f4` up to a maximal power of `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    max_power: u32,
    /// `coefficients[k][n]` is the coefficient of `s^n` in `f_{k+1}`.
    coefficients: [Vec<BigRational>; 4],
}

impl SeriesTable {
    pub fn max_power(&self) -> u32 {
        self.max_power
    }

    /// Coefficient of `s^power` in `f_function` (1-based).
    pub fn coefficient(&self, function: usize, power: u32) -> BigRational {
        assert!((1..=4).contains(&function), "function index must be in 1..=4");
        self.coefficients[function - 1]
            .get(power as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero `(power, coefficient)` pairs of `f_function`, ascending.
    pub fn terms(&self, function: usize) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coefficients[function - 1]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n as u32, c))
    }

    /// Evaluates the truncated series of `f_function` at `s` in double precision.
    pub fn eval(&self, function: usize, s: f64) -> f64 {
        self.coefficients[function - 1]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * s + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Serializable form: `{"f1": [{power, numerator, denominator}, ...], ...}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for k in 1..=4 {
            let entries: Vec<SeriesEntry> = self
                .terms(k)
                .map(|(power, c)| SeriesEntry {
                    power,
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                })
                .collect();
            map.insert(
                format!("f{k}"),
                serde_json::to_value(entries).expect("series entries serialize"),
            );
        }
        serde_json::Value::Object(map)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rational form weights of `r^alpha` at `r = 1`, `alpha = 4j/3`.
fn exact_weights(j: usize) -> [BigRational; 4] {
    let alpha = BigRational::new(BigInt::from(4 * j), BigInt::from(3));
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let eight_ninths = BigRational::new(BigInt::from(8), BigInt::from(9));
    [
        one,
        alpha.clone(),
        &alpha * (&alpha - eight_ninths),
        &alpha * &alpha * (&alpha - two),
    ]
}

/// Exact coefficients of `f1..f4` through `s^max_power`.
///
/// Each basis function is `sum_j (±1)^j c_j k^(2j+1) r^(4j/3)` with
/// `k = sqrt(s)` and `c_j = (3/4)^(2j+1) / (j! (j+1)!)`. A product of the
/// `j`-th term of `u1` and the `l`-th of `u2` contributes to `s^(j+l+1)`.
pub fn series_table(max_power: u32) -> Result<SeriesTable> {
    if max_power < 4 || !max_power.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "series max_power must be an even integer >= 4, got {max_power}"
        )));
    }
    let n_terms = max_power as usize;
    let three_quarters = BigRational::new(BigInt::from(3), BigInt::from(4));

    let mut power = three_quarters.clone();
    let mut scale = Vec::with_capacity(n_terms);
    let mut weights = Vec::with_capacity(n_terms);
    for j in 0..n_terms {
        let denom = factorial(j) * factorial(j + 1);
        scale.push(&power / BigRational::from_integer(denom));
        weights.push(exact_weights(j));
        power = &power * &three_quarters * &three_quarters;
    }

    let mut coefficients: [Vec<BigRational>; 4] =
        std::array::from_fn(|_| vec![BigRational::zero(); n_terms + 1]);
    for j in 0..n_terms {
        for l in 0..n_terms - j {
            let n = j + l + 1;
            let sign_u2 = if l % 2 == 0 { 1 } else { -1 };
            let magnitude = &scale[j] * &scale[l] * BigRational::from_integer(sign_u2.into());
            for (k, &(a, b)) in FORM_PAIRS.iter().enumerate() {
                let cross = &weights[j][a] * &weights[l][b] - &weights[j][b] * &weights[l][a];
                if !cross.is_zero() {
                    coefficients[k][n] += &magnitude * cross;
                }
            }
        }
    }

    Ok(SeriesTable {
        max_power,
        coefficients,
    })
}
