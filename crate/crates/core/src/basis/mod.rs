//! Regular basis solutions of the disc equation and the four boundary
//! combinations `f1..f4` evaluated at the rim `r = 1`.
//!
//! The disc has flexural rigidity `D = D0 r^2` (thickness `h = h0 r^(2/3)`),
//! Poisson ratio 1/9 and unit radius. With the eigenvalue parameter `s`
//! (`s = omega^2` in the chosen normalisation) the two solutions that are
//! bounded at the centre are
//!
//! ```text
//! u1(r) = r^(-2/3) I1(3/2 r^(2/3) sqrt(s))
//! u2(r) = r^(-2/3) J1(3/2 r^(2/3) sqrt(s))
//! ```
//!
//! The governing equation itself carries the eigenvalue as `s_eq = s^2`;
//! everything in this crate is parametrised by `s` and reports roots as
//! `sqrt(s)`.
//!
//! Both solutions are evaluated from their power series. Writing
//! `q = 3 sqrt(s) / 4`, each one is `sum_j (±1)^j t_j r^(4j/3)` with
//! `t_j = q^(2j+1) / (j! (j+1)!)`, so every boundary form reduces to a
//! weighted sum of `t_j` with a rational weight in `alpha = 4j/3`.

mod series;

pub use series::{series_table, SeriesEntry, SeriesTable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Poisson ratio of the disc material.
pub const POISSON_RATIO: f64 = 1.0 / 9.0;

/// Exponent `m` of the rigidity law `D = D0 r^m`.
pub const RIGIDITY_EXPONENT: u32 = 2;

/// Relative size of the next series term at which summation stops.
pub const SERIES_RELATIVE_TOLERANCE: f64 = 1e-18;

/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 200;

/// Eigenvalue parameter `s >= 0`, kept together with its square root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParameter {
    s: f64,
    sqrt_s: f64,
}

impl SpectralParameter {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::InvalidSpectralParameter(s));
        }
        Ok(Self { s, sqrt_s: s.sqrt() })
    }

    /// Builds the parameter from a frequency value `sqrt(s)`.
    pub fn from_sqrt(sqrt_s: f64) -> Result<Self> {
        if !sqrt_s.is_finite() || sqrt_s < 0.0 {
            return Err(Error::InvalidSpectralParameter(sqrt_s));
        }
        Ok(Self {
            s: sqrt_s * sqrt_s,
            sqrt_s,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn sqrt_s(&self) -> f64 {
        self.sqrt_s
    }

    /// The eigenvalue as it appears in the differential equation, `s^2`.
    pub fn equation_eigenvalue(&self) -> f64 {
        self.s * self.s
    }
}

/// Boundary forms `L_j u_i` at `r = 1`: `values[i][j]` holds `L_{j+1} u_{i+1}`.
///
/// * `L1 u = u`
/// * `L2 u = u'`
/// * `L3 u = u'' + u' / (9 r)`
/// * `L4 u = (u'' + u' / r)'`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeForms {
    pub values: [[f64; 4]; 2],
    /// Number of series terms that were summed.
    pub terms: usize,
}

impl DerivativeForms {
    /// `L_a u1 * L_b u2 - L_b u1 * L_a u2`, with 1-based form indices.
    pub fn wronskian(&self, a: usize, b: usize) -> f64 {
        let [u1, u2] = &self.values;
        u1[a - 1] * u2[b - 1] - u1[b - 1] * u2[a - 1]
    }
}

/// Values of `f1..f4` at one spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisEval {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
}

impl BasisEval {
    pub fn as_array(&self) -> [f64; 4] {
        [self.f1, self.f2, self.f3, self.f4]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Form weights for the monomial `r^alpha` evaluated at `r = 1`.
fn form_weights(alpha: f64) -> [f64; 4] {
    [
        1.0,
        alpha,
        alpha * (alpha - 8.0 / 9.0),
        alpha * alpha * (alpha - 2.0),
    ]
}

/// Evaluates `L_j u_i` at the rim by summing the differentiated Bessel series.
pub fn eval_derivative_forms(param: SpectralParameter) -> Result<DerivativeForms> {
    let q = 0.75 * param.sqrt_s();
    let q2 = q * q;
    let mut u1 = [0.0; 4];
    let mut u2 = [0.0; 4];
    let mut abs_sum = [0.0f64; 4];
    let mut t = q;
    let mut sign = 1.0;

    for j in 0..SERIES_MAX_TERMS {
        if t == 0.0 {
            return Ok(DerivativeForms {
                values: [u1, u2],
                terms: j,
            });
        }
        let w = form_weights(4.0 * j as f64 / 3.0);
        for k in 0..4 {
            let term = t * w[k];
            u1[k] += term;
            u2[k] += sign * term;
            abs_sum[k] += term.abs();
        }
        if !t.is_finite() || abs_sum.iter().any(|v| !v.is_finite()) {
            break;
        }

        let next = t * q2 / ((j as f64 + 1.0) * (j as f64 + 2.0));
        let w_next = form_weights(4.0 * (j + 1) as f64 / 3.0);
        let converged = (0..4).all(|k| {
            let magnitude = (next * w_next[k]).abs();
            magnitude == 0.0 || magnitude < SERIES_RELATIVE_TOLERANCE * abs_sum[k]
        });
        if converged {
            return Ok(DerivativeForms {
                values: [u1, u2],
                terms: j + 1,
            });
        }
        t = next;
        sign = -sign;
    }

    Err(Error::PrecisionLoss {
        sqrt_s: param.sqrt_s(),
        terms: SERIES_MAX_TERMS,
    })
}

/// Evaluates `f1..f4` from the rim forms.
///
/// `f1` and `f2` are the `(L1, L2)` and `(L1, L3)` Wronskians of `(u1, u2)`;
/// `f3` and `f4` are the `(L2, L4)` and `(L3, L4)` ones, oriented so that the
/// characteristic determinant is `M12 f1 + M13 f2 + M24 f3 + M34 f4` with
/// `M_ij` the true minors of the boundary matrix. With this orientation the
/// leading Maclaurin coefficients are `-27/64, -3/16, 81/1024, 9/128`.
pub fn eval_basis(param: SpectralParameter) -> Result<BasisEval> {
    let forms = eval_derivative_forms(param)?;
    Ok(BasisEval {
        f1: forms.wronskian(1, 2),
        f2: forms.wronskian(1, 3),
        f3: forms.wronskian(2, 4),
        f4: forms.wronskian(3, 4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(sqrt_s: f64) -> BasisEval {
        eval_basis(SpectralParameter::from_sqrt(sqrt_s).unwrap()).unwrap()
    }

    #[test]
    fn rejects_negative_parameter() {
        assert!(matches!(
            SpectralParameter::new(-1.0),
            Err(Error::InvalidSpectralParameter(_))
        ));
        assert!(SpectralParameter::from_sqrt(f64::NAN).is_err());
    }

    #[test]
    fn sqrt_round_trip() {
        for s in [0.0, 1e-8, 2.0, 53.4, 99.9] {
            let p = SpectralParameter::new(s).unwrap();
            assert!((p.sqrt_s() * p.sqrt_s() - s).abs() <= 4.0 * f64::EPSILON * s);
        }
    }

    #[test]
    fn zero_parameter_vanishes() {
        let forms = eval_derivative_forms(SpectralParameter::new(0.0).unwrap()).unwrap();
        assert_eq!(forms.values[0][0], forms.values[1][0]);
        assert_eq!(at(0.0).as_array(), [0.0; 4]);
    }

    #[test]
    fn leading_behaviour_near_zero() {
        let k = 0.02;
        let s = k * k;
        let b = at(k);
        assert!((b.f1 / (s * s) + 27.0 / 64.0).abs() < 1e-6);
        assert!((b.f2 / (s * s) + 3.0 / 16.0).abs() < 1e-6);
        assert!((b.f3 / s.powi(4) - 81.0 / 1024.0).abs() < 1e-6);
        assert!((b.f4 / s.powi(4) - 9.0 / 128.0).abs() < 1e-6);
    }

    #[test]
    fn sign_pattern_for_small_s() {
        for k in [0.05, 0.1, 0.3] {
            let b = at(k);
            assert!(b.f1 < 0.0 && b.f2 < 0.0 && b.f3 > 0.0 && b.f4 > 0.0);
        }
    }

    #[test]
    fn rigid_clamp_and_free_support_roots() {
        let near = at(3.0739);
        assert!(near.f1.abs() < 1e-3 * near.max_abs());
        let near = at(1.8312);
        assert!(near.f2.abs() < 1e-3 * near.max_abs());
    }

    #[test]
    fn huge_argument_reports_precision_loss() {
        let err = eval_derivative_forms(SpectralParameter::from_sqrt(400.0).unwrap());
        assert!(matches!(err, Err(Error::PrecisionLoss { .. })));
    }

    #[test]
    fn moderate_arguments_converge_quickly() {
        let forms = eval_derivative_forms(SpectralParameter::from_sqrt(8.0).unwrap()).unwrap();
        assert!(forms.terms <= 60, "used {} terms", forms.terms);
    }
}
