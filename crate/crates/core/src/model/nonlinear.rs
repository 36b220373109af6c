//! Closed, serializable descriptions of real functions of the boson number.
//!
//! Each [`NonlinearFn`] is a `kind` tag plus a flat list of real parameters,
//! which is exactly the JSON shape of the model document:
//!
//! ```text
//! {"kind": "Kerr", "params": [0.5]}
//! ```
//!
//! | kind            | params              | value at n                               |
//! |-----------------|---------------------|------------------------------------------|
//! | `Zero`          | `[]`                | 0                                        |
//! | `One`           | `[]`                | 1                                        |
//! | `Poly`          | `[c0, .., cj]`      | sum of c_j n^j (degree at most 8)        |
//! | `SqrtN`         | `[]`                | sqrt(n)                                  |
//! | `PowerN`        | `[p]`               | n^p, p >= 0                              |
//! | `Kerr`          | `[chi]`             | chi n (n - 1)                            |
//! | `QBracketSqrt`  | `[q]`               | sqrt([n]_q), 0 < q <= 1                  |
//! | `Parity`        | `[lambda]`          | lambda (-1)^n                            |
//! | `AlgebraicSqrt` | `[chi_a, l, omega]` | sqrt(1 - (chi_a/omega)(1 - n^(l-1)))     |
//! | `LinearStark`   | `[slope]`           | slope n                                  |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest polynomial degree accepted for `Poly` functions.
pub const MAX_POLY_DEGREE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FnKind {
    Zero,
    One,
    Poly,
    SqrtN,
    PowerN,
    Kerr,
    QBracketSqrt,
    Parity,
    AlgebraicSqrt,
    LinearStark,
}

impl FnKind {
    pub fn name(self) -> &'static str {
        match self {
            FnKind::Zero => "Zero",
            FnKind::One => "One",
            FnKind::Poly => "Poly",
            FnKind::SqrtN => "SqrtN",
            FnKind::PowerN => "PowerN",
            FnKind::Kerr => "Kerr",
            FnKind::QBracketSqrt => "QBracketSqrt",
            FnKind::Parity => "Parity",
            FnKind::AlgebraicSqrt => "AlgebraicSqrt",
            FnKind::LinearStark => "LinearStark",
        }
    }

    fn arity(self) -> Option<usize> {
        match self {
            FnKind::Zero | FnKind::One | FnKind::SqrtN => Some(0),
            FnKind::PowerN
            | FnKind::Kerr
            | FnKind::QBracketSqrt
            | FnKind::Parity
            | FnKind::LinearStark => Some(1),
            FnKind::AlgebraicSqrt => Some(3),
            FnKind::Poly => None,
        }
    }
}

/// A real function of the boson number operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearFn {
    pub kind: FnKind,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl NonlinearFn {
    pub fn zero() -> Self {
        Self::new(FnKind::Zero, vec![])
    }

    pub fn one() -> Self {
        Self::new(FnKind::One, vec![])
    }

    pub fn sqrt_n() -> Self {
        Self::new(FnKind::SqrtN, vec![])
    }

    pub fn power_n(exponent: f64) -> Self {
        Self::new(FnKind::PowerN, vec![exponent])
    }

    /// Polynomial with `coeffs[j]` multiplying `n^j`.
    pub fn poly(coeffs: Vec<f64>) -> Self {
        Self::new(FnKind::Poly, coeffs)
    }

    pub fn kerr(chi: f64) -> Self {
        Self::new(FnKind::Kerr, vec![chi])
    }

    pub fn q_bracket_sqrt(q: f64) -> Self {
        Self::new(FnKind::QBracketSqrt, vec![q])
    }

    pub fn parity(lambda: f64) -> Self {
        Self::new(FnKind::Parity, vec![lambda])
    }

    pub fn algebraic_sqrt(chi_a: f64, ell: f64, omega: f64) -> Self {
        Self::new(FnKind::AlgebraicSqrt, vec![chi_a, ell, omega])
    }

    pub fn linear_stark(slope: f64) -> Self {
        Self::new(FnKind::LinearStark, vec![slope])
    }

    pub fn new(kind: FnKind, params: Vec<f64>) -> Self {
        Self { kind, params }
    }

    /// True for functions that vanish identically.
    pub fn is_zero(&self) -> bool {
        self.kind == FnKind::Zero
    }

    fn domain(&self, n: f64, reason: impl Into<String>) -> Error {
        Error::Domain {
            kind: self.kind.name(),
            n,
            reason: reason.into(),
        }
    }

    /// Checks that the parameter list matches the kind and that every
    /// kind-specific constraint holds.
    pub fn check_params(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(format!("{}: {msg}", self.kind.name())));
        match self.kind.arity() {
            Some(a) if self.params.len() != a => {
                return bad(format!(
                    "expected {a} parameter(s), got {}",
                    self.params.len()
                ))
            }
            None if self.params.is_empty() || self.params.len() > MAX_POLY_DEGREE + 1 => {
                return bad(format!(
                    "expected 1..={} coefficients, got {}",
                    MAX_POLY_DEGREE + 1,
                    self.params.len()
                ))
            }
            _ => {}
        }
        if let Some(p) = self.params.iter().find(|p| !p.is_finite()) {
            return bad(format!("non-finite parameter {p}"));
        }
        match self.kind {
            FnKind::PowerN if self.params[0] < 0.0 => {
                bad(format!("exponent {} must be non-negative", self.params[0]))
            }
            FnKind::QBracketSqrt => {
                let q = self.params[0];
                if q > 0.0 && q <= 1.0 {
                    Ok(())
                } else {
                    bad(format!("q = {q} outside (0, 1]"))
                }
            }
            FnKind::AlgebraicSqrt => {
                let (chi_a, ell, omega) = (self.params[0], self.params[1], self.params[2]);
                if !(chi_a >= 0.0 && chi_a < omega) {
                    bad(format!("need 0 <= chi_a < omega, got chi_a = {chi_a}, omega = {omega}"))
                } else if ell < 1.0 {
                    bad(format!("need l >= 1, got {ell}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Evaluates the function at a non-negative boson number.
    pub fn eval(&self, n: f64) -> Result<f64> {
        if !(n >= 0.0) {
            return Err(self.domain(n, "argument must be non-negative"));
        }
        self.check_params()?;
        let p = &self.params;
        let value = match self.kind {
            FnKind::Zero => 0.0,
            FnKind::One => 1.0,
            FnKind::Poly => p.iter().rev().fold(0.0, |acc, c| acc * n + c),
            FnKind::SqrtN => n.sqrt(),
            FnKind::PowerN => n.powf(p[0]),
            FnKind::Kerr => p[0] * n * (n - 1.0),
            FnKind::QBracketSqrt => q_bracket(p[0], n).sqrt(),
            FnKind::Parity => p[0] * parity(n),
            FnKind::AlgebraicSqrt => {
                let (chi_a, ell, omega) = (p[0], p[1], p[2]);
                let radicand = 1.0 - (chi_a / omega) * (1.0 - n.powf(ell - 1.0));
                if radicand < 0.0 {
                    return Err(self.domain(n, format!("negative radicand {radicand}")));
                }
                radicand.sqrt()
            }
            FnKind::LinearStark => p[0] * n,
        };
        if !value.is_finite() {
            return Err(self.domain(n, format!("non-finite value {value}")));
        }
        Ok(value)
    }
}

/// The q-number `[n] = (q^n - q^-n) / (q - q^-1)`, with the `q -> 1` limit `n`.
pub fn q_bracket(q: f64, n: f64) -> f64 {
    if q == 1.0 {
        return n;
    }
    (q.powf(n) - q.powf(-n)) / (q - q.recip())
}

fn parity(n: f64) -> f64 {
    if n.fract() == 0.0 {
        if (n as u64) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else {
        (std::f64::consts::PI * n).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_n_at_four() {
        assert_eq!(NonlinearFn::sqrt_n().eval(4.0).unwrap(), 2.0);
    }

    #[test]
    fn kerr_at_three() {
        assert_eq!(NonlinearFn::kerr(0.5).eval(3.0).unwrap(), 3.0);
    }

    #[test]
    fn q_bracket_at_two_matches_defining_ratio() {
        let q: f64 = 0.9;
        let ratio = (q * q - q.powi(-2)) / (q - 1.0 / q);
        let got = NonlinearFn::q_bracket_sqrt(q).eval(2.0).unwrap();
        assert!((got - ratio.sqrt()).abs() < 1e-15);
        assert!((got - (0.9 + 1.0 / 0.9f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn q_bracket_limit_is_n() {
        assert_eq!(q_bracket(1.0, 7.0), 7.0);
        assert!((q_bracket(1.0 - 1e-7, 7.0) - 7.0).abs() < 1e-5);
    }

    #[test]
    fn parity_alternates() {
        let p = NonlinearFn::parity(0.2);
        assert_eq!(p.eval(0.0).unwrap(), 0.2);
        assert_eq!(p.eval(3.0).unwrap(), -0.2);
        assert_eq!(p.eval(10.0).unwrap(), 0.2);
    }

    #[test]
    fn algebraic_is_one_at_n_one() {
        for &(chi, ell) in &[(0.0, 1.0), (0.5, 2.0), (0.9, 3.5)] {
            let f = NonlinearFn::algebraic_sqrt(chi, ell, 1.0);
            assert_eq!(f.eval(1.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn negative_argument_is_a_domain_error() {
        assert!(matches!(
            NonlinearFn::one().eval(-1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn param_mismatch_rejected() {
        let f = NonlinearFn::new(FnKind::Kerr, vec![]);
        assert!(matches!(f.eval(1.0), Err(Error::Validation(_))));
        let f = NonlinearFn::poly(vec![1.0; MAX_POLY_DEGREE + 2]);
        assert!(f.check_params().is_err());
        assert!(NonlinearFn::q_bracket_sqrt(1.5).check_params().is_err());
        assert!(NonlinearFn::q_bracket_sqrt(0.0).check_params().is_err());
        assert!(NonlinearFn::algebraic_sqrt(1.0, 2.0, 1.0).check_params().is_err());
        assert!(NonlinearFn::algebraic_sqrt(0.5, 0.5, 1.0).check_params().is_err());
        assert!(NonlinearFn::power_n(-1.0).check_params().is_err());
    }

    #[test]
    fn json_shape() {
        let f: NonlinearFn = serde_json::from_str(r#"{"kind":"Kerr","params":[0.5]}"#).unwrap();
        assert_eq!(f, NonlinearFn::kerr(0.5));
        let z: NonlinearFn = serde_json::from_str(r#"{"kind":"Zero"}"#).unwrap();
        assert!(z.is_zero());
    }
}
