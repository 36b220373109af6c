//! The auxiliary functions of the total excitation number.
//!
//! Writing `n = N - B` and `sz = 2B/k` turns `G(n) + sz F(n)` into
//! `common(N) + detuning(N) B`, where `B = +-k/2`. On the manifold with
//! lower Fock index `n` (so `N = n + k/2`) this pins both functions to the
//! values of `F` and `G` at `n` and `n + k`:
//!
//! ```text
//! common(N)   = [G(n) + F(n) + G(n+k) - F(n+k)] / 2
//! detuning(N) = [G(n) + F(n) - G(n+k) + F(n+k)] / k
//! ```
//!
//! For polynomial `F`, `G` the same quantities follow from expanding
//! `(N - B)^j` binomially and using `B^2 = (k/2)^2`.

use crate::error::{Error, Result};
use crate::model::{FnKind, ModelSpec, NonlinearFn};

/// Total excitation number `N`, stored as the integer `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Excitation(i64);

impl Excitation {
    pub fn from_twice(twice: i64) -> Self {
        Self(twice)
    }

    /// `N = n + k/2` for the manifold `{|e,n>, |g,n+k>}`.
    pub fn of_manifold(n_lower: usize, k: usize) -> Self {
        Self((2 * n_lower + k) as i64)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Fock index `N - k/2` of the excited member, if it is a non-negative integer.
    pub fn lower(self, k: usize) -> Option<usize> {
        let d = self.0 - k as i64;
        (d >= 0 && d % 2 == 0).then_some((d / 2) as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxValues {
    /// Energy shift common to both members of a manifold.
    pub common: f64,
    /// Correction to the bare detuning `w0/k - w`, multiplying `B`.
    pub detuning: f64,
}

pub(crate) fn combine(k: usize, lower: (f64, f64), upper: (f64, f64)) -> AuxValues {
    let (f_lo, g_lo) = lower;
    let (f_hi, g_hi) = upper;
    AuxValues {
        common: 0.5 * (g_lo + f_lo + g_hi - f_hi),
        detuning: (g_lo + f_lo - g_hi + f_hi) / k as f64,
    }
}

/// Two-point evaluation, valid for any `F` and `G`.
///
/// On physical manifolds `N +- k/2` are integers; other non-negative
/// arguments are passed through to the function definitions.
pub fn aux_two_point(spec: &ModelSpec, label: Excitation) -> Result<AuxValues> {
    let lo = label.value() - spec.half_k();
    if lo < 0.0 {
        return Err(Error::Domain {
            kind: "aux_two_point",
            n: label.value(),
            reason: format!("N - k/2 = {lo} is negative for k = {}", spec.k),
        });
    }
    let hi = label.value() + spec.half_k();
    Ok(combine(
        spec.k,
        (spec.dispersive_fn.eval(lo)?, spec.boson_fn.eval(lo)?),
        (spec.dispersive_fn.eval(hi)?, spec.boson_fn.eval(hi)?),
    ))
}

fn poly_coeffs(f: &NonlinearFn, which: &str) -> Result<Vec<f64>> {
    match f.kind {
        FnKind::Zero => Ok(vec![]),
        FnKind::Poly => {
            f.check_params()?;
            Ok(f.params.clone())
        }
        other => Err(Error::Validation(format!(
            "binomial evaluation needs a polynomial {which}, got {}",
            other.name()
        ))),
    }
}

fn binomial(j: usize, r: usize) -> f64 {
    if r > j {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (j - i) as f64 / (i + 1) as f64)
}

/// Literal binomial double sums for polynomial `F` and `G`:
///
/// ```text
/// common   =  sum_{j,s} C(j,2s)   h^{2s}   G_j N^{j-2s}
///           - sum_{j,s} C(j,2s+1) h^{2s+1} F_j N^{j-2s-1}
/// detuning = -sum_{j,s} C(j,2s+1) h^{2s}   G_j N^{j-2s-1}
///           + sum_{j,s} C(j,2s)   h^{2s-1} F_j N^{j-2s}
/// ```
///
/// with `h = k/2`. The `F` term of `common` carries `h^{2s+1}`; the exponent
/// `2s-1` sometimes quoted for it disagrees with the two-point form whenever
/// `k != 2`, see the reconciliation tests.
pub fn aux_binomial(spec: &ModelSpec, label: Excitation) -> Result<AuxValues> {
    let g = poly_coeffs(&spec.boson_fn, "G")?;
    let f = poly_coeffs(&spec.dispersive_fn, "F")?;
    let h = spec.half_k();
    let x = label.value();

    let mut common = 0.0;
    let mut detuning = 0.0;
    for (j, &gj) in g.iter().enumerate() {
        for s in 0..=j / 2 {
            common += binomial(j, 2 * s) * h.powi(2 * s as i32) * gj * x.powi((j - 2 * s) as i32);
            if 2 * s < j {
                detuning -= binomial(j, 2 * s + 1)
                    * h.powi(2 * s as i32)
                    * gj
                    * x.powi((j - 2 * s - 1) as i32);
            }
        }
    }
    for (j, &fj) in f.iter().enumerate() {
        for s in 0..=j / 2 {
            detuning += binomial(j, 2 * s)
                * h.powi(2 * s as i32 - 1)
                * fj
                * x.powi((j - 2 * s) as i32);
            if 2 * s < j {
                common -= binomial(j, 2 * s + 1)
                    * h.powi(2 * s as i32 + 1)
                    * fj
                    * x.powi((j - 2 * s - 1) as i32);
            }
        }
    }
    Ok(AuxValues { common, detuning })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize, dispersive: NonlinearFn, boson: NonlinearFn) -> ModelSpec {
        ModelSpec {
            omega: 1.0,
            omega0: 1.0,
            g: 0.1,
            k,
            coupling_fn: NonlinearFn::one(),
            dispersive_fn: dispersive,
            boson_fn: boson,
        }
    }

    #[test]
    fn zero_functions() {
        let s = spec(1, NonlinearFn::zero(), NonlinearFn::zero());
        let label = Excitation::of_manifold(3, 1);
        let expected = AuxValues { common: 0.0, detuning: 0.0 };
        assert_eq!(aux_two_point(&s, label).unwrap(), expected);
        assert_eq!(aux_binomial(&s, label).unwrap(), expected);
    }

    #[test]
    fn kerr_two_boson_closed_form() {
        let chi = 0.5;
        let s = spec(2, NonlinearFn::zero(), NonlinearFn::kerr(chi));
        for n in 0..12 {
            let label = Excitation::of_manifold(n, 2);
            let x = label.value();
            let aux = aux_two_point(&s, label).unwrap();
            assert!((aux.common - chi * (x * x - x + 1.0)).abs() < 1e-12);
            assert!((aux.detuning - chi * (1.0 - 2.0 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_stark_two_boson() {
        let slope = -0.125;
        let s = spec(2, NonlinearFn::linear_stark(slope), NonlinearFn::zero());
        for n in 0..8 {
            let label = Excitation::of_manifold(n, 2);
            let aux = aux_two_point(&s, label).unwrap();
            assert!((aux.detuning - slope * label.value()).abs() < 1e-14);
            assert!((aux.common + slope).abs() < 1e-14);
        }
    }

    #[test]
    fn binomial_square_at_two() {
        // G = n^2, k = 1, N = 2: common = N^2 + 1/4, detuning = -2N
        let s = spec(1, NonlinearFn::zero(), NonlinearFn::poly(vec![0.0, 0.0, 1.0]));
        let label = Excitation::from_twice(4);
        let b = aux_binomial(&s, label).unwrap();
        assert!((b.common - 4.25).abs() < 1e-15);
        assert!((b.detuning + 4.0).abs() < 1e-15);
        let t = aux_two_point(&s, label).unwrap();
        assert!((t.common - 4.25).abs() < 1e-15);
        assert!((t.detuning + 4.0).abs() < 1e-15);
    }

    #[test]
    fn pinned_exponent_for_dispersive_common_term() {
        // F = s n, k = 1: common = -s/2. An h^{2s-1} exponent would give -2s.
        let slope = 0.3;
        let s = spec(1, NonlinearFn::poly(vec![0.0, slope]), NonlinearFn::zero());
        let label = Excitation::of_manifold(5, 1);
        let b = aux_binomial(&s, label).unwrap();
        let t = aux_two_point(&s, label).unwrap();
        assert!((b.common + slope / 2.0).abs() < 1e-15);
        assert!((t.common + slope / 2.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_rejects_non_polynomial() {
        let s = spec(2, NonlinearFn::zero(), NonlinearFn::kerr(0.5));
        assert!(aux_binomial(&s, Excitation::of_manifold(0, 2)).is_err());
    }

    #[test]
    fn two_point_rejects_unphysical_label() {
        let s = spec(2, NonlinearFn::zero(), NonlinearFn::zero());
        // N = 1/2 with k = 2 has N - k/2 < 0
        assert!(aux_two_point(&s, Excitation::from_twice(1)).is_err());
        assert!(aux_two_point(&s, Excitation::from_twice(0)).is_err());
        assert!(aux_two_point(&s, Excitation::from_twice(2)).is_ok());
        assert!(Excitation::from_twice(3).lower(2).is_none());
        assert_eq!(Excitation::from_twice(6).lower(2), Some(2));
    }
}
