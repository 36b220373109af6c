//! Closed-form diagonalization and exact time evolution.
//!
//! The Hamiltonian conserves `N = n + k sz / 2`, so the truncated space
//! splits into two-level manifolds `{|e,n>, |g,n+k>}` and the dark levels
//! `|g,n<k>`. Each manifold is diagonalized by the mixing angle `beta(N)` and
//! evolves with the two phases `e^{-i E+- t}`.

mod auxiliary;
mod manifold;

pub use auxiliary::{aux_binomial, aux_two_point, AuxValues, Excitation};
pub use manifold::{
    build_manifold, dark_levels, dressed_states, DarkLevel, DressedPair, DressedState, Manifold,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::state::{coherent_state, poisson_tail, QubitBosonState, Qubit, DEFAULT_TRUNCATION_TOLERANCE};
use crate::trace::{Engine, ObservableTrace};

/// Every manifold whose excited member fits below `n_max`, plus the dark levels.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub n_max: usize,
    pub manifolds: Vec<Manifold>,
    pub dark: Vec<DarkLevel>,
}

impl Decomposition {
    pub fn new(spec: &ModelSpec, n_max: usize) -> Result<Self> {
        let levels = spec.tabulate(n_max)?;
        let manifolds = (0..=n_max)
            .map(|n| Manifold::from_levels(spec, &levels, n))
            .collect();
        let dark = manifold::dark_levels_from(spec, &levels)
            .into_iter()
            .filter(|d| d.n <= n_max)
            .collect();
        Ok(Self {
            n_max,
            manifolds,
            dark,
        })
    }

    /// Manifolds whose ground member `|g,n+k>` is also inside the truncation.
    pub fn complete_manifolds(&self) -> impl Iterator<Item = &Manifold> {
        self.manifolds
            .iter()
            .filter(move |m| m.n_lower + m.k <= self.n_max)
    }

    /// Evolves `initial` to time `t`.
    ///
    /// Amplitude that a manifold transfers to a ground member above `n_max`
    /// is added to `tail_mass`.
    pub fn evolve_to(&self, initial: &QubitBosonState, t: f64) -> QubitBosonState {
        let n_max = self.n_max;
        let mut out = QubitBosonState::zeros(n_max);
        out.tail_mass = initial.tail_mass;
        for d in &self.dark {
            out.amp_g[d.n] = initial.amp_g[d.n] * Complex64::from_polar(1.0, -d.energy * t);
        }
        for m in &self.manifolds {
            let top = m.n_lower + m.k;
            let a_e = initial.amp_e[m.n_lower];
            let a_g = if top <= n_max {
                initial.amp_g[top]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let (c, s) = m.half_angle();
            let plus = (a_e * c + a_g * s) * Complex64::from_polar(1.0, -m.e_plus * t);
            let minus = (a_g * c - a_e * s) * Complex64::from_polar(1.0, -m.e_minus * t);
            out.amp_e[m.n_lower] = plus * c - minus * s;
            let ground = plus * s + minus * c;
            if top <= n_max {
                out.amp_g[top] = ground;
            } else {
                out.tail_mass += ground.norm_sqr();
            }
        }
        out
    }
}

/// Exact evolution of `initial` to each of `times`.
pub fn evolve(
    spec: &ModelSpec,
    initial: &QubitBosonState,
    times: &[f64],
) -> Result<Vec<QubitBosonState>> {
    let decomposition = Decomposition::new(spec, initial.n_max)?;
    Ok(times
        .par_iter()
        .map(|&t| decomposition.evolve_to(initial, t))
        .collect())
}

/// `<sz>(t)` for the initial state `|e, n_lower>`; oscillates at `E+ - E-`.
pub fn sigma_z_fock(manifold: &Manifold, t: f64) -> f64 {
    manifold.sigma_z_excited(t)
}

/// `<sz>(t)` for the initial state `|g, alpha>` from exact amplitude evolution.
pub fn sigma_z_coherent(spec: &ModelSpec, alpha: Complex64, t: f64, n_max: usize) -> Result<f64> {
    let initial = coherent_state(Qubit::Ground, alpha, n_max)?;
    let decomposition = Decomposition::new(spec, n_max)?;
    Ok(decomposition.evolve_to(&initial, t).observables().sigma_z)
}

/// Literal Poisson-weighted series `sum_j P_j <sz>_{N = j + k/2}(t)` over the
/// excited-state manifold formula.
///
/// Each term is the inversion of `|e, j>`, so the series is the exact
/// inversion for the initial state `|e, alpha>`; it is not the `|g, alpha>`
/// dynamics, which [`sigma_z_coherent`] computes.
pub fn sigma_z_coherent_series(
    spec: &ModelSpec,
    alpha: Complex64,
    t: f64,
    n_max: usize,
) -> Result<f64> {
    let mean = alpha.norm_sqr();
    let tail = poisson_tail(mean, n_max);
    if tail > DEFAULT_TRUNCATION_TOLERANCE {
        return Err(Error::Truncation {
            n_max,
            tail_mass: tail,
            limit: DEFAULT_TRUNCATION_TOLERANCE,
        });
    }
    let levels = spec.tabulate(n_max)?;
    let ln_mean = mean.ln();
    let mut log_weight = -mean;
    let mut sum = 0.0;
    for j in 0..=n_max {
        let weight = if mean == 0.0 {
            if j == 0 { 1.0 } else { 0.0 }
        } else {
            if j > 0 {
                log_weight += ln_mean - (j as f64).ln();
            }
            log_weight.exp()
        };
        sum += weight * Manifold::from_levels(spec, &levels, j).sigma_z_excited(t);
    }
    Ok(sum)
}

/// Evolves and records `(t, sz, n, x, y)` at each time.
pub fn trace_observables(
    spec: &ModelSpec,
    initial: &QubitBosonState,
    times: &[f64],
) -> Result<ObservableTrace> {
    let states = evolve(spec, initial, times)?;
    Ok(ObservableTrace::from_states(Engine::Analytic, spec.k, times, &states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::lookup;
    use crate::state::fock_state;
    use crate::trace::time_grid;
    use std::f64::consts::PI;

    fn alpha3() -> Complex64 {
        Complex64::new(3.0, 0.0)
    }

    #[test]
    fn time_zero_is_identity() {
        for e in crate::model::registry() {
            let psi = coherent_state(Qubit::Ground, Complex64::new(2.0, 1.0), 48).unwrap();
            let out = evolve(&e.spec, &psi, &[0.0]).unwrap();
            for (a, b) in out[0].to_vector().iter().zip(psi.to_vector()) {
                assert!((a - b).norm() < 1e-15, "{}", e.name);
            }
        }
    }

    #[test]
    fn jc_half_rabi_cycle() {
        let spec = lookup("jc").unwrap().spec;
        let psi = fock_state(Qubit::Excited, 0, 8).unwrap();
        let out = evolve(&spec, &psi, &[PI / (2.0 * spec.g)]).unwrap();
        assert!((out[0].amp_g[1].norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn uncoupled_populations_constant() {
        let mut spec = lookup("stark-two-photon").unwrap().spec;
        spec.g = 0.0;
        let psi = coherent_state(Qubit::Ground, alpha3(), 64).unwrap();
        for s in evolve(&spec, &psi, &[1.0, 33.3, 200.0]).unwrap() {
            for (a, b) in s.to_vector().iter().zip(psi.to_vector()) {
                assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn jc_fock_inversion_closed_form() {
        let spec = lookup("jc").unwrap().spec;
        for n in [0usize, 3, 11] {
            let m = build_manifold(&spec, n).unwrap();
            for t in [0.0, 2.0, 17.0] {
                let exact = (2.0 * spec.g * ((n + 1) as f64).sqrt() * t).cos();
                assert!((sigma_z_fock(&m, t) - exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coherent_inversion_limits() {
        let spec = lookup("jc").unwrap().spec;
        assert!((sigma_z_coherent(&spec, alpha3(), 0.0, 64).unwrap() + 1.0).abs() < 1e-14);
        let mut uncoupled = spec.clone();
        uncoupled.g = 0.0;
        for t in [0.0, 10.0, 150.0] {
            let s = sigma_z_coherent(&uncoupled, alpha3(), t, 64).unwrap();
            assert!((s + 1.0).abs() < 1e-14);
        }
        assert!(matches!(
            sigma_z_coherent(&spec, alpha3(), 1.0, 10),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn series_is_excited_coherent_dynamics() {
        for name in ["jc", "kerr-two-photon", "q-deformed"] {
            let spec = lookup(name).unwrap().spec;
            let psi = coherent_state(Qubit::Excited, alpha3(), 64).unwrap();
            let times = [0.0, 3.0, 40.0, 190.0];
            let exact = trace_observables(&spec, &psi, &times).unwrap();
            for (p, &t) in exact.points.iter().zip(&times) {
                let series = sigma_z_coherent_series(&spec, alpha3(), t, 64).unwrap();
                assert!((series - p.values.sigma_z).abs() < 1e-10, "{name} t={t}");
            }
        }
    }

    #[test]
    fn total_excitation_conserved() {
        for e in crate::model::registry() {
            let psi = coherent_state(Qubit::Ground, alpha3(), 64).unwrap();
            let trace = trace_observables(&e.spec, &psi, &time_grid(200.0, 101)).unwrap();
            let n_total = trace.total_excitation();
            for value in &n_total {
                assert!((value - n_total[0]).abs() < 1e-10, "{}", e.name);
            }
            let first = trace.points[0].values;
            assert!((first.x_mean - 3.0).abs() < 1e-12 && first.y_mean.abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_manifold_spills_into_tail() {
        let spec = lookup("jc").unwrap().spec;
        let psi = fock_state(Qubit::Excited, 6, 6).unwrap();
        let out = evolve(&spec, &psi, &[PI / (2.0 * spec.g * 7f64.sqrt())]).unwrap();
        assert!(out[0].norm_sqr() < 1e-12);
        assert!((out[0].tail_mass - 1.0).abs() < 1e-12);
    }
}
