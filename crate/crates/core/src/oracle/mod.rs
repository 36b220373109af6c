//! Brute-force reference path: the full truncated Hamiltonian matrix,
//! numerically diagonalized and used to propagate states.
//!
//! Nothing here depends on the manifold decomposition in
//! [`crate::analytic`]; the two paths only share the model definition.

mod eigen;

pub use eigen::{symmetric_eigen, SymmetricEigen};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::state::{QubitBosonState, Qubit};
use crate::susy::basis_index;
use crate::trace::{Engine, ObservableTrace};

/// Default population allowed on the guard levels during propagation.
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-10;

/// Largest eigenpair residual `|H v - lambda v|` accepted from the eigensolver.
pub const SPECTRUM_RESIDUAL_LIMIT: f64 = 1e-10;

/// Real symmetric Hamiltonian in the `e`-row-then-`g`-row basis.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub n_max: usize,
    pub k: usize,
    pub entries: DMatrix<f64>,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn element(&self, bra: (Qubit, usize), ket: (Qubit, usize)) -> f64 {
        self.entries[(
            basis_index(bra.0, bra.1, self.n_max),
            basis_index(ket.0, ket.1, self.n_max),
        )]
    }

    /// `H |psi>` on a flat amplitude vector.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let x = psi[j];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let h = self.entries[(i, j)];
                if h != 0.0 {
                    *o += x * h;
                }
            }
        }
        out
    }

    /// `<psi| H |psi>`.
    pub fn energy(&self, state: &QubitBosonState) -> f64 {
        let psi = state.to_vector();
        let h_psi = self.apply(&psi);
        psi.iter().zip(&h_psi).map(|(a, b)| (a.conj() * b).re).sum()
    }

    fn nonzeros(&self) -> Vec<(usize, usize, f64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let h = self.entries[(i, j)];
                if h != 0.0 {
                    out.push((i, j, h));
                }
            }
        }
        out
    }

    /// Nonzero entries as CSV lines `row,col,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let h = self.entries[(i, j)];
                if h != 0.0 {
                    out.push_str(&format!("{i},{j},{h:.16e},{:.16e}\n", 0.0));
                }
            }
        }
        out
    }
}

/// Assembles `H = w n + (w0/2) sz + sz F(n) + G(n) + g (Q^dag + Q)` on Fock
/// levels `0..=n_max`.
pub fn assemble(spec: &ModelSpec, n_max: usize) -> Result<HamiltonianMatrix> {
    if n_max < spec.k {
        return Err(Error::Validation(format!(
            "n_max = {n_max} must be at least k = {}",
            spec.k
        )));
    }
    let levels = spec.tabulate(n_max)?;
    let dim = 2 * (n_max + 1);
    let mut h = DMatrix::zeros(dim, dim);
    for n in 0..=n_max {
        let x = n as f64;
        let e = basis_index(Qubit::Excited, n, n_max);
        let g = basis_index(Qubit::Ground, n, n_max);
        h[(e, e)] = spec.omega * x + 0.5 * spec.omega0 + levels.F(n) + levels.G(n);
        h[(g, g)] = spec.omega * x - 0.5 * spec.omega0 - levels.F(n) + levels.G(n);
        if n + spec.k <= n_max {
            let partner = basis_index(Qubit::Ground, n + spec.k, n_max);
            let coupling = spec.g * levels.charge_element(n);
            h[(e, partner)] = coupling;
            h[(partner, e)] = coupling;
        }
    }
    Ok(HamiltonianMatrix {
        n_max,
        k: spec.k,
        entries: h,
    })
}

/// Full eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn max_residual(&self, h: &HamiltonianMatrix) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(m, &lambda)| {
                let col = self.vectors.column(m);
                (&h.entries * col - col * lambda).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn spectrum(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let eig = symmetric_eigen(&h.entries)?;
    let out = Spectrum {
        values: eig.values.as_slice().to_vec(),
        vectors: eig.vectors,
    };
    let residual = out.max_residual(h);
    if !(residual <= SPECTRUM_RESIDUAL_LIMIT) {
        return Err(Error::EigenResidual {
            residual,
            limit: SPECTRUM_RESIDUAL_LIMIT,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationMethod {
    /// `psi(t) = V e^{-i E t} V^T psi(0)` from one eigendecomposition.
    EigenDecomposition,
    /// Taylor-series stepping of `e^{-i H dt}` with a norm check per step.
    CheckedIntegrator,
}

#[derive(Debug, Clone, Copy)]
pub struct PropagationConfig {
    pub method: PropagationMethod,
    /// Number of top Fock levels watched for leakage; `None` means `2k`.
    pub guard_levels: Option<usize>,
    pub leak_tolerance: f64,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            method: PropagationMethod::EigenDecomposition,
            guard_levels: None,
            leak_tolerance: DEFAULT_LEAK_TOLERANCE,
        }
    }
}

/// Propagates `initial` under `h` to each requested time.
pub fn propagate(
    h: &HamiltonianMatrix,
    initial: &QubitBosonState,
    times: &[f64],
    config: &PropagationConfig,
) -> Result<Vec<QubitBosonState>> {
    if initial.dim() != h.dim() {
        return Err(Error::Dimension {
            expected: h.dim(),
            actual: initial.dim(),
        });
    }
    let states = match config.method {
        PropagationMethod::EigenDecomposition => {
            let spec = spectrum(h)?;
            propagate_with_spectrum(&spec, initial, times)
        }
        PropagationMethod::CheckedIntegrator => integrate(h, initial, times)?,
    };
    let guard = config.guard_levels.unwrap_or(2 * h.k).min(h.n_max + 1);
    check_leak(&states, times, guard, config.leak_tolerance)?;
    Ok(states)
}

/// Spectral propagation reusing a precomputed decomposition.
pub fn propagate_with_spectrum(
    spectrum: &Spectrum,
    initial: &QubitBosonState,
    times: &[f64],
) -> Vec<QubitBosonState> {
    let v = &spectrum.vectors;
    let psi0 = initial.to_vector();
    let dim = psi0.len();
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|m| (0..dim).map(|i| psi0[i] * v[(i, m)]).sum())
        .collect();
    times
        .par_iter()
        .map(|&t| {
            let evolved: Vec<Complex64> = coeffs
                .iter()
                .zip(&spectrum.values)
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
                .collect();
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            for (m, c) in evolved.iter().enumerate() {
                for (i, p) in psi.iter_mut().enumerate() {
                    *p += c * v[(i, m)];
                }
            }
            QubitBosonState::from_vector(&psi, initial.tail_mass).expect("even dimension")
        })
        .collect()
}

/// Propagates and records `(t, sz, n, x, y)` at each time.
pub fn trace_oracle(
    spec: &ModelSpec,
    initial: &QubitBosonState,
    times: &[f64],
    config: &PropagationConfig,
) -> Result<ObservableTrace> {
    let h = assemble(spec, initial.n_max)?;
    let states = propagate(&h, initial, times, config)?;
    Ok(ObservableTrace::from_states(Engine::Oracle, spec.k, times, &states))
}

/// Fails if any state holds more than `limit` in its top `guard` Fock levels.
pub fn check_leak(states: &[QubitBosonState], times: &[f64], guard: usize, limit: f64) -> Result<()> {
    for (state, &t) in states.iter().zip(times) {
        let population = state.population_above(state.n_max + 1 - guard);
        if population > limit {
            return Err(Error::Leak {
                n_max: state.n_max,
                guard,
                time: t,
                population,
                limit,
            });
        }
    }
    Ok(())
}

// Norm drift tolerated per propagated state by the Taylor integrator.
const INTEGRATOR_NORM_DRIFT: f64 = 1e-10;

fn integrate(
    h: &HamiltonianMatrix,
    initial: &QubitBosonState,
    times: &[f64],
) -> Result<Vec<QubitBosonState>> {
    let nonzeros = h.nonzeros();
    let dim = h.dim();
    let apply = |psi: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for &(i, j, v) in &nonzeros {
            out[i] += psi[j] * v;
        }
        out
    };
    let row_sum = (0..dim)
        .map(|i| (0..dim).map(|j| h.entries[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let max_step = if row_sum > 0.0 { 0.5 / row_sum } else { f64::INFINITY };
    let minus_i = Complex64::new(0.0, -1.0);

    let norm0 = initial.norm_sqr();
    let mut psi = initial.to_vector();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - now;
        let steps = if span == 0.0 { 0 } else { (span.abs() / max_step).ceil() as usize };
        let dt = if steps == 0 { 0.0 } else { span / steps as f64 };
        for _ in 0..steps {
            // psi <- sum_j (-i H dt)^j / j! psi, until terms drop below roundoff
            let mut term = psi.clone();
            let mut sum = psi.clone();
            for order in 1..64 {
                let scale = minus_i * (dt / order as f64);
                term = apply(&term).into_iter().map(|x| x * scale).collect();
                let size: f64 = term.iter().map(|x| x.norm_sqr()).sum();
                sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
                if size < 1e-34 {
                    break;
                }
            }
            psi = sum;
        }
        now = target;
        let state = QubitBosonState::from_vector(&psi, initial.tail_mass)?;
        let drift = (state.norm_sqr() - norm0).abs();
        if drift > INTEGRATOR_NORM_DRIFT {
            return Err(Error::Integration { time: target, drift });
        }
        out.push(state);
    }
    Ok(out)
}
