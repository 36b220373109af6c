//! Truncated qubit-boson pure states.
//!
//! A state stores the amplitudes of `|e,n>` and `|g,n>` for `n = 0..=n_max`
//! together with the norm discarded by truncation, so that
//! `|amp_e|^2 + |amp_g|^2 + tail_mass = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest norm a constructor may discard without failing.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Default truncation for coherent states with `|alpha|^2` around 9.
pub const DEFAULT_N_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    #[serde(rename = "e")]
    Excited,
    #[serde(rename = "g")]
    Ground,
}

impl Qubit {
    pub fn symbol(self) -> char {
        match self {
            Qubit::Excited => 'e',
            Qubit::Ground => 'g',
        }
    }
}

impl std::str::FromStr for Qubit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "e" | "excited" => Ok(Qubit::Excited),
            "g" | "ground" => Ok(Qubit::Ground),
            other => Err(format!("unknown qubit level '{other}' (expected e or g)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitBosonState {
    pub n_max: usize,
    pub amp_e: Vec<Complex64>,
    pub amp_g: Vec<Complex64>,
    pub tail_mass: f64,
}

/// Expectation values of `sz`, `n`, `x = (a^dag + a)/2` and `y = i(a^dag - a)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub sigma_z: f64,
    pub n_mean: f64,
    pub x_mean: f64,
    pub y_mean: f64,
}

impl QubitBosonState {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            n_max,
            amp_e: vec![Complex64::new(0.0, 0.0); n_max + 1],
            amp_g: vec![Complex64::new(0.0, 0.0); n_max + 1],
            tail_mass: 0.0,
        }
    }

    /// Builds a state from raw amplitude rows. The rows must have equal length.
    pub fn from_rows(amp_e: Vec<Complex64>, amp_g: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amp_e.is_empty() || amp_e.len() != amp_g.len() {
            return Err(Error::Dimension {
                expected: amp_e.len(),
                actual: amp_g.len(),
            });
        }
        Ok(Self {
            n_max: amp_e.len() - 1,
            amp_e,
            amp_g,
            tail_mass,
        })
    }

    /// Number of basis states, `2 (n_max + 1)`.
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn row(&self, qubit: Qubit) -> &[Complex64] {
        match qubit {
            Qubit::Excited => &self.amp_e,
            Qubit::Ground => &self.amp_g,
        }
    }

    pub fn row_mut(&mut self, qubit: Qubit) -> &mut [Complex64] {
        match qubit {
            Qubit::Excited => &mut self.amp_e,
            Qubit::Ground => &mut self.amp_g,
        }
    }

    /// Amplitudes in the fixed basis order `e, 0..=n_max` then `g, 0..=n_max`.
    pub fn to_vector(&self) -> Vec<Complex64> {
        self.amp_e.iter().chain(&self.amp_g).copied().collect()
    }

    pub fn from_vector(v: &[Complex64], tail_mass: f64) -> Result<Self> {
        if v.len() < 2 || v.len() % 2 != 0 {
            return Err(Error::Dimension {
                expected: 2 * (v.len() / 2).max(1),
                actual: v.len(),
            });
        }
        let half = v.len() / 2;
        Self::from_rows(v[..half].to_vec(), v[half..].to_vec(), tail_mass)
    }

    /// Squared norm of the retained amplitudes.
    pub fn norm_sqr(&self) -> f64 {
        self.amp_e.iter().chain(&self.amp_g).map(|c| c.norm_sqr()).sum()
    }

    /// Retained norm plus discarded tail; 1 for a physical state.
    pub fn total_probability(&self) -> f64 {
        self.norm_sqr() + self.tail_mass
    }

    /// Population of the given Fock levels summed over both qubit rows.
    pub fn population_above(&self, n_min: usize) -> f64 {
        (n_min..=self.n_max)
            .map(|n| self.amp_e[n].norm_sqr() + self.amp_g[n].norm_sqr())
            .sum()
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        let mut out = self.clone();
        out.amp_e.iter_mut().chain(out.amp_g.iter_mut()).for_each(|c| *c *= phase);
        out
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amp_e
            .iter()
            .chain(&self.amp_g)
            .zip(other.amp_e.iter().chain(&other.amp_g))
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn observables(&self) -> Observables {
        let pe: f64 = self.amp_e.iter().map(|c| c.norm_sqr()).sum();
        let pg: f64 = self.amp_g.iter().map(|c| c.norm_sqr()).sum();
        let mut n_mean = 0.0;
        let mut lowering = Complex64::new(0.0, 0.0);
        for row in [&self.amp_e, &self.amp_g] {
            for (n, c) in row.iter().enumerate() {
                n_mean += n as f64 * c.norm_sqr();
                if n < self.n_max {
                    lowering += ((n + 1) as f64).sqrt() * c.conj() * row[n + 1];
                }
            }
        }
        Observables {
            sigma_z: pe - pg,
            n_mean,
            x_mean: lowering.re,
            y_mean: lowering.im,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("states always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let state: Self = serde_json::from_str(s)?;
        if state.amp_e.len() != state.n_max + 1 || state.amp_g.len() != state.n_max + 1 {
            return Err(Error::Dimension {
                expected: state.n_max + 1,
                actual: state.amp_e.len().min(state.amp_g.len()),
            });
        }
        Ok(state)
    }
}

/// `|qubit, n>` truncated at `n_max`.
pub fn fock_state(qubit: Qubit, n: usize, n_max: usize) -> Result<QubitBosonState> {
    if n > n_max {
        return Err(Error::OutOfRange { n, n_max });
    }
    let mut state = QubitBosonState::zeros(n_max);
    state.row_mut(qubit)[n] = Complex64::new(1.0, 0.0);
    Ok(state)
}

/// `|qubit, alpha>` with the default truncation tolerance.
pub fn coherent_state(qubit: Qubit, alpha: Complex64, n_max: usize) -> Result<QubitBosonState> {
    coherent_state_with_tolerance(qubit, alpha, n_max, DEFAULT_TRUNCATION_TOLERANCE)
}

/// `|qubit, alpha> = sum_j e^{-|alpha|^2/2} alpha^j / sqrt(j!) |qubit, j>`,
/// failing if the discarded Poisson tail exceeds `tolerance`.
pub fn coherent_state_with_tolerance(
    qubit: Qubit,
    alpha: Complex64,
    n_max: usize,
    tolerance: f64,
) -> Result<QubitBosonState> {
    let mean = alpha.norm_sqr();
    let mut state = QubitBosonState::zeros(n_max);
    if mean == 0.0 {
        state.row_mut(qubit)[0] = Complex64::new(1.0, 0.0);
        return Ok(state);
    }
    let row = state.row_mut(qubit);
    if mean < 700.0 {
        let mut amp = Complex64::new((-0.5 * mean).exp(), 0.0);
        for (j, slot) in row.iter_mut().enumerate() {
            if j > 0 {
                amp *= alpha / (j as f64).sqrt();
            }
            *slot = amp;
        }
    } else {
        // log space, since e^{-|alpha|^2/2} underflows
        let log_mean = mean.ln();
        let phase = alpha.arg();
        let mut log_weight = -mean;
        for (j, slot) in row.iter_mut().enumerate() {
            if j > 0 {
                log_weight += log_mean - (j as f64).ln();
            }
            *slot = Complex64::from_polar((0.5 * log_weight).exp(), j as f64 * phase);
        }
    }
    state.tail_mass = poisson_tail(mean, n_max);
    if state.tail_mass > tolerance {
        return Err(Error::Truncation {
            n_max,
            tail_mass: state.tail_mass,
            limit: tolerance,
        });
    }
    Ok(state)
}

/// `sum_{j > n_max} e^{-mean} mean^j / j!`.
pub fn poisson_tail(mean: f64, n_max: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let log_mean = mean.ln();
    let mut log_weight = -mean;
    for j in 1..=n_max {
        log_weight += log_mean - (j as f64).ln();
    }
    let mut tail = 0.0;
    let mut j = n_max + 1;
    loop {
        log_weight += log_mean - (j as f64).ln();
        let term = log_weight.exp();
        tail += term;
        if (j as f64) > mean && (term <= tail * 1e-17 || term < 1e-300) {
            break;
        }
        j += 1;
    }
    // Below the mean the tail is most of the distribution; summing the head
    // is more accurate there.
    if (n_max as f64) < mean {
        let mut head = 0.0;
        let mut lw = -mean;
        for j in 0..=n_max {
            if j > 0 {
                lw += log_mean - (j as f64).ln();
            }
            head += lw.exp();
        }
        return (1.0 - head).max(0.0);
    }
    tail
}
