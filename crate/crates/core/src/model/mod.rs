//! Model definition: the generalized Jaynes-Cummings Hamiltonian
//!
//! ```text
//! H = w n + (w0/2) sz + sz F(n) + G(n) + g (Q^dag + Q),
//! Q^dag = s+ f(n) a^k,   Q = s- a^dag^k f(n)
//! ```
//!
//! and the registry of named models.

mod nonlinear;
mod registry;

pub use nonlinear::{q_bracket, FnKind, NonlinearFn, MAX_POLY_DEGREE};
pub use registry::{lookup, registry, RegistryEntry};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation used to check per-level invariants when a document is loaded
/// without an explicit `n_max`.
pub const DEFAULT_N_MAX: usize = 64;

/// One generalized JC Hamiltonian. Frequencies are in units of `omega0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Boson mode frequency.
    pub omega: f64,
    /// Qubit gap.
    pub omega0: f64,
    /// Interaction strength.
    pub g: f64,
    /// Number of bosons exchanged per qubit flip.
    pub k: usize,
    /// Intensity-dependent coupling `f(n)`.
    #[serde(rename = "f")]
    pub coupling_fn: NonlinearFn,
    /// Dispersive shift `F(n)` multiplying `sz`.
    #[serde(rename = "F")]
    pub dispersive_fn: NonlinearFn,
    /// Pure boson nonlinearity `G(n)`.
    #[serde(rename = "G")]
    pub boson_fn: NonlinearFn,
}

impl ModelSpec {
    /// Standard JC model `w n + (w0/2) sz + g (s+ a + s- a^dag)`.
    pub fn jaynes_cummings(omega: f64, omega0: f64, g: f64) -> Self {
        Self {
            omega,
            omega0,
            g,
            k: 1,
            coupling_fn: NonlinearFn::one(),
            dispersive_fn: NonlinearFn::zero(),
            boson_fn: NonlinearFn::zero(),
        }
    }

    /// `k / 2`, the eigenvalue magnitude of the scaled Pauli operator.
    pub fn half_k(&self) -> f64 {
        self.k as f64 / 2.0
    }

    /// Checks every invariant over Fock levels `0..=n_max + k`.
    pub fn validate(&self, n_max: usize) -> Result<()> {
        self.tabulate(n_max).map(|_| ())
    }

    /// Evaluates `f`, `F` and `G` on Fock levels `0..=n_max + k`, checking the
    /// model invariants on the way.
    pub fn tabulate(&self, n_max: usize) -> Result<Levels> {
        if self.k == 0 {
            return Err(Error::Validation("k must be at least 1".into()));
        }
        for (name, v) in [("omega", self.omega), ("omega0", self.omega0), ("g", self.g)] {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{name} = {v} is not finite")));
            }
        }
        self.coupling_fn.check_params()?;
        self.dispersive_fn.check_params()?;
        self.boson_fn.check_params()?;

        let top = n_max + self.k;
        let mut levels = Levels {
            k: self.k,
            coupling: Vec::with_capacity(top + 1),
            dispersive: Vec::with_capacity(top + 1),
            boson: Vec::with_capacity(top + 1),
        };
        for n in 0..=top {
            let x = n as f64;
            let f = self.coupling_fn.eval(x)?;
            if f < 0.0 {
                return Err(Error::Validation(format!(
                    "f({n}) = {f} is negative; f must be non-negative"
                )));
            }
            levels.coupling.push(f);
            levels.dispersive.push(self.dispersive_fn.eval(x)?);
            levels.boson.push(self.boson_fn.eval(x)?);
        }
        Ok(levels)
    }
}

/// `f`, `F` and `G` tabulated on integer Fock levels.
#[derive(Debug, Clone)]
pub struct Levels {
    k: usize,
    coupling: Vec<f64>,
    dispersive: Vec<f64>,
    boson: Vec<f64>,
}

impl Levels {
    /// Highest tabulated Fock level.
    pub fn top(&self) -> usize {
        self.coupling.len() - 1
    }

    pub fn f(&self, n: usize) -> f64 {
        self.coupling[n]
    }

    #[allow(non_snake_case)]
    pub fn F(&self, n: usize) -> f64 {
        self.dispersive[n]
    }

    #[allow(non_snake_case)]
    pub fn G(&self, n: usize) -> f64 {
        self.boson[n]
    }

    /// `sqrt((n+k)!/n!)`, the matrix element of `a^k` between `|n+k>` and `|n>`.
    pub fn ladder(&self, n: usize) -> f64 {
        ladder_factor(n, self.k)
    }

    /// `(n+k)!/n!`.
    pub fn ladder_sqr(&self, n: usize) -> f64 {
        (1..=self.k).map(|m| (n + m) as f64).product()
    }

    /// `<e,n| Q^dag |g,n+k> = f(n) sqrt((n+k)!/n!)`.
    pub fn charge_element(&self, n: usize) -> f64 {
        self.coupling[n] * self.ladder(n)
    }
}

/// `sqrt((n+k)!/n!)` as a running product.
pub fn ladder_factor(n: usize, k: usize) -> f64 {
    (1..=k).map(|m| (n + m) as f64).product::<f64>().sqrt()
}

/// Parses and validates a model document, checking per-level invariants up to
/// [`DEFAULT_N_MAX`].
pub fn load_model(document: &str) -> Result<ModelSpec> {
    load_model_with_n_max(document, DEFAULT_N_MAX)
}

pub fn load_model_with_n_max(document: &str, n_max: usize) -> Result<ModelSpec> {
    let spec: ModelSpec = serde_json::from_str(document)?;
    spec.validate(n_max)?;
    Ok(spec)
}

/// JSON document for a model.
pub fn to_document(spec: &ModelSpec) -> String {
    serde_json::to_string_pretty(spec).expect("model specs always serialize")
}
