use super::{ModelSpec, NonlinearFn};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub spec: ModelSpec,
    /// Figure number of the reference trace for this entry.
    pub figure: u8,
    pub notes: &'static str,
}

// All entries share w = w0 = 1 and g = 0.1 w0.
fn base(k: usize, f: NonlinearFn, dispersive: NonlinearFn, boson: NonlinearFn) -> ModelSpec {
    ModelSpec {
        omega: 1.0,
        omega0: 1.0,
        g: 0.1,
        k,
        coupling_fn: f,
        dispersive_fn: dispersive,
        boson_fn: boson,
    }
}

/// The eight named models, in figure order.
pub fn registry() -> Vec<RegistryEntry> {
    let (beta1, beta2) = (1.0, 0.75);
    vec![
        RegistryEntry {
            name: "jc",
            spec: base(1, NonlinearFn::one(), NonlinearFn::zero(), NonlinearFn::zero()),
            figure: 1,
            notes: "standard Jaynes-Cummings model",
        },
        RegistryEntry {
            name: "intensity-multiboson",
            spec: base(2, NonlinearFn::sqrt_n(), NonlinearFn::zero(), NonlinearFn::zero()),
            figure: 2,
            notes: "intensity-dependent coupling f(n) = sqrt(n), two-boson exchange",
        },
        RegistryEntry {
            name: "stark-two-photon",
            spec: base(
                2,
                NonlinearFn::one(),
                NonlinearFn::linear_stark((beta2 - beta1) / 2.0),
                NonlinearFn::linear_stark((beta2 + beta1) / 2.0),
            ),
            figure: 3,
            notes: "two-photon exchange with Stark shift, beta1 = 1, beta2 = 0.75",
        },
        RegistryEntry {
            name: "kerr-two-photon",
            spec: base(2, NonlinearFn::one(), NonlinearFn::zero(), NonlinearFn::kerr(0.5)),
            figure: 4,
            notes: "two-photon exchange in a Kerr medium, G(n) = chi n(n-1), chi = 0.5",
        },
        RegistryEntry {
            name: "molecular",
            spec: base(
                1,
                NonlinearFn::one(),
                NonlinearFn::zero(),
                NonlinearFn::poly(vec![0.0, 0.0, 0.3]),
            ),
            figure: 5,
            notes: "molecular / Jahn-Teller model, G(n) = beta n^2, beta = 0.3",
        },
        RegistryEntry {
            name: "algebraic",
            spec: base(
                1,
                NonlinearFn::algebraic_sqrt(0.5, 2.0, 1.0),
                NonlinearFn::zero(),
                // chi_a n (n^(l-1) - 1) at l = 2
                NonlinearFn::poly(vec![0.0, -0.5, 0.5]),
            ),
            figure: 6,
            notes: "algebraic deformation, chi_a = 0.5, l = 2; G stored as chi_a (n^2 - n)",
        },
        RegistryEntry {
            name: "parity-deformed",
            spec: base(1, NonlinearFn::one(), NonlinearFn::zero(), NonlinearFn::parity(0.2)),
            figure: 7,
            notes: "lambda-analog Heisenberg algebra, G(n) = lambda (-1)^n, lambda = 0.2 \
                    (the displayed Hamiltonian carries an extra factor w, moot at w = 1)",
        },
        RegistryEntry {
            name: "q-deformed",
            spec: base(
                1,
                NonlinearFn::q_bracket_sqrt(0.9),
                NonlinearFn::zero(),
                NonlinearFn::zero(),
            ),
            figure: 8,
            notes: "q-deformed bosons, f(n) = sqrt([n]_q), q = 0.9; qubit term \
                    normalized to (w0/2) sz like the other entries",
        },
    ]
}

/// Finds a registry entry by exact name or unique prefix (`"stark"`, `"kerr"`).
pub fn lookup(name: &str) -> Result<RegistryEntry> {
    let entries = registry();
    if let Some(e) = entries.iter().find(|e| e.name == name) {
        return Ok(e.clone());
    }
    let mut hits = entries.into_iter().filter(|e| e.name.starts_with(name));
    match (hits.next(), hits.next()) {
        (Some(e), None) if !name.is_empty() => Ok(e),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}
