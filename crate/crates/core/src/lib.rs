//! Generalized Jaynes-Cummings model: a qubit coupled to one boson mode
//! through `k`-boson exchange with intensity-dependent coupling, dispersive
//! shifts and boson nonlinearities.
//!
//! The crate offers two independent routes to the dynamics:
//!
//! * [`analytic`] diagonalizes the model manifold by manifold using the
//!   conserved total excitation number and evolves states in closed form.
//! * [`oracle`] assembles the truncated Hamiltonian matrix and propagates
//!   states through a numerical eigendecomposition.
//!
//! [`susy`] checks the graded-algebra relations behind the first route as
//! matrix identities.

pub mod analytic;
pub mod error;
pub mod model;
pub mod oracle;
pub mod state;
pub mod susy;
pub mod trace;

pub use error::{Error, Result};
pub use model::{load_model, lookup, registry, ModelSpec, NonlinearFn};
pub use state::{coherent_state, fock_state, Observables, Qubit, QubitBosonState};
pub use trace::{time_grid, Engine, ObservableTrace};
