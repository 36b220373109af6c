use num_complex::Complex64;

use super::auxiliary::{combine, AuxValues, Excitation};
use crate::error::{Error, Result};
use crate::model::{ladder_factor, Levels, ModelSpec};
use crate::state::{QubitBosonState, Qubit};

/// The invariant block `{|e,n>, |g,n+k>}` with total excitation `N = n + k/2`.
///
/// Inside the block the Hamiltonian is
/// `phase_rate + (k/2) Omega [cos(beta) sz + sin(beta) sx]`, so its
/// eigenvalues are `phase_rate +- (k/2) Omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manifold {
    pub n_lower: usize,
    pub k: usize,
    pub label: Excitation,
    /// Effective detuning `w0/k - w + detuning(N)`.
    pub detuning: f64,
    /// `(2g/k) sqrt((n+k)!/n!) f(n)`.
    pub coupling: f64,
    /// Mixing angle, `atan2(coupling, detuning)`.
    pub beta: f64,
    /// Generalized Rabi frequency `sqrt(detuning^2 + coupling^2)`.
    pub rabi: f64,
    /// `w N + common(N)`.
    pub phase_rate: f64,
    pub e_plus: f64,
    pub e_minus: f64,
}

impl Manifold {
    fn from_parts(spec: &ModelSpec, n_lower: usize, f_lower: f64, aux: AuxValues) -> Self {
        let k = spec.k;
        let label = Excitation::of_manifold(n_lower, k);
        let detuning = spec.omega0 / k as f64 - spec.omega + aux.detuning;
        let coupling = 2.0 * spec.g / k as f64 * ladder_factor(n_lower, k) * f_lower;
        // +0.0 keeps atan2(0, negative detuning) at pi rather than -pi
        let coupling = if coupling == 0.0 { 0.0 } else { coupling };
        let rabi = detuning.hypot(coupling);
        let phase_rate = spec.omega * label.value() + aux.common;
        let half_split = 0.5 * k as f64 * rabi;
        Self {
            n_lower,
            k,
            label,
            detuning,
            coupling,
            beta: coupling.atan2(detuning),
            rabi,
            phase_rate,
            e_plus: phase_rate + half_split,
            e_minus: phase_rate - half_split,
        }
    }

    pub(crate) fn from_levels(spec: &ModelSpec, levels: &Levels, n_lower: usize) -> Self {
        let hi = n_lower + spec.k;
        let aux = combine(
            spec.k,
            (levels.F(n_lower), levels.G(n_lower)),
            (levels.F(hi), levels.G(hi)),
        );
        Self::from_parts(spec, n_lower, levels.f(n_lower), aux)
    }

    /// Splitting `E+ - E-`, which is `k Omega`.
    pub fn splitting(&self) -> f64 {
        self.e_plus - self.e_minus
    }

    /// `(cos(beta/2), sin(beta/2))`.
    pub fn half_angle(&self) -> (f64, f64) {
        let (s, c) = (0.5 * self.beta).sin_cos();
        (c, s)
    }

    /// Population inversion for the initial state `|e, n_lower>`:
    /// `cos^2(beta) + sin^2(beta) cos(k Omega t)`.
    pub fn sigma_z_excited(&self, t: f64) -> f64 {
        let (s, c) = self.beta.sin_cos();
        c * c + s * s * (self.splitting() * t).cos()
    }
}

/// Manifold with excited member `|e, n_lower>`.
pub fn build_manifold(spec: &ModelSpec, n_lower: usize) -> Result<Manifold> {
    spec.coupling_fn.check_params()?;
    let aux = super::aux_two_point(spec, Excitation::of_manifold(n_lower, spec.k))?;
    let f = spec.coupling_fn.eval(n_lower as f64)?;
    if f < 0.0 {
        return Err(Error::Validation(format!("f({n_lower}) = {f} is negative")));
    }
    Ok(Manifold::from_parts(spec, n_lower, f, aux))
}

/// Coefficients of a dressed state on `(|e,n>, |g,n+k>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedState {
    pub excited: f64,
    pub ground: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub n_lower: usize,
    pub k: usize,
    pub plus: DressedState,
    pub minus: DressedState,
}

impl DressedPair {
    /// Embeds one member into a truncated state; needs `n_lower + k <= n_max`.
    pub fn embed(&self, which: DressedState, n_max: usize) -> Result<QubitBosonState> {
        let top = self.n_lower + self.k;
        if top > n_max {
            return Err(Error::OutOfRange { n: top, n_max });
        }
        let mut state = QubitBosonState::zeros(n_max);
        state.row_mut(Qubit::Excited)[self.n_lower] = Complex64::new(which.excited, 0.0);
        state.row_mut(Qubit::Ground)[top] = Complex64::new(which.ground, 0.0);
        Ok(state)
    }
}

/// `|+> = cos(beta/2)|e,n> + sin(beta/2)|g,n+k>`,
/// `|-> = -sin(beta/2)|e,n> + cos(beta/2)|g,n+k>`.
pub fn dressed_states(manifold: &Manifold) -> DressedPair {
    let (c, s) = manifold.half_angle();
    DressedPair {
        n_lower: manifold.n_lower,
        k: manifold.k,
        plus: DressedState {
            excited: c,
            ground: s,
            energy: manifold.e_plus,
        },
        minus: DressedState {
            excited: -s,
            ground: c,
            energy: manifold.e_minus,
        },
    }
}

/// An uncoupled level `|g,n>` with `n < k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkLevel {
    pub n: usize,
    pub energy: f64,
}

pub(crate) fn dark_levels_from(spec: &ModelSpec, levels: &Levels) -> Vec<DarkLevel> {
    (0..spec.k)
        .map(|n| DarkLevel {
            n,
            energy: spec.omega * n as f64 - 0.5 * spec.omega0 - levels.F(n) + levels.G(n),
        })
        .collect()
}

/// `|g,n>` for `n < k`, with energy `w n - w0/2 - F(n) + G(n)`.
pub fn dark_levels(spec: &ModelSpec) -> Result<Vec<DarkLevel>> {
    let levels = spec.tabulate(0)?;
    Ok(dark_levels_from(spec, &levels))
}
