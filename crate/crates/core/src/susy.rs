//! Matrix representations of the graded algebra `{Q, Q^dag, H_susy, N, B}` on
//! the truncated space, and residual checks of its defining relations.
//!
//! Basis order is `index = row * (n_max + 1) + n` with row 0 = `e`, row 1 = `g`.
//! `a^dag^k` leaks out of the truncated space on the top `k` Fock levels, so
//! every identity is checked only on the interior selected by an
//! [`InteriorMask`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::state::Qubit;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorLabel {
    Charge,
    ChargeDagger,
    SusyHamiltonian,
    TotalExcitation,
    ScaledPauliZ,
    AuxiliaryX,
    AuxiliaryY,
}

/// Position of `|qubit, n>` in the fixed basis order.
pub fn basis_index(qubit: Qubit, n: usize, n_max: usize) -> usize {
    match qubit {
        Qubit::Excited => n,
        Qubit::Ground => n_max + 1 + n,
    }
}

/// Fock index of a basis position.
pub fn fock_index(index: usize, n_max: usize) -> usize {
    index % (n_max + 1)
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub label: OperatorLabel,
    pub n_max: usize,
    pub entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    fn zeros(label: OperatorLabel, n_max: usize) -> Self {
        let dim = 2 * (n_max + 1);
        Self {
            label,
            n_max,
            entries: DMatrix::from_element(dim, dim, ZERO),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, bra: (Qubit, usize), ket: (Qubit, usize)) -> Complex64 {
        self.entries[(
            basis_index(bra.0, bra.1, self.n_max),
            basis_index(ket.0, ket.1, self.n_max),
        )]
    }

    fn set(&mut self, bra: (Qubit, usize), ket: (Qubit, usize), value: f64) {
        let (i, j) = (
            basis_index(bra.0, bra.1, self.n_max),
            basis_index(ket.0, ket.1, self.n_max),
        );
        self.entries[(i, j)] = Complex64::new(value, 0.0);
    }

    /// Conjugate transpose, keeping `label`.
    fn adjoint_as(&self, label: OperatorLabel) -> Self {
        Self {
            label,
            n_max: self.n_max,
            entries: self.entries.adjoint(),
        }
    }

    /// Nonzero entries as CSV lines `row,col,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let z = self.entries[(i, j)];
                if z != ZERO {
                    out.push_str(&format!("{i},{j},{:.16e},{:.16e}\n", z.re, z.im));
                }
            }
        }
        out
    }
}

fn check_truncation(spec: &ModelSpec, n_max: usize) -> Result<()> {
    if n_max < spec.k {
        return Err(Error::Validation(format!(
            "n_max = {n_max} must be at least k = {}",
            spec.k
        )));
    }
    Ok(())
}

/// Builds `Q^dag = s+ f(n) a^k` and its adjoint `Q = s- a^dag^k f(n)`.
///
/// Returns `(Q^dag, Q)`.
pub fn build_charge(spec: &ModelSpec, n_max: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_truncation(spec, n_max)?;
    let levels = spec.tabulate(n_max)?;
    let mut qdag = OperatorMatrix::zeros(OperatorLabel::ChargeDagger, n_max);
    for n in 0..=n_max - spec.k {
        qdag.set(
            (Qubit::Excited, n),
            (Qubit::Ground, n + spec.k),
            levels.charge_element(n),
        );
    }
    let q = qdag.adjoint_as(OperatorLabel::Charge);
    Ok((qdag, q))
}

/// `H_susy = {Q^dag, Q}` in closed form: `f^2(n) (n+k)!/n!` on `|e,n>`,
/// `f^2(n-k) n!/(n-k)!` on `|g,n>` for `n >= k` and zero on the dark levels
/// `|g,n<k>`.
pub fn build_susy_hamiltonian(spec: &ModelSpec, n_max: usize) -> Result<OperatorMatrix> {
    check_truncation(spec, n_max)?;
    let levels = spec.tabulate(n_max)?;
    let k = spec.k;
    let mut h = OperatorMatrix::zeros(OperatorLabel::SusyHamiltonian, n_max);
    for n in 0..=n_max {
        h.set(
            (Qubit::Excited, n),
            (Qubit::Excited, n),
            levels.f(n).powi(2) * levels.ladder_sqr(n),
        );
        if n >= k {
            h.set(
                (Qubit::Ground, n),
                (Qubit::Ground, n),
                levels.f(n - k).powi(2) * levels.ladder_sqr(n - k),
            );
        }
    }
    Ok(h)
}

/// `B = k sz / 2`.
pub fn build_scaled_pauli(spec: &ModelSpec, n_max: usize) -> OperatorMatrix {
    let mut b = OperatorMatrix::zeros(OperatorLabel::ScaledPauliZ, n_max);
    for n in 0..=n_max {
        b.set((Qubit::Excited, n), (Qubit::Excited, n), spec.half_k());
        b.set((Qubit::Ground, n), (Qubit::Ground, n), -spec.half_k());
    }
    b
}

/// `N = n + B`.
pub fn build_total_excitation(spec: &ModelSpec, n_max: usize) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(OperatorLabel::TotalExcitation, n_max);
    for n in 0..=n_max {
        let x = n as f64;
        op.set((Qubit::Excited, n), (Qubit::Excited, n), x + spec.half_k());
        op.set((Qubit::Ground, n), (Qubit::Ground, n), x - spec.half_k());
    }
    op
}

/// `Q_X = Q^dag + Q` and `Q_Y = i (Q^dag - Q)`.
pub fn auxiliary_charges(
    spec: &ModelSpec,
    n_max: usize,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let (qdag, q) = build_charge(spec, n_max)?;
    let i = Complex64::new(0.0, 1.0);
    let qx = OperatorMatrix {
        label: OperatorLabel::AuxiliaryX,
        n_max,
        entries: &qdag.entries + &q.entries,
    };
    let qy = OperatorMatrix {
        label: OperatorLabel::AuxiliaryY,
        n_max,
        entries: (&qdag.entries - &q.entries) * i,
    };
    Ok((qx, qy))
}

/// Number of top Fock levels excluded from identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InteriorMask {
    pub guard: usize,
}

impl InteriorMask {
    pub fn new(guard: usize) -> Self {
        Self { guard }
    }

    /// The default guard `2k`.
    pub fn for_model(spec: &ModelSpec) -> Self {
        Self { guard: 2 * spec.k }
    }

    /// Max-modulus entry of `m` over rows and columns whose Fock index is at
    /// most `n_max - guard`.
    pub fn residual(&self, m: &DMatrix<Complex64>, n_max: usize) -> f64 {
        let limit = n_max - self.guard;
        let mut worst = 0.0f64;
        for j in 0..m.ncols() {
            if fock_index(j, n_max) > limit {
                continue;
            }
            for i in 0..m.nrows() {
                if fock_index(i, n_max) <= limit {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub n_max: usize,
    pub guard: usize,
    pub k: usize,
    pub residuals: Vec<RelationResidual>,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.residuals.iter().all(|r| r.residual <= threshold)
    }

    pub fn failures(&self, threshold: f64) -> impl Iterator<Item = &RelationResidual> {
        self.residuals.iter().filter(move |r| r.residual > threshold)
    }
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// Evaluates every relation of the graded algebra as a matrix identity and
/// reports the interior residual of each.
pub fn verify_relations(
    spec: &ModelSpec,
    n_max: usize,
    mask: InteriorMask,
) -> Result<RelationReport> {
    if mask.guard < spec.k {
        return Err(Error::Validation(format!(
            "guard = {} must be at least k = {}",
            mask.guard, spec.k
        )));
    }
    if mask.guard > n_max {
        return Err(Error::Validation(format!(
            "guard = {} leaves no interior below n_max = {n_max}",
            mask.guard
        )));
    }
    let (qdag, q) = build_charge(spec, n_max)?;
    let h = build_susy_hamiltonian(spec, n_max)?;
    let b = build_scaled_pauli(spec, n_max);
    let nn = build_total_excitation(spec, n_max);
    let (qx, qy) = auxiliary_charges(spec, n_max)?;

    let (qdag, q, h, b, nn, qx, qy) = (
        &qdag.entries,
        &q.entries,
        &h.entries,
        &b.entries,
        &nn.entries,
        &qx.entries,
        &qy.entries,
    );
    // Sector projections of H_susy: fermionic on the e-row, bosonic on the g-row.
    let dim = h.nrows();
    let half = dim / 2;
    let mut h_f = h.clone();
    let mut h_b = h.clone();
    for i in 0..dim {
        if i < half {
            h_b[(i, i)] = ZERO;
        } else {
            h_f[(i, i)] = ZERO;
        }
    }
    let k = Complex64::new(spec.k as f64, 0.0);
    let two_over_k = Complex64::new(2.0 / spec.k as f64, 0.0);

    let mut residuals = Vec::new();
    let mut push = |name: &str, m: DMatrix<Complex64>| {
        residuals.push(RelationResidual {
            relation: name.to_string(),
            residual: mask.residual(&m, n_max),
        })
    };

    push("Q^2 = 0", q * q);
    push("Qdag^2 = 0", qdag * qdag);
    let set: [(&str, &DMatrix<Complex64>); 5] =
        [("Q", q), ("Qdag", qdag), ("H", h), ("N", nn), ("B", b)];
    for (name, op) in set {
        push(&format!("[{name}, H] = 0"), commutator(op, h));
    }
    for (name, op) in set {
        push(&format!("[{name}, N] = 0"), commutator(op, nn));
    }
    push("Q H_F = H_B Q", q * &h_f - &h_b * q);
    push("H_F Qdag = Qdag H_B", &h_f * qdag - qdag * &h_b);
    push("[B, Qdag] = k Qdag", commutator(b, qdag) - qdag * k);
    push("[B, Q] = -k Q", commutator(b, q) + q * k);
    push("[Qdag, Q] = (2/k) H B", commutator(qdag, q) - h * b * two_over_k);
    push("Q_X^2 = H", qx * qx - h);
    push("Q_Y^2 = H", qy * qy - h);
    push("Q_X = Q_X^dag", qx - qx.adjoint());
    push("Q_Y = Q_Y^dag", qy - qy.adjoint());

    Ok(RelationReport {
        n_max,
        guard: mask.guard,
        k: spec.k,
        residuals,
    })
}
