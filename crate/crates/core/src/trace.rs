//! Observable time series and their CSV form.

use std::io::{self, Write};

use serde::Serialize;

use crate::state::{Observables, QubitBosonState};

pub const CSV_HEADER: &str = "t,sigma_z,n_mean,x_mean,y_mean";

/// Which propagation path produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub t: f64,
    #[serde(flatten)]
    pub values: Observables,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObservableTrace {
    pub engine: Engine,
    pub k: usize,
    pub n_max: usize,
    pub points: Vec<TracePoint>,
}

impl ObservableTrace {
    pub fn from_states(engine: Engine, k: usize, times: &[f64], states: &[QubitBosonState]) -> Self {
        let n_max = states.first().map_or(0, |s| s.n_max);
        let points = times
            .iter()
            .zip(states)
            .map(|(&t, s)| TracePoint {
                t,
                values: s.observables(),
            })
            .collect();
        Self {
            engine,
            k,
            n_max,
            points,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn sigma_z(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.values.sigma_z).collect()
    }

    /// `<N> = <n> + (k/2) <sz>` at every point.
    pub fn total_excitation(&self) -> Vec<f64> {
        let half_k = self.k as f64 / 2.0;
        self.points
            .iter()
            .map(|p| p.values.n_mean + half_k * p.values.sigma_z)
            .collect()
    }

    /// Largest pointwise difference of each observable against `other`,
    /// in the order `(sigma_z, n_mean, x_mean, y_mean)`.
    pub fn max_deviation(&self, other: &ObservableTrace) -> [f64; 4] {
        let mut worst = [0.0f64; 4];
        for (a, b) in self.points.iter().zip(&other.points) {
            for (w, d) in worst.iter_mut().zip(deviation(&a.values, &b.values)) {
                *w = w.max(d);
            }
        }
        worst
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for p in &self.points {
            writeln!(out, "{}", format_row(&[p.t, p.values.sigma_z, p.values.n_mean, p.values.x_mean, p.values.y_mean]))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// `|a - b|` per observable in `(sigma_z, n_mean, x_mean, y_mean)` order.
pub fn deviation(a: &Observables, b: &Observables) -> [f64; 4] {
    [
        (a.sigma_z - b.sigma_z).abs(),
        (a.n_mean - b.n_mean).abs(),
        (a.x_mean - b.x_mean).abs(),
        (a.y_mean - b.y_mean).abs(),
    ]
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_row(values: &[f64]) -> String {
    values.iter().map(|&v| format_value(v)).collect::<Vec<_>>().join(",")
}

/// `points` evenly spaced times from 0 to `t_max` inclusive.
pub fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| t_max * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{fock_state, Qubit};

    #[test]
    fn grid_endpoints() {
        let g = time_grid(200.0, 2001);
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[2000], 200.0);
        assert!((g[1] - 0.1).abs() < 1e-15);
        assert!(time_grid(1.0, 0).is_empty());
    }

    #[test]
    fn csv_layout() {
        let s = fock_state(Qubit::Ground, 0, 2).unwrap();
        let trace = ObservableTrace::from_states(Engine::Analytic, 1, &[0.0], &[s]);
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(
            lines.next(),
            Some("0.0000000000000000e0,-1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0")
        );
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789] {
            assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
        }
    }
}
