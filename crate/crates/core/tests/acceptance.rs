//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use gjc_core::analytic::{self, aux_binomial, aux_two_point, build_manifold, dressed_states, Excitation};
use gjc_core::model::{registry, ModelSpec, NonlinearFn};
use gjc_core::oracle::{self, assemble, PropagationConfig};
use gjc_core::state::{coherent_state, Qubit, QubitBosonState};
use gjc_core::susy::{verify_relations, InteriorMask};
use gjc_core::trace::{time_grid, Engine, ObservableTrace};
use gjc_core::lookup;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const N_MAX: usize = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: &str, name: &str, started: Instant, outcome: Outcome) -> bool {
    println!(
        "{} {id} {name}: {} [{:.2} s]",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        started.elapsed().as_secs_f64()
    );
    outcome.pass
}

fn alpha() -> Complex64 {
    Complex64::new(3.0, 0.0)
}

fn c1_algebra() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut pass = true;
    for entry in registry() {
        let report = match verify_relations(&entry.spec, N_MAX, InteriorMask::for_model(&entry.spec)) {
            Ok(r) => r,
            Err(e) => {
                return Outcome { pass: false, detail: format!("{}: {e}", entry.name) };
            }
        };
        pass &= report.passes(1e-10);
        for r in &report.residuals {
            if r.residual > worst.0 || worst.1.is_empty() {
                worst = (r.residual, format!("{} / {}", entry.name, r.relation));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("max interior residual {:.3e} ({}), limit 1e-10", worst.0, worst.1),
    }
}

/// Both engines' states for `|g, 3>` over the standard grid.
struct Propagation {
    name: &'static str,
    spec: ModelSpec,
    analytic: Vec<QubitBosonState>,
    oracle: Vec<QubitBosonState>,
}

fn propagate_all(times: &[f64]) -> Result<Vec<Propagation>, String> {
    let mut out = Vec::new();
    for entry in registry() {
        let psi = coherent_state(Qubit::Ground, alpha(), N_MAX).map_err(|e| e.to_string())?;
        let a = analytic::evolve(&entry.spec, &psi, times).map_err(|e| format!("{}: {e}", entry.name))?;
        let h = assemble(&entry.spec, N_MAX).map_err(|e| e.to_string())?;
        let o = oracle::propagate(&h, &psi, times, &PropagationConfig::default())
            .map_err(|e| format!("{}: {e}", entry.name))?;
        out.push(Propagation { name: entry.name, spec: entry.spec, analytic: a, oracle: o });
    }
    Ok(out)
}

fn c2_paths(runs: &[Propagation], times: &[f64]) -> Outcome {
    let labels = ["sigma_z", "n", "x", "y"];
    let mut worst = (0.0f64, "");
    let mut lines = Vec::new();
    for run in runs {
        let a = ObservableTrace::from_states(Engine::Analytic, run.spec.k, times, &run.analytic);
        let o = ObservableTrace::from_states(Engine::Oracle, run.spec.k, times, &run.oracle);
        let dev = a.max_deviation(&o);
        let m = dev.iter().cloned().fold(0.0, f64::max);
        if m >= worst.0 {
            worst = (m, run.name);
        }
        if m > 1e-8 {
            let which = labels[dev.iter().position(|&d| d == m).unwrap_or(0)];
            lines.push(format!("{} {which} {m:.3e}", run.name));
        }
    }
    Outcome {
        pass: lines.is_empty(),
        detail: if lines.is_empty() {
            format!("max deviation {:.3e} ({}), limit 1e-8", worst.0, worst.1)
        } else {
            format!("over limit: {}", lines.join(", "))
        },
    }
}

fn c3_eigenstructure() -> Outcome {
    let mut residual = 0.0f64;
    let mut rabi_gap = 0.0f64;
    let mut count = 0;
    for entry in registry() {
        let spec = &entry.spec;
        let k = spec.k;
        let h = match assemble(spec, N_MAX) {
            Ok(h) => h,
            Err(e) => return Outcome { pass: false, detail: e.to_string() },
        };
        let interior = N_MAX - 2 * k;
        for n in 0..=interior - k {
            let m = match build_manifold(spec, n) {
                Ok(m) => m,
                Err(e) => return Outcome { pass: false, detail: e.to_string() },
            };
            let pair = dressed_states(&m);
            for member in [pair.plus, pair.minus] {
                let psi = pair.embed(member, N_MAX).unwrap().to_vector();
                let h_psi = h.apply(&psi);
                let r: f64 = h_psi
                    .iter()
                    .zip(&psi)
                    .map(|(hp, p)| (hp - p * member.energy).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                residual = residual.max(r);
            }
            if k == 1 {
                // Omega = sqrt((w0 - w + Gcal)^2 + 4 g^2 f(n)^2 (n+1)) from the raw functions
                let x = n as f64;
                let (ff, gg, f) = (&spec.dispersive_fn, &spec.boson_fn, &spec.coupling_fn);
                let gcal = gg.eval(x).unwrap() + ff.eval(x).unwrap() - gg.eval(x + 1.0).unwrap()
                    + ff.eval(x + 1.0).unwrap();
                let det = spec.omega0 - spec.omega + gcal;
                let cpl = 2.0 * spec.g * f.eval(x).unwrap() * (x + 1.0).sqrt();
                let omega = (det * det + cpl * cpl).sqrt();
                rabi_gap = rabi_gap.max((m.e_plus - m.e_minus - omega).abs());
            }
            count += 1;
        }
    }
    Outcome {
        pass: residual <= 1e-10 && rabi_gap <= 1e-12,
        detail: format!(
            "{count} manifolds, max eigen residual {residual:.3e} (limit 1e-10), \
             k=1 |E+ - E- - Omega| {rabi_gap:.3e} (limit 1e-12)"
        ),
    }
}

fn random_poly(rng: &mut StdRng) -> NonlinearFn {
    let degree = rng.random_range(0..=6);
    NonlinearFn::poly((0..=degree).map(|_| rng.random_range(-1.0..=1.0)).collect())
}

fn c4_reconciliation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_c4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let k = rng.random_range(1..=3);
        let spec = ModelSpec {
            omega: 1.0,
            omega0: 1.0,
            g: 0.1,
            k,
            coupling_fn: NonlinearFn::one(),
            dispersive_fn: random_poly(&mut rng),
            boson_fn: random_poly(&mut rng),
        };
        for n in 0..30 {
            let label = Excitation::of_manifold(n, k);
            let (a, b) = match (aux_binomial(&spec, label), aux_two_point(&spec, label)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return Outcome { pass: false, detail: e.to_string() },
            };
            for (x, y) in [(a.common, b.common), (a.detuning, b.detuning)] {
                let rel = (x - y).abs() / x.abs().max(y.abs()).max(1.0);
                worst = worst.max(rel);
            }
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("100 pairs x 30 manifolds, max relative error {worst:.3e}, limit 1e-10"),
    }
}

fn c5_jc_closed_form() -> Outcome {
    let spec = ModelSpec::jaynes_cummings(1.0, 1.0, 0.1);
    let mut worst = 0.0f64;
    for n in 0..=20usize {
        let m = build_manifold(&spec, n).unwrap();
        let freq = 2.0 * spec.g * ((n + 1) as f64).sqrt();
        let period = 2.0 * PI / freq;
        for t in time_grid(period, 401) {
            let d = (analytic::sigma_z_fock(&m, t) - (freq * t).cos()).abs();
            worst = worst.max(d);
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("n <= 20 over one period, max error {worst:.3e}, limit 1e-12"),
    }
}

fn oracle_sigma_z(name: &str, times: &[f64]) -> Result<Vec<f64>, String> {
    let spec = lookup(name).map_err(|e| e.to_string())?.spec;
    let psi = coherent_state(Qubit::Ground, alpha(), N_MAX).map_err(|e| e.to_string())?;
    oracle::trace_oracle(&spec, &psi, times, &PropagationConfig::default())
        .map(|t| t.sigma_z())
        .map_err(|e| e.to_string())
}

fn window(sz: &[f64], times: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    sz.iter()
        .zip(times)
        .filter(|(_, &t)| t >= lo && t <= hi)
        .map(|(&s, _)| s)
        .collect()
}

fn c6_figures() -> Outcome {
    let dt = 0.1;
    let times = time_grid(220.0, 2201);
    let mut notes = Vec::new();
    let mut pass = true;

    // (a) collapse and revival in the JC model
    match oracle_sigma_z("jc", &times) {
        Ok(sz) => {
            let collapse = window(&sz, &times, 40.0, 120.0);
            let mean_abs = collapse.iter().map(|s| s.abs()).sum::<f64>() / collapse.len() as f64;
            let revival = window(&sz, &times, 150.0, 220.0)
                .iter()
                .map(|s| s.abs())
                .fold(0.0, f64::max);
            let ok = mean_abs < 0.1 && revival > 0.3;
            pass &= ok;
            notes.push(format!("(a) collapse mean|sz| {mean_abs:.4}, revival max|sz| {revival:.4}"));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("(a) {e}"));
        }
    }

    // (b) Kerr trace repeats with the lag that best matches it to itself
    match oracle_sigma_z("kerr-two-photon", &times) {
        Ok(sz) => {
            let n = sz.len();
            let min_lag = (1.0 / dt) as usize;
            let (diff, lag) = (min_lag..n / 2)
                .map(|lag| {
                    let d = (0..n - lag).map(|i| (sz[i] - sz[i + lag]).abs()).fold(0.0, f64::max);
                    (d, lag)
                })
                .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best });
            let swing = sz.iter().cloned().fold(f64::MIN, f64::max) - sz.iter().cloned().fold(f64::MAX, f64::min);
            let ok = diff < 5e-2 && swing > 10.0 * diff;
            pass &= ok;
            notes.push(format!(
                "(b) period {:.2}, max |sz(t) - sz(t+T)| {diff:.3e}, swing {swing:.3e}",
                lag as f64 * dt
            ));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("(b) {e}"));
        }
    }

    // (c) parity model: oscillation centre at the revival peak is negative
    match oracle_sigma_z("parity-deformed", &times) {
        Ok(sz) => {
            // one JC Rabi period at n = 9 is 2 pi / (2 g sqrt(10)), about 10
            let half = (5.0 / dt) as usize;
            let lo = (150.0 / dt) as usize;
            let hi = sz.len() - 1 - half;
            let local_mean = |i: usize| sz[i - half..=i + half].iter().sum::<f64>() / (2 * half + 1) as f64;
            let peak = (lo..=hi)
                .max_by(|&a, &b| {
                    let ea = (sz[a] - local_mean(a)).abs();
                    let eb = (sz[b] - local_mean(b)).abs();
                    ea.total_cmp(&eb)
                })
                .unwrap();
            let bias = local_mean(peak);
            let ok = bias < 0.0;
            pass &= ok;
            notes.push(format!("(c) revival peak t={:.1}, local mean sz {bias:+.4}", times[peak]));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("(c) {e}"));
        }
    }

    Outcome { pass, detail: notes.join("; ") }
}

fn c7_conservation(runs: &[Propagation], times: &[f64]) -> Outcome {
    let mut drift_n = 0.0f64;
    let mut drift_h = 0.0f64;
    let mut norm = 0.0f64;
    for run in runs {
        let h = assemble(&run.spec, N_MAX).unwrap();
        for (engine, states) in [(Engine::Analytic, &run.analytic), (Engine::Oracle, &run.oracle)] {
            let n_total = ObservableTrace::from_states(engine, run.spec.k, times, states).total_excitation();
            let e0 = h.energy(&states[0]);
            for (s, n) in states.iter().zip(&n_total) {
                drift_n = drift_n.max((n - n_total[0]).abs());
                drift_h = drift_h.max((h.energy(s) - e0).abs());
                norm = norm.max((s.total_probability() - 1.0).abs());
            }
        }
    }
    Outcome {
        pass: drift_n <= 1e-10 && drift_h <= 1e-10 && norm <= 1e-12,
        detail: format!(
            "max drift <N> {drift_n:.3e}, <H> {drift_h:.3e} (limit 1e-10); max |norm - 1| {norm:.3e} (limit 1e-12)"
        ),
    }
}

fn main() -> ExitCode {
    let mut all = true;

    let t = Instant::now();
    all &= report("C1", "algebra suite", t, c1_algebra());

    let times = time_grid(200.0, 2001);
    let t = Instant::now();
    let runs = propagate_all(&times);
    match &runs {
        Ok(runs) => {
            all &= report("C2", "path equivalence", t, c2_paths(runs, &times));
        }
        Err(e) => {
            all &= report("C2", "path equivalence", t, Outcome { pass: false, detail: e.clone() });
        }
    }

    let t = Instant::now();
    all &= report("C3", "eigenstructure", t, c3_eigenstructure());
    let t = Instant::now();
    all &= report("C4", "auxiliary reconciliation", t, c4_reconciliation());
    let t = Instant::now();
    all &= report("C5", "JC closed forms", t, c5_jc_closed_form());
    let t = Instant::now();
    all &= report("C6", "figure-level checks", t, c6_figures());

    let t = Instant::now();
    match &runs {
        Ok(runs) => all &= report("C7", "conservation", t, c7_conservation(runs, &times)),
        Err(e) => {
            all &= report("C7", "conservation", t, Outcome { pass: false, detail: e.clone() });
        }
    }

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
