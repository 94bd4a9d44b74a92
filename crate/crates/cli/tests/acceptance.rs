//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use qdarwin_cli::{cmd_figure, RunOptions};
use qdarwin_core::experiments::{builtin_figure, run_sweep, SweepRecord};
use qdarwin_core::qcore::C64;
use qdarwin_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn in_time(limit: Duration, elapsed: Duration, detail: String, ok: bool) -> Outcome {
    check(
        ok && elapsed < limit,
        format!("{detail}; {:.1}s (limit {:.0}s)", elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn commuting_limit() -> Outcome {
    let start = Instant::now();
    let gamma = 0.1;
    let grid = TimeGrid::default();
    let mut worst: f64 = 0.0;
    for n in [1usize, 4, 8] {
        let params = ModelParams::new(0.1, gamma, 0.0, n).map_err(err)?;
        let traj = evolve_trajectory(params, InitialScenario::CircleLeft, &grid.times(gamma)).map_err(err)?;
        for (t, psi) in traj.times.iter().zip(&traj.states) {
            let rho = psi.reduced(&["S"]).map_err(err)?;
            let want = 0.5 * (2.0 * gamma * t).cos().powi(n as i32).abs();
            worst = worst.max((rho.matrix()[(0, 1)].norm() - want).abs());
        }
    }
    let params = ModelParams::new(0.1, gamma, 0.0, 8).map_err(err)?;
    let psi = Evolver::new(params)
        .map_err(err)?
        .evolve(&initial_state(&InitialScenario::CircleLeft, 8).map_err(err)?, FRAC_PI_4 / gamma)
        .map_err(err)?;
    let chi = holevo_chi_of_state(&psi, &["E1"]).map_err(err)?.value;
    in_time(
        Duration::from_secs(10),
        start.elapsed(),
        format!("max coherence deviation {worst:.2e}, chi(S:E1) at pi/4 = {chi:.9}"),
        worst <= 1e-9 && (chi - 1.0).abs() <= 1e-6,
    )
}

fn redundancy_oracle() -> Outcome {
    let start = Instant::now();
    let cfg = RedundancyConfig::default();
    let grid = TimeGrid { points: 41, gamma_t_max: 2.0 * PI };
    let mut snapshots = 0;
    let mut mismatches = Vec::new();
    // 20 snapshots: (p, n) pairs below, sampled along each trajectory
    let plan: [(f64, usize, &[usize]); 6] = [
        (0.0, 2, &[5, 20, 33]),
        (0.0, 4, &[3, 5, 12, 28]),
        (0.5, 3, &[4, 17, 36]),
        (0.5, 4, &[6, 15, 25, 40]),
        (1.0, 1, &[9, 30]),
        (1.0, 4, &[2, 11, 23, 37]),
    ];
    for (p, n, idx) in plan {
        let params = ModelParams::new(0.1, 0.1, p, n).map_err(err)?;
        let traj = evolve_trajectory(params, InitialScenario::CircleLeft, &grid.times(0.1)).map_err(err)?;
        for &i in idx {
            let rho = traj.states[i].to_density();
            let fast = redundancy(&rho, &cfg).map_err(err)?;
            let brute = redundancy_brute_oracle(&rho, &cfg).map_err(err)?;
            if fast.value() != brute.value() || fast.defined != brute.defined {
                mismatches.push(format!("p={p} n={n} t#{i}"));
            }
            snapshots += 1;
        }
    }
    in_time(
        Duration::from_secs(60),
        start.elapsed(),
        format!("{snapshots} snapshots, mismatches: {mismatches:?}"),
        snapshots == 20 && mismatches.is_empty(),
    )
}

fn ginibre(rng: &mut ChaCha8Rng, layout: SubsystemLayout, rank: usize) -> DensityMatrix {
    let d = layout.dim();
    let g = CMatrix::from_fn(d, rank, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let m = &m / m.trace();
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(m, layout).unwrap()
}

fn two_qubits() -> SubsystemLayout {
    SubsystemLayout::qubits(&["S", "E1"]).unwrap()
}

/// Binary entropy of a 2×2 Hermitian PSD matrix from its trace and determinant.
fn h2x2(a: C64, b: C64, d: C64) -> f64 {
    let tr = a.re + d.re;
    let det = a.re * d.re - b.norm_sqr();
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    [tr / 2.0 + disc, tr / 2.0 - disc]
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum()
}

/// χ for one basis, conditional 2×2 blocks read off the 4×4 matrix directly.
fn chi_basis(rho: &CMatrix, theta: f64, phi: f64) -> f64 {
    let e = C64::from_polar(1.0, phi);
    let kets = [
        [C64::new(theta.cos(), 0.0), e * theta.sin()],
        [C64::new(theta.sin(), 0.0), -e * theta.cos()],
    ];
    let block = |s: usize, t: usize, i: usize, j: usize| rho[(2 * s + i, 2 * t + j)];
    let rf = |i, j| block(0, 0, i, j) + block(1, 1, i, j);
    let s_f = h2x2(rf(0, 0), rf(0, 1), rf(1, 1));
    let mut avg = 0.0;
    for k in kets {
        let c = |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..2 {
                for t in 0..2 {
                    acc += k[s].conj() * k[t] * block(s, t, i, j);
                }
            }
            acc
        };
        let (a, b, d) = (c(0, 0), c(0, 1), c(1, 1));
        let p = a.re + d.re;
        if p > 1e-14 {
            avg += p * h2x2(a / p, b / p, d / p);
        }
    }
    s_f - avg
}

fn grid_oracle(rho: &CMatrix) -> f64 {
    let (nt, np) = (200, 400);
    let mut best = (f64::MIN, 0.0, 0.0);
    for i in 0..nt {
        let t = PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let p = 2.0 * PI * j as f64 / np as f64;
            let v = chi_basis(rho, t, p);
            if v > best.0 {
                best = (v, t, p);
            }
        }
    }
    let mut step = PI / nt as f64;
    while step > 1e-11 {
        let mut moved = false;
        for (dt, dp) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 2.0), (0.0, -2.0)] {
            let (t, p) = (best.1 + dt * step, best.2 + dp * step);
            let v = chi_basis(rho, t, p);
            if v > best.0 {
                best = (v, t, p);
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    best.0
}

fn optimizer_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let states: Vec<DensityMatrix> = (0..50).map(|k| ginibre(&mut rng, two_qubits(), 1 + k % 4)).collect();
    let start = Instant::now();
    let ours: Vec<f64> = states.iter().map(|r| holevo_chi(r).unwrap().value).collect();
    let elapsed = start.elapsed();
    let worst = states
        .iter()
        .zip(&ours)
        .map(|(r, v)| (v - grid_oracle(r.matrix())).abs())
        .fold(0.0, f64::max);
    in_time(
        Duration::from_secs(30),
        elapsed,
        format!("50 states, max |chi - grid| = {worst:.2e}"),
        worst <= 1e-5,
    )
}

fn information_hierarchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut corpus: Vec<DensityMatrix> = (0..30).map(|k| ginibre(&mut rng, two_qubits(), 1 + k % 4)).collect();
    for &p in &[0.0, 0.3, 0.7, 1.0] {
        for &gt in &[0.2, 0.8, 1.6, 3.0, 5.0] {
            let params = ModelParams::new(0.1, 0.1, p, 4).map_err(err)?;
            let psi = Evolver::new(params)
                .map_err(err)?
                .evolve(&initial_state(&InitialScenario::CircleLeft, 4).map_err(err)?, gt / 0.1)
                .map_err(err)?;
            corpus.push(psi.reduced(&["S", "E1"]).map_err(err)?);
        }
    }
    let mut violations = 0;
    let mut worst_mix: f64 = 0.0;
    for rho in &corpus {
        let acc = accessible_mi_two_sided(rho).map_err(err)?.value;
        let chi = holevo_chi(rho).map_err(err)?.value;
        let qmi = quantum_mi(rho).map_err(err)?;
        if acc > chi + 1e-6 || chi > qmi + 1e-6 {
            violations += 1;
        }
    }
    for rho in corpus.iter().take(5) {
        let rho_f = partial_trace(rho, &["E1"]).map_err(err)?;
        for _ in 0..100 {
            let basis = MeasurementBasis::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)).map_err(err)?;
            let mix = condition_on_system(rho, &basis).map_err(err)?.mixture().ok_or("empty mixture")?;
            worst_mix = worst_mix.max((mix - rho_f.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    check(
        violations == 0 && worst_mix <= 1e-10,
        format!(
            "{} states, {violations} hierarchy violations, mixture deviation {worst_mix:.2e} over 500 bases",
            corpus.len()
        ),
    )
}

fn peak_normalized(records: &[SweepRecord], p: f64) -> f64 {
    records
        .iter()
        .filter(|r| r.p == p)
        .filter_map(|r| r.chi_e1_normalized)
        .fold(f64::MIN, f64::max)
}

fn fig1() -> Outcome {
    let start = Instant::now();
    let records = run_sweep(&builtin_figure("fig1").map_err(err)?).map_err(err)?;
    let ps = [0.0, 0.25, 0.5, 0.75, 1.0];
    let peaks: Vec<f64> = ps.iter().map(|&p| peak_normalized(&records, p)).collect();
    let decreasing = peaks.windows(2).all(|w| w[1] < w[0]);
    in_time(
        Duration::from_secs(120),
        start.elapsed(),
        format!("peaks {:?}", peaks.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()),
        peaks[0] >= 0.99 && decreasing,
    )
}

fn nonincreasing_red(tag: &str, key: impl Fn(&SweepRecord) -> f64) -> Result<(bool, Vec<String>, Duration), String> {
    let start = Instant::now();
    let mut records = run_sweep(&builtin_figure(tag).map_err(err)?).map_err(err)?;
    records.sort_by(|a, b| key(a).total_cmp(&key(b)));
    let reds: Vec<Option<usize>> = records.iter().map(|r| r.redundancy).collect();
    let ok = reds.iter().all(Option::is_some) && reds.windows(2).all(|w| w[1] <= w[0]);
    let shown = records
        .iter()
        .map(|r| format!("{}:{}", key(r), r.redundancy.map_or("-".into(), |v| v.to_string())))
        .collect();
    Ok((ok, shown, start.elapsed()))
}

fn fig2_fig4() -> Outcome {
    let (ok2, red2, t2) = nonincreasing_red("fig2", |r| r.p)?;
    let (ok4, red4, t4) = nonincreasing_red("fig4", |r| r.omega_over_gamma)?;
    let limit = Duration::from_secs(300);
    check(
        ok2 && ok4 && t2 < limit && t4 < limit,
        format!(
            "Red(p) {red2:?} in {:.1}s; Red(omega/gamma) {red4:?} in {:.1}s",
            t2.as_secs_f64(),
            t4.as_secs_f64()
        ),
    )
}

fn fig5() -> Outcome {
    let start = Instant::now();
    let mut at_zero = builtin_figure("fig5").map_err(err)?;
    for panel in &mut at_zero.panels {
        panel.p = vec![0.0];
    }
    let zero = run_sweep(&at_zero).map_err(err)?;
    let worst_zero = zero
        .iter()
        .map(|r| r.pointer_fidelity.map_or(f64::INFINITY, |f| (f - 1.0).abs()))
        .fold(0.0, f64::max);
    let mut at_one = builtin_figure("fig5").map_err(err)?;
    at_one.panels.retain(|p| p.label == "c");
    at_one.panels[0].p = vec![1.0];
    at_one.panels[0].omega = vec![0.1 * 0.1, 10.0 * 0.1];
    let one = run_sweep(&at_one).map_err(err)?;
    let f_low = one[0].pointer_fidelity.ok_or("no pointer basis at omega/gamma = 0.1")?;
    let f_high = one[1].pointer_fidelity.ok_or("no pointer basis at omega/gamma = 10")?;
    in_time(
        Duration::from_secs(300),
        start.elapsed(),
        format!(
            "p=0: {} points, max |F - 1| = {worst_zero:.2e}; p=1: F(0.1) = {f_low:.6}, F(10) = {f_high:.6}",
            zero.len()
        ),
        zero.len() == 18 && worst_zero <= 1e-6 && f_low >= f_high,
    )
}

fn sbs_fixed_point() -> Outcome {
    let env = |bit, label: &str| StateVector::basis(bit, SubsystemLayout::qubits(&[label]).unwrap()).unwrap();
    let (t, ph) = (0.35f64, C64::from_polar(1.0, 2.1));
    let phi0 = StateVector::qubit(C64::new(t.cos(), 0.0), ph * t.sin(), "S").map_err(err)?;
    let phi1 = StateVector::qubit(C64::new(t.sin(), 0.0), -ph * t.cos(), "S").map_err(err)?;
    let branch = |s: &StateVector, bit| {
        s.tensor(&env(bit, "E1"))
            .and_then(|x| x.tensor(&env(bit, "E2")))
            .and_then(|x| x.tensor(&env(bit, "E3")))
            .map(|x| x.to_density())
    };
    let rho = branch(&phi0, 0).map_err(err)?.mix(&branch(&phi1, 1).map_err(err)?, 0.4).map_err(err)?;
    let rep = sbs_decompose(&rho, &[phi0.clone(), phi1.clone()], 1).map_err(err)?;
    let pb = extract_pointer_basis(&rho).map_err(err)?;
    let f = |a: &StateVector, b: &StateVector| fidelity_pure(a, b).unwrap();
    let direct = f(&pb.states[0], &phi0).min(f(&pb.states[1], &phi1));
    let swapped = f(&pb.states[0], &phi1).min(f(&pb.states[1], &phi0));
    let recovered = direct.max(swapped);
    check(
        rep.reconstruction_error < 1e-10 && recovered >= 1.0 - 1e-6,
        format!(
            "reconstruction error {:.2e}, basis fidelity {recovered:.9}",
            rep.reconstruction_error
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let run = |sub: &str, workers| {
        let opts = RunOptions {
            out_dir: dir.path().join(sub),
            workers: Some(workers),
            quiet: true,
            ..RunOptions::default()
        };
        cmd_figure("fig1", &opts)
            .map_err(err)
            .and_then(|o| std::fs::read(o.table).map_err(err))
    };
    let a = run("a", 1)?;
    let b = run("b", 1)?;
    let c = run("c", 3)?;
    check(
        a == b && a == c,
        format!("fig1 csv {} bytes; repeat identical: {}; 1 vs 3 workers identical: {}", a.len(), a == b, a == c),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("commuting-limit oracle", commuting_limit),
        ("redundancy oracle equivalence", redundancy_oracle),
        ("optimizer correctness", optimizer_correctness),
        ("information hierarchy", information_hierarchy),
        ("fig1 encoding worsens with p", fig1),
        ("fig2/fig4 redundancy nonincreasing", fig2_fig4),
        ("fig5 commuting endpoint", fig5),
        ("sbs fixed point", sbs_fixed_point),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
