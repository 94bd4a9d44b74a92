//! Built-in verification suite: closed-form oracles, brute-force redundancy,
//! optimizer-versus-grid and module invariants, each reported pass/fail.

use std::f64::consts::{FRAC_PI_4, PI};

use qdarwin_core::qcore::{entropy_in_base, C64};
use qdarwin_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    /// Seed for the random probe states.
    pub seed: u64,
    /// Logarithm base used by the entropy checks. Anything but 2 is a
    /// deliberate perturbation and must make the suite fail.
    pub entropy_base: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 0, entropy_base: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn render(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {:width$}  {}\n", c.name, c.detail));
        }
        let failed = self.failures().len();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

type Check = Result<String, String>;

fn within(what: &str, got: f64, want: f64, tol: f64) -> Check {
    if (got - want).abs() <= tol {
        Ok(format!("{what} = {got:.12}"))
    } else {
        Err(format!("{what} = {got:.12}, expected {want:.12} within {tol:e}"))
    }
}

fn ok_or<E: std::fmt::Display>(r: Result<f64, E>) -> Result<f64, String> {
    r.map_err(|e| e.to_string())
}

fn ginibre(rng: &mut ChaCha8Rng, layout: SubsystemLayout, rank: usize) -> DensityMatrix {
    let d = layout.dim();
    let g = CMatrix::from_fn(d, rank, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let m = &m / m.trace();
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(m, layout).expect("ginibre states are valid")
}

fn two_qubits() -> SubsystemLayout {
    SubsystemLayout::qubits(&["S", "E1"]).expect("labels")
}

fn model_state(p: f64, n: usize, gamma_t: f64) -> StateVector {
    let gamma = 0.1;
    let params = ModelParams::new(0.1, gamma, p, n).expect("params");
    Evolver::new(params)
        .expect("evolver")
        .evolve(&initial_state(&InitialScenario::CircleLeft, n).expect("state"), gamma_t / gamma)
        .expect("evolve")
}

fn entropy_constant(base: f64) -> Check {
    let rho = DensityMatrix::maximally_mixed(SubsystemLayout::qubits(&["A"]).map_err(|e| e.to_string())?);
    within("S(I/2)", entropy_in_base(&rho, base), 1.0, 1e-12)
}

fn bell_mutual_information(base: f64) -> Check {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = CVector::from_vec(vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]);
    let psi = StateVector::new(amps, two_qubits()).map_err(|e| e.to_string())?;
    let a = psi.reduced(&["S"]).map_err(|e| e.to_string())?;
    let b = psi.reduced(&["E1"]).map_err(|e| e.to_string())?;
    let mi = entropy_in_base(&a, base) + entropy_in_base(&b, base) - entropy_in_base(&psi.to_density(), base);
    within("I(S:E1) of a Bell pair", mi, 2.0, 1e-10)
}

fn dephasing_coherence() -> Check {
    let gamma = 0.1;
    let grid = TimeGrid::default();
    let mut worst: f64 = 0.0;
    for n in [1usize, 4, 8] {
        let params = ModelParams::new(0.1, gamma, 0.0, n).map_err(|e| e.to_string())?;
        let traj = evolve_trajectory(params, InitialScenario::CircleLeft, &grid.times(gamma))
            .map_err(|e| e.to_string())?;
        for (t, psi) in traj.times.iter().zip(&traj.states) {
            let rho = psi.reduced(&["S"]).map_err(|e| e.to_string())?;
            let want = 0.5 * (2.0 * gamma * t).cos().powi(n as i32).abs();
            worst = worst.max((rho.matrix()[(0, 1)].norm() - want).abs());
        }
    }
    if worst <= 1e-9 {
        Ok(format!("max deviation {worst:.2e} over n = 1, 4, 8"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-9"))
    }
}

fn dephasing_chi() -> Check {
    let psi = model_state(0.0, 8, FRAC_PI_4);
    let chi = ok_or(holevo_chi_of_state(&psi, &["E1"]).map(|r| r.value))?;
    within("chi(S:E1) at gamma t = pi/4", chi, 1.0, 1e-6)
}

fn redundancy_oracle(rng: &mut ChaCha8Rng) -> Check {
    let cfg = RedundancyConfig::default();
    let mut compared = 0;
    for &p in &[0.0, 0.5, 1.0] {
        for n in 1..=4 {
            let gt = rng.gen_range(0.0..2.0 * PI);
            let psi = model_state(p, n, gt);
            let fast = redundancy_of_state(&psi, &cfg).map_err(|e| e.to_string())?;
            let brute = redundancy_brute_oracle(&psi.to_density(), &cfg).map_err(|e| e.to_string())?;
            if fast.value() != brute.value() {
                return Err(format!(
                    "p = {p}, n = {n}, gamma t = {gt:.4}: contiguous {:?} vs exhaustive {:?}",
                    fast.value(),
                    brute.value()
                ));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} snapshots agree"))
}

/// Plain grid over the whole sphere with shrinking coordinate refinement.
fn grid_chi(rho: &DensityMatrix) -> Result<f64, String> {
    let rho_f = partial_trace(rho, &["E1"]).map_err(|e| e.to_string())?;
    let s_f = entropy(&rho_f);
    let f = |theta: f64, phi: f64| -> f64 {
        let theta = theta.clamp(0.0, PI);
        let phi = phi.rem_euclid(2.0 * PI);
        let basis = MeasurementBasis::new(theta, phi).expect("in range");
        let cond = condition_on_system(rho, &basis).expect("two qubits");
        let avg: f64 = (0..2)
            .filter_map(|a| cond.states[a].as_ref().map(|s| cond.probs[a] * entropy(s)))
            .sum();
        s_f - avg
    };
    let (nt, np) = (100, 200);
    let mut best = (f64::MIN, 0.0, 0.0);
    for i in 0..nt {
        let t = PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let p = 2.0 * PI * j as f64 / np as f64;
            let v = f(t, p);
            if v > best.0 {
                best = (v, t, p);
            }
        }
    }
    let mut step = PI / nt as f64;
    while step > 1e-10 {
        let mut moved = false;
        for (dt, dp) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 2.0), (0.0, -2.0)] {
            let (t, p) = (best.1 + dt * step, best.2 + dp * step);
            let v = f(t, p);
            if v > best.0 {
                best = (v, t, p);
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    Ok(best.0)
}

fn optimizer_vs_grid(rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..5 {
        let rho = ginibre(rng, two_qubits(), 1 + k % 4);
        let ours = ok_or(holevo_chi(&rho).map(|r| r.value))?;
        worst = worst.max((ours - grid_chi(&rho)?).abs());
    }
    if worst <= 1e-5 {
        Ok(format!("max |chi - grid| = {worst:.2e} on 5 states"))
    } else {
        Err(format!("max |chi - grid| = {worst:.2e} exceeds 1e-5"))
    }
}

fn information_hierarchy(rng: &mut ChaCha8Rng) -> Check {
    for k in 0..10 {
        let rho = ginibre(rng, two_qubits(), 1 + k % 4);
        let acc = accessible_mi_two_sided(&rho).map_err(|e| e.to_string())?.value;
        let chi = ok_or(holevo_chi(&rho).map(|r| r.value))?;
        let qmi = ok_or(quantum_mi(&rho))?;
        if acc > chi + 1e-6 || chi > qmi + 1e-6 {
            return Err(format!("state {k}: I_acc = {acc:.8}, chi = {chi:.8}, I = {qmi:.8}"));
        }
    }
    Ok("I_acc <= chi <= I on 10 states".into())
}

fn mixture_identity(rng: &mut ChaCha8Rng) -> Check {
    let rho = ginibre(rng, SubsystemLayout::system_environment(2), 3);
    let rho_f = partial_trace(&rho, &["E1", "E2"]).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let basis = MeasurementBasis::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI))
            .map_err(|e| e.to_string())?;
        let cond = condition_on_system(&rho, &basis).map_err(|e| e.to_string())?;
        let mix = cond.mixture().ok_or("no outcome had weight")?;
        worst = worst.max((mix - rho_f.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    if worst <= 1e-10 {
        Ok(format!("max deviation {worst:.2e} on 100 bases"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-10"))
    }
}

fn norm_preservation() -> Check {
    let params = ModelParams::new(0.1, 0.1, 0.5, 4).map_err(|e| e.to_string())?;
    let traj = evolve_trajectory(params, InitialScenario::CircleLeft, &TimeGrid::default().times(0.1))
        .map_err(|e| e.to_string())?;
    let worst = traj.states.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
    if worst <= 1e-10 {
        Ok(format!("max |norm - 1| = {worst:.2e}"))
    } else {
        Err(format!("max |norm - 1| = {worst:.2e}"))
    }
}

fn permutation_symmetry() -> Check {
    let psi = model_state(0.7, 4, 1.1);
    let a = ok_or(holevo_chi_of_state(&psi, &["E1"]).map(|r| r.value))?;
    let b = ok_or(holevo_chi_of_state(&psi, &["E4"]).map(|r| r.value))?;
    within("chi(S:E4)", b, a, 1e-7)
}

fn monotone_nesting() -> Check {
    let psi = model_state(0.4, 4, 0.9);
    let mut prev = 0.0;
    let labels = ["E1", "E2", "E3", "E4"];
    for k in 1..=4 {
        let chi = ok_or(holevo_chi_of_state(&psi, &labels[..k]).map(|r| r.value))?;
        if chi + 1e-6 < prev {
            return Err(format!("chi drops from {prev:.8} to {chi:.8} at {k} qubits"));
        }
        prev = chi;
    }
    Ok("chi nondecreasing over nested fractions".into())
}

fn sbs_fixed_point() -> Check {
    let e = |bit, label: &str| {
        StateVector::basis(bit, SubsystemLayout::qubits(&[label]).expect("label")).expect("basis")
    };
    let (t, ph) = (0.3f64, C64::from_polar(1.0, 1.2));
    let phi0 = StateVector::qubit(C64::new(t.cos(), 0.0), ph * t.sin(), "S").map_err(|e| e.to_string())?;
    let phi1 = StateVector::qubit(C64::new(t.sin(), 0.0), -ph * t.cos(), "S").map_err(|e| e.to_string())?;
    let branch = |s: &StateVector, bit| {
        s.tensor(&e(bit, "E1")).and_then(|x| x.tensor(&e(bit, "E2"))).map(|x| x.to_density())
    };
    let rho = branch(&phi0, 0)
        .and_then(|a| a.mix(&branch(&phi1, 1)?, 0.35))
        .map_err(|e| e.to_string())?;
    let rep = sbs_decompose(&rho, &[phi0, phi1], 1).map_err(|e| e.to_string())?;
    if rep.reconstruction_error < 1e-10 {
        Ok(format!("reconstruction error {:.2e}", rep.reconstruction_error))
    } else {
        Err(format!("reconstruction error {:.2e}", rep.reconstruction_error))
    }
}

/// Runs every check. The report depends only on `opts`.
pub fn cmd_selftest(opts: &SelftestOptions) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let base = opts.entropy_base;
    let mut checks = Vec::new();
    let mut record = |name: &'static str, outcome: Check| {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(CheckResult { name, passed, detail });
    };
    record("entropy-constant", entropy_constant(base));
    record("bell-mutual-information", bell_mutual_information(base));
    record("dephasing-coherence", dephasing_coherence());
    record("dephasing-chi", dephasing_chi());
    record("redundancy-oracle", redundancy_oracle(&mut rng));
    record("optimizer-vs-grid", optimizer_vs_grid(&mut rng));
    record("information-hierarchy", information_hierarchy(&mut rng));
    record("mixture-identity", mixture_identity(&mut rng));
    record("norm-preservation", norm_preservation());
    record("permutation-symmetry", permutation_symmetry());
    record("monotone-nesting", monotone_nesting());
    record("sbs-fixed-point", sbs_fixed_point());
    SelftestReport { checks }
}
