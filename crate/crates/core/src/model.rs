//! The spin-star model: a system qubit driven by
//! `H_S = ω (p σx + (1 − p) σz)` and coupled to `n` environment qubits through
//! `H_I = Σ_i γ σz^S ⊗ σx^{E_i}`. Environment free evolution is dropped
//! (interaction picture), ħ = 1.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{Error, Result};
use crate::qcore::{herm_eig, pauli, CMatrix, CVector, HermitianEig, StateVector, SubsystemLayout, C64};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// System frequency ω.
    pub omega: f64,
    /// System-environment coupling γ.
    pub gamma: f64,
    /// Non-commutativity weight p ∈ [0, 1].
    pub p: f64,
    /// Number of environment qubits.
    pub n: usize,
}

impl ModelParams {
    pub fn new(omega: f64, gamma: f64, p: f64, n: usize) -> Result<Self> {
        let params = Self { omega, gamma, p, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::param("omega", "must be finite and > 0"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::param("gamma", "must be finite and > 0"));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::param("p", "must lie in [0, 1]"));
        }
        if self.n == 0 {
            return Err(Error::param("n", "need at least one environment qubit"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << (self.n + 1)
    }

    pub fn layout(&self) -> SubsystemLayout {
        SubsystemLayout::system_environment(self.n)
    }
}

/// Initial system state; the environment always starts in |0⟩^⊗n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialScenario {
    /// √x₀|0⟩ + i√(1 − x₀)|1⟩.
    Amplitude { x0: f64 },
    /// (|0⟩ + φ|1⟩)/√2 with |φ| = 1.
    Phase { phi: C64 },
    /// σy eigenstate (|0⟩ + i|1⟩)/√2.
    CircleLeft,
}

impl InitialScenario {
    /// Phase scenario with φ = e^{i·angle}.
    pub fn phase_angle(angle: f64) -> Self {
        Self::Phase {
            phi: C64::from_polar(1.0, angle),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Amplitude { x0 } if !(0.0..=1.0).contains(&x0) => {
                Err(Error::param("x0", "must lie in [0, 1]"))
            }
            Self::Phase { phi } if (phi.norm() - 1.0).abs() > tolerances::UNIT_PHASE => {
                Err(Error::param("phi", "must have unit modulus"))
            }
            _ => Ok(()),
        }
    }

    pub fn system_amplitudes(&self) -> [C64; 2] {
        match *self {
            Self::Amplitude { x0 } => [C64::new(x0.sqrt(), 0.0), C64::new(0.0, (1.0 - x0).sqrt())],
            Self::Phase { phi } => [C64::new(FRAC_1_SQRT_2, 0.0), phi * FRAC_1_SQRT_2],
            Self::CircleLeft => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Amplitude { .. } => "amplitude",
            Self::Phase { .. } => "phase",
            Self::CircleLeft => "circle-left",
        }
    }

    /// x₀ for the amplitude family, arg φ in [0, 2π) for the phase family.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Self::Amplitude { x0 } => Some(x0),
            Self::Phase { phi } => Some(phi.arg().rem_euclid(TAU)),
            Self::CircleLeft => None,
        }
    }
}

/// 2x2 system Hamiltonian ω(pσx + (1 − p)σz).
pub fn system_hamiltonian(params: &ModelParams) -> CMatrix {
    (pauli::x() * C64::new(params.p, 0.0) + pauli::z() * C64::new(1.0 - params.p, 0.0))
        * C64::new(params.omega, 0.0)
}

/// Adds `h_s ⊗ I_E` into `h`.
fn add_system_term(h: &mut CMatrix, h_s: &CMatrix, n: usize) {
    let env_dim = 1usize << n;
    for s in 0..2 {
        for s2 in 0..2 {
            let v = h_s[(s, s2)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for e in 0..env_dim {
                h[(s * env_dim + e, s2 * env_dim + e)] += v;
            }
        }
    }
}

/// Σ_i γ σz^S ⊗ σx^{E_i} over the full space.
pub fn interaction_hamiltonian(gamma: f64, n: usize) -> CMatrix {
    let dim = 1usize << (n + 1);
    let mut h = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let sign = if (b >> n) & 1 == 0 { 1.0 } else { -1.0 };
        for i in 1..=n {
            let flipped = b ^ (1 << (n - i));
            h[(flipped, b)] += C64::new(sign * gamma, 0.0);
        }
    }
    h
}

/// H_S ⊗ I_E alone, over the full space.
pub fn embedded_system_hamiltonian(params: &ModelParams) -> CMatrix {
    let mut h = CMatrix::zeros(params.dim(), params.dim());
    add_system_term(&mut h, &system_hamiltonian(params), params.n);
    h
}

/// Total Hamiltonian H_S ⊗ I_E + H_I over (S, E1, …, En).
pub fn build_hamiltonian(params: &ModelParams) -> CMatrix {
    let mut h = interaction_hamiltonian(params.gamma, params.n);
    add_system_term(&mut h, &system_hamiltonian(params), params.n);
    h
}

/// Frobenius norm of [H_S ⊗ I_E, H_I].
pub fn commutator_norm(params: &ModelParams) -> f64 {
    let hs = embedded_system_hamiltonian(params);
    let hi = interaction_hamiltonian(params.gamma, params.n);
    (&hs * &hi - &hi * &hs).norm()
}

/// System state for `scenario` tensored with |0⟩^⊗n. `n = 0` gives the bare system qubit.
pub fn initial_state(scenario: &InitialScenario, n: usize) -> Result<StateVector> {
    scenario.validate()?;
    let [a0, a1] = scenario.system_amplitudes();
    let env_dim = 1usize << n;
    let mut amps = CVector::zeros(2 * env_dim);
    amps[0] = a0;
    amps[env_dim] = a1;
    StateVector::normalized(amps, SubsystemLayout::system_environment(n))
}

/// Uniform grid in the dimensionless time γt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub points: usize,
    pub gamma_t_max: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            points: 400,
            gamma_t_max: TAU,
        }
    }
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::param("time_grid.points", "time grid is empty"));
        }
        if !(self.gamma_t_max.is_finite() && self.gamma_t_max > 0.0) {
            return Err(Error::param("time_grid.gamma_t_max", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Values of γt, endpoints included.
    pub fn gamma_t(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![0.0];
        }
        let step = self.gamma_t_max / (self.points - 1) as f64;
        (0..self.points).map(|k| k as f64 * step).collect()
    }

    /// Physical times t = (γt)/γ.
    pub fn times(&self, gamma: f64) -> Vec<f64> {
        self.gamma_t().into_iter().map(|gt| gt / gamma).collect()
    }

    pub fn id(&self) -> String {
        format!("gt0-{:.6}x{}", self.gamma_t_max, self.points)
    }
}

/// Propagates states under a fixed model using one eigendecomposition of H.
#[derive(Debug, Clone)]
pub struct Evolver {
    params: ModelParams,
    eig: HermitianEig,
}

impl Evolver {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let eig = herm_eig(&build_hamiltonian(&params))?;
        Ok(Self { params, eig })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn eigen(&self) -> &HermitianEig {
        &self.eig
    }

    fn evolve_coefficients(&self, coeffs: &CVector, t: f64) -> CVector {
        let phased = CVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(&self.eig.eigenvalues)
                .map(|(c, &l)| c * C64::from_polar(1.0, -l * t)),
        );
        &self.eig.eigenvectors * phased
    }

    /// exp(−iHt)|ψ⟩.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.params.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.params.dim(),
                found: psi.dim(),
            });
        }
        let coeffs = self.eig.eigenvectors.adjoint() * psi.amplitudes();
        Ok(StateVector::from_parts_unchecked(
            self.evolve_coefficients(&coeffs, t),
            psi.layout().clone(),
        ))
    }

    pub fn trajectory(&self, scenario: InitialScenario, times: &[f64]) -> Result<Trajectory> {
        check_times(times)?;
        let psi0 = initial_state(&scenario, self.params.n)?;
        let coeffs = self.eig.eigenvectors.adjoint() * psi0.amplitudes();
        let layout = psi0.layout().clone();
        let states = times
            .iter()
            .map(|&t| StateVector::from_parts_unchecked(self.evolve_coefficients(&coeffs, t), layout.clone()))
            .collect();
        Ok(Trajectory {
            times: times.to_vec(),
            states,
            params: self.params,
            scenario,
        })
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::param("times", "time grid is empty"));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::param("times", "times must be finite"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("times", "times must be strictly increasing"));
    }
    Ok(())
}

/// Joint pure states |Ψ(t_k)⟩ along a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub params: ModelParams,
    pub scenario: InitialScenario,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

pub fn evolve_trajectory(
    params: ModelParams,
    scenario: InitialScenario,
    times: &[f64],
) -> Result<Trajectory> {
    check_times(times)?;
    scenario.validate()?;
    Evolver::new(params)?.trajectory(scenario, times)
}
