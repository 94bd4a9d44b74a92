//! Spectrum-broadcast structure: casting ρ_SE as Σ_i p_i |ψ_i⟩⟨ψ_i| ⊗_j R_i^j
//! and extracting the system basis {|ψ_i⟩} the environment reads out.

use crate::error::{Error, Result};
use crate::infotheory::{chi_of_state_value, holevo_chi, BranchBlocks, MeasurementBasis};
use crate::qcore::{
    entropy, fidelity_pure, partial_trace, trace_distance, uhlmann_fidelity, CMatrix, CVector,
    DensityMatrix, StateVector, SubsystemLayout, C64,
};
use crate::redundancy::contiguous_partition;
use crate::tolerances;

/// Pointer states read out by the environment, |φ⁰⟩ being the one closer to |0⟩.
#[derive(Debug, Clone)]
pub struct PointerBasis {
    /// (|φ⁰⟩, |φ¹⟩), each with its first nonzero amplitude real and positive.
    pub states: [StateVector; 2],
    /// The system measurement whose `+` outcome is |φ⁰⟩.
    pub basis: MeasurementBasis,
    /// χ(S:E1) at the extracting measurement, bits.
    pub chi: f64,
    /// Largest angle (rad) between the E1 optimum and the optimum of any other
    /// single-qubit fraction; zero for permutation-symmetric states.
    pub fraction_argmax_spread: f64,
}

fn fix_phase(k: [C64; 2]) -> [C64; 2] {
    let lead = if k[0].norm() > 1e-15 { k[0] } else { k[1] };
    let w = lead.conj() / lead.norm();
    [k[0] * w, k[1] * w]
}

fn system_ket(k: [C64; 2]) -> StateVector {
    StateVector::from_parts_unchecked(
        CVector::from_vec(k.to_vec()),
        SubsystemLayout::qubits(&["S"]).expect("single label"),
    )
}

fn axis_angle(a: &MeasurementBasis, b: &MeasurementBasis) -> f64 {
    let (u, v) = (a.bloch_vector(), b.bloch_vector());
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    dot.abs().min(1.0).acos()
}

fn labelled_basis(basis: MeasurementBasis, chi: f64, spread: f64) -> PointerBasis {
    let [plus, minus] = basis.kets();
    // canonical bases have θ ≤ π/2, so the `+` ket is never farther from |0⟩;
    // at θ = π/2 both are equidistant and `+` is kept
    let (first, second) = if plus[0].norm_sqr() >= minus[0].norm_sqr() {
        (plus, minus)
    } else {
        (minus, plus)
    };
    PointerBasis {
        states: [system_ket(fix_phase(first)), system_ket(fix_phase(second))],
        basis,
        chi,
        fraction_argmax_spread: spread,
    }
}

/// Pointer basis of ρ_SE: the system measurement maximising χ(S:E1).
///
/// The single-qubit fraction defines the basis because, for a pure joint
/// state, every system measurement leaves the whole environment in a pure
/// conditional state and χ(S:E) is flat.
pub fn extract_pointer_basis(rho_se: &DensityMatrix) -> Result<PointerBasis> {
    let labels = rho_se.layout().labels().to_vec();
    if labels.len() < 2 {
        return Err(Error::Layout("need at least one environment factor".into()));
    }
    let s = entropy(&partial_trace(rho_se, &labels[..1])?);
    if s < tolerances::MIN_ENTROPY {
        return Err(Error::NoPointerBasis { entropy: s });
    }
    let per_fraction = (1..labels.len())
        .map(|j| holevo_chi(&partial_trace(rho_se, &[labels[0].as_str(), labels[j].as_str()])?))
        .collect::<Result<Vec<_>>>()?;
    let spread = per_fraction
        .iter()
        .map(|h| axis_angle(&per_fraction[0].argmax_basis, &h.argmax_basis))
        .fold(0.0, f64::max);
    Ok(labelled_basis(per_fraction[0].argmax_basis, per_fraction[0].value, spread))
}

/// [`extract_pointer_basis`] for a pure joint state.
pub fn extract_pointer_basis_of_state(psi: &StateVector) -> Result<PointerBasis> {
    let n = psi.layout().len();
    if n < 2 {
        return Err(Error::Layout("need at least one environment factor".into()));
    }
    let s = entropy(&psi.reduced(&psi.layout().labels()[..1])?);
    if s < tolerances::MIN_ENTROPY {
        return Err(Error::NoPointerBasis { entropy: s });
    }
    let per_fraction: Vec<(f64, MeasurementBasis)> =
        (1..n).map(|j| chi_of_state_value(psi, &[j])).collect();
    let spread = per_fraction
        .iter()
        .map(|(_, b)| axis_angle(&per_fraction[0].1, b))
        .fold(0.0, f64::max);
    Ok(labelled_basis(per_fraction[0].1, per_fraction[0].0, spread))
}

/// |⟨φ⁰|0⟩|² for the extracted pointer basis.
pub fn pointer_fidelity(rho_se: &DensityMatrix) -> Result<f64> {
    let pb = extract_pointer_basis(rho_se)?;
    fidelity_pure(&pb.states[0], &ket_zero())
}

pub fn pointer_fidelity_of_state(psi: &StateVector) -> Result<f64> {
    let pb = extract_pointer_basis_of_state(psi)?;
    fidelity_pure(&pb.states[0], &ket_zero())
}

fn ket_zero() -> StateVector {
    system_ket([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
}

#[derive(Debug, Clone)]
pub struct SbsReport {
    pub pointer_basis: [StateVector; 2],
    pub branch_probs: [f64; 2],
    /// Environment qubit indices (0-based) of each fraction.
    pub fractions: Vec<Vec<usize>>,
    /// R_i^j per fraction j and branch i; `None` for an absent branch.
    pub conditional_env: Vec<[Option<DensityMatrix>; 2]>,
    /// Uhlmann fidelity F(R_0^j, R_1^j) per fraction; empty when rank-deficient.
    pub distinguishability: Vec<f64>,
    /// |⟨ψ0|ρ_S|ψ1⟩|.
    pub decoherence_residual: f64,
    /// Trace distance between ρ_SE and the assembled SBS state.
    pub reconstruction_error: f64,
    /// A branch probability fell at or below 1e-12.
    pub rank_deficient: bool,
}

impl SbsReport {
    pub fn max_distinguishability(&self) -> Option<f64> {
        self.distinguishability.iter().copied().reduce(f64::max)
    }

    /// Every fraction's branch states overlap by less than the SBS flag threshold.
    pub fn is_sbs_like(&self) -> bool {
        self.max_distinguishability()
            .is_some_and(|f| f < tolerances::SBS_DISTINGUISHABLE)
    }
}

fn check_basis(basis: &[StateVector; 2]) -> Result<()> {
    for b in basis {
        if b.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: b.dim(),
            });
        }
    }
    let overlap = basis[0].amplitudes().dotc(basis[1].amplitudes()).norm();
    let n0 = (basis[0].norm() - 1.0).abs();
    let n1 = (basis[1].norm() - 1.0).abs();
    if overlap > tolerances::ORTHONORMAL || n0 > tolerances::ORTHONORMAL || n1 > tolerances::ORTHONORMAL {
        return Err(Error::InvalidState("pointer basis is not orthonormal".into()));
    }
    Ok(())
}

/// Decomposes ρ_SE along `basis` with the environment cut into contiguous
/// fractions of `fraction_size` qubits (leftovers join the last fraction).
pub fn sbs_decompose(rho_se: &DensityMatrix, basis: &[StateVector; 2], fraction_size: usize) -> Result<SbsReport> {
    check_basis(basis)?;
    let layout = rho_se.layout();
    if layout.len() < 2 || layout.dims()[0] != 2 {
        return Err(Error::Layout("expected a system qubit followed by the environment".into()));
    }
    let n = layout.len() - 1;
    if fraction_size == 0 || fraction_size > n {
        return Err(Error::param("fraction_size", format!("must lie in 1..={n}")));
    }
    let env_layout = SubsystemLayout::new(layout.dims()[1..].to_vec(), layout.labels()[1..].to_vec())?;
    let fractions = contiguous_partition(n, fraction_size);
    let blocks = BranchBlocks::from_density(rho_se);

    let kets: [[C64; 2]; 2] = [0, 1].map(|i| [basis[i].amplitudes()[0], basis[i].amplitudes()[1]]);
    let mut probs = [0.0; 2];
    let mut branch_env: [Option<DensityMatrix>; 2] = [None, None];
    for i in 0..2 {
        let unnorm = blocks.unnormalized(&kets[i]);
        probs[i] = unnorm.trace().re.max(0.0);
        if probs[i] > tolerances::DEGENERATE_OUTCOME {
            branch_env[i] = Some(DensityMatrix::from_parts_unchecked(
                unnorm / C64::new(probs[i], 0.0),
                env_layout.clone(),
            ));
        }
    }
    let rank_deficient = branch_env.iter().any(Option::is_none);

    let fraction_labels: Vec<Vec<&str>> = fractions
        .iter()
        .map(|f| f.iter().map(|&q| env_layout.labels()[q].as_str()).collect())
        .collect();
    let conditional_env = fraction_labels
        .iter()
        .map(|labels| -> Result<[Option<DensityMatrix>; 2]> {
            let mut out: [Option<DensityMatrix>; 2] = [None, None];
            for i in 0..2 {
                if let Some(env) = &branch_env[i] {
                    out[i] = Some(partial_trace(env, labels)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let distinguishability = if rank_deficient {
        Vec::new()
    } else {
        conditional_env
            .iter()
            .map(|[a, b]| uhlmann_fidelity(a.as_ref().expect("present"), b.as_ref().expect("present")))
            .collect::<Result<Vec<_>>>()?
    };

    let d = rho_se.dim();
    let mut assembled = CMatrix::zeros(d, d);
    for i in 0..2 {
        if branch_env[i].is_none() {
            continue;
        }
        let mut term = CMatrix::from_fn(2, 2, |r, c| kets[i][r] * kets[i][c].conj());
        for frac in &conditional_env {
            term = term.kronecker(frac[i].as_ref().expect("present").matrix());
        }
        assembled += term * C64::new(probs[i], 0.0);
    }
    let sigma = DensityMatrix::from_parts_unchecked(assembled, layout.clone());
    let reconstruction_error = trace_distance(rho_se, &sigma)?;

    let rho_s = partial_trace(rho_se, &layout.labels()[..1])?;
    let coherence = basis[0]
        .amplitudes()
        .dotc(&(rho_s.matrix() * basis[1].amplitudes()));

    Ok(SbsReport {
        pointer_basis: basis.clone(),
        branch_probs: probs,
        fractions,
        conditional_env,
        distinguishability,
        decoherence_residual: coherence.norm(),
        reconstruction_error,
        rank_deficient,
    })
}
