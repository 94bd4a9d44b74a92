//! Information shared between the system qubit and an environment fraction.
//!
//! All quantities take a state whose first factor is the system qubit; the
//! remaining factors form the fraction (or, for pure joint states, the
//! fraction is named explicitly and everything else is traced out).

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::optimize::{canonical_angles, nelder_mead_minimize, SimplexOptions, SphereSearch};
use crate::qcore::{
    entropy, entropy_of_spectrum, hermitian_eigenvalues, partial_trace, CMatrix, DensityMatrix,
    StateVector, SubsystemLayout, C64,
};
use crate::tolerances;

/// Projective qubit measurement along the Bloch direction
/// (sinθ cosφ, sinθ sinφ, cosθ); outcome `+` projects onto that direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::param("theta", "must lie in [0, π]"));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::param("phi", "must lie in [0, 2π)"));
        }
        Ok(Self { theta, phi })
    }

    /// Computational basis: `+` ↔ |0⟩, `−` ↔ |1⟩.
    pub fn z() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// The same measurement with θ ≤ π/2.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let (theta, phi) = canonical_angles(theta, phi);
        Self { theta, phi }
    }

    /// Outcome kets (|n+⟩, |n−⟩).
    pub fn kets(&self) -> [[C64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = C64::from_polar(1.0, self.phi);
        [
            [C64::new(c, 0.0), e * s],
            [C64::new(s, 0.0), -e * c],
        ]
    }

    pub fn projectors(&self) -> [CMatrix; 2] {
        self.kets().map(|k| {
            CMatrix::from_fn(2, 2, |i, j| k[i] * k[j].conj())
        })
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

/// Blocks G_{ss'} such that the unnormalised conditional state for system
/// outcome ket |a⟩ is Σ_{ss'} ā_s a_{s'} G_{ss'} (or a matrix with the same
/// spectrum).
#[derive(Debug, Clone)]
pub(crate) struct BranchBlocks {
    g: [[CMatrix; 2]; 2],
}

impl BranchBlocks {
    /// Blocks ⟨s|ρ_SF|s'⟩ of a density matrix with the system first.
    pub(crate) fn from_density(rho: &DensityMatrix) -> Self {
        let df = rho.dim() / 2;
        let m = rho.matrix();
        let block = |s: usize, t: usize| m.view((s * df, t * df), (df, df)).into_owned();
        Self {
            g: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]],
        }
    }

    /// Blocks from a pure joint state: Ψ_s is the (fraction × rest) amplitude
    /// matrix given system value s. Uses whichever Gram side is smaller unless
    /// `fraction_side` forces the fraction side.
    pub(crate) fn from_state(psi: &StateVector, fraction: &[usize], fraction_side: bool) -> Self {
        let mut kept = vec![0usize];
        kept.extend_from_slice(fraction);
        let m = psi.split_matrix(&kept);
        let df = m.nrows() / 2;
        let psi_s = [m.rows(0, df).into_owned(), m.rows(df, df).into_owned()];
        let use_fraction = fraction_side || df <= m.ncols();
        let gram = |s: usize, t: usize| {
            if use_fraction {
                &psi_s[s] * psi_s[t].adjoint()
            } else {
                psi_s[t].adjoint() * &psi_s[s]
            }
        };
        Self {
            g: [[gram(0, 0), gram(0, 1)], [gram(1, 0), gram(1, 1)]],
        }
    }

    pub(crate) fn unnormalized(&self, ket: &[C64; 2]) -> CMatrix {
        let mut out = CMatrix::zeros(self.g[0][0].nrows(), self.g[0][0].ncols());
        for s in 0..2 {
            for t in 0..2 {
                let w = ket[s].conj() * ket[t];
                if w != C64::new(0.0, 0.0) {
                    out += &self.g[s][t] * w;
                }
            }
        }
        out
    }

    /// Σ_a p_a S(ρ_{F|a}) in bits; impossible outcomes carry zero weight.
    pub(crate) fn average_conditional_entropy(&self, basis: &MeasurementBasis) -> f64 {
        basis
            .kets()
            .iter()
            .map(|k| {
                let mu = hermitian_eigenvalues(&self.unnormalized(k));
                let p: f64 = mu.iter().map(|m| m.max(0.0)).sum();
                if p <= tolerances::DEGENERATE_OUTCOME {
                    return 0.0;
                }
                let normalized: Vec<f64> = mu.iter().map(|m| m / p).collect();
                p * entropy_of_spectrum(&normalized, 2.0)
            })
            .sum()
    }
}

/// Outcome probabilities and conditional fraction states for one system measurement.
#[derive(Debug, Clone)]
pub struct Conditioning {
    pub probs: [f64; 2],
    /// `None` for outcomes with probability ≤ 1e-12.
    pub states: [Option<DensityMatrix>; 2],
}

impl Conditioning {
    /// Σ_a p_a ρ_{F|a}.
    pub fn mixture(&self) -> Option<CMatrix> {
        let mut acc: Option<CMatrix> = None;
        for (p, s) in self.probs.iter().zip(&self.states) {
            if let Some(s) = s {
                let term = s.matrix() * C64::new(*p, 0.0);
                acc = Some(match acc {
                    Some(a) => a + term,
                    None => term,
                });
            }
        }
        acc
    }
}

fn fraction_layout(layout: &SubsystemLayout) -> Result<SubsystemLayout> {
    if layout.len() < 2 || layout.dims()[0] != 2 {
        return Err(Error::Layout(
            "expected a system qubit followed by at least one fraction factor".into(),
        ));
    }
    SubsystemLayout::new(layout.dims()[1..].to_vec(), layout.labels()[1..].to_vec())
}

fn conditioning_from_blocks(
    blocks: &BranchBlocks,
    basis: &MeasurementBasis,
    layout: &SubsystemLayout,
) -> Conditioning {
    let mut probs = [0.0; 2];
    let mut states: [Option<DensityMatrix>; 2] = [None, None];
    for (a, ket) in basis.kets().iter().enumerate() {
        let c = blocks.unnormalized(ket);
        let p = c.trace().re.max(0.0);
        probs[a] = p;
        if p > tolerances::DEGENERATE_OUTCOME {
            states[a] = Some(DensityMatrix::from_parts_unchecked(
                c / C64::new(p, 0.0),
                layout.clone(),
            ));
        }
    }
    let total = probs[0] + probs[1];
    if total > 0.0 {
        probs = [probs[0] / total, probs[1] / total];
    }
    Conditioning { probs, states }
}

/// p_a = Tr[(Π_a ⊗ I)ρ] and ρ_{F|a} = Tr_S[(Π_a ⊗ I)ρ(Π_a ⊗ I)]/p_a.
pub fn condition_on_system(rho_sf: &DensityMatrix, basis: &MeasurementBasis) -> Result<Conditioning> {
    let layout = fraction_layout(rho_sf.layout())?;
    Ok(conditioning_from_blocks(
        &BranchBlocks::from_density(rho_sf),
        basis,
        &layout,
    ))
}

/// Holevo quantity of the ensemble a system measurement prepares on a fraction,
/// maximised over the measurement.
#[derive(Debug, Clone)]
pub struct HolevoResult {
    /// Bits.
    pub value: f64,
    pub argmax_basis: MeasurementBasis,
    pub outcome_probs: [f64; 2],
    pub conditional_states: [Option<DensityMatrix>; 2],
}

fn maximize_chi(fraction_entropy: f64, blocks: &BranchBlocks) -> (f64, MeasurementBasis) {
    let opt = SphereSearch::default().maximize(|theta, phi| {
        fraction_entropy - blocks.average_conditional_entropy(&MeasurementBasis { theta, phi })
    });
    (opt.value.max(0.0), MeasurementBasis::canonical(opt.theta, opt.phi))
}

/// χ(S:F) = max over system measurements of S(ρ_F) − Σ_a p_a S(ρ_{F|a}).
///
/// The average state Σ_a p_a ρ_{F|a} is ρ_F for every measurement, so only
/// the average conditional entropy depends on the basis.
pub fn holevo_chi(rho_sf: &DensityMatrix) -> Result<HolevoResult> {
    let layout = fraction_layout(rho_sf.layout())?;
    let blocks = BranchBlocks::from_density(rho_sf);
    let rho_f = &blocks.g[0][0] + &blocks.g[1][1];
    let s_f = entropy_of_spectrum(&hermitian_eigenvalues(&rho_f), 2.0);
    let (value, basis) = maximize_chi(s_f, &blocks);
    let cond = conditioning_from_blocks(&blocks, &basis, &layout);
    Ok(HolevoResult {
        value,
        argmax_basis: basis,
        outcome_probs: cond.probs,
        conditional_states: cond.states,
    })
}

/// Resolves fraction labels of a joint pure state whose first factor is the system.
pub(crate) fn fraction_positions<S: AsRef<str>>(psi: &StateVector, fraction: &[S]) -> Result<Vec<usize>> {
    if psi.layout().dims()[0] != 2 {
        return Err(Error::Layout("first factor must be the system qubit".into()));
    }
    let pos = psi.layout().positions(fraction)?;
    if pos.contains(&0) {
        return Err(Error::Layout("the fraction may not contain the system".into()));
    }
    Ok(pos)
}

/// Entropy of the reduced state on `positions` of a pure state, computed on
/// whichever side of the cut is smaller.
pub(crate) fn pure_marginal_entropy(psi: &StateVector, positions: &[usize]) -> f64 {
    let m = psi.split_matrix(positions);
    let gram = if m.nrows() <= m.ncols() {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    entropy_of_spectrum(&hermitian_eigenvalues(&gram), 2.0)
}

/// Only the basis-dependent part of [`holevo_chi_of_state`]: value and argmax.
pub(crate) fn chi_of_state_value(psi: &StateVector, fraction: &[usize]) -> (f64, MeasurementBasis) {
    let blocks = BranchBlocks::from_state(psi, fraction, false);
    let s_f = pure_marginal_entropy(psi, fraction);
    maximize_chi(s_f, &blocks)
}

/// χ(S:F) for a pure joint state, F given by labels; every other factor
/// besides the system is traced out.
pub fn holevo_chi_of_state<S: AsRef<str>>(psi: &StateVector, fraction: &[S]) -> Result<HolevoResult> {
    let pos = fraction_positions(psi, fraction)?;
    let (value, basis) = chi_of_state_value(psi, &pos);
    let layout = psi.layout().select(&pos);
    let cond = conditioning_from_blocks(&BranchBlocks::from_state(psi, &pos, true), &basis, &layout);
    Ok(HolevoResult {
        value,
        argmax_basis: basis,
        outcome_probs: cond.probs,
        conditional_states: cond.states,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessibleInfo {
    /// Bits.
    pub value: f64,
    pub system_basis: MeasurementBasis,
    pub fraction_basis: MeasurementBasis,
}

fn shannon_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Joint outcome distribution P(a, b) = ⟨a b|ρ|a b⟩ for a two-qubit state.
pub fn joint_outcomes(rho: &CMatrix, sys: &MeasurementBasis, frac: &MeasurementBasis) -> [[f64; 2]; 2] {
    let ks = sys.kets();
    let kf = frac.kets();
    let mut p = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let v = [
                ks[a][0] * kf[b][0],
                ks[a][0] * kf[b][1],
                ks[a][1] * kf[b][0],
                ks[a][1] * kf[b][1],
            ];
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += v[i].conj() * rho[(i, j)] * v[j];
                }
            }
            p[a][b] = acc.re.max(0.0);
        }
    }
    p
}

fn classical_mi(p: &[[f64; 2]; 2]) -> f64 {
    let pa = [p[0][0] + p[0][1], p[1][0] + p[1][1]];
    let pb = [p[0][0] + p[1][0], p[0][1] + p[1][1]];
    let joint = [p[0][0], p[0][1], p[1][0], p[1][1]];
    (shannon_bits(&pa) + shannon_bits(&pb) - shannon_bits(&joint)).max(0.0)
}

/// Classical mutual information of local projective measurements on both the
/// system and a single-qubit fraction, maximised over both bases.
pub fn accessible_mi_two_sided(rho_sf: &DensityMatrix) -> Result<AccessibleInfo> {
    let layout = fraction_layout(rho_sf.layout())?;
    if layout.dim() != 2 {
        return Err(Error::FractionTooLarge(layout.dim()));
    }
    let rho = rho_sf.matrix();
    let objective = |x: &[f64]| {
        classical_mi(&joint_outcomes(
            rho,
            &MeasurementBasis { theta: x[0], phi: x[1] },
            &MeasurementBasis { theta: x[2], phi: x[3] },
        ))
    };
    let side = SphereSearch {
        theta_divisions: 8,
        phi_divisions: 16,
        ..SphereSearch::default()
    }
    .grid();
    let mut scored = Vec::with_capacity(side.len() * side.len());
    for &(t1, p1) in &side {
        for &(t2, p2) in &side {
            let x = [t1, p1, t2, p2];
            scored.push((objective(&x), x));
        }
    }
    scored.sort_by(|a, b| {
        b.0.total_cmp(&a.0).then_with(|| {
            a.1.iter()
                .zip(&b.1)
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let step = [PI / 16.0; 4];
    let opts = SimplexOptions {
        max_evals: 1000,
        ..SimplexOptions::default()
    };
    let mut best: Option<(f64, [f64; 4])> = None;
    for (_, x0) in scored.iter().take(tolerances::BASIS_REFINE_STARTS) {
        let res = nelder_mead_minimize(|x| -objective(x), x0, &step, opts);
        let value = -res.value;
        if best.is_none_or(|(b, _)| value > b + 1e-12) {
            best = Some((value, [res.x[0], res.x[1], res.x[2], res.x[3]]));
        }
    }
    let (value, x) = best.expect("grid is never empty");
    Ok(AccessibleInfo {
        value,
        system_basis: MeasurementBasis::canonical(x[0], x[1]),
        fraction_basis: MeasurementBasis::canonical(x[2], x[3]),
    })
}

/// S(ρ_S) + S(ρ_F) − S(ρ_SF) in bits, system = first factor.
pub fn quantum_mi(rho_sf: &DensityMatrix) -> Result<f64> {
    let layout = fraction_layout(rho_sf.layout())?;
    let sys = partial_trace(rho_sf, &rho_sf.layout().labels()[..1])?;
    let frac = partial_trace(rho_sf, layout.labels())?;
    Ok(entropy(&sys) + entropy(&frac) - entropy(rho_sf))
}
