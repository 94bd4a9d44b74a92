use rayon::prelude::*;

use super::spec::{Quantity, SweepSpec, TimeSelection};
use crate::error::{Error, Result};
use crate::infotheory::accessible_mi_two_sided;
use crate::model::{Evolver, InitialScenario, ModelParams};
use crate::qcore::{entropy, StateVector};
use crate::redundancy::{chi_e1, max_redundancy_time, redundancy_of_state, RedundancyResult};
use crate::sbs::{extract_pointer_basis_of_state, sbs_decompose, PointerBasis};

/// Labelling rule for |φ⁰⟩, recorded with every row.
pub const POINTER_CONVENTION: &str = "phi0-closest-to-ket0";

/// Provenance carried by every row.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub threshold_mode: String,
    pub delta: f64,
    pub quantifier: String,
    pub pointer_convention: String,
    pub grid_id: String,
    pub version: String,
}

/// One output row: a parameter point at one time (or at its selected time).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub figure: String,
    pub panel: String,
    pub scenario: String,
    pub scenario_param: Option<f64>,
    pub p: f64,
    pub omega: f64,
    pub gamma: f64,
    pub omega_over_gamma: f64,
    pub n: usize,
    pub selection: String,
    pub time: Option<f64>,
    pub gamma_t: Option<f64>,
    pub entropy_s: Option<f64>,
    pub chi_e1: Option<f64>,
    /// χ(S:E1)/S(ρ_S), only where S(ρ_S) reaches the minimum entropy.
    pub chi_e1_normalized: Option<f64>,
    pub acc_mi_e1: Option<f64>,
    pub redundancy: Option<usize>,
    pub redundancy_fraction_size: Option<usize>,
    pub redundancy_defined: Option<bool>,
    pub pointer_fidelity: Option<f64>,
    pub pointer_theta: Option<f64>,
    pub pointer_phi: Option<f64>,
    pub sbs_fraction_size: Option<usize>,
    pub sbs_reconstruction_error: Option<f64>,
    pub sbs_max_distinguishability: Option<f64>,
    pub sbs_decoherence_residual: Option<f64>,
    /// `ok`, or `;`-joined flags for degenerate points.
    pub flag: String,
    pub meta: Metadata,
}

struct Point<'a> {
    spec: &'a SweepSpec,
    panel: &'a str,
    scenario: InitialScenario,
    params: ModelParams,
}

impl Point<'_> {
    fn blank_record(&self) -> SweepRecord {
        let spec = self.spec;
        SweepRecord {
            figure: spec.tag.clone(),
            panel: self.panel.to_string(),
            scenario: self.scenario.kind().to_string(),
            scenario_param: self.scenario.parameter(),
            p: self.params.p,
            omega: self.params.omega,
            gamma: self.params.gamma,
            omega_over_gamma: self.params.omega / self.params.gamma,
            n: self.params.n,
            selection: spec.selection.name().to_string(),
            time: None,
            gamma_t: None,
            entropy_s: None,
            chi_e1: None,
            chi_e1_normalized: None,
            acc_mi_e1: None,
            redundancy: None,
            redundancy_fraction_size: None,
            redundancy_defined: None,
            pointer_fidelity: None,
            pointer_theta: None,
            pointer_phi: None,
            sbs_fraction_size: None,
            sbs_reconstruction_error: None,
            sbs_max_distinguishability: None,
            sbs_decoherence_residual: None,
            flag: String::new(),
            meta: Metadata {
                threshold_mode: spec.redundancy.threshold_mode.to_string(),
                delta: spec.redundancy.delta,
                quantifier: spec.redundancy.quantifier.to_string(),
                pointer_convention: POINTER_CONVENTION.to_string(),
                grid_id: spec.time_grid.id(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }

    fn wants(&self, q: Quantity) -> bool {
        self.spec.quantities.contains(&q)
    }

    /// Fills the requested quantities for `psi`. `known` carries values the
    /// caller already computed (redundancy, χ(S:E1)).
    fn fill(
        &self,
        rec: &mut SweepRecord,
        psi: &StateVector,
        known_red: Option<&RedundancyResult>,
        known_chi: Option<f64>,
        flags: &mut Vec<String>,
    ) {
        let min_entropy = self.spec.redundancy.min_entropy;
        let s = entropy(&psi.reduced(&["S"]).expect("system label"));
        if self.wants(Quantity::EntropyS) {
            rec.entropy_s = Some(s);
        }
        if s < min_entropy {
            flags.push("zero-entropy".into());
        }
        if self.wants(Quantity::ChiE1) {
            let chi = known_chi.unwrap_or_else(|| chi_e1(psi));
            rec.chi_e1 = Some(chi);
            rec.chi_e1_normalized = (s >= min_entropy).then(|| chi / s);
        }
        if self.wants(Quantity::AccMiE1) {
            let rho = psi.reduced(&["S", "E1"]).expect("labels");
            rec.acc_mi_e1 = Some(accessible_mi_two_sided(&rho).expect("qubit fraction").value);
        }
        let red = if self.wants(Quantity::Redundancy) || self.wants(Quantity::SbsReport) {
            Some(match known_red {
                Some(r) => r.clone(),
                None => redundancy_of_state(psi, &self.spec.redundancy).expect("validated config"),
            })
        } else {
            None
        };
        if self.wants(Quantity::Redundancy) {
            let r = red.as_ref().expect("computed above");
            rec.redundancy_defined = Some(r.defined);
            if r.defined {
                rec.redundancy = Some(r.r);
                rec.redundancy_fraction_size = Some(r.fraction_size);
            } else {
                flags.push("undefined-redundancy".into());
            }
            if r.quantifier_substituted {
                flags.push("chi-substituted".into());
            }
        }
        let pointer = if self.wants(Quantity::PointerFidelity) || self.wants(Quantity::SbsReport) {
            match extract_pointer_basis_of_state(psi) {
                Ok(pb) => Some(pb),
                Err(_) => {
                    flags.push("no-pointer-basis".into());
                    None
                }
            }
        } else {
            None
        };
        if let (true, Some(pb)) = (self.wants(Quantity::PointerFidelity), &pointer) {
            rec.pointer_fidelity = Some(pb.states[0].amplitudes()[0].norm_sqr().min(1.0));
            rec.pointer_theta = Some(pb.basis.theta);
            rec.pointer_phi = Some(pb.basis.phi);
        }
        if let (true, Some(pb)) = (self.wants(Quantity::SbsReport), &pointer) {
            self.fill_sbs(rec, psi, pb, red.as_ref().expect("computed above"));
        }
    }

    /// SBS report on S and every redundancy fraction but the last, which is
    /// traced out as the unobserved environment.
    fn fill_sbs(&self, rec: &mut SweepRecord, psi: &StateVector, pb: &PointerBasis, red: &RedundancyResult) {
        let n = self.params.n;
        let k = if red.defined && red.fraction_size > 0 { red.fraction_size } else { 1 };
        let observed = if n / k >= 2 { (n / k - 1) * k } else { n };
        let labels = psi.layout().labels();
        let keep: Vec<&str> = labels[..=observed].iter().map(String::as_str).collect();
        let rho = psi.reduced(&keep).expect("labels");
        if let Ok(rep) = sbs_decompose(&rho, &pb.states, k.min(observed)) {
            rec.sbs_fraction_size = Some(k.min(observed));
            rec.sbs_reconstruction_error = Some(rep.reconstruction_error);
            rec.sbs_max_distinguishability = rep.max_distinguishability();
            rec.sbs_decoherence_residual = Some(rep.decoherence_residual);
        }
    }

    fn rows(&self) -> Result<Vec<SweepRecord>> {
        let times = self.spec.time_grid.times(self.params.gamma);
        let gamma_t = self.spec.time_grid.gamma_t();
        let evolver = Evolver::new(self.params)?;
        let traj = evolver.trajectory(self.scenario, &times)?;
        match self.spec.selection {
            TimeSelection::Series => Ok(traj
                .states
                .par_iter()
                .enumerate()
                .map(|(i, psi)| {
                    let mut rec = self.blank_record();
                    rec.time = Some(times[i]);
                    rec.gamma_t = Some(gamma_t[i]);
                    let mut flags = Vec::new();
                    self.fill(&mut rec, psi, None, None, &mut flags);
                    rec.flag = join_flags(flags);
                    rec
                })
                .collect()),
            TimeSelection::MaxRedundancy => {
                let mut rec = self.blank_record();
                match max_redundancy_time(&traj, &self.spec.redundancy) {
                    Ok(best) => {
                        rec.time = Some(best.time);
                        rec.gamma_t = Some(gamma_t[best.index]);
                        let mut flags = Vec::new();
                        self.fill(
                            &mut rec,
                            &traj.states[best.index],
                            Some(&best.result),
                            Some(best.chi_e1),
                            &mut flags,
                        );
                        rec.flag = join_flags(flags);
                    }
                    Err(Error::AllUndefined) => {
                        rec.redundancy_defined = Some(false);
                        rec.flag = "undefined-redundancy".into();
                    }
                    Err(e) => return Err(e),
                }
                Ok(vec![rec])
            }
        }
    }
}

fn join_flags(mut flags: Vec<String>) -> String {
    flags.dedup();
    if flags.is_empty() {
        "ok".into()
    } else {
        flags.join(";")
    }
}

/// Runs every parameter point of `spec`; rows come back ordered by point
/// (panel, scenario, n, γ, ω, p) and then time.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    run_sweep_with_progress(spec, &|_, _| {})
}

/// [`run_sweep`] calling `progress(done, total)` as points finish.
pub fn run_sweep_with_progress(
    spec: &SweepSpec,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let points: Vec<Point> = spec
        .panels
        .iter()
        .flat_map(|panel| {
            panel.points().into_iter().map(move |(scenario, params)| Point {
                spec,
                panel: &panel.label,
                scenario,
                params,
            })
        })
        .collect();
    let total = points.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let per_point: Vec<Vec<SweepRecord>> = points
        .par_iter()
        .map(|pt| {
            let rows = pt.rows().unwrap_or_else(|e| {
                let mut rec = pt.blank_record();
                rec.flag = format!("error: {e}");
                vec![rec]
            });
            let k = done.fetch_add(1, std::sync::atomic::Ordering::SeqCst) + 1;
            progress(k, total);
            rows
        })
        .collect();
    Ok(per_point.into_iter().flatten().collect())
}
