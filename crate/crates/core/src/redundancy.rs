//! Redundancy: the largest number of disjoint environment fractions that each
//! hold (nearly) full information about the system.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::infotheory::{accessible_mi_two_sided, chi_of_state_value, holevo_chi};
use crate::model::Trajectory;
use crate::qcore::{entropy, partial_trace, DensityMatrix, StateVector};
use crate::tolerances;

/// How δ turns into a pass mark for a fraction's information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThresholdMode {
    /// I ≥ (1 − δ) S(ρ_S).
    #[default]
    Literal,
    /// I ≥ δ S(ρ_S).
    Strict,
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::Strict => "strict",
        })
    }
}

impl FromStr for ThresholdMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "strict" => Ok(Self::Strict),
            other => Err(Error::param("threshold_mode", format!("unknown mode `{other}`"))),
        }
    }
}

/// Which information quantity a fraction is scored with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Quantifier {
    /// Holevo χ, optimised over system measurements only.
    #[default]
    Holevo,
    /// Two-sided accessible information; single-qubit fractions only, larger
    /// fractions fall back to χ.
    TwoSided,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Holevo => "holevo",
            Self::TwoSided => "two-sided",
        })
    }
}

impl FromStr for Quantifier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holevo" => Ok(Self::Holevo),
            "two-sided" => Ok(Self::TwoSided),
            other => Err(Error::param("quantifier", format!("unknown quantifier `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedundancyConfig {
    pub delta: f64,
    pub threshold_mode: ThresholdMode,
    pub quantifier: Quantifier,
    /// Below this system entropy (bits) redundancy is undefined.
    pub min_entropy: f64,
}

impl Default for RedundancyConfig {
    fn default() -> Self {
        Self {
            delta: 0.9,
            threshold_mode: ThresholdMode::Literal,
            quantifier: Quantifier::Holevo,
            min_entropy: tolerances::MIN_ENTROPY,
        }
    }
}

impl RedundancyConfig {
    pub fn new(delta: f64, threshold_mode: ThresholdMode, quantifier: Quantifier) -> Result<Self> {
        let cfg = Self {
            delta,
            threshold_mode,
            quantifier,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param("delta", "delta out of range (must lie in (0, 1))"));
        }
        if !(self.min_entropy.is_finite() && self.min_entropy >= 0.0) {
            return Err(Error::param("min_entropy", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Information a fraction needs, given the system entropy.
    pub fn threshold(&self, system_entropy: f64) -> f64 {
        match self.threshold_mode {
            ThresholdMode::Literal => (1.0 - self.delta) * system_entropy,
            ThresholdMode::Strict => self.delta * system_entropy,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RedundancyResult {
    /// Number of fractions; 0 when undefined or when no partition passes.
    pub r: usize,
    /// Block size k of the winning partition (the last block may be larger).
    pub fraction_size: usize,
    /// Environment qubit indices (0-based) of each fraction.
    pub fractions: Vec<Vec<usize>>,
    /// Information of each fraction, bits.
    pub per_fraction_info: Vec<f64>,
    pub system_entropy: f64,
    pub defined: bool,
    /// True when two-sided scoring fell back to χ for a multi-qubit fraction.
    pub quantifier_substituted: bool,
}

impl RedundancyResult {
    fn undefined(system_entropy: f64) -> Self {
        Self {
            r: 0,
            fraction_size: 0,
            fractions: Vec::new(),
            per_fraction_info: Vec::new(),
            system_entropy,
            defined: false,
            quantifier_substituted: false,
        }
    }

    /// `Some(r)` when defined.
    pub fn value(&self) -> Option<usize> {
        self.defined.then_some(self.r)
    }
}

/// A joint system-environment state whose fractions can be scored.
trait FractionSource: Sync {
    fn n_env(&self) -> usize;
    fn system_entropy(&self) -> f64;
    /// Information of the fraction made of environment qubits `env` (0-based),
    /// and whether χ stood in for the requested quantifier.
    fn info(&self, env: &[usize], quantifier: Quantifier) -> (f64, bool);
}

fn check_environment(dims: &[usize]) -> Result<()> {
    if dims.len() < 2 || dims.iter().any(|&d| d != 2) {
        return Err(Error::Layout(
            "expected a system qubit followed by environment qubits".into(),
        ));
    }
    Ok(())
}

struct MixedSource<'a> {
    rho: &'a DensityMatrix,
    system_entropy: f64,
}

impl FractionSource for MixedSource<'_> {
    fn n_env(&self) -> usize {
        self.rho.layout().len() - 1
    }

    fn system_entropy(&self) -> f64 {
        self.system_entropy
    }

    fn info(&self, env: &[usize], quantifier: Quantifier) -> (f64, bool) {
        let labels = self.rho.layout().labels();
        let mut keep = vec![labels[0].as_str()];
        keep.extend(env.iter().map(|&e| labels[e + 1].as_str()));
        let rho_sf = partial_trace(self.rho, &keep).expect("labels come from the layout");
        score(&rho_sf, quantifier)
    }
}

fn score(rho_sf: &DensityMatrix, quantifier: Quantifier) -> (f64, bool) {
    match quantifier {
        Quantifier::TwoSided if rho_sf.dim() == 4 => (
            accessible_mi_two_sided(rho_sf).expect("single-qubit fraction").value,
            false,
        ),
        Quantifier::TwoSided => (holevo_chi(rho_sf).expect("system-first layout").value, true),
        Quantifier::Holevo => (holevo_chi(rho_sf).expect("system-first layout").value, false),
    }
}

struct PureSource<'a> {
    psi: &'a StateVector,
    system_entropy: f64,
}

impl FractionSource for PureSource<'_> {
    fn n_env(&self) -> usize {
        self.psi.layout().len() - 1
    }

    fn system_entropy(&self) -> f64 {
        self.system_entropy
    }

    fn info(&self, env: &[usize], quantifier: Quantifier) -> (f64, bool) {
        let positions: Vec<usize> = env.iter().map(|e| e + 1).collect();
        match quantifier {
            Quantifier::TwoSided if env.len() == 1 => {
                let labels = self.psi.layout().labels();
                let rho_sf = self
                    .psi
                    .reduced(&[labels[0].as_str(), labels[positions[0]].as_str()])
                    .expect("labels come from the layout");
                score(&rho_sf, quantifier)
            }
            Quantifier::TwoSided => (chi_of_state_value(self.psi, &positions).0, true),
            Quantifier::Holevo => (chi_of_state_value(self.psi, &positions).0, false),
        }
    }
}

/// Contiguous blocks of `k` qubits; leftover qubits join the last block.
pub fn contiguous_partition(n: usize, k: usize) -> Vec<Vec<usize>> {
    let r = n / k;
    (0..r)
        .map(|i| {
            let end = if i + 1 == r { n } else { (i + 1) * k };
            (i * k..end).collect()
        })
        .collect()
}

fn contiguous_redundancy(src: &dyn FractionSource, config: &RedundancyConfig) -> RedundancyResult {
    let s = src.system_entropy();
    if s < config.min_entropy {
        return RedundancyResult::undefined(s);
    }
    let threshold = config.threshold(s);
    let n = src.n_env();
    // r = ⌊n/k⌋ does not increase with k, so the first passing k wins
    for k in 1..=n {
        let fractions = contiguous_partition(n, k);
        let mut infos = Vec::with_capacity(fractions.len());
        let mut substituted = false;
        let mut pass = true;
        for f in &fractions {
            let (info, sub) = src.info(f, config.quantifier);
            substituted |= sub;
            infos.push(info);
            if info < threshold {
                pass = false;
                break;
            }
        }
        if pass {
            return RedundancyResult {
                r: fractions.len(),
                fraction_size: k,
                fractions,
                per_fraction_info: infos,
                system_entropy: s,
                defined: true,
                quantifier_substituted: substituted,
            };
        }
    }
    RedundancyResult {
        r: 0,
        fraction_size: 0,
        fractions: Vec::new(),
        per_fraction_info: Vec::new(),
        system_entropy: s,
        defined: true,
        quantifier_substituted: false,
    }
}

/// Red(ρ_SE) over contiguous equal-size partitions of the environment. The
/// first factor is the system; all others are environment qubits.
pub fn redundancy(rho_se: &DensityMatrix, config: &RedundancyConfig) -> Result<RedundancyResult> {
    config.validate()?;
    check_environment(rho_se.layout().dims())?;
    let sys = partial_trace(rho_se, &rho_se.layout().labels()[..1])?;
    let src = MixedSource {
        rho: rho_se,
        system_entropy: entropy(&sys),
    };
    Ok(contiguous_redundancy(&src, config))
}

/// [`redundancy`] for a pure joint state, without forming ρ_SE.
pub fn redundancy_of_state(psi: &StateVector, config: &RedundancyConfig) -> Result<RedundancyResult> {
    config.validate()?;
    check_environment(psi.layout().dims())?;
    let sys = psi.reduced(&psi.layout().labels()[..1])?;
    let src = PureSource {
        psi,
        system_entropy: entropy(&sys),
    };
    Ok(contiguous_redundancy(&src, config))
}

/// Visits every set partition of `0..n` as a block-label vector.
fn for_each_set_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    // restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[..i])
    let mut a = vec![0usize; n];
    loop {
        visit(&a);
        let mut i = n;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            let max_prefix = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= max_prefix {
                a[i] += 1;
                for x in a.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn brute_redundancy(src: &dyn FractionSource, config: &RedundancyConfig) -> RedundancyResult {
    let s = src.system_entropy();
    if s < config.min_entropy {
        return RedundancyResult::undefined(s);
    }
    let threshold = config.threshold(s);
    let n = src.n_env();
    let mut cache: HashMap<u32, (f64, bool)> = HashMap::new();
    let mut best: Option<(Vec<Vec<usize>>, Vec<f64>, bool)> = None;
    for_each_set_partition(n, |labels| {
        let blocks_count = labels.iter().max().map_or(0, |m| m + 1);
        if best.as_ref().is_some_and(|(b, _, _)| b.len() >= blocks_count) {
            return;
        }
        let mut blocks = vec![Vec::new(); blocks_count];
        for (q, &b) in labels.iter().enumerate() {
            blocks[b].push(q);
        }
        let mut infos = Vec::with_capacity(blocks_count);
        let mut substituted = false;
        for b in &blocks {
            let mask = b.iter().fold(0u32, |m, &q| m | (1 << q));
            let (info, sub) = *cache
                .entry(mask)
                .or_insert_with(|| src.info(b, config.quantifier));
            if info < threshold {
                return;
            }
            substituted |= sub;
            infos.push(info);
        }
        best = Some((blocks, infos, substituted));
    });
    match best {
        Some((fractions, infos, substituted)) => RedundancyResult {
            r: fractions.len(),
            fraction_size: fractions.iter().map(Vec::len).min().unwrap_or(0),
            fractions,
            per_fraction_info: infos,
            system_entropy: s,
            defined: true,
            quantifier_substituted: substituted,
        },
        None => RedundancyResult {
            r: 0,
            fraction_size: 0,
            fractions: Vec::new(),
            per_fraction_info: Vec::new(),
            system_entropy: s,
            defined: true,
            quantifier_substituted: false,
        },
    }
}

/// Exhaustive redundancy over every set partition of the environment (n ≤ 6).
pub fn redundancy_brute_oracle(rho_se: &DensityMatrix, config: &RedundancyConfig) -> Result<RedundancyResult> {
    config.validate()?;
    check_environment(rho_se.layout().dims())?;
    let n = rho_se.layout().len() - 1;
    if n > 6 {
        return Err(Error::OracleTooLarge(n));
    }
    let sys = partial_trace(rho_se, &rho_se.layout().labels()[..1])?;
    let src = MixedSource {
        rho: rho_se,
        system_entropy: entropy(&sys),
    };
    Ok(brute_redundancy(&src, config))
}

/// Selected time of maximum redundancy along a trajectory.
#[derive(Debug, Clone)]
pub struct MaxRedundancy {
    pub index: usize,
    pub time: f64,
    pub result: RedundancyResult,
    /// χ(S:E1) at the selected time, bits.
    pub chi_e1: f64,
}

/// χ(S:E1) of a pure joint state.
pub fn chi_e1(psi: &StateVector) -> f64 {
    chi_of_state_value(psi, &[1]).0
}

/// Redundancy at every time of a trajectory, evaluated in parallel.
pub fn redundancy_series(traj: &Trajectory, config: &RedundancyConfig) -> Result<Vec<RedundancyResult>> {
    config.validate()?;
    traj.states
        .par_iter()
        .map(|psi| redundancy_of_state(psi, config))
        .collect()
}

/// Picks the time index of the first maximum of an integer redundancy series.
///
/// The window starts at the first defined point and ends just before the
/// system entropy first falls back below the minimum (undefined point). The
/// first contiguous run attaining the window maximum is chosen, and within it
/// the largest χ(S:E1), earliest on ties.
pub fn select_max_redundancy_index(reds: &[Option<usize>], chis: &[f64]) -> Option<usize> {
    let start = reds.iter().position(Option::is_some)?;
    let end = reds[start..]
        .iter()
        .position(Option::is_none)
        .map_or(reds.len(), |off| start + off);
    let window = &reds[start..end];
    let max = window.iter().flatten().copied().max()?;
    let run_start = start + window.iter().position(|r| *r == Some(max))?;
    let run_end = reds[run_start..end]
        .iter()
        .position(|r| *r != Some(max))
        .map_or(end, |off| run_start + off);
    let mut best = run_start;
    for i in run_start + 1..run_end {
        if chis[i] > chis[best] + tolerances::CHI_TIE {
            best = i;
        }
    }
    Some(best)
}

/// Time of (first) maximum redundancy, with χ(S:E1) there.
pub fn max_redundancy_time(traj: &Trajectory, config: &RedundancyConfig) -> Result<MaxRedundancy> {
    if traj.is_empty() {
        return Err(Error::param("trajectory", "empty trajectory"));
    }
    let series = redundancy_series(traj, config)?;
    let chis: Vec<f64> = traj.states.par_iter().map(chi_e1).collect();
    let reds: Vec<Option<usize>> = series.iter().map(RedundancyResult::value).collect();
    let index = select_max_redundancy_index(&reds, &chis).ok_or(Error::AllUndefined)?;
    Ok(MaxRedundancy {
        index,
        time: traj.times[index],
        result: series[index].clone(),
        chi_e1: chis[index],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evolve_trajectory, initial_state, InitialScenario, ModelParams};

    #[test]
    fn config_validation() {
        assert!(RedundancyConfig::new(1.5, ThresholdMode::Literal, Quantifier::Holevo).is_err());
        assert!(RedundancyConfig::new(0.0, ThresholdMode::Literal, Quantifier::Holevo).is_err());
        let cfg = RedundancyConfig::new(0.9, ThresholdMode::Strict, Quantifier::Holevo).unwrap();
        assert!((cfg.threshold(1.0) - 0.9).abs() < 1e-15);
        assert!((RedundancyConfig::default().threshold(1.0) - 0.1).abs() < 1e-15);
        assert_eq!("two-sided".parse::<Quantifier>().unwrap(), Quantifier::TwoSided);
        assert!("loose".parse::<ThresholdMode>().is_err());
    }

    #[test]
    fn partitions() {
        assert_eq!(contiguous_partition(8, 3), vec![vec![0, 1, 2], vec![3, 4, 5, 6, 7]]);
        assert_eq!(contiguous_partition(4, 1).len(), 4);
        let mut count = 0;
        for_each_set_partition(5, |_| count += 1);
        assert_eq!(count, 52); // Bell number B5
    }

    #[test]
    fn product_state_is_undefined() {
        let psi = initial_state(&InitialScenario::CircleLeft, 3).unwrap();
        let cfg = RedundancyConfig::default();
        let r = redundancy(&psi.to_density(), &cfg).unwrap();
        assert!(!r.defined);
        assert!(!redundancy_brute_oracle(&psi.to_density(), &cfg).unwrap().defined);
        assert!(!redundancy_of_state(&psi, &cfg).unwrap().defined);
    }

    #[test]
    fn oracle_rejects_large_environments() {
        let psi = initial_state(&InitialScenario::CircleLeft, 7).unwrap();
        assert!(matches!(
            redundancy_brute_oracle(&psi.to_density(), &RedundancyConfig::default()),
            Err(Error::OracleTooLarge(7))
        ));
    }

    #[test]
    fn selection_rules() {
        // monotone increasing series: last point of the window
        let reds = [None, Some(1), Some(2), Some(3), Some(4)];
        assert_eq!(select_max_redundancy_index(&reds, &[0.0; 5]), Some(4));
        // window closes at the first return to an undefined point
        let reds = [None, Some(2), Some(3), None, Some(8)];
        assert_eq!(select_max_redundancy_index(&reds, &[0.0; 5]), Some(2));
        // plateau: largest χ wins, earliest on ties
        let reds = [None, Some(4), Some(4), Some(4), Some(2), Some(4)];
        let chis = [0.0, 0.5, 0.9, 0.9, 0.1, 1.0];
        assert_eq!(select_max_redundancy_index(&reds, &chis), Some(2));
        assert_eq!(select_max_redundancy_index(&[None, None], &[0.0, 0.0]), None);
    }

    #[test]
    fn dephasing_peak_n4() {
        let gamma = 0.1;
        let params = ModelParams::new(0.1, gamma, 0.0, 4).unwrap();
        let t = std::f64::consts::FRAC_PI_4 / gamma;
        let traj = evolve_trajectory(params, InitialScenario::CircleLeft, &[t]).unwrap();
        let rho = traj.states[0].to_density();
        let cfg = RedundancyConfig::default();
        assert_eq!(redundancy_brute_oracle(&rho, &cfg).unwrap().r, 4);
        assert_eq!(redundancy(&rho, &cfg).unwrap().r, 4);
    }
}
