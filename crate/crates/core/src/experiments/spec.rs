use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{InitialScenario, ModelParams, TimeGrid};
use crate::redundancy::RedundancyConfig;

pub const FIGURE_TAGS: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

/// A quantity a sweep can record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    EntropyS,
    ChiE1,
    AccMiE1,
    Redundancy,
    PointerFidelity,
    SbsReport,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::EntropyS,
        Quantity::ChiE1,
        Quantity::AccMiE1,
        Quantity::Redundancy,
        Quantity::PointerFidelity,
        Quantity::SbsReport,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::EntropyS => "entropy_s",
            Quantity::ChiE1 => "chi_e1",
            Quantity::AccMiE1 => "acc_mi_e1",
            Quantity::Redundancy => "redundancy",
            Quantity::PointerFidelity => "pointer_fidelity",
            Quantity::SbsReport => "sbs_report",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::param("quantities", format!("unknown quantity `{s}`")))
    }
}

/// Which times of each trajectory produce rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeSelection {
    /// One row per grid time.
    #[default]
    Series,
    /// One row per parameter point, at the time of maximum redundancy.
    MaxRedundancy,
}

impl TimeSelection {
    pub fn name(&self) -> &'static str {
        match self {
            TimeSelection::Series => "series",
            TimeSelection::MaxRedundancy => "max-redundancy",
        }
    }
}

impl FromStr for TimeSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(TimeSelection::Series),
            "max-redundancy" => Ok(TimeSelection::MaxRedundancy),
            other => Err(Error::param("selection", format!("unknown selection `{other}`"))),
        }
    }
}

/// One family of parameter points: the cartesian product of its grids.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub label: String,
    pub scenarios: Vec<InitialScenario>,
    pub p: Vec<f64>,
    pub omega: Vec<f64>,
    pub gamma: Vec<f64>,
    pub n: Vec<usize>,
}

impl Panel {
    /// Points ordered by scenario, n, γ, ω, then p.
    pub fn points(&self) -> Vec<(InitialScenario, ModelParams)> {
        let mut out = Vec::new();
        for sc in &self.scenarios {
            for &n in &self.n {
                for &gamma in &self.gamma {
                    for &omega in &self.omega {
                        for &p in &self.p {
                            out.push((*sc, ModelParams { omega, gamma, p, n }));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub tag: String,
    pub panels: Vec<Panel>,
    pub time_grid: TimeGrid,
    pub redundancy: RedundancyConfig,
    pub quantities: Vec<Quantity>,
    pub selection: TimeSelection,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.tag.is_empty() {
            return Err(Error::spec("tag", "must not be empty"));
        }
        if self.panels.is_empty() {
            return Err(Error::spec("panels", "no panels"));
        }
        if self.quantities.is_empty() {
            return Err(Error::spec("quantities", "no quantities requested"));
        }
        self.time_grid
            .validate()
            .map_err(|e| Error::spec("time_grid", e.to_string()))?;
        self.redundancy.validate().map_err(|e| match e {
            Error::InvalidParameter { field, reason } => {
                Error::spec(format!("redundancy.{field}"), reason)
            }
            other => Error::spec("redundancy", other.to_string()),
        })?;
        for (i, panel) in self.panels.iter().enumerate() {
            let path = |f: &str| format!("panels[{i}].{f}");
            for (name, empty) in [
                ("scenarios", panel.scenarios.is_empty()),
                ("p", panel.p.is_empty()),
                ("omega", panel.omega.is_empty()),
                ("gamma", panel.gamma.is_empty()),
                ("n", panel.n.is_empty()),
            ] {
                if empty {
                    return Err(Error::spec(path(name), "grid is empty"));
                }
            }
            for (j, sc) in panel.scenarios.iter().enumerate() {
                sc.validate()
                    .map_err(|e| Error::spec(path(&format!("scenarios[{j}]")), reason(e)))?;
            }
            for (_, params) in panel.points() {
                params.validate().map_err(|e| match e {
                    Error::InvalidParameter { field, reason } => Error::spec(path(&field), reason),
                    other => Error::spec(path("params"), other.to_string()),
                })?;
            }
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.panels.iter().map(|p| p.points().len()).sum()
    }
}

fn reason(e: Error) -> String {
    match e {
        Error::InvalidParameter { reason, .. } => reason,
        other => other.to_string(),
    }
}

fn p_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn panel(label: &str, scenarios: Vec<InitialScenario>, p: Vec<f64>, omega: Vec<f64>, n: usize) -> Panel {
    Panel {
        label: label.to_string(),
        scenarios,
        p,
        omega,
        gamma: vec![GAMMA],
        n: vec![n],
    }
}

const GAMMA: f64 = 0.1;

fn ratios_to_omega(ratios: &[f64]) -> Vec<f64> {
    ratios.iter().map(|r| r * GAMMA).collect()
}

/// The five built-in figure sweeps, `fig1` … `fig5`.
pub fn builtin_figures() -> Vec<SweepSpec> {
    let base = |tag: &str, panels: Vec<Panel>, quantities: Vec<Quantity>, selection| SweepSpec {
        tag: tag.to_string(),
        panels,
        time_grid: TimeGrid::default(),
        redundancy: RedundancyConfig::default(),
        quantities,
        selection,
    };
    let cl = vec![InitialScenario::CircleLeft];
    let series_q = vec![Quantity::EntropyS, Quantity::ChiE1];
    let selected_q = vec![Quantity::EntropyS, Quantity::ChiE1, Quantity::Redundancy];
    vec![
        base(
            "fig1",
            vec![panel("main", cl.clone(), vec![0.0, 0.25, 0.5, 0.75, 1.0], vec![0.1], 8)],
            series_q.clone(),
            TimeSelection::Series,
        ),
        base(
            "fig2",
            vec![panel("main", cl.clone(), p_grid(), vec![0.1], 8)],
            selected_q.clone(),
            TimeSelection::MaxRedundancy,
        ),
        base(
            "fig3",
            vec![panel("main", cl.clone(), vec![1.0], ratios_to_omega(&[0.1, 1.0, 10.0]), 8)],
            series_q,
            TimeSelection::Series,
        ),
        base(
            "fig4",
            vec![panel(
                "main",
                cl.clone(),
                vec![1.0],
                ratios_to_omega(&[0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]),
                8,
            )],
            selected_q,
            TimeSelection::MaxRedundancy,
        ),
        base(
            "fig5",
            vec![
                panel(
                    "a",
                    [0.5, 0.6, 0.7, 0.8, 0.9]
                        .iter()
                        .map(|&x0| InitialScenario::Amplitude { x0 })
                        .collect(),
                    p_grid(),
                    vec![0.1],
                    6,
                ),
                panel(
                    "b",
                    (0..8)
                        .map(|k| InitialScenario::phase_angle(TAU * k as f64 / 8.0))
                        .collect(),
                    p_grid(),
                    vec![0.1],
                    6,
                ),
                panel("c", cl, p_grid(), ratios_to_omega(&[0.1, 0.5, 1.0, 2.0, 10.0]), 6),
            ],
            vec![
                Quantity::EntropyS,
                Quantity::ChiE1,
                Quantity::Redundancy,
                Quantity::PointerFidelity,
            ],
            TimeSelection::MaxRedundancy,
        ),
    ]
}

pub fn builtin_figure(tag: &str) -> Result<SweepSpec> {
    builtin_figures()
        .into_iter()
        .find(|s| s.tag == tag)
        .ok_or_else(|| Error::UnknownFigure(tag.to_string()))
}
