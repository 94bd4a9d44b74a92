//! TOML run configuration.
//!
//! A config describes one sweep. Panel keys may sit at the top level (a
//! single panel) or in `[[panels]]` tables; every key has a default, so
//! `p = [0]` alone is a complete config.
//!
//! ```toml
//! tag = "custom"                  # output file stem, default "sweep"
//! selection = "max-redundancy"    # or "series"
//! quantities = ["entropy_s", "chi_e1", "redundancy"]
//!
//! scenario = "circle-left"        # or a table / array of tables, see below
//! p = [0.0, 0.5, 1.0]
//! omega = [0.1]                   # or omega_over_gamma = [0.1, 1, 10]
//! gamma = [0.1]
//! n = [8]
//!
//! [time_grid]
//! points = 400
//! gamma_t_max = 6.283185307179586
//!
//! [redundancy]
//! delta = 0.9
//! threshold_mode = "literal"      # or "strict"
//! quantifier = "holevo"           # or "two-sided"
//! min_entropy = 1e-6
//! ```
//!
//! Scenarios: `"circle-left"`, `{ kind = "amplitude", x0 = [0.5, 0.7] }`,
//! `{ kind = "phase", angle = [0.0, 1.5707963] }` (φ = e^{i·angle}).

use std::path::Path;

use qdarwin_core::experiments::{Panel, Quantity, SweepSpec, TimeSelection};
use qdarwin_core::{InitialScenario, RedundancyConfig, TimeGrid};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub tag: Option<String>,
    pub selection: Option<String>,
    pub quantities: Option<Vec<String>>,
    pub scenario: Option<ScenarioSpec>,
    pub p: Option<Vec<f64>>,
    pub omega: Option<Vec<f64>>,
    pub omega_over_gamma: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
    pub panels: Option<Vec<PanelConfig>>,
    pub time_grid: Option<TimeGridConfig>,
    pub redundancy: Option<RedundancyConfigToml>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelConfig {
    pub label: Option<String>,
    pub scenario: Option<ScenarioSpec>,
    pub p: Option<Vec<f64>>,
    pub omega: Option<Vec<f64>>,
    pub omega_over_gamma: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ScenarioSpec {
    Name(String),
    One(ScenarioTable),
    Many(Vec<ScenarioTable>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioTable {
    pub kind: String,
    pub x0: Option<Vec<f64>>,
    pub angle: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    pub points: Option<usize>,
    pub gamma_t_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedundancyConfigToml {
    pub delta: Option<f64>,
    pub threshold_mode: Option<String>,
    pub quantifier: Option<String>,
    pub min_entropy: Option<f64>,
}

const DEFAULT_GAMMA: f64 = 0.1;
const DEFAULT_N: usize = 8;

fn config_err(path: impl Into<String>, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {reason}", path.into()))
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let msg = e.message().trim().to_string();
        match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                CliError::Config(format!("parse error at line {line}, column {col}: {msg}"))
            }
            None => CliError::Config(format!("parse error: {msg}")),
        }
    })
}

pub fn load_config(path: &Path) -> Result<SweepSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)?.into_spec()
}

fn scenarios(spec: Option<&ScenarioSpec>, path: &str) -> Result<Vec<InitialScenario>, CliError> {
    let tables: Vec<&ScenarioTable> = match spec {
        None => return Ok(vec![InitialScenario::CircleLeft]),
        Some(ScenarioSpec::Name(name)) => {
            return match name.as_str() {
                "circle-left" => Ok(vec![InitialScenario::CircleLeft]),
                other => Err(config_err(
                    path,
                    format!("unknown scenario `{other}` (a bare name must be circle-left)"),
                )),
            }
        }
        Some(ScenarioSpec::One(t)) => vec![t],
        Some(ScenarioSpec::Many(ts)) => ts.iter().collect(),
    };
    let mut out = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let here = format!("{path}[{i}]");
        match t.kind.as_str() {
            "circle-left" => out.push(InitialScenario::CircleLeft),
            "amplitude" => {
                let xs = t.x0.as_ref().ok_or_else(|| config_err(&here, "amplitude needs x0"))?;
                out.extend(xs.iter().map(|&x0| InitialScenario::Amplitude { x0 }));
            }
            "phase" => {
                let angles = t.angle.as_ref().ok_or_else(|| config_err(&here, "phase needs angle"))?;
                out.extend(angles.iter().map(|&a| InitialScenario::phase_angle(a)));
            }
            other => return Err(config_err(format!("{here}.kind"), format!("unknown scenario kind `{other}`"))),
        }
    }
    Ok(out)
}

impl PanelConfig {
    fn into_panel(self, label: String, path: &str) -> Result<Panel, CliError> {
        let gamma = self.gamma.unwrap_or_else(|| vec![DEFAULT_GAMMA]);
        let omega = match (self.omega, self.omega_over_gamma) {
            (Some(_), Some(_)) => {
                return Err(config_err(
                    format!("{path}omega_over_gamma"),
                    "give either omega or omega_over_gamma, not both",
                ))
            }
            (Some(w), None) => w,
            (None, Some(ratios)) => {
                if gamma.len() != 1 {
                    return Err(config_err(
                        format!("{path}omega_over_gamma"),
                        "needs a single gamma value",
                    ));
                }
                ratios.iter().map(|r| r * gamma[0]).collect()
            }
            (None, None) => vec![DEFAULT_GAMMA],
        };
        Ok(Panel {
            label,
            scenarios: scenarios(self.scenario.as_ref(), &format!("{path}scenario"))?,
            p: self.p.unwrap_or_else(|| vec![0.0]),
            omega,
            gamma,
            n: self.n.unwrap_or_else(|| vec![DEFAULT_N]),
        })
    }

    fn is_empty(&self) -> bool {
        self.scenario.is_none()
            && self.p.is_none()
            && self.omega.is_none()
            && self.omega_over_gamma.is_none()
            && self.gamma.is_none()
            && self.n.is_none()
    }
}

impl RunConfig {
    pub fn into_spec(self) -> Result<SweepSpec, CliError> {
        let selection = match self.selection.as_deref() {
            None => TimeSelection::MaxRedundancy,
            Some(s) => s.parse().map_err(|e| config_err("selection", reason(e)))?,
        };
        let quantities = match self.quantities {
            None => vec![Quantity::EntropyS, Quantity::ChiE1, Quantity::Redundancy],
            Some(qs) => qs
                .iter()
                .enumerate()
                .map(|(i, q)| q.parse().map_err(|e| config_err(format!("quantities[{i}]"), reason(e))))
                .collect::<Result<_, _>>()?,
        };
        let top = PanelConfig {
            label: None,
            scenario: self.scenario,
            p: self.p,
            omega: self.omega,
            omega_over_gamma: self.omega_over_gamma,
            gamma: self.gamma,
            n: self.n,
        };
        let panels = match self.panels {
            Some(named) => {
                if !top.is_empty() {
                    return Err(config_err(
                        "panels",
                        "top-level panel keys cannot be combined with [[panels]]",
                    ));
                }
                named
                    .into_iter()
                    .enumerate()
                    .map(|(i, mut panel)| {
                        let label = panel.label.take().unwrap_or_else(|| format!("panel{i}"));
                        panel.into_panel(label, &format!("panels[{i}]."))
                    })
                    .collect::<Result<_, _>>()?
            }
            None => vec![top.into_panel("main".into(), "")?],
        };
        let mut time_grid = TimeGrid::default();
        if let Some(tg) = self.time_grid {
            if let Some(points) = tg.points {
                time_grid.points = points;
            }
            if let Some(max) = tg.gamma_t_max {
                time_grid.gamma_t_max = max;
            }
        }
        let mut redundancy = RedundancyConfig::default();
        if let Some(r) = self.redundancy {
            if let Some(d) = r.delta {
                redundancy.delta = d;
            }
            if let Some(m) = r.threshold_mode {
                redundancy.threshold_mode =
                    m.parse().map_err(|e| config_err("redundancy.threshold_mode", reason(e)))?;
            }
            if let Some(q) = r.quantifier {
                redundancy.quantifier = q.parse().map_err(|e| config_err("redundancy.quantifier", reason(e)))?;
            }
            if let Some(m) = r.min_entropy {
                redundancy.min_entropy = m;
            }
        }
        let spec = SweepSpec {
            tag: self.tag.unwrap_or_else(|| "sweep".into()),
            panels,
            time_grid,
            redundancy,
            quantities,
            selection,
        };
        spec.validate().map_err(|e| match e {
            qdarwin_core::Error::Spec { path, reason } => config_err(path, reason),
            other => CliError::Config(other.to_string()),
        })?;
        if spec.tag.contains(['/', '\\']) || spec.tag.starts_with('.') {
            return Err(config_err("tag", "must be a plain file stem"));
        }
        Ok(spec)
    }
}

fn reason(e: qdarwin_core::Error) -> String {
    match e {
        qdarwin_core::Error::InvalidParameter { reason, .. } => reason,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> Result<SweepSpec, CliError> {
        parse_config(text)?.into_spec()
    }

    fn message(e: CliError) -> String {
        match e {
            CliError::Config(m) => m,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let s = spec("p = [0]").unwrap();
        assert_eq!(s.panels.len(), 1);
        assert_eq!(s.panels[0].n, vec![8]);
        assert_eq!(s.panels[0].scenarios, vec![InitialScenario::CircleLeft]);
        assert_eq!(s.selection, TimeSelection::MaxRedundancy);
        assert_eq!(s.redundancy, RedundancyConfig::default());
    }

    #[test]
    fn delta_out_of_range_names_the_field() {
        let m = message(spec("p = [0]\n[redundancy]\ndelta = 1.5\n").unwrap_err());
        assert!(m.starts_with("redundancy.delta"), "{m}");
        assert!(m.contains("delta out of range"), "{m}");
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let m = message(spec("p = [0]\nn = = 8\n").unwrap_err());
        assert!(m.contains("line 2"), "{m}");
        assert!(m.contains("column"), "{m}");
        let m = message(spec("p = [0]\nbogus = 1\n").unwrap_err());
        assert!(m.contains("line 2"), "{m}");
    }

    #[test]
    fn panels_and_scenario_tables() {
        let text = r#"
tag = "mixed"
[[panels]]
label = "a"
scenario = { kind = "amplitude", x0 = [0.5, 0.9] }
p = [0, 1]
n = [3]
[[panels]]
scenario = [{ kind = "phase", angle = [0.0] }, { kind = "circle-left" }]
omega_over_gamma = [0.1, 10]
n = [3]
"#;
        let s = spec(text).unwrap();
        assert_eq!(s.panels.len(), 2);
        assert_eq!(s.panels[0].scenarios.len(), 2);
        assert_eq!(s.panels[1].label, "panel1");
        assert_eq!(s.panels[1].scenarios.len(), 2);
        assert!((s.panels[1].omega[1] - 1.0).abs() < 1e-12);
        assert_eq!(s.point_count(), 4 + 4);
    }

    #[test]
    fn semantic_errors_use_field_paths() {
        let m = message(spec("[[panels]]\np = [2.0]\n").unwrap_err());
        assert!(m.starts_with("panels[0].p"), "{m}");
        let m = message(spec("p = [0]\nquantities = [\"chi\"]\n").unwrap_err());
        assert!(m.starts_with("quantities[0]"), "{m}");
        let m = message(spec("p = [0]\nscenario = \"up\"\n").unwrap_err());
        assert!(m.starts_with("scenario"), "{m}");
        let m = message(spec("p = [0]\n[time_grid]\npoints = 0\n").unwrap_err());
        assert!(m.starts_with("time_grid"), "{m}");
    }
}
