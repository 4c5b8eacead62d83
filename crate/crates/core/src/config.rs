//! Scenario documents.
//!
//! ```json
//! {
//!   "params":  { "m_b": 5.0, "m_W": 0.5, "b": 0.2, ... },
//!   "initial": { "reduced": { "alpha": 0.15, "p1": 0.0195, "p2": 0.0132 } },
//!   "torques": [ { "t_start": 1.0, "tau1": 0.0875, "tau2": 0.1125 },
//!                { "t_start": 2.0, "tau1": 0.0,    "tau2": 0.0 } ],
//!   "sim":     { "T": 5.0, "dt": 0.001, "model": "full" },
//!   "tolerances": { "max_abs_error": 1e-4 }
//! }
//! ```
//!
//! `initial` takes either a `full` block (positions plus the independent
//! rates `alpha_dot`, `phi1_dot`, `phi2_dot`; the group rates follow from the
//! rolling constraints) or a `reduced` block. Omitted state entries are zero.
//! Unknown keys anywhere are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FullState, Params, ReducedState};
use crate::sim::{Initial, ModelKind, Scenario, TorqueProfile};
use crate::validation::SuiteTolerances;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FullInitial {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub alpha: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub alpha_dot: f64,
    pub phi1_dot: f64,
    pub phi2_dot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReducedInitial {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub alpha_dot: f64,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialBlock {
    Full(FullInitial),
    Reduced(ReducedInitial),
}

impl InitialBlock {
    pub fn resolve(&self, p: &Params) -> Initial {
        match *self {
            InitialBlock::Full(s) => Initial::Full(FullState::on_constraints(
                s.x, s.y, s.theta, s.alpha, s.phi1, s.phi2, s.alpha_dot, s.phi1_dot, s.phi2_dot, p,
            )),
            InitialBlock::Reduced(s) => Initial::Reduced(ReducedState {
                x: s.x,
                y: s.y,
                theta: s.theta,
                phi: s.phi,
                alpha: s.alpha,
                alpha_dot: s.alpha_dot,
                p1: s.p1,
                p2: s.p2,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    #[serde(rename = "T")]
    pub duration: f64,
    pub dt: f64,
    #[serde(default = "default_model")]
    pub model: ModelKind,
}

fn default_model() -> ModelKind {
    ModelKind::Full
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on every compared variable in `compare`.
    pub max_abs_error: f64,
    pub curvature_rel: f64,
    pub pairing_abs: f64,
    pub equivariance_abs: f64,
    pub energy_rel: f64,
    pub momentum_rate_abs: f64,
    pub holonomic_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let s = SuiteTolerances::default();
        Tolerances {
            max_abs_error: 1e-4,
            curvature_rel: s.curvature_rel,
            pairing_abs: s.pairing_abs,
            equivariance_abs: s.equivariance_abs,
            energy_rel: s.energy_rel,
            momentum_rate_abs: s.momentum_rate_abs,
            holonomic_abs: s.holonomic_abs,
        }
    }
}

impl Tolerances {
    pub fn suite(&self) -> SuiteTolerances {
        SuiteTolerances {
            curvature_rel: self.curvature_rel,
            pairing_abs: self.pairing_abs,
            equivariance_abs: self.equivariance_abs,
            energy_rel: self.energy_rel,
            momentum_rate_abs: self.momentum_rate_abs,
            holonomic_abs: self.holonomic_abs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub params: Params,
    pub initial: InitialBlock,
    #[serde(default)]
    pub torques: TorqueProfile,
    pub sim: SimBlock,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let SimBlock { duration, dt, .. } = self.sim;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!("sim.dt must be positive and finite, got {dt}")));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::Config(format!("sim.T must be non-negative and finite, got {duration}")));
        }
        if !(self.tolerances.max_abs_error >= 0.0) {
            return Err(Error::Config("tolerances.max_abs_error must be non-negative".into()));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Config::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn scenario(&self, model: Option<ModelKind>) -> Scenario {
        Scenario {
            model: model.unwrap_or(self.sim.model),
            initial: self.initial.resolve(&self.params),
            profile: self.torques.clone(),
            duration: self.sim.duration,
            dt: self.sim.dt,
            params: self.params,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARAMS: &str = r#""params": {"m_b": 5.0, "m_W": 0.5, "b": 0.2, "r": 0.1, "d": 0.4,
        "I_Bxx": 0.1, "I_Byy": 0.07, "I_Bz": 0.04, "I_Wyy": 0.0025, "I_Wzz": 0.00125, "g": 9.81}"#;

    #[test]
    fn parses_minimal_document() {
        let text = format!(
            r#"{{ {PARAMS}, "initial": {{"full": {{"alpha": 0.1, "phi1_dot": 1.0}}}},
                "sim": {{"T": 1.0, "dt": 0.01}} }}"#
        );
        let cfg = Config::from_json(&text).unwrap();
        assert_eq!(cfg.params, Params::default());
        assert_eq!(cfg.sim.model, ModelKind::Full);
        assert!(cfg.torques.segments().is_empty());
        let Initial::Full(s) = cfg.scenario(None).initial else { panic!() };
        assert!((s.x_dot - 0.05).abs() < 1e-15);
    }

    #[test]
    fn missing_param_is_named() {
        let text = PARAMS.replace(r#""g": 9.81"#, r#""gg": 9.81"#);
        let err = Config::from_json(&format!(
            r#"{{ {text}, "initial": {{"reduced": {{}}}}, "sim": {{"T": 1.0, "dt": 0.01}} }}"#
        ))
        .unwrap_err();
        assert!(err.to_string().contains("gg"), "{err}");
        let text = PARAMS.replace(r#", "g": 9.81"#, "");
        let err = Config::from_json(&format!(
            r#"{{ {text}, "initial": {{"reduced": {{}}}}, "sim": {{"T": 1.0, "dt": 0.01}} }}"#
        ))
        .unwrap_err();
        assert!(err.to_string().contains("`g`"), "{err}");
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn rejects_unordered_torques() {
        let text = format!(
            r#"{{ {PARAMS}, "initial": {{"reduced": {{}}}}, "sim": {{"T": 1.0, "dt": 0.01}},
                "torques": [{{"t_start": 1.0, "tau1": 0, "tau2": 0}}, {{"t_start": 0.5, "tau1": 0, "tau2": 0}}] }}"#
        );
        assert!(Config::from_json(&text).is_err());
    }
}
