use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::output::fmt_num;
use crate::beam::BeamScenario;
use crate::error::{Error, Result};
use crate::malaga::{BlockageConfig, MalagaParams, MixtureExpansion, DEFAULT_EPSILON};

pub const PRESETS: [&str; 3] = ["paper-figures", "beam-moderate", "beam-strong"];

/// Phase-front radius: a number of metres or `"inf"` for a collimated beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Focus {
    Collimated,
    Radius(f64),
}

impl Focus {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Focus::Collimated);
        }
        s.parse::<f64>().map(Focus::Radius).map_err(|_| format!("expected a number or \"inf\", got {s:?}"))
    }

    pub fn radius(self) -> Option<f64> {
        match self {
            Focus::Collimated => None,
            Focus::Radius(r) => Some(r),
        }
    }
}

impl std::fmt::Display for Focus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Focus::Collimated => f.write_str("inf"),
            Focus::Radius(r) => f.write_str(&fmt_num(*r)),
        }
    }
}

impl Serialize for Focus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Focus::Collimated => s.serialize_str("inf"),
            Focus::Radius(r) => s.serialize_f64(*r),
        }
    }
}

impl<'de> Deserialize<'de> for Focus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.as_f64().map(Focus::Radius).ok_or_else(|| serde::de::Error::custom("bad f0")),
            serde_json::Value::String(s) => Focus::parse(&s).map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("f0 must be a number or \"inf\", got {other}"))),
        }
    }
}

/// Scenario keys; every field is optional so layers can be stacked.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f0: Option<Focus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cn2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstacle_d: Option<f64>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr, $($f:ident),*) => {
        ScenarioConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ScenarioConfig {
    /// Values used for any key no layer sets: the `paper-figures` and
    /// `beam-moderate` presets with ρ = 0.5, no blockage and ε = 1e-8.
    pub fn defaults() -> Self {
        let base = ScenarioConfig { rho: Some(0.5), p_b: Some(0.0), epsilon: Some(DEFAULT_EPSILON), ..Default::default() };
        base.overlay(&Self::preset("paper-figures").unwrap()).overlay(&Self::preset("beam-moderate").unwrap())
    }

    pub fn preset(name: &str) -> Result<Self> {
        let moderate = ScenarioConfig {
            w0: Some(0.01),
            f0: Some(Focus::Collimated),
            lambda: Some(1550e-9),
            cn2: Some(1e-14),
            length: Some(1600.0),
            ..Default::default()
        };
        match name {
            "paper-figures" => Ok(ScenarioConfig {
                alpha: Some(4.2),
                beta: Some(3.0),
                omega: Some(0.2),
                xi: Some(1.0),
                delta_phi: Some(0.0),
                normalize: Some(true),
                ..Default::default()
            }),
            "beam-moderate" => Ok(moderate),
            "beam-strong" => Ok(ScenarioConfig { cn2: Some(5e-14), length: Some(800.0), ..moderate }),
            other => Err(Error::InvalidParameter(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESETS.join(", ")
            ))),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("invalid config {}: {e}", path.display())))
    }

    /// Keys set in `top` replace those in `self`.
    pub fn overlay(&self, top: &ScenarioConfig) -> ScenarioConfig {
        overlay_fields!(
            self, top, alpha, beta, rho, omega, xi, delta_phi, normalize, epsilon, p_b, w0, f0, lambda, cn2, length,
            obstacle_d
        )
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let full = Self::defaults().overlay(self);
        let model = MalagaParams::new(
            full.alpha.unwrap(),
            full.beta.unwrap(),
            full.rho.unwrap(),
            full.omega.unwrap(),
            full.xi.unwrap(),
            full.delta_phi.unwrap(),
            full.normalize.unwrap(),
        )?;
        let blockage = BlockageConfig::new(full.p_b.unwrap())?;
        let epsilon = full.epsilon.unwrap();
        let beam = BeamScenario {
            w0: full.w0.unwrap(),
            f0: full.f0.unwrap().radius(),
            lambda: full.lambda.unwrap(),
            cn2: full.cn2.unwrap(),
            length: full.length.unwrap(),
            obstacle_d: full.obstacle_d,
        };
        beam.validate()?;
        Ok(Resolved { config: full, model, blockage, epsilon, beam })
    }

    /// `--key value` pairs for every key that is set.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push(format!("--{k}"));
                out.push(v);
            }
        };
        push("alpha", self.alpha.map(fmt_num));
        push("beta", self.beta.map(fmt_num));
        push("rho", self.rho.map(fmt_num));
        push("omega", self.omega.map(fmt_num));
        push("xi", self.xi.map(fmt_num));
        push("delta-phi", self.delta_phi.map(fmt_num));
        push("normalize", self.normalize.map(|v| v.to_string()));
        push("epsilon", self.epsilon.map(fmt_num));
        push("p-b", self.p_b.map(fmt_num));
        push("w0", self.w0.map(fmt_num));
        push("f0", self.f0.map(|v| v.to_string()));
        push("lambda", self.lambda.map(fmt_num));
        push("cn2", self.cn2.map(fmt_num));
        push("length", self.length.map(fmt_num));
        push("obstacle-d", self.obstacle_d.map(fmt_num));
        out
    }
}

/// A fully specified scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    /// Every key set.
    pub config: ScenarioConfig,
    pub model: MalagaParams,
    pub blockage: BlockageConfig,
    pub epsilon: f64,
    pub beam: BeamScenario,
}

impl Resolved {
    pub fn expansion(&self) -> Result<MixtureExpansion> {
        crate::malaga::mixture_weights(&self.model, self.epsilon)
    }

    pub fn with_rho(&self, rho: f64) -> Resolved {
        let mut r = self.clone();
        r.model.rho = rho;
        r.config.rho = Some(rho);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering_order() {
        let preset = ScenarioConfig::preset("beam-strong").unwrap();
        let file: ScenarioConfig = serde_json::from_str(r#"{"cn2": 2e-14, "rho": 0.8, "f0": "inf"}"#).unwrap();
        let flags = ScenarioConfig { rho: Some(0.9), ..Default::default() };
        let r = preset.overlay(&file).overlay(&flags).resolve().unwrap();
        assert_eq!(r.model.rho, 0.9);
        assert_eq!(r.beam.cn2, 2e-14);
        assert_eq!(r.beam.length, 800.0);
        assert_eq!(r.model.alpha, 4.2);
        assert_eq!(r.beam.f0, None);
    }

    #[test]
    fn unknown_keys_and_presets_are_rejected() {
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"alfa": 1}"#).is_err());
        assert!(ScenarioConfig::preset("fig9").is_err());
        let bad = ScenarioConfig { p_b: Some(1.5), ..Default::default() };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn args_round_trip_through_display() {
        let r = ScenarioConfig { rho: Some(0.1 + 0.2), f0: Some(Focus::Radius(900.5)), ..Default::default() }.resolve().unwrap();
        let args = r.config.to_args();
        let i = args.iter().position(|a| a == "--rho").unwrap();
        assert_eq!(args[i + 1].parse::<f64>().unwrap(), 0.1 + 0.2);
        assert!(args.windows(2).any(|w| w[0] == "--f0" && w[1] == "900.5"));
    }
}
