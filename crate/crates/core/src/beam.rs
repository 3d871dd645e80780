//! Gaussian-beam spreading through turbulence and obstacle classification.
//!
//! Lengths are in metres, C_n² in m^{-2/3}.

use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamScenario {
    pub w0: f64,
    /// Phase-front radius of curvature; `None` for a collimated beam.
    #[serde(serialize_with = "ser_f0", deserialize_with = "de_f0", default)]
    pub f0: Option<f64>,
    pub lambda: f64,
    pub cn2: f64,
    pub length: f64,
    #[serde(default)]
    pub obstacle_d: Option<f64>,
}

/// Ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockageClass {
    None,
    Los,
    Total,
}

impl std::fmt::Display for BlockageClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockageClass::None => "none",
            BlockageClass::Los => "los",
            BlockageClass::Total => "total",
        })
    }
}

impl BeamScenario {
    pub fn new(w0: f64, f0: Option<f64>, lambda: f64, cn2: f64, length: f64) -> Result<Self> {
        let s = BeamScenario { w0, f0, lambda, cn2, length, obstacle_d: None };
        s.validate()?;
        Ok(s)
    }

    /// 1550 nm, W₀ = 1 cm, collimated, C_n² = 1e-14, L = 1600 m.
    pub fn moderate() -> Self {
        BeamScenario { w0: 0.01, f0: None, lambda: 1550e-9, cn2: 1e-14, length: 1600.0, obstacle_d: None }
    }

    /// 1550 nm, W₀ = 1 cm, collimated, C_n² = 5e-14, L = 800 m.
    pub fn strong() -> Self {
        BeamScenario { cn2: 5e-14, length: 800.0, ..Self::moderate() }
    }

    pub fn with_length(self, length: f64) -> Self {
        BeamScenario { length, ..self }
    }

    pub fn with_obstacle(self, d: f64) -> Self {
        BeamScenario { obstacle_d: Some(d), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.w0 > 0.0) || !self.w0.is_finite() {
            return bad(format!("w0 must be positive, got {}", self.w0));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.cn2 >= 0.0) || !self.cn2.is_finite() {
            return bad(format!("cn2 must be non-negative, got {}", self.cn2));
        }
        if !(self.length > 0.0) || !self.length.is_finite() {
            return bad(format!("length must be positive, got {}", self.length));
        }
        if let Some(f0) = self.f0 {
            if !(f0 > 0.0) {
                return bad(format!("f0 must be positive or \"inf\", got {f0}"));
            }
        }
        if let Some(d) = self.obstacle_d {
            if !(d >= 0.0) || !d.is_finite() {
                return bad(format!("obstacle_d must be non-negative, got {d}"));
            }
        }
        Ok(())
    }

    pub fn wave_number(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    /// Free-space beam radius W(L).
    pub fn beam_radius(&self) -> f64 {
        let focus = match self.f0 {
            Some(f0) if f0.is_finite() => 1.0 - self.length / f0,
            _ => 1.0,
        };
        let diffraction = 2.0 * self.length / (self.wave_number() * self.w0 * self.w0);
        self.w0 * focus.hypot(diffraction)
    }

    /// σ₁² = 1.23 C_n² k^{7/6} L^{11/6}.
    pub fn rytov_variance(&self) -> f64 {
        1.23 * self.cn2 * self.wave_number().powf(7.0 / 6.0) * self.length.powf(11.0 / 6.0)
    }

    /// W_e = W √(1 + 1.625 σ₁^{12/5} Λ) with Λ = 2L/(kW²).
    pub fn effective_beam_radius(&self) -> f64 {
        let w = self.beam_radius();
        let lambda_param = 2.0 * self.length / (self.wave_number() * w * w);
        w * (1.0 + 1.625 * self.rytov_variance().powf(1.2) * lambda_param).sqrt()
    }

    /// Plane-wave coherence radius ρ₀ = (1.46 C_n² k² L)^{-3/5}; infinite without turbulence.
    pub fn coherence_radius(&self) -> f64 {
        if self.cn2 == 0.0 {
            return f64::INFINITY;
        }
        (1.46 * self.cn2 * self.wave_number().powi(2) * self.length).powf(-0.6)
    }

    /// Smallest obstacle that blocks the whole beam, D_b = 2W_e.
    pub fn total_blockage_diameter(&self) -> f64 {
        2.0 * self.effective_beam_radius()
    }

    /// Obstacle that blocks the coherent disc, D_c = 2ρ₀.
    pub fn los_blockage_diameter(&self) -> f64 {
        2.0 * self.coherence_radius()
    }

    /// Total when D ≥ D_b, LOS when D_c ≤ D < D_b, none below D_c.
    pub fn classify_diameter(&self, d: f64) -> BlockageClass {
        if d >= self.total_blockage_diameter() {
            BlockageClass::Total
        } else if d >= self.los_blockage_diameter() {
            BlockageClass::Los
        } else {
            BlockageClass::None
        }
    }

    pub fn classify_blockage(&self) -> Result<BlockageClass> {
        match self.obstacle_d {
            Some(d) => Ok(self.classify_diameter(d)),
            None => Err(Error::InvalidParameter("classify_blockage needs obstacle_d".into())),
        }
    }

    /// Caveats that apply to this scenario; currently the plane-wave
    /// assumption behind ρ₀, which needs L well beyond the Rayleigh range.
    pub fn warnings(&self) -> Vec<String> {
        let rayleigh = 0.5 * self.wave_number() * self.w0 * self.w0;
        if self.length < 10.0 * rayleigh {
            vec![format!(
                "L = {} m is below 10 Rayleigh ranges ({:.1} m); the plane-wave coherence radius is approximate",
                self.length,
                10.0 * rayleigh
            )]
        } else {
            Vec::new()
        }
    }
}

pub fn beam_radius(s: &BeamScenario) -> f64 {
    s.beam_radius()
}

pub fn rytov_variance(s: &BeamScenario) -> f64 {
    s.rytov_variance()
}

pub fn effective_beam_radius(s: &BeamScenario) -> f64 {
    s.effective_beam_radius()
}

pub fn coherence_radius(s: &BeamScenario) -> f64 {
    s.coherence_radius()
}

pub fn classify_blockage(s: &BeamScenario) -> Result<BlockageClass> {
    s.classify_blockage()
}

fn ser_f0<S: Serializer>(f0: &Option<f64>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match f0 {
        Some(v) if v.is_finite() => ser.serialize_f64(*v),
        _ => ser.serialize_str("inf"),
    }
}

fn de_f0<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(de)? {
        None => Ok(None),
        Some(Raw::Num(v)) => Ok(Some(v)),
        Some(Raw::Text(t)) if t.eq_ignore_ascii_case("inf") => Ok(None),
        Some(Raw::Text(t)) => Err(serde::de::Error::custom(format!("f0 must be a number or \"inf\", got {t:?}"))),
    }
}
