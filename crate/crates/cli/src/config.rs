use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use ghmtq::expr::ExprField;
use ghmtq::geometry::{ClosedCurve, Signature};
use ghmtq::quantization::{EulerDomain, GridSpec, Patch, RegularityThresholds};
use ghmtq::solutions::{
    AvtdConfig, AvtdMetric, EinsteinRosen, ExtensionField, Family, Gowdy, Schwarzschild, StationaryAxisymmetric,
    ThetaFn,
};
use ghmtq::tolerances::Tolerances;
use ghmtq::{Axis, ScalarField2};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::custom::CustomMetric;

/// Prefix of the environment variables that override tolerance knobs.
pub const ENV_PREFIX: &str = "GHMTQ_TOL_";

pub const FAMILIES: [&str; 7] = [
    "axisym",
    "schwarzschild",
    "gowdy_avtd",
    "gowdy_avtd_metric",
    "einstein_rosen",
    "weyl_static",
    "custom_metric",
];

/// Raised for anything wrong with the configuration or the command line;
/// maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameChoice {
    /// The family's closed-form frame where it has one.
    #[default]
    Auto,
    Family,
    LowerTriangular,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    /// Treat field-equation, conservation and integrability residuals as
    /// pass/fail checks. Defaults to false for `gowdy_avtd`, whose
    /// configurations solve the equations only asymptotically.
    pub on_shell: Option<bool>,
    /// Number of reconstruction paths for the quadrature potential.
    pub paths: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeSection {
    /// Expression in the chart coordinates the R column is compared with.
    pub reference_ricci: Option<String>,
    pub regularity: RegularityThresholds,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerSection {
    pub patches: Vec<Patch>,
    #[serde(default = "default_euler_resolution")]
    pub resolution: usize,
    pub expected: Option<i64>,
}

fn default_euler_resolution() -> usize {
    16
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    /// Name of the numeric family parameter that is swept.
    pub param: Option<String>,
    pub values: Vec<f64>,
    pub loops: Vec<ClosedCurve>,
    pub euler_domain: Option<EulerDomain>,
    pub euler_resolution: usize,
    pub holonomy_steps: usize,
    pub single_valued_gauge: bool,
    pub bisection_steps: usize,
    /// Number of constraints the family sweep is expected to produce.
    pub expected_constraints: usize,
    pub synthetic_control: bool,
    pub control_values: Vec<f64>,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            param: None,
            values: Vec::new(),
            loops: Vec::new(),
            euler_domain: None,
            euler_resolution: 8,
            holonomy_steps: 64,
            single_valued_gauge: true,
            bisection_steps: 50,
            expected_constraints: 0,
            synthetic_control: false,
            control_values: (0..=20).map(|i| 0.1 * i as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    #[serde(default)]
    pub params: toml::Table,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub frame: FrameChoice,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub verify: Option<VerifySection>,
    pub analyze: Option<AnalyzeSection>,
    pub euler: Option<EulerSection>,
    pub scan: Option<ScanSection>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        let env: BTreeMap<String, String> = std::env::vars().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
        Self::parse(&text, &env)
    }

    /// Parses and validates a configuration, applying tolerance overrides
    /// from `env` (variables named `GHMTQ_TOL_<KEY>`).
    pub fn parse(text: &str, env: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| cfg_err(format!("invalid config: {e}")))?;
        for (k, v) in env {
            let Some(key) = k.strip_prefix(ENV_PREFIX) else { continue };
            let key = key.to_ascii_lowercase();
            let value: f64 = v.trim().parse().map_err(|_| cfg_err(format!("{k}: '{v}' is not a number")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(cfg_err(format!("{k}: tolerance must be positive and finite, got {v}")));
            }
            if !cfg.tolerances.set(&key, value) {
                return Err(cfg_err(format!(
                    "{k}: unknown tolerance key '{key}' (expected one of {})",
                    Tolerances::KEYS.join(", ")
                )));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !FAMILIES.contains(&self.family.as_str()) {
            return Err(cfg_err(format!("unknown family '{}' (expected one of {})", self.family, FAMILIES.join(", "))));
        }
        for key in Tolerances::KEYS {
            let v = tolerance_value(&self.tolerances, key);
            if !(v.is_finite() && v > 0.0) {
                return Err(cfg_err(format!("tolerance '{key}' must be positive and finite, got {v}")));
            }
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(|e| cfg_err(e.to_string()))?;
        }
        self.build_family()?;
        Ok(())
    }

    pub fn build_family(&self) -> Result<Arc<dyn Family>, ConfigError> {
        build_family(&self.family, &self.params)
    }

    /// The configured grid, or the family's default one.
    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        if let Some(g) = &self.grid {
            return Ok(g.clone());
        }
        let two_pi = 2.0 * PI;
        Ok(match self.family.as_str() {
            "schwarzschild" => GridSpec::new([2.5, 10.0], [0.0, two_pi], [32, 32]).periodic(Axis::X2),
            "gowdy_avtd" => GridSpec::new([0.0, 5.0], [0.0, two_pi], [32, 16]).periodic(Axis::X2),
            "gowdy_avtd_metric" => GridSpec::new([-2.0, 2.0], [0.0, two_pi], [32, 16]).periodic(Axis::X2),
            "einstein_rosen" => GridSpec::new([-1.0, 1.0], [0.5, 3.0], [24, 24]),
            "axisym" | "weyl_static" => GridSpec::new([0.5, 3.0], [-2.0, 2.0], [24, 24]),
            _ => return Err(cfg_err(format!("family '{}' has no default grid: add a [grid] table", self.family))),
        })
    }
}

fn tolerance_value(t: &Tolerances, key: &str) -> f64 {
    match key {
        "residual" => t.residual,
        "conservation" => t.conservation,
        "identity" => t.identity,
        "oracle" => t.oracle,
        "zero_connection" => t.zero_connection,
        "frame" => t.frame,
        "holonomy" => t.holonomy,
        "euler" => t.euler,
        "path" => t.path,
        "flatness" => t.flatness,
        "winding_variation" => t.winding_variation,
        _ => f64::NAN,
    }
}

fn params<T: DeserializeOwned>(family: &str, table: &toml::Table) -> Result<T, ConfigError> {
    T::deserialize(toml::Value::Table(table.clone()))
        .map_err(|e| cfg_err(format!("invalid [params] for family '{family}': {e}")))
}

fn expr(src: &str, names: [&str; 2]) -> Result<Arc<dyn ScalarField2>, ConfigError> {
    ExprField::parse(src, names)
        .map(|f| Arc::new(f) as Arc<dyn ScalarField2>)
        .map_err(|e| cfg_err(format!("expression '{src}': {e}")))
}

/// A number stands for a constant function of θ.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum ThetaSpec {
    Number(f64),
    Fn(ThetaFn),
}

impl From<ThetaSpec> for ThetaFn {
    fn from(s: ThetaSpec) -> Self {
        match s {
            ThetaSpec::Number(c) => ThetaFn::Const { c },
            ThetaSpec::Fn(f) => f,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchwarzschildParams {
    m: f64,
    #[serde(default = "cartesian")]
    extension: ExtensionField,
}

fn cartesian() -> ExtensionField {
    ExtensionField::Cartesian
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GowdyParams {
    a: Option<ThetaSpec>,
    b: Option<ThetaSpec>,
    c: Option<ThetaSpec>,
    d: Option<ThetaSpec>,
    /// Arbitrary `P(t, θ)` and `Q(t, θ)` instead of the AVTD functions.
    p: Option<String>,
    q: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EinsteinRosenParams {
    /// Amplitude of the exact solution.
    amplitude: Option<f64>,
    psi: Option<String>,
    omega: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisymParams {
    f: String,
    omega: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeylParams {
    /// Curzon particle of this mass.
    curzon_mass: Option<f64>,
    psi: Option<String>,
    extension: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomParams {
    h11: String,
    #[serde(default = "zero")]
    h12: String,
    h22: String,
    signature: Signature,
    #[serde(default = "default_names")]
    coordinates: [String; 2],
}

fn zero() -> String {
    "0".into()
}

fn default_names() -> [String; 2] {
    ["x1".into(), "x2".into()]
}

fn lib(e: ghmtq::Error) -> ConfigError {
    cfg_err(e.to_string())
}

pub fn build_family(family: &str, table: &toml::Table) -> Result<Arc<dyn Family>, ConfigError> {
    Ok(match family {
        "schwarzschild" => {
            let p: SchwarzschildParams = params(family, table)?;
            Arc::new(Schwarzschild::new(p.m, p.extension).map_err(lib)?)
        }
        "gowdy_avtd" => {
            let p: GowdyParams = params(family, table)?;
            match (p.p, p.q) {
                (Some(ps), Some(qs)) => {
                    if p.a.is_some() || p.b.is_some() || p.c.is_some() || p.d.is_some() {
                        return Err(cfg_err("gowdy_avtd: give either p and q or the functions a, b, c, d"));
                    }
                    let n = ["t", "theta"];
                    Arc::new(Gowdy::new(expr(&ps, n)?, expr(&qs, n)?).map_err(lib)?)
                }
                (None, None) => {
                    let s = AvtdConfig::standard();
                    let cfg = AvtdConfig {
                        a: p.a.map_or(s.a, Into::into),
                        b: p.b.map_or(s.b, Into::into),
                        c: p.c.map_or(s.c, Into::into),
                        d: p.d.map_or(s.d, Into::into),
                    };
                    Arc::new(Gowdy::avtd(cfg).map_err(lib)?)
                }
                _ => return Err(cfg_err("gowdy_avtd: p and q must be given together")),
            }
        }
        "gowdy_avtd_metric" => {
            let _: BTreeMap<String, toml::Value> = params(family, table)?;
            if !table.is_empty() {
                return Err(cfg_err("gowdy_avtd_metric takes no parameters"));
            }
            Arc::new(AvtdMetric)
        }
        "einstein_rosen" => {
            let p: EinsteinRosenParams = params(family, table)?;
            match (p.amplitude, p.psi, p.omega) {
                (Some(k), None, None) => Arc::new(EinsteinRosen::exact(k).map_err(lib)?),
                (None, Some(psi), Some(omega)) => {
                    let n = ["t", "rho"];
                    Arc::new(EinsteinRosen::new(expr(&psi, n)?, expr(&omega, n)?).map_err(lib)?)
                }
                _ => return Err(cfg_err("einstein_rosen: give either amplitude or both psi and omega")),
            }
        }
        "axisym" => {
            let p: AxisymParams = params(family, table)?;
            let n = ["rho", "z"];
            Arc::new(StationaryAxisymmetric::stationary(expr(&p.f, n)?, expr(&p.omega, n)?).map_err(lib)?)
        }
        "weyl_static" => {
            let p: WeylParams = params(family, table)?;
            let n = ["rho", "z"];
            let ext = p.extension.as_deref().map(|s| expr(s, n)).transpose()?;
            match (p.curzon_mass, p.psi) {
                (Some(m), None) => Arc::new(StationaryAxisymmetric::curzon(m, ext).map_err(lib)?),
                (None, Some(psi)) => Arc::new(StationaryAxisymmetric::weyl_static(expr(&psi, n)?, ext).map_err(lib)?),
                _ => return Err(cfg_err("weyl_static: give either curzon_mass or psi")),
            }
        }
        "custom_metric" => {
            let p: CustomParams = params(family, table)?;
            let n = [p.coordinates[0].as_str(), p.coordinates[1].as_str()];
            Arc::new(CustomMetric::new([expr(&p.h11, n)?, expr(&p.h12, n)?, expr(&p.h22, n)?], p.signature))
        }
        other => return Err(cfg_err(format!("unknown family '{other}' (expected one of {})", FAMILIES.join(", ")))),
    })
}
