//! Surface selection: catalog ids on the command line or strict JSON configs.

use std::collections::BTreeMap;
use std::path::Path;

use loxoforge_core::surface::{profile_from_expr_constraint, ConstraintOptions};
use loxoforge_core::verify::Tolerances;
use loxoforge_core::{build_catalog_surface, Family, InvariantSurface, ProfileCurve, ProfileExpr};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_EPS_DOM: f64 = 1e-4;
/// Allowed `|g̃(γ̃′, γ̃′) − 1|` for profiles given in closed form.
const UNIT_SPEED_EXPR: f64 = 1e-8;
/// Interpolated grids only reach the unit-speed law up to their spline error.
const UNIT_SPEED_SAMPLED: f64 = 1e-6;
const UNIT_SPEED_POINTS: usize = 50;
const TOL_ENV_PREFIX: &str = "LOXOFORGE_TOL_";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub id: Option<String>,
    /// Family name; optional for catalog profiles.
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub axis: Option<[f64; 3]>,
    pub profile: ProfileConfig,
    #[serde(default)]
    pub eps_dom: Option<f64>,
    #[serde(default)]
    pub suite_span: Option<[f64; 2]>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(default)]
    pub catalog_id: Option<String>,
    #[serde(default, alias = "xi1_expr")]
    pub xi1: Option<String>,
    /// `"constraint"` or an expression in `u`.
    #[serde(default)]
    pub xi2: Option<String>,
    #[serde(default)]
    pub u_min: Option<f64>,
    #[serde(default)]
    pub u_max: Option<f64>,
    #[serde(default)]
    pub xi2_sign: Option<f64>,
    #[serde(default)]
    pub xi2_0: Option<f64>,
    #[serde(default)]
    pub u_ref: Option<f64>,
    #[serde(default)]
    pub sampled: Option<SampledGrid>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledGrid {
    pub u: Vec<f64>,
    pub xi1: Vec<f64>,
    pub xi2: Vec<f64>,
}

/// A resolved surface plus the settings that travel with it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub surface: InvariantSurface,
    pub eps_dom: f64,
    pub tol: Tolerances,
}

fn parse_expr(what: &str, src: &str) -> Result<ProfileExpr> {
    ProfileExpr::parse(src).map_err(|e| CliError::config(format!("{what}: {e}")))
}

impl SurfaceConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SurfaceConfig =
            serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid surface config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn build(&self) -> Result<InvariantSurface> {
        let p = &self.profile;
        let constraint_opts = p.xi2_sign.is_some() || p.xi2_0.is_some() || p.u_ref.is_some();
        let surface = if let Some(id) = &p.catalog_id {
            if p.xi1.is_some() || p.xi2.is_some() || p.sampled.is_some() || p.u_min.is_some() || p.u_max.is_some() {
                return Err(CliError::config("a catalog profile takes no other profile fields"));
            }
            if constraint_opts || self.axis.is_some() {
                return Err(CliError::config("a catalog profile takes no constraint options or axis"));
            }
            let s = build_catalog_surface(id, &self.params)?;
            if let Some(f) = &self.family {
                if f != s.family().name() {
                    return Err(CliError::config(format!(
                        "catalog surface `{id}` belongs to family {}, config says {f}",
                        s.family().name()
                    )));
                }
            }
            s
        } else {
            let name = self
                .family
                .as_deref()
                .ok_or_else(|| CliError::config("a custom profile needs `family`"))?;
            let family = Family::from_name(name, &self.params, self.axis)?;
            let profile = self.custom_profile(family)?;
            InvariantSurface::new(self.id.clone().unwrap_or_else(|| "custom".into()), family, profile)?
        };
        let surface = match self.suite_span {
            Some([lo, hi]) => surface.with_suite_span(lo, hi)?,
            None => surface,
        };
        let tol = match (&p.sampled, p.xi2.as_deref()) {
            (Some(_), _) => Some(UNIT_SPEED_SAMPLED),
            (None, Some(x)) if x != "constraint" => Some(UNIT_SPEED_EXPR),
            _ => None,
        };
        if let Some(tol) = tol {
            check_unit_speed(&surface, tol)?;
        }
        Ok(surface)
    }

    fn custom_profile(&self, family: Family) -> Result<ProfileCurve> {
        let p = &self.profile;
        if let Some(g) = &p.sampled {
            if p.xi1.is_some() || p.xi2.is_some() || p.u_min.is_some() || p.u_max.is_some() {
                return Err(CliError::config("a sampled profile takes its domain from the grid"));
            }
            if g.u.len() != g.xi1.len() || g.u.len() != g.xi2.len() {
                return Err(CliError::config("sampled grid columns differ in length"));
            }
            return Ok(ProfileCurve::sampled(&g.u, &g.xi1, &g.xi2)?);
        }
        let xi1 = p.xi1.as_deref().ok_or_else(|| CliError::config("profile needs `xi1` or `sampled`"))?;
        let xi1 = parse_expr("xi1", xi1)?;
        let (Some(u_min), Some(u_max)) = (p.u_min, p.u_max) else {
            return Err(CliError::config("an expression profile needs `u_min` and `u_max`"));
        };
        if !(u_min < u_max) {
            return Err(CliError::config(format!("need u_min < u_max, got {u_min} and {u_max}")));
        }
        match p.xi2.as_deref() {
            None => Err(CliError::config("profile needs `xi2` (\"constraint\" or an expression)")),
            Some("constraint") => {
                let opts = ConstraintOptions {
                    xi2_0: p.xi2_0.unwrap_or(0.0),
                    u_ref: p.u_ref,
                    xi2_sign: p.xi2_sign.unwrap_or(1.0),
                };
                Ok(profile_from_expr_constraint(family, &xi1, u_min, u_max, opts)?)
            }
            Some(src) => {
                if p.xi2_sign.is_some() || p.xi2_0.is_some() || p.u_ref.is_some() {
                    return Err(CliError::config("xi2_sign, xi2_0 and u_ref apply only to xi2 = \"constraint\""));
                }
                let xi2 = parse_expr("xi2", src)?;
                Ok(ProfileCurve::from_exprs(&xi1, &xi2, u_min, u_max)?)
            }
        }
    }
}

/// Loxodrome tracing assumes the profile is parametrised by arc length in the
/// orbit-space metric, so user profiles that are not get rejected up front.
fn check_unit_speed(s: &InvariantSurface, tol: f64) -> Result<()> {
    for u in s.sample_params(UNIT_SPEED_POINTS) {
        let q = s.analytic_coeffs(u)?.quotient_speed_sq();
        if !((q - 1.0).abs() <= tol) {
            return Err(CliError::config(format!(
                "profile is not unit speed in the orbit-space metric: |gamma'|^2 = {q} at u = {u}; \
                 use xi2 = \"constraint\" to solve for xi2"
            )));
        }
    }
    Ok(())
}

/// Applies `LOXOFORGE_TOL_<KEY>` variables on top of `tol`.
pub fn apply_env(tol: &mut Tolerances, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
    for (k, v) in vars {
        let Some(key) = k.strip_prefix(TOL_ENV_PREFIX) else {
            continue;
        };
        let key = key.to_ascii_lowercase();
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("{k}: `{v}` is not a number")))?;
        tol.set(&key, value).map_err(|e| CliError::config(format!("{k}: {e}")))?;
    }
    Ok(())
}

/// Resolves `--surface`: an existing file or a `.json` path is read as a
/// config, anything else is a catalog id.
pub fn load(spec: &str, params: &[(String, f64)], eps_dom: Option<f64>) -> Result<Loaded> {
    let path = Path::new(spec);
    let is_file = path.is_file() || spec.ends_with(".json");
    let (surface, cfg_eps, cfg_tol) = if is_file {
        if !params.is_empty() {
            return Err(CliError::config("--param applies to catalog ids; put parameters in the config"));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg = SurfaceConfig::from_json(&text)?;
        (cfg.build()?, cfg.eps_dom, cfg.tolerances)
    } else {
        let map: BTreeMap<String, f64> = params.iter().cloned().collect();
        (build_catalog_surface(spec, &map)?, None, None)
    };
    let eps_dom = eps_dom.or(cfg_eps).unwrap_or(DEFAULT_EPS_DOM);
    if !(eps_dom >= 0.0 && eps_dom.is_finite()) {
        return Err(CliError::config(format!("eps_dom must be a non-negative number, got {eps_dom}")));
    }
    let mut tol = cfg_tol.unwrap_or_default();
    apply_env(&mut tol, std::env::vars())?;
    Ok(Loaded { surface, eps_dom, tol })
}
