//! Per-family lifts, quotient metrics and pull-back coefficients.
//!
//! `ξ₁` is always the coordinate the user prescribes and `ξ₂` the one the
//! unit-speed constraint determines. For the `G₂₄` family of H²×R this means
//! `ξ₁ = y` and `ξ₂ = bx − z` along the lift.

use std::collections::BTreeMap;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpace, Killing, Point3};
use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// R³, translation along a unit axis.
    Translation { axis: [f64; 3] },
    /// R³, helicoidal motion of pitch `a` (rotation when `a = 0`).
    Helicoidal { a: f64 },
    /// BCV space, rotation about the z-axis; `ξ₁ = f` is the Euclidean radius.
    Bcv { ell: f64, m: f64 },
    /// H²×R, `a X₂ + b X₄` with `a ≠ 0`.
    G24 { a: f64, b: f64 },
    /// H²×R, `X₃ + b X₄`.
    G34 { b: f64 },
    /// H²×R, `X₁ + b X₄`.
    G14 { b: f64 },
    /// H²×R, vertical translations (cylinders over plane curves).
    G4,
    /// Heisenberg group, `X₁`.
    HeisG1,
    /// Heisenberg group, `X₃` (vertical).
    HeisG3,
    /// Heisenberg group, helicoidal `X₄ + a X₃`.
    HeisG43 { a: f64 },
}

/// Profile data at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub xi1: f64,
    pub xi1_d: f64,
    pub xi2: f64,
    pub xi2_d: f64,
}

/// Pull-back coefficients `E = g(ψ_u, ψ_u)`, `F = g(ψ_u, X)`, `G = g(X, X)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl Coefficients {
    /// `(EG − F²)/G`; equals 1 for unit-speed profiles.
    pub fn quotient_speed_sq(&self) -> f64 {
        (self.e * self.g - self.f * self.f) / self.g
    }
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key).copied().or(default) {
        Some(v) if v.is_finite() => Ok(v),
        Some(v) => Err(GeomError::BadParams(format!("{key} must be finite, got {v}"))),
        None => Err(GeomError::BadParams(format!("family parameter `{key}` is required"))),
    }
}

impl Family {
    pub const NAMES: [&'static str; 10] = [
        "r3_translation",
        "r3_helicoidal",
        "bcv_rotation",
        "h2xr_g24",
        "h2xr_g34",
        "h2xr_g14",
        "h2xr_g4",
        "heisenberg_g1",
        "heisenberg_g3",
        "heisenberg_g43",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Translation { .. } => "r3_translation",
            Family::Helicoidal { .. } => "r3_helicoidal",
            Family::Bcv { .. } => "bcv_rotation",
            Family::G24 { .. } => "h2xr_g24",
            Family::G34 { .. } => "h2xr_g34",
            Family::G14 { .. } => "h2xr_g14",
            Family::G4 => "h2xr_g4",
            Family::HeisG1 => "heisenberg_g1",
            Family::HeisG3 => "heisenberg_g3",
            Family::HeisG43 { .. } => "heisenberg_g43",
        }
    }

    /// Builds a family from its name and the scalar parameters `a`, `b`,
    /// `ell`, `m` (and `axis` for translations). Unused keys are rejected.
    pub fn from_name(
        name: &str,
        params: &BTreeMap<String, f64>,
        axis: Option<[f64; 3]>,
    ) -> Result<Self> {
        let allowed: &[&str] = match name {
            "r3_translation" | "h2xr_g4" | "heisenberg_g1" | "heisenberg_g3" => &[],
            "r3_helicoidal" | "heisenberg_g43" => &["a"],
            "bcv_rotation" => &["ell", "m"],
            "h2xr_g24" => &["a", "b"],
            "h2xr_g34" | "h2xr_g14" => &["b"],
            _ => {
                return Err(GeomError::BadParams(format!(
                    "unknown family `{name}` (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(GeomError::BadParams(format!(
                "parameter `{k}` does not apply to family {name}"
            )));
        }
        if axis.is_some() && name != "r3_translation" {
            return Err(GeomError::BadParams(format!("`axis` does not apply to family {name}")));
        }
        let fam = match name {
            "r3_translation" => Family::Translation {
                axis: axis.unwrap_or([0.0, 0.0, 1.0]),
            },
            "r3_helicoidal" => Family::Helicoidal {
                a: param(params, "a", Some(0.0))?,
            },
            "bcv_rotation" => Family::Bcv {
                ell: param(params, "ell", None)?,
                m: param(params, "m", None)?,
            },
            "h2xr_g24" => Family::G24 {
                a: param(params, "a", None)?,
                b: param(params, "b", Some(0.0))?,
            },
            "h2xr_g34" => Family::G34 {
                b: param(params, "b", Some(0.0))?,
            },
            "h2xr_g14" => Family::G14 {
                b: param(params, "b", Some(0.0))?,
            },
            "h2xr_g4" => Family::G4,
            "heisenberg_g1" => Family::HeisG1,
            "heisenberg_g3" => Family::HeisG3,
            _ => Family::HeisG43 {
                a: param(params, "a", Some(0.0))?,
            },
        };
        fam.space()?;
        Ok(fam)
    }

    /// Scalar parameters, for listings and config echo.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let kv: Vec<(&str, f64)> = match *self {
            Family::Translation { .. } | Family::G4 | Family::HeisG1 | Family::HeisG3 => vec![],
            Family::Helicoidal { a } | Family::HeisG43 { a } => vec![("a", a)],
            Family::Bcv { ell, m } => vec![("ell", ell), ("m", m)],
            Family::G24 { a, b } => vec![("a", a), ("b", b)],
            Family::G34 { b } | Family::G14 { b } => vec![("b", b)],
        };
        kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn space(&self) -> Result<AmbientSpace> {
        match *self {
            Family::Translation { axis } => AmbientSpace::euclidean_translation(axis),
            Family::Helicoidal { a } => AmbientSpace::euclidean_helicoidal(a),
            Family::Bcv { ell, m } => AmbientSpace::bcv(ell, m),
            Family::G24 { a, b } => AmbientSpace::h2xr(Killing::G24 { a, b }),
            Family::G34 { b } => AmbientSpace::h2xr(Killing::G34 { b }),
            Family::G14 { b } => AmbientSpace::h2xr(Killing::G14 { b }),
            Family::G4 => AmbientSpace::h2xr(Killing::G4),
            Family::HeisG1 => AmbientSpace::heisenberg(Killing::G1),
            Family::HeisG3 => AmbientSpace::heisenberg(Killing::G3),
            Family::HeisG43 { a } => AmbientSpace::heisenberg(Killing::G43 { a }),
        }
    }

    /// The lift `γ(u)` of the profile point `(ξ₁, ξ₂)`.
    pub fn lift(&self, xi1: f64, xi2: f64) -> Result<Point3> {
        let p = match *self {
            Family::Translation { axis } => {
                let (e1, e2) = transverse_basis(axis);
                e1 * xi1 + e2 * xi2
            }
            Family::Helicoidal { .. } | Family::Bcv { .. } | Family::HeisG43 { .. } => {
                Vector3::new(xi1, 0.0, xi2)
            }
            Family::G24 { .. } | Family::HeisG1 => Vector3::new(0.0, xi1, -xi2),
            Family::G34 { .. } => Vector3::new(xi1.cos(), xi1.sin(), xi2),
            Family::G14 { .. } => {
                if xi1.is_nan() || xi1 < 2.0 {
                    return Err(GeomError::BadParams(format!(
                        "G14 profiles need xi1 >= 2, got {xi1}"
                    )));
                }
                Vector3::new(0.0, 0.5 * (xi1 + (xi1 * xi1 - 4.0).sqrt()), xi2)
            }
            Family::G4 | Family::HeisG3 => Vector3::new(xi1, xi2, 0.0),
        };
        Ok(p)
    }

    /// `G = ω²` along the lift; depends on `ξ₁` only.
    pub fn g_of(&self, xi1: f64) -> f64 {
        match *self {
            Family::Translation { .. } | Family::G4 | Family::HeisG3 => 1.0,
            Family::Helicoidal { a } => a * a + xi1 * xi1,
            Family::Bcv { ell, m } => {
                let d = 1.0 + m * xi1 * xi1;
                xi1 * xi1 * (4.0 + ell * ell * xi1 * xi1) / (4.0 * d * d)
            }
            Family::G24 { a, b } => a * a / (xi1 * xi1) + b * b,
            Family::G34 { b } => 1.0 / xi1.sin().powi(2) + b * b,
            Family::G14 { b } => 0.25 * (xi1 * xi1 - 4.0) + b * b,
            Family::HeisG1 => 1.0 + xi1 * xi1,
            Family::HeisG43 { a } => {
                let t = xi1 * xi1 - 2.0 * a;
                0.25 * (4.0 * xi1 * xi1 + t * t)
            }
        }
    }

    /// Analytic pull-back coefficients from the profile jet.
    pub fn coefficients(&self, j: &Jet) -> Coefficients {
        let Jet {
            xi1: x,
            xi1_d: dx,
            xi2: z,
            xi2_d: dz,
        } = *j;
        let g = self.g_of(x);
        let (e, f) = match *self {
            Family::Translation { .. } => (dx * dx + dz * dz, 0.0),
            Family::Helicoidal { a } => (dx * dx + dz * dz, a * dz),
            Family::Bcv { ell, m } => {
                let d = 1.0 + m * x * x;
                (dx * dx / (d * d) + dz * dz, -ell * x * x * dz / (2.0 * d))
            }
            Family::G24 { b, .. } => (dx * dx / (x * x) + dz * dz, -b * dz),
            Family::G34 { b } => (dx * dx / x.sin().powi(2) + dz * dz, b * dz),
            Family::G14 { b } => (dx * dx / (x * x - 4.0) + dz * dz, b * dz),
            Family::G4 => ((dx * dx + dz * dz) / (z * z), 0.0),
            Family::HeisG1 => (dx * dx + dz * dz, -x * dz),
            Family::HeisG3 => {
                let f = 0.5 * (dx * z - dz * x);
                (dx * dx + dz * dz + f * f, f)
            }
            Family::HeisG43 { a } => (dx * dx + dz * dz, 0.5 * dz * (2.0 * a - x * x)),
        };
        Coefficients { e, f, g }
    }

    /// Diagonal quotient metric `h₁₁ dξ₁² + h₂₂ dξ₂²` at `ξ₁`, or `None`
    /// when it also depends on `ξ₂` (vertical cylinders in H²×R).
    pub fn quotient_metric(&self, xi1: f64) -> Option<(f64, f64)> {
        let x = xi1;
        let h = match *self {
            Family::Translation { .. } | Family::HeisG3 => (1.0, 1.0),
            Family::Helicoidal { a } => (1.0, x * x / (a * a + x * x)),
            Family::Bcv { ell, m } => {
                let d = 1.0 + m * x * x;
                (1.0 / (d * d), 4.0 / (4.0 + ell * ell * x * x))
            }
            Family::G24 { a, b } => (1.0 / (x * x), a * a / (a * a + b * b * x * x)),
            Family::G34 { b } => {
                let s2 = x.sin().powi(2);
                (1.0 / s2, 1.0 / (1.0 + b * b * s2))
            }
            Family::G14 { b } => {
                let q = x * x - 4.0;
                (1.0 / q, q / (q + 4.0 * b * b))
            }
            Family::G4 => return None,
            Family::HeisG1 => (1.0, 1.0 / (1.0 + x * x)),
            Family::HeisG43 { a } => {
                let t = x * x - 2.0 * a;
                (1.0, 4.0 * x * x / (4.0 * x * x + t * t))
            }
        };
        Some(h)
    }
}

/// Orthonormal pair spanning the plane orthogonal to `axis`, with
/// `e₁ × e₂ = axis`. For the z-axis this is the standard `(e_x, e_y)`.
fn transverse_basis(axis: [f64; 3]) -> (Vector3<f64>, Vector3<f64>) {
    let n = Vector3::from(axis).normalize();
    let k = (0..3)
        .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .unwrap_or(0);
    let mut helper = Vector3::zeros();
    helper[k] = 1.0;
    let e1 = (helper - n * helper.dot(&n)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}
