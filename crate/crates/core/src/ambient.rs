//! Ambient three-dimensional Riemannian spaces, their Killing fields and the
//! closed-form flows of those fields.
//!
//! Every space uses one global Cartesian chart `(x, y, z)`. Cylindrical
//! coordinates only appear inside the surface constructors.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

pub type Point3 = Vector3<f64>;
pub type Vec3 = Vector3<f64>;

/// Margin kept inside the BCV disc when `m < 0`.
const BCV_MARGIN: f64 = 1e-12;

/// The ambient metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// `dx² + dy² + dz²`
    Euclidean,
    /// Bianchi–Cartan–Vranceanu metric `g_{ℓ,m}`.
    Bcv { ell: f64, m: f64 },
    /// Upper half plane times a line, `(dx² + dy²)/y² + dz²`.
    H2xR,
    /// Left-invariant metric `dx² + dy² + (y/2 dx − x/2 dy + dz)²`.
    Heisenberg,
}

/// The Killing field generating the one-parameter group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Killing {
    /// Euclidean translation along a unit axis.
    Translation { axis: [f64; 3] },
    /// Euclidean screw motion `−y∂x + x∂y + a∂z`; `pitch = 0` is a rotation.
    Helicoidal { pitch: f64 },
    /// `−y∂x + x∂y` in a BCV space.
    BcvRotation,
    /// `a X₂ + b X₄` in H²×R.
    G24 { a: f64, b: f64 },
    /// `X₃ + b X₄` in H²×R.
    G34 { b: f64 },
    /// `X₁ + b X₄` in H²×R.
    G14 { b: f64 },
    /// `∂z` in H²×R.
    G4,
    /// `∂x + (y/2)∂z` in the Heisenberg group.
    G1,
    /// `∂z` in the Heisenberg group.
    G3,
    /// `X₄ + a X₃ = −y∂x + x∂y + a∂z` in the Heisenberg group.
    G43 { a: f64 },
}

/// A Riemannian three-space together with the Killing field in use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpace {
    geometry: Geometry,
    killing: Killing,
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(GeomError::BadParams(format!("{name} must be finite, got {x}")))
    }
}

impl AmbientSpace {
    pub fn new(geometry: Geometry, killing: Killing) -> Result<Self> {
        let killing = match (geometry, killing) {
            (Geometry::Euclidean, Killing::Translation { axis }) => {
                let v = Vec3::from(axis);
                let n = v.norm();
                if !n.is_finite() || n == 0.0 {
                    return Err(GeomError::BadParams(
                        "translation axis must be a non-zero vector".into(),
                    ));
                }
                let unit = v / n;
                Killing::Translation {
                    axis: [unit.x, unit.y, unit.z],
                }
            }
            (Geometry::Euclidean, Killing::Helicoidal { pitch }) => {
                finite("pitch", pitch)?;
                killing
            }
            (Geometry::Bcv { ell, m }, Killing::BcvRotation) => {
                finite("ell", ell)?;
                finite("m", m)?;
                killing
            }
            (Geometry::H2xR, Killing::G24 { a, b }) => {
                finite("a", a)?;
                finite("b", b)?;
                if a == 0.0 {
                    return Err(GeomError::BadParams(
                        "G24 needs a != 0 (a = 0 is the vertical field G4)".into(),
                    ));
                }
                killing
            }
            (Geometry::H2xR, Killing::G34 { b } | Killing::G14 { b }) => {
                finite("b", b)?;
                killing
            }
            (Geometry::H2xR, Killing::G4) => killing,
            (Geometry::Heisenberg, Killing::G1 | Killing::G3) => killing,
            (Geometry::Heisenberg, Killing::G43 { a }) => {
                finite("a", a)?;
                killing
            }
            (g, k) => {
                return Err(GeomError::BadParams(format!(
                    "Killing field {k:?} does not belong to {g:?}"
                )))
            }
        };
        Ok(AmbientSpace { geometry, killing })
    }

    pub fn euclidean_translation(axis: [f64; 3]) -> Result<Self> {
        Self::new(Geometry::Euclidean, Killing::Translation { axis })
    }

    pub fn euclidean_helicoidal(pitch: f64) -> Result<Self> {
        Self::new(Geometry::Euclidean, Killing::Helicoidal { pitch })
    }

    pub fn bcv(ell: f64, m: f64) -> Result<Self> {
        Self::new(Geometry::Bcv { ell, m }, Killing::BcvRotation)
    }

    pub fn h2xr(killing: Killing) -> Result<Self> {
        Self::new(Geometry::H2xR, killing)
    }

    pub fn heisenberg(killing: Killing) -> Result<Self> {
        Self::new(Geometry::Heisenberg, killing)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn killing(&self) -> Killing {
        self.killing
    }

    pub fn contains(&self, p: &Point3) -> bool {
        if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
            return false;
        }
        match self.geometry {
            Geometry::H2xR => p.y > 0.0,
            Geometry::Bcv { m, .. } if m < 0.0 => p.x * p.x + p.y * p.y < -1.0 / m - BCV_MARGIN,
            _ => true,
        }
    }

    pub fn check(&self, p: &Point3) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(self.violation(p))
        }
    }

    fn violation(&self, p: &Point3) -> GeomError {
        GeomError::DomainViolation {
            space: self.to_string(),
            point: [p.x, p.y, p.z],
        }
    }

    /// Metric tensor in chart coordinates.
    pub fn metric_tensor(&self, p: &Point3) -> Result<Matrix3<f64>> {
        self.check(p)?;
        let g = match self.geometry {
            Geometry::Euclidean => Matrix3::identity(),
            Geometry::H2xR => {
                let w = 1.0 / (p.y * p.y);
                Matrix3::from_diagonal(&Vec3::new(w, w, 1.0))
            }
            Geometry::Heisenberg => {
                let theta = Vec3::new(0.5 * p.y, -0.5 * p.x, 1.0);
                Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, 0.0)) + theta * theta.transpose()
            }
            Geometry::Bcv { ell, m } => {
                let d = 1.0 + m * (p.x * p.x + p.y * p.y);
                let w = 1.0 / (d * d);
                let theta = Vec3::new(0.5 * ell * p.y / d, -0.5 * ell * p.x / d, 1.0);
                Matrix3::from_diagonal(&Vec3::new(w, w, 0.0)) + theta * theta.transpose()
            }
        };
        Ok(g)
    }

    /// `g_p(w1, w2)`.
    pub fn metric_eval(&self, p: &Point3, w1: &Vec3, w2: &Vec3) -> Result<f64> {
        let g = self.metric_tensor(p)?;
        Ok(w1.dot(&(g * w2)))
    }

    pub fn norm(&self, p: &Point3, w: &Vec3) -> Result<f64> {
        Ok(self.metric_eval(p, w, w)?.max(0.0).sqrt())
    }

    /// Killing field `X(p)` in chart coordinates.
    pub fn killing_eval(&self, p: &Point3) -> Result<Vec3> {
        self.check(p)?;
        let (x, y) = (p.x, p.y);
        let v = match self.killing {
            Killing::Translation { axis } => Vec3::from(axis),
            Killing::Helicoidal { pitch: a } | Killing::G43 { a } => Vec3::new(-y, x, a),
            Killing::BcvRotation => Vec3::new(-y, x, 0.0),
            Killing::G24 { a, b } => Vec3::new(a, 0.0, b),
            Killing::G34 { b } => Vec3::new(x, y, b),
            Killing::G14 { b } => Vec3::new(0.5 * (x * x - y * y + 1.0), x * y, b),
            Killing::G4 | Killing::G3 => Vec3::new(0.0, 0.0, 1.0),
            Killing::G1 => Vec3::new(1.0, 0.0, 0.5 * y),
        };
        Ok(v)
    }

    /// Closed-form flow `φ_t(p)` of the Killing field.
    pub fn flow(&self, p: &Point3, t: f64) -> Result<Point3> {
        self.check(p)?;
        let (x, y, z) = (p.x, p.y, p.z);
        let rotate = |a: f64| {
            let (s, c) = t.sin_cos();
            Vec3::new(c * x - s * y, s * x + c * y, z + a * t)
        };
        let q = match self.killing {
            Killing::Translation { axis } => p + Vec3::from(axis) * t,
            Killing::Helicoidal { pitch: a } | Killing::G43 { a } => rotate(a),
            Killing::BcvRotation => rotate(0.0),
            Killing::G24 { a, b } => Vec3::new(x + a * t, y, z + b * t),
            Killing::G34 { b } => {
                let s = t.exp();
                Vec3::new(s * x, s * y, z + b * t)
            }
            Killing::G14 { b } => {
                let r2 = x * x + y * y;
                let (s, c) = t.sin_cos();
                let den = (1.0 - r2) * c - 2.0 * x * s + 1.0 + r2;
                if den <= 0.0 || !den.is_finite() {
                    return Err(self.violation(p));
                }
                Vec3::new(
                    ((1.0 - r2) * s + 2.0 * x * c) / den,
                    2.0 * y / den,
                    z + b * t,
                )
            }
            Killing::G4 | Killing::G3 => Vec3::new(x, y, z + t),
            Killing::G1 => Vec3::new(x + t, y, z + 0.5 * y * t),
        };
        if self.contains(&q) {
            Ok(q)
        } else {
            Err(self.violation(&q))
        }
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.geometry {
            Geometry::Euclidean => f.write_str("R3")?,
            Geometry::Bcv { ell, m } => write!(f, "BCV(l={ell}, m={m})")?,
            Geometry::H2xR => f.write_str("H2xR")?,
            Geometry::Heisenberg => f.write_str("H3")?,
        }
        match self.killing {
            Killing::Translation { axis } => {
                write!(f, "/translation({}, {}, {})", axis[0], axis[1], axis[2])
            }
            Killing::Helicoidal { pitch } if pitch == 0.0 => f.write_str("/rotation"),
            Killing::Helicoidal { pitch } => write!(f, "/helicoidal(a={pitch})"),
            Killing::BcvRotation => f.write_str("/rotation"),
            Killing::G24 { a, b } => write!(f, "/G24(a={a}, b={b})"),
            Killing::G34 { b } => write!(f, "/G34(b={b})"),
            Killing::G14 { b } => write!(f, "/G14(b={b})"),
            Killing::G4 => f.write_str("/G4"),
            Killing::G1 => f.write_str("/G1"),
            Killing::G3 => f.write_str("/G3"),
            Killing::G43 { a } => write!(f, "/G43(a={a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn metric_examples() {
        let e = AmbientSpace::euclidean_translation([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(e.metric_eval(&v(0., 0., 0.), &v(1., 0., 0.), &v(1., 0., 0.)).unwrap(), 1.0);

        let h = AmbientSpace::h2xr(Killing::G4).unwrap();
        assert_eq!(h.metric_eval(&v(0., 2., 0.), &v(1., 0., 0.), &v(1., 0., 0.)).unwrap(), 0.25);

        let n = AmbientSpace::heisenberg(Killing::G1).unwrap();
        assert_eq!(n.metric_eval(&v(1., 1., 0.), &v(1., 0., 0.), &v(0., 0., 1.)).unwrap(), 0.5);
    }

    #[test]
    fn domain_violations() {
        let h = AmbientSpace::h2xr(Killing::G4).unwrap();
        assert!(matches!(
            h.metric_eval(&v(0., 0., 0.), &v(1., 0., 0.), &v(1., 0., 0.)),
            Err(GeomError::DomainViolation { .. })
        ));
        assert!(h.killing_eval(&v(0., -1., 0.)).is_err());

        let b = AmbientSpace::bcv(1.0, -0.25).unwrap();
        assert!(b.contains(&v(1.9, 0., 0.)));
        assert!(!b.contains(&v(2.0, 0., 0.)));
        assert!(!b.contains(&v(2.0 - 1e-14, 0., 5.)));
        assert!(AmbientSpace::bcv(1.0, 0.5).unwrap().contains(&v(100., 100., 0.)));
    }

    #[test]
    fn killing_examples() {
        let n = AmbientSpace::heisenberg(Killing::G1).unwrap();
        assert_eq!(n.killing_eval(&v(5., 2., 1.)).unwrap(), v(1., 0., 1.));
        let h = AmbientSpace::h2xr(Killing::G34 { b: 1.0 }).unwrap();
        assert_eq!(h.killing_eval(&v(1., 1., 0.)).unwrap(), v(1., 1., 1.));
        let r = AmbientSpace::euclidean_helicoidal(0.0).unwrap();
        assert_eq!(r.killing_eval(&v(1., 0., 0.)).unwrap(), v(0., 1., 0.));
    }

    #[test]
    fn flow_examples() {
        let h = AmbientSpace::h2xr(Killing::G34 { b: 0.0 }).unwrap();
        let p = v(0.3, 1.7, -0.4);
        let q = h.flow(&p, 0.8).unwrap();
        let s = 0.8f64.exp();
        assert!((q - v(s * 0.3, s * 1.7, -0.4)).norm() < 1e-15);

        let h = AmbientSpace::h2xr(Killing::G24 { a: 1.0, b: 2.0 }).unwrap();
        assert_eq!(h.flow(&v(0., 1., 0.), 3.0).unwrap(), v(3., 1., 6.));

        let g14 = AmbientSpace::h2xr(Killing::G14 { b: 0.5 }).unwrap();
        assert_eq!(g14.flow(&p, 0.0).unwrap(), p);
    }

    #[test]
    fn g14_orbit_stays_on_its_circle() {
        // x² + y² − β y + 1 = 0 with β = (1 + x₀² + y₀²)/y₀
        let s = AmbientSpace::h2xr(Killing::G14 { b: 0.3 }).unwrap();
        let p = v(0.4, 1.3, 0.2);
        let beta = (1.0 + p.x * p.x + p.y * p.y) / p.y;
        for k in 0..12 {
            let q = s.flow(&p, k as f64 * 0.55).unwrap();
            assert!((q.x * q.x + q.y * q.y - beta * q.y + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_killing_is_rejected() {
        assert!(AmbientSpace::new(Geometry::H2xR, Killing::G1).is_err());
        assert!(AmbientSpace::euclidean_translation([0.0; 3]).is_err());
        assert!(AmbientSpace::h2xr(Killing::G24 { a: 0.0, b: 1.0 }).is_err());
    }

    #[test]
    fn translation_axis_is_normalised() {
        let s = AmbientSpace::euclidean_translation([0.0, 3.0, 4.0]).unwrap();
        let x = s.killing_eval(&v(0., 0., 0.)).unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-15);
    }
}
