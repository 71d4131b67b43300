//! Closed-form loxodromes on constant-curvature surfaces with a horizontal
//! lift (`E = 1`, `F = 0`), where `v′ = ± cot ϑ₀ / ω`.
//!
//! Each case writes `v = ± cot ϑ₀ · P(u) + b` with a primitive `P` of `1/ω`
//! built from `ω`, `ω_u` and a first integral `a`.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::surface::InvariantSurface;

use super::{cot, Branch, LoxodromeSpec};

/// Declared curvature class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurvatureClass {
    /// `K = 1/R²`
    Positive { r: f64 },
    /// `K = −1/R²`
    Negative { r: f64 },
    /// `K = 0`
    Flat,
}

impl CurvatureClass {
    pub fn k(&self) -> f64 {
        match *self {
            CurvatureClass::Positive { r } => 1.0 / (r * r),
            CurvatureClass::Negative { r } => -1.0 / (r * r),
            CurvatureClass::Flat => 0.0,
        }
    }
}

/// Which formula applies once `a` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormKind {
    /// `P = −(R/√a) arcsinh(R ω_u/ω)`, `a = ω² + R² ω_u² > 0`.
    PositiveArcsinh,
    /// `P = −1/ω_u`, `a = ω² − R² ω_u² = 0`.
    NegativeReciprocal,
    /// `P = −(R/√−a) sgn(η) arccosh|η|`, `η = R ω_u/ω`, `a < 0`.
    NegativeArccosh,
    /// `P = (R/√a) arcsin(R ω_u/ω)`, `a > 0`.
    NegativeArcsin,
    /// `P = ln(ω)/a`, `ω_u = a ≠ 0`.
    FlatLog,
    /// `P = u/c`, `ω = c`.
    FlatLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub class: CurvatureClass,
    pub kind: ClosedFormKind,
    /// First integral (`ω_u` in the flat case).
    pub a: f64,
    /// Constant of integration.
    pub b: f64,
    /// Constant value of `ω` when it does not vary.
    pub c: Option<f64>,
    /// Spread of the first integral over the fitting samples.
    pub drift: f64,
    pub theta0: f64,
    pub branch: Branch,
}

const FIT_SAMPLES: usize = 20;
const DRIFT_TOL: f64 = 1e-6;
const CURVATURE_TOL: f64 = 1e-6;
/// Relative size below which the first integral counts as zero.
const ZERO_A: f64 = 1e-9;

impl ClosedFormSolution {
    /// Estimates `a` over the suite span, checks the curvature class and
    /// fixes `b` from `v(u₀) = v₀`.
    pub fn fit(surf: &InvariantSurface, class: CurvatureClass, spec: &LoxodromeSpec) -> Result<Self> {
        spec.validate()?;
        let k = class.k();
        if let CurvatureClass::Positive { r } | CurvatureClass::Negative { r } = class {
            if !(r > 0.0 && r.is_finite()) {
                return Err(GeomError::BadParams(format!("R must be positive, got {r}")));
            }
        }
        let us = surf.sample_params(FIT_SAMPLES);
        let mut first_integrals = Vec::with_capacity(FIT_SAMPLES);
        let mut omegas = Vec::with_capacity(FIT_SAMPLES);
        for &u in &us {
            let c = surf.coefficients(u)?;
            if c.f.abs() > 1e-12 || (c.e - 1.0).abs() > 1e-8 {
                return Err(GeomError::BadParams(format!(
                    "closed forms need a horizontal unit-speed lift (E = 1, F = 0); at u = {u} E = {}, F = {}",
                    c.e, c.f
                )));
            }
            let w = surf.omega_of(u)?;
            let wu = surf.omega_u(u)?;
            let residual = (surf.omega_uu(u)? + k * w).abs();
            if residual > CURVATURE_TOL {
                return Err(GeomError::WrongCurvatureClass { residual });
            }
            first_integrals.push(match class {
                CurvatureClass::Positive { r } => w * w + r * r * wu * wu,
                CurvatureClass::Negative { r } => w * w - r * r * wu * wu,
                CurvatureClass::Flat => wu,
            });
            omegas.push(w);
        }
        let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
        let spread = |xs: &[f64]| {
            let (lo, hi) = xs
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
            hi - lo
        };
        let a = mean(&first_integrals);
        let drift = spread(&first_integrals);
        if drift > DRIFT_TOL {
            return Err(GeomError::InconsistentConstants { drift });
        }
        let scale = mean(&omegas).powi(2);
        let (kind, c) = match class {
            CurvatureClass::Positive { .. } => {
                if a <= 0.0 {
                    return Err(GeomError::InconsistentConstants { drift: a });
                }
                (ClosedFormKind::PositiveArcsinh, None)
            }
            CurvatureClass::Negative { .. } => {
                if a.abs() <= ZERO_A * scale {
                    (ClosedFormKind::NegativeReciprocal, None)
                } else if a < 0.0 {
                    (ClosedFormKind::NegativeArccosh, None)
                } else {
                    (ClosedFormKind::NegativeArcsin, None)
                }
            }
            CurvatureClass::Flat => {
                if a.abs() <= ZERO_A * scale.sqrt() {
                    (ClosedFormKind::FlatLinear, Some(mean(&omegas)))
                } else {
                    (ClosedFormKind::FlatLog, None)
                }
            }
        };
        let mut cf = ClosedFormSolution {
            class,
            kind,
            a,
            b: 0.0,
            c,
            drift,
            theta0: spec.theta0,
            branch: spec.branch,
        };
        cf.b = spec.v0 - cf.branch.sign() * cot(spec.theta0) * cf.primitive(surf, spec.u0)?;
        Ok(cf)
    }

    /// The primitive `P(u)` of `1/ω`.
    pub fn primitive(&self, surf: &InvariantSurface, u: f64) -> Result<f64> {
        let r = match self.class {
            CurvatureClass::Positive { r } | CurvatureClass::Negative { r } => r,
            CurvatureClass::Flat => 1.0,
        };
        let p = match self.kind {
            ClosedFormKind::PositiveArcsinh => {
                let eta = r * surf.omega_u(u)? / surf.omega_of(u)?;
                -(r / self.a.sqrt()) * eta.asinh()
            }
            ClosedFormKind::NegativeReciprocal => -1.0 / surf.omega_u(u)?,
            ClosedFormKind::NegativeArccosh => {
                let eta = r * surf.omega_u(u)? / surf.omega_of(u)?;
                -(r / (-self.a).sqrt()) * eta.signum() * eta.abs().acosh()
            }
            ClosedFormKind::NegativeArcsin => {
                let eta = r * surf.omega_u(u)? / surf.omega_of(u)?;
                (r / self.a.sqrt()) * eta.clamp(-1.0, 1.0).asin()
            }
            ClosedFormKind::FlatLog => surf.omega_of(u)?.ln() / self.a,
            ClosedFormKind::FlatLinear => u / self.c.unwrap_or(1.0),
        };
        Ok(p)
    }

    pub fn v(&self, surf: &InvariantSurface, u: f64) -> Result<f64> {
        Ok(self.branch.sign() * cot(self.theta0) * self.primitive(surf, u)? + self.b)
    }
}

/// Evaluates the closed form at `u`; `theta0` must be the angle it was fitted for.
pub fn closed_form_v(
    cf: &ClosedFormSolution,
    surf: &InvariantSurface,
    theta0: f64,
    u: f64,
) -> Result<f64> {
    if theta0 != cf.theta0 {
        return Err(GeomError::BadParams(format!(
            "closed form was fitted for theta0 = {}, asked for {theta0}",
            cf.theta0
        )));
    }
    cf.v(surf, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lox::trace;
    use crate::surface::build_catalog_surface;
    use std::collections::BTreeMap;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn cat(id: &str) -> InvariantSurface {
        build_catalog_surface(id, &BTreeMap::new()).unwrap()
    }

    fn agree(id: &str, class: CurvatureClass, kind: ClosedFormKind, branch: Branch) {
        let s = cat(id);
        let (lo, hi) = s.suite_span();
        let spec = LoxodromeSpec::new(FRAC_PI_3, branch, lo, 0.3, 81).unwrap();
        let cf = ClosedFormSolution::fit(&s, class, &spec).unwrap();
        assert_eq!(cf.kind, kind, "{id}");
        let t = trace(&s, &spec, hi).unwrap();
        for smp in &t.samples {
            let v = closed_form_v(&cf, &s, FRAC_PI_3, smp.u).unwrap();
            assert!((v - smp.v).abs() < 1e-8, "{id} at u = {}: {v} vs {}", smp.u, smp.v);
        }
    }

    #[test]
    fn every_branch_of_the_closed_forms() {
        let neg = CurvatureClass::Negative { r: 1.0 };
        agree("sphere", CurvatureClass::Positive { r: 1.0 }, ClosedFormKind::PositiveArcsinh, Branch::Plus);
        agree("sphere", CurvatureClass::Positive { r: 1.0 }, ClosedFormKind::PositiveArcsinh, Branch::Minus);
        agree("pseudosphere", neg, ClosedFormKind::NegativeReciprocal, Branch::Plus);
        agree("sinh_revolution", neg, ClosedFormKind::NegativeArccosh, Branch::Minus);
        agree("cosh_revolution", neg, ClosedFormKind::NegativeArcsin, Branch::Plus);
        agree("cone", CurvatureClass::Flat, ClosedFormKind::FlatLog, Branch::Plus);
        agree("circular_cylinder", CurvatureClass::Flat, ClosedFormKind::FlatLinear, Branch::Minus);
    }

    #[test]
    fn sphere_closed_form_is_log_tan() {
        // arcsinh(cot u) = −ln tan(u/2)
        let s = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, PI / 2.0, 0.0, 2).unwrap();
        let cf = ClosedFormSolution::fit(&s, CurvatureClass::Positive { r: 1.0 }, &spec).unwrap();
        assert!((cf.a - 1.0).abs() < 1e-12);
        for k in 1..20 {
            let u = 0.15 * k as f64;
            let want = (u / 2.0).tan().ln();
            assert!((cf.v(&s, u).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_class_is_detected() {
        let s = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 1.0, 0.0, 2).unwrap();
        assert!(matches!(
            ClosedFormSolution::fit(&s, CurvatureClass::Flat, &spec),
            Err(GeomError::WrongCurvatureClass { .. })
        ));
        assert!(matches!(
            ClosedFormSolution::fit(&s, CurvatureClass::Positive { r: 2.0 }, &spec),
            Err(GeomError::WrongCurvatureClass { .. })
        ));
    }

    #[test]
    fn twisted_lift_is_rejected() {
        let s = cat("twisted_sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 1.0, 0.0, 2).unwrap();
        assert!(matches!(
            ClosedFormSolution::fit(&s, CurvatureClass::Positive { r: 1.0 }, &spec),
            Err(GeomError::BadParams(_))
        ));
    }

    #[test]
    fn mismatched_angle_is_rejected() {
        let s = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 1.0, 0.0, 2).unwrap();
        let cf = ClosedFormSolution::fit(&s, CurvatureClass::Positive { r: 1.0 }, &spec).unwrap();
        assert!(closed_form_v(&cf, &s, FRAC_PI_3, 1.0).is_err());
    }
}
