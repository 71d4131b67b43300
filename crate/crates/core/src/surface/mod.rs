//! Invariant surfaces `ψ(u, v) = φ_v(γ(u))` and their induced metric.

pub mod catalog;
pub mod family;
pub mod profile;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpace, Point3, Vec3};
use crate::diff::{five_point, five_point_second, smooth_step};
use crate::error::{GeomError, Result};

pub use catalog::{build_catalog_surface, catalog_ids, CatalogEntry, CATALOG};
pub use family::{Coefficients, Family, Jet};
pub use profile::{
    profile_from_constraint, profile_from_expr_constraint, pure_fn, real_fn, ConstraintOptions,
    MonotoneCubic, ProfileCurve, Provenance, RealFn,
};

/// Where [`InvariantSurface::coefficients`] takes its values from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSource {
    /// Closed-form family formulas.
    Analytic,
    /// Finite-difference partials of `ψ` and the ambient metric.
    Numeric,
}

/// Central-difference step for `ψ_u` in [`InvariantSurface::numeric_coeffs`].
pub fn psi_step(x: f64) -> f64 {
    1e-6 * (1.0 + x.abs())
}

#[derive(Clone)]
pub struct InvariantSurface {
    id: String,
    description: String,
    family: Family,
    space: AmbientSpace,
    profile: ProfileCurve,
    omega_derivs: Option<(RealFn, RealFn)>,
    claimed_curvature: Option<f64>,
    source: CoefficientSource,
    suite_span: (f64, f64),
}

impl fmt::Debug for InvariantSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantSurface")
            .field("id", &self.id)
            .field("family", &self.family)
            .field("profile", &self.profile)
            .field("claimed_curvature", &self.claimed_curvature)
            .field("source", &self.source)
            .finish()
    }
}

impl InvariantSurface {
    pub fn new(id: impl Into<String>, family: Family, profile: ProfileCurve) -> Result<Self> {
        let space = family.space()?;
        let (a, b) = profile.u_domain();
        let pad = 0.05 * (b - a);
        Ok(InvariantSurface {
            id: id.into(),
            description: String::new(),
            family,
            space,
            profile,
            omega_derivs: None,
            claimed_curvature: None,
            source: CoefficientSource::Analytic,
            suite_span: (a + pad, b - pad),
        })
    }

    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }

    /// Sub-interval used by default traces and verification suites.
    pub fn with_suite_span(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(self.profile.contains(lo) && self.profile.contains(hi) && lo < hi) {
            return Err(GeomError::BadParams(format!(
                "suite span [{lo}, {hi}] must lie inside the u-domain {:?}",
                self.profile.u_domain()
            )));
        }
        self.suite_span = (lo, hi);
        Ok(self)
    }

    /// Analytic `ω_u` and `ω_uu`.
    pub fn with_omega_derivatives(mut self, d1: RealFn, d2: RealFn) -> Self {
        self.omega_derivs = Some((d1, d2));
        self
    }

    /// Declares the surface to have constant Gauss curvature `k`.
    pub fn with_claimed_curvature(mut self, k: f64) -> Self {
        self.claimed_curvature = Some(k);
        self
    }

    /// Copy whose coefficients come from finite differences instead of the
    /// family formulas.
    pub fn with_numeric_coefficients(&self) -> Self {
        let mut s = self.clone();
        s.source = CoefficientSource::Numeric;
        s.omega_derivs = None;
        s
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn profile(&self) -> &ProfileCurve {
        &self.profile
    }

    pub fn u_domain(&self) -> (f64, f64) {
        self.profile.u_domain()
    }

    pub fn suite_span(&self) -> (f64, f64) {
        self.suite_span
    }

    pub fn claimed_curvature(&self) -> Option<f64> {
        self.claimed_curvature
    }

    pub fn coefficient_source(&self) -> CoefficientSource {
        self.source
    }

    pub fn jet(&self, u: f64) -> Result<Jet> {
        Ok(Jet {
            xi1: self.profile.xi1(u)?,
            xi1_d: self.profile.xi1_prime(u)?,
            xi2: self.profile.xi2(u)?,
            xi2_d: self.profile.xi2_prime(u)?,
        })
    }

    /// The lift `γ(u) = ψ(u, 0)`.
    pub fn lift(&self, u: f64) -> Result<Point3> {
        let p = self.family.lift(self.profile.xi1(u)?, self.profile.xi2(u)?)?;
        self.space.check(&p)?;
        Ok(p)
    }

    pub fn psi(&self, u: f64, v: f64) -> Result<Point3> {
        self.space.flow(&self.lift(u)?, v)
    }

    /// Killing field at `ψ(u, v)`; this is `ψ_v`.
    pub fn killing_at(&self, u: f64, v: f64) -> Result<Vec3> {
        self.space.killing_eval(&self.psi(u, v)?)
    }

    /// Coefficients from the family formulas.
    pub fn analytic_coeffs(&self, u: f64) -> Result<Coefficients> {
        let c = self.family.coefficients(&self.jet(u)?);
        if !(c.g > 0.0) {
            return Err(GeomError::NonPositiveVolume { u, omega_sq: c.g });
        }
        Ok(c)
    }

    /// Coefficients from a central-difference `ψ_u` and the ambient metric;
    /// `ψ_v(u, 0)` is the Killing field at the lift.
    pub fn numeric_coeffs(&self, u: f64) -> Result<Coefficients> {
        let h = psi_step(u);
        let psi_u = (self.lift(u + h)? - self.lift(u - h)?) / (2.0 * h);
        let p = self.lift(u)?;
        let x = self.space.killing_eval(&p)?;
        let g_tensor = self.space.metric_tensor(&p)?;
        let gx = g_tensor * x;
        let c = Coefficients {
            e: psi_u.dot(&(g_tensor * psi_u)),
            f: psi_u.dot(&gx),
            g: x.dot(&gx),
        };
        if !(c.g > 0.0) {
            return Err(GeomError::NonPositiveVolume { u, omega_sq: c.g });
        }
        Ok(c)
    }

    /// Coefficients from the configured source.
    pub fn coefficients(&self, u: f64) -> Result<Coefficients> {
        match self.source {
            CoefficientSource::Analytic => self.analytic_coeffs(u),
            CoefficientSource::Numeric => self.numeric_coeffs(u),
        }
    }

    /// Volume function `ω(u) = ‖X(γ(u))‖`.
    pub fn omega_of(&self, u: f64) -> Result<f64> {
        let g = match self.source {
            CoefficientSource::Analytic => self.family.g_of(self.profile.xi1(u)?),
            CoefficientSource::Numeric => {
                let p = self.lift(u)?;
                let x = self.space.killing_eval(&p)?;
                self.space.metric_eval(&p, &x, &x)?
            }
        };
        if !(g > 0.0) || !g.is_finite() {
            return Err(GeomError::NonPositiveVolume { u, omega_sq: g });
        }
        Ok(g.sqrt())
    }

    pub fn omega_u(&self, u: f64) -> Result<f64> {
        match &self.omega_derivs {
            Some((d1, _)) => d1(u),
            None => five_point(|t| self.omega_of(t), u, smooth_step(u)),
        }
    }

    pub fn omega_uu(&self, u: f64) -> Result<f64> {
        match &self.omega_derivs {
            Some((_, d2)) => d2(u),
            None => five_point_second(|t| self.omega_of(t), u, smooth_step(u)),
        }
    }

    /// `K = −ω_uu / ω`.
    pub fn gauss_curvature(&self, u: f64) -> Result<f64> {
        Ok(-self.omega_uu(u)? / self.omega_of(u)?)
    }

    /// Evenly spaced parameters strictly inside the suite span.
    pub fn sample_params(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.suite_span;
        (0..n)
            .map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn helicoidal(a: f64, xi1: fn(f64) -> f64, xi2: fn(f64) -> f64) -> InvariantSurface {
        let p = ProfileCurve::closed_form(0.0, PI, pure_fn(xi1), pure_fn(xi2)).unwrap();
        InvariantSurface::new("t", Family::Helicoidal { a }, p).unwrap()
    }

    #[test]
    fn cylinder_coefficients() {
        let p = ProfileCurve::closed_form(-5.0, 5.0, pure_fn(f64::cos), pure_fn(f64::sin)).unwrap();
        let s = InvariantSurface::new("c", Family::Translation { axis: [0.0, 0.0, 1.0] }, p).unwrap();
        let c = s.numeric_coeffs(0.4).unwrap();
        assert!((c.e - 1.0).abs() < 1e-9 && c.f.abs() < 1e-12 && c.g == 1.0);
    }

    #[test]
    fn helicoidal_g_example() {
        let s = helicoidal(1.0, f64::sin, f64::cos);
        let c = s.numeric_coeffs(PI / 2.0).unwrap();
        assert!((c.g - 2.0).abs() < 1e-12);
    }

    #[test]
    fn omega_of_rotational_sphere() {
        let s = helicoidal(0.0, f64::sin, f64::cos);
        assert!((s.omega_of(PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.gauss_curvature(PI / 3.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(matches!(s.omega_of(0.0), Err(GeomError::NonPositiveVolume { .. })));
    }

    #[test]
    fn heisenberg_g1_volume_at_axis() {
        let p = ProfileCurve::closed_form(-1.0, 1.0, pure_fn(|_| 0.0), pure_fn(|u| u)).unwrap();
        let s = InvariantSurface::new("h", Family::HeisG1, p).unwrap();
        assert_eq!(s.omega_of(0.3).unwrap(), 1.0);
    }

    #[test]
    fn curvature_of_simple_volume_functions() {
        let p = ProfileCurve::closed_form(-2.0, 2.0, pure_fn(f64::cosh), pure_fn(|u| u)).unwrap();
        let s = InvariantSurface::new("cosh", Family::Helicoidal { a: 0.0 }, p).unwrap();
        assert!((s.gauss_curvature(0.7).unwrap() + 1.0).abs() < 1e-8);

        let p = ProfileCurve::closed_form(-2.0, 2.0, pure_fn(|_| 3.0), pure_fn(|u| u)).unwrap();
        let s = InvariantSurface::new("cyl", Family::Helicoidal { a: 0.0 }, p).unwrap();
        assert!(s.gauss_curvature(0.7).unwrap().abs() < 1e-9);
    }

    #[test]
    fn numeric_g_equals_metric_of_killing_field() {
        let s = helicoidal(0.7, f64::sin, f64::cos);
        for u in [0.3, 1.0, 2.2] {
            let p = s.lift(u).unwrap();
            let x = s.space().killing_eval(&p).unwrap();
            let g = s.space().metric_eval(&p, &x, &x).unwrap();
            assert!((s.numeric_coeffs(u).unwrap().g - g).abs() <= 1e-9);
        }
    }
}
