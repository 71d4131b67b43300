//! Independent checks of traced loxodromes.
//!
//! Everything here is recomputed from `ψ`, the ambient metric and the
//! Killing field. The surface's closed-form coefficients are read only for
//! the analytic-vs-numeric comparison.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::ambient::Vec3;
use crate::diff::{five_point_second, smooth_step};
use crate::error::{GeomError, Result};
use crate::lox::{geodesic_residual, trace, Branch, LoxodromeSpec, LoxodromeTrace, TraceSample};
use crate::quad::integrate_samples;
use crate::surface::InvariantSurface;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Radians.
    pub angle: f64,
    pub unit_speed: f64,
    /// Relative.
    pub coeff_identity: f64,
    pub analytic_numeric: f64,
    pub curvature: f64,
    /// Relative.
    pub arc_length: f64,
    /// Chart distance between stored points and `ψ(u, v)`.
    pub embedding: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            angle: 1e-6,
            unit_speed: 1e-6,
            coeff_identity: 1e-8,
            analytic_numeric: 1e-6,
            curvature: 1e-6,
            arc_length: 1e-6,
            embedding: 1e-9,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 7] = [
        "angle",
        "unit_speed",
        "coeff_identity",
        "analytic_numeric",
        "curvature",
        "arc_length",
        "embedding",
    ];

    /// Sets one tolerance by name.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(GeomError::BadParams(format!(
                "tolerance `{key}` must be a positive number, got {value}"
            )));
        }
        let slot = match key {
            "angle" => &mut self.angle,
            "unit_speed" => &mut self.unit_speed,
            "coeff_identity" => &mut self.coeff_identity,
            "analytic_numeric" => &mut self.analytic_numeric,
            "curvature" => &mut self.curvature,
            "arc_length" => &mut self.arc_length,
            "embedding" => &mut self.embedding,
            _ => {
                return Err(GeomError::BadParams(format!(
                    "unknown tolerance `{key}` (expected one of {})",
                    Self::KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub surface_id: String,
    pub spec: LoxodromeSpec,
    pub samples: usize,
    pub max_angle_dev: f64,
    pub max_unit_speed_dev: f64,
    pub max_coeff_identity_dev: f64,
    pub max_analytic_numeric_dev: f64,
    /// Only when the surface declares a constant curvature.
    pub curvature_ode_residual: Option<f64>,
    /// Spread of `g(β′, X) sin ϑ₀` along the trace; informational.
    pub clairaut_drift: f64,
    pub arc_length_rel_err: f64,
    pub max_embedding_dev: f64,
    pub monotone: bool,
    pub diverging: bool,
    pub pass: bool,
    /// Names of the checks that failed, with the offending value.
    pub failures: Vec<String>,
}

/// Per-sample quantities computed by the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleCheck {
    pub angle_dev: f64,
    pub unit_speed_dev: f64,
    pub coeff_identity_dev: f64,
    pub analytic_numeric_dev: f64,
    /// `‖β′(u)‖_g`.
    pub speed: f64,
    /// `g(β′, X) sin ϑ₀`.
    pub clairaut: f64,
    pub embedding_dev: f64,
}

/// Difference step for the oracle: five-point stencil, shrunk near the ends
/// of the u-domain so every node stays inside it.
fn oracle_step(surf: &InvariantSurface, u: f64) -> f64 {
    let (lo, hi) = surf.u_domain();
    let room = (u - lo).min(hi - u) / 2.5;
    smooth_step(u).min(room.max(1e-7))
}

fn psi_u(surf: &InvariantSurface, u: f64, v: f64) -> Result<Vec3> {
    let h = oracle_step(surf, u);
    let p1 = surf.psi(u + h, v)?;
    let m1 = surf.psi(u - h, v)?;
    let p2 = surf.psi(u + 2.0 * h, v)?;
    let m2 = surf.psi(u - 2.0 * h, v)?;
    Ok((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h))
}

/// Angle the loxodrome should make with `X`: `ϑ₀` on the plus branch and
/// `π − ϑ₀` on the minus branch, where `g(β′, X)` changes sign.
pub fn expected_angle(spec: &LoxodromeSpec) -> f64 {
    if spec.theta0 == FRAC_PI_2 {
        return FRAC_PI_2;
    }
    match spec.branch {
        Branch::Plus => spec.theta0,
        Branch::Minus => PI - spec.theta0,
    }
}

pub fn check_sample(surf: &InvariantSurface, spec: &LoxodromeSpec, s: &TraceSample) -> Result<SampleCheck> {
    let space = surf.space();
    let p = surf.psi(s.u, s.v)?;
    let embedding_dev = (p - Vec3::from(s.point)).norm();
    let du = psi_u(surf, s.u, s.v)?;
    let x = space.killing_eval(&p)?;
    let g = space.metric_tensor(&p)?;
    let beta = du + x * s.dv_du;
    let gx = g * x;
    let gbb = beta.dot(&(g * beta));
    let gbx = beta.dot(&gx);
    let gxx = x.dot(&gx);
    let sin_part = (gbb * gxx - gbx * gbx).max(0.0).sqrt();
    let angle = sin_part.atan2(gbx);
    let sin_t = spec.theta0.sin();

    let e = du.dot(&(g * du));
    let f = du.dot(&gx);
    let identity = ((e * gxx - f * f) - gxx).abs() / gxx;

    let a = surf.analytic_coeffs(s.u)?;
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(1.0);
    let analytic_numeric = rel(a.e, e).max(rel(a.f, f)).max(rel(a.g, gxx));

    Ok(SampleCheck {
        angle_dev: (angle - expected_angle(spec)).abs(),
        unit_speed_dev: (gbb.sqrt() * sin_t - 1.0).abs(),
        coeff_identity_dev: identity,
        analytic_numeric_dev: analytic_numeric,
        speed: gbb.sqrt(),
        clairaut: gbx * sin_t,
        embedding_dev,
    })
}

/// `|ω_uu + K ω|` with `ω = ‖X(γ(u))‖` from the ambient metric.
pub fn curvature_residual(surf: &InvariantSurface, k: f64, u: f64) -> Result<f64> {
    let omega = |t: f64| -> Result<f64> {
        let p = surf.lift(t)?;
        let x = surf.space().killing_eval(&p)?;
        Ok(surf.space().metric_eval(&p, &x, &x)?.sqrt())
    };
    let w = omega(u)?;
    let w_uu = five_point_second(omega, u, oracle_step(surf, u))?;
    Ok((w_uu + k * w).abs())
}

/// Per-sample angle deviation, `NaN` where the oracle could not evaluate.
pub fn angle_deviations(surf: &InvariantSurface, trace: &LoxodromeTrace) -> Vec<f64> {
    trace
        .samples
        .iter()
        .map(|s| check_sample(surf, &trace.spec, s).map_or(f64::NAN, |c| c.angle_dev))
        .collect()
}

fn fold_max(acc: &mut f64, x: f64) {
    // a NaN must not be swallowed by max
    if x.is_nan() || x > *acc {
        *acc = if x.is_nan() { f64::INFINITY } else { x };
    }
}

pub fn verify_trace(
    surf: &InvariantSurface,
    trace: &LoxodromeTrace,
    tol: &Tolerances,
) -> VerificationReport {
    let spec = trace.spec;
    let mut failures = Vec::new();
    let (mut angle, mut unit, mut ident, mut an) = (0.0, 0.0, 0.0, 0.0);
    let mut embed = 0.0;
    let (mut c_lo, mut c_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut us = Vec::with_capacity(trace.samples.len());
    let mut speeds = Vec::with_capacity(trace.samples.len());
    let mut curvature = surf.claimed_curvature().map(|_| 0.0);

    if trace.samples.is_empty() {
        failures.push("trace has no samples".to_string());
    }
    for (i, s) in trace.samples.iter().enumerate() {
        match check_sample(surf, &spec, s) {
            Ok(c) => {
                fold_max(&mut angle, c.angle_dev);
                fold_max(&mut unit, c.unit_speed_dev);
                fold_max(&mut ident, c.coeff_identity_dev);
                fold_max(&mut an, c.analytic_numeric_dev);
                fold_max(&mut embed, c.embedding_dev);
                c_lo = c_lo.min(c.clairaut);
                c_hi = c_hi.max(c.clairaut);
                us.push(s.u);
                speeds.push(c.speed);
            }
            Err(e) => {
                failures.push(format!("sample {i} (u = {}): {e}", s.u));
                for m in [&mut angle, &mut unit, &mut ident, &mut an, &mut embed] {
                    *m = f64::INFINITY;
                }
            }
        }
        if let (Some(k), Some(acc)) = (surf.claimed_curvature(), curvature.as_mut()) {
            match curvature_residual(surf, k, s.u) {
                Ok(r) => fold_max(acc, r),
                Err(e) => {
                    failures.push(format!("curvature at u = {}: {e}", s.u));
                    *acc = f64::INFINITY;
                }
            }
        }
    }

    let arc_err = match (us.first(), us.last()) {
        (Some(&a), Some(&b)) if us.len() >= 2 && a != b => {
            let expected = (b - a) / spec.theta0.sin();
            ((integrate_samples(&us, &speeds) - expected) / expected).abs()
        }
        _ => 0.0,
    };
    let clairaut_drift = if c_hi >= c_lo { c_hi - c_lo } else { 0.0 };

    let mut check = |name: &str, value: f64, limit: f64| {
        if !(value <= limit) {
            failures.push(format!("{name} = {value:e} exceeds {limit:e}"));
        }
    };
    check("max_angle_dev", angle, tol.angle);
    check("max_unit_speed_dev", unit, tol.unit_speed);
    check("max_coeff_identity_dev", ident, tol.coeff_identity);
    check("max_analytic_numeric_dev", an, tol.analytic_numeric);
    check("arc_length_rel_err", arc_err, tol.arc_length);
    check("max_embedding_dev", embed, tol.embedding);
    if let Some(r) = curvature {
        check("curvature_ode_residual", r, tol.curvature);
    }

    VerificationReport {
        surface_id: surf.id().to_string(),
        spec,
        samples: trace.samples.len(),
        max_angle_dev: angle,
        max_unit_speed_dev: unit,
        max_coeff_identity_dev: ident,
        max_analytic_numeric_dev: an,
        curvature_ode_residual: curvature,
        clairaut_drift,
        arc_length_rel_err: arc_err,
        max_embedding_dev: embed,
        monotone: trace.monotone,
        diverging: trace.diverging,
        pass: failures.is_empty(),
        failures,
    }
}

/// Scales `v` and `v′` of every sample by `factor` and re-embeds the points,
/// producing a self-consistent curve that is no longer a loxodrome.
pub fn corrupt_trace(
    surf: &InvariantSurface,
    trace: &LoxodromeTrace,
    factor: f64,
) -> Result<LoxodromeTrace> {
    let mut out = trace.clone();
    for s in &mut out.samples {
        s.v *= factor;
        s.dv_du *= factor;
        let p = surf.psi(s.u, s.v)?;
        s.point = [p.x, p.y, p.z];
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatnessOutcome {
    pub is_geodesic: bool,
    pub geodesic_residual: f64,
    pub max_abs_k: f64,
    /// A geodesic loxodrome was found only where the surface is flat.
    pub consistent: bool,
}

/// Residual below which a loxodrome counts as a geodesic.
pub const GEODESIC_TOL: f64 = 1e-8;
/// Curvature bound a geodesic loxodrome forces.
pub const FLAT_TOL: f64 = 1e-5;

/// Traces one loxodrome over the suite span and checks that it is a geodesic
/// only if the surface is flat along it.
pub fn verify_flatness_theorem(surf: &InvariantSurface, theta0: f64) -> Result<FlatnessOutcome> {
    if (theta0 - FRAC_PI_2).abs() < 1e-12 {
        return Err(GeomError::BadParams(
            "theta0 = pi/2 loxodromes are always geodesics; pick another angle".into(),
        ));
    }
    let (lo, hi) = surf.suite_span();
    let spec = LoxodromeSpec::new(theta0, Branch::Plus, lo, 0.0, 201)?;
    let t = trace(surf, &spec, hi)?;
    let residual = geodesic_residual(surf, &t)?;
    let mut max_k: f64 = 0.0;
    for s in &t.samples {
        max_k = max_k.max(surf.gauss_curvature(s.u)?.abs());
    }
    let is_geodesic = residual <= GEODESIC_TOL;
    Ok(FlatnessOutcome {
        is_geodesic,
        geodesic_residual: residual,
        max_abs_k: max_k,
        consistent: !is_geodesic || max_k <= FLAT_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_catalog_surface;
    use std::collections::BTreeMap;
    use std::f64::consts::FRAC_PI_4;

    fn cat(id: &str) -> InvariantSurface {
        build_catalog_surface(id, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn sphere_trace_passes() {
        let s = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 0.2, 0.0, 201).unwrap();
        let t = trace(&s, &spec, PI - 0.2).unwrap();
        let r = verify_trace(&s, &t, &Tolerances::default());
        assert!(r.pass, "{r:#?}");
        assert!(r.max_angle_dev <= 1e-6);
    }

    #[test]
    fn corrupted_trace_fails() {
        let s = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 0.2, 0.0, 201).unwrap();
        let t = trace(&s, &spec, PI - 0.2).unwrap();
        let bad = corrupt_trace(&s, &t, 1.1).unwrap();
        let r = verify_trace(&s, &bad, &Tolerances::default());
        assert!(!r.pass);
        assert!(r.max_angle_dev > 1e-2);
    }

    #[test]
    fn meridian_has_zero_clairaut_drift() {
        let s = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_2, Branch::Plus, 0.3, 0.0, 51).unwrap();
        let t = trace(&s, &spec, 2.8).unwrap();
        let r = verify_trace(&s, &t, &Tolerances::default());
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.clairaut_drift, 0.0);
    }

    #[test]
    fn flatness_examples() {
        let cyl = verify_flatness_theorem(&cat("circular_cylinder"), FRAC_PI_4).unwrap();
        assert!(cyl.is_geodesic && cyl.max_abs_k <= 1e-6 && cyl.consistent);
        let sph = verify_flatness_theorem(&cat("sphere"), FRAC_PI_4).unwrap();
        assert!(!sph.is_geodesic && sph.geodesic_residual > 1e-3);
        let bcv = verify_flatness_theorem(&cat("bcv_cylinder"), FRAC_PI_4).unwrap();
        assert!(bcv.is_geodesic && bcv.max_abs_k <= 1e-5);
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("angle", 1e-3).unwrap();
        assert_eq!(t.angle, 1e-3);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("angle", -1.0).is_err());
    }
}
