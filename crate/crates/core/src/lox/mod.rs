//! Loxodromes: curves meeting the orbits of the Killing field at a constant
//! angle, traced by quadrature of
//! `dv/du = (−F ± cot ϑ₀ ω) / ω²`.

pub mod closed_form;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::quad::{cumulative_simpson, SimpsonOptions};
use crate::surface::InvariantSurface;

pub use closed_form::{closed_form_v, ClosedFormKind, ClosedFormSolution, CurvatureClass};

/// The `±` in the master integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl FromStr for Branch {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(GeomError::BadParams(format!("branch must be plus or minus, got `{s}`"))),
        }
    }
}

/// `cot ϑ₀`, exactly zero at `ϑ₀ = π/2` so meridians stay at `v ≡ v₀`.
pub fn cot(theta0: f64) -> f64 {
    if (theta0 - FRAC_PI_2).abs() <= 4.0 * f64::EPSILON {
        0.0
    } else {
        theta0.cos() / theta0.sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoxodromeSpec {
    pub theta0: f64,
    pub branch: Branch,
    pub u0: f64,
    pub v0: f64,
    /// Number of output samples.
    pub samples: usize,
}

impl LoxodromeSpec {
    pub fn new(theta0: f64, branch: Branch, u0: f64, v0: f64, samples: usize) -> Result<Self> {
        let s = LoxodromeSpec {
            theta0,
            branch,
            u0,
            v0,
            samples,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta0 > 0.0 && self.theta0 < PI) {
            return Err(GeomError::BadParams(format!(
                "theta0 must lie in (0, pi), got {}",
                self.theta0
            )));
        }
        if self.samples < 2 {
            return Err(GeomError::BadParams("a trace needs at least 2 samples".into()));
        }
        if !(self.u0.is_finite() && self.v0.is_finite()) {
            return Err(GeomError::BadParams("u0 and v0 must be finite".into()));
        }
        Ok(())
    }

    pub fn cot_theta0(&self) -> f64 {
        cot(self.theta0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub u: f64,
    pub v: f64,
    /// `v′(u)` from the integrand, never differenced.
    pub dv_du: f64,
    pub point: [f64; 3],
    /// Arc length `(u − u₀)/sin ϑ₀`.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoxodromeTrace {
    pub surface_id: String,
    pub spec: LoxodromeSpec,
    pub samples: Vec<TraceSample>,
    /// `v′` kept one sign over the samples.
    pub monotone: bool,
    /// `|v|` exceeded `1/ε_dom`: the curve spirals toward a singular orbit.
    pub diverging: bool,
}

impl LoxodromeTrace {
    /// Assembles a trace from samples and fills the flags. Samples must be
    /// sorted by `u`.
    pub fn from_samples(
        surface_id: impl Into<String>,
        spec: LoxodromeSpec,
        samples: Vec<TraceSample>,
        eps_dom: f64,
    ) -> Self {
        let monotone = samples.iter().all(|s| s.dv_du >= 0.0) || samples.iter().all(|s| s.dv_du <= 0.0);
        let diverging = samples.iter().any(|s| s.v.abs() > 1.0 / eps_dom);
        LoxodromeTrace {
            surface_id: surface_id.into(),
            spec,
            samples,
            monotone,
            diverging,
        }
    }

    pub fn u_range(&self) -> (f64, f64) {
        let first = self.samples.first().map_or(self.spec.u0, |s| s.u);
        let last = self.samples.last().map_or(self.spec.u0, |s| s.u);
        (first, last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Distance kept from the ends of the u-domain.
    pub eps_dom: f64,
    /// Smallest admissible `ω`.
    pub omega_min: f64,
    pub quad: SimpsonOptions,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            eps_dom: 1e-4,
            omega_min: 1e-9,
            quad: SimpsonOptions::default(),
        }
    }
}

fn integrand_raw(surf: &InvariantSurface, cot_t: f64, sign: f64, u: f64, omega_min: f64) -> Result<f64> {
    let c = surf.coefficients(u)?;
    let omega = c.g.sqrt();
    if !(omega > omega_min) {
        return Err(GeomError::NearSingularOrbit { u, omega });
    }
    Ok((-c.f + sign * cot_t * omega) / c.g)
}

/// `v′(u) = (−F ± cot ϑ₀ ω)/ω²`.
pub fn integrand(surf: &InvariantSurface, spec: &LoxodromeSpec, u: f64) -> Result<f64> {
    integrand_raw(surf, spec.cot_theta0(), spec.branch.sign(), u, TraceOptions::default().omega_min)
}

pub fn arc_length(u1: f64, u2: f64, theta0: f64) -> f64 {
    (u2 - u1) / theta0.sin()
}

fn check_span(surf: &InvariantSurface, a: f64, b: f64, eps: f64) -> Result<()> {
    let (lo, hi) = surf.u_domain();
    let (lo, hi) = (lo + eps, hi - eps);
    for u in [a, b] {
        if !(u.is_finite() && u >= lo && u <= hi) {
            return Err(GeomError::BadParams(format!(
                "u = {u} lies outside the clamped domain [{lo}, {hi}] of {}",
                surf.id()
            )));
        }
    }
    Ok(())
}

/// One-directional samples from `spec.u0` to `u_end` (inclusive), in that order.
fn sweep(
    surf: &InvariantSurface,
    spec: &LoxodromeSpec,
    u_end: f64,
    n: usize,
    opts: &TraceOptions,
) -> Result<Vec<TraceSample>> {
    let u0 = spec.u0;
    let nodes: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                u_end
            } else {
                u0 + (u_end - u0) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    sweep_nodes(surf, spec, &nodes, opts)
}

fn sweep_nodes(
    surf: &InvariantSurface,
    spec: &LoxodromeSpec,
    nodes: &[f64],
    opts: &TraceOptions,
) -> Result<Vec<TraceSample>> {
    let (cot_t, sign) = (spec.cot_theta0(), spec.branch.sign());
    let u0 = spec.u0;
    let f = |u: f64| integrand_raw(surf, cot_t, sign, u, opts.omega_min);
    let cum = cumulative_simpson(&f, nodes, opts.quad)?;
    let sin_t = spec.theta0.sin();
    nodes
        .iter()
        .zip(cum)
        .map(|(&u, c)| {
            let v = spec.v0 + c;
            let p = surf.psi(u, v)?;
            Ok(TraceSample {
                u,
                v,
                dv_du: f(u)?,
                point: [p.x, p.y, p.z],
                s: (u - u0) / sin_t,
            })
        })
        .collect()
}

/// Traces through the given parameters, which must start at `spec.u0` and
/// be strictly monotone. `spec.samples` is ignored.
pub fn trace_at(
    surf: &InvariantSurface,
    spec: &LoxodromeSpec,
    us: &[f64],
    opts: &TraceOptions,
) -> Result<LoxodromeTrace> {
    spec.validate()?;
    let (Some(&first), Some(&last)) = (us.first(), us.last()) else {
        return Err(GeomError::BadParams("need at least one parameter".into()));
    };
    if first != spec.u0 {
        return Err(GeomError::BadParams(format!(
            "first parameter {first} must equal u0 = {}",
            spec.u0
        )));
    }
    let up = us.windows(2).all(|w| w[1] > w[0]);
    let down = us.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(GeomError::BadParams("parameters must be strictly monotone".into()));
    }
    check_span(surf, first, last, opts.eps_dom)?;
    let mut samples = sweep_nodes(surf, spec, us, opts)?;
    if down {
        samples.reverse();
    }
    Ok(LoxodromeTrace::from_samples(surf.id(), *spec, samples, opts.eps_dom))
}

/// Traces the loxodrome from `spec.u0` to `u_end` with default options.
pub fn trace(surf: &InvariantSurface, spec: &LoxodromeSpec, u_end: f64) -> Result<LoxodromeTrace> {
    trace_with(surf, spec, u_end, &TraceOptions::default())
}

pub fn trace_with(
    surf: &InvariantSurface,
    spec: &LoxodromeSpec,
    u_end: f64,
    opts: &TraceOptions,
) -> Result<LoxodromeTrace> {
    spec.validate()?;
    check_span(surf, spec.u0, u_end, opts.eps_dom)?;
    if u_end == spec.u0 {
        return Err(GeomError::BadParams("u_end must differ from u0".into()));
    }
    let mut samples = sweep(surf, spec, u_end, spec.samples, opts)?;
    if u_end < spec.u0 {
        samples.reverse();
    }
    Ok(LoxodromeTrace::from_samples(surf.id(), *spec, samples, opts.eps_dom))
}

/// Traces over `[lo, hi]` through `spec.u0`, integrating outward from the
/// base point in both directions. Samples come out sorted by `u`.
pub fn trace_span(
    surf: &InvariantSurface,
    spec: &LoxodromeSpec,
    lo: f64,
    hi: f64,
    opts: &TraceOptions,
) -> Result<LoxodromeTrace> {
    spec.validate()?;
    if !(lo < hi) || spec.u0 < lo || spec.u0 > hi {
        return Err(GeomError::BadParams(format!(
            "need lo <= u0 <= hi with lo < hi, got [{lo}, {hi}] and u0 = {}",
            spec.u0
        )));
    }
    check_span(surf, lo, hi, opts.eps_dom)?;
    let n = spec.samples;
    let share = |len: f64| ((n as f64 * len / (hi - lo)).round() as usize).max(2);
    let mut samples = Vec::with_capacity(n + 2);
    if spec.u0 > lo {
        let mut left = sweep(surf, spec, lo, share(spec.u0 - lo), opts)?;
        left.reverse();
        samples.extend(left);
    }
    if spec.u0 < hi {
        let right = sweep(surf, spec, hi, share(hi - spec.u0), opts)?;
        // base point already present when the left half was traced
        let skip = usize::from(!samples.is_empty());
        samples.extend(right.into_iter().skip(skip));
    }
    Ok(LoxodromeTrace::from_samples(surf.id(), *spec, samples, opts.eps_dom))
}

/// `ω(uᵢ) cos ϑ₀` at every sample.
pub fn clairaut_quantity(surf: &InvariantSurface, trace: &LoxodromeTrace) -> Result<Vec<f64>> {
    let c = trace.spec.theta0.cos();
    trace
        .samples
        .iter()
        .map(|s| Ok(surf.omega_of(s.u)? * c))
        .collect()
}

/// Derivative of tabulated values on a possibly non-uniform grid,
/// second-order everywhere.
pub(crate) fn gradient(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    if n == 2 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        return vec![s, s];
    }
    for i in 1..n - 1 {
        let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        d[i] = (h0 * h0 * y[i + 1] - h1 * h1 * y[i - 1] + (h1 * h1 - h0 * h0) * y[i])
            / (h0 * h1 * (h0 + h1));
    }
    let one_sided = |i0: usize, i1: usize, i2: usize| {
        // quadratic through three points, derivative at x[i0]
        let (h1, h2) = (x[i1] - x[i0], x[i2] - x[i0]);
        let (d1, d2) = (y[i1] - y[i0], y[i2] - y[i0]);
        (d1 * h2 * h2 - d2 * h1 * h1) / (h1 * h2 * (h2 - h1))
    };
    d[0] = one_sided(0, 1, 2);
    d[n - 1] = one_sided(n - 1, n - 2, n - 3);
    d
}

/// `max |d/ds (F u′ + ω² v′)|` along the trace, with `u′ = sin ϑ₀` and
/// `v′ = sin ϑ₀ · dv/du`. Vanishes on geodesics.
pub fn geodesic_residual(surf: &InvariantSurface, trace: &LoxodromeTrace) -> Result<f64> {
    if trace.samples.len() < 3 {
        return Err(GeomError::BadParams("geodesic residual needs at least 3 samples".into()));
    }
    let sin_t = trace.spec.theta0.sin();
    let mut us = Vec::with_capacity(trace.samples.len());
    let mut q = Vec::with_capacity(trace.samples.len());
    for s in &trace.samples {
        let c = surf.coefficients(s.u)?;
        us.push(s.u);
        q.push((c.f + c.g * s.dv_du) * sin_t);
    }
    Ok(gradient(&us, &q)
        .into_iter()
        .map(|d| (d * sin_t).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_catalog_surface;
    use std::collections::BTreeMap;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

    fn cat(id: &str) -> InvariantSurface {
        build_catalog_surface(id, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn integrand_examples() {
        let sphere = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 1.0, 0.0, 10).unwrap();
        assert!((integrand(&sphere, &spec, PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        let meridian = LoxodromeSpec { theta0: PI / 2.0, ..spec };
        assert_eq!(integrand(&sphere, &meridian, 1.3).unwrap(), 0.0);
    }

    #[test]
    fn sphere_trace_hits_log_tan() {
        let sphere = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, PI / 2.0, 0.0, 101).unwrap();
        let t = trace(&sphere, &spec, 2.0).unwrap();
        let last = t.samples.last().unwrap();
        assert_eq!(last.u, 2.0);
        // ln tan 1, evaluated at high precision
        assert!((last.v - 0.443_022_724_116_922_6).abs() < 1e-10);
        assert!(t.monotone && !t.diverging);
    }

    #[test]
    fn pseudosphere_trace_hits_e() {
        let s = cat("pseudosphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 0.2, 0.2f64.exp() - 1.0, 51).unwrap();
        // v0 = e^0.2 − 1 puts the curve on v = eᵘ − 1
        let t = trace(&s, &spec, 1.0).unwrap();
        let last = t.samples.last().unwrap();
        assert!((last.v - (1f64.exp() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn arc_length_examples() {
        assert!((arc_length(0.0, 1.0, FRAC_PI_6) - 2.0).abs() < 1e-15);
        assert_eq!(arc_length(0.0, 1.0, PI / 2.0), 1.0);
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let sphere = cat("sphere");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 0.5, 0.0, 10).unwrap();
        assert!(matches!(trace(&sphere, &spec, PI), Err(GeomError::BadParams(_))));
        assert!(LoxodromeSpec::new(0.0, Branch::Plus, 0.5, 0.0, 10).is_err());
        assert!(LoxodromeSpec::new(1.0, Branch::Plus, 0.5, 0.0, 1).is_err());
    }

    #[test]
    fn trace_span_is_sorted_and_passes_through_base() {
        let s = cat("helicoidal_catenoid");
        let spec = LoxodromeSpec::new(FRAC_PI_6, Branch::Minus, 0.0, 0.25, 61).unwrap();
        let t = trace_span(&s, &spec, -3.0, 3.0, &TraceOptions::default()).unwrap();
        assert!(t.samples.windows(2).all(|w| w[0].u < w[1].u));
        let base = t.samples.iter().find(|x| x.u == 0.0).unwrap();
        assert_eq!(base.v, 0.25);
        assert_eq!(t.samples.first().unwrap().u, -3.0);
        assert_eq!(t.samples.last().unwrap().u, 3.0);
    }

    #[test]
    fn clairaut_examples() {
        let cyl = cat("circular_cylinder");
        let spec = LoxodromeSpec::new(FRAC_PI_4, Branch::Plus, 0.0, 0.0, 11).unwrap();
        let t = trace(&cyl, &spec, 2.0).unwrap();
        let q = clairaut_quantity(&cyl, &t).unwrap();
        assert!(q.iter().all(|x| *x == q[0]));

        let sphere = cat("sphere");
        let t = trace(&sphere, &LoxodromeSpec { u0: 0.5, ..spec }, 2.0).unwrap();
        let q = clairaut_quantity(&sphere, &t).unwrap();
        assert!((q[0] - q[q.len() - 1]).abs() > 1e-2);
    }

    #[test]
    fn gradient_is_exact_on_quadratics() {
        let x = [0.0, 0.1, 0.35, 0.5, 0.9];
        let y: Vec<f64> = x.iter().map(|t| 2.0 * t * t - t + 3.0).collect();
        for (t, d) in x.iter().zip(gradient(&x, &y)) {
            assert!((d - (4.0 * t - 1.0)).abs() < 1e-12);
        }
    }
}
