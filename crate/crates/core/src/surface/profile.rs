//! Profile curves `u ↦ (ξ₁(u), ξ₂(u))` in the orbit space.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diff::{five_point, smooth_step};
use crate::error::{GeomError, Result};
use crate::expr::ProfileExpr;
use crate::quad::{adaptive_simpson, SimpsonOptions};

use super::family::Family;

/// A fallible real function of one variable.
pub type RealFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

pub fn real_fn<F>(f: F) -> RealFn
where
    F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Wraps an infallible function.
pub fn pure_fn<F>(f: F) -> RealFn
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(move |u| Ok(f(u)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    OdeIntegrated,
    Sampled,
}

#[derive(Clone)]
pub struct ProfileCurve {
    u_min: f64,
    u_max: f64,
    xi1: RealFn,
    xi1_d: Option<RealFn>,
    xi2: RealFn,
    xi2_d: Option<RealFn>,
    provenance: Provenance,
}

impl fmt::Debug for ProfileCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfileCurve")
            .field("u_domain", &(self.u_min, self.u_max))
            .field("analytic_xi1_prime", &self.xi1_d.is_some())
            .field("analytic_xi2_prime", &self.xi2_d.is_some())
            .field("provenance", &self.provenance)
            .finish()
    }
}

fn check_interval(u_min: f64, u_max: f64) -> Result<()> {
    if u_min.is_finite() && u_max.is_finite() && u_min < u_max {
        Ok(())
    } else {
        Err(GeomError::BadParams(format!(
            "u-domain must be a finite interval with u_min < u_max, got ({u_min}, {u_max})"
        )))
    }
}

impl ProfileCurve {
    pub fn closed_form(u_min: f64, u_max: f64, xi1: RealFn, xi2: RealFn) -> Result<Self> {
        check_interval(u_min, u_max)?;
        Ok(ProfileCurve {
            u_min,
            u_max,
            xi1,
            xi1_d: None,
            xi2,
            xi2_d: None,
            provenance: Provenance::ClosedForm,
        })
    }

    /// Attaches analytic derivatives; `None` keeps finite differences.
    pub fn with_derivatives(mut self, xi1_d: Option<RealFn>, xi2_d: Option<RealFn>) -> Self {
        if xi1_d.is_some() {
            self.xi1_d = xi1_d;
        }
        if xi2_d.is_some() {
            self.xi2_d = xi2_d;
        }
        self
    }

    pub fn from_exprs(xi1: &ProfileExpr, xi2: &ProfileExpr, u_min: f64, u_max: f64) -> Result<Self> {
        Self::closed_form(u_min, u_max, expr_fn(xi1), expr_fn(xi2))
    }

    /// Profile through tabulated samples, interpolated by monotone cubics.
    pub fn sampled(u: &[f64], xi1: &[f64], xi2: &[f64]) -> Result<Self> {
        let c1 = Arc::new(MonotoneCubic::new(u, xi1)?);
        let c2 = Arc::new(MonotoneCubic::new(u, xi2)?);
        let (a, b) = (u[0], u[u.len() - 1]);
        let (d1, d2) = (c1.clone(), c2.clone());
        Ok(ProfileCurve {
            u_min: a,
            u_max: b,
            xi1: pure_fn(move |t| c1.eval(t)),
            xi1_d: Some(pure_fn(move |t| d1.derivative(t))),
            xi2: pure_fn(move |t| c2.eval(t)),
            xi2_d: Some(pure_fn(move |t| d2.derivative(t))),
            provenance: Provenance::Sampled,
        })
    }

    pub fn u_domain(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    /// Whether `u` lies in the open u-domain.
    pub fn contains(&self, u: f64) -> bool {
        u > self.u_min && u < self.u_max
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn xi1(&self, u: f64) -> Result<f64> {
        (self.xi1)(u)
    }

    pub fn xi2(&self, u: f64) -> Result<f64> {
        (self.xi2)(u)
    }

    pub fn xi1_prime(&self, u: f64) -> Result<f64> {
        match &self.xi1_d {
            Some(d) => d(u),
            None => five_point(&*self.xi1, u, smooth_step(u)),
        }
    }

    pub fn xi2_prime(&self, u: f64) -> Result<f64> {
        match &self.xi2_d {
            Some(d) => d(u),
            None => five_point(&*self.xi2, u, smooth_step(u)),
        }
    }
}

pub(crate) fn expr_fn(e: &ProfileExpr) -> RealFn {
    let e = e.clone();
    real_fn(move |u| Ok(e.eval(u)?))
}

/// Options for [`profile_from_constraint`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintOptions {
    /// Value of `ξ₂` at the anchor.
    pub xi2_0: f64,
    /// Anchor parameter; defaults to the lower end of the u-domain.
    pub u_ref: Option<f64>,
    /// Sign of `ξ₂′` (the constraint fixes only its square).
    pub xi2_sign: f64,
}

impl Default for ConstraintOptions {
    fn default() -> Self {
        ConstraintOptions {
            xi2_0: 0.0,
            u_ref: None,
            xi2_sign: 1.0,
        }
    }
}

/// Spacing of the cumulative `ξ₂` table.
const TABLE_STEP: f64 = 0.01;
/// Per-cell quadrature tolerance; cells are short, so the sum stays far below 1e-10.
const CELL_TOL: f64 = 1e-13;
/// Rounding slack allowed in the speed deficit before it counts as negative.
const DEFICIT_SLACK: f64 = 1e-12;
/// Below this both the deficit and `h₂₂` count as vanishing.
const DEGENERATE: f64 = 1e-6;

fn rate_fn(
    family: Family,
    xi1: RealFn,
    xi1_d: Option<RealFn>,
    sign: f64,
    interior: f64,
) -> Result<RealFn> {
    // reject early: quotient metric must not depend on ξ₂
    if family.quotient_metric(1.0).is_none() {
        return Err(GeomError::BadParams(format!(
            "family {} has a quotient metric depending on xi2; supply xi2 explicitly",
            family.name()
        )));
    }
    // returns (deficit, h22)
    let parts = move |u: f64| -> Result<(f64, f64)> {
        let x = xi1(u)?;
        let dx = match &xi1_d {
            Some(d) => d(u)?,
            None => five_point(&*xi1, u, smooth_step(u))?,
        };
        let (h11, h22) = family.quotient_metric(x).expect("checked above");
        let deficit = 1.0 - h11 * dx * dx;
        if deficit < -DEFICIT_SLACK || deficit.is_nan() {
            return Err(GeomError::SpeedDeficitNegative { u, deficit });
        }
        Ok((deficit.max(0.0), h22))
    };
    let degenerate = |d: f64, h: f64| h.is_nan() || (h < DEGENERATE && d < DEGENERATE);
    Ok(real_fn(move |u| {
        let (d, h) = parts(u)?;
        let r = if degenerate(d, h) {
            // near a degenerate orbit both terms vanish and their ratio is
            // rounding noise; extrapolate from points further inside
            let eta = 1e-3 * u.abs().max(1.0) * (interior - u).signum();
            let mut r = [0.0; 3];
            for (k, slot) in r.iter_mut().enumerate() {
                let (d, h) = parts(u + (k + 1) as f64 * eta)?;
                *slot = d / h;
            }
            (3.0 * r[0] - 3.0 * r[1] + r[2]).max(0.0)
        } else {
            d / h
        };
        if !r.is_finite() {
            return Err(GeomError::BadParams(format!("xi2' is unbounded at u = {u}")));
        }
        Ok(sign * r.sqrt())
    }))
}

/// Completes a profile from `ξ₁` alone by integrating the unit-speed
/// constraint `h₁₁ ξ₁′² + h₂₂ ξ₂′² = 1` of the family's quotient metric.
pub fn profile_from_constraint(
    family: Family,
    xi1: RealFn,
    xi1_d: Option<RealFn>,
    u_min: f64,
    u_max: f64,
    opts: ConstraintOptions,
) -> Result<ProfileCurve> {
    check_interval(u_min, u_max)?;
    if opts.xi2_sign != 1.0 && opts.xi2_sign != -1.0 {
        return Err(GeomError::BadParams("xi2_sign must be +1 or -1".into()));
    }
    if !opts.xi2_0.is_finite() {
        return Err(GeomError::BadParams("xi2_0 must be finite".into()));
    }
    let u_ref = opts.u_ref.unwrap_or(u_min);
    if !(u_min..=u_max).contains(&u_ref) {
        return Err(GeomError::BadParams(format!(
            "u_ref = {u_ref} lies outside [{u_min}, {u_max}]"
        )));
    }
    let rate = rate_fn(family, xi1.clone(), xi1_d.clone(), opts.xi2_sign, 0.5 * (u_min + u_max))?;
    let table = Arc::new(Xi2Table::build(rate.clone(), u_min, u_max, u_ref, opts.xi2_0)?);
    Ok(ProfileCurve {
        u_min,
        u_max,
        xi1,
        xi1_d,
        xi2: real_fn(move |u| table.eval(u)),
        xi2_d: Some(rate),
        provenance: Provenance::OdeIntegrated,
    })
}

/// Same as [`profile_from_constraint`] with `ξ₁` given as an expression.
pub fn profile_from_expr_constraint(
    family: Family,
    xi1: &ProfileExpr,
    u_min: f64,
    u_max: f64,
    opts: ConstraintOptions,
) -> Result<ProfileCurve> {
    profile_from_constraint(family, expr_fn(xi1), None, u_min, u_max, opts)
}

/// Cumulative integral of `ξ₂′` on a fixed grid. Between nodes the value is
/// the node value plus a short adaptive integral from that node, so the
/// result is continuous to quadrature precision and cheap to difference.
struct Xi2Table {
    rate: RealFn,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

fn grid(from: f64, to: f64) -> Vec<f64> {
    let n = ((to - from).abs() / TABLE_STEP).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| if i == n { to } else { from + (to - from) * i as f64 / n as f64 })
        .collect()
}

fn cell_opts() -> SimpsonOptions {
    SimpsonOptions::with_tol(CELL_TOL)
}

impl Xi2Table {
    fn build(rate: RealFn, u_min: f64, u_max: f64, u_ref: f64, xi2_0: f64) -> Result<Self> {
        let f = |u: f64| rate(u);
        let mut left = if u_ref > u_min { grid(u_ref, u_min) } else { vec![u_ref] };
        let right = if u_max > u_ref { grid(u_ref, u_max) } else { vec![u_ref] };

        let mut left_vals = vec![xi2_0];
        for w in left.windows(2) {
            // integrate left to right so the forward evaluation in `eval` reproduces it
            let cell = adaptive_simpson(&f, w[1], w[0], cell_opts())?;
            left_vals.push(left_vals[left_vals.len() - 1] - cell);
        }
        let mut right_vals = vec![xi2_0];
        for w in right.windows(2) {
            let cell = adaptive_simpson(&f, w[0], w[1], cell_opts())?;
            right_vals.push(right_vals[right_vals.len() - 1] + cell);
        }

        left.reverse();
        left_vals.reverse();
        left.pop();
        left_vals.pop();
        left.extend_from_slice(&right);
        left_vals.extend_from_slice(&right_vals);
        Ok(Xi2Table {
            rate,
            nodes: left,
            values: left_vals,
        })
    }

    fn eval(&self, u: f64) -> Result<f64> {
        let k = match self.nodes.partition_point(|&x| x <= u) {
            0 => 0,
            i => i - 1,
        };
        let k = k.min(self.nodes.len() - 1);
        let base = self.nodes[k];
        if u == base {
            return Ok(self.values[k]);
        }
        let f = |t: f64| (self.rate)(t);
        Ok(self.values[k] + adaptive_simpson(&f, base, u, cell_opts())?)
    }
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(GeomError::BadParams(
                "sampled profile needs at least two (u, xi1, xi2) rows of equal length".into(),
            ));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(GeomError::BadParams("sampled profile contains non-finite values".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeomError::BadParams("sampled u values must be strictly increasing".into()));
        }
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut m = vec![0.0; n];
        if n == 2 {
            m[0] = delta[0];
            m[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                let (d0, d1) = (delta[i - 1], delta[i]);
                if d0 * d1 > 0.0 {
                    let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                    let w1 = 2.0 * h1 + h0;
                    let w2 = h1 + 2.0 * h0;
                    m[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
                }
            }
            m[0] = end_slope(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
            m[n - 1] = end_slope(
                x[n - 1] - x[n - 2],
                x[n - 2] - x[n - 3],
                delta[n - 2],
                delta[n - 3],
            );
        }
        Ok(MonotoneCubic {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    fn cell(&self, t: f64) -> usize {
        self.x
            .partition_point(|&v| v <= t)
            .saturating_sub(1)
            .min(self.x.len() - 2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.cell(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.m[i] + h01 * self.y[i + 1] + h11 * h * self.m[i + 1]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let i = self.cell(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        d00 * self.y[i] + d10 * self.m[i] + d01 * self.y[i + 1] + d11 * self.m[i + 1]
    }
}

// three-point end slope, clipped to keep the interpolant monotone
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotational_constraint_recovers_cosine() {
        // ξ₁ = sin u, ξ₂′ = −|cos u| on (0, π/2) with the sphere convention ξ₂(0) = 1
        let p = profile_from_constraint(
            Family::Helicoidal { a: 0.0 },
            pure_fn(f64::sin),
            None,
            0.0,
            PI / 2.0,
            ConstraintOptions {
                xi2_0: 1.0,
                u_ref: None,
                xi2_sign: -1.0,
            },
        )
        .unwrap();
        for k in 0..=15 {
            let u = 0.1 * k as f64;
            assert!((p.xi2(u).unwrap() - u.cos()).abs() < 1e-10, "u = {u}");
        }
        assert_eq!(p.provenance(), Provenance::OdeIntegrated);
    }

    #[test]
    fn constant_radius_gives_linear_xi2() {
        let p = profile_from_constraint(
            Family::Helicoidal { a: 0.0 },
            pure_fn(|_| 2.0),
            None,
            -1.0,
            3.0,
            ConstraintOptions {
                u_ref: Some(0.0),
                ..Default::default()
            },
        )
        .unwrap();
        for u in [-0.9, -0.3, 0.0, 0.77, 2.5] {
            assert!((p.xi2(u).unwrap() - u).abs() < 1e-12);
        }
    }

    #[test]
    fn steep_profile_is_rejected() {
        let r = profile_from_constraint(
            Family::Helicoidal { a: 0.0 },
            pure_fn(|u| 2.0 * u),
            None,
            0.1,
            1.0,
            ConstraintOptions::default(),
        );
        assert!(matches!(r, Err(GeomError::SpeedDeficitNegative { .. })));
    }

    #[test]
    fn table_is_continuous_across_nodes() {
        let p = profile_from_constraint(
            Family::Helicoidal { a: 1.0 },
            pure_fn(f64::sin),
            None,
            0.0,
            3.0,
            ConstraintOptions::default(),
        )
        .unwrap();
        let node = 0.5;
        let lo = p.xi2(node - 1e-9).unwrap();
        let hi = p.xi2(node + 1e-9).unwrap();
        let slope = (1.0 + node.sin().powi(2)).sqrt();
        assert!(((hi - lo) / 2e-9 - slope).abs() < 1e-4);
    }

    #[test]
    fn monotone_cubic_reproduces_data_and_lines() {
        let x = [0.0, 0.5, 1.5, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t - 1.0).collect();
        let c = MonotoneCubic::new(&x, &y).unwrap();
        for t in [0.0, 0.2, 0.5, 1.1, 2.7, 3.0] {
            assert!((c.eval(t) - (3.0 * t - 1.0)).abs() < 1e-12);
            assert!((c.derivative(t) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_cubic_preserves_monotonicity() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 0.1, 0.2, 5.0, 5.1];
        let c = MonotoneCubic::new(&x, &y).unwrap();
        let mut last = c.eval(0.0);
        for k in 1..=400 {
            let v = c.eval(k as f64 * 0.01);
            assert!(v >= last - 1e-15);
            last = v;
        }
    }

    #[test]
    fn sampled_rejects_bad_grids() {
        assert!(ProfileCurve::sampled(&[0.0], &[1.0], &[1.0]).is_err());
        assert!(ProfileCurve::sampled(&[0.0, 0.0], &[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(ProfileCurve::sampled(&[0.0, 1.0], &[1.0], &[1.0, 2.0]).is_err());
    }
}
