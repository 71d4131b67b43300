//! Adaptive Simpson quadrature with cumulative checkpoints.

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonOptions {
    /// Absolute tolerance for the whole integral.
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Hard cap on integrand evaluations for a single call.
    pub max_evals: usize,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        SimpsonOptions {
            abs_tol: 1e-10,
            max_depth: 40,
            max_evals: 2_000_000,
        }
    }
}

impl SimpsonOptions {
    pub fn with_tol(abs_tol: f64) -> Self {
        SimpsonOptions {
            abs_tol,
            ..Default::default()
        }
    }
}

struct State<'f, F> {
    f: &'f F,
    evals: usize,
    max_evals: usize,
    // local tolerance stops halving here so integrable endpoint
    // singularities converge within the depth budget
    min_tol: f64,
    failed: bool,
}

impl<F> State<'_, F>
where
    F: Fn(f64) -> Result<f64>,
{
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evals += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let h = b - a;
        let left = h / 12.0 * (fa + 4.0 * flm + fm);
        let right = h / 12.0 * (fm + 4.0 * frm + fb);
        let both = left + right;
        let delta = both - whole;
        // below this the difference is rounding noise, not truncation error
        let floor = 64.0 * f64::EPSILON * both.abs();
        if delta.abs() <= 15.0 * tol.max(floor) {
            return Ok(both + delta / 15.0);
        }
        if depth == 0 || self.evals >= self.max_evals || m <= a || m >= b {
            self.failed = true;
            return Ok(both + delta / 15.0);
        }
        let half = (0.5 * tol).max(self.min_tol);
        let l = self.refine(a, m, fa, flm, fm, left, half, depth - 1)?;
        let r = self.refine(m, b, fm, frm, fb, right, half, depth - 1)?;
        Ok(l + r)
    }
}

/// Integrates `f` over `[a, b]` (either orientation).
///
/// Errors from the integrand propagate unchanged. Exhausting the depth or
/// evaluation budget before meeting the tolerance is reported as
/// [`GeomError::QuadratureNonConvergent`].
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, opts: SimpsonOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return adaptive_simpson(f, b, a, opts).map(|x| -x);
    }
    let mut st = State {
        f,
        evals: 0,
        max_evals: opts.max_evals,
        min_tol: opts.abs_tol * 1e-4,
        failed: false,
    };
    let fa = st.eval(a)?;
    let fb = st.eval(b)?;
    let m = 0.5 * (a + b);
    let fm = st.eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = st.refine(a, b, fa, fm, fb, whole, opts.abs_tol, opts.max_depth)?;
    if st.failed || !value.is_finite() {
        return Err(GeomError::QuadratureNonConvergent { a, b });
    }
    Ok(value)
}

/// Cumulative integral of `f` at each node: `out[i] = ∫_{nodes[0]}^{nodes[i]} f`.
///
/// Each cell gets a share of `opts.abs_tol` proportional to its length, so the
/// last entry meets the overall tolerance. Partial sums are reused, never
/// recomputed from the first node.
pub fn cumulative_simpson<F>(f: &F, nodes: &[f64], opts: SimpsonOptions) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut out = Vec::with_capacity(nodes.len());
    if nodes.is_empty() {
        return Ok(out);
    }
    let span = (nodes[nodes.len() - 1] - nodes[0]).abs();
    let mut acc = 0.0;
    out.push(acc);
    for w in nodes.windows(2) {
        let share = if span > 0.0 {
            (w[1] - w[0]).abs() / span
        } else {
            1.0
        };
        let cell = SimpsonOptions {
            abs_tol: opts.abs_tol * share.max(1e-6),
            ..opts
        };
        acc += adaptive_simpson(f, w[0], w[1], cell)?;
        out.push(acc);
    }
    Ok(out)
}

/// Composite Simpson over tabulated samples (trapezoid on a trailing odd cell).
pub fn integrate_samples(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let (x0, x1, x2) = (xs[i], xs[i + 1], xs[i + 2]);
        let (h0, h1) = (x1 - x0, x2 - x1);
        // non-uniform Simpson on [x0, x2]
        let hs = h0 + h1;
        total += hs / 6.0
            * (ys[i] * (2.0 - h1 / h0)
                + ys[i + 1] * hs * hs / (h0 * h1)
                + ys[i + 2] * (2.0 - h0 / h1));
        i += 2;
    }
    if i + 1 < n {
        total += 0.5 * (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let f = |x: f64| Ok(3.0 * x * x - 2.0 * x + 1.0);
        let v = adaptive_simpson(&f, -1.0, 2.0, SimpsonOptions::default()).unwrap();
        assert!((v - 9.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let f = |x: f64| Ok(x.sin());
        let a = adaptive_simpson(&f, 0.0, PI, SimpsonOptions::default()).unwrap();
        let b = adaptive_simpson(&f, PI, 0.0, SimpsonOptions::default()).unwrap();
        assert!((a - 2.0).abs() < 1e-10);
        assert_eq!(a, -b);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let f = |x: f64| Ok(x.sqrt());
        let v = adaptive_simpson(&f, 0.0, 1.0, SimpsonOptions::default()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let f = |x: f64| Ok(x.exp());
        let nodes: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let cum = cumulative_simpson(&f, &nodes, SimpsonOptions::default()).unwrap();
        for (x, c) in nodes.iter().zip(&cum) {
            assert!((c - (x.exp() - 1.0)).abs() < 1e-10, "{x}");
        }
    }

    #[test]
    fn non_integrable_singularity_fails() {
        let f = |x: f64| Ok(if x == 0.0 { 0.0 } else { 1.0 / x });
        let r = adaptive_simpson(&f, 0.0, 1.0, SimpsonOptions::default());
        assert!(matches!(r, Err(GeomError::QuadratureNonConvergent { .. })));
    }

    #[test]
    fn integrand_errors_propagate() {
        let f = |x: f64| {
            if x > 0.5 {
                Err(GeomError::NearSingularOrbit { u: x, omega: 0.0 })
            } else {
                Ok(1.0)
            }
        };
        let r = adaptive_simpson(&f, 0.0, 1.0, SimpsonOptions::default());
        assert!(matches!(r, Err(GeomError::NearSingularOrbit { .. })));
    }

    #[test]
    fn sample_rule_is_exact_on_quadratics() {
        let xs = [0.0, 0.3, 1.0, 1.2, 2.0, 2.5];
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        // five cells: two Simpson pairs exact, trapezoid on the last
        let exact_to_2 = 8.0 / 3.0;
        let trap = 0.5 * 0.5 * (4.0 + 6.25);
        assert!((integrate_samples(&xs, &ys) - (exact_to_2 + trap)).abs() < 1e-12);
    }
}
