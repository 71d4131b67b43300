//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use loxoforge_core::{build_catalog_surface, InvariantSurface};
use rand::Rng;

pub fn cat(id: &str) -> InvariantSurface {
    build_catalog_surface(id, &BTreeMap::new()).unwrap_or_else(|e| panic!("{id}: {e}"))
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    loop {
        let a = (x + y + z) / 3.0;
        let (dx, dy, dz) = (1.0 - x / a, 1.0 - y / a, 1.0 - z / a);
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
}

/// Carlson's `R_D(x, y, z)`.
pub fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    let (mut sum, mut fac) = (0.0, 1.0);
    loop {
        let a = 0.2 * (x + y + 3.0 * z);
        let (dx, dy, dz) = ((a - x) / a, (a - y) / a, (a - z) / a);
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let (c1, c2, c3, c4) = (3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0);
            let (c5, c6) = (0.25 * c3, 1.5 * c4);
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let series = 1.0
                + ed * (-c1 + c5 * ed - c6 * dz * ee)
                + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea));
            return 3.0 * sum + fac * series / (a * a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
}

/// Incomplete elliptic integral of the second kind `E(φ | m)` for `φ ∈ [0, π]`.
pub fn elliptic_e(phi: f64, m: f64) -> f64 {
    if phi > FRAC_PI_2 {
        return 2.0 * elliptic_e(FRAC_PI_2, m) - elliptic_e(PI - phi, m);
    }
    let (s, c) = phi.sin_cos();
    let q = 1.0 - m * s * s;
    s * carlson_rf(c * c, q, 1.0) - m / 3.0 * s.powi(3) * carlson_rd(c * c, q, 1.0)
}

/// `∫₀ᵘ √(2 sinh 2t) dt` through the continuation of a Gauss hypergeometric
/// function to the real axis beyond 1.
pub fn twisted_pseudosphere_xi2(u: f64) -> f64 {
    const GAMMA_3_4: f64 = 1.225_416_702_465_177_6;
    let w = (-4.0 * u).exp();
    // ₂F₁(1, 5/4; 7/4; w) by its power series
    let (mut term, mut f21, mut n) = (1.0f64, 1.0, 0.0);
    while term.abs() > 1e-18 {
        term *= (1.25 + n) / (1.75 + n) * w;
        f21 += term;
        n += 1.0;
    }
    let k = GAMMA_3_4 * GAMMA_3_4 / (2.0 * PI).sqrt();
    let re = k * w.powf(0.25) / (1.0 - w).sqrt() - w * f21 / 3.0;
    u.exp() * (1.0 - w).sqrt() * (1.0 - 2.0 * re)
}

/// Random expression generator with its own evaluator, used to fuzz the parser.
#[derive(Default)]
pub struct Gen;

const FUNCS: [&str; 15] = [
    "sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "tanh", "sech", "arccot", "arctan", "arcsinh",
    "arctanh", "abs",
];
pub const FUZZ_U: f64 = 0.7;

fn apply(name: &str, x: f64) -> Option<f64> {
    let y = match name {
        "sin" => x.sin(),
        "cos" => x.cos(),
        "tan" => x.tan(),
        "exp" => x.exp(),
        "ln" if x > 0.0 => x.ln(),
        "sqrt" if x >= 0.0 => x.sqrt(),
        "sinh" => x.sinh(),
        "cosh" => x.cosh(),
        "tanh" => x.tanh(),
        "sech" => 1.0 / x.cosh(),
        "arccot" => FRAC_PI_2 - x.atan(),
        "arctan" => x.atan(),
        "arcsinh" => x.asinh(),
        "arctanh" if x.abs() < 1.0 => x.atanh(),
        "abs" => x.abs(),
        _ => return None,
    };
    Some(y)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Binding strength of a rendered expression; atoms and calls bind tightest.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Sum,
    Product,
    Neg,
    Power,
    Atom,
}

impl Gen {
    /// Returns a source string and its value at `u = FUZZ_U` (None when
    /// evaluation must fail).
    pub fn expr<R: Rng>(&self, rng: &mut R, depth: u32) -> (String, Option<f64>) {
        let (s, v, _) = self.node(rng, depth);
        (s, v)
    }

    fn node<R: Rng>(&self, rng: &mut R, depth: u32) -> (String, Option<f64>, Prec) {
        let leaf = depth == 0 || rng.gen_bool(0.25);
        if leaf {
            return match rng.gen_range(0..5) {
                0 => ("u".into(), Some(FUZZ_U), Prec::Atom),
                1 => ("pi".into(), Some(PI), Prec::Atom),
                2 => ("e".into(), Some(std::f64::consts::E), Prec::Atom),
                3 => {
                    let n = rng.gen_range(0..10) as f64;
                    (format!("{n}"), Some(n), Prec::Atom)
                }
                _ => {
                    let n = rng.gen_range(1..400) as f64 / 16.0;
                    (format!("{n}"), Some(n), Prec::Atom)
                }
            };
        }
        match rng.gen_range(0..8) {
            0 => {
                let f = FUNCS[rng.gen_range(0..FUNCS.len())];
                let (a, v, _) = self.node(rng, depth - 1);
                let val = v.and_then(|x| apply(f, x)).and_then(finite);
                (format!("{f}({a})"), val, Prec::Atom)
            }
            1 => {
                let (a, v, p) = self.node(rng, depth - 1);
                let a = if p < Prec::Power { format!("({a})") } else { a };
                (format!("-{a}"), v.map(|x| -x), Prec::Neg)
            }
            _ => {
                let (op, prec) = match rng.gen_range(0..5) {
                    0 => ('+', Prec::Sum),
                    1 => ('-', Prec::Sum),
                    2 => ('*', Prec::Product),
                    3 => ('/', Prec::Product),
                    _ => ('^', Prec::Power),
                };
                let (a, x, pa) = self.node(rng, depth - 1);
                let (b, y, pb) = self.node(rng, depth - 1);
                // left-associative ops need a tighter right operand; `^` is
                // right-associative and takes a unary minus in its exponent
                let wrap_a = if op == '^' { pa <= Prec::Power } else { pa < prec };
                let wrap_b = if op == '^' { pb < Prec::Neg } else { pb <= prec || pb == Prec::Neg };
                let a = if wrap_a { format!("({a})") } else { a };
                let b = if wrap_b { format!("({b})") } else { b };
                let val = match (x, y) {
                    (Some(x), Some(y)) => match op {
                        '+' => finite(x + y),
                        '-' => finite(x - y),
                        '*' => finite(x * y),
                        '/' if y != 0.0 => finite(x / y),
                        '^' if !(x == 0.0 && y < 0.0) => finite(x.powf(y)),
                        _ => None,
                    },
                    _ => None,
                };
                (format!("{a}{op}{b}"), val, prec)
            }
        }
    }
}
