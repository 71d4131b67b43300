//! Frozen values of the independent oracles used by the acceptance suite.

mod common;

use common::{elliptic_e, twisted_pseudosphere_xi2};
use loxoforge_core::quad::{adaptive_simpson, SimpsonOptions};

#[test]
fn elliptic_e_matches_reference_values() {
    // E(1 | -1), 20 significant digits
    assert!((elliptic_e(1.0, -1.0) - 1.123_887_722_945_525).abs() < 1e-15);
    // E(φ | 0) = φ
    assert!((elliptic_e(0.8, 0.0) - 0.8).abs() < 1e-15);
    // E(π/2 | 1) = 1
    assert!((elliptic_e(std::f64::consts::FRAC_PI_2, 0.999_999_999_999) - 1.0).abs() < 1e-9);
}

#[test]
fn hypergeometric_form_matches_reference_values() {
    for (u, want) in [(0.5, 0.488_333_413_255_418_64), (1.0, 1.528_455_817_758_761_8), (2.0, 6.191_329_004_408_148)] {
        assert!((twisted_pseudosphere_xi2(u) - want).abs() < 1e-13, "u = {u}");
    }
}

#[test]
fn hypergeometric_form_agrees_with_direct_quadrature() {
    // away from the sqrt endpoint the integrand is smooth
    let f = |t: f64| Ok((2.0 * (2.0 * t).sinh()).sqrt());
    let a = twisted_pseudosphere_xi2(0.5);
    let b = twisted_pseudosphere_xi2(1.5);
    let direct = adaptive_simpson(&f, 0.5, 1.5, SimpsonOptions::with_tol(1e-13)).unwrap();
    assert!((b - a - direct).abs() < 1e-11);
}
