//! Finite-difference stencils shared by the surface and verification code.

use crate::error::Result;

/// Second-order central difference for the first derivative.
pub fn central<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Fourth-order five-point stencil for the first derivative.
pub fn five_point<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let fp1 = f(x + h)?;
    let fm1 = f(x - h)?;
    let fp2 = f(x + 2.0 * h)?;
    let fm2 = f(x - 2.0 * h)?;
    Ok((8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h))
}

/// Fourth-order five-point stencil for the second derivative.
pub fn five_point_second<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f0 = f(x)?;
    let fp1 = f(x + h)?;
    let fm1 = f(x - h)?;
    let fp2 = f(x + 2.0 * h)?;
    let fm2 = f(x - 2.0 * h)?;
    Ok((-(fp2 + fm2) + 16.0 * (fp1 + fm1) - 30.0 * f0) / (12.0 * h * h))
}

/// Step used for profile and volume-function derivatives.
pub fn smooth_step(x: f64) -> f64 {
    1e-3 * x.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_on_exp() {
        let f = |x: f64| Ok(x.exp());
        let x = 0.7;
        assert!((central(f, x, 1e-5).unwrap() - x.exp()).abs() < 1e-9);
        assert!((five_point(f, x, 1e-3).unwrap() - x.exp()).abs() < 1e-12);
        assert!((five_point_second(f, x, 1e-3).unwrap() - x.exp()).abs() < 1e-9);
    }
}
