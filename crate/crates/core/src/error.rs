use thiserror::Error;

use crate::expr::ExprError;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point ({}, {}, {}) lies outside the domain of {space}", point[0], point[1], point[2])]
    DomainViolation { space: String, point: [f64; 3] },

    #[error("volume function is not positive at u = {u} (omega^2 = {omega_sq})")]
    NonPositiveVolume { u: f64, omega_sq: f64 },

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("profile is not arc-length parametrizable at u = {u} (speed deficit {deficit:e})")]
    SpeedDeficitNegative { u: f64, deficit: f64 },

    #[error("loxodrome integrand is singular near u = {u} (omega = {omega:e})")]
    NearSingularOrbit { u: f64, omega: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureNonConvergent { a: f64, b: f64 },

    #[error("conserved quantity drifts by {drift:e} along the surface")]
    InconsistentConstants { drift: f64 },

    #[error("omega does not solve omega'' + K omega = 0 for the declared K (residual {residual:e})")]
    WrongCurvatureClass { residual: f64 },

    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl GeomError {
    /// True for errors caused by the caller's inputs rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        match self {
            GeomError::UnknownCatalogId(_)
            | GeomError::BadParams(_)
            | GeomError::SpeedDeficitNegative { .. } => true,
            GeomError::Expr(e) => e.is_syntax(),
            _ => false,
        }
    }
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
