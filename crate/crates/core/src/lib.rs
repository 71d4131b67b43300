//! Invariant surfaces in three-dimensional homogeneous spaces and the
//! loxodromes on them.
//!
//! The crate is organised bottom-up: [`ambient`] holds the metrics, Killing
//! fields and their flows; [`surface`] sweeps profile curves into invariant
//! surfaces; [`lox`] traces loxodromes by quadrature and evaluates the
//! constant-curvature closed forms; [`verify`] re-derives every property of
//! a trace from the ambient metric alone.

pub mod ambient;
pub mod diff;
pub mod error;
pub mod expr;
pub mod lox;
pub mod quad;
pub mod surface;
pub mod verify;

pub use ambient::{AmbientSpace, Geometry, Killing, Point3, Vec3};
pub use error::{GeomError, Result};
pub use expr::{eval_constant, ExprError, ProfileExpr};
pub use lox::{
    arc_length, clairaut_quantity, closed_form_v, geodesic_residual, integrand, trace, trace_at, trace_span,
    trace_with, Branch, ClosedFormSolution, CurvatureClass, LoxodromeSpec, LoxodromeTrace,
    TraceOptions, TraceSample,
};
pub use surface::{build_catalog_surface, catalog_ids, Family, InvariantSurface, ProfileCurve};
pub use verify::{verify_flatness_theorem, verify_trace, Tolerances, VerificationReport};
