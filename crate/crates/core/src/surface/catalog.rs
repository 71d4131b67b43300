//! Built-in invariant surfaces.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{GeomError, Result};

use super::family::Family;
use super::profile::{profile_from_constraint, pure_fn, ConstraintOptions, ProfileCurve};
use super::InvariantSurface;

/// One catalog row: id, tunable parameters with defaults, and a one-line
/// description of where the surface comes from.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub provenance: &'static str,
}

pub const CATALOG: [CatalogEntry; 18] = [
    CatalogEntry {
        id: "sphere",
        params: &[],
        provenance: "unit sphere as a rotational surface of R3, profile (sin u, cos u)",
    },
    CatalogEntry {
        id: "pseudosphere",
        params: &[],
        provenance: "pseudosphere, rotational surface with radius e^-u and K = -1",
    },
    CatalogEntry {
        id: "twisted_sphere",
        params: &[("a", 1.0)],
        provenance: "helicoidal surface with radius sin u; xi2 is the elliptic integral E(u, -1)",
    },
    CatalogEntry {
        id: "twisted_pseudosphere",
        params: &[("a", 1.0)],
        provenance: "helicoidal surface with radius e^-u; xi2 is a Gauss hypergeometric function",
    },
    CatalogEntry {
        id: "circular_cylinder",
        params: &[("r", 1.0)],
        provenance: "right circular cylinder in R3, translation invariant, flat",
    },
    CatalogEntry {
        id: "cone",
        params: &[("k", 0.5)],
        provenance: "rotational cone in R3 with radius k u, flat",
    },
    CatalogEntry {
        id: "cosh_revolution",
        params: &[],
        provenance: "rotational surface in R3 with omega = cosh u, K = -1",
    },
    CatalogEntry {
        id: "sinh_revolution",
        params: &[("c", 0.3)],
        provenance: "rotational surface in R3 with omega = c sinh u, K = -1",
    },
    CatalogEntry {
        id: "bcv_cylinder",
        params: &[("ell", 1.0), ("m", 0.0), ("r", 1.0)],
        provenance: "vertical cylinder f = r in a BCV space, flat with geodesic loxodromes",
    },
    CatalogEntry {
        id: "bcv_rotational",
        params: &[("ell", 1.0), ("m", -0.1)],
        provenance: "rotational surface f = 1 + sin(u)/2 in a BCV space",
    },
    CatalogEntry {
        id: "minimal_graph",
        params: &[],
        provenance: "minimal graph z = -ln y in H2xR, invariant under translations in x",
    },
    CatalogEntry {
        id: "h2xr_g24_twisted",
        params: &[("a", 1.0), ("b", 1.0)],
        provenance: "G24-invariant surface in H2xR with y = e^(u/2)",
    },
    CatalogEntry {
        id: "h2xr_vertical_plane",
        params: &[],
        provenance: "vertical cylinder over a hyperbolic geodesic in H2xR, flat",
    },
    CatalogEntry {
        id: "funnel",
        params: &[("b", 1.0)],
        provenance: "complete minimal surface in H2xR, the funnel z = ln r",
    },
    CatalogEntry {
        id: "h2xr_g14_tube",
        params: &[("b", 0.5)],
        provenance: "G14-invariant surface in H2xR with xi1 = 2 cosh(u/2)",
    },
    CatalogEntry {
        id: "heisenberg_g1",
        params: &[("amp", 0.5)],
        provenance: "X1-invariant surface in the Heisenberg group with xi1 = amp sin u",
    },
    CatalogEntry {
        id: "heisenberg_g3",
        params: &[("amp", 0.5)],
        provenance: "vertical cylinder in the Heisenberg group with xi1 = amp sin u",
    },
    CatalogEntry {
        id: "helicoidal_catenoid",
        params: &[],
        provenance: "helicoidal minimal surface of the Heisenberg group, pitch 1/2",
    },
];

pub fn catalog_ids() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|e| e.id)
}

pub fn catalog_entry(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| GeomError::UnknownCatalogId(id.to_string()))
}

struct Params(BTreeMap<String, f64>);

impl Params {
    fn get(&self, k: &str) -> f64 {
        self.0[k]
    }
}

fn merge(entry: &CatalogEntry, given: &BTreeMap<String, f64>) -> Result<Params> {
    let mut out: BTreeMap<String, f64> =
        entry.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in given {
        if !out.contains_key(k) {
            return Err(GeomError::BadParams(format!(
                "catalog surface `{}` has no parameter `{k}`",
                entry.id
            )));
        }
        if !v.is_finite() {
            return Err(GeomError::BadParams(format!("parameter `{k}` must be finite")));
        }
        out.insert(k.clone(), *v);
    }
    Ok(Params(out))
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(GeomError::BadParams(msg.to_string()))
    }
}

/// Builds a catalog surface, overriding default parameters with `params`.
pub fn build_catalog_surface(id: &str, params: &BTreeMap<String, f64>) -> Result<InvariantSurface> {
    let entry = catalog_entry(id)?;
    let p = merge(entry, params)?;
    let s = match id {
        "sphere" => {
            let prof = ProfileCurve::closed_form(0.0, PI, pure_fn(f64::sin), pure_fn(f64::cos))?
                .with_derivatives(Some(pure_fn(f64::cos)), Some(pure_fn(|u| -u.sin())));
            InvariantSurface::new(id, Family::Helicoidal { a: 0.0 }, prof)?
                .with_suite_span(0.2, PI - 0.2)?
                .with_omega_derivatives(pure_fn(f64::cos), pure_fn(|u| -u.sin()))
                .with_claimed_curvature(1.0)
        }
        "pseudosphere" => {
            let w = |u: f64| (-(-2.0 * u).exp_m1()).sqrt();
            let prof = ProfileCurve::closed_form(
                0.0,
                6.0,
                pure_fn(|u| (-u).exp()),
                pure_fn(move |u| w(u).atanh() - w(u)),
            )?
            .with_derivatives(Some(pure_fn(|u| -(-u).exp())), Some(pure_fn(w)));
            InvariantSurface::new(id, Family::Helicoidal { a: 0.0 }, prof)?
                .with_suite_span(0.2, 3.0)?
                .with_claimed_curvature(-1.0)
        }
        "twisted_sphere" => {
            let a = p.get("a");
            require(a != 0.0, "twisted_sphere needs a != 0")?;
            let prof = profile_from_constraint(
                Family::Helicoidal { a },
                pure_fn(f64::sin),
                Some(pure_fn(f64::cos)),
                0.0,
                PI,
                ConstraintOptions::default(),
            )?;
            InvariantSurface::new(id, Family::Helicoidal { a }, prof)?.with_suite_span(0.2, PI - 0.2)?
        }
        "twisted_pseudosphere" => {
            let a = p.get("a");
            require(a != 0.0, "twisted_pseudosphere needs a != 0")?;
            let prof = profile_from_constraint(
                Family::Helicoidal { a },
                pure_fn(|u| (-u).exp()),
                Some(pure_fn(|u| -(-u).exp())),
                0.0,
                4.0,
                ConstraintOptions::default(),
            )?;
            InvariantSurface::new(id, Family::Helicoidal { a }, prof)?.with_suite_span(0.2, 2.5)?
        }
        "circular_cylinder" => {
            let r = p.get("r");
            require(r > 0.0, "circular_cylinder needs r > 0")?;
            let prof = ProfileCurve::closed_form(
                -10.0,
                10.0,
                pure_fn(move |u| r * (u / r).cos()),
                pure_fn(move |u| r * (u / r).sin()),
            )?
            .with_derivatives(
                Some(pure_fn(move |u| -(u / r).sin())),
                Some(pure_fn(move |u| (u / r).cos())),
            );
            InvariantSurface::new(id, Family::Translation { axis: [0.0, 0.0, 1.0] }, prof)?
                .with_suite_span(-3.0, 3.0)?
                .with_claimed_curvature(0.0)
        }
        "cone" => {
            let k = p.get("k");
            require(k > 0.0 && k < 1.0, "cone needs 0 < k < 1")?;
            let q = (1.0 - k * k).sqrt();
            let prof = ProfileCurve::closed_form(
                0.0,
                6.0,
                pure_fn(move |u| k * u),
                pure_fn(move |u| q * u),
            )?
            .with_derivatives(Some(pure_fn(move |_| k)), Some(pure_fn(move |_| q)));
            InvariantSurface::new(id, Family::Helicoidal { a: 0.0 }, prof)?
                .with_suite_span(0.5, 5.0)?
                .with_claimed_curvature(0.0)
        }
        "cosh_revolution" => {
            let prof = profile_from_constraint(
                Family::Helicoidal { a: 0.0 },
                pure_fn(f64::cosh),
                Some(pure_fn(f64::sinh)),
                -0.85,
                0.85,
                ConstraintOptions {
                    u_ref: Some(0.0),
                    ..Default::default()
                },
            )?;
            InvariantSurface::new(id, Family::Helicoidal { a: 0.0 }, prof)?
                .with_suite_span(-0.8, 0.8)?
                .with_omega_derivatives(pure_fn(f64::sinh), pure_fn(f64::cosh))
                .with_claimed_curvature(-1.0)
        }
        "sinh_revolution" => {
            let c = p.get("c");
            require(c > 0.0 && c < 1.0, "sinh_revolution needs 0 < c < 1")?;
            let u_max = (1.0 / c).acosh() - 0.02;
            let prof = profile_from_constraint(
                Family::Helicoidal { a: 0.0 },
                pure_fn(move |u| c * u.sinh()),
                Some(pure_fn(move |u| c * u.cosh())),
                0.0,
                u_max,
                ConstraintOptions::default(),
            )?;
            InvariantSurface::new(id, Family::Helicoidal { a: 0.0 }, prof)?
                .with_suite_span(0.1, u_max - 0.1)?
                .with_omega_derivatives(
                    pure_fn(move |u| c * u.cosh()),
                    pure_fn(move |u| c * u.sinh()),
                )
                .with_claimed_curvature(-1.0)
        }
        "bcv_cylinder" => {
            let (ell, m, r) = (p.get("ell"), p.get("m"), p.get("r"));
            require(r > 0.0, "bcv_cylinder needs r > 0")?;
            require(1.0 + m * r * r > 0.0, "bcv_cylinder radius must lie inside the BCV disc")?;
            let rate = (4.0 + ell * ell * r * r).sqrt() / 2.0;
            let prof = ProfileCurve::closed_form(
                -5.0,
                5.0,
                pure_fn(move |_| r),
                pure_fn(move |u| rate * u),
            )?
            .with_derivatives(Some(pure_fn(|_| 0.0)), Some(pure_fn(move |_| rate)));
            InvariantSurface::new(id, Family::Bcv { ell, m }, prof)?
                .with_suite_span(-3.0, 3.0)?
                .with_claimed_curvature(0.0)
        }
        "bcv_rotational" => {
            let (ell, m) = (p.get("ell"), p.get("m"));
            let prof = profile_from_constraint(
                Family::Bcv { ell, m },
                pure_fn(|u| 1.0 + 0.5 * u.sin()),
                Some(pure_fn(|u| 0.5 * u.cos())),
                0.0,
                2.0 * PI,
                ConstraintOptions::default(),
            )?;
            InvariantSurface::new(id, Family::Bcv { ell, m }, prof)?.with_suite_span(0.3, 6.0)?
        }
        "minimal_graph" => {
            let prof = ProfileCurve::closed_form(
                -3.0,
                3.0,
                pure_fn(|u| (u * FRAC_1_SQRT_2).exp()),
                pure_fn(|u| u * FRAC_1_SQRT_2),
            )?
            .with_derivatives(
                Some(pure_fn(|u| FRAC_1_SQRT_2 * (u * FRAC_1_SQRT_2).exp())),
                Some(pure_fn(|_| FRAC_1_SQRT_2)),
            );
            InvariantSurface::new(id, Family::G24 { a: 1.0, b: 0.0 }, prof)?
                .with_suite_span(-2.5, 2.5)?
                .with_claimed_curvature(-0.5)
        }
        "h2xr_g24_twisted" => {
            let (a, b) = (p.get("a"), p.get("b"));
            let prof = profile_from_constraint(
                Family::G24 { a, b },
                pure_fn(|u| (0.5 * u).exp()),
                Some(pure_fn(|u| 0.5 * (0.5 * u).exp())),
                -2.0,
                2.0,
                ConstraintOptions::default(),
            )?;
            InvariantSurface::new(id, Family::G24 { a, b }, prof)?.with_suite_span(-1.5, 1.5)?
        }
        "h2xr_vertical_plane" => {
            let prof = ProfileCurve::closed_form(
                -3.0,
                3.0,
                pure_fn(f64::tanh),
                pure_fn(|u| 1.0 / u.cosh()),
            )?
            .with_derivatives(
                Some(pure_fn(|u| 1.0 / u.cosh().powi(2))),
                Some(pure_fn(|u| -u.tanh() / u.cosh())),
            );
            InvariantSurface::new(id, Family::G4, prof)?
                .with_suite_span(-2.5, 2.5)?
                .with_claimed_curvature(0.0)
        }
        "funnel" => {
            let b = p.get("b");
            // 2 arccot(e^-u) = π − 2 atan(e^-u)
            let prof = ProfileCurve::closed_form(
                -4.0,
                4.0,
                pure_fn(|u| PI - 2.0 * (-u).exp().atan()),
                pure_fn(|_| 0.0),
            )?
            .with_derivatives(Some(pure_fn(|u| 1.0 / u.cosh())), Some(pure_fn(|_| 0.0)));
            InvariantSurface::new(id, Family::G34 { b }, prof)?.with_suite_span(-2.0, 2.0)?
        }
        "h2xr_g14_tube" => {
            let b = p.get("b");
            let prof = profile_from_constraint(
                Family::G14 { b },
                pure_fn(|u| 2.0 * (0.5 * u).cosh()),
                Some(pure_fn(|u| (0.5 * u).sinh())),
                0.2,
                4.0,
                ConstraintOptions::default(),
            )?;
            InvariantSurface::new(id, Family::G14 { b }, prof)?.with_suite_span(0.5, 3.5)?
        }
        "heisenberg_g1" | "heisenberg_g3" => {
            let amp = p.get("amp");
            require(amp.abs() <= 1.0, "amp must satisfy |amp| <= 1")?;
            let family = if id == "heisenberg_g1" {
                Family::HeisG1
            } else {
                Family::HeisG3
            };
            let prof = profile_from_constraint(
                family,
                pure_fn(move |u| amp * u.sin()),
                Some(pure_fn(move |u| amp * u.cos())),
                -4.0,
                4.0,
                ConstraintOptions {
                    u_ref: Some(0.0),
                    ..Default::default()
                },
            )?;
            InvariantSurface::new(id, family, prof)?.with_suite_span(-3.0, 3.0)?
        }
        "helicoidal_catenoid" => {
            let prof = ProfileCurve::closed_form(
                -5.0,
                5.0,
                pure_fn(|u| (u * u + 1.0).sqrt()),
                pure_fn(|u| 0.5 * (u - (PI / 2.0 - u.atan()))),
            )?
            .with_derivatives(
                Some(pure_fn(|u| u / (u * u + 1.0).sqrt())),
                Some(pure_fn(|u| 0.5 * (1.0 + 1.0 / (1.0 + u * u)))),
            );
            InvariantSurface::new(id, Family::HeisG43 { a: 0.5 }, prof)?.with_suite_span(-3.0, 3.0)?
        }
        _ => unreachable!("catalog_entry accepted `{id}`"),
    };
    Ok(s.with_description(entry.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_with_defaults() {
        for id in catalog_ids() {
            let s = build_catalog_surface(id, &BTreeMap::new()).unwrap();
            assert_eq!(s.id(), id);
            let (a, b) = s.suite_span();
            for u in [a, 0.5 * (a + b), b] {
                assert!(s.omega_of(u).unwrap() > 0.0, "{id} at {u}");
            }
        }
    }

    #[test]
    fn unknown_id_and_params() {
        assert!(matches!(
            build_catalog_surface("torus", &BTreeMap::new()),
            Err(GeomError::UnknownCatalogId(_))
        ));
        let p: BTreeMap<String, f64> = [("z".to_string(), 1.0)].into();
        assert!(matches!(build_catalog_surface("sphere", &p), Err(GeomError::BadParams(_))));
        let p: BTreeMap<String, f64> = [("c".to_string(), 2.0)].into();
        assert!(build_catalog_surface("sinh_revolution", &p).is_err());
    }

    #[test]
    fn sphere_volume_is_sine() {
        let s = build_catalog_surface("sphere", &BTreeMap::new()).unwrap();
        for u in [0.3, 1.0, 2.5] {
            assert!((s.omega_of(u).unwrap() - u.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn funnel_passes_through_base_point() {
        let s = build_catalog_surface("funnel", &BTreeMap::new()).unwrap();
        let p = s.psi(0.0, 0.0).unwrap();
        assert!((p - nalgebra::Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        // ψ(u, v) = (−eᵛ tanh u, eᵛ sech u, v)
        let (u, v) = (0.8, -0.4);
        let q = s.psi(u, v).unwrap();
        let want = nalgebra::Vector3::new(-v.exp() * u.tanh(), v.exp() / u.cosh(), v);
        assert!((q - want).norm() < 1e-14);
    }

    #[test]
    fn helicoidal_catenoid_profile() {
        let s = build_catalog_surface("helicoidal_catenoid", &BTreeMap::new()).unwrap();
        assert_eq!(s.family(), Family::HeisG43 { a: 0.5 });
        let u: f64 = 1.3;
        assert!((s.profile().xi1(u).unwrap() - (u * u + 1.0).sqrt()).abs() < 1e-15);
        let arccot = (1.0 / u).atan();
        assert!((s.profile().xi2(u).unwrap() - 0.5 * (u - arccot)).abs() < 1e-15);
    }

    #[test]
    fn minimal_graph_is_z_equals_minus_ln_y() {
        let s = build_catalog_surface("minimal_graph", &BTreeMap::new()).unwrap();
        for (u, v) in [(0.3, 1.0), (-1.2, -0.5), (2.0, 3.0)] {
            let p = s.psi(u, v).unwrap();
            assert!((p.z + p.y.ln()).abs() < 1e-14);
            assert!((p.x - v).abs() < 1e-15);
        }
    }
}
