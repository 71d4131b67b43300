//! Wavefront OBJ export of `ψ(u, v)` on a grid, with loxodromes as polylines.

use std::f64::consts::TAU;
use std::io::Write;

use loxoforge_core::{InvariantSurface, LoxodromeTrace, Point3};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshStats {
    pub vertices: usize,
    pub faces: usize,
    pub polylines: usize,
    /// Faces wrap around from the last v column to the first.
    pub closed_in_v: bool,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(CliError::config(format!(
                "mesh grids need at least 2 points each way, got {}x{}",
                self.nu, self.nv
            )));
        }
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.u_range) || !ok(self.v_range) {
            return Err(CliError::config("mesh ranges must be finite with lo < hi"));
        }
        Ok(())
    }
}

/// True when the v-range is one full turn and the flow really closes up
/// after it.
fn wraps(surf: &InvariantSurface, g: &Grid) -> Result<bool> {
    let (v0, v1) = g.v_range;
    if ((v1 - v0) - TAU).abs() > 1e-9 {
        return Ok(false);
    }
    let (a, b) = g.u_range;
    for t in [0.25, 0.5, 0.75] {
        let u = a + t * (b - a);
        let p = surf.psi(u, v0)?;
        let q = surf.psi(u, v0 + TAU)?;
        if (p - q).norm() > 1e-9 * p.norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn vertex<W: Write>(out: &mut W, p: &Point3) -> std::io::Result<()> {
    writeln!(out, "v {} {} {}", p.x, p.y, p.z)
}

pub fn write_obj<W: Write>(
    out: &mut W,
    surf: &InvariantSurface,
    g: &Grid,
    loxodromes: &[LoxodromeTrace],
) -> Result<MeshStats> {
    g.validate()?;
    let closed = wraps(surf, g)?;
    let (u0, u1) = g.u_range;
    let (v0, v1) = g.v_range;
    let dv = if closed { (v1 - v0) / g.nv as f64 } else { (v1 - v0) / (g.nv - 1) as f64 };

    // evaluate everything first so numeric failures leave no partial file
    let mut points = Vec::with_capacity(g.nu * g.nv);
    for i in 0..g.nu {
        let u = if i + 1 == g.nu { u1 } else { u0 + (u1 - u0) * i as f64 / (g.nu - 1) as f64 };
        for j in 0..g.nv {
            points.push(surf.psi(u, v0 + dv * j as f64)?);
        }
    }

    let io = |e| CliError::io("<mesh output>", e);
    writeln!(out, "# loxoforge mesh: {} in {}", surf.id(), surf.space()).map_err(io)?;
    writeln!(out, "# grid {}x{}, u in [{u0}, {u1}], v in [{v0}, {v1}]", g.nu, g.nv).map_err(io)?;
    writeln!(out, "o surface").map_err(io)?;
    for p in &points {
        vertex(out, p).map_err(io)?;
    }
    let cols = if closed { g.nv } else { g.nv - 1 };
    let idx = |i: usize, j: usize| i * g.nv + (j % g.nv) + 1;
    let mut faces = 0;
    for i in 0..g.nu - 1 {
        for j in 0..cols {
            writeln!(out, "f {} {} {} {}", idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)).map_err(io)?;
            faces += 1;
        }
    }
    let mut next = points.len() + 1;
    for (k, t) in loxodromes.iter().enumerate() {
        writeln!(out, "o loxodrome_{}", k + 1).map_err(io)?;
        for s in &t.samples {
            writeln!(out, "v {} {} {}", s.point[0], s.point[1], s.point[2]).map_err(io)?;
        }
        let ids: Vec<String> = (next..next + t.samples.len()).map(|i| i.to_string()).collect();
        writeln!(out, "l {}", ids.join(" ")).map_err(io)?;
        next += t.samples.len();
    }
    Ok(MeshStats {
        vertices: points.len(),
        faces,
        polylines: loxodromes.len(),
        closed_in_v: closed,
    })
}
