use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use loxoforge_core::lox::{trace_at, trace_span, trace_with, TraceOptions};
use loxoforge_core::surface::CATALOG;
use loxoforge_core::verify::{angle_deviations, corrupt_trace};
use loxoforge_core::{
    build_catalog_surface, eval_constant, Branch, InvariantSurface, LoxodromeSpec, LoxodromeTrace,
    TraceSample, VerificationReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{self, Loaded};
use crate::error::{CliError, Result};
use crate::mesh::{self, Grid};
use crate::plot::{self, Series};
use crate::traceio::{self, Row};
use crate::{Format, ListArgs, ListFormat, MeshArgs, PlotArgs, TraceArgs, VerifyArgs};

/// Re-integrated `v` may differ from a stored trace by quadrature error.
const V_CONSISTENCY_TOL: f64 = 1e-8;

fn is_stdout(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn emit(path: &Path, bytes: &[u8]) -> Result<()> {
    if is_stdout(path) {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
    } else {
        std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
    }
}

fn opts(eps_dom: f64) -> TraceOptions {
    TraceOptions {
        eps_dom,
        ..Default::default()
    }
}

#[derive(Serialize)]
struct ListEntry<'a> {
    id: &'a str,
    family: &'a str,
    space: String,
    params: BTreeMap<String, f64>,
    u_domain: (f64, f64),
    suite_span: (f64, f64),
    provenance: &'a str,
}

pub fn list(args: &ListArgs) -> Result<()> {
    let mut entries = Vec::new();
    let mut surfaces = Vec::new();
    for e in CATALOG.iter() {
        surfaces.push((e, build_catalog_surface(e.id, &BTreeMap::new())?));
    }
    for (e, s) in &surfaces {
        entries.push(ListEntry {
            id: e.id,
            family: s.family().name(),
            space: s.space().to_string(),
            params: e.params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            u_domain: s.u_domain(),
            suite_span: s.suite_span(),
            provenance: e.provenance,
        });
    }
    let text = match args.format {
        ListFormat::Json => serde_json::to_string_pretty(&entries).expect("plain data") + "\n",
        ListFormat::Text => {
            let mut t = String::new();
            for e in &entries {
                let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                t.push_str(&format!(
                    "{:<22} {:<16} {:<20} u in ({:.4}, {:.4})  {}\n",
                    e.id,
                    e.family,
                    if params.is_empty() { "-".to_string() } else { params.join(",") },
                    e.u_domain.0,
                    e.u_domain.1,
                    e.provenance
                ));
            }
            t
        }
    };
    emit(Path::new("-"), text.as_bytes())
}

fn run_trace(l: &Loaded, spec: &LoxodromeSpec, u_end: Option<f64>, explicit_u0: bool) -> Result<LoxodromeTrace> {
    let s = &l.surface;
    let (lo, hi) = s.suite_span();
    let o = opts(l.eps_dom);
    let t = match (explicit_u0, u_end) {
        (_, Some(e)) => trace_with(s, spec, e, &o)?,
        (false, None) => trace_with(s, spec, hi, &o)?,
        (true, None) => trace_span(s, spec, lo.min(spec.u0), hi.max(spec.u0), &o)?,
    };
    Ok(t)
}

pub fn trace(a: &TraceArgs) -> Result<()> {
    let l = config::load(&a.surface, &a.params, a.eps_dom)?;
    let u0 = a.u0.unwrap_or(l.surface.suite_span().0);
    let spec = LoxodromeSpec::new(a.theta0, a.branch, u0, a.v0, a.samples)?;
    let t = run_trace(&l, &spec, a.u_end, a.u0.is_some())?;
    let rows = traceio::rows(&t, &angle_deviations(&l.surface, &t));
    let format = a.format.unwrap_or(match a.out.extension() {
        Some(e) if e == "json" => Format::Json,
        _ => Format::Csv,
    });
    let mut buf = Vec::new();
    match format {
        Format::Csv => traceio::write_csv(&mut buf, &rows),
        Format::Json => {
            let report = loxoforge_core::verify_trace(&l.surface, &t, &l.tol);
            traceio::write_json(&mut buf, &t, &rows, &report)
        }
    }
    .expect("writing to memory");
    emit(&a.out, &buf)
}

struct Job {
    surface: usize,
    theta0: f64,
    branch: Branch,
}

fn parse_angles(list: &[String]) -> Result<Vec<f64>> {
    list.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| eval_constant(s).map_err(|e| CliError::config(format!("--theta0 `{s}`: {e}"))))
        .collect()
}

fn select_surfaces(a: &VerifyArgs) -> Result<Vec<Loaded>> {
    let names: Vec<String> = if a.surface.is_empty() {
        loxoforge_core::catalog_ids().map(String::from).collect()
    } else {
        a.surface.clone()
    };
    if !a.params.is_empty() && names.len() != 1 {
        return Err(CliError::config("--param needs exactly one --surface"));
    }
    let mut out = Vec::new();
    for n in &names {
        let l = config::load(n, &a.params, a.eps_dom)?;
        if a.family.as_deref().is_none_or(|f| f == l.surface.family().name()) {
            out.push(l);
        }
    }
    Ok(out)
}

fn finish(reports: &[VerificationReport], out: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(reports).expect("plain data");
    text.push('\n');
    emit(out, text.as_bytes())?;
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!(
            "FAIL {} theta0={} {}: {}",
            r.surface_id,
            r.spec.theta0,
            r.spec.branch,
            r.failures.join("; ")
        );
    }
    eprintln!("{} of {} reports pass", reports.len() - failed.len(), reports.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed {
            failed: failed.len(),
            total: reports.len(),
        })
    }
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let surfaces = select_surfaces(a)?;
    let angles = parse_angles(&a.theta0)?;
    let branches = a.branch.branches();
    if surfaces.is_empty() || angles.is_empty() {
        return Err(CliError::config("empty suite selection"));
    }
    if let Some(f) = a.corrupt {
        if !f.is_finite() {
            return Err(CliError::config("--corrupt needs a finite factor"));
        }
    }
    if let Some(path) = &a.trace {
        if surfaces.len() != 1 || angles.len() != 1 || branches.len() != 1 {
            return Err(CliError::config(
                "--trace needs exactly one surface, one --theta0 and --branch plus or minus",
            ));
        }
        let report = verify_file(&surfaces[0], angles[0], branches[0], path, a.corrupt)?;
        return finish(&[report], &a.out);
    }

    let mut jobs = Vec::new();
    for (i, _) in surfaces.iter().enumerate() {
        for &theta0 in &angles {
            for &branch in &branches {
                jobs.push(Job { surface: i, theta0, branch });
            }
        }
    }
    let reports: Vec<Result<VerificationReport>> = jobs
        .par_iter()
        .map(|j| {
            let l = &surfaces[j.surface];
            let (lo, hi) = l.surface.suite_span();
            let u0 = a.u0.unwrap_or(0.5 * (lo + hi));
            let spec = LoxodromeSpec::new(j.theta0, j.branch, u0, a.v0, a.samples)?;
            let mut t = trace_span(&l.surface, &spec, lo.min(u0), hi.max(u0), &opts(l.eps_dom))?;
            if let Some(f) = a.corrupt {
                t = corrupt_trace(&l.surface, &t, f)?;
            }
            Ok(loxoforge_core::verify_trace(&l.surface, &t, &l.tol))
        })
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    finish(&reports, &a.out)
}

/// Checks a stored trace: `v′` is re-evaluated from the master integral,
/// `v` is re-integrated from the first row and the `s` column is held to the
/// arc-length law.
fn verify_file(l: &Loaded, theta0: f64, branch: Branch, path: &Path, corrupt: Option<f64>) -> Result<VerificationReport> {
    let rows = traceio::read_csv(path)?;
    let s = &l.surface;
    let us: Vec<f64> = rows.iter().map(|r| r.u).collect();
    let spec = LoxodromeSpec::new(theta0, branch, rows[0].u, rows[0].v, rows.len())?;
    let fresh = trace_at(s, &spec, &us, &opts(l.eps_dom))?;
    let mut sorted: Vec<Row> = rows.clone();
    sorted.sort_by(|a, b| a.u.total_cmp(&b.u));
    let samples: Vec<TraceSample> = sorted
        .iter()
        .zip(&fresh.samples)
        .map(|(r, f)| TraceSample {
            u: r.u,
            v: r.v,
            dv_du: f.dv_du,
            point: [r.x, r.y, r.z],
            s: r.s,
        })
        .collect();
    let mut t = LoxodromeTrace::from_samples(s.id(), spec, samples, l.eps_dom);
    if let Some(f) = corrupt {
        t = corrupt_trace(s, &t, f)?;
    }
    let mut report = loxoforge_core::verify_trace(s, &t, &l.tol);

    let v_dev = t
        .samples
        .iter()
        .zip(&fresh.samples)
        .map(|(a, b)| (a.v - b.v).abs() / b.v.abs().max(1.0))
        .fold(0.0, f64::max);
    if !(v_dev <= V_CONSISTENCY_TOL) {
        report.failures.push(format!("v_consistency: {v_dev:e} > {V_CONSISTENCY_TOL:e}"));
    }
    let sin_t = theta0.sin();
    let s_dev = t
        .samples
        .windows(2)
        .map(|w| ((w[1].u - w[0].u) / (w[1].s - w[0].s) - sin_t).abs())
        .fold(0.0, f64::max);
    if !(s_dev <= l.tol.arc_length) {
        report.failures.push(format!("s_column: {s_dev:e} > {:e}", l.tol.arc_length));
    }
    report.pass = report.failures.is_empty();
    Ok(report)
}

fn pair(v: &[f64], name: &str) -> Result<(f64, f64)> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::config(format!("{name} takes two values, lo,hi"))),
    }
}

pub fn mesh(a: &MeshArgs) -> Result<()> {
    let l = config::load(&a.surface, &a.params, a.eps_dom)?;
    let s: &InvariantSurface = &l.surface;
    let u_range = if a.u_range.is_empty() {
        let (lo, hi) = s.u_domain();
        (lo + l.eps_dom, hi - l.eps_dom)
    } else {
        pair(&a.u_range, "--u-range")?
    };
    let grid = Grid {
        u_range,
        v_range: pair(&a.v_range, "--v-range")?,
        nu: a.u_grid,
        nv: a.v_grid,
    };
    grid.validate()?;
    let mut traces = Vec::new();
    if a.loxodromes > 0 {
        let theta0 = a.theta0.ok_or_else(|| CliError::config("--loxodromes needs --theta0"))?;
        let (v0, v1) = grid.v_range;
        for k in 0..a.loxodromes {
            let v = v0 + (v1 - v0) * k as f64 / a.loxodromes as f64;
            let spec = LoxodromeSpec::new(theta0, a.branch, u_range.0, v, a.samples)?;
            traces.push(trace_with(s, &spec, u_range.1, &opts(l.eps_dom))?);
        }
    }
    let mut buf = Vec::new();
    let stats = mesh::write_obj(&mut buf, s, &grid, &traces)?;
    emit(&a.out, &buf)?;
    eprintln!(
        "{} vertices, {} faces, {} polylines{}",
        stats.vertices,
        stats.faces,
        stats.polylines,
        if stats.closed_in_v { ", closed in v" } else { "" }
    );
    Ok(())
}

pub fn plot(a: &PlotArgs) -> Result<()> {
    let mut series = Vec::new();
    for p in std::iter::once(&a.trace).chain(&a.overlay) {
        let rows = traceio::read_csv(p)?;
        let label = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
        series.push(Series { label, rows });
    }
    let label = match &a.theta0 {
        Some(src) => {
            let t = eval_constant(src).map_err(|e| CliError::config(format!("--theta0 `{src}`: {e}")))?;
            format!("theta0 = {t:.6}")
        }
        None => match plot::sin_theta0(&series[0].rows) {
            Some(st) if st >= 1.0 - 1e-12 => "theta0 = pi/2".to_string(),
            Some(st) => format!("theta0 = {:.6} or {:.6}", st.asin(), std::f64::consts::PI - st.asin()),
            None => "theta0 unknown".to_string(),
        },
    };
    emit(&a.out, plot::render(&series, &label).as_bytes())
}
