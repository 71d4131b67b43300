mod commands;
mod config;
mod error;
mod mesh;
mod plot;
mod traceio;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loxoforge_core::{eval_constant, Branch};

#[derive(Parser, Debug)]
#[command(name = "loxoforge", version, about = "Loxodromes on invariant surfaces of homogeneous 3-spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the surface catalog.
    List(ListArgs),
    /// Trace one loxodrome and write its samples.
    Trace(TraceArgs),
    /// Verify traces against the ambient metric; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Export the surface (and optionally loxodromes) as a Wavefront OBJ file.
    Mesh(MeshArgs),
    /// Plot trace CSV files as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchSel {
    Plus,
    Minus,
    Both,
}

impl BranchSel {
    pub fn branches(self) -> Vec<Branch> {
        match self {
            BranchSel::Plus => vec![Branch::Plus],
            BranchSel::Minus => vec![Branch::Minus],
            BranchSel::Both => Branch::BOTH.to_vec(),
        }
    }
}

fn parse_constant(s: &str) -> Result<f64, String> {
    eval_constant(s).map_err(|e| e.to_string())
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse().map_err(|e: loxoforge_core::GeomError| e.to_string())
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    Ok((k.trim().to_string(), parse_constant(v)?))
}

#[derive(Args, Debug)]
pub struct ListArgs {
    #[arg(long, value_enum, default_value_t = ListFormat::Text)]
    pub format: ListFormat,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// Catalog id or path to a JSON surface config.
    #[arg(long)]
    pub surface: String,
    /// Override a catalog parameter, e.g. `--param a=2`.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Angle with the Killing orbits, in radians or as an expression like `pi/6`.
    #[arg(long, value_parser = parse_constant)]
    pub theta0: f64,
    #[arg(long, value_parser = parse_branch, default_value = "plus")]
    pub branch: Branch,
    /// Base point; defaults to the start of the surface's suite span.
    #[arg(long, value_parser = parse_constant)]
    pub u0: Option<f64>,
    #[arg(long, value_parser = parse_constant, default_value = "0")]
    pub v0: f64,
    /// End of the trace. Without it the whole suite span is covered.
    #[arg(long = "u-end", value_parser = parse_constant)]
    pub u_end: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Distance kept from the ends of the u-domain.
    #[arg(long = "eps-dom")]
    pub eps_dom: Option<f64>,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
    /// Defaults to json for `.json` outputs and csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Catalog ids or config paths; the whole catalog when omitted.
    #[arg(long)]
    pub surface: Vec<String>,
    /// Keep only catalog surfaces of this family.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Comma-separated angles.
    #[arg(long, value_delimiter = ',', default_value = "pi/8,pi/6,pi/4,pi/3,pi/2")]
    pub theta0: Vec<String>,
    #[arg(long, value_enum, default_value_t = BranchSel::Both)]
    pub branch: BranchSel,
    /// Base point; defaults to the middle of each suite span.
    #[arg(long, value_parser = parse_constant)]
    pub u0: Option<f64>,
    #[arg(long, value_parser = parse_constant, default_value = "0")]
    pub v0: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long = "eps-dom")]
    pub eps_dom: Option<f64>,
    /// Self-test: scale v and v' of every trace by this factor before checking.
    #[arg(long)]
    pub corrupt: Option<f64>,
    /// Verify a CSV trace written by `trace` instead of tracing afresh.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Report file (JSON array), `-` for stdout.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    #[arg(long)]
    pub surface: String,
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    #[arg(long = "u-grid", default_value_t = 32)]
    pub u_grid: usize,
    #[arg(long = "v-grid", default_value_t = 64)]
    pub v_grid: usize,
    /// `lo,hi`; defaults to the clamped u-domain.
    #[arg(long = "u-range", value_delimiter = ',', value_parser = parse_constant)]
    pub u_range: Vec<f64>,
    #[arg(long = "v-range", value_delimiter = ',', value_parser = parse_constant, default_value = "0,2*pi")]
    pub v_range: Vec<f64>,
    /// Number of loxodromes to add, spread evenly over the v-range.
    #[arg(long, default_value_t = 0)]
    pub loxodromes: usize,
    #[arg(long, value_parser = parse_constant)]
    pub theta0: Option<f64>,
    #[arg(long, value_parser = parse_branch, default_value = "plus")]
    pub branch: Branch,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long = "eps-dom")]
    pub eps_dom: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Trace CSV written by `trace`.
    #[arg(long)]
    pub trace: PathBuf,
    /// Further traces drawn on the same axes.
    #[arg(long)]
    pub overlay: Vec<PathBuf>,
    /// Angle label; recovered from the `s` column when omitted.
    #[arg(long)]
    pub theta0: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::List(a) => commands::list(&a),
        Cmd::Trace(a) => commands::trace(&a),
        Cmd::Verify(a) => commands::verify(&a),
        Cmd::Mesh(a) => commands::mesh(&a),
        Cmd::Plot(a) => commands::plot(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("loxoforge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
