use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use hypolymin::{
    construct_optimal, make_center, minimize_perimeter, parse_angle_token, random_feasible, render_svg,
    spine_edge_count, spine_lower_bound, AngleSpec, CenterKind, OptOptions, PolygonDocument, RenderOptions,
    SurfaceType,
};

const EXIT_INTERNAL: u8 = 1;
const EXIT_MODEL: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Minimal-perimeter hyperbolic polygons around a cusp, cone point or geodesic.
#[derive(Debug, Parser)]
#[command(name = "hypolymin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Model {
    /// `cusp`, `cone:<angle>` or `geodesic:<length>`
    #[arg(long, value_parser = parse_center_syntax)]
    center: CenterKind,
    /// Comma-separated interior angles, e.g. `2*pi/3,pi/2,1.2`
    #[arg(long, value_parser = parse_angle_list)]
    angles: AngleList,
}

#[derive(Debug, Clone)]
struct AngleList(Vec<f64>);

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the optimal polygon directly and write its document.
    Construct {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimise the perimeter from random starts and compare with the construction.
    Optimize {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Projected-gradient tolerance (default from HYPOLYMIN_TOL, else 1e-8)
        #[arg(long)]
        tol_grad: Option<f64>,
        #[arg(long)]
        tol_res: Option<f64>,
        /// Report path; printed to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Document of the best run
        #[arg(long)]
        doc: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the edge count and length bound for spines of a punctured surface.
    Spine {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        punctures: u32,
        #[arg(long)]
        json: bool,
    },
    /// Draw a polygon document in the Poincaré disc.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 480.0)]
        size: f64,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
}

fn parse_angle_list(s: &str) -> Result<AngleList, String> {
    s.split(',')
        .map(|t| parse_angle_token(t).map_err(|e| e.to_string()))
        .collect::<Result<Vec<f64>, String>>()
        .map(AngleList)
}

/// Syntax only; the parameter range is checked later so that it maps to the
/// invalid-model exit code.
fn parse_center_syntax(s: &str) -> Result<CenterKind, String> {
    let (name, param) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (s, None),
    };
    let value = |p: Option<&str>| -> Result<f64, String> {
        let p = p.ok_or_else(|| format!("'{name}' needs a parameter, e.g. {name}:1.5"))?;
        parse_angle_token(p).map_err(|e| e.to_string())
    };
    match (name, param) {
        ("cusp", None) => Ok(CenterKind::Cusp),
        ("cone", p) => Ok(CenterKind::Cone(value(p)?)),
        ("geodesic", p) => Ok(CenterKind::Geodesic(value(p)?)),
        _ => Err(format!("expected cusp, cone:<angle> or geodesic:<length>, got '{s}'")),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use hypolymin::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::Infeasible(_) | E::InvalidCenter(_) | E::InvalidAngles(_) | E::InvalidSurface(_)) => EXIT_MODEL,
        _ => EXIT_INTERNAL,
    }
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn validated(model: &Model) -> anyhow::Result<(CenterKind, AngleSpec)> {
    model.center.validate()?;
    let spec = AngleSpec::new(model.angles.0.clone())?;
    spec.check_feasible(&model.center)?;
    Ok((model.center, spec))
}

fn construct(model: &Model, out: &Path, svg: Option<&Path>) -> anyhow::Result<()> {
    let (kind, spec) = validated(model)?;
    let cf = make_center(kind)?;
    let (params, _, _) = construct_optimal(&cf, &spec)?;
    let doc = PolygonDocument::build(kind, &spec, &params)?;
    write_file(out, &(doc.to_json()? + "\n"))?;
    if let Some(svg) = svg {
        write_file(svg, &render_svg(&doc, &RenderOptions::default())?)?;
    }
    println!(
        "perimeter={:.9} residual={:.3e} spread={:.3e}",
        doc.perimeter, doc.certificates.residual, doc.certificates.tangency_spread
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct StartReport {
    index: usize,
    seed: u64,
    converged: bool,
    perimeter: Option<f64>,
    iterations: Option<usize>,
    tangency_spread: Option<f64>,
    residual: Option<f64>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct Agreement {
    perimeter_delta: f64,
    construction_spread: f64,
    best_spread: f64,
    lambda: f64,
    multiplier_deviation: f64,
}

#[derive(Debug, Serialize)]
struct OptimizeReport {
    center: CenterKind,
    angles: Vec<f64>,
    options: OptOptions,
    construction_perimeter: f64,
    best_index: Option<usize>,
    best_perimeter: Option<f64>,
    agreement: Option<Agreement>,
    starts: Vec<StartReport>,
}

fn tolerance_from_env() -> anyhow::Result<Option<f64>> {
    match std::env::var("HYPOLYMIN_TOL") {
        Ok(v) => {
            let t: f64 = v.trim().parse().with_context(|| format!("HYPOLYMIN_TOL={v} is not a number"))?;
            anyhow::ensure!(t > 0.0 && t.is_finite(), "HYPOLYMIN_TOL must be positive");
            Ok(Some(t))
        }
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn optimize(
    model: &Model,
    starts: usize,
    seed: u64,
    max_iter: Option<usize>,
    tol_grad: Option<f64>,
    tol_res: Option<f64>,
    out: Option<&Path>,
    doc_path: Option<&Path>,
    svg: Option<&Path>,
) -> anyhow::Result<bool> {
    let (kind, spec) = validated(model)?;
    let cf = make_center(kind)?;
    let mut options = OptOptions { seed, ..OptOptions::default() };
    if let Some(t) = tol_grad.or(tolerance_from_env()?) {
        options.tol_grad = t;
    }
    if let Some(t) = tol_res {
        options.tol_res = t;
    }
    if let Some(m) = max_iter {
        options.max_iter = m;
    }
    let (opt, _, cert) = construct_optimal(&cf, &spec)?;

    let runs: Vec<_> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let result = random_feasible(&cf, &spec, s).and_then(|init| minimize_perimeter(&cf, &spec, &init, &options));
            (i, s, result)
        })
        .collect();

    let best = runs
        .iter()
        .filter_map(|(i, _, r)| r.as_ref().ok().filter(|r| r.converged).map(|r| (*i, r)))
        .min_by(|a, b| a.1.perimeter.total_cmp(&b.1.perimeter).then(a.0.cmp(&b.0)));

    let report = OptimizeReport {
        center: kind,
        angles: spec.angles().to_vec(),
        options: options.clone(),
        construction_perimeter: opt.perimeter(),
        best_index: best.map(|b| b.0),
        best_perimeter: best.map(|b| b.1.perimeter),
        agreement: best.map(|(_, r)| Agreement {
            perimeter_delta: r.perimeter - opt.perimeter(),
            construction_spread: cert.tangency_spread,
            best_spread: r.tangency_spread,
            lambda: r.lambda,
            multiplier_deviation: r.multiplier_deviation,
        }),
        starts: runs
            .iter()
            .map(|(i, s, r)| match r {
                Ok(r) => StartReport {
                    index: *i,
                    seed: *s,
                    converged: r.converged,
                    perimeter: Some(r.perimeter),
                    iterations: Some(r.iterations),
                    tangency_spread: Some(r.tangency_spread),
                    residual: Some(r.residual),
                    error: None,
                },
                Err(e) => StartReport {
                    index: *i,
                    seed: *s,
                    converged: false,
                    perimeter: None,
                    iterations: None,
                    tangency_spread: None,
                    residual: None,
                    error: Some(e.to_string()),
                },
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    if let Some((_, r)) = best {
        if doc_path.is_some() || svg.is_some() {
            let doc = PolygonDocument::build(kind, &spec, &r.params)?;
            if let Some(p) = doc_path {
                write_file(p, &(doc.to_json()? + "\n"))?;
            }
            if let Some(p) = svg {
                write_file(p, &render_svg(&doc, &RenderOptions::default())?)?;
            }
        }
    }
    Ok(best.is_some())
}

#[derive(Debug, Serialize)]
struct SpineReport {
    genus: u32,
    punctures: u32,
    edges: u64,
    bound: f64,
}

fn spine(genus: u32, punctures: u32, json: bool) -> anyhow::Result<()> {
    let st = SurfaceType::new(genus, punctures)?;
    let (edges, bound) = (spine_edge_count(&st), spine_lower_bound(&st));
    if json {
        println!("{}", serde_json::to_string(&SpineReport { genus, punctures, edges, bound })?);
    } else {
        println!("edges={edges} bound={bound:.9}");
    }
    Ok(())
}

fn render(input: &Path, out: &Path, size: f64, copies: usize) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let doc = PolygonDocument::from_json(&text)?;
    let options = RenderOptions { size, copies, ..RenderOptions::default() };
    write_file(out, &render_svg(&doc, &options)?)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Construct { model, out, svg } => construct(&model, &out, svg.as_deref()).map(|_| true),
        Command::Optimize { model, starts, seed, max_iter, tol_grad, tol_res, out, doc, svg } => optimize(
            &model,
            starts,
            seed,
            max_iter,
            tol_grad,
            tol_res,
            out.as_deref(),
            doc.as_deref(),
            svg.as_deref(),
        ),
        Command::Spine { genus, punctures, json } => spine(genus, punctures, json).map(|_| true),
        Command::Render { input, out, size, copies } => render(&input, &out, size, copies).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: no start converged");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
