//! Command-line front end: compute, emit, and verify.
//!
//! Subcommands: `constants`, `moments`, `density`, `curve`, `transform`,
//! `verify`. Exit codes: 0 on success, 1 when verification fails, 2 on
//! usage errors. All CSV output uses a decimal point and 17 significant
//! digits, so identical invocations produce byte-identical files.

// negated comparisons in argument guards are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use vmg_core::density::{rho_direct, rho_parametric, ParametricBranch};
use vmg_core::geometry::gamma_curve;
use vmg_core::moments::moments;
use vmg_core::real::constants;
use vmg_core::transform::transform_point;
use vmg_core::verify::{self, VerifyOptions};

/// Largest accepted moment order.
const MAX_MOMENT_ORDER: usize = 200;

#[derive(Parser)]
#[command(
    name = "vmg",
    version,
    about = "Moments, Cauchy-Stieltjes transform, and density of the standard V-monotone Gaussian measure"
)]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the named constants to 15 significant digits.
    Constants,
    /// Emit exact moments m_0..m_N as "n,num/den" rows.
    Moments {
        /// Highest moment order N (at most 200).
        #[arg(long, default_value_t = 12)]
        max_order: usize,
    },
    /// Emit density samples as CSV "x,rho,method".
    Density {
        /// Number of grid points (rounded up to an odd count on the
        /// default symmetric grid).
        #[arg(long, default_value_t = 2001)]
        count: usize,
        /// Left end of a custom grid (requires --max).
        #[arg(long, allow_hyphen_values = true)]
        min: Option<f64>,
        /// Right end of a custom grid (requires --min).
        #[arg(long, allow_hyphen_values = true)]
        max: Option<f64>,
        /// Sweep one parametric branch instead of the direct grid.
        #[arg(long, value_enum)]
        parametric: Option<BranchArg>,
        /// Sample log-spaced distances from sqrt(2) to expose the
        /// oscillation; ignores --min/--max.
        #[arg(long)]
        zoom_sqrt2: bool,
    },
    /// Emit samples of the level curve Gamma_eta as CSV "xi,re,im".
    Curve {
        /// Level parameter, in [-pi, 0].
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
        xi_min: f64,
        /// Defaults to just below the admissible bound -eta.
        #[arg(long, allow_hyphen_values = true)]
        xi_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Evaluate F and G at points read from a CSV file of "re,im" rows.
    Transform {
        /// Input file; each non-empty line holds "re,im".
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the self-verification checklist and print a JSON report.
    Verify {
        /// Keep only checks whose name contains this substring.
        #[arg(long)]
        only: Option<String>,
        /// Replace every check tolerance (forces failures when tightened).
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 64)]
        panels: usize,
        #[arg(long, default_value_t = 32)]
        nodes: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Inner,
    Outer,
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout())),
    };
    match run(&cli.cmd, &mut out) {
        Ok(code) => {
            if out.flush().is_err() {
                return ExitCode::from(2);
            }
            code
        }
        Err(msg) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Cmd, out: &mut dyn Write) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Constants => cmd_constants(out),
        Cmd::Moments { max_order } => cmd_moments(*max_order, out),
        Cmd::Density {
            count,
            min,
            max,
            parametric,
            zoom_sqrt2,
        } => cmd_density(*count, *min, *max, *parametric, *zoom_sqrt2, out),
        Cmd::Curve {
            eta,
            xi_min,
            xi_max,
            count,
        } => cmd_curve(*eta, *xi_min, *xi_max, *count, out),
        Cmd::Transform { input } => cmd_transform(input, out),
        Cmd::Verify {
            only,
            tolerance,
            panels,
            nodes,
        } => cmd_verify(only.clone(), *tolerance, *panels, *nodes, out),
    }
}

fn emit(out: &mut dyn Write, line: String) -> Result<(), String> {
    writeln!(out, "{line}").map_err(|e| format!("write failed: {e}"))
}

fn cmd_constants(out: &mut dyn Write) -> Result<ExitCode, String> {
    let c = constants();
    emit(out, format!("gamma0 = {:.14e}", c.gamma0))?;
    emit(out, format!("sqrt3_pi_over_9 = {:.14e}", c.t_max))?;
    emit(out, format!("edge = {:.14e}", c.edge))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_moments(max_order: usize, out: &mut dyn Write) -> Result<ExitCode, String> {
    if max_order > MAX_MOMENT_ORDER {
        return Err(format!("max order {max_order} exceeds the cap {MAX_MOMENT_ORDER}"));
    }
    let table = moments(max_order);
    for (n, m) in table.iter() {
        emit(out, format!("{n},{}/{}", m.numer(), m.denom()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn density_row(out: &mut dyn Write, x: f64) -> Result<(), String> {
    let s = rho_direct(x);
    emit(out, format!("{},{},{}", fmt17(s.x), fmt17(s.rho), s.method))
}

fn cmd_density(
    count: usize,
    min: Option<f64>,
    max: Option<f64>,
    parametric: Option<BranchArg>,
    zoom_sqrt2: bool,
    out: &mut dyn Write,
) -> Result<ExitCode, String> {
    if count < 2 {
        return Err("grid needs at least 2 points".into());
    }
    emit(out, "x,rho,method".into())?;
    if let Some(branch) = parametric {
        let (b, lo, hi) = match branch {
            BranchArg::Inner => (ParametricBranch::Inner, -3.0 * PI, PI - 1e-2),
            BranchArg::Outer => (ParametricBranch::Outer, -3.0 * PI, -1e-2),
        };
        let grid: Vec<f64> = (0..count)
            .map(|j| lo + (hi - lo) * j as f64 / (count - 1) as f64)
            .collect();
        let samples = rho_parametric(b, &grid).map_err(|e| e.to_string())?;
        for s in samples {
            emit(out, format!("{},{},{}", fmt17(s.x), fmt17(s.rho), s.method))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    if zoom_sqrt2 {
        // log-spaced distances, both sides, ascending in x
        let (d_lo, d_hi) = (1e-12f64, 1e-1f64);
        let step = (d_hi / d_lo).ln() / (count - 1) as f64;
        let dist = |j: usize| d_lo * (step * j as f64).exp();
        for j in (0..count).rev() {
            density_row(out, SQRT_2 - dist(j))?;
        }
        for j in 0..count {
            density_row(out, SQRT_2 + dist(j))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    match (min, max) {
        (Some(a), Some(b)) => {
            if !(a < b) {
                return Err(format!("empty range: [{a}, {b}]"));
            }
            for j in 0..count {
                density_row(out, a + (b - a) * j as f64 / (count - 1) as f64)?;
            }
        }
        (None, None) => {
            // symmetric grid with an exact zero in the middle
            let half = count / 2;
            let edge = constants().edge;
            for j in (1..=half).rev() {
                density_row(out, -(edge * j as f64 / (half + 1) as f64))?;
            }
            density_row(out, 0.0)?;
            for j in 1..=half {
                density_row(out, edge * j as f64 / (half + 1) as f64)?;
            }
        }
        _ => return Err("--min and --max must be given together".into()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_curve(
    eta: f64,
    xi_min: f64,
    xi_max: Option<f64>,
    count: usize,
    out: &mut dyn Write,
) -> Result<ExitCode, String> {
    if count < 2 {
        return Err("grid needs at least 2 points".into());
    }
    let xi_max = xi_max.unwrap_or(-eta - 1e-3);
    if !(xi_min < xi_max) {
        return Err(format!("empty range: [{xi_min}, {xi_max}]"));
    }
    let grid: Vec<f64> = (0..count)
        .map(|j| xi_min + (xi_max - xi_min) * j as f64 / (count - 1) as f64)
        .collect();
    let points = gamma_curve(eta, &grid).map_err(|e| e.to_string())?;
    emit(out, "xi,re,im".into())?;
    for (xi, u) in grid.iter().zip(points) {
        emit(out, format!("{},{},{}", fmt17(*xi), fmt17(u.re), fmt17(u.im)))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_transform(input: &PathBuf, out: &mut dyn Write) -> Result<ExitCode, String> {
    let text = fs::read_to_string(input)
        .map_err(|e| format!("cannot read {}: {e}", input.display()))?;
    emit(out, "re,im,F_re,F_im,G_re,G_im".into())?;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split(',');
        let (re, im) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let re: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("line {line_no}: malformed point '{trimmed}'"))?;
                let im: f64 = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("line {line_no}: malformed point '{trimmed}'"))?;
                (re, im)
            }
            _ => return Err(format!("line {line_no}: malformed point '{trimmed}'")),
        };
        let tv = transform_point(Complex64::new(re, im))
            .map_err(|e| format!("line {line_no}: {e}"))?;
        emit(
            out,
            format!(
                "{},{},{},{},{},{}",
                fmt17(re),
                fmt17(im),
                fmt17(tv.f.re),
                fmt17(tv.f.im),
                fmt17(tv.g.re),
                fmt17(tv.g.im)
            ),
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    only: Option<String>,
    tolerance: Option<f64>,
    panels: usize,
    nodes: usize,
    out: &mut dyn Write,
) -> Result<ExitCode, String> {
    if let Some(t) = tolerance {
        if !(t > 0.0) {
            return Err("tolerance must be positive".into());
        }
    }
    if panels < 2 || nodes < 2 {
        return Err("need at least 2 panels and 2 nodes".into());
    }
    let report = verify::run(&VerifyOptions {
        panels,
        nodes,
        tolerance_override: tolerance,
        only,
    });
    let json =
        serde_json::to_string_pretty(&report).map_err(|e| format!("serialization failed: {e}"))?;
    emit(out, json)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
