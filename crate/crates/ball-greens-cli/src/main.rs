//! Command-line surface for the ball Green's function evaluators: point
//! evaluation (`eval`), grid export (`grid`), and the verification suite
//! (`verify`).
//!
//! Exit codes: 0 success, 1 verification-suite failure, 2 invalid usage or
//! arguments, 3 evaluation error (source coincidence, centered dipole).

use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ball_greens::verify::quadrature::QuadratureConfig;
use ball_greens::verify::suite::{format_f64, run_suite};
use ball_greens::{
    greens::evaluate, BallSpec, Dipole, Error, EvalRequest, GreenEval, Prop2Form, Source,
};

/// Comma-separated decimal literals, e.g. "0.5,0,0".
#[derive(Debug, Clone)]
struct VectorArg(Vec<f64>);

impl FromStr for VectorArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let comps: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
        match comps {
            Ok(v) if !v.is_empty() => Ok(VectorArg(v)),
            Ok(_) => Err("vector must have at least one component".into()),
            Err(e) => Err(format!("invalid vector component: {e}")),
        }
    }
}

/// Comma-separated positive integers, e.g. "50,50"; may be empty.
#[derive(Debug, Clone)]
struct UsizeListArg(Vec<usize>);

impl FromStr for UsizeListArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(UsizeListArg(Vec::new()));
        }
        let items: Result<Vec<usize>, _> =
            s.split(',').map(|p| p.trim().parse::<usize>()).collect();
        items.map(UsizeListArg).map_err(|e| format!("invalid integer: {e}"))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Auto,
    Form1,
    Form2,
}

impl From<FormArg> for Prop2Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Auto => Prop2Form::Auto,
            FormArg::Form1 => Prop2Form::Form1,
            FormArg::Form2 => Prop2Form::Form2,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "ball-greens",
    version,
    about = "Green's functions for Neumann-Poisson and dipole (EEG) problems on n-balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate at a single point and print one JSON record.
    Eval(EvalArgs),
    /// Evaluate on a rectangular grid and stream CSV or JSON rows.
    Grid(GridArgs),
    /// Run the verification suite and print its JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Spatial dimension n >= 1.
    #[arg(long)]
    dim: usize,
    /// Ball radius R.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Source position, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    z: VectorArg,
    /// Dipole moment; selects the EEG problem when present.
    #[arg(long, allow_hyphen_values = true)]
    moment: Option<VectorArg>,
    /// Evaluation point, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    x: VectorArg,
    /// Which algebraic form of the dipole evaluator to use.
    #[arg(long, value_enum, default_value_t = FormArg::Auto)]
    form: FormArg,
}

#[derive(Args)]
struct GridArgs {
    /// Spatial dimension, 1 to 3.
    #[arg(long)]
    dim: usize,
    /// Ball radius R.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Source position.
    #[arg(long, allow_hyphen_values = true)]
    z: VectorArg,
    /// Dipole moment; selects the EEG problem when present.
    #[arg(long, allow_hyphen_values = true)]
    moment: Option<VectorArg>,
    /// Nodes per axis (>= 2): one value per axis, or one value for all axes.
    #[arg(long)]
    res: UsizeListArg,
    /// Bounding box `lo1,hi1[,lo2,hi2[,lo3,hi3]]`; defaults to [-R, R] per axis.
    #[arg(long = "box", allow_hyphen_values = true)]
    bbox: Option<VectorArg>,
    #[arg(long, value_enum, default_value_t = FormArg::Auto)]
    form: FormArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    output: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the deterministic sampler.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Dimensions to exercise, e.g. "1,2,3,4,5,7"; may be empty.
    #[arg(long, default_value = "1,2,3,4,5,7")]
    dims: UsizeListArg,
    /// Absolute tolerance of the quadrature oracle.
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    /// Relative tolerance of the quadrature oracle.
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    /// Subdivision budget of the quadrature oracle.
    #[arg(long, default_value_t = 2000)]
    max_subdivisions: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval(args) => eval_cmd(&args),
        Command::Grid(args) => grid_cmd(&args),
        Command::Verify(args) => verify_cmd(&args),
    };
    match code {
        Ok(c) => c,
        Err(CliError { message, code }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    message: String,
    code: u8,
}

fn usage_error(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        code: 2,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => 2,
            _ => 3,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn vector_json(v: &[f64]) -> String {
    let comps: Vec<String> = v.iter().map(|c| format_f64(*c)).collect();
    format!("[{}]", comps.join(","))
}

fn flags_json(g: &GreenEval) -> String {
    let names: Vec<String> = g.flags.names().iter().map(|n| format!("\"{n}\"")).collect();
    format!("[{}]", names.join(","))
}

fn build_request(
    dim: usize,
    radius: f64,
    z: &VectorArg,
    moment: &Option<VectorArg>,
    x: &VectorArg,
    form: FormArg,
) -> Result<EvalRequest, CliError> {
    if dim == 0 {
        return Err(usage_error("--dim must be at least 1"));
    }
    for (name, v) in [("--z", &z.0), ("--x", &x.0)] {
        if v.len() != dim {
            return Err(usage_error(format!(
                "{name} has {} components but --dim is {dim}",
                v.len()
            )));
        }
    }
    if let Some(m) = moment {
        if m.0.len() != dim {
            return Err(usage_error(format!(
                "--moment has {} components but --dim is {dim}",
                m.0.len()
            )));
        }
    }
    let ball = BallSpec::new(dim, radius)?;
    let source = match moment {
        Some(m) => Source::Dipole(Dipole::new(z.0.clone(), m.0.clone())?),
        None => Source::Position(z.0.clone()),
    };
    Ok(EvalRequest {
        ball,
        source,
        point: x.0.clone(),
        form: form.into(),
    })
}

fn eval_cmd(args: &EvalArgs) -> Result<ExitCode, CliError> {
    let req = build_request(args.dim, args.radius, &args.z, &args.moment, &args.x, args.form)?;
    let g = evaluate(&req)?;
    let problem = match &req.source {
        Source::Position(_) => "poisson",
        Source::Dipole(_) => "eeg",
    };
    let moment_field = match &req.source {
        Source::Dipole(d) => format!(",\"moment\":{}", vector_json(&d.moment)),
        Source::Position(_) => String::new(),
    };
    println!(
        "{{\"problem\":\"{problem}\",\"dim\":{},\"radius\":{},\"z\":{}{moment_field},\"x\":{},\"value\":{},\"method\":\"{}\",\"flags\":{}}}",
        args.dim,
        format_f64(args.radius),
        vector_json(&args.z.0),
        vector_json(&args.x.0),
        format_f64(g.value),
        g.method.as_str(),
        flags_json(&g)
    );
    Ok(ExitCode::SUCCESS)
}

fn grid_cmd(args: &GridArgs) -> Result<ExitCode, CliError> {
    let dim = args.dim;
    if !(1..=3).contains(&dim) {
        return Err(usage_error("grid export supports --dim 1, 2 or 3"));
    }
    let res: Vec<usize> = match args.res.0.len() {
        l if l == dim => args.res.0.clone(),
        1 => vec![args.res.0[0]; dim],
        0 => return Err(usage_error("--res is required")),
        _ => {
            return Err(usage_error(format!(
                "--res needs 1 or {dim} values, got {}",
                args.res.0.len()
            )))
        }
    };
    if res.iter().any(|r| *r < 2) {
        return Err(usage_error("grid resolution must be at least 2 per axis"));
    }
    let bbox: Vec<(f64, f64)> = match &args.bbox {
        None => vec![(-args.radius, args.radius); dim],
        Some(b) => {
            if b.0.len() != 2 * dim {
                return Err(usage_error(format!(
                    "--box needs {} values for --dim {dim}",
                    2 * dim
                )));
            }
            let pairs: Vec<(f64, f64)> = b.0.chunks(2).map(|c| (c[0], c[1])).collect();
            if pairs.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
                return Err(usage_error("--box intervals must satisfy lo < hi"));
            }
            pairs
        }
    };

    // Validate the problem setup once, up front.
    let zero_probe = vec![0.0; dim];
    let req = build_request(
        dim,
        args.radius,
        &args.z,
        &args.moment,
        &VectorArg(zero_probe),
        args.form,
    )?;
    if let Source::Dipole(_) = &req.source {
        // A centered dipole fails at every node; report it as an evaluation
        // error rather than emitting an empty grid.
        if ball_greens::geometry::norm(&args.z.0) < 1e-12 {
            return Err(Error::CenteredDipole.into());
        }
    }

    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());

    if matches!(args.output, OutputFormat::Csv) {
        let coords: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "{},value,flags", coords.join(",")).ok();
    }

    let total: usize = res.iter().product();
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let x: Vec<f64> = (0..dim)
            .map(|k| {
                let (lo, hi) = bbox[k];
                lo + (hi - lo) * idx[k] as f64 / (res[k] - 1) as f64
            })
            .collect();

        let inside = ball_greens::geometry::norm(&x) <= args.radius * (1.0 + 1e-12);
        let cell = if inside {
            let mut node_req = req.clone();
            node_req.point = x.clone();
            match evaluate(&node_req) {
                Ok(g) => Some(g),
                Err(Error::SourceCoincidence) => None,
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };

        match args.output {
            OutputFormat::Csv => {
                let coords: Vec<String> = x.iter().map(|c| format_f64(*c)).collect();
                let (value, flags) = match &cell {
                    Some(g) => (format_f64(g.value), g.flags.names().join(";")),
                    None => (String::new(), String::new()),
                };
                writeln!(out, "{},{},{}", coords.join(","), value, flags).ok();
            }
            OutputFormat::Json => {
                let (value, flags) = match &cell {
                    Some(g) => (format_f64(g.value), flags_json(g)),
                    None => ("null".to_string(), "[]".to_string()),
                };
                writeln!(
                    out,
                    "{{\"x\":{},\"value\":{value},\"flags\":{flags}}}",
                    vector_json(&x)
                )
                .ok();
            }
        }

        // Row-major: last axis fastest.
        for k in (0..dim).rev() {
            idx[k] += 1;
            if idx[k] < res[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    out.flush().ok();
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let cfg = QuadratureConfig {
        abs_tol: args.abs_tol,
        rel_tol: args.rel_tol,
        max_subdivisions: args.max_subdivisions,
    };
    cfg.validate()?;
    if args.dims.0.iter().any(|d| !(1..=10).contains(d)) {
        return Err(usage_error("--dims entries must lie in 1..=10"));
    }
    let report = run_suite(args.seed, &args.dims.0, &cfg);
    println!("{}", report.to_json());
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
