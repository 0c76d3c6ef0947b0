use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use fockdict::bargmann::{bargmann_coeff, BargmannPipeline};
use fockdict::gabor::{
    center_grid, density_estimate, density_frame_predicate, frame_bounds_finite, lattice_frame_predicate,
    separation_check, PointSet, DENSITY_MARGIN,
};
use fockdict::io::{self, Format};
use fockdict::operator::OperatorMatrix;
use fockdict::ops::{
    a1_matrix, a2_matrix, dilation_fock, fourier_fock, md_matrices, rotation, weyl_interior_block, weyl_matrix,
};
use fockdict::quantize::{toeplitz_monomial_matrix, verify_anti_wick, verify_weyl_heat, PolySymbol};
use fockdict::singular::{berezin_with_matrix, fock_norm_a, hilbert_fock_matrix, s_phi_matrix, EntireSymbol};
use fockdict::suite::{hilbert_square_residual, run_suite, SuiteConfig, DEFAULT_SEED};
use fockdict::uncertainty::{extremal_coeffs, uncertainty_product, ExtremalParams};
use fockdict::{FockVector, LineVector};

/// Numerics for the Bargmann transform between L²(ℝ) and the Fock space.
#[derive(Parser, Debug)]
#[command(name = "fockdict", version, about)]
struct Cli {
    /// Truncation degree N (vectors live on e_0..e_N).
    #[arg(long, global = true, env = "FOCKDICT_DEGREE", default_value_t = 64)]
    degree: usize,

    /// Gauss–Hermite nodes for line quadrature.
    #[arg(long, global = true, default_value_t = 128)]
    nodes: usize,

    /// Nodes per axis for plane quadrature.
    #[arg(long, global = true, default_value_t = 48)]
    plane_nodes: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output format for vectors and matrices.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transform a Hermite-coefficient vector to the Fock side.
    Bargmann {
        /// LineVector JSON (array of [re, im]) or index,re,im CSV.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Coeff)]
        mode: Mode,
    },
    /// Fock-side operators.
    Op {
        #[command(subcommand)]
        command: OpCommand,
    },
    /// Singular-integral operators S_φ and the Hilbert transform.
    Singular(SingularArgs),
    /// Point sets, densities and frame bounds.
    Gabor {
        #[command(subcommand)]
        command: GaborCommand,
    },
    /// The uncertainty inequality and its extremal family.
    Uncertainty(UncertaintyArgs),
    /// Toeplitz operators and their quantization identities.
    Quantize {
        #[command(subcommand)]
        command: QuantizeCommand,
    },
    /// Run a verification suite; exits nonzero if any case fails.
    Suite {
        /// bargmann, fourier, weyl, dilation, gabor, hilbert, uncertainty, quantize or all.
        #[arg(default_value = "all")]
        name: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Coefficient identity h_n ↦ e_n.
    Coeff,
    /// Project the line function by quadrature.
    Quad,
}

#[derive(Subcommand, Debug)]
enum OpCommand {
    /// Apply an operator to a FockVector.
    Apply {
        #[arg(long, value_enum)]
        op: OpName,
        /// Comma-separated parameters: rotate θ; weyl re,im; dilate r.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Residual report for an operator identity.
    Verify {
        #[arg(long, value_enum)]
        op: VerifyName,
        /// For unitarity: the Weyl parameter re,im (default 0.5,0).
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OpName {
    Fourier,
    Rotate,
    Weyl,
    Dilate,
    A1,
    A2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyName {
    Commutator,
    Unitarity,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct SingularArgs {
    /// EntireSymbol JSON.
    #[arg(long)]
    phi: Option<PathBuf>,
    /// FockVector to apply S_φ to; without it the matrix is emitted.
    #[arg(long)]
    apply: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<SingularCommand>,
}

#[derive(Subcommand, Debug)]
enum SingularCommand {
    /// The Hilbert transform matrix, or a check on it.
    Hilbert {
        #[arg(long, value_enum)]
        check: Option<HilbertCheck>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum HilbertCheck {
    Tsquare,
    Berezin,
    Norm,
}

#[derive(Subcommand, Debug)]
enum GaborCommand {
    /// Disk-count density estimates of a rectangular lattice.
    Density {
        /// a,b
        #[arg(long)]
        lattice: String,
        /// Comma-separated radii.
        #[arg(long = "R", default_value = "10,20,50")]
        radii: String,
    },
    /// Frame bounds of the clipped lattice on span{e_0..e_core}.
    FrameBounds {
        #[arg(long)]
        lattice: String,
        /// Core degree (default N/8).
        #[arg(long)]
        core: Option<usize>,
        /// Clip radius of the lattice (default √N/2).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Frame verdicts: the ab < 1 criterion and the density test.
    Predicate {
        #[arg(long)]
        lattice: String,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct UncertaintyArgs {
    /// FockVector JSON.
    #[arg(long)]
    f: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b: f64,
    #[command(subcommand)]
    command: Option<UncertaintyCommand>,
}

#[derive(Subcommand, Debug)]
enum UncertaintyCommand {
    /// Coefficients of C exp(αz² + βz) for parameters (c, a, b).
    Extremal {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b: f64,
    },
}

#[derive(Subcommand, Debug)]
enum QuantizeCommand {
    /// Matrix of T for z̄^m z^n.
    Toeplitz {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Anti-Wick operator versus the Toeplitz operator.
    #[command(name = "verify26", alias = "anti-wick")]
    AntiWick {
        #[arg(long)]
        symbol: PathBuf,
    },
    /// Toeplitz operator versus the Weyl quantization of the heat-smoothed symbol.
    #[command(name = "verify27", alias = "weyl-heat")]
    WeylHeat {
        #[arg(long)]
        symbol: PathBuf,
    },
}

/// Residual above which `op verify` and `quantize verify*` exit nonzero.
const VERIFY_TOLERANCE: f64 = 1e-8;

enum Output {
    Vector(Vec<Complex64>),
    Matrix(OperatorMatrix),
    Report(serde_json::Value),
}

struct Outcome {
    output: Output,
    pass: bool,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Self { output, pass: true }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("cannot parse number '{p}'"))
        })
        .collect()
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        [x, y] => Ok((*x, *y)),
        _ => bail!("{what} expects two comma-separated numbers, got '{s}'"),
    }
}

fn read_coeffs(path: &Path) -> Result<Vec<Complex64>> {
    let text = io::read_file(path)?;
    let csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    Ok(if csv {
        io::vector_from_csv(&text)?
    } else {
        io::from_json::<FockVector>(&text)
            .with_context(|| format!("reading {}", path.display()))?
            .into_coeffs()
    })
}

fn read_fock(path: &Path) -> Result<FockVector> {
    Ok(FockVector::new(read_coeffs(path)?))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let n = cli.degree;
    match &cli.command {
        Command::Bargmann { input, mode } => {
            let line = LineVector::new(read_coeffs(input)?);
            let fock = match mode {
                Mode::Coeff => bargmann_coeff(&line).resized(n),
                Mode::Quad => {
                    let pipe = BargmannPipeline::new(n, cli.nodes, cli.plane_nodes)?;
                    let p = pipe.forward(|x| line.eval(x));
                    if let Some(flag) = &p.flag {
                        eprintln!("warning: {flag:?}");
                    }
                    p.value
                }
            };
            Ok(Outcome::ok(Output::Vector(fock.into_coeffs())))
        }
        Command::Op { command } => run_op(cli, command),
        Command::Singular(args) => run_singular(cli, args),
        Command::Gabor { command } => run_gabor(cli, command),
        Command::Uncertainty(args) => match &args.command {
            Some(UncertaintyCommand::Extremal { c, a, b }) => {
                let f = extremal_coeffs(&ExtremalParams::new(*c, *a, *b)?, n)?;
                Ok(Outcome::ok(Output::Vector(f.into_coeffs())))
            }
            None => {
                let path = args.f.as_ref().context("--f is required")?;
                let f = read_fock(path)?;
                let p = uncertainty_product(&f, args.a, args.b);
                let reliable = p.is_reliable();
                let v = p.value;
                Ok(Outcome {
                    pass: v.lhs >= v.rhs * (1.0 - 1e-9),
                    output: Output::Report(json!({
                        "lhs": v.lhs,
                        "rhs": v.rhs,
                        "gap": v.gap(),
                        "reliable": reliable,
                    })),
                })
            }
        },
        Command::Quantize { command } => {
            let (name, residual) = match command {
                QuantizeCommand::Toeplitz { m, n: k } => {
                    return Ok(Outcome::ok(Output::Matrix(toeplitz_monomial_matrix(*m, *k, n)?)));
                }
                QuantizeCommand::AntiWick { symbol } => {
                    let s: PolySymbol = io::read_json(symbol)?;
                    ("anti-wick", verify_anti_wick(&s, n)?)
                }
                QuantizeCommand::WeylHeat { symbol } => {
                    let s: PolySymbol = io::read_json(symbol)?;
                    ("weyl-heat", verify_weyl_heat(&s, n)?)
                }
            };
            Ok(Outcome {
                pass: residual <= VERIFY_TOLERANCE,
                output: Output::Report(json!({ "check": name, "degree": n, "residual": residual })),
            })
        }
        Command::Suite { name } => {
            let cfg = SuiteConfig {
                degree: n,
                line_nodes: cli.nodes,
                plane_nodes: cli.plane_nodes,
                seed: cli.seed,
            };
            let report = run_suite(name, &cfg)?;
            Ok(Outcome {
                pass: report.pass,
                output: Output::Report(serde_json::to_value(&report)?),
            })
        }
    }
}

fn run_op(cli: &Cli, command: &OpCommand) -> Result<Outcome> {
    let n = cli.degree;
    match command {
        OpCommand::Apply { op, params, input } => {
            let f = read_fock(input)?;
            let params = params.as_deref().map(parse_list).transpose()?.unwrap_or_default();
            let out = match op {
                OpName::Fourier => fourier_fock(&f),
                OpName::Rotate => {
                    let [theta] = params[..] else {
                        bail!("rotate expects --params θ")
                    };
                    rotation(theta, &f)
                }
                OpName::Weyl => {
                    let [re, im] = params[..] else {
                        bail!("weyl expects --params re,im")
                    };
                    let w = weyl_matrix(Complex64::new(re, im), n.max(f.degree()))?;
                    if let Some(flag) = &w.flag {
                        eprintln!("warning: {flag:?}");
                    }
                    w.value.apply(&f)?
                }
                OpName::Dilate => {
                    let [r] = params[..] else {
                        bail!("dilate expects --params r")
                    };
                    let pipe = BargmannPipeline::new(n, cli.nodes, cli.plane_nodes)?;
                    let res = dilation_fock(r, &f, &pipe, &[Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.4)])?;
                    if let Some(flag) = &res.flag {
                        eprintln!("warning: {flag:?}");
                    }
                    res.coeffs
                }
                OpName::A1 => a1_matrix(n.max(f.degree())).apply(&f)?,
                OpName::A2 => a2_matrix(n.max(f.degree())).apply(&f)?,
            };
            Ok(Outcome::ok(Output::Vector(out.into_coeffs())))
        }
        OpCommand::Verify { op, params } => {
            let (name, block, residual) = match op {
                VerifyName::Commutator => {
                    let (m, d) = md_matrices(n);
                    let one = Complex64::new(1.0, 0.0);
                    let r = d
                        .commutator(&m)
                        .block_identity_residual(one, n)
                        .max(a2_matrix(n).commutator(&a1_matrix(n)).block_identity_residual(one, n));
                    ("commutator", n, r)
                }
                VerifyName::Unitarity => {
                    let (re, im) = match params {
                        Some(p) => parse_pair(p, "--params")?,
                        None => (0.5, 0.0),
                    };
                    let a = Complex64::new(re, im);
                    let block = weyl_interior_block(a, n);
                    ("unitarity", block, weyl_matrix(a, n)?.value.unitarity_residual(block))
                }
            };
            Ok(Outcome {
                pass: residual <= VERIFY_TOLERANCE,
                output: Output::Report(json!({ "name": name, "block": block, "residual": residual })),
            })
        }
    }
}

fn run_singular(cli: &Cli, args: &SingularArgs) -> Result<Outcome> {
    let n = cli.degree;
    match args.command {
        Some(SingularCommand::Hilbert { check: None }) => Ok(Outcome::ok(Output::Matrix(hilbert_fock_matrix(n)?))),
        Some(SingularCommand::Hilbert { check: Some(check) }) => {
            let report = match check {
                HilbertCheck::Tsquare => {
                    let degrees = [n / 4, n / 2, n];
                    let residuals = degrees
                        .iter()
                        .map(|&d| hilbert_square_residual(d, 9))
                        .collect::<fockdict::Result<Vec<_>>>()?;
                    let decreasing = residuals.windows(2).all(|w| w[1] <= w[0]);
                    json!({ "check": "tsquare", "block": 9, "degrees": degrees, "residuals": residuals, "decreasing": decreasing })
                }
                HilbertCheck::Berezin => {
                    let phi = fockdict::singular::hilbert_symbol();
                    let t = hilbert_fock_matrix(n)?;
                    let r = (n as f64).sqrt() / 2.0;
                    let worst = (0..10)
                        .map(|k| {
                            let z = Complex64::from_polar(r * (k + 1) as f64 / 10.0, 0.7 * k as f64);
                            let (l, rhs) = berezin_with_matrix(&t, &phi, z);
                            (l - rhs).norm()
                        })
                        .fold(0.0, f64::max);
                    json!({ "check": "berezin", "points": 10, "residual": worst })
                }
                HilbertCheck::Norm => {
                    let terms = n.div_ceil(2);
                    let a = fock_norm_a(terms);
                    let col = hilbert_fock_matrix(n)?.column(0).norm_sqr();
                    let want = 4.0 / std::f64::consts::PI * a.series;
                    json!({
                        "check": "norm",
                        "series": a.series,
                        "coefficient_path": a.coefficient_path,
                        "tail_bound": a.tail_bound,
                        "column_zero_norm_sqr": col,
                        "residual": (col - want).abs(),
                    })
                }
            };
            Ok(Outcome::ok(Output::Report(report)))
        }
        None => {
            let path = args.phi.as_ref().context("--phi is required")?;
            let phi: EntireSymbol = io::read_json(path)?;
            let s = s_phi_matrix(&phi, n)?;
            match &args.apply {
                Some(f) => Ok(Outcome::ok(Output::Vector(s.apply(&read_fock(f)?)?.into_coeffs()))),
                None => Ok(Outcome::ok(Output::Matrix(s))),
            }
        }
    }
}

fn run_gabor(cli: &Cli, command: &GaborCommand) -> Result<Outcome> {
    let n = cli.degree;
    match command {
        GaborCommand::Density { lattice, radii } => {
            let (a, b) = parse_pair(lattice, "--lattice")?;
            let z = PointSet::rectangular(a, b, 3.0)?;
            let rep = density_estimate(&z, &parse_list(radii)?, &center_grid(5.0, 3))?;
            Ok(Outcome::ok(Output::Report(serde_json::to_value(rep)?)))
        }
        GaborCommand::FrameBounds { lattice, core, radius } => {
            let (a, b) = parse_pair(lattice, "--lattice")?;
            let core = core.unwrap_or(n / 8);
            let z = PointSet::rectangular(a, b, radius.unwrap_or((n as f64).sqrt() / 2.0))?;
            let (lo, hi) = frame_bounds_finite(&z, n, core)?;
            Ok(Outcome::ok(Output::Report(json!({
                "lattice": [a, b],
                "points": z.len(),
                "degree": n,
                "core": core,
                "lower": lo,
                "upper": hi,
                "ratio": lo / hi,
            }))))
        }
        GaborCommand::Predicate { lattice } => {
            let (a, b) = parse_pair(lattice, "--lattice")?;
            let z = PointSet::rectangular(a, b, 3.0)?;
            let rep = density_estimate(&z, &[30.0, 50.0], &center_grid(5.0, 3))?;
            let verdict = density_frame_predicate(&rep, separation_check(&z).0, DENSITY_MARGIN)?;
            Ok(Outcome::ok(Output::Report(json!({
                "lattice": [a, b],
                "frame": lattice_frame_predicate(a, b)?,
                "density_verdict": verdict,
                "d_minus": rep.d_minus,
            }))))
        }
    }
}

fn render(output: &Output, format: Format) -> Result<String> {
    Ok(match (output, format) {
        (Output::Vector(v), Format::Json) => io::to_json(&FockVector::new(v.clone()))?,
        (Output::Vector(v), Format::Csv) => io::vector_to_csv(v),
        (Output::Matrix(m), Format::Json) => io::to_json(m)?,
        (Output::Matrix(m), Format::Csv) => io::matrix_to_csv(m.entries()),
        (Output::Report(r), Format::Json) => serde_json::to_string_pretty(r)?,
        (Output::Report(_), Format::Csv) => bail!("csv output applies to vectors and matrices; reports are json"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        let mut text = render(&outcome.output, cli.format.into())?;
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &cli.out {
            Some(path) => io::write_file(path, &text)?,
            None => print!("{text}"),
        }
        Ok(outcome.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
