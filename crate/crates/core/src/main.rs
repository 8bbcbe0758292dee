use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use fraclab::experiments::{self, ExperimentConfig, Source};
use fraclab::geometry::{complementary_hausdorff, dfront, excess, hausdorff, DomainSpec};
use fraclab::oracles::oracle_check;
use fraclab::solver::{solve_dirichlet, DEFAULT_TOL};
use fraclab::spectral::{eigenpairs, DEFAULT_EIGEN_TOL};
use fraclab::{FracStiffness, Result};

#[derive(Parser)]
#[command(name = "fraclab", version, about = "Restricted fractional Laplacian laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Translation,
    Domain,
    Spectral,
    Eigenfunction,
    Besov,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Translation => "translation",
            Experiment::Domain => "domain",
            Experiment::Spectral => "spectral",
            Experiment::Eigenfunction => "eigenfunction",
            Experiment::Besov => "besov",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Dirichlet problem and print a JSON report.
    Solve {
        /// Domain as inline JSON or a path to a JSON file.
        #[arg(long, default_value = r#"{"type":"interval","a":-1.0,"b":1.0}"#)]
        domain: String,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        /// `one`, `gaussian` (centred bump of a quarter radius width) or
        /// `file:<path>` naming a JSON source description.
        #[arg(long, default_value = "one")]
        rhs: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write node coordinates and values to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the lowest eigenvalues of the restricted operator.
    Eigs {
        #[arg(long, default_value = r#"{"type":"interval","a":-1.0,"b":1.0}"#)]
        domain: String,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
        tol: f64,
        /// Write `n, lambda` rows to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a rate experiment; exits non-zero unless every check passes.
    Rates {
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// Configuration JSON file; `s` is the only required field.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Distances between two domains sampled on the grid of the first.
    Geometry {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Compare the discrete operator with the closed-form ball solution.
    OracleCheck {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
    },
}

fn read_json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn parse_rhs(arg: &str, spec: &DomainSpec) -> Result<Source> {
    match arg {
        "one" => Ok(Source::default()),
        "gaussian" => {
            let c = spec.center()?;
            Ok(Source::Gaussian {
                center: c[..spec.dim()].to_vec(),
                width: 0.25 * spec.radius()?,
                amplitude: 1.0,
            })
        }
        other => match other.strip_prefix("file:") {
            Some(path) => Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?),
            None => Err(fraclab::Error::InvalidParameter(format!("unknown right-hand side '{other}'"))),
        },
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        // a closed reader such as `head` is not an error
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

#[derive(Serialize)]
struct Distances {
    excess_ab: f64,
    excess_ba: f64,
    hausdorff: f64,
    complementary_hausdorff: f64,
    dfront_ab: f64,
    dfront_ba: f64,
}

fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Solve {
            domain,
            s,
            n,
            rhs,
            tol,
            out,
        } => {
            let spec: DomainSpec = read_json_arg(&domain)?;
            let source = parse_rhs(&rhs, &spec)?;
            let mask = spec.discretize(n)?;
            let f = source.sample(&mask)?;
            let (u, report) = solve_dirichlet(&mask, s, &f, tol)?;
            if let Some(path) = out {
                let dim = u.grid().dim();
                let mut w = csv::Writer::from_path(path)?;
                let header: &[&str] = if dim == 1 { &["x", "u"] } else { &["x", "y", "u"] };
                w.write_record(header)?;
                for (k, v) in u.values().iter().enumerate() {
                    let p = u.grid().point(k);
                    let row = if dim == 1 {
                        vec![p[0].to_string(), v.to_string()]
                    } else {
                        vec![p[0].to_string(), p[1].to_string(), v.to_string()]
                    };
                    w.write_record(&row)?;
                }
                w.flush()?;
            }
            print_json(&report)?;
        }
        Command::Eigs {
            domain,
            s,
            n,
            count,
            tol,
            out,
        } => {
            let spec: DomainSpec = read_json_arg(&domain)?;
            let mask = spec.discretize(n)?;
            let op = FracStiffness::assemble(mask.grid(), s)?;
            let lambdas = eigenpairs(&op, &mask, count, tol)?.lambdas();
            if let Some(path) = out {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["n", "lambda"])?;
                for (k, l) in lambdas.iter().enumerate() {
                    w.serialize((k + 1, l))?;
                }
                w.flush()?;
            }
            print_json(&lambdas)?;
        }
        Command::Rates {
            experiment,
            config,
            out_dir,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = ExperimentConfig::parse(experiment.name(), &text)?;
            let output = experiments::run(&cfg)?;
            output.write(&out_dir)?;
            print_json(&output.report)?;
            return Ok(output.report.pass);
        }
        Command::Geometry { a, b, n } => {
            let a: DomainSpec = read_json_arg(&a)?;
            let b: DomainSpec = read_json_arg(&b)?;
            let ma = a.discretize(n)?;
            let mb = b.on_grid(*ma.grid())?;
            print_json(&Distances {
                excess_ab: excess(&ma, &mb)?,
                excess_ba: excess(&mb, &ma)?,
                hausdorff: hausdorff(&ma, &mb)?,
                complementary_hausdorff: complementary_hausdorff(&ma, &mb)?,
                dfront_ab: dfront(&ma, &mb)?,
                dfront_ba: dfront(&mb, &ma)?,
            })?;
        }
        Command::OracleCheck { dim, s, n } => {
            print_json(&oracle_check(dim, s, n)?)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
