use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use vop_recession::backend::{backend_by_name, BACKEND_ENV};
use vop_recession::io::{self, ResultEnvelope};
use vop_recession::recession::{self, RecessionOptions};
use vop_recession::testkit::{verify_approximation, VerifyOptions};
use vop_recession::{plot, Error, Problem};

#[derive(Parser)]
#[command(
    name = "vop-recession",
    version,
    about = "Recession cones of convex vector optimization problems"
)]
struct Cli {
    /// Solver backend (`clarabel` or `clarabel-serial`).
    #[arg(long, env = BACKEND_ENV, default_value = "clarabel", global = true)]
    backend: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the recession cone and print the JSON result envelope.
    Recession {
        file: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        /// Also write the generators as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the envelope here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Solve the two scalar LPs of a bi-objective linear problem.
    LambdaInterval { file: PathBuf },
    /// Check a stored result against independent oracles.
    Verify {
        file: PathBuf,
        result: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print section polylines of a stored result for plotting.
    EmitPlot {
        result: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Validation(Error),
    Certification(String),
    Other(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IterationBudgetExceeded { .. } => Failure::Certification(e.to_string()),
            Error::Parse { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidInput(_)
            | Error::InfeasiblePrimal
            | Error::SlaterViolated { .. }
            | Error::CNotInterior { .. }
            | Error::BadOrderingCone(_)
            | Error::NotCConvex { .. }
            | Error::WNotInDualCone
            | Error::Io(_) => Failure::Validation(e),
            other => Failure::Other(other),
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Validation(e.into())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(file: &Path) -> Result<(String, Problem), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Validation(e.into()))?;
    match io::parse_problem(&text) {
        Ok(p) => Ok((text, p)),
        Err(e @ Error::Parse { line, .. }) => {
            if let Some(src) = text.lines().nth(line.saturating_sub(1)) {
                eprintln!("{}:{line}: {}", file.display(), src.trim());
            }
            Err(Failure::Validation(e))
        }
        Err(e) => Err(e.into()),
    }
}

fn load_envelope(path: &Path) -> Result<ResultEnvelope, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Validation(e.into()))?;
    Ok(io::parse_envelope(&text)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let backend = backend_by_name(&cli.backend)?;
    match cli.command {
        Command::Recession {
            file,
            delta,
            max_iter,
            csv,
            out,
        } => {
            let (_, problem) = load(&file)?;
            let approx = recession::recession(
                &problem,
                RecessionOptions { delta, max_iter },
                backend.as_ref(),
            )?;
            let env = ResultEnvelope::new(problem.kind(), &approx);
            emit(
                &serde_json::to_string_pretty(&env).expect("envelope serializes"),
                out.as_deref(),
            )?;
            if let Some(path) = csv {
                std::fs::write(path, io::generators_csv(&approx))
                    .map_err(|e| Failure::Validation(e.into()))?;
            }
            if approx.achieved_delta > approx.delta {
                return Err(Failure::Certification(format!(
                    "achieved delta {:.3e} exceeds requested {:.3e}",
                    approx.achieved_delta, approx.delta
                )));
            }
            Ok(())
        }
        Command::LambdaInterval { file } => {
            let (_, problem) = load(&file)?;
            let Problem::Linear(p) = &problem else {
                return Err(Failure::Validation(Error::InvalidInput(
                    "lambda-interval needs a linear problem".into(),
                )));
            };
            vop_recession::validate(&problem, backend.as_ref())?;
            let li = recession::lambda_interval(p, backend.as_ref())?;
            let par = li.parametrization();
            let w = |l: f64| {
                par.w(&nalgebra::DVector::from_element(1, l))
                    .iter()
                    .copied()
                    .collect::<Vec<_>>()
            };
            let doc = json!({
                "c_hat": li.c_hat.iter().copied().collect::<Vec<_>>(),
                "lambda_min": li.min,
                "lambda_max": li.max,
                "w_min": w(li.min),
                "w_max": w(li.max),
            });
            emit(&serde_json::to_string_pretty(&doc).expect("json"), None)
        }
        Command::Verify {
            file,
            result,
            samples,
            seed,
        } => {
            let (_, problem) = load(&file)?;
            let env = load_envelope(&result)?;
            let options = VerifyOptions {
                samples,
                seed,
                ..Default::default()
            };
            let report =
                verify_approximation(&problem, &env.approximation(), options, backend.as_ref())?;
            emit(
                &serde_json::to_string_pretty(&report).expect("report serializes"),
                None,
            )?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Certification(format!(
                    "{} violations, Hausdorff estimate {:.3e} (limit {:.3e})",
                    report.violations.len(),
                    report.hausdorff_estimate,
                    report.hausdorff_limit
                )))
            }
        }
        Command::EmitPlot { result, out } => {
            let env = load_envelope(&result)?;
            let data = plot::plot_data(&env.approximation())?;
            emit(
                &serde_json::to_string_pretty(&data).expect("plot serializes"),
                out.as_deref(),
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Certification(msg)) => {
            eprintln!("certification failed: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
