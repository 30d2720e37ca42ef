mod figures;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qspec::{limit, quadrature, validate};

#[derive(Parser)]
#[command(name = "qspec", about = "Spectral data for the photon-number-truncated field quadrature", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitMode {
    Quadrature,
    Phase,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and eigenvectors of the truncated quadrature operator.
    Spectrum {
        #[arg(long)]
        cap: usize,
        /// Quadrature angle; leaves the spectrum unchanged.
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a figure's data as CSV files.
    Figure {
        #[arg(value_enum)]
        figure: figures::FigureId,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
        /// Truncation override where the preset allows one.
        #[arg(long)]
        cap: Option<usize>,
        /// Pseudo-eigenvalue override (fig3).
        #[arg(long)]
        lambda: Option<Vec<f64>>,
        /// Emit wavefunction frames over a lambda grid (fig3).
        #[arg(long, default_value_t = false)]
        animate: bool,
        /// Include the large best-effort panels (fig2).
        #[arg(long, default_value_t = false)]
        best_effort: bool,
    },
    /// Proximity certificate: an eigenvalue within epsilon of the target.
    Limit {
        #[arg(long)]
        target: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        n0: usize,
        #[arg(long, value_enum, default_value_t = LimitMode::Quadrature)]
        mode: LimitMode,
        /// Anchor angle for the phase points (phase mode).
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-check suite; exits nonzero on any failure.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Write the JSON report here as well as summarizing to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Negative control: perturb a matrix element so a check must fail.
        #[arg(long, hide = true, default_value_t = false)]
        inject_failure: bool,
    },
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Spectrum { cap, beta, format, out } => {
            let decomp = quadrature::TruncatedQuadrature::build(cap, beta)
                .diagonalize()
                .map_err(|e| e.to_string())?;
            let content = match format {
                Format::Json => {
                    let mut s = decomp.to_json();
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("eigenvalue\n");
                    for v in &decomp.eigenvalues {
                        s.push_str(&format!("{v}\n"));
                    }
                    s
                }
            };
            write_output(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Figure { figure, outdir, cap, lambda, animate, best_effort } => {
            let opts = figures::FigureOptions { cap, lambda, animate, best_effort };
            let written = figures::emit(figure, &outdir, &opts)?;
            for path in written {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Limit { target, epsilon, n0, mode, theta0, out } => {
            let cert = match mode {
                LimitMode::Quadrature => {
                    let q = limit::LimitQuery::new(target, epsilon, n0)
                        .map_err(|e| e.to_string())?;
                    limit::find_near_eigenvalue(&q).map_err(|e| e.to_string())?
                }
                LimitMode::Phase => limit::phase_limit_density(target, epsilon, theta0, n0)
                    .map_err(|e| e.to_string())?,
            };
            let mut content = cert.to_json_line();
            content.push('\n');
            write_output(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { suite, report, inject_failure } => {
            let suite = match suite {
                SuiteArg::Fast => validate::Suite::Fast,
                SuiteArg::Full => validate::Suite::Full,
            };
            let result = validate::run_suite(suite, inject_failure);
            for check in &result.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("{status} {} ({} ms) {}", check.name, check.millis, check.detail);
            }
            if let Some(path) = report {
                std::fs::write(&path, result.to_json())
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            if result.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
