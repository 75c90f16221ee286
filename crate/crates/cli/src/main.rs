use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uqcm::PsdPolicy;
use uqcm_cli::commands::{self, CloneOptions, IntRange};
use uqcm_cli::error::{EXIT_PASS, EXIT_USAGE, EXIT_VERIFY_FAILED};
use uqcm_cli::{CliError, Suite, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "uqcm", version, about = "Universal cloning on the symmetric subspace of qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the amplitude table for (d, M, L) as CSV.
    Coeffs {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clone a SymOperator JSON document into L copies.
    Clone {
        /// Input SymOperator document.
        input: PathBuf,
        #[arg(long)]
        l: usize,
        /// Include the single-site reduced output.
        #[arg(long)]
        reduced: bool,
        /// Compare against the full tensor-product oracle.
        #[arg(long)]
        oracle: bool,
        /// Do not check Hermiticity and unit trace of the input.
        #[arg(long)]
        no_validate: bool,
        /// Reject inputs with negative eigenvalues instead of warning.
        #[arg(long)]
        strict_psd: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fidelity and shrinking-factor tables (ranges like 2, 2..5 or 2..=5).
    Tables {
        #[arg(long)]
        d: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        /// scaling, isometry, concat, oracle, covariance or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override every suite tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Multiply the shrinking factor (negative control).
        #[arg(long, default_value_t = 1.0, hide = true)]
        perturb_eta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Coeffs { d, m, l, out } => {
            commands::write_output(out.as_deref(), &commands::coeffs_csv(d, m, l)?)?;
        }
        Command::Clone {
            input,
            l,
            reduced,
            oracle,
            no_validate,
            strict_psd,
            out,
        } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let opts = CloneOptions {
                reduced,
                oracle,
                skip_validation: no_validate,
                psd: if strict_psd { PsdPolicy::Reject } else { PsdPolicy::Warn },
            };
            let doc = commands::clone_document(&text, l, opts)?;
            for w in &doc.warnings {
                eprintln!("warning: {w}");
            }
            let mut json = serde_json::to_string_pretty(&doc)?;
            json.push('\n');
            commands::write_output(out.as_deref(), &json)?;
        }
        Command::Tables { d, n, m, out } => {
            let csv = commands::tables_csv(IntRange::parse(&d)?, IntRange::parse(&n)?, IntRange::parse(&m)?)?;
            commands::write_output(out.as_deref(), &csv)?;
        }
        Command::Verify {
            suite,
            seed,
            tol,
            perturb_eta,
            out,
        } => {
            let suite: Suite = suite.parse().map_err(CliError::Usage)?;
            let config = VerifyConfig {
                seed,
                tolerance: tol,
                eta_scale: perturb_eta,
            };
            let report = uqcm_cli::run(suite, &config)?;
            let mut json = report.to_json();
            json.push('\n');
            commands::write_output(out.as_deref(), &json)?;
            for case in report.failures() {
                eprintln!(
                    "FAIL {} {:?}: residual {:e} > {:e}",
                    case.suite, case.params, case.residual, case.tolerance
                );
            }
            return Ok(if report.passed() { EXIT_PASS } else { EXIT_VERIFY_FAILED });
        }
    }
    Ok(EXIT_PASS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code() as u8)
        }
    }
}
