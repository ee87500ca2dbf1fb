//! Command-line front end: tabulation, solving, far-field extraction, decay
//! scans, and the acceptance suite.
//!
//! Exit codes: 0 success, 1 input validation, 2 numerical failure
//! (near-singular system or non-convergence), 3 acceptance failure.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use relscat::accept::{reference_config, run_all, AcceptanceReport};
use relscat::config::{FieldDocument, RunConfig};
use relscat::farfield::{far_field_samples, log_spaced_radii, planewave_diff_scan, remainder_scan};
use relscat::kernel::g_radial;
use relscat::specfun::{h0_real, j0_real, n0_real, Regime};
use relscat::{Error, SignChoice};

#[derive(Parser)]
#[command(name = "relscat", version, about = "Generalized eigenfunctions of sqrt(-Laplace) + V in 2D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum SpecFn {
    J0,
    N0,
    H0,
}

#[derive(Copy, Clone, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for SignChoice {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => SignChoice::Plus,
            SignArg::Minus => SignChoice::Minus,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ScanMode {
    Diff,
    Remainder,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate J0, N0, or H0 on a log-spaced grid.
    SpecfunTable {
        #[arg(long = "fn", value_enum)]
        function: SpecFn,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the boundary kernel g(lambda, r) over a radius range.
    KernelTable {
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the Lippmann-Schwinger system for a config file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the far-field amplitude of a solved field.
    Farfield {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = 256)]
        directions: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan |phi - phi0| or the far-field remainder along a ray.
    Scan {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_enum)]
        mode: ScanMode,
        /// Ray direction in radians.
        #[arg(long, default_value_t = 0.0)]
        direction: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full acceptance suite and write a JSON report.
    VerifyAll {
        /// Reference run configuration; defaults to the built-in reference.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
}

fn regime_tag(regime: Regime) -> &'static str {
    match regime {
        Regime::Series => "series",
        Regime::Asymptotic => "asymptotic",
    }
}

fn write_csv(path: &PathBuf, header: &str, provenance: &[String], rows: &[String]) -> relscat::Result<()> {
    let mut file = std::fs::File::create(path)?;
    for line in provenance {
        writeln!(file, "# {line}")?;
    }
    writeln!(file, "{header}")?;
    for row in rows {
        writeln!(file, "{row}")?;
    }
    Ok(())
}

fn tool_provenance() -> Vec<String> {
    vec![format!("relscat {}", env!("CARGO_PKG_VERSION"))]
}

fn run(cli: Cli) -> relscat::Result<ExitCode> {
    match cli.command {
        Command::SpecfunTable { function, min, max, points, out } => {
            if !(min > 0.0 && max > min && points >= 2) {
                return Err(Error::Config("need 0 < min < max and points >= 2".into()));
            }
            let eval: fn(f64) -> relscat::Result<(f64, Regime)> = match function {
                SpecFn::J0 => j0_real,
                SpecFn::N0 => n0_real,
                SpecFn::H0 => h0_real,
            };
            let mut rows = Vec::with_capacity(points);
            for rho in log_spaced_radii(min, max, points) {
                let (value, regime) = eval(rho)?;
                rows.push(format!("{rho:.17e},{value:.17e},{}", regime_tag(regime)));
            }
            write_csv(&out, "rho,value,regime", &tool_provenance(), &rows)?;
        }
        Command::KernelTable { lambda, sign, rmin, rmax, points, out } => {
            if !(lambda > 0.0 && rmin > 0.0 && rmax > rmin && points >= 2) {
                return Err(Error::Config("need lambda > 0, 0 < rmin < rmax, points >= 2".into()));
            }
            let sign: SignChoice = sign.into();
            let mut rows = Vec::with_capacity(points);
            for r in log_spaced_radii(rmin, rmax, points) {
                let eval = g_radial(lambda, r, sign)?;
                rows.push(format!(
                    "{r:.17e},{:.17e},{:.17e},{:.17e},{}",
                    eval.value.re,
                    eval.value.im,
                    eval.singular_part,
                    regime_tag(eval.regime)
                ));
            }
            let mut prov = tool_provenance();
            prov.push(format!("lambda {lambda}, sign {sign:?}"));
            write_csv(&out, "r,re,im,singular,regime", &prov, &rows)?;
        }
        Command::Solve { config, out } => {
            let config = RunConfig::load(&config)?;
            let field = config.solve()?;
            let doc = FieldDocument::from_field(&config, &field);
            std::fs::write(&out, serde_json::to_string_pretty(&doc).map_err(Error::from)?)?;
            eprintln!(
                "solved {} nodes, residual {:.3e}, config {}",
                field.values.len(),
                field.residual_norm,
                doc.provenance.config_hash
            );
        }
        Command::Farfield { field, directions, out } => {
            let doc: FieldDocument =
                serde_json::from_str(&std::fs::read_to_string(&field)?).map_err(Error::from)?;
            let mut prov = tool_provenance();
            prov.push(format!("config {}", doc.provenance.config_hash));
            let field = doc.into_field()?;
            let amp = far_field_samples(&field, directions);
            let rows: Vec<String> = amp
                .samples
                .iter()
                .enumerate()
                .map(|(i, &(_, f))| {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / directions as f64;
                    format!("{theta:.17e},{:.17e},{:.17e}", f.re, f.im)
                })
                .collect();
            write_csv(&out, "theta,re,im", &prov, &rows)?;
        }
        Command::Scan { field, mode, direction, out } => {
            let doc: FieldDocument =
                serde_json::from_str(&std::fs::read_to_string(&field)?).map_err(Error::from)?;
            let mut prov = tool_provenance();
            prov.push(format!("config {}", doc.provenance.config_hash));
            let window = doc.config.fit_window;
            let field = doc.into_field()?;
            let omega = [direction.cos(), direction.sin()];
            let radii = log_spaced_radii(window.rmin, window.rmax, window.n_radii);
            let scan = match mode {
                ScanMode::Diff => planewave_diff_scan(&field, omega, &radii),
                ScanMode::Remainder => remainder_scan(&field, omega, &radii),
            };
            let rows: Vec<String> = scan
                .iter()
                .map(|&(r, v)| format!("{r:.17e},{v:.17e}"))
                .collect();
            write_csv(&out, "r,value", &prov, &rows)?;
        }
        Command::VerifyAll { config, report } => {
            let config = match config {
                Some(path) => RunConfig::load(&path)?,
                None => reference_config(),
            };
            let result: AcceptanceReport = run_all(&config, |c| {
                let verdict = if c.passed { "PASS" } else if c.soft { "SOFT FAIL" } else { "FAIL" };
                println!("criterion {:2} {} ... {verdict} ({})", c.id, c.name, c.detail);
            })?;
            std::fs::write(&report, serde_json::to_string_pretty(&result).map_err(Error::from)?)?;
            if !result.all_passed() {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // keep clap usage errors in the validation exit class
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 1 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NearSingular(_) | Error::NonConvergent(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
