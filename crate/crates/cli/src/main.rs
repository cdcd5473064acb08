use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use helicity_core::suite::{self, Format, NegativeControl, Report, Section, SuiteConfig};

/// Numerical verification of Dirac spinors in the helicity basis and of a
/// helicity-flipping parity operator in Fock space.
#[derive(Debug, Parser)]
#[command(name = "helicity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Particle mass.
    #[arg(long, global = true, default_value_t = 1.0, value_parser = positive, allow_hyphen_values = true)]
    mass: f64,

    /// Number of random momentum samples.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,

    /// Seed of the momentum sampler.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Explicit samples "p,theta,phi[;p,theta,phi...]" replacing the random ones.
    #[arg(long, global = true, value_parser = parse_triples, allow_hyphen_values = true)]
    momenta: Option<Triples>,

    /// Override every check tolerance (default: per-check pinned values).
    #[arg(long, global = true, value_parser = positive, allow_hyphen_values = true)]
    tol: Option<f64>,

    /// Fock grid momenta "x,y,z[;x,y,z...]"; negatives are added.
    #[arg(long, global = true, value_parser = parse_triples, allow_hyphen_values = true)]
    grid: Option<Triples>,

    /// Parity dressing angles, e.g. "0,pi/2".
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_angle, allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Include per-check timings in the report.
    #[arg(long, global = true)]
    timings: bool,

    /// Skip the two-pair (dimension 65536) Fock check.
    #[arg(long, global = true)]
    no_smoke: bool,

    #[arg(long, global = true, hide = true, value_enum)]
    negative_control: Option<ControlArg>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every check.
    VerifyAll,
    /// Gamma algebra, spinor bases, commutators and discrete symmetries.
    Spinor,
    /// Change of basis between standard and helicity spinors.
    Transform,
    /// Fock-space parity, charge conjugation and field operators.
    Fock,
    /// Re-render a saved JSON report.
    Report { path: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ControlArg {
    Gamma,
    ParityMatrix,
    UnpairedEnergy,
    Dressing,
}

type Triples = Vec<[f64; 3]>;

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be positive and finite, got {x}"))
    }
}

fn parse_triples(s: &str) -> Result<Triples, String> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v = t
                .split(',')
                .map(|x| parse_angle(x.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            <[f64; 3]>::try_from(v)
                .map_err(|v| format!("expected three components, got {}", v.len()))
        })
        .collect()
}

/// A float, or a multiple/fraction of pi such as "pi", "pi/2", "3pi/4".
fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.trim().parse::<f64>().map_err(|e| format!("{s}: {e}"))?),
        None => (s, 1.0),
    };
    let coef = match num.trim().strip_suffix("pi").map(str::trim) {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(c) => c
            .trim_end_matches('*')
            .parse::<f64>()
            .map_err(|e| format!("{s}: {e}"))?,
        None => return Err(format!("not a number: {s}")),
    };
    Ok(coef * std::f64::consts::PI / den)
}

impl Cli {
    fn config(&self, sections: &[Section]) -> SuiteConfig {
        let base = SuiteConfig::default();
        SuiteConfig {
            mass: self.mass,
            samples: self.samples,
            seed: self.seed,
            momenta: self.momenta.clone(),
            tol: self.tol,
            grid: self.grid.clone().unwrap_or(base.grid),
            alphas: self.alpha.clone().unwrap_or(base.alphas),
            format: self.format(),
            sections: sections.to_vec(),
            smoke: !self.no_smoke,
            negative_control: self.negative_control.map(|c| match c {
                ControlArg::Gamma => NegativeControl::Gamma,
                ControlArg::ParityMatrix => NegativeControl::ParityMatrix,
                ControlArg::UnpairedEnergy => NegativeControl::UnpairedEnergy,
                ControlArg::Dressing => NegativeControl::Dressing,
            }),
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> ExitCode {
    let text = suite::render_report(report, cli.format(), cli.timings);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sections: &[Section] = match &cli.command {
        Command::VerifyAll => &Section::ALL,
        Command::Spinor => &[Section::Algebra, Section::Spinor, Section::Discrete],
        Command::Transform => &[Section::Transform],
        Command::Fock => &[Section::Fock],
        Command::Report { path } => {
            let report = std::fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|s| Report::from_json(&s).map_err(|e| e.to_string()));
            return match report {
                Ok(r) => emit(&cli, &r),
                Err(e) => {
                    eprintln!("error: cannot read report {}: {e}", path.display());
                    ExitCode::from(2)
                }
            };
        }
    };
    let cfg = cli.config(sections);
    let report = suite::run_suite(&cfg);
    emit(&cli, &report)
}
