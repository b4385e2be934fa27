use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod error;
mod spec;

use error::CliError;

/// Complex Dulac maps and Dulac times of prepared saddle fields.
#[derive(Debug, Parser)]
#[command(name = "dulac", version)]
struct Cli {
    /// Field-spec JSON file.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the solver's relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads for `sweep`.
    #[arg(long, global = true, env = "DULAC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check conditions (X), (a) and (R); exit 1 if any fails.
    Check,
    /// Resonant support, cross-checked against brute force.
    Resonance {
        #[arg(long, default_value_t = 50)]
        nmax: usize,
    },
    /// Integration path from z to z_*.
    Path {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex,
    },
    /// Lift the path from z to z_* and print the dense samples as CSV.
    Lift {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex,
        /// Starting w (defaults to w_*).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        w: Option<Complex>,
    },
    /// Dulac map at z by both routes.
    Dulac {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex,
    },
    /// Dulac time at z for the spec's U.
    Time {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex,
    },
    /// Linear-model Dulac map, and model characteristics of G when given.
    Model {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex,
        /// JSON list of [n, m, re, im] coefficients.
        #[arg(long = "G")]
        g: Option<PathBuf>,
    },
    /// Deviation Δ(z0) against its bound for each z0.
    Bounds {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, required = true)]
        z0: Vec<Complex>,
        /// JSON list of [n, m, re, im] coefficients.
        #[arg(long = "G")]
        g: PathBuf,
    },
    /// Dulac map over a grid, as CSV in row-major order (Re z fastest).
    Sweep {
        /// FROM,TO,COUNT for Re z.
        #[arg(long = "re", allow_hyphen_values = true, value_parser = parse_range)]
        re_range: commands::Range,
        /// FROM,TO,COUNT for Im z.
        #[arg(long = "im", allow_hyphen_values = true, value_parser = parse_range)]
        im_range: commands::Range,
    },
}

type Complex = num_complex::Complex64;

fn parse_complex(s: &str) -> Result<Complex, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let c = match parts.as_slice() {
        [re] => Complex::new(num(re)?, 0.0),
        [re, im] => Complex::new(num(re)?, num(im)?),
        _ => return Err(format!("expected RE,IM, got {s:?}")),
    };
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(format!("non-finite value {s:?}"))
    }
}

fn parse_range(s: &str) -> Result<commands::Range, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [from, to, count] = parts.as_slice() else {
        return Err(format!("expected FROM,TO,COUNT, got {s:?}"));
    };
    let range = commands::Range {
        from: from.parse().map_err(|e| format!("{from:?}: {e}"))?,
        to: to.parse().map_err(|e| format!("{to:?}: {e}"))?,
        count: count.parse().map_err(|e| format!("{count:?}: {e}"))?,
    };
    if range.count == 0 || !range.from.is_finite() || !range.to.is_finite() {
        return Err(format!("range needs finite ends and count >= 1, got {s:?}"));
    }
    Ok(range)
}

fn run(cli: Cli) -> Result<(String, Option<CliError>), CliError> {
    let spec = cli
        .spec
        .as_deref()
        .ok_or_else(|| CliError::Usage("--spec FILE is required".into()))?;
    let problem = spec::FieldSpecFile::load(spec)?.into_problem(cli.tol)?;
    match cli.command {
        Command::Check => commands::check(&problem),
        Command::Resonance { nmax } => commands::resonance(&problem, nmax),
        Command::Path { z } => commands::path(&problem, z),
        Command::Lift { z, w } => commands::lift(&problem, z, w),
        Command::Dulac { z } => commands::dulac(&problem, z),
        Command::Time { z } => commands::time(&problem, z),
        Command::Model { z, g } => commands::model(&problem, z, g.as_deref()),
        Command::Bounds { z0, g } => commands::bounds(&problem, &z0, &g),
        Command::Sweep { re_range, im_range } => {
            commands::sweep(&problem, &re_range, &im_range, cli.threads)
        }
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.out.clone();
    let failure = match run(cli) {
        Ok((text, failure)) => match emit(out.as_deref(), &text) {
            Ok(()) => failure,
            Err(e) => Some(e),
        },
        Err(e) => Some(e),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("dulac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
