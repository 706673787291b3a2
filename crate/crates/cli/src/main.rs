use circlesplit_cli::{run, Command, Format, JobConfig};
use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Certified factorization of complex polynomials.
///
/// The input file holds one coefficient per line in ascending degree,
/// `re im` as decimal strings; `#` starts a comment. Pass `-` to read
/// from stdin.
#[derive(Parser)]
#[command(name = "circlesplit", version, disable_help_subcommand = true)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: CommandName,

    /// Input polynomial file, or `-` for stdin.
    input: String,

    /// Relative tolerance for factor/roots; log-tolerance tau for
    /// count/modmax/modmin/modk. Defaults: 1e-10, or 0.001 for tau.
    #[arg(long)]
    eps: Option<String>,

    /// Mantissa bits used to parse the input coefficients.
    #[arg(long, default_value_t = 128)]
    bits: u32,

    /// Disk radius (count only).
    #[arg(long)]
    radius: Option<String>,

    /// Modulus index (modk only).
    #[arg(long)]
    k: Option<usize>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatName::Text)]
    format: FormatName,

    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CommandName {
    Factor,
    Roots,
    Count,
    Modmax,
    Modmin,
    Modk,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatName {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    let command = match cli.command {
        CommandName::Factor => Command::Factor,
        CommandName::Roots => Command::Roots,
        CommandName::Count => Command::Count,
        CommandName::Modmax => Command::ModMax,
        CommandName::Modmin => Command::ModMin,
        CommandName::Modk => Command::ModK,
    };
    let eps = cli.eps.unwrap_or_else(|| {
        match command {
            Command::Factor | Command::Roots => "1e-10",
            _ => "0.001",
        }
        .to_string()
    });

    let config = JobConfig {
        command,
        eps,
        precision_bits: cli.bits,
        disk_radius: cli.radius,
        k_index: cli.k,
        input_path: cli.input,
        output_path: cli.output,
        format: match cli.format {
            FormatName::Text => Format::Text,
            FormatName::Json => Format::Json,
        },
    };
    ExitCode::from(run(&config) as u8)
}
