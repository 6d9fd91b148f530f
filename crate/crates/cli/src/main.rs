use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cu_lab::{demo_document, parse_document, run, CliError, Document, Options, Report};

#[derive(Parser)]
#[command(
    name = "cu-lab",
    version,
    about = "Exact computations in abstract Cuntz semigroups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the queries of a JSON document (`-` reads stdin).
    Run {
        file: String,
        /// Only run queries of this command.
        #[arg(long)]
        command: Option<String>,
        /// Seed for sampling queries.
        #[arg(long)]
        seed: Option<u64>,
        /// Denominator bound for generated grids.
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        /// Include per-query timings (the report is then no longer byte-stable).
        #[arg(long)]
        timing: bool,
    },
    /// Run a built-in fixture.
    Demo {
        /// One of cu-of-Z, car-algebra, toeplitz-wc, sphere-o6plus, ellinfty-product.
        name: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
}

fn read(file: &str) -> Result<String, CliError> {
    let mut s = String::new();
    let r = if file == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(file)
    };
    r.map_err(|e| CliError::Io(format!("{file}: {e}")))
}

fn execute(cmd: Cmd) -> Result<(Report, Format), CliError> {
    match cmd {
        Cmd::Run {
            file,
            command,
            seed,
            bound,
            format,
            timing,
        } => {
            let doc: Document = parse_document(&read(&file)?)?;
            Ok((
                run(
                    &doc,
                    &Options {
                        command,
                        seed,
                        bound,
                        timing,
                    },
                )?,
                format,
            ))
        }
        Cmd::Demo { name, format } => {
            if !cu_lab::demos::DEMOS.contains(&name.as_str()) {
                return Err(CliError::UnknownFixture(name));
            }
            Ok((run(&demo_document(&name), &Options::default())?, format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok((report, format)) => {
            match format {
                Format::Plain => print!("{}", report.plain()),
                Format::Structured => print!("{}", report.structured()),
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("cu-lab: {e}");
            ExitCode::from(2)
        }
    }
}
