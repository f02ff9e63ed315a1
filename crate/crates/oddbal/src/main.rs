use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oddbal::grids::{
    default_decomposition_grid, default_law_grid, read_decomposition_grid, read_law_grid,
};
use oddbal::io::{
    write_csv, write_json, write_json_lines, write_rank_table, write_records, Format, IoError,
    SequenceRecord,
};
use oddbal::runs::{
    roots_of, run_asym, run_decomposition, run_equidistribution, run_lemma_ratios,
    run_logconcavity, run_transforms, Failure, Reading, RunError, Sequence, T1Sign,
    DECOMPOSITION_THRESHOLD,
};
use oddbal_core::asymptotics::LemmaForm;
use oddbal_core::enumerator::enumerate_sequences;
use oddbal_core::gf::expand_v_rank;

/// Exact counts, modular-function checks and asymptotic reports for
/// odd-balanced unimodal sequences.
///
/// Exit status: 0 when every check passes, 1 when a check misses its
/// threshold (one JSON failure record per line on stderr) or a computation
/// fails, 2 on invalid usage. Set ODDBAL_THREADS to fix the worker count.
#[derive(Parser)]
#[command(name = "oddbal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the table of v(m, n) as `n,m,count` rows.
    Expand {
        #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[command(flatten)]
        out: Output,
    },
    /// List every sequence of size 2n + 2 as JSON lines.
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Residuals of the theta, eta, Appell and Mordell transformation laws.
    ///
    /// The default grid has 20 points for each theta and eta law, 10 for the
    /// Appell and Mordell inversions, plus h(0;0) = 1. A grid file has
    /// columns law,z_re,z_im,tau_re,tau_im[,u_re,u_im,v_re,v_im].
    VerifyTransforms {
        #[arg(long, default_value = "default")]
        grid: String,
        /// Replaces the per-law bounds (1e-9 theta/eta, 1e-8 Appell/Mordell).
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Residuals of the decomposition of (1 + 1/w) q V into T1, T and T2.
    ///
    /// The default grid is z in {0.1, 0.2, 1/3, 0.45, 0.6, 0.85} against
    /// tau in {0.9i, 0.5 + 0.8i}. A grid file has columns
    /// z_re,z_im,tau_re,tau_im,order.
    VerifyDecomposition {
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = DECOMPOSITION_THRESHOLD)]
        threshold: f64,
        /// Sign of T1 used for the pass/fail decision; both residuals are
        /// always written.
        #[arg(long, value_enum, default_value = "plus")]
        t1_sign: T1Sign,
        #[command(flatten)]
        out: Output,
    },
    /// Exact counts against their asymptotic main term.
    AsymReport {
        #[arg(long, default_value_t = 0)]
        a: i64,
        #[arg(long, default_value_t = 1)]
        c: i64,
        #[arg(long, value_delimiter = ',', default_value = "100,400,1600,3600")]
        checkpoints: Vec<usize>,
        #[arg(long, value_enum, default_value = "v")]
        sequence: Sequence,
        /// Accept even c; the main-term columns stay empty.
        #[arg(long)]
        allow_even: bool,
        /// Significant digits of the decimal columns (at least 30).
        #[arg(long, default_value_t = 50)]
        digits: usize,
        #[command(flatten)]
        out: Output,
    },
    /// max_a |c v(a,c;n) / v(n) - 1| per modulus and checkpoint.
    Equidistribution {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        moduli: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_value = "150,600")]
        checkpoints: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Both readings of the log-concavity inequality and the overpartition
    /// upper bound for 1 <= n <= n_max.
    LogconcavityScan {
        #[arg(long, default_value_t = 0)]
        a: i64,
        #[arg(long, default_value_t = 1)]
        c: i64,
        #[arg(long, default_value_t = 600)]
        n_max: usize,
        /// Reading that decides the exit status.
        #[arg(long, value_enum, default_value = "square")]
        reading: Reading,
        #[command(flatten)]
        out: Output,
    },
    /// V(e^{2 pi i z}; e^{-2 pi t}) against its main term as t shrinks.
    LemmaRatios {
        /// Use z = j/c for j = 1..c-1.
        #[arg(long, conflicts_with = "z")]
        c: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        t: Vec<f64>,
        #[arg(long, value_enum, default_value = "stated")]
        form: FormArg,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormArg {
    Stated,
    Dominant,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Run(RunError),
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(msg) => CliError::Usage(msg),
            e => CliError::Run(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open_grid(name: &str) -> Result<Option<File>, CliError> {
    if name == "default" {
        return Ok(None);
    }
    File::open(name)
        .map(Some)
        .map_err(|e| CliError::Usage(format!("cannot open grid file {name}: {e}")))
}

fn run(cli: Cli) -> Result<Vec<Failure>, CliError> {
    match cli.command {
        Command::Expand { n_max, out } => {
            let table = expand_v_rank(n_max as usize);
            write_rank_table(&table, out.format, sink(&out.output)?)?;
            Ok(Vec::new())
        }
        Command::Enumerate { n, output } => {
            let records: Vec<SequenceRecord> = enumerate_sequences(n)
                .iter()
                .map(SequenceRecord::from)
                .collect();
            write_json_lines(&records, sink(&output)?)?;
            Ok(Vec::new())
        }
        Command::VerifyTransforms {
            grid,
            threshold,
            out,
        } => {
            let (cases, origin) = match open_grid(&grid)? {
                None => (default_law_grid(), true),
                Some(f) => (read_law_grid(f)?, false),
            };
            let outcome = run_transforms(&cases, threshold, origin);
            write_records(&outcome.rows, out.format, sink(&out.output)?)?;
            Ok(outcome.failures)
        }
        Command::VerifyDecomposition {
            grid,
            threshold,
            t1_sign,
            out,
        } => {
            let points = match open_grid(&grid)? {
                None => default_decomposition_grid(),
                Some(f) => read_decomposition_grid(f)?,
            };
            let outcome = run_decomposition(&points, threshold, t1_sign);
            write_records(&outcome.rows, out.format, sink(&out.output)?)?;
            Ok(outcome.failures)
        }
        Command::AsymReport {
            a,
            c,
            checkpoints,
            sequence,
            allow_even,
            digits,
            out,
        } => {
            let outcome = run_asym(sequence, a, c, &checkpoints, allow_even, digits)?;
            write_records(&outcome.rows, out.format, sink(&out.output)?)?;
            Ok(outcome.failures)
        }
        Command::Equidistribution {
            moduli,
            checkpoints,
            out,
        } => {
            let outcome = run_equidistribution(&moduli, &checkpoints)?;
            write_records(&outcome.rows, out.format, sink(&out.output)?)?;
            Ok(outcome.failures)
        }
        Command::LogconcavityScan {
            a,
            c,
            n_max,
            reading,
            out,
        } => {
            let (summary, failures) = run_logconcavity(a, c, n_max, reading)?;
            let w = sink(&out.output)?;
            match out.format {
                Format::Csv => write_csv(&summary.rows, w)?,
                Format::Json => write_json(&summary, w)?,
            }
            Ok(failures)
        }
        Command::LemmaRatios { c, z, t, form, out } => {
            let zs = match c {
                Some(c) if c >= 2 => roots_of(c),
                Some(c) => return Err(CliError::Usage(format!("c must be at least 2, got {c}"))),
                None if z.is_empty() => return Err(CliError::Usage("give --c or --z".into())),
                None => z,
            };
            if t.iter().any(|&t| !(t > 0.0)) {
                return Err(CliError::Usage("t values must be positive".into()));
            }
            let form = match form {
                FormArg::Stated => LemmaForm::Stated,
                FormArg::Dominant => LemmaForm::Dominant,
            };
            let outcome = run_lemma_ratios(&zs, &t, form);
            write_records(&outcome.rows, out.format, sink(&out.output)?)?;
            Ok(outcome.failures)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    oddbal::configure_threads();
    match run(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            let mut err = io::stderr().lock();
            for f in &failures {
                let _ = serde_json::to_writer(&mut err, f);
                let _ = writeln!(err);
            }
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
