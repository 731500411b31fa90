//! Command-line front end. Exit codes: 0 success, 1 bad input or usage,
//! 2 internal failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glasso_knots_core::{
    correlation_matrix, knot_sequence, ordered_edges, p_values, sequential_stop, single_linkage,
    test_statistics, DataMatrix, Scenario, ScenarioKind,
};

use crate::csvio::{load_csv, write_correlation_csv};
use crate::error::{Error, Result};
use crate::{export, nulltable, simulate};

#[derive(Debug, Parser)]
#[command(
    name = "glasso-knots",
    version,
    about = "Connected-component knots of the graphical lasso path and their T_k tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV file of observations (rows) by variables (columns); `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    /// Treat the first row as column names.
    #[arg(long)]
    header: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeFormat {
    Json,
    Newick,
}

fn parse_kind(s: &str) -> std::result::Result<ScenarioKind, String> {
    ScenarioKind::parse(s).ok_or_else(|| {
        format!(
            "unknown kind {s:?}; expected global_null, disconnected_pairs, clique, tied_pairs or augmented_real"
        )
    })
}

#[derive(Debug, Subcommand)]
enum Command {
    /// T_k statistics and p-values along the knot sequence.
    Test {
        #[command(flatten)]
        io: InputArgs,
        /// Level for the first-exceedance marker.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Known number of signal steps m; adds exp(-(k-m)t) p-values.
        #[arg(long)]
        known_m: Option<usize>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Knot sequence as JSON.
    Knots {
        #[command(flatten)]
        io: InputArgs,
        /// Also write the correlation matrix to this CSV file.
        #[arg(long)]
        correlation: Option<PathBuf>,
    },
    /// Single-linkage dendrogram on absolute correlations.
    Cluster {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
    },
    /// Table of the null density, tail, Mills bounds and Chen-Stein CDF.
    Nulltable {
        #[arg(long)]
        n: usize,
        /// Dimension used by the Chen-Stein column.
        #[arg(long, default_value_t = 100)]
        p: usize,
        #[arg(long, default_value_t = 100)]
        grid_points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo replications of a scenario.
    Simulate {
        #[arg(long, value_parser = parse_kind)]
        kind: Option<ScenarioKind>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        signal_size: Option<usize>,
        #[arg(long)]
        signal_strength: Option<f64>,
        /// File of `key = value` lines; flags given on the command line win.
        /// Choosing a kind resets signal size and strength to its defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Real data for `augmented_real`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        header: bool,
        /// Directory for the result files; summary JSON goes to standard
        /// output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(output: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn load(io: &InputArgs) -> Result<DataMatrix> {
    load_csv(&io.input, io.header)
}

fn run_test(
    io: &InputArgs,
    alpha: f64,
    known_m: Option<usize>,
    format: ReportFormat,
    stdout: &mut dyn Write,
) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Usage(format!("--alpha must lie in (0, 1), got {alpha}")));
    }
    let d = load(io)?;
    let ks = knot_sequence(&ordered_edges(&correlation_matrix(&d)?));
    let report = p_values(&test_statistics(&ks)?, known_m)?;
    let stop = sequential_stop(&report, alpha);
    let text = match format {
        ReportFormat::Text => export::report_text(&report, alpha, stop),
        ReportFormat::Json => ensure_newline(export::report_json(&report, alpha, stop)?),
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            export::report_csv(&report, stop, &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
    };
    emit(io.output.as_deref(), &text, stdout)
}

#[allow(clippy::too_many_arguments)]
fn build_scenario(
    kind: Option<ScenarioKind>,
    n: Option<usize>,
    p: Option<usize>,
    reps: Option<usize>,
    seed: Option<u64>,
    signal_size: Option<usize>,
    signal_strength: Option<f64>,
    config: Option<&Path>,
    base: Option<DataMatrix>,
) -> Result<Scenario> {
    let mut s = Scenario::new(ScenarioKind::GlobalNull, 500, 100);
    if let Some(path) = config {
        let text = fs::read_to_string(path).map_err(|source| Error::Open {
            path: path.to_path_buf(),
            source,
        })?;
        simulate::apply_config(&mut s, &text)?;
    }
    if let Some(k) = kind {
        simulate::set_kind(&mut s, k);
    }
    if let Some(v) = n {
        s.n = v;
    }
    if let Some(v) = p {
        s.p = v;
    }
    if let Some(v) = reps {
        s.reps = v;
    }
    if let Some(v) = seed {
        s.seed = v;
    }
    if let Some(v) = signal_size {
        s.signal_size = v;
    }
    if let Some(v) = signal_strength {
        s.signal_strength = v;
    }
    if s.kind == ScenarioKind::AugmentedReal {
        let base = base.ok_or_else(|| {
            Error::Usage("augmented_real needs --input with the real data".into())
        })?;
        s.signal_size = base.p();
        s.base = Some(Arc::new(base));
    }
    s.validate()?;
    Ok(s)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Test {
            io,
            alpha,
            known_m,
            format,
        } => run_test(&io, alpha, known_m, format, stdout),
        Command::Knots { io, correlation } => {
            let d = load(&io)?;
            let c = correlation_matrix(&d)?;
            if let Some(path) = correlation {
                write_correlation_csv(&c, fs::File::create(path)?)?;
            }
            let ks = knot_sequence(&ordered_edges(&c));
            emit(io.output.as_deref(), &ensure_newline(export::knots_json(&ks)?), stdout)
        }
        Command::Cluster { io, format } => {
            let d = load(&io)?;
            let tree = single_linkage(&correlation_matrix(&d)?);
            let text = match format {
                TreeFormat::Json => export::dendrogram_json(&tree, d.column_names())?,
                TreeFormat::Newick => export::newick(&tree, d.column_names()),
            };
            emit(io.output.as_deref(), &ensure_newline(text), stdout)
        }
        Command::Nulltable {
            n,
            p,
            grid_points,
            output,
        } => {
            if p < 2 {
                return Err(Error::Usage(format!("--p must be at least 2, got {p}")));
            }
            let rows = nulltable::null_table(n, p, grid_points)?;
            let mut buf = Vec::new();
            nulltable::write_null_table(&rows, &mut buf)?;
            emit(output.as_deref(), &String::from_utf8(buf).expect("utf-8"), stdout)
        }
        Command::Simulate {
            kind,
            n,
            p,
            reps,
            seed,
            signal_size,
            signal_strength,
            config,
            input,
            header,
            output,
        } => {
            let base = input.as_deref().map(|path| load_csv(path, header)).transpose()?;
            let s = build_scenario(
                kind,
                n,
                p,
                reps,
                seed,
                signal_size,
                signal_strength,
                config.as_deref(),
                base,
            )?;
            let result = simulate::run(&s)?;
            match output {
                Some(dir) => simulate::write_outputs(&result, &dir),
                None => emit(None, &ensure_newline(simulate::summary_json(&result)?), stdout),
            }
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = run_cli_with(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}
