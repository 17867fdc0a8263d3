//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 infeasible, 3 unsupported
//! open case, 4 experimental failure, 5 I/O, parse or usage error. `search`
//! exits 2 when no marking exists and 3 when its budget runs out.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::constructions::{construct, Options};
use crate::error::Error;
use crate::feasibility::{feasibility, feasible_table, Params};
use crate::grid::{GroupKind, Point, DEFAULT_CELL_CAP};
use crate::oracle::{search_with_stats, SearchLimits, SearchOutcome};
use crate::verify::{hat_guess, hat_play, verify_with_cap};
pub use format::{parse, parse_with_cap, render, MarkingFile, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_EXPERIMENTAL: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "linemark",
    version,
    about = "Markings of coordinate lines in [k]^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Instance {
    #[arg(short = 'k')]
    k: u32,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'a')]
    a: usize,
    #[arg(short = 'b')]
    b: usize,
}

impl Instance {
    fn params(&self) -> crate::error::Result<Params> {
        Params::new(self.k, self.n, self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParityGroup {
    Cyclic,
    Product,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the feasibility witness (s, t).
    Feasible {
        #[command(flatten)]
        inst: Instance,
    },
    /// Build, verify and write a marking.
    Construct {
        #[command(flatten)]
        inst: Instance,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        #[arg(long = "cell-cap", default_value_t = DEFAULT_CELL_CAP)]
        cell_cap: u128,
        /// Parity group of the prime-power construction.
        #[arg(long = "parity-group", value_enum, default_value_t = ParityGroup::Product)]
        parity_group: ParityGroup,
    },
    /// Verify a marking file.
    Verify {
        #[arg(short = 'i', long = "in")]
        input: PathBuf,
        #[arg(short = 'a')]
        a: Option<usize>,
        #[arg(short = 'b')]
        b: Option<usize>,
        #[arg(long = "cell-cap", default_value_t = DEFAULT_CELL_CAP)]
        cell_cap: u128,
    },
    /// Feasibility and construction route of every pair a < b.
    Table {
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Exhaustive search for small instances.
    Search {
        #[command(flatten)]
        inst: Instance,
        #[arg(long = "max-nodes", default_value_t = SearchLimits::default().max_nodes)]
        max_nodes: u64,
        #[arg(long = "max-seconds", default_value_t = SearchLimits::default().max_seconds)]
        max_seconds: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Guesses of every player for a hat assignment.
    Hat {
        #[arg(short = 'i', long = "in")]
        input: PathBuf,
        /// Hat colors, one per player.
        #[arg(required = true, num_args = 1.., value_delimiter = ',')]
        assignment: Vec<u32>,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Feasible { inst } => cmd_feasible(inst, out),
        Command::Construct {
            inst,
            out: path,
            cell_cap,
            parity_group,
        } => cmd_construct(inst, &path, cell_cap, parity_group, out),
        Command::Verify {
            input,
            a,
            b,
            cell_cap,
        } => cmd_verify(&input, a, b, cell_cap, out),
        Command::Table { k, n, format } => cmd_table(k, n, format, out),
        Command::Search {
            inst,
            max_nodes,
            max_seconds,
            out: path,
        } => cmd_search(inst, max_nodes, max_seconds, path.as_deref(), out),
        Command::Hat { input, assignment } => cmd_hat(&input, &assignment, out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Infeasible => EXIT_INFEASIBLE,
            Error::UnsupportedOpenCase { .. } => EXIT_UNSUPPORTED,
            Error::ExperimentalFailure { .. } => EXIT_EXPERIMENTAL,
            Error::Internal(_) | Error::NotCertified { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_IO,
        };
        let message = match &e {
            Error::ExperimentalFailure { report, .. } => format!("{e}\n{}", report.render()),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn read_marking(path: &Path, cap: u128) -> Result<MarkingFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_with_cap(&text, cap).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })
}

fn write_marking(path: &Path, file: &MarkingFile) -> Result<(), Failure> {
    std::fs::write(path, render(file)).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_feasible(inst: Instance, out: &mut dyn Write) -> CmdResult {
    let p = inst.params()?;
    match feasibility(&p) {
        Ok(w) => {
            writeln!(out, "feasible=true\ns={}\nt={}", w.s, w.t)?;
            Ok(EXIT_OK)
        }
        Err(Error::Infeasible) => {
            writeln!(out, "feasible=false")?;
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_construct(
    inst: Instance,
    path: &Path,
    cell_cap: u128,
    group: ParityGroup,
    out: &mut dyn Write,
) -> CmdResult {
    let p = inst.params()?;
    let opts = Options {
        cell_cap,
        appendix_group: match group {
            ParityGroup::Cyclic => GroupKind::Cyclic,
            ParityGroup::Product => GroupKind::Product,
        },
        ..Options::default()
    };
    let c = construct(&p, &opts)?;
    write_marking(
        path,
        &MarkingFile {
            a: p.a,
            b: p.b,
            marking: c.marking,
        },
    )?;
    writeln!(out, "plan={}", c.plan)?;
    out.write_all(c.report.render().as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    path: &Path,
    a: Option<usize>,
    b: Option<usize>,
    cell_cap: u128,
    out: &mut dyn Write,
) -> CmdResult {
    let file = read_marking(path, cell_cap)?;
    let m = &file.marking;
    let p = Params::new(m.k(), m.n(), a.unwrap_or(file.a), b.unwrap_or(file.b))?;
    let report = verify_with_cap(m, &p, cell_cap)?;
    out.write_all(report.render().as_bytes())?;
    Ok(if report.ok {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_table(k: u32, n: usize, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    let rows = feasible_table(k, n)?;
    if let TableFormat::Tsv = format {
        writeln!(out, "a\tb\tfeasible\ts\tt\troute")?;
    }
    for r in rows {
        let (feasible, s, t, route) = match (r.witness, r.route) {
            (Some(w), Some(route)) => ("yes", w.s.to_string(), w.t.to_string(), route.to_string()),
            _ => ("no", "-".into(), "-".into(), "-".into()),
        };
        match format {
            TableFormat::Text => writeln!(
                out,
                "a={} b={} feasible={feasible} s={s} t={t} route={route}",
                r.a, r.b
            )?,
            TableFormat::Tsv => writeln!(out, "{}\t{}\t{feasible}\t{s}\t{t}\t{route}", r.a, r.b)?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_search(
    inst: Instance,
    max_nodes: u64,
    max_seconds: f64,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let p = inst.params()?;
    if max_nodes == 0 || max_seconds.is_nan() || max_seconds <= 0.0 {
        return Err(Failure {
            code: EXIT_IO,
            message: "search budgets must be positive".into(),
        });
    }
    let lim = SearchLimits {
        max_nodes,
        max_seconds,
    };
    let (outcome, stats) = search_with_stats(&p, &lim)?;
    let code = match outcome {
        SearchOutcome::Found(marking) => {
            writeln!(out, "outcome=found")?;
            let report = verify_with_cap(&marking, &p, DEFAULT_CELL_CAP)?;
            if let Some(path) = path {
                write_marking(
                    path,
                    &MarkingFile {
                        a: p.a,
                        b: p.b,
                        marking,
                    },
                )?;
            }
            out.write_all(report.render().as_bytes())?;
            if report.ok {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        SearchOutcome::NoneExists => {
            writeln!(out, "outcome=none-exists")?;
            EXIT_INFEASIBLE
        }
        SearchOutcome::Exhausted => {
            writeln!(out, "outcome=exhausted")?;
            EXIT_UNSUPPORTED
        }
    };
    writeln!(out, "nodes={}", stats.nodes)?;
    Ok(code)
}

fn cmd_hat(path: &Path, assignment: &[u32], out: &mut dyn Write) -> CmdResult {
    let file = read_marking(path, DEFAULT_CELL_CAP)?;
    let m = &file.marking;
    let point = Point::new(assignment.to_vec());
    m.shape().check_point(&point)?;
    for player in 0..m.n() {
        let mut others = assignment.to_vec();
        let own = others.remove(player);
        let guess = hat_guess(m, player, &others)?;
        writeln!(
            out,
            "player={player} hat={own} guess={guess} correct={}",
            guess == own
        )?;
    }
    writeln!(out, "correct={}", hat_play(m, &point)?)?;
    Ok(EXIT_OK)
}
