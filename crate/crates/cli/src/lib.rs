//! Command-line front end for `cusp-core`.
//!
//! [`run`] parses arguments, performs one computation and returns the process
//! exit code: 0 on success (whatever the verdict), 2 for invalid input and 1
//! for internal failures. Diagnostics go to stderr.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cusp_core::cycle::cycle_of;
use cusp_core::lattice::CoverRecord;
use cusp_core::verify::{admissible_traces, candidate_matrices, verify};
use cusp_core::{Certificate, Cycle, EnumerateOptions, Error, IntMatrix2};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "cusp",
    version,
    about = "Galois covers of cusp singularity links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical cycle and dual cycle of a cusp.
    Cycle(Input),
    /// Monodromy `M(b_k)···M(b_1)` of the cusp's canonical cycle.
    Monodromy(Input),
    /// Dual cycle and its length.
    Dual(Input),
    /// Enumerate Galois covers of base degree up to `--max-degree`.
    Covers(EnumArgs),
    /// Decide whether the cusp has a Galois cover by a complete intersection.
    Verify(EnumArgs),
    /// Traces x with x, x-2, (x+2)/3 and (x+1)/2 all prime.
    SearchTraces {
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
    },
    /// Matrices with a > b > -d >= 0 of the given trace.
    SearchMatrix {
        #[arg(long)]
        trace: u64,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
}

/// A cusp, given either as a monodromy matrix or as a cycle.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Monodromy entries in row-major order: a b c d.
    #[arg(
        short = 'm',
        long,
        num_args = 4,
        value_names = ["A", "B", "C", "D"],
        allow_negative_numbers = true
    )]
    pub matrix: Option<Vec<BigInt>>,

    /// Cycle entries, comma separated, e.g. 8,2,4,3,12.
    #[arg(short = 'c', long)]
    pub cycle: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EnumArgs {
    #[command(flatten)]
    pub input: Input,

    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub max_degree: u32,

    /// Only enumerate one fiber from each dual pair.
    #[arg(long)]
    pub half: bool,

    #[arg(long)]
    pub parallel: bool,
}

impl Input {
    /// The monodromy, validated as a cusp monodromy.
    pub fn monodromy(&self) -> Result<IntMatrix2, Error> {
        let a = match (&self.matrix, &self.cycle) {
            (Some(m), _) => IntMatrix2::new(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()),
            (None, Some(c)) => c.parse::<Cycle>()?.monodromy(),
            (None, None) => unreachable!("clap requires one input"),
        };
        a.check_hyperbolic()?;
        Ok(a)
    }

    pub fn cycle(&self) -> Result<Cycle, Error> {
        match &self.cycle {
            Some(c) => c.parse(),
            None => cycle_of(&self.monodromy()?),
        }
    }
}

impl EnumArgs {
    fn options(&self) -> EnumerateOptions {
        EnumerateOptions {
            max_degree: self.max_degree,
            half: self.half,
            parallel: self.parallel,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_input_error() { 2 } else { 1 };
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out),
        None => std::io::stdout().lock().write_all(out.as_bytes()),
    };
    if let Err(e) = written {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return 0;
        }
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    0
}

/// Runs the command and renders its output.
pub fn execute(cli: &Cli) -> Result<String, Error> {
    let json = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Cycle(input) => {
            let c = input.cycle()?;
            let d = c.dual()?;
            if json {
                to_json(&json!({ "cycle": c.entries(), "dual": d.entries() }))
            } else {
                format!("cycle: {c}  dual: {d}\n")
            }
        }
        Command::Monodromy(input) => {
            let m = input.cycle()?.monodromy();
            if json {
                to_json(&json!({ "matrix": matrix_json(&m), "trace": m.trace().to_string() }))
            } else {
                format!("monodromy: {m}  trace: {}\n", m.trace())
            }
        }
        Command::Dual(input) => {
            let c = input.cycle()?;
            let d = c.dual()?;
            if json {
                to_json(&json!({ "dual": d.entries(), "length": d.len() }))
            } else {
                format!("dual: {d}  length: {}\n", d.len())
            }
        }
        Command::Covers(args) => {
            let a = args.input.monodromy()?;
            let covers = cusp_core::lattice::enumerate_covers(&a, &args.options())?;
            if json {
                to_json(&Value::Array(covers.iter().map(cover_json).collect()))
            } else {
                cover_table(&covers)
            }
        }
        Command::Verify(args) => {
            let cert = verify(&args.input.monodromy()?, &args.options())?;
            if json {
                to_json(&certificate_json(&cert))
            } else {
                certificate_text(&cert)
            }
        }
        Command::SearchTraces { limit } => {
            let traces = admissible_traces(*limit);
            if json {
                to_json(&json!(traces))
            } else {
                traces.iter().map(|t| format!("{t}\n")).collect()
            }
        }
        Command::SearchMatrix { trace, limit } => {
            if *trace < 3 {
                return Err(Error::NotHyperbolic(BigInt::from(*trace)));
            }
            let found = candidate_matrices(*trace, *limit)
                .into_iter()
                .map(|m| cycle_of(&m).map(|c| (m, c)))
                .collect::<Result<Vec<_>, _>>()?;
            if json {
                let rows = found
                    .iter()
                    .map(|(m, c)| {
                        json!({
                            "matrix": matrix_json(m),
                            "cycle": c.entries(),
                            "dual_len": c.dual_length().to_string(),
                        })
                    })
                    .collect();
                to_json(&Value::Array(rows))
            } else {
                let mut s = String::new();
                for (m, c) in &found {
                    let _ = writeln!(s, "{m}  cycle: {c}  dual_len: {}", c.dual_length());
                }
                s
            }
        }
    };
    Ok(out)
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn matrix_json(m: &IntMatrix2) -> Value {
    json!(m.entries().map(|e| e.to_string()))
}

fn cover_json(r: &CoverRecord) -> Value {
    json!({
        "degree": r.base_degree,
        "fiber_index": r.fiber_index().to_string(),
        "fiber_hnf": [r.fiber.x().to_string(), r.fiber.y().to_string(), r.fiber.z().to_string()],
        "induced": matrix_json(&r.induced),
        "cycle_len": r.cycle.len(),
        "dual_len": r.dual.len(),
        "cycle": r.cycle.entries(),
        "dual": r.dual.entries(),
    })
}

pub fn certificate_json(cert: &Certificate) -> Value {
    json!({
        "input": { "matrix": matrix_json(&cert.monodromy) },
        "trace": cert.trace.to_string(),
        "cycle": cert.cycle.entries(),
        "dual_cycle": cert.dual_cycle.entries(),
        "covers": cert.covers.iter().map(cover_json).collect::<Vec<_>>(),
        "verdict": cert.verdict.as_str(),
        "witness": cert.witness,
    })
}

fn cover_table(covers: &[CoverRecord]) -> String {
    let header = [
        "#",
        "degree",
        "index",
        "hnf",
        "trace",
        "cycle_len",
        "dual_len",
    ];
    let rows: Vec<[String; 7]> = covers
        .iter()
        .enumerate()
        .map(|(i, r)| {
            [
                i.to_string(),
                r.base_degree.to_string(),
                r.fiber_index().to_string(),
                r.fiber.to_string(),
                r.cover_monodromy.trace().to_string(),
                r.cycle.len().to_string(),
                r.dual.len().to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut s = String::new();
    let mut line = |cells: &[&str]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i == 3 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(&header);
    for row in &rows {
        line(&row.each_ref().map(String::as_str));
    }
    s
}

fn certificate_text(cert: &Certificate) -> String {
    let mut s = format!(
        "monodromy: {}  trace: {}\ncycle: {}  dual: {} (length {})\n\n",
        cert.monodromy,
        cert.trace,
        cert.cycle,
        cert.dual_cycle,
        cert.dual_cycle.len()
    );
    s.push_str(&cover_table(&cert.covers));
    s.push('\n');
    match cert.witness_record() {
        Some(w) => {
            let _ = writeln!(
                s,
                "verdict: {}  witness: #{} degree {} index {} cycle {} dual {}",
                cert.verdict,
                cert.witness.unwrap_or_default(),
                w.base_degree,
                w.fiber_index(),
                w.cycle,
                w.dual
            );
        }
        None => {
            let _ = writeln!(s, "verdict: {}", cert.verdict);
        }
    }
    s
}
