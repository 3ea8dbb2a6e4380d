use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ialg_cli::parse::{self, FieldChoice, RawIndex};
use ialg_cli::report::render_text;
use ialg_cli::session::{run_text, RunOptions};
use ialg_core::Limits;

/// Exact graded computations over locally finite directed posets.
///
/// Reads a session file (or standard input), runs either the file's own
/// `run` lines or the single command given as a subcommand, and prints a
/// report.
#[derive(Parser)]
#[command(name = "ialg", version, arg_required_else_help = false)]
struct Cli {
    /// Session file; `-` or absent reads standard input.
    file: Option<PathBuf>,

    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Override the session window, e.g. `(0,0)..(4,4)`.
    #[arg(long, global = true, value_name = "LO..HI")]
    window: Option<String>,

    /// Override the field: `Q` or `F<p>`.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Length of the cut chains used by colimit probes.
    #[arg(long, global = true, default_value_t = 4, value_name = "N")]
    chain_len: usize,

    /// Ceiling on window sizes.
    #[arg(long, global = true, value_name = "N")]
    limit_window: Option<usize>,

    /// Ceiling on component dimensions.
    #[arg(long, global = true, value_name = "N")]
    limit_dim: Option<usize>,

    /// Ceiling on enumerated paths per component.
    #[arg(long, global = true, value_name = "N")]
    limit_paths: Option<usize>,

    #[command(subcommand)]
    cmd: Option<Cmd>,
}

/// One-off commands; each replaces the file's `run` lines and uses the
/// same argument syntax as a `run` line.
#[derive(Subcommand)]
enum Cmd {
    /// Component dimensions over a box, of the algebra or a module.
    Dims { args: Vec<String> },
    /// Dimensions of a tail of a module over the session window.
    Tail { args: Vec<String> },
    /// Minimal generators of a module over the session window.
    Gens { args: Vec<String> },
    /// Torsion ranks of a module over the session window.
    Torsion { args: Vec<String> },
    /// Dimension of the degree-zero hom space between two modules.
    Hom { args: Vec<String> },
    /// Torsion-section colimit sweep of a module.
    Tau { args: Vec<String> },
    /// Hom colimit sweep between deep tails of two modules.
    Qgrhom { args: Vec<String> },
    /// Saturation sweep of one component of a module.
    Saturate { args: Vec<String> },
    /// Saturated-tail decision for a module at a cut.
    Chi1 { args: Vec<String> },
    /// Endomorphism algebra of a module sequence.
    Aofseq { args: Vec<String> },
    /// Finiteness checks: star, cocompact, strong, coherence, sequence.
    Check { args: Vec<String> },
    /// List the embedded example sessions, or print one by name.
    Corpus { name: Option<String> },
}

fn main() -> ExitCode {
    // Usage errors exit 1, not clap's default 2, which is reserved for
    // refuted checks.  Help and version render to stdout and exit 0.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if let Some(Cmd::Corpus { name }) = &cli.cmd {
        return corpus_cmd(name.as_deref());
    }

    let text = read_input(&cli.file)?;
    let mut opts = RunOptions {
        chain_len: cli.chain_len,
        ..RunOptions::default()
    };
    if let Some(w) = &cli.window {
        opts.window = Some(parse_window_arg(w)?);
    }
    if let Some(f) = &cli.field {
        opts.field = Some(parse_field_arg(f)?);
    }
    let mut limits = Limits::default();
    if let Some(v) = cli.limit_window {
        limits.max_window = v;
    }
    if let Some(v) = cli.limit_dim {
        limits.max_dim = v;
    }
    if let Some(v) = cli.limit_paths {
        limits.max_paths = v;
    }
    opts.limits = limits;
    opts.session_name = cli
        .file
        .as_ref()
        .filter(|p| p.as_os_str() != "-")
        .and_then(|p| p.file_stem())
        .and_then(|s| s.to_str())
        .map(String::from);
    if let Some(cmd) = &cli.cmd {
        let line = command_text(cmd);
        let parsed = parse::parse_command_text(&line).map_err(|e| e.to_string())?;
        opts.commands = Some(vec![parsed]);
    }

    let report = run_text(&text, &opts).map_err(|e| e.to_string())?;
    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", render_text(&report));
    }
    Ok(ExitCode::from(report.exit_code()))
}

fn read_input(file: &Option<PathBuf>) -> Result<String, String> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read {}: {e}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn parse_window_arg(s: &str) -> Result<(RawIndex, RawIndex), String> {
    parse::parse_window_text(s).map_err(|e| format!("--window: {e}"))
}

fn parse_field_arg(s: &str) -> Result<FieldChoice, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Q);
    }
    let digits = t
        .strip_prefix("Fp")
        .or_else(|| t.strip_prefix("fp"))
        .or_else(|| t.strip_prefix('F'))
        .or_else(|| t.strip_prefix('f'))
        .map(str::trim);
    if let Some(d) = digits {
        if let Ok(p) = d.parse::<u64>() {
            if p >= 2 {
                return Ok(FieldChoice::Fp(p));
            }
        }
    }
    Err(format!("unrecognized field `{s}`; use `Q` or `F<p>`"))
}

fn command_text(cmd: &Cmd) -> String {
    let (verb, args) = match cmd {
        Cmd::Dims { args } => ("dims", args),
        Cmd::Tail { args } => ("tail", args),
        Cmd::Gens { args } => ("gens", args),
        Cmd::Torsion { args } => ("torsion", args),
        Cmd::Hom { args } => ("hom", args),
        Cmd::Tau { args } => ("tau", args),
        Cmd::Qgrhom { args } => ("qgrhom", args),
        Cmd::Saturate { args } => ("saturate", args),
        Cmd::Chi1 { args } => ("chi1", args),
        Cmd::Aofseq { args } => ("aofseq", args),
        Cmd::Check { args } => ("check", args),
        Cmd::Corpus { .. } => unreachable!("corpus is handled before session parsing"),
    };
    let mut line = String::from(verb);
    for a in args {
        line.push(' ');
        line.push_str(a);
    }
    line
}

fn corpus_cmd(name: Option<&str>) -> Result<ExitCode, String> {
    match name {
        None => {
            for e in ialg_cli::corpus::ENTRIES {
                println!("{}", e.name);
            }
            Ok(ExitCode::SUCCESS)
        }
        Some(n) => match ialg_cli::corpus::find(n) {
            Some(e) => {
                print!("{}", e.text);
                Ok(ExitCode::SUCCESS)
            }
            None => Err(format!("no corpus session named `{n}`")),
        },
    }
}
