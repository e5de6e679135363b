use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parabraid_core::{error_exit_code, parse_spec_file, run_command, ArtifactSpec, Command, Error, Format, Grade, Result, Side, Signs, Which};

#[derive(Parser)]
#[command(name = "parabraid", version, about = "Exact checks for braided ternary brackets and parastatistics")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Artifact spec (JSON).
    spec: PathBuf,
    /// Worker threads; overrides PARABRAID_THREADS and the spec file's options.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Fmt>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Jsonl,
    Text,
}

#[derive(Subcommand)]
enum Sub {
    /// Run every identity suite that applies to the spec file.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate one ternary bracket; words are written as dot-joined ids (a1.a2).
    Bracket {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "left")]
        side: String,
        /// sym or alt; defaults to the spec file's variant.
        #[arg(long)]
        signs: Option<String>,
        /// Use the free-algebra bracket even when a quadratic form is present.
        #[arg(long)]
        tensor: bool,
        #[arg(num_args = 3, required = true)]
        args: Vec<String>,
    },
    /// Relation table of the quadratic-form bracket on generator triples.
    Table {
        #[command(flatten)]
        common: Common,
        /// left, right or both.
        #[arg(long, default_value = "both")]
        side: String,
        /// Append the comparison against stated three-species values.
        #[arg(long)]
        deviations: bool,
    },
    /// Braided symmetrizer on a triple tensor product.
    Schur {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 3)]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value = "left")]
        which: String,
        /// Three grades, each as comma-separated residues (1,0).
        #[arg(long, num_args = 3)]
        grades: Option<Vec<String>>,
    },
    /// Green ansatz oracle on a truncated Fock space.
    Green {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        cutoff: usize,
    },
}

impl Sub {
    fn common(&self) -> &Common {
        match self {
            Sub::Check { common }
            | Sub::Bracket { common, .. }
            | Sub::Table { common, .. }
            | Sub::Schur { common, .. }
            | Sub::Green { common, .. } => common,
        }
    }
}

fn parse_grade(spec: &ArtifactSpec, s: &str) -> Result<Grade> {
    let residues = s
        .split(',')
        .map(|r| r.trim().parse::<i64>().map_err(|_| Error::Usage(format!("bad grade `{s}`"))))
        .collect::<Result<Vec<_>>>()?;
    spec.group.grade(&residues)
}

fn build_command(sub: &Sub, spec: &ArtifactSpec) -> Result<Command> {
    Ok(match sub {
        Sub::Check { .. } => Command::Check,
        Sub::Bracket {
            side,
            signs,
            tensor,
            args,
            ..
        } => Command::Bracket {
            side: side.parse()?,
            signs: signs.as_deref().map(str::parse::<Signs>).transpose()?,
            args: [args[0].clone(), args[1].clone(), args[2].clone()],
            tensor: *tensor,
        },
        Sub::Table { side, deviations, .. } => Command::Table {
            sides: match side.as_str() {
                "both" => vec![Side::Left, Side::Right],
                s => vec![s.parse()?],
            },
            deviations: *deviations,
        },
        Sub::Schur {
            dims, which, grades, ..
        } => Command::Schur {
            dims: dims.as_ref().map(|d| [d[0], d[1], d[2]]),
            which: which.parse::<Which>()?,
            grades: match grades {
                Some(g) => Some([
                    parse_grade(spec, &g[0])?,
                    parse_grade(spec, &g[1])?,
                    parse_grade(spec, &g[2])?,
                ]),
                None => None,
            },
        },
        Sub::Green { order, cutoff, .. } => Command::Green {
            order: *order,
            cutoff: *cutoff,
        },
    })
}

fn thread_count(flag: Option<usize>, spec: &ArtifactSpec) -> Option<usize> {
    flag.or_else(|| std::env::var("PARABRAID_THREADS").ok().and_then(|v| v.parse().ok()))
        .or(spec.options.threads)
        .filter(|&n| n > 0)
}

fn run(cli: &Cli) -> std::result::Result<i32, (i32, String)> {
    let common = cli.command.common();
    let fail = |e: Error| (error_exit_code(&e), format!("error[{}]: {e}", e.code()));
    let spec = parse_spec_file(&common.spec).map_err(|e| (2, format!("error[{}]: {e}", e.code())))?;
    if let Some(n) = thread_count(common.threads, &spec) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cmd = build_command(&cli.command, &spec).map_err(|e| (2, format!("error[{}]: {e}", e.code())))?;
    let format = match common.format {
        Some(Fmt::Jsonl) => Format::Jsonl,
        Some(Fmt::Text) => Format::Text,
        None if spec.options.report.as_deref() == Some("text") => Format::Text,
        None => Format::Jsonl,
    };
    let outcome = run_command(&cmd, &spec).map_err(fail)?;
    let rendered = outcome.render(format);
    match &common.output {
        Some(path) => std::fs::write(path, rendered).map_err(|e| (2, format!("error: {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(rendered.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err((2, format!("error: stdout: {e}"))),
                _ => {}
            }
        }
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code as u8)
        }
    }
}
