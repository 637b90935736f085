use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tracelets::condition::Bound;
use tracelets::rewriting::Kind;
use tracelets_cli::{
    cmd_apply, cmd_canonical, cmd_check, cmd_compose, cmd_feta, cmd_sample, read_grammar, CliError, FetaOverrides,
    Format,
};

#[derive(Parser)]
#[command(name = "tracelets", version, about = "Compositional graph rewriting, tracelets and pathway synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeFlag {
    Dpo,
    Sqpo,
}

impl From<TypeFlag> for Kind {
    fn from(t: TypeFlag) -> Kind {
        match t {
            TypeFlag::Dpo => Kind::Dpo,
            TypeFlag::Sqpo => Kind::SqPo,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatFlag {
    Json,
    Dot,
}

impl From<FormatFlag> for Format {
    fn from(f: FormatFlag) -> Format {
        match f {
            FormatFlag::Json => Format::Json,
            FormatFlag::Dot => Format::Dot,
        }
    }
}

#[derive(clap::Args)]
struct BoundArg {
    /// Extra vertices and edges considered when model-checking conditions.
    #[arg(long, env = "TRACELETS_BOUND")]
    bound: Option<u32>,
}

impl BoundArg {
    fn get(&self) -> Option<Bound> {
        self.bound.map(|b| Bound::new(b, b))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a grammar file and report every problem.
    Check { grammar: String },
    /// Print a grammar in canonical form.
    Canonical { grammar: String },
    /// Apply a rule to a graph at one of its matches.
    Apply {
        grammar: String,
        rule: String,
        graph: String,
        /// Index into the rule's injective matches, in canonical order.
        #[arg(long = "match", default_value_t = 0)]
        match_index: usize,
        #[arg(long = "type", value_enum, default_value = "dpo")]
        kind: TypeFlag,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatFlag,
    },
    /// List every admissible composite of LATER applied after EARLIER.
    Compose {
        grammar: String,
        later: String,
        earlier: String,
        #[arg(long = "type", value_enum, default_value = "dpo")]
        kind: TypeFlag,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Run a pathway query.
    Feta {
        grammar: String,
        query: String,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long = "type", value_enum)]
        kind: Option<TypeFlag>,
        #[command(flatten)]
        bound: BoundArg,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatFlag,
    },
    /// Print a random grammar, for property-test corpora.
    Sample {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        rules: usize,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Check { grammar } => {
            let text = std::fs::read_to_string(&grammar).map_err(|source| CliError::Io { path: grammar, source })?;
            cmd_check(&text)
        }
        Command::Canonical { grammar } => Ok(cmd_canonical(&read_grammar(&grammar)?)),
        Command::Apply { grammar, rule, graph, match_index, kind, format } => {
            cmd_apply(&read_grammar(&grammar)?, &rule, &graph, match_index, kind.into(), format.into())
        }
        Command::Compose { grammar, later, earlier, kind, bound } => {
            cmd_compose(&read_grammar(&grammar)?, &later, &earlier, kind.into(), bound.get().unwrap_or_default())
        }
        Command::Feta { grammar, query, nmax, kind, bound, format } => {
            let overrides = FetaOverrides { nmax, kind: kind.map(Kind::from), bound: bound.get() };
            cmd_feta(&read_grammar(&grammar)?, &query, overrides, format.into())
        }
        Command::Sample { seed, rules } => cmd_sample(seed, rules),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Invalid(diagnostics) = &e {
                for d in diagnostics {
                    eprintln!("  {d}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
