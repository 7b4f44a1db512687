//! Command-line front end: load rule and fact files, run inference and
//! report belief intervals, plus calculator subcommands for the raw
//! operators.
//!
//! Exit codes: 0 success, 1 parse error, 2 engine error (non-convergence
//! or total conflict), 64 usage error.

mod report;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use credal::{
    conjoin, disjoin, engine, mp, mscomb, parse_interval, parse_mixed, parse_pattern, sscomb,
    Correlation, EngineConfig, EngineError, FactDecl, Interval, MpConfig, MpInterpretation,
    MpOutcome, Rule,
};

#[derive(Parser)]
#[command(name = "credal", version, about = "Rule-based inference over belief intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run inference over rule and fact files and report beliefs.
    Run(RunArgs),
    /// Evaluate a single operator on interval literals.
    Calc(CalcArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Rule file (may also contain `(fact ...)` forms).
    #[arg(long)]
    rules: PathBuf,
    /// Fact file (may also contain rules).
    #[arg(long)]
    facts: PathBuf,
    /// Only report atoms matching this pattern, e.g. "(rain)" or "(fly ?x)".
    #[arg(long)]
    query: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Firing interpretation of rule strengths.
    #[arg(long, value_enum, default_value_t = MpChoice::Conditional)]
    mp: MpChoice,
    /// Mean-value firing threshold for the conditional interpretation.
    #[arg(long)]
    theta: Option<f64>,
    /// Uncertainty firing threshold for the conditional interpretation.
    #[arg(long)]
    psi: Option<f64>,
    #[arg(long, default_value_t = 100)]
    max_rounds: usize,
    /// Keep declared facts as-is instead of pooling them with rule evidence.
    #[arg(long)]
    freeze_facts: bool,
    /// Include the per-round evaluation trace in the report.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MpChoice {
    Conditional,
    Impl1,
    Impl0,
    #[value(name = "impl-1")]
    ImplNeg1,
}

impl From<MpChoice> for MpInterpretation {
    fn from(choice: MpChoice) -> Self {
        match choice {
            MpChoice::Conditional => MpInterpretation::Conditional,
            MpChoice::Impl1 => MpInterpretation::ImplicationCorr1,
            MpChoice::Impl0 => MpInterpretation::ImplicationCorr0,
            MpChoice::ImplNeg1 => MpInterpretation::ImplicationCorrNeg1,
        }
    }
}

#[derive(Args)]
struct CalcArgs {
    #[command(subcommand)]
    op: CalcOp,
}

#[derive(Subcommand)]
enum CalcOp {
    /// Conjunction of interval literals under a correlation.
    And {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        corr: f64,
        #[arg(required = true, num_args = 1..)]
        intervals: Vec<String>,
    },
    /// Disjunction of interval literals under a correlation.
    Or {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        corr: f64,
        #[arg(required = true, num_args = 1..)]
        intervals: Vec<String>,
    },
    /// Negation of an interval literal.
    Not { interval: String },
    /// Independent-source combination, folded left to right.
    Mscomb {
        #[arg(required = true, num_args = 2..)]
        intervals: Vec<String>,
    },
    /// Same-source combination, folded left to right.
    Sscomb {
        #[arg(required = true, num_args = 2..)]
        intervals: Vec<String>,
    },
    /// Apply a firing function to a premise and a rule strength.
    Mp {
        lhs: String,
        strength: String,
        #[arg(long, value_enum, default_value_t = MpChoice::Conditional)]
        mp: MpChoice,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        psi: Option<f64>,
    },
    /// Convert a scalar certainty factor in [-1, 1] to an interval.
    Mycin {
        #[arg(allow_hyphen_values = true)]
        cf: f64,
    },
}

enum AppError {
    Usage(String),
    Parse(String),
    Engine(String),
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 64,
            AppError::Parse(_) => 1,
            AppError::Engine(_) => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Parse(m) | AppError::Engine(m) => write!(f, "{m}"),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Calc(args) => cmd_calc(args),
    };
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn load_file(path: &Path) -> Result<(Vec<Rule>, Vec<FactDecl>), AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_mixed(&text).map_err(|e| AppError::Parse(format!("{}: {e}", path.display())))
}

fn threshold(value: Option<f64>, default: f64, name: &str) -> Result<f64, AppError> {
    let value = value.unwrap_or(default);
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(AppError::Usage(format!("--{name} must be in [0, 1], got {value}")))
    }
}

fn cmd_run(args: RunArgs) -> Result<(), AppError> {
    let (mut rules, mut facts) = load_file(&args.rules)?;
    let (more_rules, more_facts) = load_file(&args.facts)?;
    for rule in more_rules {
        if rules.iter().any(|r| r.id == rule.id) {
            return Err(AppError::Parse(format!(
                "duplicate rule id `{}` across input files",
                rule.id
            )));
        }
        rules.push(rule);
    }
    for fact in more_facts {
        if facts.iter().any(|f| f.atom == fact.atom) {
            return Err(AppError::Parse(format!(
                "duplicate fact for atom {} across input files",
                fact.atom
            )));
        }
        facts.push(fact);
    }

    if args.max_rounds == 0 {
        return Err(AppError::Usage("--max-rounds must be at least 1".into()));
    }
    let cfg = EngineConfig {
        mp: MpConfig {
            interpretation: args.mp.into(),
            theta: threshold(args.theta, MpConfig::DEFAULT_THETA, "theta")?,
            psi: threshold(args.psi, MpConfig::DEFAULT_PSI, "psi")?,
        },
        max_rounds: args.max_rounds,
        freeze_facts: args.freeze_facts,
        ..EngineConfig::default()
    };
    let query = args
        .query
        .as_deref()
        .map(parse_pattern)
        .transpose()
        .map_err(|e| AppError::Usage(format!("bad --query pattern: {e}")))?;

    let outcome = engine::run(&rules, &facts, &cfg).map_err(|e| match e {
        EngineError::Combine(_) | EngineError::NonConvergence { .. } => AppError::Engine(e.to_string()),
        other => AppError::Parse(other.to_string()),
    })?;

    let report = report::Report::build(&rules, &facts, &outcome, query.as_ref());
    match args.format {
        Format::Table => print!("{}", report.to_table(args.trace)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json(args.trace)).expect("serializable report")
        ),
    }
    Ok(())
}

fn interval_arg(text: &str) -> Result<Interval, AppError> {
    parse_interval(text).map_err(|e| AppError::Usage(format!("bad interval literal `{text}`: {e}")))
}

fn interval_args(texts: &[String]) -> Result<Vec<Interval>, AppError> {
    texts.iter().map(|t| interval_arg(t)).collect()
}

fn corr_arg(value: f64) -> Result<Correlation, AppError> {
    Correlation::try_new(value).map_err(|e| AppError::Usage(e.to_string()))
}

fn cmd_calc(args: CalcArgs) -> Result<(), AppError> {
    match args.op {
        CalcOp::And { corr, intervals } => {
            let items = interval_args(&intervals)?;
            println!("{}", conjoin(&items, corr_arg(corr)?));
        }
        CalcOp::Or { corr, intervals } => {
            let items = interval_args(&intervals)?;
            println!("{}", disjoin(&items, corr_arg(corr)?));
        }
        CalcOp::Not { interval } => {
            println!("{}", interval_arg(&interval)?.negate());
        }
        CalcOp::Mscomb { intervals } => {
            let items = interval_args(&intervals)?;
            let mut acc = items[0];
            for item in &items[1..] {
                acc = mscomb(acc, *item).map_err(|e| AppError::Engine(e.to_string()))?;
            }
            println!("{acc}");
        }
        CalcOp::Sscomb { intervals } => {
            let items = interval_args(&intervals)?;
            let mut acc = items[0];
            for item in &items[1..] {
                acc = sscomb(acc, *item);
            }
            println!("{acc}");
        }
        CalcOp::Mp { lhs, strength, mp: choice, theta, psi } => {
            let cfg = MpConfig {
                interpretation: choice.into(),
                theta: threshold(theta, MpConfig::DEFAULT_THETA, "theta")?,
                psi: threshold(psi, MpConfig::DEFAULT_PSI, "psi")?,
            };
            match mp::apply(&cfg, interval_arg(&lhs)?, interval_arg(&strength)?) {
                MpOutcome::Fired(interval) => println!("fired {interval}"),
                MpOutcome::NotFired(reason) => println!("not fired: {reason}"),
            }
        }
        CalcOp::Mycin { cf } => {
            let interval = Interval::from_mycin_cf(cf).map_err(|e| AppError::Usage(e.to_string()))?;
            println!("{interval}");
        }
    }
    Ok(())
}
