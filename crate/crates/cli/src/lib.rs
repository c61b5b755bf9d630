//! The `eqlab` command line: `train`, `eval`, `arena` and `curves`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.

pub mod commands;
pub mod config;
pub mod csv;
pub mod log;
pub mod manifest;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use config::{parse_config, ConfigError, KEYS, SEED_ENV};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

fn kebab(key: &str) -> String {
    key.replace('_', "-")
}

fn game_arg() -> Arg {
    Arg::new("game").long("game").value_name("GAME").help("expected game; a mismatching checkpoint is an error")
}

pub fn command() -> Command {
    let mut train = Command::new("train")
        .about("Self-play training with periodic exact exploitability evaluation")
        .arg(Arg::new("config").long("config").value_name("FILE").help("key=value config file"))
        .arg(
            Arg::new("seeds")
                .long("seeds")
                .value_name("K")
                .value_parser(value_parser!(u64).range(1..))
                .default_value("1")
                .help("run K seeds (seed, seed+1, ...) in parallel"),
        );
    for (key, help) in KEYS {
        train = train.arg(Arg::new(*key).long(kebab(key)).value_name("VALUE").help(*help));
    }
    Command::new("eqlab")
        .about("Fictitious self-play with regret matching on small extensive-form games")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(train)
        .subcommand(
            Command::new("eval")
                .about("Exploitability of a checkpoint's average policy")
                .arg(Arg::new("checkpoint").required(true).value_name("DIR"))
                .arg(game_arg())
                .arg(Arg::new("out").long("out").value_name("CSV").help("append a curve-format row (default DIR/eval.csv)")),
        )
        .subcommand(
            Command::new("arena")
                .about("Head-to-head matches; A takes the first seat (player 1)")
                .arg(Arg::new("a").required(true).value_name("CHECKPOINT_A"))
                .arg(Arg::new("b").required(true).value_name("CHECKPOINT_B"))
                .arg(game_arg())
                .arg(
                    Arg::new("episodes")
                        .long("episodes")
                        .value_parser(value_parser!(u64).range(1..))
                        .default_value("100000"),
                )
                .arg(Arg::new("seed").long("seed").value_parser(value_parser!(u64)).help("default: EQLAB_SEED, then 0"))
                .arg(Arg::new("label-a").long("label-a").value_name("NAME"))
                .arg(Arg::new("label-b").long("label-b").value_name("NAME"))
                .arg(Arg::new("out").long("out").value_name("CSV").default_value("arena.csv")),
        )
        .subcommand(
            Command::new("curves")
                .about("Merge per-seed curve CSVs into mean and standard deviation columns")
                .arg(Arg::new("inputs").required(true).num_args(1..).value_name("CSV_OR_DIR").action(ArgAction::Append))
                .arg(Arg::new("out").long("out").value_name("CSV").help("write here instead of stdout")),
        )
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<ConfigError>() {
            Ok(c) => Failure::Usage(c.to_string()),
            Err(e) => Failure::Runtime(e),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}

fn parse_game(m: &ArgMatches) -> Result<Option<eqlab::GameKind>, Failure> {
    m.get_one::<String>("game")
        .map(|g| g.parse().map_err(|e: eqlab::Error| Failure::Usage(e.to_string())))
        .transpose()
}

fn cmd_train(m: &ArgMatches) -> Result<(), Failure> {
    let text = match m.get_one::<String>("config") {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))?,
        None => String::new(),
    };
    let overrides: Vec<(String, String)> = KEYS
        .iter()
        .filter_map(|(k, _)| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect();
    let config = parse_config(&text, &overrides, env_seed().as_deref())?;
    let k = *m.get_one::<u64>("seeds").expect("defaulted");
    let mut failed = None;
    for result in commands::train::train_seeds(&config, k) {
        match result {
            Ok(s) => println!("{}\tseed {}\texploitability {}", s.dir.display(), s.seed, csv::fmt_g(s.final_exploitability)),
            Err(e) => {
                eprintln!("error: {e:#}");
                failed = Some(e);
            }
        }
    }
    failed.map_or(Ok(()), |e| Err(Failure::Runtime(e)))
}

fn cmd_eval(m: &ArgMatches) -> Result<(), Failure> {
    let dir = PathBuf::from(m.get_one::<String>("checkpoint").expect("required"));
    let out = m.get_one::<String>("out").map(PathBuf::from).unwrap_or_else(|| dir.join("eval.csv"));
    let report = commands::eval::eval(&dir, parse_game(m)?, Some(&out))?;
    print!("{}", commands::eval::render(&report));
    Ok(())
}

fn cmd_arena(m: &ArgMatches) -> Result<(), Failure> {
    let seed = match m.get_one::<u64>("seed") {
        Some(s) => *s,
        None => match env_seed() {
            Some(v) => v.parse().map_err(|_| Failure::Usage(format!("{SEED_ENV}: cannot parse `{v}`")))?,
            None => 0,
        },
    };
    let a = PathBuf::from(m.get_one::<String>("a").expect("required"));
    let b = PathBuf::from(m.get_one::<String>("b").expect("required"));
    let out = PathBuf::from(m.get_one::<String>("out").expect("defaulted"));
    let args = commands::arena::ArenaArgs {
        a: &a,
        b: &b,
        game: parse_game(m)?,
        episodes: *m.get_one::<u64>("episodes").expect("defaulted"),
        seed,
        labels: [m.get_one::<String>("label-a").cloned(), m.get_one::<String>("label-b").cloned()],
        out: Some(&out),
    };
    let (report, labels) = commands::arena::run_arena(&args)?;
    print!("{}", commands::arena::render(&report, &labels));
    Ok(())
}

fn cmd_curves(m: &ArgMatches) -> Result<(), Failure> {
    let inputs: Vec<PathBuf> = m.get_many::<String>("inputs").expect("required").map(PathBuf::from).collect();
    let out = m.get_one::<String>("out").map(PathBuf::from);
    let text = commands::curves::curves(&inputs, out.as_deref())?;
    if out.is_none() {
        print!("{text}");
    }
    Ok(())
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match matches.subcommand() {
        Some(("train", m)) => cmd_train(m),
        Some(("eval", m)) => cmd_eval(m),
        Some(("arena", m)) => cmd_arena(m),
        Some(("curves", m)) => cmd_curves(m),
        _ => unreachable!("subcommand required"),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            EXIT_RUNTIME
        }
    }
}
