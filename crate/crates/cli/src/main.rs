//! `eqk`: command-line front end for the equivariant K-theory Künneth engine.

mod commands;
mod input;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eqk_core::{LocalizationMode, PrimeSpot, Settings, SpaceExpr};
use serde_json::{json, Value};

use commands::{CommandResult, LocalizeInput};
use input::{load_catalog, load_json, parse_prime, InputError};
use report::RunReport;
use suites::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "eqk",
    version,
    about = "Z/2-equivariant K-theory Künneth computations"
)]
struct Cli {
    /// Localization mode at primes with support {1}.
    #[arg(long, global = true, default_value = "quotient", value_parser = parse_mode)]
    mode: LocalizationMode,
    /// Allow computations at (I,2) = (J,2).
    #[arg(long, global = true)]
    experimental_p2: bool,
    /// Write the canonical JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the prime ideals of R(Z/2) and their supports.
    SpecR {
        #[arg(long, default_value_t = 7)]
        max_prime: u64,
    },
    /// Localize an R-module or a K-invariant at a prime.
    Localize {
        #[arg(
            long,
            conflicts_with = "kinvariant",
            required_unless_present = "kinvariant"
        )]
        module: Option<String>,
        #[arg(long)]
        kinvariant: Option<String>,
        #[arg(long)]
        prime: String,
    },
    /// Tensor product of two Z_(p)-modules.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Tor_1 of two Z_(p)-modules.
    Tor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Localized K-theory of a space expression via the Künneth sequence.
    Kunneth {
        #[arg(long)]
        prime: String,
        /// An atom name (pt, V, G, R^n, GxR^n), inline JSON or a JSON file.
        #[arg(long)]
        space: String,
    },
    /// Check exactness of six-term sequences.
    SixTerm {
        /// A six-term JSON file or inline JSON; the catalog when omitted.
        #[arg(long)]
        data: Option<String>,
    },
    /// Compare the size of X x G with K*(X).
    Doubling {
        #[arg(long)]
        prime: String,
        #[arg(long)]
        space: String,
    },
    /// Show where Künneth for K_G alone breaks and the full invariant does not.
    RemarkFailure {
        #[arg(long)]
        prime: String,
        #[arg(long, default_value = "G")]
        left: String,
        #[arg(long, default_value = "G")]
        right: String,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, num_args = 1..)]
        primes: Vec<String>,
    },
}

fn parse_mode(s: &str) -> Result<LocalizationMode, String> {
    s.parse()
        .map_err(|e: eqk_core::rep_ring::RepRingError| e.to_string())
}

fn parse_space(arg: &str, what: &str) -> Result<(SpaceExpr, Value), InputError> {
    let is_name =
        !arg.trim_start().starts_with(['{', '[']) && !arg.contains('/') && !arg.ends_with(".json");
    let v = if is_name {
        json!({ "atom": arg })
    } else {
        load_json(arg, what)?
    };
    let e = SpaceExpr::from_json(&v).map_err(|e| InputError::json(what, e))?;
    Ok((e, v))
}

fn run(cli: &Cli) -> Result<(Value, CommandResult), InputError> {
    let settings = Settings {
        mode: cli.mode,
        experimental_p2: cli.experimental_p2,
    };
    let (cat, suite_dir) = load_catalog()?;
    if let Some(dir) = &suite_dir {
        log::info!("fixtures from {}", dir.display());
    }
    let common = json!({
        "mode": cli.mode.to_string(),
        "experimental_p2": cli.experimental_p2,
    });
    let with = |extra: Value| {
        let mut v = common.clone();
        if let (Value::Object(base), Value::Object(extra)) = (&mut v, extra) {
            base.extend(extra);
        }
        v
    };
    Ok(match &cli.command {
        Command::SpecR { max_prime } => (
            with(json!({"max_prime": max_prime})),
            commands::spec_r(*max_prime),
        ),
        Command::Localize {
            module,
            kinvariant,
            prime,
        } => {
            let s = parse_prime(prime)?;
            let input = match (module, kinvariant) {
                (Some(m), _) => LocalizeInput::Module(load_json(m, "--module")?),
                (None, Some(k)) => LocalizeInput::KInvariant(load_json(k, "--kinvariant")?),
                (None, None) => return Err(InputError("one of --module, --kinvariant".into())),
            };
            let data = match &input {
                LocalizeInput::Module(v) | LocalizeInput::KInvariant(v) => v.clone(),
            };
            (
                with(json!({"prime": s.to_string(), "data": data})),
                commands::localize(&input, &s, settings),
            )
        }
        Command::Tensor { left, right } | Command::Tor { left, right } => {
            let tor = matches!(cli.command, Command::Tor { .. });
            let l = load_json(left, "--left")?;
            let r = load_json(right, "--right")?;
            (
                with(json!({"left": l, "right": r})),
                commands::tensor_or_tor(&l, &r, tor),
            )
        }
        Command::Kunneth { prime, space } => {
            let s = parse_prime(prime)?;
            let (e, v) = parse_space(space, "--space")?;
            (
                with(json!({"prime": s.to_string(), "space": v})),
                commands::kunneth_cmd(&e, &s, settings, &cat),
            )
        }
        Command::SixTerm { data } => {
            let v = data
                .as_deref()
                .map(|d| load_json(d, "--data"))
                .transpose()?;
            (
                with(json!({"data": v})),
                commands::six_term(v.as_ref(), &cat),
            )
        }
        Command::Doubling { prime, space } => {
            let s = parse_prime(prime)?;
            let (e, v) = parse_space(space, "--space")?;
            (
                with(json!({"prime": s.to_string(), "space": v})),
                commands::doubling(&e, &s, settings, &cat),
            )
        }
        Command::RemarkFailure { prime, left, right } => {
            let s = parse_prime(prime)?;
            let (l, lv) = parse_space(left, "--left")?;
            let (r, rv) = parse_space(right, "--right")?;
            (
                with(json!({"prime": s.to_string(), "left": lv, "right": rv})),
                commands::remark_failure(&l, &r, &s, settings, &cat),
            )
        }
        Command::Verify { suite, primes } => {
            if *suite == Suite::P2 && !settings.experimental_p2 {
                return Err(InputError("the p2 suite requires --experimental-p2".into()));
            }
            let primes: Vec<PrimeSpot> = if primes.is_empty() {
                suites::default_primes()
            } else {
                primes
                    .iter()
                    .map(|p| parse_prime(p))
                    .collect::<Result<_, _>>()?
            };
            let names: Vec<String> = primes.iter().map(|s| s.to_string()).collect();
            (
                with(json!({
                    "suite": format!("{suite:?}").to_lowercase(),
                    "primes": names,
                    "fixtures": suite_dir.as_ref().map(|d| d.display().to_string()),
                })),
                Ok(suites::verify(*suite, &primes, settings, &cat)),
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Info
        } else {
            log::LevelFilter::Warn
        })
        .parse_default_env()
        .init();
    let started = std::time::Instant::now();
    let (inputs, output) = match run(&cli).and_then(|(i, o)| o.map(|o| (i, o))) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    // The report path is left out so that reports written to different
    // places compare equal.
    let mut command = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--json" {
            args.next();
        } else if !a.starts_with("--json=") {
            command.push(a);
        }
    }
    let report = RunReport::new(command, &inputs, output);
    print!("{}", report.human());
    log::info!("finished in {:.3}s", started.elapsed().as_secs_f64());
    if let Some(path) = &cli.json {
        let text = eqk_core::json::canonical(&report.to_json());
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.output.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
