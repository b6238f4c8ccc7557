use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use chowsym::checks::{run_check, run_scenario, CheckSpec};
use chowsym::expr::{format_symbol, parse_symbol};
use chowsym::random;
use chowsym::report::Report;
use chowsym::scenario::{bundled, Input, Scenario, ScenarioError, BUNDLED};
use chowsym_core::symbols::underline_quotient;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chowsym", version, about = "Filtration maps on zero-cycles of C_1 x ... x C_d x A")]
struct Cli {
    /// Seed for randomized suites; overrides the scenario's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of cases per randomized suite.
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a scenario and check the model laws.
    Validate { file: PathBuf },
    /// Run every check of a scenario. Bundled scenarios can be named directly.
    Run { file: PathBuf },
    /// Normal form of a symbol expression.
    Normalize {
        expr: String,
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Phi_r of a cycle input.
    Phi {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Psi'_r of a datum input, or of a random datum when no input is given.
    Psi {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        input: Option<String>,
    },
    /// Random round-trip suite at rank r.
    Roundtrip {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Numbers of curves to use; defaults to every count the scenario allows up to 3.
        #[arg(long, num_args = 1..)]
        d: Vec<usize>,
    },
    /// The genus-2 worked example.
    Genus2,
    /// Structural vanishing of Psi'_r summands on random one-curve data.
    Vanish {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

/// Loads a scenario file, or a bundled scenario by name.
fn load(path: &Path) -> Result<Scenario, ScenarioError> {
    if !path.exists() {
        if let Some(name) = path.to_str().filter(|n| BUNDLED.contains(n)) {
            return Ok(bundled(name).expect("bundled"));
        }
    }
    Scenario::load(path)
}

fn load_or(path: &Option<PathBuf>, default: &str) -> Result<Scenario, ScenarioError> {
    match path {
        Some(p) => load(p),
        None => Ok(bundled(default).expect("bundled")),
    }
}

enum Failure {
    Input(anyhow::Error),
    Checks,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    if let Some(path) = &cli.report {
        std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    if !cli.quiet || !report.passed() {
        print!("{}", report.to_text());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run_one(cli: &Cli, sc: &Scenario, spec: CheckSpec) -> Result<(), Failure> {
    let seed = cli.seed.unwrap_or(sc.seed);
    let spec = match cli.cases {
        Some(n) => spec.with_cases(n),
        None => spec,
    };
    let start = Instant::now();
    let results = run_check(sc, 0, &spec, seed);
    emit(cli, &Report::new(sc.name.clone(), seed, results, start.elapsed()))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate { file } => {
            let sc = load(file)?;
            if !cli.quiet {
                println!(
                    "{}: valid ({} curves, {} atoms, {} inputs, {} checks)",
                    sc.name,
                    sc.setting.d(),
                    sc.setting.generators.len(),
                    sc.inputs.len(),
                    sc.checks.len()
                );
            }
            Ok(())
        }
        Command::Run { file } => {
            let sc = load(file)?;
            let seed = cli.seed.unwrap_or(sc.seed);
            let start = Instant::now();
            let results = run_scenario(&sc, seed, cli.cases);
            emit(cli, &Report::new(sc.name.clone(), seed, results, start.elapsed()))
        }
        Command::Normalize { expr, scenario } => {
            let sc = load(scenario)?;
            let s = &sc.setting;
            let x = parse_symbol(s, expr).map_err(|e| anyhow::anyhow!("{expr}\n{e}"))?;
            let nf = format_symbol(s, &x);
            let under = format_symbol(s, &underline_quotient(&x));
            if let Some(path) = &cli.report {
                let json = serde_json::json!({ "expr": expr, "normal_form": nf, "underlined": under });
                std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&json)?))?;
            }
            if !cli.quiet {
                println!("normal form: {nf}");
                println!("underlined:  {under}");
            }
            Ok(())
        }
        Command::Phi { r, scenario, input } => {
            let sc = load(scenario)?;
            if !matches!(sc.inputs.get(input), Some(Input::Cycle(_))) {
                return Err(anyhow::anyhow!("`{input}` is not a cycle input of {}", sc.name).into());
            }
            run_one(cli, &sc, CheckSpec::Phi { input: input.clone(), r: *r, expect: None })
        }
        Command::Psi { r, scenario, input } => {
            let mut sc = load_or(scenario, "roundtrip_random")?;
            let name = match input {
                Some(name) => {
                    match sc.inputs.get(name) {
                        Some(Input::Datum(d)) if d.rank() == *r => {}
                        Some(Input::Datum(d)) => return Err(anyhow::anyhow!("`{name}` has {} rows, not {r}", d.rank()).into()),
                        _ => return Err(anyhow::anyhow!("`{name}` is not a datum input of {}", sc.name).into()),
                    }
                    name.clone()
                }
                None => {
                    let seed = cli.seed.unwrap_or(sc.seed);
                    let d = random::datum(&mut random::rng(seed, 0), &sc.setting, *r);
                    sc.inputs.insert("random".into(), Input::Datum(d));
                    "random".into()
                }
            };
            run_one(cli, &sc, CheckSpec::PathEquivalence { input: name })
        }
        Command::Roundtrip { r, scenario, d } => {
            let sc = load_or(scenario, "roundtrip_random")?;
            let d = if d.is_empty() { (1..=sc.setting.d().min(3)).collect() } else { d.clone() };
            run_one(cli, &sc, CheckSpec::RandomRoundtrip { d, r: vec![*r], cases: 20 })
        }
        Command::Genus2 => {
            let sc = bundled("genus2").expect("bundled");
            let seed = cli.seed.unwrap_or(sc.seed);
            let start = Instant::now();
            let results = run_scenario(&sc, seed, cli.cases);
            emit(cli, &Report::new(sc.name.clone(), seed, results, start.elapsed()))
        }
        Command::Vanish { r, g, scenario } => {
            let sc = load_or(scenario, "elliptic")?;
            if sc.setting.ab.dimension != *g {
                return Err(anyhow::anyhow!("the abelian model of {} has dimension {}, not {g}", sc.name, sc.setting.ab.dimension).into());
            }
            if *r <= 1 + *g as usize {
                return Err(anyhow::anyhow!("structural vanishing needs r > d + g = {}", 1 + g).into());
            }
            run_one(cli, &sc, CheckSpec::RandomVanishing { r: *r, cases: 20 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
