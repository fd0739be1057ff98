use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use plusynt::arena::el_to_dot;
use plusynt::automata::dfa_to_dot;
use plusynt::parity::parity_to_dot;
use plusynt::synthesis::{build_pipeline, compile_finite, extract_strategy};
use plusynt::{
    is_satisfiable, model_check, parse_plus, to_pnf, Alphabet, Atom, Dialect, Partition,
    Player, PlusFormula, TransitionSystemInput,
};

#[derive(Parser)]
#[command(name = "plusynt", version, about = "Synthesis, satisfiability, validity, and model \
checking for prefix-quantified finite-trace temporal logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide realizability and extract a winning controller
    Synth(SynthArgs),
    /// Decide satisfiability, emitting a witness lasso when satisfiable
    Sat(FormulaArgs),
    /// Decide validity, emitting a countertrace when invalid
    Valid(FormulaArgs),
    /// Check a property against a transition system
    Mc(McArgs),
    /// Compile the formula's automata and write them out
    Compile(CompileArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Logic {
    Ltlf,
    Ppltl,
}

impl Logic {
    fn dialect(self) -> Dialect {
        match self {
            Logic::Ltlf => Dialect::Ltlf,
            Logic::Ppltl => Dialect::Ppltl,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long, value_enum)]
    logic: Logic,
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Where to write the witness / countertrace JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    /// Agent-controlled atoms, comma-separated
    #[arg(long, value_delimiter = ',')]
    agent: Vec<String>,
    /// Environment-controlled atoms, comma-separated
    #[arg(long, value_delimiter = ',')]
    env: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Minimize component automata before the product
    #[arg(long)]
    minimize: bool,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    /// Transition system JSON file
    #[arg(long)]
    ts: PathBuf,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    /// Minimize component automata before the product
    #[arg(long)]
    minimize: bool,
}

fn read_formula(args: &FormulaArgs) -> Result<PlusFormula> {
    let text = match (&args.formula, &args.formula_file) {
        (Some(f), None) => f.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
        _ => bail!("exactly one of --formula and --formula-file is required"),
    };
    Ok(parse_plus(text.trim(), args.logic.dialect())?)
}

fn atoms(names: &[String]) -> Result<Vec<Atom>> {
    names.iter().filter(|n| !n.is_empty()).map(|n| Ok(Atom::new(n)?)).collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{content}"),
    }
    Ok(())
}

/// Ok(true) = positive verdict (exit 0), Ok(false) = negative (exit 1).
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sat(args) => {
            let psi = read_formula(&args)?;
            let (sat, witness) = is_satisfiable(&psi, args.logic.dialect())?;
            if sat {
                println!("SAT");
                let w = witness.expect("sat verdict carries a witness");
                emit(&args.out, &serde_json::to_string_pretty(&w)?)?;
            } else {
                println!("UNSAT");
            }
            Ok(sat)
        }
        Command::Valid(args) => {
            let psi = read_formula(&args)?;
            let (counter_sat, witness) =
                is_satisfiable(&psi.clone().not(), args.logic.dialect())?;
            if counter_sat {
                println!("INVALID");
                let w = witness.expect("sat verdict carries a witness");
                emit(&args.out, &serde_json::to_string_pretty(&w)?)?;
            } else {
                println!("VALID");
            }
            Ok(!counter_sat)
        }
        Command::Synth(args) => {
            let psi = read_formula(&args.formula)?;
            let partition = Partition { agent: atoms(&args.agent)?, env: atoms(&args.env)? };
            if partition.agent.is_empty() {
                bail!("synth requires --agent");
            }
            let dialect = args.formula.logic.dialect();
            let pipeline = build_pipeline(&psi, dialect, &partition, args.minimize)?;
            if pipeline.solution.winner[pipeline.game.initial] != Player::Even {
                println!("UNREALIZABLE");
                return Ok(false);
            }
            let strategy = extract_strategy(
                &pipeline.game,
                &pipeline.solution,
                &pipeline.parity,
                &partition,
            )?;
            println!("REALIZABLE");
            let rendered = match args.format {
                Format::Json => serde_json::to_string_pretty(&strategy.to_json())?,
                Format::Dot => strategy.to_dot(),
            };
            emit(&args.formula.out, &rendered)?;
            Ok(true)
        }
        Command::Mc(args) => {
            let text = fs::read_to_string(&args.ts)
                .with_context(|| format!("reading {}", args.ts.display()))?;
            let ts = TransitionSystemInput::from_json(&text)?;
            let psi = read_formula(&args.formula)?;
            let (holds, counterexample) =
                model_check(&ts, &psi, args.formula.logic.dialect())?;
            if holds {
                println!("HOLDS");
            } else {
                println!("FAILS");
                let cx = counterexample.expect("failed verdict carries a counterexample");
                emit(&args.formula.out, &serde_json::to_string_pretty(&cx)?)?;
            }
            Ok(holds)
        }
        Command::Compile(args) => {
            let psi = read_formula(&args.formula)?;
            let dialect = args.formula.logic.dialect();
            let alphabet = Alphabet::new(psi.atoms());
            let skeleton = to_pnf(&psi);
            let mut components = Vec::new();
            for atom in &skeleton.atoms {
                let dfa = compile_finite(&atom.formula, dialect, &alphabet, args.minimize);
                components.push(plusynt::apply_quantifier(&dfa, atom.quantifier)?);
            }
            let el = plusynt::build_el_automaton(components, &skeleton)?;
            let parity = plusynt::el_to_parity(&el);

            let dir = args
                .formula
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)
                .with_context(|| format!("creating {}", dir.display()))?;
            for (i, c) in el.components.iter().enumerate() {
                fs::write(dir.join(format!("component_{}.dot", i + 1)), dfa_to_dot(&c.dfa))?;
            }
            fs::write(dir.join("el.dot"), el_to_dot(&el))?;
            fs::write(dir.join("parity.dot"), parity_to_dot(&parity))?;
            let mut colors: Vec<u32> = parity.colors.clone();
            colors.sort_unstable();
            colors.dedup();
            let summary = serde_json::json!({
                "formula": psi.to_string(),
                "logic": dialect.to_string(),
                "k": el.arity(),
                "condition": el.condition.to_string(),
                "component_states": el.components.iter()
                    .map(|c| c.dfa.num_states).collect::<Vec<_>>(),
                "el_states": el.num_states(),
                "parity_states": parity.num_states(),
                "colors": colors,
            });
            let summary = serde_json::to_string_pretty(&summary)?;
            fs::write(dir.join("summary.json"), &summary)?;
            println!("{summary}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
