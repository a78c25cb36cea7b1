//! Command-line front end for the module semantics engines.

mod parse;
mod report;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fixmod_core::corpus::run_suite;
use fixmod_core::lab::{
    duality_gap_example, run_factorization_census, run_sandwich_census,
    strict_containment_example, SandwichMode,
};
use fixmod_core::logic::{
    stratify, wrap_goal, AtomUniverse, GroundAtom, Literal, Module, Predicate, Term,
    ANSWER_PREDICATE,
};
use fixmod_core::order::{FiniteLattice, SignedSet};
use fixmod_core::semantics::{
    compare, eval_module, modular_eval, monolithic_eval, residualize, GroundWorld, Model,
    SemanticsKind, Start,
};
use serde_json::{json, Value};

use parse::{parse_ground_literals, parse_literals, ParseError, SourceProgram};
use report::{
    census_json, census_text, compare_json, compare_text, containment_json, containment_text,
    gap_json, gap_text, model_json, model_text, split_model, suite_json, suite_text,
};

#[derive(Parser)]
#[command(
    name = "fixmod",
    version,
    about = "Modular fixedpoint semantics for logic programs",
    long_about = "Evaluates programs split into modules under the least-model, Fitting, \
                  or well-founded semantics, compares module-by-module evaluation against \
                  the union program, and replays module models as residual programs."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program and print its model.
    Eval(EvalArgs),
    /// Evaluate module-by-module and as one union, and check they agree.
    Compare(CompareArgs),
    /// Evaluate one module from the assumptions and print the program its
    /// model replays to.
    Residualize(ResidualizeArgs),
    /// List the substitutions that make a goal true.
    Query(QueryArgs),
    /// Run the lattice censuses and reproduce the worked counterexamples.
    Lab(LabArgs),
    /// Generate the random module corpus and cross-check every engine on it.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct ProgramArgs {
    /// Program file to load.
    file: PathBuf,
    /// Ground literals taken as given, e.g. "q, not r(a)"; their
    /// predicates must be outside every module's defines.
    #[arg(long)]
    assume: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Lfp,
    Fitting,
    Wf,
}

impl SemanticsArg {
    fn kind(self) -> SemanticsKind {
        match self {
            SemanticsArg::Lfp => SemanticsKind::LeastModel,
            SemanticsArg::Fitting => SemanticsKind::Fitting,
            SemanticsArg::Wf => SemanticsKind::WellFounded,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Modular,
    Monolithic,
    Compare,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    program: ProgramArgs,
    #[arg(long, value_enum, default_value = "wf")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "modular")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    program: ProgramArgs,
    #[arg(long, value_enum, default_value = "wf")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct ResidualizeArgs {
    #[command(flatten)]
    program: ProgramArgs,
    /// Module to evaluate and replay.
    #[arg(long)]
    module: String,
    #[arg(long, value_enum, default_value = "wf")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    program: ProgramArgs,
    /// Goal literals, e.g. "path(1,Y), not e(Y,1)".
    #[arg(long)]
    goal: String,
    #[arg(long, value_enum, default_value = "wf")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct LabArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of programs to generate.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Monotonicity pairs sampled per operator per program.
    #[arg(long, default_value_t = 100)]
    budget: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

/// Goal checks cover this many corpus items.
const GOAL_PROGRAMS: usize = 20;

struct Failure {
    code: u8,
    message: String,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure { code: 2, message: format!("parse error: {e}") }
    }
}

impl From<fixmod_core::Error> for Failure {
    fn from(e: fixmod_core::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Eval(args) => run_eval(args),
        Command::Compare(args) => run_compare(args),
        Command::Residualize(args) => run_residualize(args),
        Command::Query(args) => run_query(args),
        Command::Lab(args) => run_lab(args),
        Command::Corpus(args) => run_corpus(args),
    }
}

struct Loaded {
    program: SourceProgram,
    assume: Vec<Literal>,
}

fn load(args: &ProgramArgs) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| Failure {
        code: 1,
        message: format!("cannot read {}: {e}", args.file.display()),
    })?;
    let program = SourceProgram::parse(&text)?;
    debug_assert_eq!(
        SourceProgram::parse(&program.render()).as_ref(),
        Ok(&program),
        "pretty printing must round-trip"
    );
    let assume = match &args.assume {
        Some(flag) => check_arities(&program, parse_ground_literals(flag)?)?,
        None => Vec::new(),
    };
    Ok(Loaded { program, assume })
}

/// Flag literals must agree with the arities the program already uses.
fn check_arities(program: &SourceProgram, lits: Vec<Literal>) -> Result<Vec<Literal>, Failure> {
    let known = program.arities();
    for lit in &lits {
        let pred = lit.atom.predicate();
        if let Some(&arity) = known.get(&pred.name) {
            if arity != pred.arity {
                return Err(Failure {
                    code: 2,
                    message: format!(
                        "parse error: predicate {} used with arity {} but the program uses arity {arity}",
                        pred.name, pred.arity
                    ),
                });
            }
        }
    }
    Ok(lits)
}

/// Grounds the modules over a universe that also covers the flag literals.
fn build_world(modules: &[Module], extra: &[&[Literal]]) -> Result<GroundWorld, Failure> {
    let mut constants = BTreeSet::new();
    let mut predicates = BTreeSet::new();
    for lits in extra {
        for lit in *lits {
            predicates.insert(lit.atom.predicate());
            for term in &lit.atom.args {
                if let Term::Const(c) = term {
                    constants.insert(c.clone());
                }
            }
        }
    }
    Ok(GroundWorld::build(modules, &constants, &predicates)?)
}

fn start_from(universe: &AtomUniverse, assume: &[Literal]) -> Result<Start, Failure> {
    if assume.is_empty() {
        return Ok(Start::empty());
    }
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for lit in assume {
        let ga = GroundAtom {
            pred: lit.atom.predicate(),
            args: lit
                .atom
                .args
                .iter()
                .map(|t| match t {
                    Term::Const(c) => c.clone(),
                    // parse_ground_literals rejected variables already
                    Term::Var(v) => v.clone(),
                })
                .collect(),
        };
        let index = universe.index_of(&ga)?;
        if lit.positive {
            pos.insert(index);
        } else {
            neg.insert(index);
        }
        if pos.contains(&index) && neg.contains(&index) {
            return Err(Failure {
                code: 1,
                message: format!("assumption {ga} is taken both true and false"),
            });
        }
    }
    Ok(Start::Literals(SignedSet::from_parts(pos, neg)?))
}

/// Module evaluation order: strata from the reads-relation, names breaking
/// ties inside a stratum.
fn plan_of(modules: &[Module]) -> Result<Vec<usize>, Failure> {
    let strata = stratify(modules).map_err(|e| Failure {
        code: 1,
        message: format!("{e}; rerun with --mode=monolithic"),
    })?;
    let mut plan: Vec<usize> = (0..modules.len()).collect();
    plan.sort_by_key(|&i| (strata[i], modules[i].name.clone()));
    Ok(plan)
}

fn emit(format: FormatArg, text: String, value: Value) {
    match format {
        FormatArg::Text => println!("{text}"),
        FormatArg::Json => println!("{value}"),
    }
}

fn run_eval(args: EvalArgs) -> Result<ExitCode, Failure> {
    let loaded = load(&args.program)?;
    let world = build_world(&loaded.program.modules, &[&loaded.assume])?;
    let start = start_from(&world.universe, &loaded.assume)?;
    let kind = args.semantics.kind();
    let (mode, model) = match args.mode {
        ModeArg::Modular => {
            let plan = plan_of(&loaded.program.modules)?;
            ("modular", modular_eval(&world, &plan, &start, kind)?)
        }
        ModeArg::Monolithic => ("monolithic", monolithic_eval(&world, &start, kind)?),
        ModeArg::Compare => {
            let plan = plan_of(&loaded.program.modules)?;
            return print_comparison(&world, &plan, &start, kind, args.format);
        }
    };
    let sets = split_model(&world.universe, &model);
    emit(args.format, model_text(kind, mode, &sets), model_json(kind, mode, &sets));
    Ok(ExitCode::SUCCESS)
}

fn run_compare(args: CompareArgs) -> Result<ExitCode, Failure> {
    let loaded = load(&args.program)?;
    let world = build_world(&loaded.program.modules, &[&loaded.assume])?;
    let start = start_from(&world.universe, &loaded.assume)?;
    let plan = plan_of(&loaded.program.modules)?;
    print_comparison(&world, &plan, &start, args.semantics.kind(), args.format)
}

fn print_comparison(
    world: &GroundWorld,
    plan: &[usize],
    start: &Start,
    kind: SemanticsKind,
    format: FormatArg,
) -> Result<ExitCode, Failure> {
    let outcome = compare(world, plan, start, kind)?;
    let modular = split_model(&world.universe, &outcome.modular);
    let monolithic = split_model(&world.universe, &outcome.monolithic);
    emit(
        format,
        compare_text(kind, &modular, &monolithic, outcome.equal),
        compare_json(kind, &modular, &monolithic, outcome.equal),
    );
    Ok(if outcome.equal { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run_residualize(args: ResidualizeArgs) -> Result<ExitCode, Failure> {
    let loaded = load(&args.program)?;
    let world = build_world(&loaded.program.modules, &[&loaded.assume])?;
    let index = loaded
        .program
        .modules
        .iter()
        .position(|m| m.name == args.module)
        .ok_or_else(|| Failure {
            code: 1,
            message: format!("no module named '{}'", args.module),
        })?;
    let start = start_from(&world.universe, &loaded.assume)?;
    let kind = args.semantics.kind();
    let module = &world.modules[index];
    let model = eval_module(&world.universe, module, &start, kind)?;
    // the slice keeps the assumptions, so the replay stands on its own
    let mut slice = module.def_atoms.clone();
    slice.extend(start.mentioned());
    let residual = residualize(&world.universe, &slice, &model, kind, &format!("{}x", args.module))?;
    let rules: Vec<String> = residual.rules.iter().map(|r| r.to_string()).collect();
    let defines: Vec<String> = residual.defines.iter().map(|p| p.to_string()).collect();
    emit(
        args.format,
        format!("semantics: {}\nmode: residualize\n{residual}", kind.token()),
        json!({
            "semantics": kind.token(),
            "mode": "residualize",
            "module": residual.name,
            "defines": defines,
            "rules": rules,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn run_query(args: QueryArgs) -> Result<ExitCode, Failure> {
    let loaded = load(&args.program)?;
    let goal = check_arities(&loaded.program, parse_literals(&args.goal)?)?;
    let wrapped = wrap_goal(&goal, &loaded.program.modules)?;
    let vars: Vec<String> = wrapped.rules[0]
        .head
        .args
        .iter()
        .filter_map(|t| match t {
            Term::Var(v) => Some(v.clone()),
            Term::Const(_) => None,
        })
        .collect();
    let mut modules = loaded.program.modules.clone();
    modules.push(wrapped);
    let world = build_world(&modules, &[&loaded.assume, &goal])?;
    let start = start_from(&world.universe, &loaded.assume)?;
    let kind = args.semantics.kind();
    let union = world.union("loaded");
    let model = eval_module(&world.universe, &union, &start, kind)?;
    let (satisfied, open) = answer_rows(&world.universe, &model, &vars)?;
    let shown = goal.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ");
    emit(
        args.format,
        query_text(kind, &shown, &vars, &satisfied, &open),
        query_json(kind, &shown, &vars, &satisfied, &open),
    );
    Ok(ExitCode::SUCCESS)
}

type Rows = Vec<Vec<String>>;

/// Substitutions (in constant order) whose answer atom is true, then those
/// left undefined.
fn answer_rows(
    universe: &AtomUniverse,
    model: &Model,
    vars: &[String],
) -> Result<(Rows, Rows), Failure> {
    let pred = Predicate::new(ANSWER_PREDICATE, vars.len());
    let mut satisfied = Vec::new();
    let mut open = Vec::new();
    for args in substitutions(universe.constants(), vars.len()) {
        let index = universe.index_of(&GroundAtom { pred: pred.clone(), args: args.clone() })?;
        match model.literal_truth(index, true) {
            Some(true) => satisfied.push(args),
            None => open.push(args),
            Some(false) => {}
        }
    }
    Ok((satisfied, open))
}

fn substitutions(constants: &[String], k: usize) -> Vec<Vec<String>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if constants.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut odometer = vec![0usize; k];
    loop {
        out.push(odometer.iter().map(|&i| constants[i].clone()).collect());
        let mut d = k;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            odometer[d] += 1;
            if odometer[d] < constants.len() {
                break;
            }
            odometer[d] = 0;
        }
    }
}

fn bind(vars: &[String], args: &[String]) -> String {
    vars.iter()
        .zip(args)
        .map(|(v, c)| format!("{v} = {c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn query_text(
    kind: SemanticsKind,
    goal: &str,
    vars: &[String],
    satisfied: &[Vec<String>],
    open: &[Vec<String>],
) -> String {
    let mut out = format!("semantics: {}\nmode: query\ngoal: {goal}", kind.token());
    if vars.is_empty() {
        let verdict = if !satisfied.is_empty() {
            "yes"
        } else if !open.is_empty() {
            "undefined"
        } else {
            "no"
        };
        out.push('\n');
        out.push_str(verdict);
        return out;
    }
    for args in satisfied {
        out.push('\n');
        out.push_str(&bind(vars, args));
    }
    if satisfied.is_empty() && open.is_empty() {
        out.push_str("\nno answers");
    }
    if !open.is_empty() {
        out.push_str(&format!("\nundefined: {} substitutions", open.len()));
    }
    out
}

fn query_json(
    kind: SemanticsKind,
    goal: &str,
    vars: &[String],
    satisfied: &[Vec<String>],
    open: &[Vec<String>],
) -> Value {
    let rows = |set: &[Vec<String>]| {
        set.iter()
            .map(|args| {
                let entries: serde_json::Map<String, Value> = vars
                    .iter()
                    .zip(args)
                    .map(|(v, c)| (v.clone(), Value::String(c.clone())))
                    .collect();
                Value::Object(entries)
            })
            .collect::<Vec<_>>()
    };
    json!({
        "semantics": kind.token(),
        "mode": "query",
        "goal": goal,
        "variables": vars,
        "answers": rows(satisfied),
        "undefined": rows(open),
    })
}

fn run_lab(args: LabArgs) -> Result<ExitCode, Failure> {
    let mut lines = Vec::new();
    let mut censuses = Vec::new();
    let mut sound = true;
    let factorization_menu = [
        FiniteLattice::chain(2)?,
        FiniteLattice::chain(3)?,
        FiniteLattice::chain(4)?,
        FiniteLattice::boolean(1)?,
        FiniteLattice::boolean(2)?,
    ];
    for lat in &factorization_menu {
        let report = run_factorization_census(lat)?;
        sound &= report.sound();
        lines.push(census_text("factorization", &report));
        censuses.push(census_json("factorization", &report));
    }
    let sandwich_menu = [
        (FiniteLattice::chain(2)?, SandwichMode::AllFunctions),
        (FiniteLattice::chain(3)?, SandwichMode::AllFunctions),
        (FiniteLattice::chain(4)?, SandwichMode::MonotoneOnly),
        (FiniteLattice::boolean(2)?, SandwichMode::MonotoneOnly),
    ];
    for (lat, mode) in &sandwich_menu {
        let report = run_sandwich_census(lat, *mode)?;
        sound &= report.sound();
        let kind = match mode {
            SandwichMode::AllFunctions => "sandwich (all functions)",
            SandwichMode::MonotoneOnly => "sandwich (monotone)",
        };
        lines.push(census_text(kind, &report));
        censuses.push(census_json(kind, &report));
    }
    let gap = duality_gap_example()?;
    let containment = strict_containment_example()?;
    let ok = sound && gap.as_expected && containment.as_expected;
    lines.push(gap_text(&gap));
    lines.push(containment_text(&containment));
    lines.push(format!("verdict: {}", if ok { "ok" } else { "FAILED" }));
    emit(
        args.format,
        lines.join("\n"),
        json!({
            "mode": "lab",
            "censuses": censuses,
            "downward_gap": gap_json(&gap),
            "strict_containment": containment_json(&containment),
            "ok": ok,
        }),
    );
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run_corpus(args: CorpusArgs) -> Result<ExitCode, Failure> {
    let report = run_suite(args.seed, args.count, args.budget, GOAL_PROGRAMS)?;
    emit(args.format, suite_text(&report), suite_json(&report));
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitutions_walk_the_constant_grid_in_order() {
        let consts = vec!["a".to_string(), "b".to_string()];
        let rows = substitutions(&consts, 2);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], vec!["a", "a"]);
        assert_eq!(rows[3], vec!["b", "b"]);
        assert_eq!(substitutions(&consts, 0), vec![Vec::<String>::new()]);
        assert!(substitutions(&[], 1).is_empty());
    }

    #[test]
    fn binding_lines_pair_variables_with_constants() {
        let vars = vec!["X".to_string(), "Y".to_string()];
        let args = vec!["a".to_string(), "1".to_string()];
        assert_eq!(bind(&vars, &args), "X = a, Y = 1");
    }
}
