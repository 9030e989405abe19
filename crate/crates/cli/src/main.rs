use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sparselp::bench::{bench_program, render_table, stable_models_symbolic_guess, BenchBackend, DEFAULT_TRIALS};
use sparselp::encoder::sparsity;
use sparselp::linalg::DEFAULT_EPS;
use sparselp::semantics::least_model_traced;
use sparselp::solver::DEFAULT_DENSE_LIMIT_BYTES;
use sparselp::syntax::serialize_with_header;
use sparselp::{
    generator::generate, ground_transitive_closure, load_edge_list, parse_program_with_warnings, program_stats,
    serialize_program, verify_stable, AtomSet, Backend, DefiniteSystem, EncodeError, GenError, GenProfile,
    GraphError, NormalProgram, NormalSystem, ParseError, Program, ProgramError, ProfileKind, SolveError,
    SolverConfig,
};

#[derive(Parser)]
#[command(name = "sparselp", version, about = "Logic programs solved as sparse matrix fixpoints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Least model of a definite program.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
    /// Stable models of a normal program.
    Stable {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Largest number of free negation atoms to enumerate.
        #[arg(long, default_value_t = sparselp::encoder::DEFAULT_GUESS_CAP)]
        neg_cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Time the fixpoint loop on each backend; one JSON line per backend.
    Bench {
        /// Program file; otherwise one is generated from the profile.
        #[arg(long, conflicts_with = "profile")]
        file: Option<PathBuf>,
        #[command(flatten)]
        profile: ProfileArgs,
        /// Comma-separated backends.
        #[arg(long, value_delimiter = ',', default_value = "symbolic,dense,sparse")]
        backend: Vec<BenchBackend>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = sparselp::encoder::DEFAULT_GUESS_CAP)]
        neg_cap: usize,
        /// Dense matrices above this many bytes are skipped.
        #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT_BYTES)]
        dense_limit: u64,
        /// Print a table instead of JSON lines.
        #[arg(long)]
        table: bool,
    },
    /// Generate a random program in `.lp` format.
    Gen {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ground transitive closure over an edge list.
    Ground {
        edges: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Size and sparsity of a program as one JSON object.
    Stats { file: PathBuf },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "sparse")]
    backend: BenchBackend,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT_BYTES)]
    dense_limit: u64,
}

impl SolverArgs {
    fn config(&self, guess_cap: usize) -> SolverConfig {
        SolverConfig {
            backend: match self.backend {
                BenchBackend::Dense => Backend::Dense,
                _ => Backend::Sparse,
            },
            eps: self.eps,
            guess_cap,
            dense_limit_bytes: self.dense_limit,
        }
    }
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    profile: Option<ProfileKind>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 5000)]
    m: usize,
    /// Negative literals to introduce.
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ProfileArgs {
    fn profile(&self) -> GenProfile {
        let kind = self.profile.unwrap_or(ProfileKind::Table1);
        let base = match kind {
            ProfileKind::Table1 => GenProfile::table1(self.n, self.m, self.seed),
            ProfileKind::Denser => GenProfile::denser(self.n, self.m, self.seed),
        };
        base.with_negations(self.k)
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl fmt::Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(2, format!("parse error: {e}"))
    }
}

impl From<ProgramError> for CliError {
    fn from(e: ProgramError) -> Self {
        CliError::new(3, e)
    }
}

impl From<EncodeError> for CliError {
    fn from(e: EncodeError) -> Self {
        let code = if matches!(e, EncodeError::GuessExplosion { .. }) { 4 } else { 3 };
        CliError::new(code, e)
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Encode(e) => e.into(),
            SolveError::DenseMemoryBound { .. } | SolveError::TooManyAtoms { .. } => CliError::new(4, e),
            SolveError::NoConvergence { .. } => CliError::new(3, e),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::new(3, e)
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::new(3, e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::new(1, format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::new(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> CliResult<Program> {
    let parsed = parse_program_with_warnings(&read(path)?)?;
    for w in &parsed.warnings {
        eprintln!("warning: {}:{}:{}: {}", path.display(), w.line, w.column, w.message);
    }
    Ok(parsed.program.expand_or_rules())
}

fn model_line(p: &Program, model: &AtomSet) -> String {
    model.names(p.atoms()).join(" ")
}

fn solve(file: &Path, args: &SolverArgs, json: bool) -> CliResult {
    let p = load(file)?.into_definite()?;
    let system = DefiniteSystem::new(&p)?;
    let s = sparsity(&system.standardized);
    let (model, iterations) = match args.backend {
        BenchBackend::Symbolic => least_model_traced(p.program()),
        _ => {
            let cfg = args.config(0);
            let op = system.operator(&cfg)?;
            let (model, trace) = system.solve(&op, cfg.eps)?;
            (model, trace.iterations)
        }
    };
    if json {
        let out = json!({
            "model": model.names(p.atoms()),
            "iterations": iterations,
            "n_prime": system.side(),
            "sparsity": s.body_based,
            "nnz_sparsity": s.nnz_based,
        });
        println!("{out}");
    } else {
        println!("{}", model_line(p.program(), &model));
        println!("iterations: {iterations}");
        println!("n': {}", system.side());
        println!("sparsity: {:.4}", s.body_based);
    }
    Ok(())
}

fn stable(file: &Path, args: &SolverArgs, neg_cap: usize, json: bool) -> CliResult {
    let program = load(file)?;
    let p: NormalProgram = program.into_normal()?;
    let system = NormalSystem::new(&p, neg_cap)?;
    let models = match args.backend {
        BenchBackend::Symbolic => stable_models_symbolic_guess(&system),
        _ => {
            let cfg = args.config(neg_cap);
            let op = system.operator(&cfg)?;
            system.solve(&op, cfg.eps)?.0
        }
    };
    if let Some(bad) = models.iter().find(|m| !verify_stable(&p, m)) {
        return Err(CliError::new(
            3,
            format!("internal error: {{{}}} fails the stability check", model_line(p.program(), bad)),
        ));
    }
    if json {
        let list: Vec<Vec<&str>> = models.iter().map(|m| m.names(p.atoms())).collect();
        println!("{}", json!({ "models": list, "free_negations": system.guess.free_negs.len() }));
    } else if models.is_empty() {
        println!("no stable models");
    } else {
        for m in models.iter() {
            let line = model_line(p.program(), m);
            println!("{}", if line.is_empty() { "{}" } else { &line });
        }
    }
    Ok(())
}

fn bench(
    file: Option<&Path>,
    profile: &ProfileArgs,
    backends: &[BenchBackend],
    trials: usize,
    config: &SolverConfig,
    table: bool,
) -> CliResult {
    if trials == 0 {
        return Err(CliError::new(3, "--trials must be at least 1"));
    }
    let (id, program) = match file {
        Some(path) => (path.display().to_string(), load(path)?.into_normal()?),
        None => {
            let prof = profile.profile();
            (prof.to_string(), generate(&prof)?)
        }
    };
    let records = bench_program(&id, &program, backends, trials, config)?;
    if table {
        print!("{}", render_table(&records));
    } else {
        for r in &records {
            println!("{}", serde_json::to_string(r).expect("records serialize"));
        }
    }
    Ok(())
}

fn gen(profile: &ProfileArgs, output: Option<&Path>) -> CliResult {
    let prof = profile.profile();
    let p = generate(&prof)?;
    write_or_print(output, &serialize_with_header(p.program(), &prof.to_string()))
}

fn ground(edges: &Path, output: Option<&Path>) -> CliResult {
    let g = load_edge_list(&read(edges)?)?;
    let p = ground_transitive_closure(&g)?;
    write_or_print(output, &serialize_program(p.program()))?;
    eprintln!("n={} m={}", p.atoms().len(), p.len());
    Ok(())
}

fn stats(file: &Path) -> CliResult {
    let p = load(file)?.into_normal()?;
    let s = program_stats(&p)?;
    println!("{}", serde_json::to_string(&s).expect("stats serialize"));
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Solve { file, solver, json } => solve(&file, &solver, json),
        Command::Stable {
            file,
            solver,
            neg_cap,
            json,
        } => stable(&file, &solver, neg_cap, json),
        Command::Bench {
            file,
            profile,
            backend,
            trials,
            eps,
            neg_cap,
            dense_limit,
            table,
        } => {
            let config = SolverConfig {
                backend: Backend::Sparse,
                eps,
                guess_cap: neg_cap,
                dense_limit_bytes: dense_limit,
            };
            bench(file.as_deref(), &profile, &backend, trials, &config, table)
        }
        Command::Gen { profile, output } => gen(&profile, output.as_deref()),
        Command::Ground { edges, output } => ground(&edges, output.as_deref()),
        Command::Stats { file } => stats(&file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
