//! Timing harness comparing the symbolic, dense and sparse fixpoints.
//!
//! Parsing and encoding happen once per program and are reported
//! separately; each trial times only the fixpoint loop.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::encoder::{free_negations, sparsity, sparsity_normal};
use crate::error::SolveError;
use crate::program::{AtomId, AtomSet, DefiniteProgram, NormalProgram};
use crate::semantics::{least_model_traced, tp_step, ModelSet};
use crate::solver::{Backend, DefiniteSystem, NormalSystem, SolverConfig};
use crate::transform::positive_form;

/// Default number of timed trials per backend.
pub const DEFAULT_TRIALS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchBackend {
    Symbolic,
    Dense,
    Sparse,
}

impl BenchBackend {
    pub const ALL: [BenchBackend; 3] = [BenchBackend::Symbolic, BenchBackend::Dense, BenchBackend::Sparse];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchBackend::Symbolic => "symbolic",
            BenchBackend::Dense => "dense",
            BenchBackend::Sparse => "sparse",
        }
    }

    fn matrix_backend(self) -> Option<Backend> {
        match self {
            BenchBackend::Symbolic => None,
            BenchBackend::Dense => Some(Backend::Dense),
            BenchBackend::Sparse => Some(Backend::Sparse),
        }
    }
}

impl fmt::Display for BenchBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symbolic" => Ok(BenchBackend::Symbolic),
            "dense" => Ok(BenchBackend::Dense),
            "sparse" => Ok(BenchBackend::Sparse),
            other => Err(format!("unknown backend `{other}` (expected symbolic, dense or sparse)")),
        }
    }
}

/// One JSON line of benchmark output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub program: String,
    pub n: usize,
    pub m: usize,
    pub n_prime: usize,
    pub k: usize,
    /// `1 - sum(|body|) / n'^2`.
    pub sparsity: f64,
    /// `1 - nnz / n'^2`.
    pub nnz_sparsity: f64,
    pub backend: BenchBackend,
    pub trials: usize,
    /// Mean wall time of the fixpoint loop; absent when skipped.
    pub mean_seconds: Option<f64>,
    /// Standardization and encoding, timed once.
    pub encode_seconds: Option<f64>,
    pub iterations: Option<usize>,
    pub model_count: Option<usize>,
    pub skipped: Option<String>,
}

/// Size and sparsity summary of a program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgramStats {
    pub n: usize,
    pub m: usize,
    pub n_prime: usize,
    pub k: usize,
    pub sparsity: f64,
    pub nnz_sparsity: f64,
    /// Free negation atoms, i.e. `log2` of the guess-matrix width.
    pub free_negations: usize,
}

/// Statistics of the matrix the solver would build for `p`.
pub fn program_stats(p: &NormalProgram) -> Result<ProgramStats, SolveError> {
    let sn = positive_form(p).standardize();
    let matrix = crate::encoder::encode_normal_matrix(&sn)?;
    let s = sparsity_normal(&sn, &matrix);
    Ok(ProgramStats {
        n: p.atoms().len(),
        m: p.len(),
        n_prime: matrix.side(),
        k: p.negative_literal_count(),
        sparsity: s.body_based,
        nnz_sparsity: s.nnz_based,
        free_negations: free_negations(&sn).len(),
    })
}

fn mean_time<T>(trials: usize, mut run: impl FnMut() -> T) -> (f64, T) {
    assert!(trials >= 1, "at least one trial");
    let mut total = 0.0;
    let mut last = None;
    for _ in 0..trials {
        let start = Instant::now();
        let out = run();
        total += start.elapsed().as_secs_f64();
        last = Some(out);
    }
    (total / trials as f64, last.expect("ran at least once"))
}

/// Stable models by iterating the consequence operator of the positive form
/// once per guess column, negation guesses held fixed.
pub fn stable_models_symbolic_guess(system: &NormalSystem) -> ModelSet {
    let p = &system.program.standardized;
    let n = system.program.n();
    let g = &system.guess.matrix;
    let mut models = Vec::new();
    for c in 0..g.cols() {
        let seed: AtomSet = (0..g.rows()).filter(|&r| g.get(r, c) == 1.0).map(AtomId::new).collect();
        let mut cur = seed.clone();
        loop {
            let mut next = tp_step(p, &cur);
            next.extend(seed.iter());
            if next == cur {
                break;
            }
            cur = next;
        }
        let consistent = system
            .program
            .neg_rows()
            .iter()
            .all(|(neg, atom)| cur.contains(*neg) != cur.contains(*atom));
        if consistent {
            models.push(cur.restrict(|a| a.index() < n));
        }
    }
    ModelSet::new(models)
}

struct Base {
    n: usize,
    m: usize,
    k: usize,
    n_prime: usize,
    sparsity: f64,
    nnz_sparsity: f64,
}

impl Base {
    fn record(&self, id: &str, backend: BenchBackend, trials: usize) -> BenchRecord {
        BenchRecord {
            program: id.to_owned(),
            n: self.n,
            m: self.m,
            n_prime: self.n_prime,
            k: self.k,
            sparsity: self.sparsity,
            nnz_sparsity: self.nnz_sparsity,
            backend,
            trials,
            mean_seconds: None,
            encode_seconds: None,
            iterations: None,
            model_count: None,
            skipped: None,
        }
    }
}

/// Benchmarks a definite program on each backend.
pub fn bench_definite(
    id: &str,
    p: &DefiniteProgram,
    backends: &[BenchBackend],
    trials: usize,
    config: &SolverConfig,
) -> Result<Vec<BenchRecord>, SolveError> {
    let start = Instant::now();
    let system = DefiniteSystem::new(p)?;
    let encode = start.elapsed().as_secs_f64();
    let s = sparsity(&system.standardized);
    let base = Base {
        n: p.atoms().len(),
        m: p.len(),
        k: 0,
        n_prime: system.side(),
        sparsity: s.body_based,
        nnz_sparsity: s.nnz_based,
    };
    let mut out = Vec::with_capacity(backends.len());
    for &b in backends {
        let mut rec = base.record(id, b, trials);
        match b.matrix_backend() {
            None => {
                let (mean, (_, iterations)) = mean_time(trials, || least_model_traced(p));
                rec.mean_seconds = Some(mean);
                rec.iterations = Some(iterations);
                rec.model_count = Some(1);
            }
            Some(backend) => {
                let cfg = SolverConfig { backend, ..*config };
                let op = match system.operator(&cfg) {
                    Ok(op) => op,
                    Err(SolveError::DenseMemoryBound { .. }) => {
                        rec.skipped = Some("memory bound".into());
                        out.push(rec);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let (mean, result) = mean_time(trials, || system.solve(&op, cfg.eps));
                let (_, trace) = result?;
                rec.mean_seconds = Some(mean);
                rec.encode_seconds = Some(encode);
                rec.iterations = Some(trace.iterations);
                rec.model_count = Some(1);
            }
        }
        out.push(rec);
    }
    Ok(out)
}

/// Benchmarks stable-model computation of a normal program on each backend.
pub fn bench_normal(
    id: &str,
    p: &NormalProgram,
    backends: &[BenchBackend],
    trials: usize,
    config: &SolverConfig,
) -> Result<Vec<BenchRecord>, SolveError> {
    let start = Instant::now();
    let system = NormalSystem::new(p, config.guess_cap)?;
    let encode = start.elapsed().as_secs_f64();
    let s = sparsity_normal(&system.program, &system.matrix);
    let base = Base {
        n: p.atoms().len(),
        m: p.len(),
        k: p.negative_literal_count(),
        n_prime: system.side(),
        sparsity: s.body_based,
        nnz_sparsity: s.nnz_based,
    };
    let mut out = Vec::with_capacity(backends.len());
    for &b in backends {
        let mut rec = base.record(id, b, trials);
        match b.matrix_backend() {
            None => {
                let (mean, models) = mean_time(trials, || stable_models_symbolic_guess(&system));
                rec.mean_seconds = Some(mean);
                rec.model_count = Some(models.len());
            }
            Some(backend) => {
                let cfg = SolverConfig { backend, ..*config };
                let op = match system.operator(&cfg) {
                    Ok(op) => op,
                    Err(SolveError::DenseMemoryBound { .. }) => {
                        rec.skipped = Some("memory bound".into());
                        out.push(rec);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let (mean, result) = mean_time(trials, || system.solve(&op, cfg.eps));
                let (models, trace) = result?;
                rec.mean_seconds = Some(mean);
                rec.encode_seconds = Some(encode);
                rec.iterations = Some(trace.iterations);
                rec.model_count = Some(models.len());
            }
        }
        out.push(rec);
    }
    Ok(out)
}

/// Dispatches on whether `p` has negation.
pub fn bench_program(
    id: &str,
    p: &NormalProgram,
    backends: &[BenchBackend],
    trials: usize,
    config: &SolverConfig,
) -> Result<Vec<BenchRecord>, SolveError> {
    if p.is_definite() {
        let d = DefiniteProgram::try_from(p.clone()).expect("checked definite");
        bench_definite(id, &d, backends, trials, config)
    } else {
        bench_normal(id, p, backends, trials, config)
    }
}

/// Fixed-width table of records, one row per record.
pub fn render_table(records: &[BenchRecord]) -> String {
    let mut s = format!(
        "{:<24} {:>7} {:>8} {:>8} {:>3} {:>8} {:>9} {:>12} {:>12}\n",
        "program", "n", "m", "n'", "k", "sparsity", "backend", "mean_s", "encode_s"
    );
    let secs = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
    for r in records {
        s.push_str(&format!(
            "{:<24} {:>7} {:>8} {:>8} {:>3} {:>8.4} {:>9} {:>12} {:>12}\n",
            r.program,
            r.n,
            r.m,
            r.n_prime,
            r.k,
            r.sparsity,
            r.backend.as_str(),
            secs(r.mean_seconds),
            secs(r.encode_seconds),
        ));
    }
    s
}
