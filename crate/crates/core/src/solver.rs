//! Fixpoint computation in vector space.
//!
//! A definite program is standardized and encoded, then `v <- theta(M v)` is
//! iterated from the initial vector. A normal program is put in positive
//! form first and every column of the guess matrix is iterated the same way;
//! columns in which each negation atom is the complement of its atom are the
//! stable models.

use std::fmt;
use std::str::FromStr;

use crate::encoder::{
    encode_normal_matrix, encode_program_matrix, initial_guess_matrix, initial_vector, GuessMatrix,
    ProgramMatrix, DEFAULT_GUESS_CAP,
};
use crate::error::SolveError;
use crate::linalg::{theta_in_place, BinaryVector, CsrMatrix, DenseMatrix, MatrixOperator, DEFAULT_EPS};
use crate::program::{AtomId, AtomSet, DefiniteProgram, NormalProgram, StandardizedProgram};
use crate::semantics::ModelSet;
use crate::transform::{positive_form, standardize, StandardizationMap, StandardizedNormal};

/// Default ceiling on the memory of a dense program matrix (1 GiB).
pub const DEFAULT_DENSE_LIMIT_BYTES: u64 = 1 << 30;

/// Bytes needed by a dense `side x side` matrix of `f64`.
pub fn dense_bytes(side: usize) -> u64 {
    (side as u64).saturating_mul(side as u64).saturating_mul(8)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Sparse,
    Dense,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Sparse => "sparse",
            Backend::Dense => "dense",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sparse" => Ok(Backend::Sparse),
            "dense" => Ok(Backend::Dense),
            other => Err(format!("unknown backend `{other}` (expected sparse or dense)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub backend: Backend,
    pub eps: f64,
    /// Largest number of free negation atoms enumerated by the guess matrix.
    pub guess_cap: usize,
    pub dense_limit_bytes: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: Backend::Sparse,
            eps: DEFAULT_EPS,
            guess_cap: DEFAULT_GUESS_CAP,
            dense_limit_bytes: DEFAULT_DENSE_LIMIT_BYTES,
        }
    }
}

impl SolverConfig {
    pub fn with_backend(backend: Backend) -> Self {
        SolverConfig {
            backend,
            ..Self::default()
        }
    }
}

/// A program matrix in the storage format of one backend.
#[derive(Clone, Debug)]
pub enum Operator {
    Sparse(CsrMatrix),
    Dense(DenseMatrix),
}

impl Operator {
    /// Converts `m` for `backend`. The dense form is refused above `limit`
    /// bytes.
    pub fn build(m: &ProgramMatrix, backend: Backend, limit: u64) -> Result<Self, SolveError> {
        match backend {
            Backend::Sparse => Ok(Operator::Sparse(m.matrix.clone())),
            Backend::Dense => {
                let side = m.side();
                let bytes = dense_bytes(side);
                if bytes > limit {
                    return Err(SolveError::DenseMemoryBound { side, bytes, limit });
                }
                Ok(Operator::Dense(m.matrix.to_dense()))
            }
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Operator::Sparse(_) => Backend::Sparse,
            Operator::Dense(_) => Backend::Dense,
        }
    }
}

impl MatrixOperator for Operator {
    fn rows(&self) -> usize {
        match self {
            Operator::Sparse(m) => m.rows(),
            Operator::Dense(m) => m.rows(),
        }
    }

    fn cols(&self) -> usize {
        match self {
            Operator::Sparse(m) => m.cols(),
            Operator::Dense(m) => m.cols(),
        }
    }

    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        match self {
            Operator::Sparse(m) => m.mul_vec_into(x, y),
            Operator::Dense(m) => m.mul_vec_into(x, y),
        }
    }

    fn mul_mat_into(&self, b: &[f64], k: usize, out: &mut [f64]) {
        match self {
            Operator::Sparse(m) => m.mul_mat_into(b, k, out),
            Operator::Dense(m) => m.mul_mat_into(b, k, out),
        }
    }
}

/// Record of one fixpoint run.
#[derive(Clone, Debug, PartialEq)]
pub struct FixpointTrace {
    /// The seed counts as the first iteration; every product adds one,
    /// including the last one that confirms the fixpoint.
    pub iterations: usize,
    pub converged: bool,
    /// Final state, one column per seed column.
    pub state: DenseMatrix,
    /// Ones in the state after each iteration, the seed first.
    pub per_iteration_nonzeros: Vec<usize>,
}

impl FixpointTrace {
    /// Matrix products performed.
    pub fn products(&self) -> usize {
        self.iterations - 1
    }
}

/// Iterates `X <- theta(A X)` from `seed` until no column changes.
///
/// A column that reproduces itself is frozen and skipped by later products;
/// a zero column is frozen from the start. Gives up after `rows + 1`
/// products, which a monotone encoding never needs.
pub fn run_fixpoint<M: MatrixOperator + ?Sized>(op: &M, seed: DenseMatrix, eps: f64) -> FixpointTrace {
    let n = seed.rows();
    let k = seed.cols();
    assert_eq!(op.cols(), n, "seed height must match the operator");
    assert_eq!(op.rows(), n, "operator must be square");
    let max_products = n + 1;

    let mut state = seed;
    let mut nonzeros = vec![state.count_nonzeros()];
    let mut active: Vec<usize> = (0..k)
        .filter(|&c| (0..n).any(|r| state.get(r, c) != 0.0))
        .collect();
    let mut products = 0;
    let mut input = Vec::new();
    let mut output = Vec::new();

    while !active.is_empty() && products < max_products {
        let ka = active.len();
        output.resize(n * ka, 0.0);
        let source: &[f64] = if ka == k {
            state.as_slice()
        } else {
            input.clear();
            input.reserve(n * ka);
            let data = state.as_slice();
            for r in 0..n {
                input.extend(active.iter().map(|&c| data[r * k + c]));
            }
            &input
        };
        if ka == 1 {
            op.mul_vec_into(source, &mut output);
        } else {
            op.mul_mat_into(source, ka, &mut output);
        }
        theta_in_place(&mut output, eps);
        products += 1;

        let data = state.as_mut_slice();
        let mut changed = vec![false; ka];
        for r in 0..n {
            for (j, &c) in active.iter().enumerate() {
                let v = output[r * ka + j];
                let slot = &mut data[r * k + c];
                if *slot != v {
                    *slot = v;
                    changed[j] = true;
                }
            }
        }
        active = active
            .iter()
            .zip(&changed)
            .filter(|(_, ch)| **ch)
            .map(|(c, _)| *c)
            .collect();
        nonzeros.push(state.count_nonzeros());
    }

    FixpointTrace {
        iterations: 1 + products,
        converged: active.is_empty(),
        state,
        per_iteration_nonzeros: nonzeros,
    }
}

fn checked(trace: FixpointTrace) -> Result<FixpointTrace, SolveError> {
    if trace.converged {
        Ok(trace)
    } else {
        Err(SolveError::NoConvergence {
            iterations: trace.iterations,
            atoms: trace.state.rows(),
        })
    }
}

/// A definite program made ready for iteration: standardized, encoded and
/// seeded.
#[derive(Clone, Debug)]
pub struct DefiniteSystem {
    pub standardized: StandardizedProgram,
    pub map: StandardizationMap,
    pub matrix: ProgramMatrix,
    pub seed: BinaryVector,
}

impl DefiniteSystem {
    pub fn new(p: &DefiniteProgram) -> Result<Self, SolveError> {
        let (standardized, map) = standardize(p);
        let matrix = encode_program_matrix(&standardized)?;
        let seed = initial_vector(&standardized);
        Ok(DefiniteSystem {
            standardized,
            map,
            matrix,
            seed,
        })
    }

    /// Matrix side, i.e. atoms after standardization.
    pub fn side(&self) -> usize {
        self.matrix.side()
    }

    pub fn original_count(&self) -> usize {
        self.map.original_count
    }

    pub fn operator(&self, config: &SolverConfig) -> Result<Operator, SolveError> {
        Operator::build(&self.matrix, config.backend, config.dense_limit_bytes)
    }

    /// Runs the fixpoint loop; the model is restricted to original atoms.
    pub fn solve(&self, op: &Operator, eps: f64) -> Result<(AtomSet, FixpointTrace), SolveError> {
        let trace = checked(run_fixpoint(op, self.seed.as_matrix().clone(), eps))?;
        let n = self.original_count();
        let model = (0..n)
            .filter(|&i| trace.state.get(i, 0) == 1.0)
            .map(AtomId::new)
            .collect();
        Ok((model, trace))
    }
}

/// Least model of a definite program, restricted to its own atoms.
pub fn least_model_linalg(
    p: &DefiniteProgram,
    config: &SolverConfig,
) -> Result<(AtomSet, FixpointTrace), SolveError> {
    let system = DefiniteSystem::new(p)?;
    let op = system.operator(config)?;
    system.solve(&op, config.eps)
}

/// A normal program made ready for iteration: positive form, standardized,
/// encoded, with its guess matrix.
#[derive(Clone, Debug)]
pub struct NormalSystem {
    pub program: StandardizedNormal,
    pub matrix: ProgramMatrix,
    pub guess: GuessMatrix,
}

impl NormalSystem {
    pub fn new(p: &NormalProgram, guess_cap: usize) -> Result<Self, SolveError> {
        let program = positive_form(p).standardize();
        let matrix = encode_normal_matrix(&program)?;
        let guess = initial_guess_matrix(&program, guess_cap)?;
        Ok(NormalSystem {
            program,
            matrix,
            guess,
        })
    }

    pub fn side(&self) -> usize {
        self.matrix.side()
    }

    pub fn operator(&self, config: &SolverConfig) -> Result<Operator, SolveError> {
        Operator::build(&self.matrix, config.backend, config.dense_limit_bytes)
    }

    pub fn solve(&self, op: &Operator, eps: f64) -> Result<(ModelSet, FixpointTrace), SolveError> {
        let trace = checked(run_fixpoint(op, self.guess.matrix.clone(), eps))?;
        let models = filter_stable_columns(&trace.state, &self.program);
        Ok((models, trace))
    }
}

/// Stable models of a normal program.
pub fn stable_models_linalg(
    p: &NormalProgram,
    config: &SolverConfig,
) -> Result<(ModelSet, FixpointTrace), SolveError> {
    let system = NormalSystem::new(p, config.guess_cap)?;
    let op = system.operator(config)?;
    system.solve(&op, config.eps)
}

/// Keeps the columns of a converged candidate matrix in which every negation
/// atom is one exactly when its atom is zero, restricted to original atoms.
pub fn filter_stable_columns(fixpoint: &DenseMatrix, sn: &StandardizedNormal) -> ModelSet {
    let n = sn.n();
    (0..fixpoint.cols())
        .filter(|&c| {
            sn.neg_rows()
                .iter()
                .all(|(neg, atom)| fixpoint.get(atom.index(), c) + fixpoint.get(neg.index(), c) == 1.0)
        })
        .map(|c| {
            (0..n)
                .filter(|&i| fixpoint.get(i, c) == 1.0)
                .map(AtomId::new)
                .collect::<AtomSet>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, example2};
    use crate::program::Program;
    use crate::semantics::{stable_models_bruteforce, verify_stable, BRUTE_FORCE_CAP};

    fn normal(p: Program) -> NormalProgram {
        NormalProgram::new(p).unwrap()
    }

    fn names(p: &Program, models: &ModelSet) -> Vec<Vec<String>> {
        models
            .iter()
            .map(|m| m.names(p.atoms()).into_iter().map(str::to_owned).collect())
            .collect()
    }

    #[test]
    fn example1_least_model_both_backends() {
        let p = example1();
        for backend in [Backend::Sparse, Backend::Dense] {
            let (m, trace) = least_model_linalg(&p, &SolverConfig::with_backend(backend)).unwrap();
            assert_eq!(m.names(p.atoms()), ["p", "q", "r", "s", "t"]);
            assert_eq!(trace.iterations, 4);
            assert!(trace.converged);
            assert_eq!(trace.per_iteration_nonzeros, [2, 5, 7, 7]);
        }
    }

    #[test]
    fn trivial_least_models() {
        let cfg = SolverConfig::default();
        let (m, trace) = least_model_linalg(&DefiniteProgram::default(), &cfg).unwrap();
        assert!(m.is_empty());
        assert_eq!(trace.iterations, 1);

        let facts = DefiniteProgram::new(Program::builder().fact("s").fact("t").build()).unwrap();
        let (m, trace) = least_model_linalg(&facts, &cfg).unwrap();
        assert_eq!(m.names(facts.atoms()), ["s", "t"]);
        assert!(trace.iterations <= 2);

        let no_facts = DefiniteProgram::new(Program::builder().rule("p", &["q"]).build()).unwrap();
        let (m, trace) = least_model_linalg(&no_facts, &cfg).unwrap();
        assert!(m.is_empty());
        assert_eq!(trace.iterations, 1);
    }

    #[test]
    fn example2_stable_models() {
        let p = example2();
        for backend in [Backend::Sparse, Backend::Dense] {
            let (models, trace) = stable_models_linalg(&p, &SolverConfig::with_backend(backend)).unwrap();
            assert_eq!(names(&p, &models), [vec!["t"]]);
            assert_eq!(trace.state.cols(), 1);
        }
    }

    #[test]
    fn even_and_odd_loops() {
        let cfg = SolverConfig::default();
        let p = normal(Program::builder().rule("p", &["not q"]).rule("q", &["not p"]).build());
        let (models, trace) = stable_models_linalg(&p, &cfg).unwrap();
        assert_eq!(names(&p, &models), [vec!["p"], vec!["q"]]);
        assert_eq!(trace.state.cols(), 4);
        assert_eq!(models, stable_models_bruteforce(&p, BRUTE_FORCE_CAP).unwrap());

        let odd = normal(Program::builder().rule("p", &["not p"]).build());
        let (models, _) = stable_models_linalg(&odd, &cfg).unwrap();
        assert!(models.is_empty());
    }

    #[test]
    fn filter_checks_complementarity() {
        let p = normal(Program::builder().rule("p", &["not q"]).rule("q", &["not p"]).build());
        let sn = positive_form(&p).standardize();
        // rows: p, q, _not_p, _not_q
        let cols = [
            (vec![1.0, 0.0, 0.0, 1.0], true),
            (vec![1.0, 0.0, 1.0, 1.0], false),
            (vec![0.0, 0.0, 0.0, 0.0], false),
            (vec![0.0, 1.0, 1.0, 0.0], true),
        ];
        for (col, accept) in cols {
            let m = DenseMatrix::column_vector(&col);
            assert_eq!(filter_stable_columns(&m, &sn).len() == 1, accept, "{col:?}");
        }
    }

    #[test]
    fn audit_accepts_every_model() {
        let p = example2();
        let (models, _) = stable_models_linalg(&p, &SolverConfig::default()).unwrap();
        assert!(models.iter().all(|m| verify_stable(&p, m)));
        let t_and_s = AtomSet::from_names(p.atoms(), &["t", "s"]);
        assert!(!verify_stable(&p, &t_and_s));
    }

    #[test]
    fn dense_limit_is_enforced() {
        let cfg = SolverConfig {
            backend: Backend::Dense,
            dense_limit_bytes: 8 * 48,
            ..SolverConfig::default()
        };
        assert!(matches!(
            least_model_linalg(&example1(), &cfg),
            Err(SolveError::DenseMemoryBound { side: 7, bytes: 392, .. })
        ));
    }

    #[test]
    fn frozen_columns_match_whole_matrix_iteration() {
        let p = normal(
            Program::builder()
                .rule("a", &["not b"])
                .rule("b", &["not a"])
                .rule("c", &["a", "d"])
                .rule("d", &["c"])
                .rule("d", &["b"])
                .rule("e", &["not c"])
                .build(),
        );
        let system = NormalSystem::new(&p, DEFAULT_GUESS_CAP).unwrap();
        let op = Operator::Sparse(system.matrix.matrix.clone());
        let trace = run_fixpoint(&op, system.guess.matrix.clone(), DEFAULT_EPS);
        for c in 0..system.guess.columns() {
            let seed = DenseMatrix::column_vector(&system.guess.matrix.column(c));
            let single = run_fixpoint(&op, seed, DEFAULT_EPS);
            assert_eq!(single.state.column(0), trace.state.column(c));
        }
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("dense".parse::<Backend>().unwrap(), Backend::Dense);
        assert!("gpu".parse::<Backend>().is_err());
        assert_eq!(Backend::Sparse.to_string(), "sparse");
    }
}
