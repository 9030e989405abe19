//! Least models of definite logic programs and stable models of normal
//! programs, computed by iterating a thresholded sparse program matrix.
//!
//! ```
//! use sparselp::{parse_program, least_model_linalg, SolverConfig};
//!
//! let p = parse_program("p :- q, r.\nq.\nr :- q.\n").unwrap();
//! let p = p.into_definite().unwrap();
//! let (model, _) = least_model_linalg(&p, &SolverConfig::default()).unwrap();
//! assert_eq!(model.names(p.atoms()), ["p", "q", "r"]);
//! ```

pub mod bench;
pub mod encoder;
pub mod error;
pub mod fixtures;
pub mod generator;
pub mod graph;
pub mod linalg;
pub mod program;
pub mod semantics;
pub mod solver;
pub mod syntax;
pub mod transform;

pub use encoder::{
    encode_normal_matrix, encode_program_matrix, initial_guess_matrix, initial_vector, sparsity,
    GuessMatrix, ProgramMatrix, Sparsity,
};
pub use error::{EncodeError, GenError, GraphError, LinalgError, ParseError, ProgramError, SolveError};
pub use linalg::{BinaryVector, CooMatrix, CsrMatrix, DenseMatrix};
pub use program::{
    AtomId, AtomOrigin, AtomSet, AtomTable, Connective, DefiniteProgram, NormalProgram, Program,
    Rule, StandardizedProgram,
};
pub use semantics::{
    gl_reduct, least_model_symbolic, stable_models_bruteforce, tp_step, verify_stable, ModelSet,
    BRUTE_FORCE_CAP,
};
pub use solver::{
    filter_stable_columns, least_model_linalg, stable_models_linalg, Backend, DefiniteSystem,
    FixpointTrace, NormalSystem, SolverConfig,
};
pub use transform::{positive_form, standardize, PositiveFormProgram, StandardizationMap};
pub use generator::{gen_definite, gen_denser, gen_normal, GenProfile, ProfileKind};
pub use graph::{ground_transitive_closure, load_edge_list, Graph};
pub use syntax::{parse_program, parse_program_with_warnings, serialize_program, ParseWarning};
pub use bench::{program_stats, BenchBackend, BenchRecord, ProgramStats};
