//! Workloads shared by the criterion benches.

use sparselp::{
    gen_definite, gen_denser, gen_normal, DefiniteProgram, DefiniteSystem, DenseMatrix, GenProfile,
    NormalProgram, NormalSystem, ProfileKind,
};

/// Sizes small enough that the dense backend stays within a benchmark budget.
pub const DEFINITE_SIZES: [(usize, usize); 3] = [(200, 1000), (500, 2500), (1000, 5000)];

pub fn definite(kind: ProfileKind, n: usize, m: usize, seed: u64) -> DefiniteProgram {
    match kind {
        ProfileKind::Table1 => gen_definite(&GenProfile::table1(n, m, seed)),
        ProfileKind::Denser => gen_denser(&GenProfile::denser(n, m, seed)),
    }
    .expect("benchmark sizes are feasible")
}

pub fn definite_system(kind: ProfileKind, n: usize, m: usize, seed: u64) -> DefiniteSystem {
    DefiniteSystem::new(&definite(kind, n, m, seed)).expect("generated programs encode")
}

/// A normal program whose negations leave `free` atoms to guess, where the
/// generator allows it.
pub fn normal(n: usize, m: usize, k: usize, seed: u64) -> NormalProgram {
    gen_normal(&GenProfile::table1(n, m, seed).with_negations(k)).expect("benchmark sizes are feasible")
}

pub fn normal_system(n: usize, m: usize, k: usize, seed: u64) -> NormalSystem {
    NormalSystem::new(&normal(n, m, k, seed), 20).expect("guess matrix fits the cap")
}

/// Deterministic 0/1 block of `cols` columns with roughly one third ones.
pub fn binary_block(rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols).map(|i| ((i * 7 + i / 3) % 3 == 0) as u8 as f64).collect();
    DenseMatrix::from_vec(rows, cols, data).expect("shape matches")
}
