//! The two worked example programs, with atoms in their canonical order.

use crate::program::{AtomTable, DefiniteProgram, NormalProgram, Program, Rule, StandardizedProgram};

/// `{p <- q & r, p <- s & t, r <- s, q <- t, s <-, t <-}` with atom order
/// `p, q, r, s, t`.
pub fn example1() -> DefiniteProgram {
    let p = Program::builder()
        .rule("p", &["q", "r"])
        .rule("p", &["s", "t"])
        .rule("r", &["s"])
        .rule("q", &["t"])
        .fact("s")
        .fact("t")
        .build();
    DefiniteProgram::new(p).expect("example1 is definite")
}

/// Standardized form of [`example1`] with auxiliary atoms named `u` and `v`
/// (atom order `p, q, r, s, t, u, v`).
pub fn example1_standardized() -> StandardizedProgram {
    let mut atoms = AtomTable::new();
    let [p, q, r, s, t, u, v] = ["p", "q", "r", "s", "t", "u", "v"].map(|n| atoms.intern(n));
    let rules = vec![
        Rule::definite(u, [q, r]),
        Rule::definite(v, [s, t]),
        Rule::or(p, [u, v]).expect("non-empty"),
        Rule::definite(r, [s]),
        Rule::definite(q, [t]),
        Rule::fact(s),
        Rule::fact(t),
    ];
    let program = Program::new(atoms, rules).expect("atoms interned");
    StandardizedProgram::new(program).expect("example1_standardized is standardized")
}

/// `{p <- q & s, q <- p & t, s <- not t, t <-, u <- v}` with atom order
/// `p, q, s, t, u, v`.
pub fn example2() -> NormalProgram {
    let p = Program::builder()
        .rule("p", &["q", "s"])
        .rule("q", &["p", "t"])
        .rule("s", &["not t"])
        .fact("t")
        .rule("u", &["v"])
        .build();
    NormalProgram::new(p).expect("example2 has no OR-rules")
}

/// Source text of [`example1`] in the `.lp` format.
pub const EXAMPLE1_LP: &str = "p :- q, r.\np :- s, t.\nr :- s.\nq :- t.\ns.\nt.\n";

/// Source text of [`example2`] in the `.lp` format.
pub const EXAMPLE2_LP: &str = "p :- q, s.\nq :- p, t.\ns :- not t.\nt.\nu :- v.\n";
