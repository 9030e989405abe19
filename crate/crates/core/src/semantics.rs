//! Reference semantics: the immediate-consequence operator, least models,
//! the Gelfond–Lifschitz reduct and a brute-force stable-model enumerator.
//!
//! Nothing here touches matrices. These functions are the ground truth the
//! numeric solver is checked against.

use crate::error::SolveError;
use crate::program::{
    AtomId, AtomSet, Connective, DefiniteProgram, NormalProgram, Program, Rule,
    StandardizedProgram,
};

/// Largest atom count [`stable_models_bruteforce`] accepts by default.
pub const BRUTE_FORCE_CAP: usize = 20;

mod sealed {
    pub trait Sealed {}
    impl Sealed for crate::program::DefiniteProgram {}
    impl Sealed for crate::program::StandardizedProgram {}
}

/// Negation-free programs on which the consequence operator is monotone.
pub trait PositiveProgram: sealed::Sealed + std::ops::Deref<Target = Program> {}
impl PositiveProgram for DefiniteProgram {}
impl PositiveProgram for StandardizedProgram {}

fn fires(rule: &Rule, current: &[bool]) -> bool {
    match rule.connective() {
        Connective::And => rule.pos_body().iter().all(|a| current[a.index()]),
        Connective::Or => rule.pos_body().iter().any(|a| current[a.index()]),
    }
}

fn step_mask(rules: &[Rule], current: &[bool], next: &mut [bool]) {
    next.fill(false);
    for rule in rules {
        if fires(rule, current) {
            next[rule.head().index()] = true;
        }
    }
}

/// One application of the immediate-consequence operator.
///
/// Heads of conjunctive rules whose body is contained in `i`, plus heads of
/// OR-rules whose body meets `i`. Several rules may share a head.
pub fn tp_step<P: PositiveProgram>(p: &P, i: &AtomSet) -> AtomSet {
    let n = p.atoms().len();
    let mut next = vec![false; n];
    step_mask(p.rules(), &i.to_mask(n), &mut next);
    AtomSet::from_mask(&next)
}

/// Least fixpoint of [`tp_step`] from the empty interpretation.
pub fn least_model_symbolic<P: PositiveProgram>(p: &P) -> AtomSet {
    least_model_traced(p).0
}

/// Least model plus the number of operator applications performed, the last
/// one being the pass that confirms the fixpoint.
///
/// Callers must pass a negation-free program; negative literals are ignored.
pub fn least_model_traced(p: &Program) -> (AtomSet, usize) {
    let n = p.atoms().len();
    let mut current = vec![false; n];
    let mut next = vec![false; n];
    let mut iterations = 0;
    loop {
        step_mask(p.rules(), &current, &mut next);
        iterations += 1;
        if next == current {
            return (AtomSet::from_mask(&current), iterations);
        }
        std::mem::swap(&mut current, &mut next);
    }
}

/// Whether `i` satisfies every rule of `p`.
pub fn is_model<P: PositiveProgram>(p: &P, i: &AtomSet) -> bool {
    let mask = i.to_mask(p.atoms().len());
    p.rules()
        .iter()
        .all(|r| !fires(r, &mask) || mask[r.head().index()])
}

/// Gelfond–Lifschitz reduct: drop rules whose negative body meets `i`, then
/// strip the negative bodies of the survivors.
pub fn gl_reduct(p: &NormalProgram, i: &AtomSet) -> DefiniteProgram {
    let rules = p
        .rules()
        .iter()
        .filter(|r| r.neg_body().iter().all(|a| !i.contains(*a)))
        .map(Rule::without_negation)
        .collect();
    let program = Program::new(p.atoms().clone(), rules).expect("reduct keeps atom ids");
    DefiniteProgram::new(program).expect("reduct has no negation")
}

/// Deduplicated, lexicographically sorted set of models.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModelSet(Vec<AtomSet>);

impl ModelSet {
    pub fn new(models: impl IntoIterator<Item = AtomSet>) -> Self {
        let mut models: Vec<_> = models.into_iter().collect();
        models.sort();
        models.dedup();
        ModelSet(models)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AtomSet> {
        self.0.iter()
    }

    pub fn contains(&self, m: &AtomSet) -> bool {
        self.0.binary_search(m).is_ok()
    }

    pub fn as_slice(&self) -> &[AtomSet] {
        &self.0
    }
}

impl FromIterator<AtomSet> for ModelSet {
    fn from_iter<I: IntoIterator<Item = AtomSet>>(iter: I) -> Self {
        ModelSet::new(iter)
    }
}

/// Every interpretation `I` with `I = least_model(gl_reduct(p, I))`, found by
/// enumerating all `2^n` subsets of the atom table.
pub fn stable_models_bruteforce(p: &NormalProgram, cap: usize) -> Result<ModelSet, SolveError> {
    let n = p.atoms().len();
    if n > cap || n >= 64 {
        return Err(SolveError::TooManyAtoms { atoms: n, cap });
    }
    let bits = |atoms: &[AtomId]| atoms.iter().fold(0u64, |m, a| m | 1 << a.index());
    let rules: Vec<(u64, u64, u64)> = p
        .rules()
        .iter()
        .map(|r| (1u64 << r.head().index(), bits(r.pos_body()), bits(r.neg_body())))
        .collect();

    let mut models = Vec::new();
    for guess in 0u64..(1u64 << n) {
        let mut lm = 0u64;
        loop {
            let next = rules
                .iter()
                .filter(|(_, pos, neg)| neg & guess == 0 && pos & lm == *pos)
                .fold(0u64, |acc, (head, _, _)| acc | head);
            if next == lm {
                break;
            }
            lm = next;
        }
        if lm == guess {
            models.push((0..n).filter(|i| guess >> i & 1 == 1).map(AtomId::new).collect());
        }
    }
    Ok(ModelSet::new(models))
}

/// Whether `candidate` is a stable model of `p`.
pub fn verify_stable(p: &NormalProgram, candidate: &AtomSet) -> bool {
    least_model_symbolic(&gl_reduct(p, candidate)) == *candidate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, example1_standardized, example2};

    fn set(p: &Program, names: &[&str]) -> AtomSet {
        AtomSet::from_names(p.atoms(), names)
    }

    #[test]
    fn tp_step_on_example1_standardized() {
        let p = example1_standardized();
        assert_eq!(tp_step(&p, &AtomSet::new()), set(&p, &["s", "t"]));
        assert_eq!(
            tp_step(&p, &set(&p, &["s", "t"])),
            set(&p, &["s", "t", "q", "r", "v"])
        );
        let all = set(&p, &["p", "q", "r", "s", "t", "u", "v"]);
        assert_eq!(tp_step(&p, &all), all);
    }

    #[test]
    fn least_model_of_example1_standardized() {
        let p = example1_standardized();
        let (lm, iterations) = least_model_traced(&p);
        assert_eq!(lm, set(&p, &["p", "q", "r", "s", "t", "u", "v"]));
        // empty -> {s,t} -> {q,r,s,t,v} -> all -> all
        assert_eq!(iterations, 4);
        assert!(iterations <= p.atoms().len() + 1);
    }

    #[test]
    fn least_model_small_cases() {
        let empty = DefiniteProgram::default();
        assert!(least_model_symbolic(&empty).is_empty());
        let chain = DefiniteProgram::new(Program::builder().fact("p").rule("q", &["p"]).build()).unwrap();
        assert_eq!(least_model_symbolic(&chain), set(&chain, &["p", "q"]));
    }

    #[test]
    fn least_model_of_raw_example1() {
        let p = example1();
        assert_eq!(least_model_symbolic(&p), set(&p, &["p", "q", "r", "s", "t"]));
        assert!(is_model(&p, &least_model_symbolic(&p)));
    }

    #[test]
    fn reduct_of_example2() {
        let p = example2();
        let reduct = gl_reduct(&p, &set(&p, &["t"]));
        let rendered: std::collections::BTreeSet<String> = reduct
            .rules()
            .iter()
            .map(|r| r.display(reduct.atoms()).to_string())
            .collect();
        let expected = ["p :- q, s.", "q :- p, t.", "t.", "u :- v."];
        assert_eq!(rendered, expected.iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn reduct_with_empty_interpretation_keeps_all_rules() {
        let p = example2();
        let reduct = gl_reduct(&p, &AtomSet::new());
        assert_eq!(reduct.len(), p.len());
    }

    #[test]
    fn reduct_of_definite_program_is_identity() {
        let p: NormalProgram = example1().into();
        let i = set(&p, &["p", "s"]);
        let reduct = gl_reduct(&p, &i);
        assert!(reduct.same_structure(&p));
    }

    #[test]
    fn bruteforce_stable_models() {
        let p = example2();
        let models = stable_models_bruteforce(&p, BRUTE_FORCE_CAP).unwrap();
        assert_eq!(models.as_slice(), &[set(&p, &["t"])]);

        let even = NormalProgram::new(Program::builder().rule("p", &["not q"]).rule("q", &["not p"]).build()).unwrap();
        let models = stable_models_bruteforce(&even, BRUTE_FORCE_CAP).unwrap();
        assert_eq!(models.as_slice(), &[set(&even, &["p"]), set(&even, &["q"])]);

        let odd = NormalProgram::new(Program::builder().rule("p", &["not p"]).build()).unwrap();
        assert!(stable_models_bruteforce(&odd, BRUTE_FORCE_CAP).unwrap().is_empty());
    }

    #[test]
    fn bruteforce_respects_cap() {
        let mut b = Program::builder();
        for i in 0..21 {
            b = b.fact(&format!("a{i}"));
        }
        let p = NormalProgram::new(b.build()).unwrap();
        assert!(matches!(
            stable_models_bruteforce(&p, BRUTE_FORCE_CAP),
            Err(SolveError::TooManyAtoms { atoms: 21, cap: 20 })
        ));
    }

    #[test]
    fn verify_stable_examples() {
        let p = example2();
        assert!(verify_stable(&p, &set(&p, &["t"])));
        assert!(!verify_stable(&p, &set(&p, &["t", "s"])));
        let d: NormalProgram = example1().into();
        let lm = least_model_symbolic(&example1());
        assert!(verify_stable(&d, &lm));
    }
}
