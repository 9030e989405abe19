//! Program-to-program rewrites that precede matrix encoding.
//!
//! * [`standardize`] gives every multiply-defined head a fresh auxiliary atom
//!   per defining rule and joins them with one OR-rule.
//! * [`positive_form`] replaces each negative literal `not b` by a fresh atom
//!   standing for the negation of `b`.
//!
//! For normal programs the positive form is built first, so the final atom
//! order is: original atoms, negation atoms, auxiliary atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::program::{
    AtomId, AtomOrigin, DefiniteProgram, NormalProgram, Program, Rule, StandardizedProgram,
};

/// Provenance of the auxiliary atoms added by [`standardize`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StandardizationMap {
    /// Auxiliary atom to the index of the input rule it replaces.
    pub aux_of: BTreeMap<AtomId, usize>,
    /// Atom count of the input program; auxiliary ids start here.
    pub original_count: usize,
}

impl StandardizationMap {
    pub fn is_empty(&self) -> bool {
        self.aux_of.is_empty()
    }

    pub fn is_auxiliary(&self, atom: AtomId) -> bool {
        atom.index() >= self.original_count
    }
}

/// Rewrites a definite program so that no two conjunctive rules share a head.
///
/// For a head `h` defined by rules `r1..rk` (`k >= 2`), emits `xi <- body(ri)`
/// for fresh atoms `x1..xk` and `h <- x1 ; ... ; xk`. A fact `h <-` among them
/// becomes the auxiliary fact `xi <-`. Heads with a single rule are kept.
pub fn standardize(p: &DefiniteProgram) -> (StandardizedProgram, StandardizationMap) {
    let mut atoms = p.atoms().clone();
    let original_count = atoms.len();

    let mut defs: HashMap<AtomId, usize> = HashMap::new();
    for rule in p.rules() {
        *defs.entry(rule.head()).or_default() += 1;
    }

    let mut rules = Vec::with_capacity(p.len() + defs.len());
    let mut aux_of = BTreeMap::new();
    // head -> auxiliaries, in order of the head's first definition
    let mut groups: Vec<(AtomId, Vec<AtomId>)> = Vec::new();
    let mut group_of: HashMap<AtomId, usize> = HashMap::new();

    for (index, rule) in p.rules().iter().enumerate() {
        let head = rule.head();
        if defs[&head] < 2 {
            rules.push(rule.clone());
            continue;
        }
        let g = *group_of.entry(head).or_insert_with(|| {
            groups.push((head, Vec::new()));
            groups.len() - 1
        });
        let ordinal = groups[g].1.len() + 1;
        let base = format!("_aux_{}_{}", atoms.name(head), ordinal);
        let aux = atoms.fresh(&base, AtomOrigin::Auxiliary);
        aux_of.insert(aux, index);
        groups[g].1.push(aux);
        rules.push(Rule::definite(aux, rule.pos_body().iter().copied()));
    }
    for (head, auxes) in groups {
        rules.push(Rule::or(head, auxes).expect("group has at least two members"));
    }

    let program = Program::new(atoms, rules).expect("standardization interns every atom");
    let program = StandardizedProgram::new(program).expect("standardization yields distinct heads");
    (
        program,
        StandardizationMap {
            aux_of,
            original_count,
        },
    )
}

/// A normal program rewritten without negation, plus the pairing between
/// negation atoms and the atoms they negate.
#[derive(Clone, Debug)]
pub struct PositiveFormProgram {
    pub program: DefiniteProgram,
    /// Number of original atoms; negation atoms follow them.
    pub n: usize,
    /// Negation atom to the original atom it negates.
    pub neg_rows: BTreeMap<AtomId, AtomId>,
}

impl PositiveFormProgram {
    /// Atoms that are facts of the source program.
    pub fn facts(&self) -> BTreeSet<AtomId> {
        self.program
            .rules()
            .iter()
            .filter(|r| r.is_fact())
            .map(Rule::head)
            .collect()
    }

    pub fn is_negation_atom(&self, atom: AtomId) -> bool {
        self.neg_rows.contains_key(&atom)
    }

    /// Standardizes the positive form; auxiliary atoms follow negation atoms.
    pub fn standardize(&self) -> StandardizedNormal {
        let (standardized, map) = standardize(&self.program);
        StandardizedNormal {
            positive: self.clone(),
            standardized,
            map,
        }
    }
}

/// Positive form after standardization, ready for matrix encoding.
#[derive(Clone, Debug)]
pub struct StandardizedNormal {
    pub positive: PositiveFormProgram,
    pub standardized: StandardizedProgram,
    pub map: StandardizationMap,
}

impl StandardizedNormal {
    /// Number of original atoms.
    pub fn n(&self) -> usize {
        self.positive.n
    }

    pub fn neg_rows(&self) -> &BTreeMap<AtomId, AtomId> {
        &self.positive.neg_rows
    }
}

/// Replaces every negated atom `b` by the fresh atom `_not_b`, one per
/// distinct negated atom, allocated in ascending order of `b`.
pub fn positive_form(p: &NormalProgram) -> PositiveFormProgram {
    let mut atoms = p.atoms().clone();
    let n = atoms.len();
    let negated: BTreeSet<AtomId> = p
        .rules()
        .iter()
        .flat_map(|r| r.neg_body().iter().copied())
        .collect();

    let mut neg_of = HashMap::with_capacity(negated.len());
    let mut neg_rows = BTreeMap::new();
    for atom in negated {
        let base = format!("_not_{}", atoms.name(atom));
        let neg = atoms.fresh(&base, AtomOrigin::NegationOf(atom));
        neg_of.insert(atom, neg);
        neg_rows.insert(neg, atom);
    }

    let rules = p
        .rules()
        .iter()
        .map(|r| r.with_negation_replaced(|a| neg_of[&a]))
        .collect();
    let program = Program::new(atoms, rules).expect("positive form interns every atom");
    PositiveFormProgram {
        program: DefiniteProgram::new(program).expect("positive form has no negation"),
        n,
        neg_rows,
    }
}
