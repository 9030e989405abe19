//! Symbolic representation of ground propositional programs.
//!
//! Every program owns an [`AtomTable`] that interns atom names to dense
//! zero-based [`AtomId`]s. The same ids index rows and columns of every matrix
//! built from the program, so the table is the single source of truth for
//! cross-module addressing.
//!
//! Three validated views wrap the raw [`Program`]:
//!
//! * [`NormalProgram`]: conjunctive rules, negative body literals allowed.
//! * [`DefiniteProgram`]: conjunctive rules without negation.
//! * [`StandardizedProgram`]: no negation, conjunctive rules with pairwise
//!   distinct heads plus disjunctive (OR) rules.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use crate::error::ProgramError;

/// Dense, zero-based identifier of an atom inside one [`AtomTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(u32);

impl AtomId {
    pub fn new(index: usize) -> Self {
        AtomId(u32::try_from(index).expect("atom index exceeds u32::MAX"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Provenance of an atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomOrigin {
    /// Appears in the source program.
    Original,
    /// Introduced by standardization for a multiply-defined head.
    Auxiliary,
    /// Stands for the negation of the referenced original atom.
    NegationOf(AtomId),
}

/// Interned atom names with their provenance.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, AtomId>,
    origin: Vec<AtomOrigin>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Returns the id of `name`, adding it as an original atom if unseen.
    pub fn intern(&mut self, name: &str) -> AtomId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        self.push(name.to_owned(), AtomOrigin::Original)
    }

    /// Adds a fresh atom derived from `base`. If `base` is taken, underscores
    /// are appended until the name is unused.
    ///
    /// Panics if `origin` is `NegationOf` an atom that is not original.
    pub fn fresh(&mut self, base: &str, origin: AtomOrigin) -> AtomId {
        if let AtomOrigin::NegationOf(target) = origin {
            assert!(
                self.origin.get(target.index()) == Some(&AtomOrigin::Original),
                "negation atom must refer to an original atom"
            );
        }
        let mut name = base.to_owned();
        while self.index.contains_key(&name) {
            name.push('_');
        }
        self.push(name, origin)
    }

    fn push(&mut self, name: String, origin: AtomOrigin) -> AtomId {
        let id = AtomId::new(self.names.len());
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.origin.push(origin);
        id
    }

    pub fn get(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.names[id.index()]
    }

    pub fn origin(&self, id: AtomId) -> AtomOrigin {
        self.origin[id.index()]
    }

    pub fn is_original(&self, id: AtomId) -> bool {
        self.origin(id) == AtomOrigin::Original
    }

    pub fn contains(&self, id: AtomId) -> bool {
        id.index() < self.names.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.names.len()).map(AtomId::new)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of atoms tagged [`AtomOrigin::Original`].
    pub fn original_count(&self) -> usize {
        self.origin
            .iter()
            .filter(|o| **o == AtomOrigin::Original)
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    And,
    Or,
}

/// `head <- pos_body, not neg_body` (AND) or `head <- b1 ; ... ; bm` (OR).
///
/// Bodies are kept sorted by atom id and free of duplicates, so two rules are
/// equal exactly when they have the same head, connective and body sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    head: AtomId,
    connective: Connective,
    pos_body: Vec<AtomId>,
    neg_body: Vec<AtomId>,
}

fn normalize_body(mut body: Vec<AtomId>) -> Vec<AtomId> {
    body.sort_unstable();
    body.dedup();
    body
}

impl Rule {
    pub fn fact(head: AtomId) -> Self {
        Rule {
            head,
            connective: Connective::And,
            pos_body: Vec::new(),
            neg_body: Vec::new(),
        }
    }

    /// Conjunctive rule. Duplicate body atoms are dropped; an atom occurring
    /// both positively and negatively is rejected.
    pub fn and(
        head: AtomId,
        pos_body: impl IntoIterator<Item = AtomId>,
        neg_body: impl IntoIterator<Item = AtomId>,
    ) -> Result<Self, ProgramError> {
        let pos_body = normalize_body(pos_body.into_iter().collect());
        let neg_body = normalize_body(neg_body.into_iter().collect());
        if let Some(&clash) = pos_body.iter().find(|a| neg_body.binary_search(a).is_ok()) {
            return Err(ProgramError::ContradictoryBody { head, atom: clash });
        }
        Ok(Rule {
            head,
            connective: Connective::And,
            pos_body,
            neg_body,
        })
    }

    /// Conjunctive rule without negation.
    pub fn definite(head: AtomId, body: impl IntoIterator<Item = AtomId>) -> Self {
        Rule {
            head,
            connective: Connective::And,
            pos_body: normalize_body(body.into_iter().collect()),
            neg_body: Vec::new(),
        }
    }

    /// Disjunctive rule; the body must be non-empty.
    pub fn or(head: AtomId, body: impl IntoIterator<Item = AtomId>) -> Result<Self, ProgramError> {
        let pos_body = normalize_body(body.into_iter().collect());
        if pos_body.is_empty() {
            return Err(ProgramError::EmptyOrBody { head });
        }
        Ok(Rule {
            head,
            connective: Connective::Or,
            pos_body,
            neg_body: Vec::new(),
        })
    }

    pub fn head(&self) -> AtomId {
        self.head
    }

    pub fn connective(&self) -> Connective {
        self.connective
    }

    pub fn pos_body(&self) -> &[AtomId] {
        &self.pos_body
    }

    pub fn neg_body(&self) -> &[AtomId] {
        &self.neg_body
    }

    pub fn is_fact(&self) -> bool {
        self.connective == Connective::And && self.pos_body.is_empty() && self.neg_body.is_empty()
    }

    pub fn is_or(&self) -> bool {
        self.connective == Connective::Or
    }

    pub fn has_negation(&self) -> bool {
        !self.neg_body.is_empty()
    }

    /// Number of body literals, positive and negative.
    pub fn body_len(&self) -> usize {
        self.pos_body.len() + self.neg_body.len()
    }

    pub(crate) fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        std::iter::once(self.head)
            .chain(self.pos_body.iter().copied())
            .chain(self.neg_body.iter().copied())
    }

    /// Same rule with negative literals moved into the positive body through
    /// `map`, which must return the stand-in atom for each negated atom.
    pub(crate) fn with_negation_replaced(&self, map: impl Fn(AtomId) -> AtomId) -> Rule {
        let body = self
            .pos_body
            .iter()
            .copied()
            .chain(self.neg_body.iter().map(|&a| map(a)));
        Rule {
            head: self.head,
            connective: self.connective,
            pos_body: normalize_body(body.collect()),
            neg_body: Vec::new(),
        }
    }

    pub(crate) fn without_negation(&self) -> Rule {
        Rule {
            head: self.head,
            connective: self.connective,
            pos_body: self.pos_body.clone(),
            neg_body: Vec::new(),
        }
    }

    pub fn display<'a>(&'a self, atoms: &'a AtomTable) -> RuleDisplay<'a> {
        RuleDisplay { rule: self, atoms }
    }
}

/// Renders a rule in the `.lp` surface syntax.
pub struct RuleDisplay<'a> {
    rule: &'a Rule,
    atoms: &'a AtomTable,
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Rule {
            head,
            connective,
            pos_body,
            neg_body,
        } = self.rule;
        f.write_str(self.atoms.name(*head))?;
        if !pos_body.is_empty() || !neg_body.is_empty() {
            f.write_str(" :- ")?;
            let sep = match connective {
                Connective::And => ", ",
                Connective::Or => "; ",
            };
            let literals = pos_body
                .iter()
                .map(|a| (false, *a))
                .chain(neg_body.iter().map(|a| (true, *a)));
            for (i, (negated, atom)) in literals.enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                if negated {
                    f.write_str("not ")?;
                }
                f.write_str(self.atoms.name(atom))?;
            }
        }
        f.write_str(".")
    }
}

/// A finite set of rules over an atom table.
///
/// Exact duplicate rules are removed at construction, keeping the first
/// occurrence.
#[derive(Clone, Debug, Default)]
pub struct Program {
    atoms: AtomTable,
    rules: Vec<Rule>,
}

impl Program {
    pub fn new(atoms: AtomTable, rules: Vec<Rule>) -> Result<Self, ProgramError> {
        for rule in &rules {
            if let Some(bad) = rule.atoms().find(|a| !atoms.contains(*a)) {
                return Err(ProgramError::UnknownAtom(bad));
            }
        }
        let mut seen = HashSet::with_capacity(rules.len());
        let rules = rules.into_iter().filter(|r| seen.insert(r.clone())).collect();
        Ok(Program { atoms, rules })
    }

    pub fn builder() -> ProgramBuilder {
        ProgramBuilder::default()
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn into_parts(self) -> (AtomTable, Vec<Rule>) {
        (self.atoms, self.rules)
    }

    pub fn has_negation(&self) -> bool {
        self.rules.iter().any(Rule::has_negation)
    }

    pub fn has_or_rules(&self) -> bool {
        self.rules.iter().any(Rule::is_or)
    }

    /// Total number of negative literal occurrences.
    pub fn negative_literal_count(&self) -> usize {
        self.rules.iter().map(|r| r.neg_body.len()).sum()
    }

    /// Replaces every OR-rule `h <- b1 ; ... ; bm` by the `m` rules `h <- bi`.
    pub fn expand_or_rules(self) -> Program {
        if !self.has_or_rules() {
            return self;
        }
        let mut rules = Vec::with_capacity(self.rules.len());
        for rule in self.rules {
            if rule.is_or() {
                rules.extend(rule.pos_body.iter().map(|&b| Rule::definite(rule.head, [b])));
            } else {
                rules.push(rule);
            }
        }
        Program::new(self.atoms, rules).expect("expansion keeps atoms in range")
    }

    pub fn into_normal(self) -> Result<NormalProgram, ProgramError> {
        NormalProgram::new(self)
    }

    pub fn into_definite(self) -> Result<DefiniteProgram, ProgramError> {
        DefiniteProgram::new(self)
    }

    /// Structural equality up to renaming of atom ids: same atom names and
    /// the same set of rules when rules are compared by atom names.
    pub fn same_structure(&self, other: &Program) -> bool {
        let names = |p: &Program| p.atoms.names().iter().cloned().collect::<BTreeSet<_>>();
        let rules = |p: &Program| {
            p.rules
                .iter()
                .map(|r| {
                    let n = |v: &[AtomId]| {
                        v.iter()
                            .map(|a| p.atoms.name(*a).to_owned())
                            .collect::<BTreeSet<_>>()
                    };
                    (
                        p.atoms.name(r.head).to_owned(),
                        r.connective,
                        n(&r.pos_body),
                        n(&r.neg_body),
                    )
                })
                .collect::<BTreeSet<_>>()
        };
        names(self) == names(other) && rules(self) == rules(other)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{}", rule.display(&self.atoms))?;
        }
        Ok(())
    }
}

/// Name-based construction helper, mostly for tests and grounding.
#[derive(Default)]
pub struct ProgramBuilder {
    atoms: AtomTable,
    rules: Vec<Rule>,
}

impl ProgramBuilder {
    pub fn atom(&mut self, name: &str) -> AtomId {
        self.atoms.intern(name)
    }

    pub fn fact(mut self, head: &str) -> Self {
        let h = self.atoms.intern(head);
        self.rules.push(Rule::fact(h));
        self
    }

    /// Conjunctive rule; a `"not x"` entry becomes a negative literal.
    ///
    /// Panics on a contradictory body.
    pub fn rule(mut self, head: &str, body: &[&str]) -> Self {
        let h = self.atoms.intern(head);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for lit in body {
            match lit.strip_prefix("not ") {
                Some(atom) => neg.push(self.atoms.intern(atom.trim())),
                None => pos.push(self.atoms.intern(lit)),
            }
        }
        self.rules.push(Rule::and(h, pos, neg).expect("contradictory rule body"));
        self
    }

    pub fn or_rule(mut self, head: &str, body: &[&str]) -> Self {
        let h = self.atoms.intern(head);
        let body: Vec<_> = body.iter().map(|b| self.atoms.intern(b)).collect();
        self.rules.push(Rule::or(h, body).expect("empty OR body"));
        self
    }

    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub fn build(self) -> Program {
        Program::new(self.atoms, self.rules).expect("builder interns every atom it uses")
    }
}

/// A program of conjunctive rules; negative literals allowed.
#[derive(Clone, Debug, Default)]
pub struct NormalProgram(Program);

/// A program of conjunctive rules without negation.
#[derive(Clone, Debug, Default)]
pub struct DefiniteProgram(Program);

/// A negation-free program in which conjunctive rules have pairwise distinct
/// heads, OR-rule heads are unique, and an atom heading a non-fact
/// conjunctive rule heads nothing else.
#[derive(Clone, Debug, Default)]
pub struct StandardizedProgram(Program);

macro_rules! program_view {
    ($ty:ident) => {
        impl Deref for $ty {
            type Target = Program;
            fn deref(&self) -> &Program {
                &self.0
            }
        }

        impl $ty {
            pub fn program(&self) -> &Program {
                &self.0
            }

            pub fn into_program(self) -> Program {
                self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

program_view!(NormalProgram);
program_view!(DefiniteProgram);
program_view!(StandardizedProgram);

impl NormalProgram {
    pub fn new(program: Program) -> Result<Self, ProgramError> {
        if let Some(i) = program.rules.iter().position(Rule::is_or) {
            return Err(ProgramError::UnexpectedOrRule { rule: i });
        }
        Ok(NormalProgram(program))
    }

    pub fn is_definite(&self) -> bool {
        !self.0.has_negation()
    }
}

impl DefiniteProgram {
    pub fn new(program: Program) -> Result<Self, ProgramError> {
        let normal = NormalProgram::new(program)?;
        DefiniteProgram::try_from(normal)
    }
}

impl TryFrom<NormalProgram> for DefiniteProgram {
    type Error = ProgramError;

    fn try_from(p: NormalProgram) -> Result<Self, ProgramError> {
        match p.0.rules.iter().position(Rule::has_negation) {
            Some(i) => Err(ProgramError::NotDefinite { rule: i }),
            None => Ok(DefiniteProgram(p.0)),
        }
    }
}

impl From<DefiniteProgram> for NormalProgram {
    fn from(p: DefiniteProgram) -> Self {
        NormalProgram(p.0)
    }
}

impl StandardizedProgram {
    pub fn new(program: Program) -> Result<Self, ProgramError> {
        if let Some(i) = program.rules.iter().position(Rule::has_negation) {
            return Err(ProgramError::NotDefinite { rule: i });
        }
        check_standardized(&program.rules)?;
        Ok(StandardizedProgram(program))
    }

    /// Number of atoms of the standardized program (the matrix side).
    pub fn atom_count(&self) -> usize {
        self.0.atoms.len()
    }
}

/// Checks the head-uniqueness conditions of a standardized program, naming
/// the first pair of clashing rules.
pub(crate) fn check_standardized(rules: &[Rule]) -> Result<(), ProgramError> {
    let mut by_head: HashMap<AtomId, usize> = HashMap::with_capacity(rules.len());
    for (i, rule) in rules.iter().enumerate() {
        if let Some(&j) = by_head.get(&rule.head) {
            let earlier = &rules[j];
            let compatible = (earlier.is_fact() && rule.is_or()) || (earlier.is_or() && rule.is_fact());
            if !compatible {
                return Err(ProgramError::SdViolation {
                    head: rule.head,
                    first: j,
                    second: i,
                });
            }
            // An atom may head at most one fact and one OR-rule; keep the
            // non-fact index so a third rule clashes with it.
            if rule.is_or() {
                by_head.insert(rule.head, i);
            }
        } else {
            by_head.insert(rule.head, i);
        }
    }
    Ok(())
}

/// A set of atoms (an interpretation).
///
/// Ordering is lexicographic on the ascending id sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet(BTreeSet<AtomId>);

impl AtomSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: AtomId) -> bool {
        self.0.insert(atom)
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.0.contains(&atom)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Keeps only atoms satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(AtomId) -> bool) -> AtomSet {
        self.iter().filter(|a| keep(*a)).collect()
    }

    /// Resolves member names, in id order.
    pub fn names<'a>(&'a self, atoms: &'a AtomTable) -> Vec<&'a str> {
        self.iter().map(|a| atoms.name(a)).collect()
    }

    /// Dense boolean mask of length `len`.
    pub fn to_mask(&self, len: usize) -> Vec<bool> {
        let mut mask = vec![false; len];
        for a in self.iter() {
            mask[a.index()] = true;
        }
        mask
    }

    pub fn from_mask(mask: &[bool]) -> AtomSet {
        mask.iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| AtomId::new(i))
            .collect()
    }

    /// Looks up each name; panics on unknown names.
    pub fn from_names(atoms: &AtomTable, names: &[&str]) -> AtomSet {
        names
            .iter()
            .map(|n| atoms.get(n).unwrap_or_else(|| panic!("unknown atom {n}")))
            .collect()
    }
}

impl FromIterator<AtomId> for AtomSet {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        AtomSet(iter.into_iter().collect())
    }
}

impl Extend<AtomId> for AtomSet {
    fn extend<I: IntoIterator<Item = AtomId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_first_seen_and_inverse() {
        let mut t = AtomTable::new();
        let p = t.intern("p");
        let q = t.intern("q");
        assert_eq!(t.intern("p"), p);
        assert_eq!((p.index(), q.index()), (0, 1));
        for id in t.ids() {
            assert_eq!(t.get(t.name(id)), Some(id));
        }
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut t = AtomTable::new();
        t.intern("_aux_p_1");
        let a = t.fresh("_aux_p_1", AtomOrigin::Auxiliary);
        assert_eq!(t.name(a), "_aux_p_1_");
        assert_eq!(t.origin(a), AtomOrigin::Auxiliary);
        assert_eq!(t.original_count(), 1);
    }

    #[test]
    #[should_panic(expected = "original atom")]
    fn negation_of_auxiliary_is_rejected() {
        let mut t = AtomTable::new();
        let a = t.fresh("x", AtomOrigin::Auxiliary);
        t.fresh("_not_x", AtomOrigin::NegationOf(a));
    }

    #[test]
    fn rule_bodies_are_deduplicated() {
        let (p, q, r) = (AtomId::new(0), AtomId::new(1), AtomId::new(2));
        let rule = Rule::and(p, [r, q, r], [q].into_iter().filter(|_| false)).unwrap();
        assert_eq!(rule.pos_body(), &[q, r]);
        assert!(Rule::and(p, [q], [q]).is_err());
        assert!(Rule::or(p, []).is_err());
        assert!(Rule::fact(p).is_fact());
    }

    #[test]
    fn duplicate_rules_are_dropped() {
        let p = Program::builder().fact("a").fact("a").rule("b", &["a", "a"]).rule("b", &["a"]).build();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn definite_view_rejects_negation() {
        let p = Program::builder().rule("s", &["not t"]).fact("t").build();
        let normal = NormalProgram::new(p).unwrap();
        assert!(matches!(
            DefiniteProgram::try_from(normal),
            Err(ProgramError::NotDefinite { rule: 0 })
        ));
    }

    #[test]
    fn standardized_view_checks_heads() {
        let ok = Program::builder().rule("p", &["q"]).fact("q").build();
        assert!(StandardizedProgram::new(ok).is_ok());

        let clash = Program::builder().rule("p", &["q"]).rule("p", &["r"]).build();
        assert!(matches!(
            StandardizedProgram::new(clash),
            Err(ProgramError::SdViolation { first: 0, second: 1, .. })
        ));

        let two_or = Program::builder().or_rule("p", &["q"]).or_rule("p", &["r", "s"]).build();
        assert!(StandardizedProgram::new(two_or).is_err());

        let fact_and_or = Program::builder().fact("p").or_rule("p", &["q"]).build();
        assert!(StandardizedProgram::new(fact_and_or).is_ok());
    }

    #[test]
    fn atom_set_order_is_lexicographic() {
        let a = |v: &[usize]| v.iter().map(|i| AtomId::new(*i)).collect::<AtomSet>();
        let mut sets = vec![a(&[1]), a(&[0, 2]), a(&[]), a(&[0])];
        sets.sort();
        assert_eq!(sets, vec![a(&[]), a(&[0]), a(&[0, 2]), a(&[1])]);
    }

    #[test]
    fn or_expansion() {
        let p = Program::builder().or_rule("p", &["u", "v"]).build().expand_or_rules();
        assert_eq!(p.len(), 2);
        assert!(!p.has_or_rules());
    }
}
