//! Seeded random programs.
//!
//! Atoms are named `p1..pn` and all `n` are interned up front. Randomness
//! comes from `ChaCha8Rng` seeded with `seed_from_u64(seed)`, which is
//! portable across platforms. The base program uses stream 0; the choice of
//! negated literals uses stream 1, so the same seed yields the same base
//! program whatever `k` is.
//!
//! Generation order:
//!
//! 1. the fact count, drawn uniformly from `[1, ceil(n/3) - 1]`, and that
//!    many distinct fact atoms;
//! 2. every other rule head, uniformly;
//! 3. the body length of every such rule, by stratum, in shuffled order;
//! 4. every body, uniformly among the `C(n, L)` atom sets, redrawn while it
//!    repeats an earlier rule with the same head.
//!
//! If a head has used up every body of some length, the rule falls back to
//! the nearest shorter length that has room, then to longer ones.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::program::{AtomId, AtomTable, DefiniteProgram, NormalProgram, Program, Rule};

/// Share, in percent, of non-fact rules with body length 1 through 8.
pub const TABLE1_PERCENT: [u32; 8] = [4, 4, 10, 40, 35, 4, 2, 1];

/// Fraction of the standardized atom count used as the long body length of
/// the denser profile.
pub const DENSER_BODY_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Table1,
    Denser,
}

impl ProfileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Table1 => "table1",
            ProfileKind::Denser => "denser",
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table1" => Ok(ProfileKind::Table1),
            "denser" => Ok(ProfileKind::Denser),
            other => Err(format!("unknown profile `{other}` (expected table1 or denser)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenProfile {
    pub kind: ProfileKind,
    /// Atom count.
    pub n: usize,
    /// Rule count, facts included.
    pub m: usize,
    /// Negative literal occurrences; zero for definite programs.
    pub k: usize,
    pub seed: u64,
}

impl GenProfile {
    pub fn table1(n: usize, m: usize, seed: u64) -> Self {
        GenProfile {
            kind: ProfileKind::Table1,
            n,
            m,
            k: 0,
            seed,
        }
    }

    pub fn denser(n: usize, m: usize, seed: u64) -> Self {
        GenProfile {
            kind: ProfileKind::Denser,
            ..Self::table1(n, m, seed)
        }
    }

    pub fn with_negations(self, k: usize) -> Self {
        GenProfile { k, ..self }
    }
}

impl fmt::Display for GenProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "profile={} n={} m={} k={} seed={}",
            self.kind, self.n, self.m, self.k, self.seed
        )
    }
}

/// Splits `total` into parts proportional to `weights` by largest remainder;
/// ties go to the earlier part.
pub fn largest_remainder(total: usize, weights: &[u32]) -> Vec<usize> {
    let sum: u64 = weights.iter().map(|w| u64::from(*w)).sum();
    if sum == 0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<u64> = weights.iter().map(|w| total as u64 * u64::from(*w)).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| (e / sum) as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(exact[i] % sum), i));
    let short = total - counts.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

/// `C(n, k)`, saturating at `u64::MAX`.
fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn fact_count(n: usize, m: usize, rng: &mut ChaCha8Rng) -> usize {
    let hi = n.div_ceil(3).saturating_sub(1);
    let f = if hi >= 1 { rng.random_range(1..=hi) } else { 0 };
    f.min(m)
}

fn atom_table(n: usize) -> (AtomTable, Vec<AtomId>) {
    let mut atoms = AtomTable::new();
    let ids = (1..=n).map(|i| atoms.intern(&format!("p{i}"))).collect();
    (atoms, ids)
}

/// Standardized atom count implied by a head sequence: every head defined
/// `c >= 2` times adds `c` auxiliary atoms.
pub fn standardized_size(n: usize, heads: impl IntoIterator<Item = AtomId>) -> usize {
    let mut count: HashMap<AtomId, usize> = HashMap::new();
    for h in heads {
        *count.entry(h).or_default() += 1;
    }
    n + count.values().filter(|c| **c >= 2).sum::<usize>()
}

fn body_lengths(kind: ProfileKind, n: usize, rules: usize, n_prime: usize) -> Vec<usize> {
    let mut lengths = Vec::with_capacity(rules);
    match kind {
        ProfileKind::Table1 => {
            for (i, c) in largest_remainder(rules, &TABLE1_PERCENT).into_iter().enumerate() {
                lengths.extend(std::iter::repeat(i + 1).take(c));
            }
        }
        ProfileKind::Denser => {
            let long = ((DENSER_BODY_FRACTION * n_prime as f64).ceil() as usize).max(1);
            let rest = 100 - TABLE1_PERCENT[0] - TABLE1_PERCENT[1];
            let counts = largest_remainder(rules, &[TABLE1_PERCENT[0], TABLE1_PERCENT[1], rest]);
            lengths.extend(std::iter::repeat(1).take(counts[0]));
            lengths.extend(std::iter::repeat(2).take(counts[1]));
            lengths.extend(std::iter::repeat(long).take(counts[2]));
        }
    }
    for l in &mut lengths {
        *l = (*l).min(n);
    }
    lengths
}

fn generate_base(profile: &GenProfile) -> Result<DefiniteProgram, GenError> {
    let GenProfile { kind, n, m, .. } = *profile;
    if n == 0 {
        return Err(GenError::Parameters("n must be at least 1".into()));
    }
    let mut rng = rng_for(profile.seed, 0);
    let (atoms, ids) = atom_table(n);

    let f = fact_count(n, m, &mut rng);
    let facts: Vec<AtomId> = index::sample(&mut rng, n, f).into_iter().map(|i| ids[i]).collect();
    let rules_left = m - f;
    let heads: Vec<AtomId> = (0..rules_left).map(|_| ids[rng.random_range(0..n)]).collect();
    let n_prime = standardized_size(n, facts.iter().chain(&heads).copied());

    let mut lengths = body_lengths(kind, n, rules_left, n_prime);
    lengths.shuffle(&mut rng);

    let mut rules: Vec<Rule> = facts.iter().map(|&h| Rule::fact(h)).collect();
    rules.reserve(rules_left);
    let mut seen: HashSet<(AtomId, Vec<AtomId>)> = HashSet::with_capacity(rules_left);
    let mut used: HashMap<(AtomId, usize), u64> = HashMap::new();
    for (&head, &wanted) in heads.iter().zip(&lengths) {
        let room = |len: usize| used.get(&(head, len)).copied().unwrap_or(0) < binomial(n, len);
        let Some(len) = (1..=wanted).rev().chain(wanted + 1..=n).find(|&l| room(l)) else {
            return Err(GenError::Parameters(format!(
                "m = {m} is more than {n} atoms can hold without repeating a rule"
            )));
        };
        let body = loop {
            let mut body: Vec<AtomId> = index::sample(&mut rng, n, len).into_iter().map(|i| ids[i]).collect();
            body.sort_unstable();
            if seen.insert((head, body.clone())) {
                break body;
            }
        };
        *used.entry((head, len)).or_default() += 1;
        rules.push(Rule::definite(head, body));
    }

    let program = Program::new(atoms, rules).expect("generated atoms are interned");
    Ok(DefiniteProgram::new(program).expect("generated program is definite"))
}

/// Definite program with body lengths in the fixed table proportions.
pub fn gen_definite(profile: &GenProfile) -> Result<DefiniteProgram, GenError> {
    if profile.kind != ProfileKind::Table1 {
        return Err(GenError::Parameters(format!("expected the table1 profile, got {}", profile.kind)));
    }
    generate_base(profile)
}

/// Definite program whose long bodies cover about five percent of the
/// standardized atom count.
///
/// Facts and rules of body length 1 and 2 keep their table proportions; all
/// other rules get length `ceil(0.05 * n')` capped at `n`, where `n'` is
/// the atom count after standardization, known once the heads are drawn.
pub fn gen_denser(profile: &GenProfile) -> Result<DefiniteProgram, GenError> {
    if profile.kind != ProfileKind::Denser {
        return Err(GenError::Parameters(format!("expected the denser profile, got {}", profile.kind)));
    }
    generate_base(profile)
}

/// Base program of the profile's kind with exactly `k` distinct body
/// literal occurrences turned negative.
pub fn gen_normal(profile: &GenProfile) -> Result<NormalProgram, GenError> {
    let base = generate_base(profile)?;
    let (atoms, mut rules) = base.into_program().into_parts();
    let occurrences: Vec<(usize, AtomId)> = rules
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.pos_body().iter().map(move |a| (i, *a)))
        .collect();
    if profile.k > occurrences.len() {
        return Err(GenError::Parameters(format!(
            "k = {} exceeds the {} body literals of the base program",
            profile.k,
            occurrences.len()
        )));
    }
    let mut rng = rng_for(profile.seed, 1);
    let mut flips: HashMap<usize, Vec<AtomId>> = HashMap::new();
    for j in index::sample(&mut rng, occurrences.len(), profile.k) {
        let (rule, atom) = occurrences[j];
        flips.entry(rule).or_default().push(atom);
    }
    for (i, negated) in flips {
        let r = &rules[i];
        let pos: Vec<AtomId> = r.pos_body().iter().copied().filter(|a| !negated.contains(a)).collect();
        rules[i] = Rule::and(r.head(), pos, negated).expect("bodies are disjoint");
    }
    let program = Program::new(atoms, rules).expect("flipping keeps atom ids");
    Ok(NormalProgram::new(program).expect("generated program has no OR-rules"))
}

/// Dispatches on the profile: a definite program when `k = 0`, otherwise a
/// normal one.
pub fn generate(profile: &GenProfile) -> Result<NormalProgram, GenError> {
    if profile.k == 0 {
        generate_base(profile).map(NormalProgram::from)
    } else {
        gen_normal(profile)
    }
}
