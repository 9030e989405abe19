//! Oracles written against plain names and sets, sharing no code with the
//! solver.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use sparselp::{Connective, Program};

pub type Names = BTreeSet<String>;

struct NamedRule {
    head: String,
    or: bool,
    pos: Vec<String>,
    neg: Vec<String>,
}

fn named_rules(p: &Program) -> Vec<NamedRule> {
    let name = |a| p.atoms().name(a).to_owned();
    p.rules()
        .iter()
        .map(|r| NamedRule {
            head: name(r.head()),
            or: r.connective() == Connective::Or,
            pos: r.pos_body().iter().map(|a| name(*a)).collect(),
            neg: r.neg_body().iter().map(|a| name(*a)).collect(),
        })
        .collect()
}

fn close(rules: &[NamedRule], assumed_false: impl Fn(&str) -> bool) -> Names {
    let mut model = Names::new();
    loop {
        let mut grew = false;
        for r in rules {
            if model.contains(&r.head) || r.neg.iter().any(|a| !assumed_false(a)) {
                continue;
            }
            let fires = if r.or {
                r.pos.iter().any(|a| model.contains(a))
            } else {
                r.pos.iter().all(|a| model.contains(a))
            };
            if fires {
                model.insert(r.head.clone());
                grew = true;
            }
        }
        if !grew {
            return model;
        }
    }
}

/// Naive forward chaining to saturation. Negative literals must be absent.
pub fn least_model(p: &Program) -> Names {
    assert!(!p.has_negation());
    close(&named_rules(p), |_| true)
}

/// Every subset `I` of the atoms with `I` equal to the least model of the
/// reduct of `p` by `I`.
pub fn stable_models(p: &Program) -> BTreeSet<Names> {
    let atoms: Vec<String> = p.atoms().names().to_vec();
    assert!(atoms.len() <= 16, "oracle is exponential");
    let rules = named_rules(p);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << atoms.len()) {
        let guess: Names = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        if close(&rules, |a| !guess.contains(a)) == guess {
            out.insert(guess);
        }
    }
    out
}

/// Pairs `(x, y)` joined by a path of at least one edge.
pub fn reachability(edges: &[(String, String)]) -> BTreeSet<(String, String)> {
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    for (u, v) in edges {
        adj.entry(u).or_default().push(v);
    }
    let mut out = BTreeSet::new();
    for &start in adj.keys() {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<&str> = adj[start].iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            if seen.insert(x) {
                if let Some(next) = adj.get(x) {
                    queue.extend(next.iter().copied());
                }
            }
        }
        out.extend(seen.into_iter().map(|y| (start.to_owned(), y.to_owned())));
    }
    out
}

pub fn names_of(p: &Program, set: &sparselp::AtomSet) -> Names {
    set.iter().map(|a| p.atoms().name(a).to_owned()).collect()
}

/// Rules keyed by names with bodies sorted, independent of atom ids.
pub fn rule_keys(p: &Program) -> BTreeSet<(String, bool, Vec<String>, Vec<String>)> {
    named_rules(p)
        .into_iter()
        .map(|mut r| {
            r.pos.sort();
            r.neg.sort();
            (r.head, r.or, r.pos, r.neg)
        })
        .collect()
}
