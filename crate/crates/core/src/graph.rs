//! Edge lists and the ground transitive-closure program.
//!
//! Edge-list lines hold whitespace-separated `u v`; further columns (weights,
//! timestamps) are ignored. Blank lines and lines starting with `%` or `#`
//! are skipped. Node labels match `[A-Za-z0-9_]+`.

use std::collections::HashMap;
use std::collections::HashSet;

use crate::error::{GraphError, ParseError};
use crate::program::{AtomId, AtomSet, AtomTable, DefiniteProgram, Program, Rule};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    node_names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    edge_set: HashSet<(usize, usize)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.node_names.push(name.to_owned());
        self.index.insert(name.to_owned(), self.node_names.len() - 1);
        self.node_names.len() - 1
    }

    /// Adds an edge; returns false if it was already present.
    pub fn add_edge(&mut self, u: &str, v: &str) -> bool {
        let (u, v) = (self.add_node(u), self.add_node(v));
        if self.edge_set.insert((u, v)) {
            self.edges.push((u, v));
            true
        } else {
            false
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_names.is_empty()
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Edges in first-seen order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reads an edge list; nodes are interned in first-seen order and repeated
/// edges collapse.
pub fn load_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_start();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let mut fields = raw.split_whitespace();
        let (Some(u), Some(v)) = (fields.next(), fields.next()) else {
            let column = raw.len() - line.len() + 1;
            return Err(ParseError::new(i + 1, column, "expected two node labels"));
        };
        for label in [u, v] {
            if !valid_label(label) {
                let column = raw.find(label).map_or(1, |c| c + 1);
                return Err(ParseError::new(i + 1, column, format!("invalid node label `{label}`")));
            }
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

/// Ground program for
///
/// ```text
/// path(X,Y) :- edge(X,Y).
/// path(X,Y) :- edge(X,Z), path(Z,Y).
/// ```
///
/// The recursive rule is instantiated only for `(X,Z)` an edge, with `Y`
/// ranging over all nodes. Edges become facts. Atom order: every `edge` atom
/// in edge order, then `path` atoms in order of first use.
pub fn ground_transitive_closure(g: &Graph) -> Result<DefiniteProgram, GraphError> {
    if g.is_empty() {
        return Err(GraphError::Empty);
    }
    let names = g.node_names();
    let mut atoms = AtomTable::new();
    let edge_atoms: Vec<AtomId> = g
        .edges()
        .iter()
        .map(|&(u, v)| atoms.intern(&format!("edge({},{})", names[u], names[v])))
        .collect();

    let n = g.node_count();
    let mut path_ids: Vec<Option<AtomId>> = vec![None; n * n];
    let mut path = |atoms: &mut AtomTable, x: usize, y: usize| -> AtomId {
        *path_ids[x * n + y].get_or_insert_with(|| atoms.intern(&format!("path({},{})", names[x], names[y])))
    };

    let mut rules = Vec::with_capacity(g.edge_count() * (n + 2));
    rules.extend(edge_atoms.iter().map(|&e| Rule::fact(e)));
    for (&(u, v), &e) in g.edges().iter().zip(&edge_atoms) {
        rules.push(Rule::definite(path(&mut atoms, u, v), [e]));
    }
    for (&(x, z), &e) in g.edges().iter().zip(&edge_atoms) {
        for y in 0..n {
            let head = path(&mut atoms, x, y);
            let step = path(&mut atoms, z, y);
            rules.push(Rule::definite(head, [e, step]));
        }
    }
    let program = Program::new(atoms, rules).expect("grounding interns every atom");
    Ok(DefiniteProgram::new(program).expect("grounding has no negation"))
}

/// The `(x, y)` label pairs of the `path` atoms in `model`.
pub fn path_pairs(atoms: &AtomTable, model: &AtomSet) -> Vec<(String, String)> {
    let mut pairs: Vec<(String, String)> = model
        .iter()
        .filter_map(|a| {
            let inner = atoms.name(a).strip_prefix("path(")?.strip_suffix(')')?;
            let (x, y) = inner.split_once(',')?;
            Some((x.to_owned(), y.to_owned()))
        })
        .collect();
    pairs.sort();
    pairs
}
