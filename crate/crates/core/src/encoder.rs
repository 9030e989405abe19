//! Matrix encodings of standardized and positive-form programs.
//!
//! Row `i` of a program matrix encodes the rules with head `i`:
//!
//! | rule                     | entries of row `i`            |
//! |--------------------------|-------------------------------|
//! | `i <- j1 & ... & jm`     | `a[i][jk] = 1/m`              |
//! | `i <- j1 ; ... ; jm`     | `a[i][jk] = 1`                |
//! | `i <-` (fact)            | `a[i][i] = 1`                 |
//! | negation atom `i`        | `a[i][i] = 1`, nothing else   |
//!
//! With thresholding at one, a conjunctive row fires only when every body
//! atom is true and a disjunctive row fires when any is.

use std::collections::BTreeMap;

use crate::error::EncodeError;
use crate::linalg::{BinaryVector, CsrMatrix, DenseMatrix};
use crate::program::{AtomId, AtomTable, Connective, Rule, StandardizedProgram};
use crate::transform::StandardizedNormal;

/// Default cap on free negation atoms in a guess matrix (`2^20` columns).
pub const DEFAULT_GUESS_CAP: usize = 20;

/// Square program matrix together with the atom order indexing it.
#[derive(Clone, Debug)]
pub struct ProgramMatrix {
    pub matrix: CsrMatrix,
    pub atoms: AtomTable,
}

impl ProgramMatrix {
    pub fn side(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }
}

#[derive(Clone, Copy, Default)]
struct HeadState {
    fact: Option<usize>,
    rule: Option<(usize, Connective)>,
}

/// Assembles rows rule by rule, refusing two defining rules for one head.
/// A fact may share its head with a single OR-rule.
struct RowAssembler {
    rows: Vec<BTreeMap<usize, f64>>,
    heads: Vec<HeadState>,
}

impl RowAssembler {
    fn new(n: usize) -> Self {
        RowAssembler {
            rows: vec![BTreeMap::new(); n],
            heads: vec![HeadState::default(); n],
        }
    }

    fn add(&mut self, index: usize, rule: &Rule) -> Result<(), EncodeError> {
        let head = rule.head();
        let h = head.index();
        let state = &mut self.heads[h];
        let clash = |first| EncodeError::HeadClash {
            head,
            first,
            second: index,
        };
        if rule.is_fact() {
            match (state.fact, state.rule) {
                (Some(first), _) | (_, Some((first, Connective::And))) => return Err(clash(first)),
                _ => {}
            }
            state.fact = Some(index);
            self.rows[h].insert(h, 1.0);
            return Ok(());
        }
        if let Some((first, _)) = state.rule {
            return Err(clash(first));
        }
        if let (Some(first), Connective::And) = (state.fact, rule.connective()) {
            return Err(clash(first));
        }
        state.rule = Some((index, rule.connective()));
        let weight = match rule.connective() {
            Connective::And => 1.0 / rule.pos_body().len() as f64,
            Connective::Or => 1.0,
        };
        for b in rule.pos_body() {
            let e = self.rows[h].entry(b.index()).or_insert(0.0);
            *e = f64::max(*e, weight);
        }
        Ok(())
    }

    fn self_loop(&mut self, atom: AtomId) {
        let i = atom.index();
        self.rows[i].clear();
        self.rows[i].insert(i, 1.0);
    }

    fn finish(self) -> CsrMatrix {
        let n = self.rows.len();
        let rows: Vec<Vec<(usize, f64)>> = self.rows.into_iter().map(|r| r.into_iter().collect()).collect();
        CsrMatrix::from_sorted_rows(n, &rows).expect("assembled rows are sorted and in range")
    }
}

/// Encodes a standardized program as its square program matrix.
pub fn encode_program_matrix(p: &StandardizedProgram) -> Result<ProgramMatrix, EncodeError> {
    let mut asm = RowAssembler::new(p.atom_count());
    for (i, rule) in p.rules().iter().enumerate() {
        asm.add(i, rule)?;
    }
    Ok(ProgramMatrix {
        matrix: asm.finish(),
        atoms: p.atoms().clone(),
    })
}

/// Encodes a standardized positive form: negation rows carry only a
/// self-loop, every other row is encoded as in [`encode_program_matrix`].
pub fn encode_normal_matrix(sn: &StandardizedNormal) -> Result<ProgramMatrix, EncodeError> {
    let p = &sn.standardized;
    let mut asm = RowAssembler::new(p.atom_count());
    for (i, rule) in p.rules().iter().enumerate() {
        if sn.neg_rows().contains_key(&rule.head()) {
            return Err(EncodeError::NegationHead {
                rule: i,
                head: rule.head(),
            });
        }
        asm.add(i, rule)?;
    }
    for &neg in sn.neg_rows().keys() {
        asm.self_loop(neg);
    }
    Ok(ProgramMatrix {
        matrix: asm.finish(),
        atoms: p.atoms().clone(),
    })
}

/// One exactly at the facts of `p`.
pub fn initial_vector(p: &StandardizedProgram) -> BinaryVector {
    let mut bits = vec![false; p.atom_count()];
    for rule in p.rules().iter().filter(|r| r.is_fact()) {
        bits[rule.head().index()] = true;
    }
    BinaryVector::from_bools(&bits)
}

/// Initial matrix for stable-model search: one column per assignment to the
/// free negation atoms.
#[derive(Clone, Debug)]
pub struct GuessMatrix {
    pub matrix: DenseMatrix,
    /// Negation atoms whose value is guessed, in ascending id order.
    pub free_negs: Vec<AtomId>,
}

impl GuessMatrix {
    pub fn columns(&self) -> usize {
        self.matrix.cols()
    }
}

/// Negation atoms whose value is not forced by a fact of the source program.
pub fn free_negations(sn: &StandardizedNormal) -> Vec<AtomId> {
    let facts = sn.positive.facts();
    sn.neg_rows()
        .iter()
        .filter(|(_, target)| !facts.contains(target))
        .map(|(neg, _)| *neg)
        .collect()
}

/// Builds the guess matrix.
///
/// Fact rows are one in every column. The negation atom of a fact is zero in
/// every column. The remaining negation atoms take all `2^f` assignments, the
/// first free atom being the most significant bit of the column index. All
/// other rows are zero.
pub fn initial_guess_matrix(sn: &StandardizedNormal, cap: usize) -> Result<GuessMatrix, EncodeError> {
    let free_negs = free_negations(sn);
    let f = free_negs.len();
    if f > cap || f >= usize::BITS as usize {
        return Err(EncodeError::GuessExplosion { free: f, cap });
    }
    let h = 1usize << f;
    let base = initial_vector(&sn.standardized);
    let rows = base.len();
    let mut m = DenseMatrix::zeros(rows, h);
    for i in 0..rows {
        if base.get(i) {
            m.as_mut_slice()[i * h..(i + 1) * h].fill(1.0);
        }
    }
    for (j, neg) in free_negs.iter().enumerate() {
        let shift = f - 1 - j;
        for c in 0..h {
            if c >> shift & 1 == 1 {
                m.set(neg.index(), c, 1.0);
            }
        }
    }
    Ok(GuessMatrix { matrix: m, free_negs })
}

/// Sparsity of a program matrix, two ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sparsity {
    /// `1 - sum(|body(r)|) / n^2` over the rules, facts contributing zero.
    pub body_based: f64,
    /// `1 - nnz / n^2` of the encoded matrix, counting fact and negation
    /// diagonals.
    pub nnz_based: f64,
}

fn sparsity_from(p: &StandardizedProgram, matrix: &CsrMatrix) -> Sparsity {
    let n = p.atom_count();
    if n == 0 {
        return Sparsity {
            body_based: 1.0,
            nnz_based: 1.0,
        };
    }
    let cells = (n as f64) * (n as f64);
    let body_total: usize = p.rules().iter().map(Rule::body_len).sum();
    Sparsity {
        body_based: 1.0 - body_total as f64 / cells,
        nnz_based: 1.0 - matrix.nnz() as f64 / cells,
    }
}

pub fn sparsity(p: &StandardizedProgram) -> Sparsity {
    let m = encode_program_matrix(p).expect("standardized programs always encode");
    sparsity_from(p, &m.matrix)
}

/// Sparsity of the normal encoding; the nnz count includes negation rows.
pub fn sparsity_normal(sn: &StandardizedNormal, matrix: &ProgramMatrix) -> Sparsity {
    sparsity_from(&sn.standardized, &matrix.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, example1_standardized, example2};
    use crate::linalg::{theta, DEFAULT_EPS};
    use crate::program::{AtomSet, NormalProgram, Program};
    use crate::semantics::tp_step;
    use crate::transform::{positive_form, standardize};

    const H: f64 = 0.5;

    #[test]
    fn example1_matrix() {
        let m = encode_program_matrix(&example1_standardized()).unwrap();
        let expected = [
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, H, H, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, H, H, 0.0, 0.0],
        ];
        let dense = m.matrix.to_dense();
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(dense.row(i), row, "row {i}");
        }
    }

    #[test]
    fn small_encodings() {
        let fact = StandardizedProgram::new(Program::builder().fact("p").build()).unwrap();
        let m = encode_program_matrix(&fact).unwrap();
        assert_eq!(m.matrix.to_dense().as_slice(), &[1.0]);

        let three = StandardizedProgram::new(Program::builder().rule("p", &["q", "r", "s"]).build()).unwrap();
        let m = encode_program_matrix(&three).unwrap();
        let (cols, vals) = m.matrix.row(0);
        assert_eq!(cols, &[1, 2, 3]);
        assert!(vals.iter().all(|v| *v == 1.0 / 3.0));
    }

    #[test]
    fn head_clash_names_both_rules() {
        // Bypass the validated constructor to hit the encoder's own check.
        let raw = Program::builder().rule("p", &["q"]).rule("p", &["r"]).build();
        let sp = StandardizedProgram::new(raw.clone());
        assert!(sp.is_err());
        let mut asm = RowAssembler::new(raw.atoms().len());
        asm.add(0, &raw.rules()[0]).unwrap();
        let err = asm.add(1, &raw.rules()[1]).unwrap_err();
        assert_eq!(
            err,
            EncodeError::HeadClash {
                head: AtomId::new(0),
                first: 0,
                second: 1
            }
        );
    }

    fn normal(names: &Program) -> StandardizedNormal {
        positive_form(&NormalProgram::new(names.clone()).unwrap()).standardize()
    }

    #[test]
    fn example2_matrix() {
        let sn = normal(example2().program());
        let m = encode_normal_matrix(&sn).unwrap();
        let expected = [
            [0.0, H, H, 0.0, 0.0, 0.0, 0.0],
            [H, 0.0, 0.0, H, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let dense = m.matrix.to_dense();
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(dense.row(i), row, "row {i}");
        }
    }

    #[test]
    fn normal_encoding_without_negation_matches_definite() {
        let sn = normal(example1().program());
        let a = encode_normal_matrix(&sn).unwrap();
        let b = encode_program_matrix(&standardize(&example1()).0).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn single_negation_encoding() {
        let sn = normal(&Program::builder().rule("p", &["not q"]).build());
        let m = encode_normal_matrix(&sn).unwrap().matrix.to_dense();
        // atoms: p, q, _not_q
        assert_eq!(m.row(0), &[0.0, 0.0, 1.0]);
        assert_eq!(m.row(1), &[0.0, 0.0, 0.0]);
        assert_eq!(m.row(2), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn negation_head_is_rejected() {
        let mut sn = normal(&Program::builder().rule("p", &["not q"]).build());
        let not_q = *sn.neg_rows().keys().next().unwrap();
        let (atoms, mut rules) = sn.standardized.clone().into_program().into_parts();
        rules.push(Rule::fact(not_q));
        sn.standardized = StandardizedProgram::new(Program::new(atoms, rules).unwrap()).unwrap();
        assert!(matches!(
            encode_normal_matrix(&sn),
            Err(EncodeError::NegationHead { head, .. }) if head == not_q
        ));
    }

    #[test]
    fn initial_vectors() {
        let v = initial_vector(&example1_standardized());
        assert_eq!(v.as_slice(), &[0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let none = StandardizedProgram::new(Program::builder().rule("p", &["q"]).build()).unwrap();
        assert_eq!(initial_vector(&none).count_ones(), 0);
        let all = StandardizedProgram::new(Program::builder().fact("a").fact("b").build()).unwrap();
        assert_eq!(initial_vector(&all).count_ones(), 2);
    }

    #[test]
    fn guess_matrix_example2_is_forced() {
        let sn = normal(example2().program());
        let g = initial_guess_matrix(&sn, DEFAULT_GUESS_CAP).unwrap();
        assert!(g.free_negs.is_empty());
        assert_eq!(g.columns(), 1);
        assert_eq!(g.matrix.column(0), vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn guess_matrix_enumerates_free_negations() {
        let sn = normal(&Program::builder().rule("p", &["not q"]).rule("q", &["not p"]).build());
        let g = initial_guess_matrix(&sn, DEFAULT_GUESS_CAP).unwrap();
        assert_eq!(g.columns(), 4);
        let a = sn.standardized.atoms();
        let (np, nq) = (a.get("_not_p").unwrap().index(), a.get("_not_q").unwrap().index());
        let pairs: Vec<(f64, f64)> = (0..4).map(|c| (g.matrix.get(np, c), g.matrix.get(nq, c))).collect();
        assert_eq!(pairs, [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(
            initial_guess_matrix(&sn, 1),
            Err(EncodeError::GuessExplosion { free: 2, cap: 1 })
        ));
    }

    #[test]
    fn guess_matrix_for_definite_program_is_initial_vector() {
        let p = standardize(&example1()).0;
        let sn = normal(example1().program());
        let g = initial_guess_matrix(&sn, DEFAULT_GUESS_CAP).unwrap();
        assert_eq!(g.columns(), 1);
        assert_eq!(g.matrix.column(0), initial_vector(&p).as_slice());
    }

    #[test]
    fn sparsity_of_example1() {
        let s = sparsity(&example1_standardized());
        assert_eq!(s.body_based, 1.0 - 8.0 / 49.0);
        assert_eq!(s.nnz_based, 1.0 - 10.0 / 49.0);
        assert!((s.body_based - 0.8367).abs() < 1e-4);
        assert!((s.nnz_based - 0.7959).abs() < 1e-4);
        let empty = sparsity(&StandardizedProgram::default());
        assert_eq!((empty.body_based, empty.nnz_based), (1.0, 1.0));
    }

    #[test]
    fn encoded_step_matches_tp_step_on_example1() {
        let p = example1_standardized();
        let m = encode_program_matrix(&p).unwrap();
        let n = p.atom_count();
        // Fact rows are self-loops, so the product agrees with the operator
        // on interpretations that already hold the facts.
        let facts = initial_vector(&p).to_bools();
        for mask in 0u32..(1 << n) {
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1 || facts[i]).collect();
            let v = BinaryVector::from_bools(&bits);
            let u = theta(&m.matrix.spmv(v.as_matrix()).unwrap(), DEFAULT_EPS);
            let expected = tp_step(&p, &AtomSet::from_mask(&bits));
            let got = BinaryVector::try_from_matrix(u).unwrap().to_bools();
            assert_eq!(AtomSet::from_mask(&got), expected);
        }
    }
}
