//! The `.lp` program format.
//!
//! ```text
//! % comment to end of line
//! p :- q, not r.      conjunction, negation as failure
//! p :- u; v.          disjunction (positive atoms only)
//! s.                  fact
//! path(1,2) :- edge(1,2).
//! ```
//!
//! An atom is `[A-Za-z_][A-Za-z0-9_]*` optionally followed by a balanced
//! parenthesised argument list such as `path(1,2)`; whitespace inside the
//! parentheses is dropped. Rules end with `.` and may share a line. Atoms are
//! interned in first-seen order.

use std::fmt;

use crate::error::ParseError;
use crate::program::{AtomTable, Program, Rule};

/// A recoverable oddity in the input, reported alongside the parsed program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub program: Program,
    pub warnings: Vec<ParseWarning>,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> (usize, usize) {
        (self.line, self.column)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    /// Skips whitespace and `%` comments.
    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        }
    }

    fn atom(&mut self) -> Result<String, ParseError> {
        let mut name = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.error(format!("expected an atom, found {}", self.describe()))),
        }
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
            name.push(c);
            self.bump();
        }
        if self.peek() == Some('(') {
            let open = self.here();
            let mut depth = 0usize;
            loop {
                match self.peek() {
                    None => {
                        return Err(ParseError::new(open.0, open.1, "unclosed `(` in atom"));
                    }
                    Some(c) if c.is_whitespace() => {
                        self.bump();
                    }
                    Some('(') => {
                        depth += 1;
                        name.push('(');
                        self.bump();
                    }
                    Some(')') => {
                        depth -= 1;
                        name.push(')');
                        self.bump();
                        if depth == 0 {
                            break;
                        }
                    }
                    Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == ',' => {
                        name.push(c);
                        self.bump();
                    }
                    Some(c) => return Err(self.error(format!("unexpected `{c}` inside atom arguments"))),
                }
            }
        }
        Ok(name)
    }

    /// `not` followed by whitespace and an atom start.
    fn at_negation(&self) -> bool {
        let word = ['n', 'o', 't'];
        if (0..3).any(|i| self.peek_at(i) != Some(word[i])) {
            return false;
        }
        if !self.peek_at(3).is_some_and(char::is_whitespace) {
            return false;
        }
        let mut i = 3;
        while self.peek_at(i).is_some_and(char::is_whitespace) {
            i += 1;
        }
        self.peek_at(i).is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    }
}

struct Literal {
    negated: bool,
    name: String,
    at: (usize, usize),
}

/// Parses `.lp` text, collecting warnings for duplicate body literals and
/// for rules dropped because an atom occurs both positively and negatively.
pub fn parse_program_with_warnings(text: &str) -> Result<Parsed, ParseError> {
    let mut cur = Cursor::new(text);
    let mut atoms = AtomTable::new();
    let mut rules = Vec::new();
    let mut warnings = Vec::new();

    loop {
        cur.skip_trivia();
        if cur.peek().is_none() {
            break;
        }
        let head_at = cur.here();
        let head_name = cur.atom()?;
        let head = atoms.intern(&head_name);
        cur.skip_trivia();
        if cur.peek() == Some('.') {
            cur.bump();
            rules.push(Rule::fact(head));
            continue;
        }
        if !(cur.peek() == Some(':') && cur.peek_at(1) == Some('-')) {
            return Err(cur.error(format!("expected `.` or `:-`, found {}", cur.describe())));
        }
        cur.bump();
        cur.bump();

        let mut literals: Vec<Literal> = Vec::new();
        let mut separator: Option<char> = None;
        loop {
            cur.skip_trivia();
            let at = cur.here();
            let negated = cur.at_negation();
            if negated {
                for _ in 0..3 {
                    cur.bump();
                }
                cur.skip_trivia();
            }
            let name = cur.atom()?;
            literals.push(Literal { negated, name, at });
            cur.skip_trivia();
            match cur.peek() {
                Some('.') => {
                    cur.bump();
                    break;
                }
                Some(c @ (',' | ';')) => {
                    if separator.is_some_and(|s| s != c) {
                        return Err(cur.error("cannot mix `,` and `;` in one body"));
                    }
                    separator = Some(c);
                    cur.bump();
                }
                _ => {
                    return Err(cur.error(format!("expected `,`, `;` or `.`, found {}", cur.describe())));
                }
            }
        }

        let disjunctive = separator == Some(';');
        if disjunctive {
            if let Some(l) = literals.iter().find(|l| l.negated) {
                return Err(ParseError::new(l.at.0, l.at.1, "negation is not allowed in an OR-rule"));
            }
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for l in &literals {
            let id = atoms.intern(&l.name);
            let list = if l.negated { &mut neg } else { &mut pos };
            if list.contains(&id) {
                warnings.push(ParseWarning {
                    line: l.at.0,
                    column: l.at.1,
                    message: format!("duplicate literal `{}` dropped", l.name),
                });
            } else {
                list.push(id);
            }
        }
        let rule = if disjunctive {
            Rule::or(head, pos).expect("OR body has at least one atom")
        } else {
            match Rule::and(head, pos, neg) {
                Ok(rule) => rule,
                Err(_) => {
                    warnings.push(ParseWarning {
                        line: head_at.0,
                        column: head_at.1,
                        message: format!("rule for `{head_name}` can never fire (an atom occurs both positively and negated); dropped"),
                    });
                    continue;
                }
            }
        };
        rules.push(rule);
    }

    let program = Program::new(atoms, rules).expect("parser interns every atom");
    Ok(Parsed { program, warnings })
}

/// Parses `.lp` text, discarding warnings.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with_warnings(text).map(|p| p.program)
}

/// One rule per line, in rule order. The empty program is the empty string.
pub fn serialize_program(p: &Program) -> String {
    p.to_string()
}

/// [`serialize_program`] preceded by a `%` comment line.
pub fn serialize_with_header(p: &Program, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("% ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&serialize_program(p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, example1_standardized, example2, EXAMPLE1_LP, EXAMPLE2_LP};

    #[test]
    fn parses_example1_in_any_rule_order() {
        let p = parse_program("s.\nt.\nr :- s.\nq :- t.\np :- q, r.\np :- s, t.").unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.same_structure(&example1()));
        assert_eq!(p.atoms().names(), ["s", "t", "r", "q", "p"]);
        let q = parse_program(EXAMPLE1_LP).unwrap();
        assert_eq!(q.atoms().names(), ["p", "q", "r", "s", "t"]);
        assert!(q.same_structure(&example1()));
    }

    #[test]
    fn negation_and_empty_input() {
        let p = parse_program("s :- not t.\nt.").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.rules()[0].neg_body(), &[p.atoms().get("t").unwrap()]);
        assert!(parse_program("").unwrap().is_empty());
        assert!(parse_program("% only a comment\n\n").unwrap().atoms().is_empty());
        assert!(parse_program(EXAMPLE2_LP).unwrap().same_structure(&example2()));
    }

    #[test]
    fn round_trips() {
        for p in [example1().into_program(), example2().into_program(), example1_standardized().into_program()] {
            let text = serialize_program(&p);
            assert!(parse_program(&text).unwrap().same_structure(&p), "{text}");
        }
        assert!(serialize_program(&example1_standardized()).contains("p :- u; v."));
        assert_eq!(serialize_program(&Program::default()), "");
        let with_header = serialize_with_header(&example1(), "profile=table1 n=5");
        assert!(with_header.starts_with("% profile=table1 n=5\n"));
        assert!(parse_program(&with_header).unwrap().same_structure(&example1()));
    }

    #[test]
    fn ground_term_atoms() {
        let p = parse_program("path(1, 2) :- edge( 1,2 ).\nedge(1,2). path(f(a),b).").unwrap();
        assert_eq!(p.atoms().names(), ["path(1,2)", "edge(1,2)", "path(f(a),b)"]);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn multiple_rules_per_line_and_comments() {
        let p = parse_program("a. b :- a. % trailing\nc :- a; b.").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.rules()[2].is_or());
    }

    #[test]
    fn atom_named_not() {
        let p = parse_program("p :- not.\nnot.").unwrap();
        assert_eq!(p.rules()[0].pos_body().len(), 1);
        assert!(!p.has_negation());
        let q = parse_program("p :- not  q.").unwrap();
        assert!(q.has_negation());
        let r = parse_program("p :- nota.").unwrap();
        assert_eq!(r.atoms().names(), ["p", "nota"]);
    }

    #[test]
    fn warnings() {
        let parsed = parse_program_with_warnings("p :- q, q, not r, not r.").unwrap();
        assert_eq!(parsed.warnings.len(), 2);
        assert_eq!(parsed.program.rules()[0].body_len(), 2);
        assert_eq!((parsed.warnings[0].line, parsed.warnings[0].column), (1, 9));

        let dropped = parse_program_with_warnings("p :- q, not q.\nq.").unwrap();
        assert_eq!(dropped.program.len(), 1);
        assert_eq!(dropped.warnings.len(), 1);
        assert!(dropped.program.atoms().get("p").is_some());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases: &[(&str, (usize, usize))] = &[
            ("p :- q", (1, 7)),
            ("p q.", (1, 3)),
            ("p :- .", (1, 6)),
            ("p :- a, b; c.", (1, 10)),
            ("p :- a; not b.", (1, 9)),
            ("ok.\n1p.", (2, 1)),
            ("p(a :- q.", (1, 5)),
            ("p(a", (1, 2)),
            ("p :- q,\n  r", (2, 4)),
        ];
        for (text, (line, column)) in cases {
            let err = parse_program(text).unwrap_err();
            assert_eq!((err.line, err.column), (*line, *column), "{text}: {err}");
        }
    }
}
