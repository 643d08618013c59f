//! Surface syntax.
//!
//! ```text
//! program  := rule*
//! rule     := atom ( ":-" body )? "."
//! body     := conj ( ";" conj )*
//! conj     := literal ( "," literal )*
//! literal  := ("not" | "~") atom | "true" | "false" | atom
//! atom     := name ( "(" term ( "," term )* ")" )?
//! term     := Variable | constant
//! ```
//!
//! Names and constants match `[a-z][A-Za-z0-9_]*`, variables
//! `[A-Z][A-Za-z0-9_]*`. `%` starts a comment that runs to the end of the line.

use super::LpError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceAtom {
    pub pred: String,
    pub args: Vec<Term>,
    pub line: usize,
    pub col: usize,
}

impl SourceAtom {
    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceLiteral {
    Pos(SourceAtom),
    Neg(SourceAtom),
    True,
    False,
}

/// A disjunction of conjunctions of literals. A fact has a single empty conjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceBody {
    pub disjuncts: Vec<Vec<SourceLiteral>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceRule {
    pub head: SourceAtom,
    pub body: SourceBody,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceProgram {
    pub rules: Vec<SourceRule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Neck,
    Tilde,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(s) | Tok::Var(s) => format!("{s:?}"),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Comma => "\",\"".into(),
            Tok::Semi => "\";\"".into(),
            Tok::Dot => "\".\"".into(),
            Tok::Neck => "\":-\"".into(),
            Tok::Tilde => "\"~\"".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> LpError {
    LpError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, LpError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '%' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' => Tok::Dot,
            '~' => Tok::Tilde,
            ':' => {
                bump(&mut chars);
                if chars.peek() != Some(&'-') {
                    return Err(err(l, k, "expected \":-\""));
                }
                Tok::Neck
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
                    s.push(bump(&mut chars));
                }
                out.push(Spanned {
                    tok: if c.is_ascii_uppercase() { Tok::Var(s) } else { Tok::Name(s) },
                    line: l,
                    col: k,
                });
                continue;
            }
            other => return Err(err(l, k, format!("unexpected character {other:?}"))),
        };
        bump(&mut chars);
        out.push(Spanned { tok, line: l, col: k });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn atom(&mut self) -> Result<SourceAtom, LpError> {
        let t = self.next();
        let (line, col) = (t.line, t.col);
        let pred = match &t.tok {
            Tok::Name(n) if n == "not" || n == "true" || n == "false" => {
                return Err(err(line, col, format!("{n:?} cannot be used as an atom")))
            }
            Tok::Name(n) => n.clone(),
            Tok::Var(v) => return Err(err(line, col, format!("expected an atom, found variable {v:?}"))),
            other => return Err(err(line, col, format!("expected an atom, found {}", other.describe()))),
        };
        let mut args = Vec::new();
        if self.peek().tok == Tok::LParen {
            self.next();
            loop {
                let t = self.next();
                let (tl, tc) = (t.line, t.col);
                let term = match &t.tok {
                    Tok::Var(v) => Term::Var(v.clone()),
                    Tok::Name(c) => Term::Const(c.clone()),
                    other => return Err(err(tl, tc, format!("expected a term, found {}", other.describe()))),
                };
                if self.peek().tok == Tok::LParen {
                    return Err(err(tl, tc, "function symbols are not supported"));
                }
                args.push(term);
                let t = self.next();
                match t.tok {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    ref other => {
                        return Err(err(t.line, t.col, format!("expected \",\" or \")\", found {}", other.describe())))
                    }
                }
            }
        }
        Ok(SourceAtom { pred, args, line, col })
    }

    fn literal(&mut self) -> Result<SourceLiteral, LpError> {
        let t = self.peek();
        match &t.tok {
            Tok::Tilde => {
                self.next();
                Ok(SourceLiteral::Neg(self.atom()?))
            }
            Tok::Name(n) if n == "not" => {
                self.next();
                Ok(SourceLiteral::Neg(self.atom()?))
            }
            Tok::Name(n) if n == "true" => {
                self.next();
                Ok(SourceLiteral::True)
            }
            Tok::Name(n) if n == "false" => {
                self.next();
                Ok(SourceLiteral::False)
            }
            _ => Ok(SourceLiteral::Pos(self.atom()?)),
        }
    }

    fn rule(&mut self) -> Result<SourceRule, LpError> {
        let (line, col) = (self.peek().line, self.peek().col);
        let head = self.atom()?;
        let t = self.next();
        let body = match t.tok {
            Tok::Dot => {
                return Ok(SourceRule {
                    head,
                    body: SourceBody {
                        disjuncts: vec![vec![]],
                    },
                    line,
                    col,
                })
            }
            Tok::Neck => {
                let mut disjuncts = vec![vec![self.literal()?]];
                loop {
                    let t = self.next();
                    match t.tok {
                        Tok::Comma => {
                            let lit = self.literal()?;
                            disjuncts.last_mut().expect("nonempty").push(lit);
                        }
                        Tok::Semi => disjuncts.push(vec![self.literal()?]),
                        Tok::Dot => break,
                        ref other => {
                            return Err(err(
                                t.line,
                                t.col,
                                format!("expected \",\", \";\" or \".\", found {}", other.describe()),
                            ))
                        }
                    }
                }
                SourceBody { disjuncts }
            }
            ref other => {
                return Err(err(t.line, t.col, format!("expected \":-\" or \".\", found {}", other.describe())))
            }
        };
        Ok(SourceRule { head, body, line, col })
    }
}

/// Parses program text. An input without rules parses to an empty program.
pub fn parse(text: &str) -> Result<SourceProgram, LpError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut rules = Vec::new();
    while p.peek().tok != Tok::Eof {
        rules.push(p.rule()?);
    }
    Ok(SourceProgram { rules })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(pred: &str, line: usize, col: usize) -> SourceAtom {
        SourceAtom {
            pred: pred.into(),
            args: vec![],
            line,
            col,
        }
    }

    #[test]
    fn negated_body() {
        let p = parse("p :- not q.").unwrap();
        assert_eq!(p.rules.len(), 1);
        assert_eq!(p.rules[0].head, atom("p", 1, 1));
        assert_eq!(p.rules[0].body.disjuncts, vec![vec![SourceLiteral::Neg(atom("q", 1, 10))]]);
    }

    #[test]
    fn disjunction_binds_looser() {
        let p = parse("p :- q, r; ~s, true.\n% comment\nt.").unwrap();
        let d = &p.rules[0].body.disjuncts;
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].len(), 2);
        assert_eq!(d[1], vec![SourceLiteral::Neg(atom("s", 1, 13)), SourceLiteral::True]);
        assert_eq!(p.rules[1].head, atom("t", 3, 1));
        assert_eq!(p.rules[1].body.disjuncts, vec![vec![]]);
    }

    #[test]
    fn predicates_and_variables() {
        let p = parse("path(X, Y) :- edge(X,Y).").unwrap();
        assert_eq!(
            p.rules[0].head.args,
            vec![Term::Var("X".into()), Term::Var("Y".into())]
        );
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("p :- q", 1, 7),
            ("p :- .", 1, 6),
            ("p(f(X)) :- q.", 1, 3),
            ("p :- not.", 1, 9),
            ("\n  P.", 2, 3),
            ("p :- q & r.", 1, 8),
            ("p : q.", 1, 3),
            ("not :- q.", 1, 1),
        ];
        for (text, line, col) in cases {
            match parse(text) {
                Err(LpError::Parse { line: l, col: c, .. }) => assert_eq!((l, c), (line, col), "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        let e = parse("p(f(X)).").unwrap_err();
        assert!(e.to_string().contains("function symbols"));
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse("  % nothing\n").unwrap(), SourceProgram::default());
    }
}
