use super::formula::Formula;
use super::vars::Universe;
use super::LtlError;

/// Parses the ASCII LTL grammar:
///
/// ```text
/// atoms    [a-zA-Z_][a-zA-Z0-9_]*      literals  true false
/// unary    ! X F G                     binary    & | -> <-> U R
/// precedence (tightest first): unary, {U R}, &, |, ->, <->
/// ```
///
/// `&` and `|` associate to the left, `->`, `<->`, `U` and `R` to the
/// right. Atom names must be declared in `universe`.
pub fn parse_ltl(text: &str, universe: &Universe) -> Result<Formula, LtlError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, universe };
    let f = p.parse_iff()?;
    match p.peek() {
        Token::Eof => Ok(f),
        t => Err(p.unexpected(t.describe())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Bang,
    NextOp,
    EventuallyOp,
    GloballyOp,
    UntilOp,
    ReleaseOp,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Bang => "`!`".into(),
            Token::NextOp => "`X`".into(),
            Token::EventuallyOp => "`F`".into(),
            Token::GloballyOp => "`G`".into(),
            Token::UntilOp => "`U`".into(),
            Token::ReleaseOp => "`R`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize, usize)>, LtlError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
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
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "true" => Token::True,
                "false" => Token::False,
                "X" => Token::NextOp,
                "F" => Token::EventuallyOp,
                "G" => Token::GloballyOp,
                "U" => Token::UntilOp,
                "R" => Token::ReleaseOp,
                _ => Token::Ident(word),
            };
            out.push((tok, tl, tc));
            continue;
        }
        match c {
            '!' => {
                bump(&mut chars);
                out.push((Token::Bang, tl, tc));
            }
            '&' => {
                bump(&mut chars);
                out.push((Token::And, tl, tc));
            }
            '|' => {
                bump(&mut chars);
                out.push((Token::Or, tl, tc));
            }
            '(' => {
                bump(&mut chars);
                out.push((Token::LParen, tl, tc));
            }
            ')' => {
                bump(&mut chars);
                out.push((Token::RParen, tl, tc));
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push((Token::Implies, tl, tc));
                } else {
                    return Err(LtlError::Syntax {
                        line: tl,
                        col: tc,
                        message: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars);
                        out.push((Token::Iff, tl, tc));
                        continue;
                    }
                }
                return Err(LtlError::Syntax {
                    line: tl,
                    col: tc,
                    message: "expected `<->`".into(),
                });
            }
            other => {
                return Err(LtlError::Syntax {
                    line: tl,
                    col: tc,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    out.push((Token::Eof, line, col));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    universe: &'a Universe,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = &self.tokens[self.pos];
        (*l, *c)
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, found: String) -> LtlError {
        let (line, col) = self.here();
        LtlError::Syntax { line, col, message: format!("unexpected {found}") }
    }

    fn parse_iff(&mut self) -> Result<Formula, LtlError> {
        let lhs = self.parse_implies()?;
        if *self.peek() == Token::Iff {
            self.advance();
            let rhs = self.parse_iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_implies(&mut self) -> Result<Formula, LtlError> {
        let lhs = self.parse_or()?;
        if *self.peek() == Token::Implies {
            self.advance();
            let rhs = self.parse_implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.parse_and()?;
        while *self.peek() == Token::Or {
            self.advance();
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.parse_until()?;
        while *self.peek() == Token::And {
            self.advance();
            let rhs = self.parse_until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_until(&mut self) -> Result<Formula, LtlError> {
        let lhs = self.parse_unary()?;
        match self.peek() {
            Token::UntilOp => {
                self.advance();
                let rhs = self.parse_until()?;
                Ok(Formula::until(lhs, rhs))
            }
            Token::ReleaseOp => {
                self.advance();
                let rhs = self.parse_until()?;
                Ok(Formula::release(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn parse_unary(&mut self) -> Result<Formula, LtlError> {
        let (line, col) = self.here();
        match self.advance() {
            Token::Bang => Ok(Formula::not(self.parse_unary()?)),
            Token::NextOp => Ok(Formula::next(self.parse_unary()?)),
            Token::EventuallyOp => Ok(Formula::eventually(self.parse_unary()?)),
            Token::GloballyOp => Ok(Formula::globally(self.parse_unary()?)),
            Token::True => Ok(Formula::True),
            Token::False => Ok(Formula::False),
            Token::Ident(name) => match self.universe.lookup(&name) {
                Some(v) => Ok(Formula::atom(v)),
                None => Err(LtlError::UnknownAtom { name, line, col }),
            },
            Token::LParen => {
                let f = self.parse_iff()?;
                if *self.peek() == Token::RParen {
                    self.advance();
                    Ok(f)
                } else {
                    Err(self.unexpected(self.peek().describe()))
                }
            }
            t => Err(LtlError::Syntax {
                line,
                col,
                message: format!("unexpected {}", t.describe()),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::Formula as F;

    fn u() -> Universe {
        Universe::of(["sbs", "a", "b", "keep_e", "keep_o"])
    }

    #[test]
    fn parses_eventually_not() {
        let u = u();
        let sbs = u.lookup("sbs").unwrap();
        let f = parse_ltl("F !sbs", &u).unwrap();
        assert_eq!(f, F::eventually(F::not(F::atom(sbs))));
    }

    #[test]
    fn parses_literal_true() {
        assert_eq!(parse_ltl("true", &u()).unwrap(), F::True);
    }

    #[test]
    fn parses_next_iff() {
        let u = u();
        let a = u.lookup("a").unwrap();
        let b = u.lookup("b").unwrap();
        let f = parse_ltl("(X a) <-> b", &u).unwrap();
        assert_eq!(f, F::iff(F::next(F::atom(a)), F::atom(b)));
    }

    #[test]
    fn precedence_and_over_or() {
        let u = u();
        let f = parse_ltl("G keep_o | G F a & G F b", &u).unwrap();
        let a = u.lookup("a").unwrap();
        let b = u.lookup("b").unwrap();
        let keep_o = u.lookup("keep_o").unwrap();
        assert_eq!(
            f,
            F::or(
                F::globally(F::atom(keep_o)),
                F::and(
                    F::globally(F::eventually(F::atom(a))),
                    F::globally(F::eventually(F::atom(b)))
                )
            )
        );
    }

    #[test]
    fn until_binds_tighter_than_and() {
        let u = u();
        let a = u.lookup("a").unwrap();
        let b = u.lookup("b").unwrap();
        let f = parse_ltl("a U b & b", &u).unwrap();
        assert_eq!(f, F::and(F::until(F::atom(a), F::atom(b)), F::atom(b)));
    }

    #[test]
    fn unknown_atom_reports_position() {
        let err = parse_ltl("F !mystery", &u()).unwrap_err();
        match err {
            LtlError::UnknownAtom { name, line, col } => {
                assert_eq!(name, "mystery");
                assert_eq!((line, col), (1, 4));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_ltl("a &\n& b", &u()).unwrap_err();
        match err {
            LtlError::Syntax { line, col, .. } => assert_eq!((line, col), (2, 1)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn print_parse_roundtrip_examples() {
        let u = u();
        for text in [
            "F !sbs",
            "(X a) <-> b",
            "G keep_o | G F a & G F b",
            "a U b U a",
            "(a U b) U a",
            "!(a -> b) R (X X b | false)",
            "a -> b -> a",
            "(a -> b) -> a",
        ] {
            let f = parse_ltl(text, &u).unwrap();
            let printed = f.display(&u).to_string();
            let reparsed = parse_ltl(&printed, &u).unwrap();
            assert_eq!(f, reparsed, "roundtrip failed for `{text}` -> `{printed}`");
        }
    }
}
