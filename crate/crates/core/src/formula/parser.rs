use std::fmt;

use super::{BinaryOp, Formula};

/// A syntax error: the byte offset where parsing stopped and what would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: expected {}",
            self.offset,
            self.expected.join(", ")
        )?;
        match &self.found {
            Some(tok) => write!(f, ", found `{tok}`"),
            None => write!(f, ", found end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    Bin(BinaryOp),
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> Option<String> {
        match self {
            Tok::Ident(s) => Some(s.clone()),
            Tok::Not => Some("~".into()),
            Tok::Bin(op) => Some(op.symbol().into()),
            Tok::LParen => Some("(".into()),
            Tok::RParen => Some(")".into()),
            Tok::Eof => None,
        }
    }
}

const OPERAND_START: &[&str] = &["identifier", "~", "("];
const AFTER_OPERAND: &[&str] = &["&", "|", "->", "=>", "<->", "<=>", ")", "end of input"];
const TOKEN_START: &[&str] = &[
    "identifier",
    "~",
    "&",
    "|",
    "->",
    "=>",
    "<->",
    "<=>",
    "(",
    ")",
];

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    let bad = |offset: usize, c: char| ParseError {
        offset,
        expected: TOKEN_START.to_vec(),
        found: Some(c.to_string()),
    };
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((i, Tok::Ident(input[i..end].to_string())));
            continue;
        }
        let rest = &input[i..];
        let (tok, len) = if let Some(t) = [
            ("<->", Tok::Bin(BinaryOp::IndBicond)),
            ("<=>", Tok::Bin(BinaryOp::MatBicond)),
            ("->", Tok::Bin(BinaryOp::Cond)),
            ("=>", Tok::Bin(BinaryOp::MatCond)),
            ("⊃⊂", Tok::Bin(BinaryOp::MatBicond)),
        ]
        .into_iter()
        .find(|(s, _)| rest.starts_with(s))
        {
            (t.1, t.0.len())
        } else {
            let tok = match c {
                '~' | '¬' => Tok::Not,
                '&' | '∧' => Tok::Bin(BinaryOp::Conj),
                '|' | '∨' => Tok::Bin(BinaryOp::Disj),
                '→' => Tok::Bin(BinaryOp::Cond),
                '⊃' => Tok::Bin(BinaryOp::MatCond),
                '↔' => Tok::Bin(BinaryOp::IndBicond),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(bad(i, c)),
            };
            (tok, c.len_utf8())
        };
        out.push((i, tok));
        for _ in rest[..len].chars() {
            chars.next();
        }
    }
    out.push((input.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError {
            offset: *offset,
            expected: expected.to_vec(),
            found: tok.describe(),
        }
    }

    fn conditional(&mut self) -> Result<Formula, ParseError> {
        let left = self.boolean()?;
        match *self.peek() {
            Tok::Bin(op) if op.precedence() == 1 => {
                self.pos += 1;
                let right = self.conditional()?;
                Ok(Formula::binary(op, left, right))
            }
            _ => Ok(left),
        }
    }

    fn boolean(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Bin(op) = *self.peek() {
            if op.precedence() != 2 {
                break;
            }
            self.pos += 1;
            let rhs = self.unary()?;
            acc = Formula::binary(op, acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.pos += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.conditional()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&AFTER_OPERAND[..7]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(OPERAND_START)),
        }
    }
}

/// Parses a formula in the ASCII (or Unicode alias) syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let f = parser.conditional()?;
    if *parser.peek() != Tok::Eof {
        let mut expected = AFTER_OPERAND.to_vec();
        expected.retain(|e| *e != ")");
        return Err(parser.error(&expected));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("p -> (q -> r)").unwrap(),
            Formula::cond(atom("p"), Formula::cond(atom("q"), atom("r")))
        );
        assert_eq!(
            parse("(p & q) -> r").unwrap(),
            Formula::cond(Formula::conj(atom("p"), atom("q")), atom("r"))
        );
    }

    #[test]
    fn conditionals_associate_right() {
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            parse("p -> (q -> r)").unwrap()
        );
        assert_eq!(
            parse("p => q <-> r").unwrap(),
            parse("p => (q <-> r)").unwrap()
        );
    }

    #[test]
    fn conjunction_level_associates_left() {
        assert_eq!(parse("p & q | r").unwrap(), parse("(p & q) | r").unwrap());
        assert_eq!(parse("p | q & r").unwrap(), parse("(p | q) & r").unwrap());
        assert_eq!(
            parse("~p & q").unwrap(),
            Formula::conj(Formula::neg(atom("p")), atom("q"))
        );
        assert_eq!(parse("p & q -> r").unwrap(), parse("(p & q) -> r").unwrap());
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("¬p ∧ q → r").unwrap(), parse("~p & q -> r").unwrap());
        assert_eq!(parse("p ⊃ q").unwrap(), parse("p => q").unwrap());
        assert_eq!(parse("p ⊃⊂ q").unwrap(), parse("p <=> q").unwrap());
        assert_eq!(parse("p ↔ q ∨ r").unwrap(), parse("p <-> q | r").unwrap());
    }

    #[test]
    fn identifiers() {
        assert_eq!(parse("Rain_2").unwrap(), atom("Rain_2"));
        assert!(parse("2p").is_err());
        assert!(parse("_p").is_err());
    }

    #[test]
    fn dangling_operator_reports_offset() {
        let err = parse("p >").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.found.as_deref(), Some(">"));
    }

    #[test]
    fn error_positions() {
        let err = parse("p &").unwrap_err();
        assert_eq!(err.offset, 3);
        assert_eq!(err.expected, OPERAND_START);
        assert_eq!(err.found, None);

        let err = parse("(p -> q").unwrap_err();
        assert_eq!(err.offset, 7);
        assert!(err.expected.contains(&")"));

        let err = parse("p q").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.found.as_deref(), Some("q"));

        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("p - q").unwrap_err().offset, 2);
    }
}
