//! Concrete syntax.
//!
//! ```text
//! expr  := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | ('F' | 'P') iv unary | atom | 'true' | 'false'
//!        | '(' expr ')' | '[' expr ']'
//! iv    := ('[' | '(') nat ',' (nat | 'inf') (']' | ')')
//! ```

use thiserror::Error;

use super::{Formula, Modality};
use crate::interval::Interval;
use crate::word::{Alphabet, Symbol, END_MARKER, START_MARKER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom `{atom}` at {pos}")]
    UnknownAtom { pos: usize, atom: String },
    #[error("malformed interval at {pos}: {msg}")]
    Interval { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Bang,
    Amp,
    Bar,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let simple = match c {
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            toks.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let n = s.parse::<u64>().map_err(|e| ParseError::Syntax {
                pos,
                msg: format!("bad number `{s}`: {e}"),
            })?;
            toks.push((pos, Tok::Num(n)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            toks.push((pos, Tok::Ident(s)));
        } else if START_MARKER.starts_with(c) || END_MARKER.starts_with(c) {
            toks.push((pos, Tok::Ident(c.to_string())));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    toks.push((text.len(), Tok::End));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    alphabet: Option<&'a Alphabet>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conj()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Bang => Ok(Formula::not(self.unary()?)),
            Tok::LParen => {
                let f = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::LBrack => {
                let f = self.expr()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => Ok(Formula::tt()),
                "false" => Ok(Formula::ff()),
                "F" | "P" => {
                    let m = if name == "F" {
                        Modality::F
                    } else {
                        Modality::P
                    };
                    let iv = self.interval()?;
                    let arg = self.unary()?;
                    Ok(Formula::modal(m, iv, arg))
                }
                "inf" => Err(ParseError::Syntax {
                    pos,
                    msg: "`inf` is only allowed as an interval bound".into(),
                }),
                _ => {
                    let sym = Symbol::new(&name);
                    if let Some(sigma) = self.alphabet {
                        if !sigma.contains(&sym) {
                            return Err(ParseError::UnknownAtom { pos, atom: name });
                        }
                    }
                    Ok(Formula::sym(&sym))
                }
            },
            Tok::End => Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            t => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected {t:?}"),
            }),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn interval(&mut self) -> Result<Interval, ParseError> {
        let pos = self.pos();
        let bad = |msg: &str| ParseError::Interval {
            pos,
            msg: msg.into(),
        };
        let lower_open = match self.bump() {
            Tok::LBrack => false,
            Tok::LParen => true,
            _ => return Err(bad("expected `[` or `(` after modality")),
        };
        let lower = match self.bump() {
            Tok::Num(n) => n,
            Tok::Ident(s) if s == "inf" => return Err(bad("lower bound cannot be `inf`")),
            _ => return Err(bad("expected a natural lower bound")),
        };
        if self.bump() != Tok::Comma {
            return Err(bad("expected `,`"));
        }
        let upper = match self.bump() {
            Tok::Num(n) => Some(n),
            Tok::Ident(s) if s == "inf" => None,
            _ => return Err(bad("expected a natural upper bound or `inf`")),
        };
        let upper_open = match self.bump() {
            Tok::RBrack => false,
            Tok::RParen => true,
            _ => return Err(bad("expected `]` or `)`")),
        };
        if upper.is_none() && !upper_open {
            return Err(bad("`inf` must be closed with `)`"));
        }
        Interval::new(lower, upper, lower_open, upper_open).map_err(|e| bad(&e.to_string()))
    }
}

/// Parses without restricting atoms.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    run(text, None)
}

/// Parses and rejects atoms outside `sigma`.
pub fn parse_with_alphabet(text: &str, sigma: &Alphabet) -> Result<Formula, ParseError> {
    run(text, Some(sigma))
}

fn run(text: &str, alphabet: Option<&Alphabet>) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        alphabet,
    };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Node;
    use crate::word::alphabet;

    #[test]
    fn lower_bound_example() {
        let f = parse("F(1,inf) c").unwrap();
        assert_eq!(f, Formula::f(Interval::greater_than(1), Formula::atom("c")));
    }

    #[test]
    fn bracket_grouping() {
        let f = parse("F[0,inf)[ a & F(2,inf) c ]").unwrap();
        let expected = Formula::f(
            Interval::anywhere(),
            Formula::and(
                Formula::atom("a"),
                Formula::f(Interval::greater_than(2), Formula::atom("c")),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn punctual_parses() {
        let f = parse("F[2,2] a").unwrap();
        assert!(matches!(f.node(), Node::Modal(_, iv, _) if iv.is_punctual()));
    }

    #[test]
    fn precedence() {
        let f = parse("!a & b | c").unwrap();
        assert_eq!(f.to_string(), "((!a & b) | c)");
        let g = parse("F(0,1) a & b").unwrap();
        assert_eq!(g.to_string(), "(F(0,1) a & b)");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse("a &"),
            Err(ParseError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse("F(3,2) a"),
            Err(ParseError::Interval { pos: 1, .. })
        ));
        assert!(matches!(
            parse("F[inf,2] a"),
            Err(ParseError::Interval { .. })
        ));
        assert!(matches!(
            parse("F[1,inf] a"),
            Err(ParseError::Interval { .. })
        ));
        assert!(matches!(
            parse_with_alphabet("a & d", &alphabet(["a", "c"])),
            Err(ParseError::UnknownAtom { pos: 4, .. })
        ));
        assert!(matches!(parse("a b"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn markers_are_atoms() {
        let f = parse("▷ | ◁").unwrap();
        assert_eq!(f.to_string(), "(▷ | ◁)");
    }

    #[test]
    fn round_trip_nested() {
        let text = "P[1,inf) (b & !F(1,inf) (c | true)) | !false";
        let f = parse(text).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
