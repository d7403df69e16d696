//! Slope expressions.
//!
//! ```text
//! slope  := "phi" | "e" | "1/e" | cf | surd
//! cf     := "cf:[" INT ";" [item ("," item)*] "]"
//! item   := UINT | "|" UINT | "..."
//! surd   := sum ["/" INT]
//! sum    := ["+" | "-"] term (("+" | "-") term)*
//! term   := UINT ["*" "sqrt(" UINT ")"] | "sqrt(" UINT ")" | "(" sum ")"
//! ```
//!
//! In a continued fraction a trailing `...` repeats the block that starts at
//! the `|` marker, or right after the `;` when there is no marker, so
//! `cf:[0;1,...]` is `phi` and `cf:[1;|2,...]` is `sqrt(2)`. Without `...` the
//! expansion is finite and rejected as rational. All surd terms must share one
//! radicand.

use super::cf::{CfTail, ContinuedFraction};
use super::IrrationalSlope;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
    Ellipsis,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    text: String,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            let v = text.parse::<u64>().map_err(|_| Error::Parse {
                message: "integer literal too large".into(),
                token: text.into(),
                offset: start,
            })?;
            out.push(Token { tok: Tok::Int(v), text: text.into(), offset: start });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            let text = &src[start..i];
            out.push(Token { tok: Tok::Ident(text.into()), text: text.into(), offset: start });
        } else if src[i..].starts_with("...") {
            out.push(Token { tok: Tok::Ellipsis, text: "...".into(), offset: i });
            i += 3;
        } else if "+-*/()[];:,|".contains(c) {
            out.push(Token { tok: Tok::Sym(c), text: c.to_string(), offset: i });
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or(c);
            return Err(Error::Parse {
                message: "unexpected character".into(),
                token: ch.to_string(),
                offset: i,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    src: &'a str,
}

/// `(a + b*sqrt(d))` accumulated while parsing a sum.
#[derive(Clone, Copy, Debug, Default)]
struct Lin {
    a: i64,
    b: i64,
    d: Option<u64>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err_here(&self, message: &str) -> Error {
        match self.toks.get(self.pos) {
            Some(t) => Error::Parse {
                message: message.into(),
                token: t.text.clone(),
                offset: t.offset,
            },
            None => Error::Parse {
                message: message.into(),
                token: "<end>".into(),
                offset: self.src.len(),
            },
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_here(&format!("expected `{c}`")))
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err_here("expected an integer")),
        }
    }

    fn int_i64(&self, v: u64) -> Result<i64> {
        i64::try_from(v).map_err(|_| self.err_at_prev("integer literal too large"))
    }

    fn err_at_prev(&self, message: &str) -> Error {
        let t = &self.toks[self.pos.saturating_sub(1)];
        Error::Parse { message: message.into(), token: t.text.clone(), offset: t.offset }
    }

    fn at_end(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err_here("trailing input"))
        }
    }

    fn sqrt_call(&mut self) -> Result<u64> {
        // `sqrt` identifier already consumed
        self.expect_sym('(')?;
        let d = self.expect_int()?;
        self.expect_sym(')')?;
        Ok(d)
    }

    fn term(&mut self) -> Result<Lin> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                let v = self.int_i64(v)?;
                if self.peek() == Some(&Tok::Sym('*')) {
                    self.pos += 1;
                    match self.peek() {
                        Some(Tok::Ident(name)) if name == "sqrt" => {
                            self.pos += 1;
                            let d = self.sqrt_call()?;
                            Ok(Lin { a: 0, b: v, d: Some(d) })
                        }
                        _ => Err(self.err_here("expected `sqrt(...)` after `*`")),
                    }
                } else {
                    Ok(Lin { a: v, b: 0, d: None })
                }
            }
            Some(Tok::Ident(name)) if name == "sqrt" => {
                self.pos += 1;
                let d = self.sqrt_call()?;
                Ok(Lin { a: 0, b: 1, d: Some(d) })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            _ => Err(self.err_here("expected a number, `sqrt(...)` or `(`")),
        }
    }

    fn sum(&mut self) -> Result<Lin> {
        let mut sign = 1i64;
        match self.peek() {
            Some(Tok::Sym('-')) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Tok::Sym('+')) => self.pos += 1,
            _ => {}
        }
        let mut acc = Lin::default();
        loop {
            let start = self.pos;
            let t = self.term()?;
            acc = self.combine(acc, t, sign, start)?;
            match self.peek() {
                Some(Tok::Sym('+')) => sign = 1,
                Some(Tok::Sym('-')) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn combine(&self, acc: Lin, t: Lin, sign: i64, at: usize) -> Result<Lin> {
        let d = match (acc.d, t.d) {
            (Some(x), Some(y)) if x != y => {
                let tok = &self.toks[at];
                return Err(Error::Parse {
                    message: "all square roots must share one radicand".into(),
                    token: tok.text.clone(),
                    offset: tok.offset,
                });
            }
            (x, y) => x.or(y),
        };
        let overflow = || self.err_at_prev("coefficient overflow");
        Ok(Lin {
            a: acc.a.checked_add(sign * t.a).ok_or_else(overflow)?,
            b: acc.b.checked_add(sign * t.b).ok_or_else(overflow)?,
            d,
        })
    }

    fn surd(&mut self) -> Result<IrrationalSlope> {
        let lin = self.sum()?;
        let mut c = 1i64;
        if self.peek() == Some(&Tok::Sym('/')) {
            self.pos += 1;
            let neg = if self.peek() == Some(&Tok::Sym('-')) {
                self.pos += 1;
                true
            } else {
                false
            };
            let v = self.expect_int()?;
            c = self.int_i64(v)?;
            if neg {
                c = -c;
            }
        }
        self.at_end()?;
        let Some(d) = lin.d else {
            return Err(Error::RationalInput(format!("`{}` has no square root", self.src.trim())));
        };
        IrrationalSlope::quadratic(lin.a, lin.b, d, c)
    }

    fn cf(&mut self) -> Result<IrrationalSlope> {
        // `cf` identifier already consumed
        self.expect_sym(':')?;
        self.expect_sym('[')?;
        let neg = if self.peek() == Some(&Tok::Sym('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let a0 = self.expect_int()?;
        let mut a0 = self.int_i64(a0)?;
        if neg {
            a0 = -a0;
        }
        self.expect_sym(';')?;
        let mut items: Vec<i64> = Vec::new();
        let mut period_start: Option<usize> = None;
        let mut repeating = false;
        if self.peek() != Some(&Tok::Sym(']')) {
            loop {
                match self.peek() {
                    Some(Tok::Ellipsis) => {
                        self.pos += 1;
                        repeating = true;
                        break;
                    }
                    Some(Tok::Sym('|')) => {
                        if period_start.is_some() {
                            return Err(self.err_here("only one `|` marker allowed"));
                        }
                        self.pos += 1;
                        period_start = Some(items.len());
                    }
                    _ => {}
                }
                let v = self.expect_int()?;
                if v == 0 {
                    return Err(self.err_at_prev("partial quotients after the first must be >= 1"));
                }
                items.push(self.int_i64(v)?);
                if self.peek() == Some(&Tok::Sym(',')) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect_sym(']')?;
        self.at_end()?;
        let mut head = vec![a0];
        let tail = if repeating {
            let start = period_start.unwrap_or(0);
            if start >= items.len() {
                return Err(Error::Parse {
                    message: "`...` needs a non-empty block to repeat".into(),
                    token: "...".into(),
                    offset: self.src.find("...").unwrap_or(0),
                });
            }
            head.extend_from_slice(&items[..start]);
            CfTail::Periodic(items[start..].iter().map(|&x| x as u64).collect())
        } else {
            head.extend_from_slice(&items);
            CfTail::None
        };
        Ok(IrrationalSlope::continued_fraction(ContinuedFraction::new(head, tail)?))
    }
}

pub(crate) fn parse_slope(src: &str) -> Result<IrrationalSlope> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, src };
    match p.peek().cloned() {
        None => Err(p.err_here("empty slope expression")),
        Some(Tok::Ident(name)) => match name.as_str() {
            "phi" => {
                p.pos += 1;
                p.at_end()?;
                Ok(IrrationalSlope::phi())
            }
            "e" => {
                p.pos += 1;
                p.at_end()?;
                Ok(IrrationalSlope::e())
            }
            "cf" => {
                p.pos += 1;
                p.cf()
            }
            "sqrt" => p.surd(),
            _ => Err(p.err_here("unknown name")),
        },
        Some(Tok::Int(1))
            if p.toks.len() == 3
                && p.toks[1].tok == Tok::Sym('/')
                && p.toks[2].tok == Tok::Ident("e".into()) =>
        {
            Ok(IrrationalSlope::e_inv())
        }
        _ => p.surd(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irrational::SlopeKind;

    fn surd_parts(s: &str) -> (i64, i64, u64, i64) {
        match parse_slope(s).unwrap().kind() {
            SlopeKind::QuadraticSurd(q) => (q.a(), q.b(), q.d(), q.c()),
            k => panic!("not a surd: {k:?}"),
        }
    }

    #[test]
    fn named_slopes() {
        assert_eq!(surd_parts("phi"), (-1, 1, 5, 2));
        assert!(matches!(parse_slope("e").unwrap().kind(), SlopeKind::EulerE));
        assert!(matches!(parse_slope(" 1 / e ").unwrap().kind(), SlopeKind::EulerEInv));
    }

    #[test]
    fn surd_forms() {
        assert_eq!(surd_parts("sqrt(2)"), (0, 1, 2, 1));
        assert_eq!(surd_parts("(-1+1*sqrt(5))/2"), (-1, 1, 5, 2));
        assert_eq!(surd_parts("(sqrt(5)-3)/2"), (-3, 1, 5, 2));
        assert_eq!(surd_parts("sqrt(2)-1"), (-1, 1, 2, 1));
        assert_eq!(surd_parts("(3-sqrt(5))/2"), (3, -1, 5, 2));
        assert_eq!(surd_parts("(1+2*sqrt(3))/-4"), (-1, -2, 3, 4));
    }

    #[test]
    fn cf_forms() {
        let phi = parse_slope("cf:[0;1,...]").unwrap();
        let want = crate::irrational::IrrationalSlope::phi();
        for k in 1..100 {
            assert_eq!(phi.floor_scaled(k).unwrap(), want.floor_scaled(k).unwrap());
        }
        let two = parse_slope("cf:[1;|2,...]").unwrap();
        assert_eq!(two.convergent(3).unwrap().to_string(), "17/12");
        let tail = parse_slope("cf:[0;5,|1,2,...]").unwrap();
        let qs: Vec<String> = tail.convergents().take(5).map(|c| c.to_string()).collect();
        // [0;5,1,2,1,...]
        assert_eq!(qs, ["0/1", "1/5", "1/6", "3/17", "4/23"]);
    }

    #[test]
    fn errors_name_the_token() {
        match parse_slope("(1+2*sqrt(5))/x") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "x"),
            other => panic!("{other:?}"),
        }
        match parse_slope("pi") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "pi"),
            other => panic!("{other:?}"),
        }
        match parse_slope("sqrt(2)+sqrt(3)") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "sqrt"),
            other => panic!("{other:?}"),
        }
        match parse_slope("phi$") {
            Err(Error::Parse { token, offset, .. }) => assert_eq!((token.as_str(), offset), ("$", 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_slope("cf:[0;1,2]"), Err(Error::RationalInput(_))));
        assert!(matches!(parse_slope("sqrt(4)"), Err(Error::RationalInput(_))));
        assert!(matches!(parse_slope("3/4"), Err(Error::RationalInput(_))));
        assert!(parse_slope("cf:[0;0,...]").is_err());
        assert!(parse_slope("").is_err());
    }
}
