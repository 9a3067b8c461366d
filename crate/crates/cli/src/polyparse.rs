//! Parser for the compact polynomial notation the CLI prints and accepts:
//! sums of monomials like `2vx+2`, `-x^2+1`, `3/2v^2x - 1/4`, with an
//! optional `*` between factors. Round-trips the `Display` output of
//! `BiPoly` and `UniPoly`.

use opf_core::exactpoly::{parse_rat, BiPoly, Rat, Var};

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "polynomial parse error: {}", self.0)
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Var(Var),
    Caret,
    Star,
    Plus,
    Minus,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        match c {
            b'+' => {
                self.pos += 1;
                Ok(Tok::Plus)
            }
            b'-' => {
                self.pos += 1;
                Ok(Tok::Minus)
            }
            b'*' => {
                self.pos += 1;
                Ok(Tok::Star)
            }
            b'^' => {
                self.pos += 1;
                Ok(Tok::Caret)
            }
            b'v' => {
                self.pos += 1;
                Ok(Tok::Var(Var::V))
            }
            b'x' => {
                self.pos += 1;
                Ok(Tok::Var(Var::X))
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit()
                        || self.src[self.pos] == b'/'
                        || self.src[self.pos] == b'.')
                {
                    // a fraction bar only counts if digits follow
                    if (self.src[self.pos] == b'/' || self.src[self.pos] == b'.')
                        && !self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
                    {
                        break;
                    }
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                parse_rat(text)
                    .map(Tok::Num)
                    .ok_or_else(|| ParseError(format!("bad number {text:?}")))
            }
            other => Err(ParseError(format!("unexpected character {:?}", other as char))),
        }
    }

    fn peek(&mut self) -> Result<Tok, ParseError> {
        let saved = self.pos;
        let tok = self.next();
        self.pos = saved;
        tok
    }
}

/// Parses a bivariate polynomial in `v` and `x`.
pub fn parse_bipoly(src: &str) -> Result<BiPoly, ParseError> {
    let mut lex = Lexer::new(src);
    let mut acc = BiPoly::zero();
    let mut sign = 1i64;
    // leading sign
    match lex.peek()? {
        Tok::Minus => {
            lex.next()?;
            sign = -1;
        }
        Tok::Plus => {
            lex.next()?;
        }
        Tok::End => return Err(ParseError("empty input".into())),
        _ => {}
    }
    loop {
        let term = parse_term(&mut lex)?;
        let signed = if sign < 0 { -&term } else { term };
        acc = &acc + &signed;
        match lex.next()? {
            Tok::Plus => sign = 1,
            Tok::Minus => sign = -1,
            Tok::End => return Ok(acc),
            other => return Err(ParseError(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_term(lex: &mut Lexer) -> Result<BiPoly, ParseError> {
    let mut acc = BiPoly::one();
    let mut any = false;
    loop {
        match lex.peek()? {
            Tok::Num(c) => {
                lex.next()?;
                acc = acc.scale(&c);
                any = true;
            }
            Tok::Var(var) => {
                lex.next()?;
                let exp = match lex.peek()? {
                    Tok::Caret => {
                        lex.next()?;
                        match lex.next()? {
                            Tok::Num(e) => {
                                let val = opf_core::exactpoly::rat_to_f64(&e);
                                if val < 0.0 || val.fract() != 0.0 {
                                    return Err(ParseError(format!("bad exponent {e}")));
                                }
                                val as u32
                            }
                            other => return Err(ParseError(format!("bad exponent token {other:?}"))),
                        }
                    }
                    _ => 1,
                };
                let mono = match var {
                    Var::V => BiPoly::monomial(Rat::from_integer(1.into()), exp, 0),
                    Var::X => BiPoly::monomial(Rat::from_integer(1.into()), 0, exp),
                };
                acc = &acc * &mono;
                any = true;
            }
            Tok::Star => {
                lex.next()?;
            }
            _ => break,
        }
    }
    if !any {
        return Err(ParseError("expected a term".into()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use opf_core::exactpoly::{rat, rat_i};

    #[test]
    fn roundtrips_display_output() {
        for src in ["2vx+2", "v+2x", "-x^2+1", "4x^3-3x", "0", "1/3v^2-5/2x"] {
            let p = parse_bipoly(src).unwrap();
            let back = parse_bipoly(&p.to_string()).unwrap();
            assert_eq!(p, back, "{src}");
        }
    }

    #[test]
    fn accepts_explicit_stars_and_spaces() {
        let a = parse_bipoly("3/2 * v^2 * x - 1").unwrap();
        let mut expected = BiPoly::monomial(rat(3, 2), 2, 1);
        expected = &expected + &BiPoly::constant(rat_i(-1));
        assert_eq!(a, expected);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_bipoly("").is_err());
        assert!(parse_bipoly("v^").is_err());
        assert!(parse_bipoly("y+1").is_err());
        assert!(parse_bipoly("1++2").is_err());
    }
}
