//! Canonical text for series and Tate-algebra elements, and its parser.
//!
//! The text is the `Display` form: monomials in graded-lex order, θ-exponents
//! decreasing inside each coefficient, rational exponents reduced (`theta^(-1/2)`),
//! and the floor as a trailing `O(theta^-v)`. Parsing it back gives the same value.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Context, Fe};
use crate::series::RamifiedSeries;
use crate::tate::{Mono, TateElement, NVARS};

#[must_use]
pub fn series_to_string(x: &RamifiedSeries) -> String {
    x.to_string()
}

#[must_use]
pub fn tate_to_string(x: &TateElement) -> String {
    x.to_string()
}

pub fn parse_series(ctx: &Arc<Context>, s: &str) -> Result<RamifiedSeries> {
    let mut p = Parser { ctx, src: s.as_bytes(), pos: 0 };
    let x = p.series()?;
    p.end()?;
    Ok(x)
}

pub fn parse_tate(ctx: &Arc<Context>, s: &str) -> Result<TateElement> {
    let mut p = Parser { ctx, src: s.as_bytes(), pos: 0 };
    let x = p.tate()?;
    p.end()?;
    Ok(x)
}

enum Term {
    Coeff { coeff: RamifiedSeries, mono: Mono },
    Floor(i64),
    Tcap(u32),
}

struct Parser<'a> {
    ctx: &'a Arc<Context>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }
    fn ws(&mut self) {
        while self.src.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }
    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }
    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{tok}'")))
        }
    }
    fn end(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
    fn uint(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }
    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let v = i64::try_from(self.uint()?).map_err(|_| self.err("integer overflow"))?;
        Ok(if neg { -v } else { v })
    }

    /// θ-exponent as a numerator over `R`: `k`, `-k` or `(a/b)`.
    fn theta_exp(&mut self) -> Result<i64> {
        let r = self.ctx.r();
        if self.eat("(") {
            let a = self.int()?;
            self.expect("/")?;
            let b = self.int()?;
            self.expect(")")?;
            if b <= 0 || (a * r) % b != 0 {
                return Err(self.err("exponent not representable over R"));
            }
            Ok(a * r / b)
        } else {
            Ok(self.int()? * r)
        }
    }

    fn elem(&mut self, v: u64) -> Result<Fe> {
        let p = u64::from(self.ctx.p());
        if v >= p {
            return Err(self.err("integer coefficient outside the prime field"));
        }
        Ok(v as Fe)
    }

    /// Signed sum of terms, ending at `)` or end of input.
    fn terms(&mut self) -> Result<Vec<(bool, Term)>> {
        let mut out = Vec::new();
        let mut neg = self.eat("-");
        loop {
            out.push((neg, self.term()?));
            if self.eat("+") {
                neg = false;
            } else if self.eat("-") {
                neg = true;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term> {
        if self.eat("O(") {
            let t = if self.eat("deg>") {
                Term::Tcap(u32::try_from(self.uint()?).map_err(|_| self.err("cap overflow"))?)
            } else {
                self.expect("theta^")?;
                Term::Floor(-self.theta_exp()?)
            };
            self.expect(")")?;
            return Ok(t);
        }
        let mut c: Fe = 1;
        let mut e = 0i64;
        let mut paren: Option<RamifiedSeries> = None;
        let mut mono = Mono::one();
        loop {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    paren = Some(self.series()?);
                    self.expect(")")?;
                }
                Some(b'0'..=b'9') => {
                    let v = self.uint()?;
                    c = self.ctx.mul(c, self.elem(v)?);
                }
                Some(b'g') => {
                    self.expect("g^")?;
                    let k = self.uint()?;
                    c = self.ctx.mul(c, self.ctx.from_log(k));
                }
                Some(b't') if self.eat("theta") => {
                    e += if self.eat("^") { self.theta_exp()? } else { self.ctx.r() };
                }
                Some(b't') => {
                    self.pos += 1;
                    let j = if self.src.get(self.pos) == Some(&b'_') {
                        self.pos += 1;
                        usize::try_from(self.uint()?).map_err(|_| self.err("bad variable"))?
                    } else {
                        0
                    };
                    if j >= NVARS || (j == 0 && self.src.get(self.pos - 1) == Some(&b'_')) {
                        return Err(self.err("variable index out of range"));
                    }
                    let k = if self.eat("^") { self.uint()? } else { 1 };
                    let k = u16::try_from(k).map_err(|_| self.err("exponent overflow"))?;
                    mono = mono.mul(&Mono::var(j, k));
                }
                _ => return Err(self.err("expected a factor")),
            }
            if !self.eat("*") {
                break;
            }
        }
        let base = RamifiedSeries::monomial(self.ctx, c, e);
        let coeff = match paren {
            Some(s) => s.mul(&base),
            None => base,
        };
        Ok(Term::Coeff { coeff, mono })
    }

    fn series(&mut self) -> Result<RamifiedSeries> {
        let mut terms = Vec::new();
        let mut floor = None;
        for (neg, t) in self.terms()? {
            match t {
                Term::Coeff { coeff, mono } if mono.is_one() && coeff.is_exact() => {
                    let coeff = if neg { coeff.neg() } else { coeff };
                    terms.extend_from_slice(coeff.terms());
                }
                Term::Floor(f) if !neg && floor.is_none() => floor = Some(f),
                _ => return Err(self.err("not a series term")),
            }
        }
        Ok(RamifiedSeries::from_terms(self.ctx, terms, floor))
    }

    fn tate(&mut self) -> Result<TateElement> {
        let mut terms = Vec::new();
        let (mut floor, mut tcap) = (None, None);
        for (neg, t) in self.terms()? {
            match t {
                Term::Coeff { coeff, mono } => terms.push((mono, if neg { coeff.neg() } else { coeff })),
                // the constant coefficient's own floor marker repeats the global one
                Term::Floor(f) if !neg => floor = Some(floor.map_or(f, |g: i64| g.min(f))),
                Term::Tcap(c) if !neg && tcap.is_none() => tcap = Some(c),
                _ => return Err(self.err("misplaced marker")),
            }
        }
        Ok(TateElement::from_terms(self.ctx, terms, floor, tcap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx(p: u32, m: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, 1, m), Precision::default()).unwrap()
    }

    #[test]
    fn test_series_text() {
        let k = ctx(3, 1);
        let r = k.r();
        let x = RamifiedSeries::from_terms(&k, vec![(2 * r, 1), (-r / 2, 2), (0, 1)], Some(5 * r));
        let s = series_to_string(&x);
        assert_eq!(s, "theta^2 + 1 - theta^(-1/2) + O(theta^-5)");
        assert!(parse_series(&k, &s).unwrap().same(&x));
    }

    #[test]
    fn test_tate_text() {
        let k = ctx(3, 1);
        let x = TateElement::var(&k, 1).sub(&TateElement::var(&k, 0));
        assert_eq!(tate_to_string(&x), "t_1 - t");
        assert!(parse_tate(&k, "t_1 - t").unwrap().same(&x));
        assert!(parse_tate(&k, "0").unwrap().is_exact_zero());
    }

    #[test]
    fn test_extension_coefficients() {
        let k = ctx(2, 2);
        let g = k.generator();
        let x = TateElement::from_terms(
            &k,
            vec![
                (Mono::var(1, 2), RamifiedSeries::from_terms(&k, vec![(k.r(), g), (0, 1)], Some(3 * k.r()))),
                (Mono::one(), RamifiedSeries::monomial(&k, k.mul(g, g), -k.r())),
            ],
            None,
            Some(4),
        );
        let s = tate_to_string(&x);
        assert!(parse_tate(&k, &s).unwrap().same(&x), "{s}");
    }

    #[test]
    fn test_rejects_garbage() {
        let k = ctx(2, 1);
        assert!(parse_series(&k, "theta +").is_err());
        assert!(parse_series(&k, "3*theta").is_err());
        assert!(parse_series(&k, "t_1").is_err());
    }
}
