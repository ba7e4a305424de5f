//! Polynomial expressions in the printed form of `MultiPoly`:
//! `x^2 - 3/2*y + 4`, with `*`, `^`, parentheses and negative exponents on
//! bare variables (Laurent monomials).

use num_traits::{One, Zero};
use poisson_core::exact_algebra::{MultiPoly, Scalar, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                // `3/2` is one literal; division of expressions is not supported
                if i + 1 < cs.len() && cs[i] == '/' && cs[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit: String = cs[start..i].iter().collect();
                let v = poisson_core::exact_algebra::scalar::parse_scalar(&lit).map_err(|e| e.to_string())?;
                out.push(Tok::Num(v));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, String> {
        let mut sign = Scalar::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -sign;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?.scale(&sign);
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, String> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<Option<i32>, String> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(v)) if v.is_integer() => {
                let k: i32 = v.to_integer().try_into().map_err(|_| "exponent too large".to_string())?;
                Ok(Some(if neg { -k } else { k }))
            }
            _ => Err("expected an integer exponent after `^`".into()),
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, String> {
        match self.next() {
            Some(Tok::Num(v)) => {
                let p = MultiPoly::constant(self.vars, v);
                match self.exponent()? {
                    Some(k) if k >= 0 => Ok(p.pow(k as u32)),
                    Some(_) => Err("negative power of a constant".into()),
                    None => Ok(p),
                }
            }
            Some(Tok::Ident(name)) => {
                let i = self.vars.index_of(&name).ok_or_else(|| format!("unknown variable `{name}`"))?;
                let mut e = vec![0; self.vars.len()];
                e[i] = self.exponent()?.unwrap_or(1);
                Ok(MultiPoly::monomial(self.vars, e, Scalar::one()))
            }
            Some(Tok::LParen) => {
                let p = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err("missing `)`".into());
                }
                match self.exponent()? {
                    Some(k) if k >= 0 => Ok(p.pow(k as u32)),
                    Some(_) => Err("negative power of a parenthesised expression".into()),
                    None => Ok(p),
                }
            }
            // unary minus binds looser than `^`: -x^2 = -(x^2)
            Some(Tok::Minus) => Ok(self.factor()?.scale(&-Scalar::one())),
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

/// Parses an expression over `vars`. The empty string is rejected; write `0`.
pub fn parse_poly(s: &str, vars: &Vars) -> Result<MultiPoly, String> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0, vars };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input after position {}", p.pos));
    }
    Ok(r)
}

/// True when `p` is a single term (used for transition denominators).
pub fn is_monomial(p: &MultiPoly) -> bool {
    p.len() == 1 && !p.terms().values().any(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use poisson_core::exact_algebra::scalar::frac;

    #[test]
    fn display_round_trip() {
        let v = Vars::new(["x", "y"]);
        for s in ["x^2 - 3/2*y + 4", "-x*y^3", "0", "1/3", "x^-1*y", "-2*x + y^2"] {
            let p = parse_poly(s, &v).unwrap();
            assert_eq!(parse_poly(&p.to_string(), &v).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn arithmetic() {
        let v = Vars::new(["x", "y"]);
        let p = parse_poly("(x + y)^2 - 2*x*y", &v).unwrap();
        assert_eq!(p, parse_poly("x^2 + y^2", &v).unwrap());
        assert_eq!(parse_poly("3/4*x", &v).unwrap().coeff(&[1, 0]), frac(3, 4));
        assert!(parse_poly("z", &v).is_err());
        assert!(parse_poly("x +", &v).is_err());
        assert!(parse_poly("", &v).is_err());
        assert_eq!(parse_poly("x + -1", &v).unwrap(), parse_poly("x - 1", &v).unwrap());
        assert_eq!(parse_poly("-x^2*-y", &v).unwrap(), parse_poly("x^2*y", &v).unwrap());
    }
}
