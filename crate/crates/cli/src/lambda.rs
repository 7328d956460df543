//! Parser for algebraic numbers given on the command line.
//!
//! Accepted forms:
//! - `poly@[lo,hi]`: the root of `poly` in `(lo, hi]`;
//! - arithmetic over rationals and decimals with `+ - * / ^`, parentheses
//!   and `sqrt(...)`;
//! - the constants `lambda_star` (or `lambda*`), `alpha(m)` and `beta(m)`.

use specrad::algnum::{alpha, beta, lambda_star, AlgebraicReal};
use specrad::poly::{parse_rational, IntPoly};

pub fn parse_algebraic(input: &str) -> Result<AlgebraicReal, String> {
    let s = input.trim();
    if let Some((poly, interval)) = s.split_once('@') {
        return parse_isolated(poly, interval);
    }
    let mut p = Parser {
        chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(format!("unexpected '{}' at offset {}", p.chars[p.pos], p.pos));
    }
    Ok(v)
}

fn parse_isolated(poly: &str, interval: &str) -> Result<AlgebraicReal, String> {
    let p = IntPoly::parse(poly).map_err(|e| e.to_string())?;
    let inner = interval
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("interval must look like [lo,hi], got {interval}"))?;
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| "interval needs two endpoints".to_string())?;
    let lo = parse_rational(lo).ok_or_else(|| format!("bad endpoint {lo}"))?;
    let hi = parse_rational(hi).ok_or_else(|| format!("bad endpoint {hi}"))?;
    AlgebraicReal::new(&p, lo, hi).map_err(|e| e.to_string())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{c}' at offset {}", self.pos))
        }
    }

    fn expr(&mut self) -> Result<AlgebraicReal, String> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v = v.add(&self.term()?);
            } else if self.eat('-') {
                v = v.sub(&self.term()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraicReal, String> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v = v.mul(&self.unary()?);
            } else if self.eat('/') {
                v = v.div(&self.unary()?).map_err(|e| e.to_string())?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<AlgebraicReal, String> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.eat('+');
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.integer()?;
            return Ok(base.powi(k as u32));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<usize, String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| format!("expected an integer at offset {start}"))
    }

    fn atom(&mut self) -> Result<AlgebraicReal, String> {
        if self.eat('(') {
            let v = self.expr()?;
            self.expect(')')?;
            return Ok(v);
        }
        let start = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            let r = parse_rational(&text).ok_or_else(|| format!("bad number {text}"))?;
            return Ok(AlgebraicReal::from_rational(r));
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        match name.as_str() {
            "lambda_star" | "lambdastar" => Ok(lambda_star()),
            "lambda" if self.eat('*') => Ok(lambda_star()),
            "sqrt" => {
                self.expect('(')?;
                let v = self.expr()?;
                self.expect(')')?;
                v.sqrt().map_err(|e| e.to_string())
            }
            "alpha" | "beta" => {
                self.expect('(')?;
                let m = self.integer()?;
                self.expect(')')?;
                let v = if name == "alpha" { alpha(m) } else { beta(m) };
                v.map_err(|e| e.to_string())
            }
            "" => Err(format!("unexpected end or symbol at offset {start}")),
            other => Err(format!("unknown name {other}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let a = parse_algebraic("x^2-2@[1.4,1.5]").unwrap();
        assert_eq!(a, AlgebraicReal::from_integer(2).sqrt().unwrap());
        assert_eq!(parse_algebraic("sqrt(2)").unwrap(), a);
        assert_eq!(parse_algebraic("sqrt(2+sqrt(5))").unwrap(), lambda_star());
        assert_eq!(parse_algebraic("lambda*").unwrap(), lambda_star());
        assert!((parse_algebraic("1/(1+2*sqrt(2))").unwrap().to_f64() - 1.0 / (1.0 + 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(parse_algebraic("1.5").unwrap(), parse_algebraic("3/2").unwrap());
        assert_eq!(parse_algebraic("-2^2").unwrap(), AlgebraicReal::from_integer(-4));
        assert!((parse_algebraic("alpha(2)").unwrap().to_f64() - 2.0198009).abs() < 1e-7);
        assert!(parse_algebraic("foo").is_err());
        assert!(parse_algebraic("x^2-2@[0,2").is_err());
    }
}
