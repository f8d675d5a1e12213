//! Recursive-descent parser for the ASCII polynomial grammar.
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' ('-'? digits))?
//! base     := name | rational | '(' expr ')'
//! rational := digits ('/' digits)?
//! ```
//!
//! Variables are `x` and `y`; the aliases `x0,x1,x2` and `y0,y1,y2` map onto
//! the `x`/`y` roles. Any other name must appear in the bindings map and is
//! substituted by its exact rational value.

use super::{LaurentPoly, PolyError};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

const VARS: &[&str] = &["x", "y"];

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    bindings: &'a BTreeMap<String, Rat>,
}

/// Parse `text` into an exact Laurent polynomial in the variables x, y.
pub fn parse_poly(text: &str, bindings: &BTreeMap<String, Rat>) -> Result<LaurentPoly, PolyError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        bindings,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly, PolyError> {
        let mut sign = Rat::one();
        if let Some(c) = self.peek() {
            if c == b'+' {
                self.pos += 1;
            } else if c == b'-' {
                self.pos += 1;
                sign = -Rat::one();
            }
        }
        let mut acc = self.term()?.scale(&sign);
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly, PolyError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly, PolyError> {
        let base = self.base()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let mut neg = false;
            if let Some(b'-') = self.bytes.get(self.pos) {
                neg = true;
                self.pos += 1;
            }
            let digits = self.digits()?;
            let exp: i64 = digits
                .parse()
                .map_err(|_| PolyError::ExponentOverflow)?;
            if exp > 64 {
                return Err(PolyError::ExponentOverflow);
            }
            if neg {
                return base_inverse_pow(&base, exp).ok_or_else(|| {
                    PolyError::NegativeExponent("non-monomial base".to_string())
                });
            }
            return Ok(base.pow(exp as u32));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<LaurentPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let num: BigInt = num.parse().expect("digits");
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.digits()?;
                    let den: BigInt = den.parse().expect("digits");
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(LaurentPoly::constant(VARS, Rat::new(num, den)))
                } else {
                    Ok(LaurentPoly::constant(VARS, Rat::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.name()?;
                match canonical_var(&name) {
                    Some(idx) => Ok(LaurentPoly::var(VARS, idx, 1)),
                    None => match self.bindings.get(&name) {
                        Some(v) => Ok(LaurentPoly::constant(VARS, v.clone())),
                        None => Err(PolyError::UnboundParameter {
                            name,
                            pos: start,
                        }),
                    },
                }
            }
            _ => Err(self.err("expected a name, number or `(`")),
        }
    }

    fn digits(&mut self) -> Result<String, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii")
            .to_string())
    }

    fn name(&mut self) -> Result<String, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a name"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii")
            .to_string())
    }
}

fn canonical_var(name: &str) -> Option<usize> {
    match name {
        "x" | "x0" | "x1" | "x2" => Some(0),
        "y" | "y0" | "y1" | "y2" => Some(1),
        _ => None,
    }
}

/// Negative power: defined for monomials and nonzero constants only.
fn base_inverse_pow(base: &LaurentPoly, exp: i64) -> Option<LaurentPoly> {
    if base.num_terms() != 1 {
        return None;
    }
    let (e, c) = base.terms().next().expect("one term");
    let mut inv_exps = vec![];
    for &x in e {
        inv_exps.push(x.checked_mul(-exp)?);
    }
    let mut cpow = Rat::one();
    for _ in 0..exp {
        cpow /= c.clone();
    }
    Some(LaurentPoly::monomial(
        &["x", "y"],
        inv_exps,
        cpow,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfam::{family, Family};
    use crate::rat::{rfrac, rint};

    fn no_bind() -> BTreeMap<String, Rat> {
        BTreeMap::new()
    }

    fn bind(k: Rat) -> BTreeMap<String, Rat> {
        let mut m = BTreeMap::new();
        m.insert("k".to_string(), k);
        m
    }

    #[test]
    fn monomial_x4() {
        let p = parse_poly("x^4", &no_bind()).unwrap();
        assert_eq!(p, LaurentPoly::monomial(&["x", "y"], vec![4, 0], rint(1)));
    }

    #[test]
    fn expansion_matches_eval() {
        let p = parse_poly("(x+1)*(y+1)*(x+y) - k*x*y", &bind(rint(2))).unwrap();
        assert_eq!(p.eval_rat(&[rint(1), rint(1)]), rint(6));
        assert_eq!(p, family(Family::P, &rint(2)));
    }

    #[test]
    fn q_family_text() {
        let p = parse_poly("y^2+(x^4+k*x^3+2*k*x^2+k*x+1)*y+x^4", &bind(rint(0))).unwrap();
        let expect = parse_poly("y^2+(x^4+1)*y+x^4", &no_bind()).unwrap();
        assert_eq!(p, expect);
        for kk in [-5i64, 3, 17] {
            let p = parse_poly(
                "y^2+(x^4+k*x^3+2*k*x^2+k*x+1)*y+x^4",
                &bind(rint(kk)),
            )
            .unwrap();
            assert_eq!(p, family(Family::Q, &rint(kk)));
        }
    }

    #[test]
    fn unbound_parameter_reported() {
        match parse_poly("x + c", &no_bind()) {
            Err(PolyError::UnboundParameter { name, pos }) => {
                assert_eq!(name, "c");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unbound parameter, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_position() {
        match parse_poly("x + * y", &no_bind()) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn laurent_exponents() {
        let p = parse_poly("x + x^-1 + y + y^-1 + k - 4", &bind(rint(4))).unwrap();
        assert_eq!(p, family(Family::R, &rint(4)));
        // negative power of a scaled monomial
        let q = parse_poly("(2*x)^-2", &no_bind()).unwrap();
        assert_eq!(
            q,
            LaurentPoly::monomial(&["x", "y"], vec![-2, 0], rfrac(1, 4))
        );
        // negative power of a sum is rejected
        assert!(parse_poly("(x+1)^-1", &no_bind()).is_err());
    }

    #[test]
    fn aliases_map_to_roles() {
        let p = parse_poly("x0 + 1/2*y0 + x2*y1", &no_bind()).unwrap();
        let q = parse_poly("x + 1/2*y + x*y", &no_bind()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn exponent_overflow() {
        assert!(matches!(
            parse_poly("x^99999999999999999999", &no_bind()),
            Err(PolyError::ExponentOverflow)
        ));
        assert!(matches!(
            parse_poly("x^65", &no_bind()),
            Err(PolyError::ExponentOverflow)
        ));
    }
}
