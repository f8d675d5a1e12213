//! Exact Laurent-polynomial arithmetic, the polynomial families under study,
//! a text parser and Newton-polygon temperedness/reciprocality tests.

mod newton;
mod parser;

pub use newton::{newton_faces, NewtonFace};
pub use parser::parse_poly;

use crate::rat::{rat_to_f64, rint, Rat};
use crate::unipoly::UniPoly;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound parameter `{name}` at byte {pos}")]
    UnboundParameter { name: String, pos: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("negative exponent of `{0}` where a polynomial is required")]
    NegativeExponent(String),
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("operation requires {expected} variables, polynomial has {got}")]
    WrongArity { expected: usize, got: usize },
}

/// Multivariate Laurent polynomial with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero; exponent vectors are unique and
/// all have the arity of `vars`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(vars: &[&str]) -> Self {
        LaurentPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// Single variable raised to a power.
    pub fn var(vars: &[&str], idx: usize, exp: i64) -> Self {
        let mut p = Self::zero(vars);
        let mut e = vec![0; p.vars.len()];
        e[idx] = exp;
        p.terms.insert(e, Rat::one());
        p
    }

    pub fn monomial(vars: &[&str], exps: Vec<i64>, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            assert_eq!(exps.len(), p.vars.len());
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i64]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert(&mut self, exps: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero_like(self);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero_like(self);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant_like(self, Rat::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    fn zero_like(p: &Self) -> Self {
        LaurentPoly {
            vars: p.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn constant_like(p: &Self, c: Rat) -> Self {
        let mut out = Self::zero_like(p);
        if !c.is_zero() {
            out.terms.insert(vec![0; p.vars.len()], c);
        }
        out
    }

    /// Substitute var -> var + offset. Requires nonnegative exponents in var.
    pub fn substitute_shift(&self, var: &str, offset: &Rat) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        for e in self.terms.keys() {
            if e[idx] < 0 {
                return Err(PolyError::NegativeExponent(var.to_string()));
            }
        }
        let mut out = Self::zero_like(self);
        for (e, c) in &self.terms {
            let n = e[idx] as u64;
            // binomial expansion of (var + offset)^n: coeffs[j] = C(n,j) offset^{n-j}
            let mut binom = Rat::one();
            let mut off_pow = Rat::one();
            let mut coeffs: Vec<Rat> = vec![Rat::zero(); n as usize + 1];
            for j in (0..=n).rev() {
                coeffs[j as usize] = &binom * &off_pow;
                if j > 0 {
                    // C(n, j-1) = C(n, j) * j / (n - j + 1)
                    binom = binom * rint(j as i64) / rint((n - j + 1) as i64);
                    off_pow *= offset.clone();
                }
            }
            for (j, bc) in coeffs.iter().enumerate() {
                if bc.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[idx] = j as i64;
                out.insert(e2, c * bc);
            }
        }
        Ok(out)
    }

    /// Substitute var -> 1/var (negate its exponents).
    pub fn invert_var(&self, var: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[idx] = -e2[idx];
                (e2, c.clone())
            })
            .collect();
        Ok(LaurentPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Exchange the two variables of a bivariate polynomial.
    pub fn swap_vars(&self) -> Result<Self, PolyError> {
        if self.arity() != 2 {
            return Err(PolyError::WrongArity {
                expected: 2,
                got: self.arity(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (vec![e[1], e[0]], c.clone()))
            .collect();
        Ok(LaurentPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn var_index(&self, var: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| PolyError::UnboundParameter {
                name: var.to_string(),
                pos: 0,
            })
    }

    /// Minimum exponent per variable over the support (0 for empty).
    pub fn min_exponents(&self) -> Vec<i64> {
        let n = self.vars.len();
        let mut m = vec![0i64; n];
        let mut first = true;
        for e in self.terms.keys() {
            for i in 0..n {
                if first || e[i] < m[i] {
                    m[i] = e[i];
                }
            }
            first = false;
        }
        m
    }

    pub fn max_exponents(&self) -> Vec<i64> {
        let n = self.vars.len();
        let mut m = vec![0i64; n];
        let mut first = true;
        for e in self.terms.keys() {
            for i in 0..n {
                if first || e[i] > m[i] {
                    m[i] = e[i];
                }
            }
            first = false;
        }
        m
    }

    /// Multiply by the monomial that clears all negative exponents.
    /// Returns the cleared polynomial and the clearing exponents.
    pub fn clear_denominators(&self) -> (Self, Vec<i64>) {
        let m = self.min_exponents();
        let shift: Vec<i64> = m.iter().map(|&x| if x < 0 { -x } else { 0 }).collect();
        if shift.iter().all(|&s| s == 0) {
            return (self.clone(), shift);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let e2: Vec<i64> = e.iter().zip(&shift).map(|(a, s)| a + s).collect();
                (e2, c.clone())
            })
            .collect();
        (
            LaurentPoly {
                vars: self.vars.clone(),
                terms,
            },
            shift,
        )
    }

    /// Coefficients with respect to one variable: map from its exponent to a
    /// Laurent polynomial in the remaining variable(s).
    pub fn coefficients_in(&self, var: &str) -> Result<BTreeMap<i64, LaurentPoly>, PolyError> {
        let idx = self.var_index(var)?;
        let rest_vars: Vec<&str> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.as_str())
            .collect();
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let rest: Vec<i64> = e
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .map(|(_, &x)| x)
                .collect();
            out.entry(e[idx])
                .or_insert_with(|| LaurentPoly::zero(&rest_vars))
                .insert(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Univariate view with nonnegative exponents as a dense `UniPoly`.
    pub fn to_unipoly(&self) -> Result<UniPoly, PolyError> {
        if self.arity() != 1 {
            return Err(PolyError::WrongArity {
                expected: 1,
                got: self.arity(),
            });
        }
        let mut v = vec![];
        for (e, c) in &self.terms {
            if e[0] < 0 {
                return Err(PolyError::NegativeExponent(self.vars[0].clone()));
            }
            let d = e[0] as usize;
            if v.len() <= d {
                v.resize(d + 1, Rat::zero());
            }
            v[d] = c.clone();
        }
        Ok(UniPoly::new(v))
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        let mut out = Self::zero_like(self);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.insert(e2, c * Rat::from_integer(BigInt::from(e[idx])));
        }
        Ok(out)
    }

    pub fn eval_c(&self, vals: &[Complex64]) -> Complex64 {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (i, &exp) in e.iter().enumerate() {
                t *= vals[i].powi(exp as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_rat(&self, vals: &[Rat]) -> Rat {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp >= 0 {
                    for _ in 0..exp {
                        t *= vals[i].clone();
                    }
                } else {
                    for _ in 0..(-exp) {
                        t /= vals[i].clone();
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// Reciprocality: p(1/x, 1/y, ...) * monomial == +/- p.
    pub fn is_reciprocal(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut inv = self.clone();
        for v in self.vars.clone() {
            inv = inv.invert_var(&v).expect("own variable");
        }
        let a = self.normalized_support();
        let b = inv.normalized_support();
        if a.len() != b.len() {
            return false;
        }
        // compare up to a global sign
        let (e0, c0) = a.iter().next().expect("nonzero");
        let c0b = match b.get(e0) {
            Some(c) => c.clone(),
            None => return false,
        };
        let sign = &c0b / c0;
        if sign != Rat::one() && sign != -Rat::one() {
            return false;
        }
        a.iter().all(|(e, c)| b.get(e).map_or(false, |cb| cb == &(c * &sign)))
    }

    fn normalized_support(&self) -> BTreeMap<Vec<i64>, Rat> {
        let m = self.min_exponents();
        self.terms
            .iter()
            .map(|(e, c)| {
                let e2: Vec<i64> = e.iter().zip(&m).map(|(a, b)| a - b).collect();
                (e2, c.clone())
            })
            .collect()
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // descending lexicographic exponent order for stable printing
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = vec![];
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                parts.push(format_rat(&mag));
            }
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if exp == 1 {
                    parts.push(self.vars[i].clone());
                } else {
                    parts.push(format!("{}^{}", self.vars[i], exp));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The polynomial families of the artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// (x+1)(y+1)(x+y) - kxy
    P,
    /// y^2 + (x^4 + kx^3 + 2kx^2 + kx + 1) y + x^4
    Q,
    /// x + 1/x + y + 1/y + (k-4)
    R,
    /// Q_k with x replaced by x - 1
    Qshift,
}

impl std::str::FromStr for Family {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Family::P),
            "q" => Ok(Family::Q),
            "r" => Ok(Family::R),
            "qshift" | "q_shift" | "qs" => Ok(Family::Qshift),
            other => Err(PolyError::UnknownFamily(other.to_string())),
        }
    }
}

/// Construct the family polynomial with the parameter substituted exactly.
pub fn family(name: Family, k: &Rat) -> LaurentPoly {
    let vs: &[&str] = &["x", "y"];
    let x = |e| LaurentPoly::var(vs, 0, e);
    let y = |e| LaurentPoly::var(vs, 1, e);
    let c = |r: Rat| LaurentPoly::constant(vs, r);
    match name {
        Family::P => {
            let f = x(1).add(&c(Rat::one()));
            let g = y(1).add(&c(Rat::one()));
            let h = x(1).add(&y(1));
            f.mul(&g).mul(&h).sub(&x(1).mul(&y(1)).scale(k))
        }
        Family::Q => {
            let b = x(4)
                .add(&x(3).scale(k))
                .add(&x(2).scale(&(k * rint(2))))
                .add(&x(1).scale(k))
                .add(&c(Rat::one()));
            y(2).add(&b.mul(&y(1))).add(&x(4))
        }
        Family::R => x(1)
            .add(&x(-1))
            .add(&y(1))
            .add(&y(-1))
            .add(&c(k - rint(4))),
        Family::Qshift => family(Family::Q, k)
            .substitute_shift("x", &(-Rat::one()))
            .expect("Q_k is polynomial in x"),
    }
}

/// Temperedness: all face polynomials of the Newton polygon have only roots
/// of unity as roots (decided exactly by cyclotomic factor peeling).
pub fn is_tempered(p: &LaurentPoly) -> Result<bool, PolyError> {
    let faces = newton_faces(p)?;
    for face in faces {
        let up = face.face_poly.to_unipoly()?;
        if !up.all_roots_of_unity() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rfrac, rint};
    use std::collections::BTreeMap;

    fn k(v: i64) -> Rat {
        rint(v)
    }

    #[test]
    fn family_r_at_4_drops_constant() {
        let r = family(Family::R, &k(4));
        let expect = parse_poly("x + x^-1 + y + y^-1", &BTreeMap::new()).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn family_q_at_0() {
        let q = family(Family::Q, &k(0));
        let expect = parse_poly("y^2+(x^4+1)*y+x^4", &BTreeMap::new()).unwrap();
        assert_eq!(q, expect);
    }

    #[test]
    fn family_p_at_0_expands() {
        let p = family(Family::P, &k(0));
        let expect = parse_poly("(x+1)*(y+1)*(x+y)", &BTreeMap::new()).unwrap();
        assert_eq!(p, expect);
        // evaluating (x+1)(y+1)(x+y) - 2xy at (1,1): 8 - 2 = 6
        let p2 = family(Family::P, &k(2));
        assert_eq!(p2.eval_rat(&[rint(1), rint(1)]), rint(6));
    }

    #[test]
    fn qshift_vanishes_at_one_minus_one() {
        for kk in [-7i64, -1, 0, 2, 17, 23] {
            let q = family(Family::Qshift, &k(kk));
            assert_eq!(q.eval_rat(&[rint(1), rint(-1)]), rint(0));
        }
        // rational k too
        let q = family(Family::Qshift, &rfrac(7, 3));
        assert_eq!(q.eval_rat(&[rint(1), rint(-1)]), rint(0));
    }

    #[test]
    fn shift_examples() {
        let vs: &[&str] = &["x", "y"];
        let x2 = LaurentPoly::var(vs, 0, 2);
        let shifted = x2.substitute_shift("x", &rint(-1)).unwrap();
        let expect = parse_poly("x^2-2*x+1", &BTreeMap::new()).unwrap();
        assert_eq!(shifted, expect);

        // Qshift at x = 1 equals Q_k(0, y) = y^2 + y
        let q = family(Family::Qshift, &k(5));
        let at1: Rat = q.eval_rat(&[rint(1), rint(3)]);
        assert_eq!(at1, rint(9 + 3)); // y^2 + y at y = 3

        // shifting by -1 then +1 is the identity
        let p = family(Family::Q, &k(7));
        let back = p
            .substitute_shift("x", &rint(-1))
            .unwrap()
            .substitute_shift("x", &rint(1))
            .unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn shift_of_laurent_errors() {
        let r = family(Family::R, &k(1));
        assert!(matches!(
            r.substitute_shift("x", &rint(-1)),
            Err(PolyError::NegativeExponent(_))
        ));
    }

    #[test]
    fn reciprocality_of_families() {
        for kk in [-5i64, -1, 2, 17, 20] {
            assert!(family(Family::P, &k(kk)).is_reciprocal(), "P_{kk}");
            assert!(family(Family::R, &k(kk)).is_reciprocal(), "R_{kk}");
            assert!(family(Family::Q, &k(kk)).is_reciprocal(), "Q_{kk}");
        }
        // the shifted family is not reciprocal
        assert!(!family(Family::Qshift, &k(2)).is_reciprocal());
    }

    #[test]
    fn temperedness_of_families() {
        for kk in [-1i64, 3, 17] {
            assert!(is_tempered(&family(Family::Q, &k(kk))).unwrap());
            assert!(is_tempered(&family(Family::Qshift, &k(kk))).unwrap());
        }
        for kk in [-8i64, 25] {
            assert!(is_tempered(&family(Family::R, &k(kk))).unwrap());
            assert!(is_tempered(&family(Family::P, &k(kk))).unwrap());
        }
        let not_tempered = parse_poly("x+y+2", &BTreeMap::new()).unwrap();
        assert!(!is_tempered(&not_tempered).unwrap());
    }

    #[test]
    fn tempered_invariant_under_monomials() {
        let p = family(Family::Q, &k(3));
        let m = LaurentPoly::monomial(&["x", "y"], vec![-2, 5], rint(1));
        assert_eq!(is_tempered(&p).unwrap(), is_tempered(&p.mul(&m)).unwrap());
        let q = parse_poly("x+y+2", &BTreeMap::new()).unwrap();
        assert_eq!(is_tempered(&q).unwrap(), is_tempered(&q.mul(&m)).unwrap());
    }

    #[test]
    fn display_reparses() {
        let p = family(Family::Qshift, &rfrac(-7, 2));
        let printed = format!("{p}");
        let reparsed = parse_poly(&printed, &BTreeMap::new()).unwrap();
        assert_eq!(p, reparsed);
        let r = family(Family::R, &k(-3));
        let reparsed = parse_poly(&format!("{r}"), &BTreeMap::new()).unwrap();
        assert_eq!(r, reparsed);
    }
}
