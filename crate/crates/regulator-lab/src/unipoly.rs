//! Exact univariate polynomial arithmetic over the rationals.
//!
//! Supports the exact subroutines the rest of the crate leans on: Euclidean
//! division and gcd, Yun squarefree decomposition, cyclotomic polynomials and
//! the roots-of-unity test behind temperedness, and rational-root recognition
//! from numeric approximations.

use crate::rat::{rat_to_f64, Rat};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial, coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl std::fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})t^{i}")?;
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    /// c * t^n
    pub fn monomial(n: usize, c: Rat) -> Self {
        let mut v = vec![Rat::zero(); n + 1];
        v[n] = c;
        UniPoly::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| crate::rat::rint(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - other.coeff(i));
        }
        UniPoly::new(v)
    }

    pub fn neg(&self) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        UniPoly::new(v)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division over the field of rationals.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.coeffs.len() - 1;
        let lead = div.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), UniPoly::new(rem));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &lead;
            quot[i - dd] = q.clone();
            for (j, b) in div.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let delta = &q * b;
                rem[idx] -= delta;
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Exact quotient; panics if the division is inexact.
    pub fn div_exact(&self, div: &Self) -> Self {
        let (q, r) = self.div_rem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Quotient only when the remainder vanishes.
    pub fn try_div(&self, div: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(div);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = Rat::one() / self.leading();
        self.scale(&inv)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
            .collect();
        UniPoly::new(v)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_c(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    /// Reversed coefficients: t^deg * p(1/t).
    pub fn reverse(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        UniPoly::new(v)
    }

    /// Number of trailing zero coefficients (valuation at t = 0).
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide out t^valuation.
    pub fn strip_monomial(&self) -> Self {
        let v = self.trailing_zeros();
        UniPoly::new(self.coeffs[v..].to_vec())
    }

    /// Primitive integer coefficient vector (content and denominators removed,
    /// positive leading coefficient). Empty for the zero polynomial.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().map_or(false, |c| c.is_negative()) {
            content = -content;
        }
        for c in &mut ints {
            *c /= &content;
        }
        ints
    }

    /// Yun's algorithm: returns pairwise-coprime monic squarefree factors with
    /// their multiplicities, so that self = lc * prod f_i^{m_i}.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        if self.degree().map_or(true, |d| d == 0) {
            return vec![];
        }
        let f = self.monic();
        let fp = f.derivative();
        let g = f.gcd(&fp);
        if g.is_constant() {
            return vec![(f, 1)];
        }
        let mut out = vec![];
        let mut b = f.div_exact(&g);
        let c = fp.div_exact(&g);
        let mut d = c.sub(&b.derivative());
        let mut i = 1usize;
        while b.degree().map_or(false, |deg| deg > 0) {
            let a = b.gcd(&d);
            if a.degree().map_or(false, |deg| deg > 0) {
                out.push((a.monic(), i));
            }
            b = b.div_exact(&a);
            let c_next = d.div_exact(&a);
            d = c_next.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Squarefree part (radical) of the polynomial.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().map_or(true, |d| d == 0) {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            self.monic()
        } else {
            self.div_exact(&g).monic()
        }
    }

    /// Exact test: after stripping a monomial factor, are all roots of the
    /// polynomial roots of unity?  Decided by peeling cyclotomic factors.
    pub fn all_roots_of_unity(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let stripped = self.strip_monomial();
        let ints = stripped.primitive_integer();
        // A product of cyclotomics is monic with unit constant term.
        if ints.first().map_or(true, |c| c.abs() != BigInt::one()) {
            return false;
        }
        if ints.last().map_or(true, |c| c.abs() != BigInt::one()) {
            return false;
        }
        let mut f = UniPoly::new(ints.iter().map(|c| Rat::from_integer(c.clone())).collect()).monic();
        let mut d = 1u64;
        while f.degree().map_or(false, |deg| deg > 0) {
            let deg = f.deg() as u64;
            // phi(d) >= sqrt(d/2), so cyclotomic factors of degree <= deg have d <= 2 deg^2.
            if d > 2 * deg * deg + 1 {
                return false;
            }
            if euler_phi(d) <= deg {
                let phi = cyclotomic(d);
                let mut divided = false;
                while let Some(q) = f.try_div(&phi) {
                    f = q;
                    divided = true;
                    if f.is_constant() {
                        break;
                    }
                }
                if divided {
                    // Re-scan small orders: remaining factors may have lower d.
                    d = 1;
                    continue;
                }
            }
            d += 1;
        }
        true
    }

    /// Recognize an exact rational root near a numeric approximation via
    /// continued fractions; verifies exactly before accepting.
    pub fn rational_root_near(&self, approx: f64, max_den: u64) -> Option<Rat> {
        if !approx.is_finite() {
            return None;
        }
        for cand in continued_fraction_candidates(approx, max_den) {
            if self.eval_rat(&cand).is_zero() {
                return Some(cand);
            }
        }
        None
    }
}

/// Euler totient by trial factorisation (small arguments only).
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// n-th cyclotomic polynomial: (t^n - 1) / prod_{d|n, d<n} Phi_d.
pub fn cyclotomic(n: u64) -> UniPoly {
    let mut num = UniPoly::monomial(n as usize, Rat::one());
    num = num.sub(&UniPoly::one());
    if n == 1 {
        return num;
    }
    let mut den = UniPoly::one();
    for d in 1..n {
        if n % d == 0 {
            den = den.mul(&cyclotomic(d));
        }
    }
    num.div_exact(&den)
}

/// Convergents of the continued fraction of x with bounded denominator.
fn continued_fraction_candidates(x: f64, max_den: u64) -> Vec<Rat> {
    let mut out = vec![];
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(x.round() as i64), BigInt::one());
    out.push(Rat::new(p1.clone(), q1.clone()));
    let mut frac = x - x.round();
    for _ in 0..24 {
        if frac.abs() < 1e-13 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.round();
        if !a.is_finite() || a.abs() > 9e15 {
            break;
        }
        let ab = BigInt::from(a as i64);
        let p2 = &ab * &p1 + &p0;
        let q2 = &ab * &q1 + &q0;
        if q2.abs() > BigInt::from(max_den) {
            break;
        }
        out.push(Rat::new(p2.clone(), q2.clone()));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = inv - a;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rfrac, rint};

    fn p(v: &[i64]) -> UniPoly {
        UniPoly::from_i64(v)
    }

    #[test]
    fn div_rem_exact() {
        // (t^2 - 1) = (t - 1)(t + 1)
        let f = p(&[-1, 0, 1]);
        let g = p(&[-1, 1]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, 1]));
    }

    #[test]
    fn gcd_monic() {
        let f = p(&[-1, 0, 1]); // (t-1)(t+1)
        let g = p(&[1, 2, 1]); // (t+1)^2
        assert_eq!(f.gcd(&g), p(&[1, 1]));
    }

    #[test]
    fn squarefree_decomposition_multiplicities() {
        // (t-1)^1 (t+2)^3
        let f = p(&[-1, 1]).mul(&p(&[2, 1])).mul(&p(&[2, 1])).mul(&p(&[2, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert!(dec.contains(&(p(&[-1, 1]), 1)));
        assert!(dec.contains(&(p(&[2, 1]), 3)));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn roots_of_unity_test() {
        // (t^2+t+1)(t+1) : all roots of unity
        assert!(p(&[1, 2, 2, 1]).all_roots_of_unity());
        // t + 2 : root -2
        assert!(!p(&[2, 1]).all_roots_of_unity());
        // 2t + 2 : content removal leaves t + 1
        assert!(p(&[2, 2]).all_roots_of_unity());
        // t^2 - t - 1 : golden ratio roots
        assert!(!p(&[-1, -1, 1]).all_roots_of_unity());
        // monomial times cyclotomic
        assert!(p(&[0, 0, 1, 1]).all_roots_of_unity());
        // (t+1)^2 with multiplicity
        assert!(p(&[1, 2, 1]).all_roots_of_unity());
    }

    #[test]
    fn rational_root_recognition() {
        // (t - 3/4)(t^2 + 1)
        let f = UniPoly::new(vec![rfrac(-3, 4), rint(1), rfrac(-3, 4), rint(1)]);
        let r = f.rational_root_near(0.7500000001, 1_000_000).unwrap();
        assert_eq!(r, rfrac(3, 4));
        assert!(f.rational_root_near(0.811, 10).is_none());
    }
}
