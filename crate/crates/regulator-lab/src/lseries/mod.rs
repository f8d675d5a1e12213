//! L-series of elliptic curves over Q: global minimal models, conductors by
//! Tate's algorithm, coefficients by point counting, and the special values
//! L(E, 2) and L'(E, 0) through the completed functional equation.

pub mod minimal;
pub mod tate;

pub use minimal::minimal_model;
pub use tate::{conductor, local_data, LocalData, ReductionType};

use crate::ecurve::{CurveError, WeierstrassCurve};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LSeriesError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("no admissible (c4, c6) pair found during minimalization")]
    Minimalization,
    #[error("Tate's algorithm reached an inconsistent state: {0}")]
    TateInconsistency(String),
    #[error("failed to factor {0}")]
    Factorization(String),
    #[error("root number detection was inconclusive (discrepancies {0:e} vs {1:e})")]
    RootNumber(f64, f64),
    #[error("coefficient bound {0} too small for the requested tolerance")]
    InsufficientTerms(usize),
}

/// Integral Weierstrass model (used by minimalization and Tate's algorithm).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl IntegralCurve {
    pub fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let b2 = &self.a1 * &self.a1 + 4 * &self.a2;
        let b4 = 2 * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + 4 * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    pub fn c_invariants(&self) -> (BigInt, BigInt) {
        let (b2, b4, b6, _) = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        (c4, c6)
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2) * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Coordinate change x = x' + r, y = y' + s x' + t.
    pub fn transform(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> IntegralCurve {
        let a1 = &self.a1 + 2 * s;
        let a2 = &self.a2 - s * &self.a1 + 3 * r - s * s;
        let a3 = &self.a3 + r * &self.a1 + 2 * t;
        let a4 = &self.a4 - s * &self.a3 + 2 * r * &self.a2 - (t + r * s) * &self.a1
            + 3 * r * r
            - 2 * s * t;
        let a6 = &self.a6 + r * &self.a4 + r * r * &self.a2 + r * r * r
            - t * &self.a3
            - t * t
            - r * t * &self.a1;
        IntegralCurve { a1, a2, a3, a4, a6 }
    }

    /// Scale by u = p (valid when all a_i are divisible by p^i).
    pub fn scale_down(&self, p: &BigInt) -> IntegralCurve {
        IntegralCurve {
            a1: &self.a1 / p,
            a2: &self.a2 / (p * p),
            a3: &self.a3 / (p * p * p),
            a4: &self.a4 / (p * p * p * p),
            a6: &self.a6 / (p * p * p * p * p * p),
        }
    }

    pub fn to_rational(&self) -> WeierstrassCurve {
        let r = |b: &BigInt| crate::rat::Rat::from_integer(b.clone());
        WeierstrassCurve {
            a1: r(&self.a1),
            a2: r(&self.a2),
            a3: r(&self.a3),
            a4: r(&self.a4),
            a6: r(&self.a6),
            label: None,
        }
    }
}

/// L-series data: minimal model, conductor, root number and coefficients.
#[derive(Debug, Clone)]
pub struct LSeriesData {
    pub curve_min: IntegralCurve,
    pub conductor: u64,
    pub root_number: i32,
    /// a_n for 1 <= n <= n_max (index 0 unused).
    pub an: Vec<i64>,
    pub locals: Vec<LocalData>,
}

/// Build the full L-series data for a rational curve.
pub fn build(curve: &WeierstrassCurve, n_max: usize) -> Result<LSeriesData, LSeriesError> {
    let (curve_min, _u) = minimal_model(curve)?;
    let (n, locals) = conductor(&curve_min)?;
    let conductor_u64 = n
        .to_u64()
        .ok_or_else(|| LSeriesError::Factorization("conductor exceeds u64".into()))?;
    let an = coefficients(&curve_min, &locals, n_max)?;
    let root_number = detect_root_number(conductor_u64, &an)?;
    Ok(LSeriesData {
        curve_min,
        conductor: conductor_u64,
        root_number,
        an,
        locals,
    })
}

/// a_p at a good prime by quadratic-character point counting:
/// a_p = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6). At p = 2 counts directly.
pub fn ap_good(curve: &IntegralCurve, p: u64) -> i64 {
    if p == 2 {
        // direct enumeration over F_2 x F_2
        let m = |b: &BigInt| (b % 2i64 + 2) % 2;
        let (a1, a2, a3, a4, a6) = (
            m(&curve.a1).to_i64().unwrap(),
            m(&curve.a2).to_i64().unwrap(),
            m(&curve.a3).to_i64().unwrap(),
            m(&curve.a4).to_i64().unwrap(),
            m(&curve.a6).to_i64().unwrap(),
        );
        let mut count = 1i64; // infinity
        for x in 0..2i64 {
            for y in 0..2i64 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs) % 2 == 0 {
                    count += 1;
                }
            }
        }
        return 2 + 1 - count;
    }
    let (b2, b4, b6, _) = curve.b_invariants();
    let pm = BigInt::from(p);
    let red = |b: &BigInt| -> u64 {
        let r = ((b % &pm) + &pm) % &pm;
        r.to_u64().unwrap()
    };
    let (b2, b4, b6) = (red(&b2), red(&b4), red(&b6));
    // quadratic residue table
    let mut is_square = vec![false; p as usize];
    let mut y = 0u64;
    let mut y2 = 0u64;
    while y <= p / 2 {
        is_square[y2 as usize] = true;
        // (y+1)^2 = y^2 + 2y + 1 mod p
        y2 = (y2 + 2 * y + 1) % p;
        y += 1;
    }
    let chi = |v: u64| -> i64 {
        if v == 0 {
            0
        } else if is_square[v as usize] {
            1
        } else {
            -1
        }
    };
    let mut sum = 0i64;
    for x in 0..p {
        // f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 mod p, via u128 products
        let x = x as u128;
        let b2l = b2 as u128;
        let b4l = b4 as u128;
        let b6l = b6 as u128;
        let pl = p as u128;
        let f = (4 * x % pl * x % pl * x % pl + b2l * x % pl * x % pl + 2 * b4l * x % pl + b6l)
            % pl;
        sum += chi(f as u64);
    }
    -sum
}

/// a_n for 1..=n_max from point counts at good primes, reduction types at
/// bad primes, and the Hecke recursions.
pub fn coefficients(
    curve_min: &IntegralCurve,
    locals: &[LocalData],
    n_max: usize,
) -> Result<Vec<i64>, LSeriesError> {
    let mut an = vec![0i64; n_max + 1];
    if n_max >= 1 {
        an[1] = 1;
    }
    // smallest prime factor sieve
    let mut spf = vec![0usize; n_max + 1];
    let mut primes = vec![];
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i;
            primes.push(i);
        }
        for &p in &primes {
            if p > spf[i] || i * p > n_max {
                break;
            }
            spf[i * p] = p;
        }
    }
    for &p in &primes {
        let pb = BigInt::from(p as u64);
        let bad = locals.iter().find(|l| l.p == pb);
        let ap = match bad {
            Some(l) => match l.reduction {
                ReductionType::SplitMultiplicative => 1,
                ReductionType::NonsplitMultiplicative => -1,
                ReductionType::Additive => 0,
                ReductionType::Good => ap_good(curve_min, p as u64),
            },
            None => ap_good(curve_min, p as u64),
        };
        // prime powers
        let mut pk = p;
        let mut prev2 = 1i64; // a_{p^0}
        let mut prev = ap; // a_{p^1}
        if pk <= n_max {
            an[pk] = ap;
        }
        while pk <= n_max / p {
            pk *= p;
            let next = if bad.is_some() {
                prev * ap
            } else {
                prev * ap - (p as i64) * prev2
            };
            an[pk] = next;
            prev2 = prev;
            prev = next;
        }
    }
    // multiplicativity
    for n in 2..=n_max {
        let p = spf[n];
        let mut pe = 1usize;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            pe *= p;
        }
        if m > 1 {
            an[n] = an[pe] * an[m];
        }
    }
    Ok(an)
}

/// Exponential integral E1(x) for x > 0.
pub fn exp_int_e1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x < 1.0 {
        // series: E1 = -gamma - ln x + sum (-1)^{k+1} x^k / (k k!)
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..=40 {
            term *= -x / k as f64;
            sum -= term / k as f64;
            if term.abs() < 1e-19 {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // continued fraction, modified Lentz
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=200 {
            let a = -(i as f64) * (i as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Lambda(2) via the two-term incomplete-Gamma series; returns the value and
/// a truncation tail bound.
fn lambda_2(conductor: u64, eps: i32, an: &[i64]) -> (f64, f64) {
    let sqrt_n = (conductor as f64).sqrt();
    let mut acc = 0.0;
    let mut last = 0.0f64;
    for n in 1..an.len() {
        let c = std::f64::consts::TAU * n as f64 / sqrt_n;
        if c > 700.0 {
            break;
        }
        let t1 = (-c).exp() * (1.0 + c) / (c * c);
        let t2 = exp_int_e1(c);
        last = t1 + t2;
        acc += an[n] as f64 * (t1 + eps as f64 * t2);
    }
    // coarse geometric tail bound from the final retained term
    let tail = last.abs() * an.len() as f64 * 2.0
        * (-std::f64::consts::TAU / sqrt_n).exp()
        / (1.0 - (-std::f64::consts::TAU / sqrt_n).exp());
    (acc, tail)
}

/// Lambda(1; A) with a movable cutoff, used only for root-number detection.
fn lambda_1_cutoff(conductor: u64, eps: i32, an: &[i64], a: f64) -> f64 {
    let sqrt_n = (conductor as f64).sqrt();
    let mut acc = 0.0;
    for n in 1..an.len() {
        let c = std::f64::consts::TAU * n as f64 / sqrt_n;
        if c * a.min(1.0 / a) > 700.0 {
            break;
        }
        acc += an[n] as f64 * ((-c * a).exp() + eps as f64 * (-c / a).exp()) / c;
    }
    acc
}

/// Functional-equation self-consistency: Lambda(1; A) is independent of the
/// cutoff A only for the correct sign.
pub fn detect_root_number(conductor: u64, an: &[i64]) -> Result<i32, LSeriesError> {
    let probe = |eps: i32| -> f64 {
        let v1 = lambda_1_cutoff(conductor, eps, an, 1.17);
        let v2 = lambda_1_cutoff(conductor, eps, an, 0.83);
        (v1 - v2).abs()
    };
    let d_plus = probe(1);
    let d_minus = probe(-1);
    if d_plus < d_minus * 1e-3 {
        Ok(1)
    } else if d_minus < d_plus * 1e-3 {
        Ok(-1)
    } else {
        Err(LSeriesError::RootNumber(d_plus, d_minus))
    }
}

/// L(E, 2) with its truncation tail bound: L(2) = Lambda(2) (2 pi)^2 / N.
pub fn l_at_2(data: &LSeriesData) -> Result<(f64, f64), LSeriesError> {
    let (lam, tail) = lambda_2(data.conductor, data.root_number, &data.an);
    let factor = std::f64::consts::TAU.powi(2) / data.conductor as f64;
    Ok((lam * factor, tail * factor))
}

/// L'(E, 0) = eps * N * L(E, 2) / (4 pi^2).
pub fn l_prime_at_0(data: &LSeriesData) -> Result<f64, LSeriesError> {
    let (l2, _) = l_at_2(data)?;
    Ok(data.root_number as f64 * data.conductor as f64 * l2
        / (4.0 * std::f64::consts::PI * std::f64::consts::PI))
}

/// Trial division + Pollard-Brent factorization for u128-sized integers.
pub fn factor_u128(n: u128) -> Result<Vec<(u128, u32)>, LSeriesError> {
    let mut n = n;
    let mut out: Vec<(u128, u32)> = vec![];
    let mut push = |p: u128, out: &mut Vec<(u128, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in [2u128, 3, 5] {
        while n % p == 0 {
            n /= p;
            push(p, &mut out);
        }
    }
    let mut d = 7u128;
    let increments = [4u128, 2, 4, 2, 4, 6, 2, 6];
    let mut idx = 0;
    while d * d <= n && d < 1_000_000 {
        while n % d == 0 {
            n /= d;
            push(d, &mut out);
        }
        d += increments[idx];
        idx = (idx + 1) % increments.len();
    }
    // remaining cofactor: prime or handled by Pollard-Brent
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_brent(m).ok_or_else(|| LSeriesError::Factorization(m.to_string()))?;
        stack.push(f);
        stack.push(m / f);
    }
    out.sort();
    Ok(out)
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    // m < 2^64 in all our uses after trial division? Not guaranteed; use
    // 128-bit splitting for safety.
    if let (Some(_), true) = (a.checked_mul(b), m < (1 << 64)) {
        return a.wrapping_mul(b) % m;
    }
    let mut result = 0u128;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            result = (result + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    result
}

fn powmod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u128) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c = 1u128;
    loop {
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        let f = |v: u128| (mulmod(v, v, n) + c) % n;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u128(diff, n);
            count += 1;
            if count > 10_000_000 {
                break;
            }
        }
        if d != n && d != 1 {
            return Some(d);
        }
        c += 1;
        if c > 40 {
            return None;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Bad primes of an integral (minimal) model.
pub fn bad_primes(curve_min: &IntegralCurve) -> Result<Vec<BigInt>, LSeriesError> {
    let disc = curve_min.discriminant();
    if disc.is_zero() {
        return Err(LSeriesError::Curve(CurveError::Singular));
    }
    let d = disc.abs();
    let d128 = d
        .to_u128()
        .ok_or_else(|| LSeriesError::Factorization("discriminant exceeds u128".into()))?;
    Ok(factor_u128(d128)?
        .into_iter()
        .map(|(p, _)| BigInt::from(p))
        .collect())
}

#[cfg(test)]
mod tests;
