//! Global minimal models by the Laska-Kraus-Connell method: scale the
//! c-invariants integral, strip the largest admissible twelfth power from the
//! discriminant subject to Kraus's conditions at 2 and 3, then rebuild the
//! reduced model from (c4, c6).

use super::{IntegralCurve, LSeriesError};
use crate::ecurve::WeierstrassCurve;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kraus admissibility of an integral pair (c4, c6) with
/// 1728 | c4^3 - c6^2 already ensured by the caller.
fn kraus_conditions(c4: &BigInt, c6: &BigInt) -> bool {
    // at 3: v_3(c6) != 2
    let nine = BigInt::from(9);
    let twenty_seven = BigInt::from(27);
    if (c6 % &nine).is_zero() && !(c6 % &twenty_seven).is_zero() {
        return false;
    }
    // at 2: c6 = -1 mod 4, or (16 | c4 and c6 mod 32 in {0, 8})
    let c6m4 = c6.mod_floor(&BigInt::from(4));
    if c6m4 == BigInt::from(3) {
        return true;
    }
    let c4m16 = c4.mod_floor(&BigInt::from(16));
    let c6m32 = c6.mod_floor(&BigInt::from(32));
    c4m16.is_zero() && (c6m32.is_zero() || c6m32 == BigInt::from(8))
}

/// Reduced integral model from admissible (c4, c6).
fn curve_from_c_invariants(c4: &BigInt, c6: &BigInt) -> Result<IntegralCurve, LSeriesError> {
    // b2 = -c6 mod 12 in (-6, 6]
    let twelve = BigInt::from(12);
    let mut b2 = (-c6).mod_floor(&twelve);
    if b2 > BigInt::from(6) {
        b2 -= &twelve;
    }
    let b4 = (&b2 * &b2 - c4) / BigInt::from(24);
    let b6 = (-(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6) / BigInt::from(216);
    let a1 = b2.mod_floor(&BigInt::from(2));
    let a2 = (&b2 - &a1) / BigInt::from(4);
    let a3 = b6.mod_floor(&BigInt::from(2));
    let a6 = (&b6 - &a3) / BigInt::from(4);
    let a4 = (&b4 - &a1 * &a3) / BigInt::from(2);
    let curve = IntegralCurve { a1, a2, a3, a4, a6 };
    let (c4_chk, c6_chk) = curve.c_invariants();
    if &c4_chk != c4 || &c6_chk != c6 {
        return Err(LSeriesError::TateInconsistency(
            "model reconstruction from (c4, c6) failed".into(),
        ));
    }
    Ok(curve)
}

/// v_p of a nonzero rational's denominator.
fn den_valuation(x: &Rat, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut d = x.denom().clone();
    let mut v = 0;
    while (&d % &p).is_zero() {
        d /= &p;
        v += 1;
    }
    v
}

/// Global minimal model of a rational curve, with the scaling u applied
/// (new coordinates X = u^2 x, Y = u^3 y).
pub fn minimal_model(curve: &WeierstrassCurve) -> Result<(IntegralCurve, Rat), LSeriesError> {
    let (c4q, c6q) = curve.c_invariants();
    let discq = curve.discriminant();
    if discq.is_zero() {
        return Err(LSeriesError::Curve(crate::ecurve::CurveError::Singular));
    }
    // clear denominators: d with d^4 c4, d^6 c6, d^12 disc integral
    let mut d = BigInt::one();
    let mut den_primes: Vec<u64> = vec![];
    for src in [&c4q, &c6q, &discq] {
        let dd = src.denom().abs();
        if let Some(v) = dd.to_u128() {
            for (p, _) in super::factor_u128(v)? {
                let p = p as u64;
                if !den_primes.contains(&p) {
                    den_primes.push(p);
                }
            }
        } else {
            return Err(LSeriesError::Factorization("denominator exceeds u128".into()));
        }
    }
    for p in den_primes {
        let e4 = den_valuation(&c4q, p).div_ceil(4);
        let e6 = den_valuation(&c6q, p).div_ceil(6);
        let e12 = den_valuation(&discq, p).div_ceil(12);
        let e = e4.max(e6).max(e12);
        d *= BigInt::from(p).pow(e);
    }
    let scale4 = &d * &d * &d * &d;
    let scale6 = &scale4 * &d * &d;
    let scale12 = &scale6 * &scale6;
    let c4 = (c4q.numer() * &scale4) / c4q.denom();
    let c6 = (c6q.numer() * &scale6) / c6q.denom();
    let disc = (discq.numer() * &scale12) / discq.denom();

    // largest u with u^4 | c4, u^6 | c6, u^12 | disc and Kraus admissible
    let u_bound = if !c4.is_zero() {
        nth_root_floor(&c4.abs(), 4)
    } else if !c6.is_zero() {
        nth_root_floor(&c6.abs(), 6)
    } else {
        nth_root_floor(&disc.abs(), 12)
    };
    let u_bound = u_bound.to_u64().unwrap_or(u64::MAX).max(1);
    for u in (1..=u_bound).rev() {
        let ub = BigInt::from(u);
        let u4 = &ub * &ub * &ub * &ub;
        let u6 = &u4 * &ub * &ub;
        let u12 = &u6 * &u6;
        if !(&c4 % &u4).is_zero() || !(&c6 % &u6).is_zero() || !(&disc % &u12).is_zero() {
            continue;
        }
        let c4u = &c4 / &u4;
        let c6u = &c6 / &u6;
        if !kraus_conditions(&c4u, &c6u) {
            continue;
        }
        let model = curve_from_c_invariants(&c4u, &c6u)?;
        let scale = Rat::new(ub, d.clone());
        return Ok((model, scale));
    }
    Err(LSeriesError::Minimalization)
}

/// Floor of the n-th root of a nonnegative integer.
fn nth_root_floor(x: &BigInt, n: u32) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let bits = x.bits();
    let mut hi = BigInt::one() << (bits / n as u64 + 2);
    let mut lo = BigInt::zero();
    while &lo < &(&hi - 1) {
        let mid: BigInt = (&lo + &hi + 1) / 2;
        if mid.pow(n) <= *x {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if (&lo + 1u32).pow(n) <= *x {
        &lo + 1
    } else {
        lo
    }
}

#[cfg(test)]
mod mtests {
    use super::*;
    use crate::ecurve::{curve, CurveFamily};
    use crate::rat::rint;

    #[test]
    fn nth_root() {
        assert_eq!(nth_root_floor(&BigInt::from(81), 4), BigInt::from(3));
        assert_eq!(nth_root_floor(&BigInt::from(80), 4), BigInt::from(2));
        assert_eq!(nth_root_floor(&BigInt::from(1), 12), BigInt::from(1));
    }

    #[test]
    fn minimal_model_idempotent() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let (m1, _) = minimal_model(&e).unwrap();
        let (m2, u) = minimal_model(&m1.to_rational()).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(u, rint(1));
    }

    #[test]
    fn minimal_model_preserves_j() {
        let e = curve(CurveFamily::Ek, &rint(-4)).unwrap();
        let (m, _) = minimal_model(&e).unwrap();
        let (c4a, _) = e.c_invariants();
        let (c4b, _) = m.c_invariants();
        let ja = c4a.clone() * c4a.clone() * c4a / e.discriminant();
        let da = crate::rat::Rat::from_integer(m.discriminant());
        let c4br = crate::rat::Rat::from_integer(c4b);
        let jb = c4br.clone() * c4br.clone() * c4br / da;
        assert_eq!(ja, jb);
    }
}
