//! Exact rational scalars shared across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number; carrier of the family parameter `k` and of every
/// symbolic coefficient in the crate.
pub type Rat = BigRational;

/// Integer as an exact rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational.
pub fn rfrac(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convert to f64, robust against numerators/denominators outside f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer();
    let d = r.denom();
    let nf = n.to_f64();
    let df = d.to_f64();
    if let (Some(nf), Some(df)) = (nf, df) {
        if nf.is_finite() && df.is_finite() && df != 0.0 {
            return nf / df;
        }
    }
    // Shift both down so the leading ~900 bits survive the conversion.
    let bits = n.bits().max(d.bits());
    let shift = bits.saturating_sub(900);
    let nf = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let df = (d >> shift).to_f64().unwrap_or(f64::NAN);
    nf / df
}

/// Parse `digits`, `-digits` or `digits/digits` (optionally signed).
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    let parse_int = |x: &str| -> Result<BigInt, String> {
        x.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("invalid integer {x:?}: {e}"))
    };
    if let Some((a, b)) = t.split_once('/') {
        let num = parse_int(a)?;
        let den = parse_int(b)?;
        if den.is_zero() {
            return Err(format!("zero denominator in {t:?}"));
        }
        Ok(Rat::new(num, den))
    } else {
        Ok(Rat::from_integer(parse_int(t)?))
    }
}

/// Nearest integer if `x` lies within `tol` of one.
pub fn near_integer(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= tol && r.abs() < 9e15 {
        Some(r as i64)
    } else {
        None
    }
}

/// True if the rational is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().abs() == BigInt::from(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_roundtrip() {
        assert_eq!(parse_rat("3").unwrap(), rint(3));
        assert_eq!(parse_rat("-5/4").unwrap(), rfrac(-5, 4));
        assert_eq!(parse_rat(" 6/8 ").unwrap(), rfrac(3, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn big_to_f64() {
        let huge = Rat::new(BigInt::from(10).pow(400u32), BigInt::from(10).pow(398u32));
        assert!((rat_to_f64(&huge) - 100.0).abs() < 1e-9);
        assert_eq!(rat_to_f64(&rint(0)), 0.0);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(near_integer(4.0000004, 1e-6), Some(4));
        assert_eq!(near_integer(4.001, 1e-6), None);
    }
}
