//! Elliptic curves in long Weierstrass form with exact rational
//! coefficients: the quotient-curve models of the verification, chord-tangent
//! arithmetic (exact on rational points), torsion orders, divisors with the
//! diamond operation, and period lattices with elliptic logarithms.

pub mod divisor;
pub mod periods;

pub use divisor::{diamond, divisor_of, Divisor, DivisorClass, RationalFunctionOnCurve, XYPoly};
pub use periods::Uniformization;

use crate::numeric::C;
use crate::rat::{rat_to_f64, rint, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("singular curve (discriminant zero) for this parameter")]
    Singular,
    #[error("point ({0}, {1}) does not satisfy the curve equation")]
    OffCurve(String, String),
    #[error("arithmetic-geometric mean failed to converge")]
    AgmFailed,
    #[error("elliptic logarithm reconstruction residual above tolerance for ({0}, {1})")]
    LogReconstruction(String, String),
    #[error("operation requires an affine point")]
    InfinitePoint,
    #[error(transparent)]
    Root(#[from] crate::numeric::roots::RootError),
    #[error(transparent)]
    Poly(#[from] crate::polyfam::PolyError),
}

/// Which family model to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    /// Y^2 = X^3 + (k^2-5k+8) X^2 + (-2k^2+5k+4)(4-k) X + (k^2+k)(4-k)^2
    Ek,
    /// Y^2 + (k-2) XY + k Y = X^3
    Uk,
    /// y^2 = x (x^2 + ((k-4)^2/4 - 2) x + 1)
    Fk,
}

/// Long Weierstrass model with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassCurve {
    pub a1: Rat,
    pub a2: Rat,
    pub a3: Rat,
    pub a4: Rat,
    pub a6: Rat,
    pub label: Option<(CurveFamily, Rat)>,
}

/// Point of a curve: infinity, exact rational coordinates, or numeric
/// complex coordinates (for points over quadratic extensions).
#[derive(Debug, Clone)]
pub enum CurvePoint {
    Infinity,
    Exact(Rat, Rat),
    Approx(C, C),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CurvePoint::Infinity | CurvePoint::Exact(..))
    }

    /// Complex view of the coordinates (None at infinity).
    pub fn xy(&self) -> Option<(C, C)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Exact(x, y) => Some((
                C::new(rat_to_f64(x), 0.0),
                C::new(rat_to_f64(y), 0.0),
            )),
            CurvePoint::Approx(x, y) => Some((*x, *y)),
        }
    }

    pub(crate) fn close_to(&self, other: &CurvePoint) -> bool {
        match (self, other) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => true,
            (CurvePoint::Exact(x1, y1), CurvePoint::Exact(x2, y2)) => x1 == x2 && y1 == y2,
            _ => match (self.xy(), other.xy()) {
                (Some((x1, y1)), Some((x2, y2))) => {
                    let s = 1.0 + x1.norm() + y1.norm();
                    (x1 - x2).norm() < 1e-9 * s && (y1 - y2).norm() < 1e-9 * s
                }
                _ => false,
            },
        }
    }
}

pub fn curve(kind: CurveFamily, k: &Rat) -> Result<WeierstrassCurve, CurveError> {
    let four_minus_k = rint(4) - k;
    let (a1, a2, a3, a4, a6) = match kind {
        CurveFamily::Ek => (
            Rat::zero(),
            k * k - rint(5) * k + rint(8),
            Rat::zero(),
            (rint(-2) * k * k + rint(5) * k + rint(4)) * &four_minus_k,
            (k * k + k) * &four_minus_k * &four_minus_k,
        ),
        CurveFamily::Uk => (
            k - rint(2),
            Rat::zero(),
            k.clone(),
            Rat::zero(),
            Rat::zero(),
        ),
        CurveFamily::Fk => (
            Rat::zero(),
            &four_minus_k * &four_minus_k / rint(4) - rint(2),
            Rat::zero(),
            rint(1),
            Rat::zero(),
        ),
    };
    let c = WeierstrassCurve {
        a1,
        a2,
        a3,
        a4,
        a6,
        label: Some((kind, k.clone())),
    };
    if c.discriminant().is_zero() {
        return Err(CurveError::Singular);
    }
    Ok(c)
}

impl WeierstrassCurve {
    pub fn new(a1: Rat, a2: Rat, a3: Rat, a4: Rat, a6: Rat) -> Result<Self, CurveError> {
        let c = WeierstrassCurve {
            a1,
            a2,
            a3,
            a4,
            a6,
            label: None,
        };
        if c.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(c)
    }

    pub fn b_invariants(&self) -> (Rat, Rat, Rat, Rat) {
        let b2 = &self.a1 * &self.a1 + rint(4) * &self.a2;
        let b4 = rint(2) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + rint(4) * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + rint(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    pub fn c_invariants(&self) -> (Rat, Rat) {
        let (b2, b4, b6, _) = self.b_invariants();
        let c4 = &b2 * &b2 - rint(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + rint(36) * &b2 * &b4 - rint(216) * &b6;
        (c4, c6)
    }

    pub fn discriminant(&self) -> Rat {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2) * &b8 - rint(8) * &b4 * &b4 * &b4 - rint(27) * &b6 * &b6
            + rint(9) * &b2 * &b4 * &b6
    }

    /// Defining polynomial evaluated at exact coordinates.
    pub fn equation_exact(&self, x: &Rat, y: &Rat) -> Rat {
        y * y + &self.a1 * x * y + &self.a3 * y
            - (x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6)
    }

    pub fn equation_c(&self, x: C, y: C) -> C {
        let a1 = C::new(rat_to_f64(&self.a1), 0.0);
        let a2 = C::new(rat_to_f64(&self.a2), 0.0);
        let a3 = C::new(rat_to_f64(&self.a3), 0.0);
        let a4 = C::new(rat_to_f64(&self.a4), 0.0);
        let a6 = C::new(rat_to_f64(&self.a6), 0.0);
        y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)
    }

    /// Exact rational point, validated.
    pub fn point(&self, x: Rat, y: Rat) -> Result<CurvePoint, CurveError> {
        if self.equation_exact(&x, &y).is_zero() {
            Ok(CurvePoint::Exact(x, y))
        } else {
            Err(CurveError::OffCurve(x.to_string(), y.to_string()))
        }
    }

    /// Numeric point, validated to 1e-9 relative residual.
    pub fn point_c(&self, x: C, y: C) -> Result<CurvePoint, CurveError> {
        let r = self.equation_c(x, y).norm();
        let scale = 1.0 + x.norm().powi(3) + y.norm().powi(2);
        if r <= 1e-9 * scale {
            Ok(CurvePoint::Approx(x, y))
        } else {
            Err(CurveError::OffCurve(format!("{x}"), format!("{y}")))
        }
    }

    /// The two Y-solutions above a given complex x.
    pub fn y_above(&self, x: C) -> [C; 2] {
        let a1 = C::new(rat_to_f64(&self.a1), 0.0);
        let a3 = C::new(rat_to_f64(&self.a3), 0.0);
        let rhs = {
            let a2 = C::new(rat_to_f64(&self.a2), 0.0);
            let a4 = C::new(rat_to_f64(&self.a4), 0.0);
            let a6 = C::new(rat_to_f64(&self.a6), 0.0);
            x * x * x + a2 * x * x + a4 * x + a6
        };
        crate::numeric::roots::quadratic_roots(C::new(1.0, 0.0), a1 * x + a3, -rhs)
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Exact(x, y) => CurvePoint::Exact(
                x.clone(),
                -y.clone() - &self.a1 * x - &self.a3,
            ),
            CurvePoint::Approx(x, y) => {
                let a1 = C::new(rat_to_f64(&self.a1), 0.0);
                let a3 = C::new(rat_to_f64(&self.a3), 0.0);
                CurvePoint::Approx(*x, -*y - a1 * *x - a3)
            }
        }
    }

    pub fn is_two_torsion(&self, p: &CurvePoint) -> bool {
        !p.is_infinity() && p.close_to(&self.negate(p))
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        match (p, q) {
            (CurvePoint::Infinity, _) => q.clone(),
            (_, CurvePoint::Infinity) => p.clone(),
            (CurvePoint::Exact(x1, y1), CurvePoint::Exact(x2, y2)) => {
                self.add_exact(x1, y1, x2, y2)
            }
            _ => {
                let (x1, y1) = p.xy().expect("affine");
                let (x2, y2) = q.xy().expect("affine");
                self.add_approx(x1, y1, x2, y2)
            }
        }
    }

    fn add_exact(&self, x1: &Rat, y1: &Rat, x2: &Rat, y2: &Rat) -> CurvePoint {
        let lambda;
        if x1 == x2 {
            let neg_y1 = -y1.clone() - &self.a1 * x1 - &self.a3;
            if *y2 == neg_y1 {
                return CurvePoint::Infinity;
            }
            // tangent
            let den = rint(2) * y1 + &self.a1 * x1 + &self.a3;
            lambda = (rint(3) * x1 * x1 + rint(2) * &self.a2 * x1 + &self.a4
                - &self.a1 * y1)
                / den;
        } else {
            lambda = (y2 - y1) / (x2 - x1);
        }
        let nu = y1 - &lambda * x1;
        let x3 = &lambda * &lambda + &self.a1 * &lambda - &self.a2 - x1 - x2;
        let y3 = -(&lambda + &self.a1) * &x3 - &nu - &self.a3;
        CurvePoint::Exact(x3, y3)
    }

    fn add_approx(&self, x1: C, y1: C, x2: C, y2: C) -> CurvePoint {
        let a1 = C::new(rat_to_f64(&self.a1), 0.0);
        let a2 = C::new(rat_to_f64(&self.a2), 0.0);
        let a3 = C::new(rat_to_f64(&self.a3), 0.0);
        let a4 = C::new(rat_to_f64(&self.a4), 0.0);
        let scale = 1.0 + x1.norm() + x2.norm() + y1.norm() + y2.norm();
        let lambda;
        if (x1 - x2).norm() < 1e-11 * scale {
            let neg_y1 = -y1 - a1 * x1 - a3;
            if (y2 - neg_y1).norm() < 1e-9 * scale {
                return CurvePoint::Infinity;
            }
            let den = 2.0 * y1 + a1 * x1 + a3;
            lambda = (3.0 * x1 * x1 + 2.0 * a2 * x1 + a4 - a1 * y1) / den;
        } else {
            lambda = (y2 - y1) / (x2 - x1);
        }
        let nu = y1 - lambda * x1;
        let x3 = lambda * lambda + a1 * lambda - a2 - x1 - x2;
        let y3 = -(lambda + a1) * x3 - nu - a3;
        CurvePoint::Approx(x3, y3)
    }

    /// n P by double-and-add (exact on exact points).
    pub fn mul(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        if n == 0 || p.is_infinity() {
            return CurvePoint::Infinity;
        }
        let (mut n, base) = if n < 0 {
            (-n as u64, self.negate(p))
        } else {
            (n as u64, p.clone())
        };
        let mut acc = CurvePoint::Infinity;
        let mut pw = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &pw);
            }
            n >>= 1;
            if n > 0 {
                pw = self.add(&pw, &pw);
            }
        }
        acc
    }

    /// Least n <= bound with nP = O, or None if the order exceeds the bound.
    pub fn torsion_order(&self, p: &CurvePoint, bound: u32) -> Option<u32> {
        let mut acc = CurvePoint::Infinity;
        for n in 1..=bound {
            acc = self.add(&acc, p);
            if acc.is_infinity() {
                return Some(n);
            }
        }
        None
    }

    /// Canonical torsion section S = (4-k, 16-4k) on the E_k model.
    pub fn four_torsion_s(&self) -> Result<CurvePoint, CurveError> {
        let (fam, k) = self.label.clone().ok_or(CurveError::InfinitePoint)?;
        assert!(fam == CurveFamily::Ek);
        let x = rint(4) - &k;
        let y = rint(16) - rint(4) * &k;
        self.point(x, y)
    }

    /// Canonical torsion section P = (k, k) on the U_k model.
    pub fn six_torsion_p(&self) -> Result<CurvePoint, CurveError> {
        let (fam, k) = self.label.clone().ok_or(CurveError::InfinitePoint)?;
        assert!(fam == CurveFamily::Uk);
        self.point(k.clone(), k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rfrac, rint};

    #[test]
    fn ek_model_at_minus_one() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        assert_eq!(e.a2, rint(14));
        assert_eq!(e.a4, rint(-15));
        assert!(e.a6.is_zero());
    }

    #[test]
    fn fk_singular_at_four() {
        assert!(matches!(
            curve(CurveFamily::Fk, &rint(4)),
            Err(CurveError::Singular)
        ));
    }

    #[test]
    fn uk_singular_parameters() {
        for kk in [-1i64, 0, 8] {
            assert!(curve(CurveFamily::Uk, &rint(kk)).is_err(), "k = {kk}");
        }
        assert!(curve(CurveFamily::Uk, &rint(-2)).is_ok());
    }

    #[test]
    fn uk_contains_p() {
        for kk in [-2i64, 7, 17, 20] {
            let u = curve(CurveFamily::Uk, &rint(kk)).unwrap();
            let p = u.six_torsion_p().unwrap();
            assert!(!p.is_infinity());
        }
    }

    #[test]
    fn six_torsion_of_p() {
        for kk in [-2i64, 7, 17, 20] {
            let u = curve(CurveFamily::Uk, &rint(kk)).unwrap();
            let p = u.six_torsion_p().unwrap();
            assert_eq!(u.torsion_order(&p, 12), Some(6), "k = {kk}");
        }
    }

    #[test]
    fn four_torsion_of_s() {
        for kk in [-1i64, -5, -12, 20, 100] {
            let e = curve(CurveFamily::Ek, &rint(kk)).unwrap();
            let s = e.four_torsion_s().unwrap();
            assert_eq!(e.torsion_order(&s, 8), Some(4), "k = {kk}");
            // 2S is the rational 2-torsion point
            let s2 = e.mul(2, &s);
            assert!(e.is_two_torsion(&s2));
        }
        // S = (5, 20) at k = -1 has 4S = O
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let s = e.point(rint(5), rint(20)).unwrap();
        assert!(e.mul(4, &s).is_infinity());
        assert_eq!(e.torsion_order(&CurvePoint::Infinity, 5), Some(1));
    }

    #[test]
    fn group_law_basics() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let s = e.point(rint(5), rint(20)).unwrap();
        let sum = e.add(&s, &e.negate(&s));
        assert!(sum.is_infinity());
    }

    #[test]
    fn group_law_assoc_comm_exact() {
        let e = curve(CurveFamily::Ek, &rfrac(-7, 2)).unwrap();
        let s = e.four_torsion_s().unwrap();
        // random-ish exact points: multiples of S plus each other
        let a = e.mul(1, &s);
        let b = e.mul(2, &s);
        let c = e.mul(3, &s);
        let ab_c = e.add(&e.add(&a, &b), &c);
        let a_bc = e.add(&a, &e.add(&b, &c));
        assert!(ab_c.close_to(&a_bc));
        assert!(e.add(&a, &b).close_to(&e.add(&b, &a)));
    }

    #[test]
    fn off_curve_rejected() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        assert!(e.point(rint(2), rint(2)).is_err());
    }
}
