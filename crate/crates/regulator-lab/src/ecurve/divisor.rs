//! Divisors of rational functions on a Weierstrass curve, the diamond
//! operation, and divisor classes in the quotient by (P) + (-P) ~ 0 (with
//! 2-torsion and O dropped, as the elliptic dilogarithm kills them).
//!
//! Zero orders are read off an exact norm resolvent: a function A(X) + B(X) Y
//! has norm A^2 - AB(a1 X + a3) - B^2 (X^3 + a2 X^2 + a4 X + a6) in Q[X];
//! squarefree decomposition gives the multiplicities and an exact/numeric
//! root split resolves the Y-choice.

use super::periods::Uniformization;
use super::{CurveError, CurvePoint, WeierstrassCurve};
use crate::numeric::{cr, C};
use crate::rat::{rat_to_f64, rint, Rat};
use crate::unipoly::UniPoly;
use num_traits::{Signed, Zero};

/// Polynomial on the curve, reduced modulo the curve equation to the form
/// A(X) + B(X) Y.
#[derive(Debug, Clone)]
pub struct XYPoly {
    pub a: UniPoly,
    pub b: UniPoly,
}

impl XYPoly {
    pub fn new(a: UniPoly, b: UniPoly) -> Self {
        XYPoly { a, b }
    }

    pub fn constant(c: Rat) -> Self {
        XYPoly {
            a: UniPoly::constant(c),
            b: UniPoly::zero(),
        }
    }

    pub fn x_poly(a: UniPoly) -> Self {
        XYPoly {
            a,
            b: UniPoly::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn eval(&self, x: C, y: C) -> C {
        self.a.eval_c(x) + self.b.eval_c(x) * y
    }

    /// Product, reduced via Y^2 = X^3 + a2 X^2 + a4 X + a6 - a1 XY - a3 Y.
    pub fn mul(&self, other: &XYPoly, curve: &WeierstrassCurve) -> XYPoly {
        let rhs = rhs_cubic(curve);
        let a1x_a3 = UniPoly::new(vec![curve.a3.clone(), curve.a1.clone()]);
        // (a1 + b1 Y)(a2 + b2 Y) = a1 a2 + (a1 b2 + a2 b1) Y + b1 b2 Y^2
        let aa = self.a.mul(&other.a);
        let ab = self.a.mul(&other.b).add(&other.a.mul(&self.b));
        let bb = self.b.mul(&other.b);
        // Y^2 = rhs - (a1 X + a3) Y
        XYPoly {
            a: aa.add(&bb.mul(&rhs)),
            b: ab.sub(&bb.mul(&a1x_a3)),
        }
    }
}

fn rhs_cubic(curve: &WeierstrassCurve) -> UniPoly {
    UniPoly::new(vec![
        curve.a6.clone(),
        curve.a4.clone(),
        curve.a2.clone(),
        rint(1),
    ])
}

/// Rational function on the curve: numerator / denominator, both reduced.
#[derive(Debug, Clone)]
pub struct RationalFunctionOnCurve {
    pub num: XYPoly,
    pub den: XYPoly,
}

impl RationalFunctionOnCurve {
    pub fn new(num: XYPoly, den: XYPoly) -> Result<Self, CurveError> {
        if den.is_zero() {
            return Err(CurveError::InfinitePoint);
        }
        Ok(RationalFunctionOnCurve { num, den })
    }

    pub fn eval(&self, x: C, y: C) -> C {
        self.num.eval(x, y) / self.den.eval(x, y)
    }
}

/// Formal integer combination of curve points.
#[derive(Debug, Clone, Default)]
pub struct Divisor {
    pub entries: Vec<(CurvePoint, i64)>,
}

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn push(&mut self, p: CurvePoint, m: i64) {
        if m == 0 {
            return;
        }
        for (q, n) in &mut self.entries {
            if q.close_to(&p) {
                *n += m;
                return;
            }
        }
        self.entries.push((p, m));
    }

    pub fn extend_scaled(&mut self, other: &Divisor, c: i64) {
        for (p, m) in &other.entries {
            self.push(p.clone(), m * c);
        }
    }

    pub fn neg(&self) -> Divisor {
        let mut d = Divisor::default();
        d.extend_scaled(self, -1);
        d
    }

    pub fn cleanup(&mut self) {
        self.entries.retain(|(_, m)| *m != 0);
    }
}

/// Zeros minus poles of f on the curve, with multiplicity, including infinity.
pub fn divisor_of(
    f: &RationalFunctionOnCurve,
    curve: &WeierstrassCurve,
) -> Result<Divisor, CurveError> {
    if f.num.is_zero() {
        return Err(CurveError::InfinitePoint);
    }
    let mut d = poly_divisor(&f.num, curve)?;
    let dd = poly_divisor(&f.den, curve)?;
    d.extend_scaled(&dd, -1);
    d.cleanup();
    debug_assert_eq!(d.degree(), 0, "principal divisors have degree 0");
    Ok(d)
}

/// Divisor of the polynomial function A + BY on the curve.
fn poly_divisor(g: &XYPoly, curve: &WeierstrassCurve) -> Result<Divisor, CurveError> {
    let mut out = Divisor::default();
    if g.b.is_zero() {
        // pure function of X
        x_only_divisor(&g.a, curve, 1, &mut out)?;
        return Ok(out);
    }
    let gcd = g.a.gcd(&g.b);
    let (a_red, b_red) = if gcd.degree().map_or(false, |d| d > 0) {
        x_only_divisor(&gcd, curve, 1, &mut out)?;
        (g.a.div_exact(&gcd), g.b.div_exact(&gcd))
    } else {
        (g.a.clone(), g.b.clone())
    };

    // norm resolvent of the coprime part
    let a1x_a3 = UniPoly::new(vec![curve.a3.clone(), curve.a1.clone()]);
    let norm = a_red
        .mul(&a_red)
        .sub(&a_red.mul(&b_red).mul(&a1x_a3))
        .sub(&b_red.mul(&b_red).mul(&rhs_cubic(curve)));
    let dega = a_red.degree().map_or(0, |d| d as i64);
    let degb = b_red.degree().map_or(0, |d| d as i64);
    let ord_infinity = -((2 * dega).max(3 + 2 * degb));

    let mut affine_total = 0i64;
    for (factor, mult) in norm.squarefree_decomposition() {
        for x0 in factor_roots(&factor)? {
            let (points, double) = points_above(curve, &x0);
            if double {
                // 2-torsion fibre: ord = norm multiplicity
                out.push(points[0].clone(), mult as i64);
                affine_total += mult as i64;
            } else {
                let reduced = XYPoly {
                    a: a_red.clone(),
                    b: b_red.clone(),
                };
                let v0 = eval_abs(&reduced, &points[0]);
                let v1 = eval_abs(&reduced, &points[1]);
                let zero_side = if v0 <= v1 { 0 } else { 1 };
                out.push(points[zero_side].clone(), mult as i64);
                affine_total += mult as i64;
            }
        }
    }
    debug_assert_eq!(
        affine_total, -ord_infinity,
        "affine zero count must balance the pole order at infinity"
    );
    out.push(CurvePoint::Infinity, ord_infinity);
    Ok(out)
}

/// Divisor contribution of a pure X-polynomial: each root x0 with
/// multiplicity m contributes m (P+) + m (P-) - 2m (O) (2-torsion fibres
/// collapse to 2m (T) - 2m (O)).
fn x_only_divisor(
    a: &UniPoly,
    curve: &WeierstrassCurve,
    scale: i64,
    out: &mut Divisor,
) -> Result<(), CurveError> {
    if a.degree().map_or(true, |d| d == 0) {
        return Ok(());
    }
    let mut infinity_order = 0i64;
    for (factor, mult) in a.squarefree_decomposition() {
        for x0 in factor_roots(&factor)? {
            let m = scale * mult as i64;
            let (points, double) = points_above(curve, &x0);
            if double {
                out.push(points[0].clone(), 2 * m);
            } else {
                out.push(points[0].clone(), m);
                out.push(points[1].clone(), m);
            }
            infinity_order -= 2 * m;
        }
    }
    out.push(CurvePoint::Infinity, infinity_order);
    Ok(())
}

enum RootValue {
    Exact(Rat),
    Numeric(C),
}

/// Roots of a squarefree exact polynomial, rational ones recognized exactly.
fn factor_roots(factor: &UniPoly) -> Result<Vec<RootValue>, CurveError> {
    let mut out = vec![];
    let cs: Vec<C> = factor.coeffs().iter().map(|c| cr(rat_to_f64(c))).collect();
    for r in crate::numeric::roots::all_roots(&cs)? {
        if r.im.abs() < 1e-8 * (1.0 + r.norm()) {
            if let Some(exact) = factor.rational_root_near(r.re, 1_000_000_000) {
                out.push(RootValue::Exact(exact));
                continue;
            }
        }
        out.push(RootValue::Numeric(r));
    }
    Ok(out)
}

/// The one or two points of the curve above x0. Returns (points, double)
/// where double indicates a 2-torsion fibre (single point, Y-discriminant
/// zero).
fn points_above(curve: &WeierstrassCurve, x0: &RootValue) -> (Vec<CurvePoint>, bool) {
    match x0 {
        RootValue::Exact(x) => {
            // Y^2 + (a1 x + a3) Y - rhs(x) = 0
            let p = &curve.a1 * x + &curve.a3;
            let rhs = x * x * x + &curve.a2 * x * x + &curve.a4 * x + &curve.a6;
            let disc = &p * &p + rint(4) * &rhs;
            if disc.is_zero() {
                let y = -&p / rint(2);
                return (vec![CurvePoint::Exact(x.clone(), y)], true);
            }
            if let Some(sq) = rational_sqrt(&disc) {
                let y1 = (-&p + &sq) / rint(2);
                let y2 = (-&p - &sq) / rint(2);
                return (
                    vec![
                        CurvePoint::Exact(x.clone(), y1),
                        CurvePoint::Exact(x.clone(), y2),
                    ],
                    false,
                );
            }
            let xf = cr(rat_to_f64(x));
            let ys = curve.y_above(xf);
            numeric_pair(curve, xf, ys)
        }
        RootValue::Numeric(x) => {
            let ys = curve.y_above(*x);
            numeric_pair(curve, *x, ys)
        }
    }
}

fn numeric_pair(_curve: &WeierstrassCurve, x: C, ys: [C; 2]) -> (Vec<CurvePoint>, bool) {
    let scale = 1.0 + ys[0].norm() + ys[1].norm();
    if (ys[0] - ys[1]).norm() < 1e-9 * scale {
        (vec![CurvePoint::Approx(x, ys[0])], true)
    } else {
        (
            vec![CurvePoint::Approx(x, ys[0]), CurvePoint::Approx(x, ys[1])],
            false,
        )
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

fn eval_abs(g: &XYPoly, p: &CurvePoint) -> f64 {
    match p.xy() {
        Some((x, y)) => g.eval(x, y).norm(),
        None => f64::INFINITY,
    }
}

/// Divisor class in Z[E(C)]^-: one representative per +/- pair with signed
/// multiplicity; 2-torsion points and O are dropped.
#[derive(Debug, Clone)]
pub struct DivisorClass {
    /// (point, normalized lattice coordinates, multiplicity), sorted.
    pub entries: Vec<(CurvePoint, (f64, f64), i64)>,
}

impl DivisorClass {
    /// Reduce raw (point, multiplicity) pairs to canonical class form.
    /// Point identity is decided in normalized u-coordinates (1e-9).
    pub fn reduce(
        pairs: Vec<(CurvePoint, i64)>,
        curve: &WeierstrassCurve,
        unif: &Uniformization,
    ) -> Result<DivisorClass, CurveError> {
        let tol = 1e-9;
        let mut entries: Vec<(CurvePoint, (f64, f64), i64)> = vec![];
        for (p, m) in pairs {
            if m == 0 || p.is_infinity() {
                continue;
            }
            let u = unif.elliptic_log(&p)?;
            let coord = unif.normalize(u);
            if Uniformization::is_half_lattice(coord, tol) {
                continue; // 2-torsion or O
            }
            // canonical representative of the +/- pair
            let neg = ((1.0 - coord.0).rem_euclid(1.0), (1.0 - coord.1).rem_euclid(1.0));
            let (coord, p, m) = if lex_less(neg, coord, tol) {
                (neg, curve.negate(&p), -m)
            } else {
                (coord, p, m)
            };
            let mut merged = false;
            for e in &mut entries {
                if Uniformization::torus_distance(e.1, coord) < tol {
                    e.2 += m;
                    merged = true;
                    break;
                }
            }
            if !merged {
                entries.push((p, coord, m));
            }
        }
        entries.retain(|e| e.2 != 0);
        entries.sort_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.1 .0.total_cmp(&b.1 .0)));
        Ok(DivisorClass { entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Raw pairs for re-reduction (linear combinations of classes).
    pub fn pairs(&self, scale: i64) -> Vec<(CurvePoint, i64)> {
        self.entries
            .iter()
            .map(|(p, _, m)| (p.clone(), m * scale))
            .collect()
    }

    /// Classes are equal when entries match by u-proximity and multiplicity.
    pub fn equals(&self, other: &DivisorClass, tol: f64) -> bool {
        if self.entries.len() != other.entries.len() {
            return false;
        }
        self.entries.iter().zip(&other.entries).all(|(a, b)| {
            a.2 == b.2 && Uniformization::torus_distance(a.1, b.1) < tol
        })
    }
}

fn lex_less(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    if (a.1 - b.1).abs() > tol {
        return a.1 < b.1;
    }
    if (a.0 - b.0).abs() > tol {
        return a.0 < b.0;
    }
    false
}

/// Diamond operation: (sum m_i (S_i)) diamond (sum n_j (T_j)) =
/// sum m_i n_j (S_i - T_j), reduced to canonical class form.
pub fn diamond(
    d1: &Divisor,
    d2: &Divisor,
    curve: &WeierstrassCurve,
    unif: &Uniformization,
) -> Result<DivisorClass, CurveError> {
    let mut pairs = vec![];
    for (p, m) in &d1.entries {
        for (q, n) in &d2.entries {
            let r = curve.add(p, &curve.negate(q));
            pairs.push((r, m * n));
        }
    }
    DivisorClass::reduce(pairs, curve, unif)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecurve::periods::periods;
    use crate::ecurve::{curve, CurveFamily};
    use crate::rat::rint;

    fn b1_line(k: i64) -> XYPoly {
        // X + k - 4, cutting (S) + (-S) - 2O
        XYPoly::x_poly(UniPoly::new(vec![rint(k - 4), rint(1)]))
    }

    fn b2_conic(k: i64) -> XYPoly {
        // X^2/2 + (k^2-7k+12) X + (k-4) Y + k^3 - 15k^2/2 + 12k + 8
        let kk = rint(k);
        let a = UniPoly::new(vec![
            &kk * &kk * &kk - crate::rat::rfrac(15, 2) * &kk * &kk + rint(12) * &kk + rint(8),
            &kk * &kk - rint(7) * &kk + rint(12),
            crate::rat::rfrac(1, 2),
        ]);
        let b = UniPoly::constant(rint(k - 4));
        XYPoly::new(a, b)
    }

    #[test]
    fn divisor_of_b1() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let f = RationalFunctionOnCurve::new(b1_line(-1), XYPoly::constant(rint(1))).unwrap();
        let d = divisor_of(&f, &e).unwrap();
        assert_eq!(d.degree(), 0);
        // (S) + (-S) - 2O with S = (5, 20)
        let s = e.point(rint(5), rint(20)).unwrap();
        let ns = e.negate(&s);
        let mut saw_s = false;
        let mut saw_ns = false;
        let mut saw_o = false;
        for (p, m) in &d.entries {
            if p.close_to(&s) {
                assert_eq!(*m, 1);
                saw_s = true;
            } else if p.close_to(&ns) {
                assert_eq!(*m, 1);
                saw_ns = true;
            } else if p.is_infinity() {
                assert_eq!(*m, -2);
                saw_o = true;
            } else {
                panic!("unexpected point {p:?}");
            }
        }
        assert!(saw_s && saw_ns && saw_o);
    }

    #[test]
    fn divisor_of_b2_is_4s_minus_4o() {
        for kk in [-1i64, 20] {
            let e = curve(CurveFamily::Ek, &rint(kk)).unwrap();
            let f =
                RationalFunctionOnCurve::new(b2_conic(kk), XYPoly::constant(rint(1))).unwrap();
            let d = divisor_of(&f, &e).unwrap();
            assert_eq!(d.degree(), 0);
            let s = e.four_torsion_s().unwrap();
            let mut entries = d.entries.clone();
            entries.retain(|(_, m)| *m != 0);
            assert_eq!(entries.len(), 2, "k = {kk}: {entries:?}");
            for (p, m) in entries {
                if p.is_infinity() {
                    assert_eq!(m, -4);
                } else {
                    assert!(p.close_to(&s), "k = {kk}: expected S, got {p:?}");
                    assert_eq!(m, 4);
                }
            }
        }
    }

    #[test]
    fn constant_has_empty_divisor() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let f = RationalFunctionOnCurve::new(
            XYPoly::constant(rint(5)),
            XYPoly::constant(rint(1)),
        )
        .unwrap();
        let d = divisor_of(&f, &e).unwrap();
        assert!(d.entries.is_empty());
    }

    #[test]
    fn divisor_multiplicative() {
        // div(f g) = div f + div g for f = b1, g = b2
        let e = curve(CurveFamily::Ek, &rint(20)).unwrap();
        let f = b1_line(20);
        let g = b2_conic(20);
        let fg = f.mul(&g, &e);
        let df = poly_divisor(&f, &e).unwrap();
        let dg = poly_divisor(&g, &e).unwrap();
        let dfg = poly_divisor(&fg, &e).unwrap();
        let mut expect = Divisor::default();
        expect.extend_scaled(&df, 1);
        expect.extend_scaled(&dg, 1);
        expect.cleanup();
        assert_eq!(dfg.degree(), 0);
        // compare multisets
        for (p, m) in &expect.entries {
            let found = dfg
                .entries
                .iter()
                .find(|(q, _)| q.close_to(p))
                .map(|(_, n)| *n)
                .unwrap_or(0);
            assert_eq!(found, *m, "mismatch at {p:?}");
        }
    }

    #[test]
    fn diamond_of_b1_with_empty() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let unif = periods(&e).unwrap();
        let f = RationalFunctionOnCurve::new(b1_line(-1), XYPoly::constant(rint(1))).unwrap();
        let d = divisor_of(&f, &e).unwrap();
        let empty = Divisor::default();
        let c = diamond(&d, &empty, &e, &unif).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn class_reduction_kills_pairs_and_two_torsion() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let unif = periods(&e).unwrap();
        let s = e.four_torsion_s().unwrap();
        let ns = e.negate(&s);
        let t2 = e.mul(2, &s);
        let pairs = vec![
            (s.clone(), 3),
            (ns, 3),
            (t2, 7),
            (CurvePoint::Infinity, 4),
        ];
        let c = DivisorClass::reduce(pairs, &e, &unif).unwrap();
        assert!(c.is_empty(), "{:?}", c.entries);
    }

    #[test]
    fn diamond_antisymmetry() {
        let e = curve(CurveFamily::Ek, &rint(20)).unwrap();
        let unif = periods(&e).unwrap();
        let f = RationalFunctionOnCurve::new(b1_line(20), XYPoly::constant(rint(1))).unwrap();
        let g = RationalFunctionOnCurve::new(b2_conic(20), XYPoly::constant(rint(1))).unwrap();
        let df = divisor_of(&f, &e).unwrap();
        let dg = divisor_of(&g, &e).unwrap();
        let c1 = diamond(&df, &dg, &e, &unif).unwrap();
        let c2 = diamond(&dg, &df, &e, &unif).unwrap();
        // class(D1 <> D2) = -class(D2 <> D1)
        let neg_pairs = c2.pairs(-1);
        let neg = DivisorClass::reduce(neg_pairs, &e, &unif).unwrap();
        assert!(c1.equals(&neg, 1e-8), "{:?} vs {:?}", c1.entries, neg.entries);
    }
}
