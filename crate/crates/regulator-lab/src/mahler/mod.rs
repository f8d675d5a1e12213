//! Numerical Mahler measures via Jensen reduction over the unit circle,
//! with root tracking, breakpoint-split adaptive quadrature, Deninger-path
//! geometry, eta-form path integrals and loop integrals of differentials.

mod eta;
mod loops;
mod path;
mod torus;

pub use eta::{eta_integral, SymbolPair};
pub use loops::{
    loop_differential_integral, real_omega1_segment_integral, LoopKind,
};
pub use path::{deninger_path, CirclePath, DeningerPath};
pub use torus::{torus_intersections, TorusOutcome, TorusPoint};

use crate::numeric::quad::{self, QuadError};
use crate::numeric::roots::{self, RootError};
use crate::numeric::{unit_circle, C, TWO_PI};
use crate::polyfam::{LaurentPoly, PolyError};
use crate::unipoly::UniPoly;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MahlerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has no dependence on y after clearing")]
    YDegreeZero,
    #[error("resultant vanishes identically: curve and its conjugate reciprocal share a component")]
    TorusDegenerate,
    #[error("{which} has a zero or pole on the path near t = {t}")]
    PoleOnPath { which: &'static str, t: f64 },
    #[error("branch collision (discriminant zero) on the contour near t = {t}")]
    BranchCollision { t: f64 },
}

/// A numeric value with its accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Measure {
    pub value: f64,
    pub error: f64,
}

/// Roots in y of p(x0, y) after clearing Laurent denominators.
pub struct YRoots {
    pub roots: Vec<C>,
    /// Number of roots lost at infinity because the leading coefficient
    /// vanished at x0 (exactly, in floating point).
    pub dropped: usize,
}

/// Dense solver for the y-roots of a bivariate Laurent polynomial along
/// circles in the x-plane.
pub struct YSolver {
    /// Coefficient polynomials of y^0..y^d after clearing denominators.
    pub coeffs: Vec<UniPoly>,
    pub degree: usize,
}

impl YSolver {
    pub fn new(p: &LaurentPoly) -> Result<Self, MahlerError> {
        if p.is_zero() {
            return Err(MahlerError::ZeroPolynomial);
        }
        let (cleared, _) = p.clear_denominators();
        let by_y = cleared.coefficients_in("y")?;
        let d = by_y.keys().max().copied().unwrap_or(0);
        if d <= 0 {
            return Err(MahlerError::YDegreeZero);
        }
        let mut coeffs = vec![UniPoly::zero(); d as usize + 1];
        for (e, cpoly) in by_y {
            coeffs[e as usize] = cpoly.to_unipoly()?;
        }
        Ok(YSolver {
            coeffs,
            degree: d as usize,
        })
    }

    /// Leading coefficient in y as a polynomial in x.
    pub fn leading(&self) -> &UniPoly {
        &self.coeffs[self.degree]
    }

    pub fn roots_at_x(&self, x: C) -> Result<YRoots, RootError> {
        let cs: Vec<C> = self.coeffs.iter().map(|c| c.eval_c(x)).collect();
        let full = cs.len() - 1;
        let roots = match full {
            1 => {
                if cs[1].norm() == 0.0 {
                    return Ok(YRoots {
                        roots: vec![],
                        dropped: 1,
                    });
                }
                vec![-cs[0] / cs[1]]
            }
            2 if cs[2].norm() != 0.0 => roots::quadratic_roots(cs[2], cs[1], cs[0]).to_vec(),
            _ => roots::all_roots(&cs)?,
        };
        let dropped = full - roots.len();
        Ok(YRoots { roots, dropped })
    }

    /// Sum of log^+ |y_k| at a point of the unit circle; NaN propagates
    /// root-solver failures into the quadrature error path.
    fn log_plus_sum(&self, t: f64) -> f64 {
        let x = unit_circle(t);
        match self.roots_at_x(x) {
            Ok(yr) => yr
                .roots
                .iter()
                .map(|y| {
                    let n = y.norm();
                    if n > 1.0 {
                        n.ln()
                    } else {
                        0.0
                    }
                })
                .sum(),
            Err(_) => f64::NAN,
        }
    }
}

/// Roots of p(x0, y) in y, with multiplicity, after clearing denominators.
pub fn roots_in_y(p: &LaurentPoly, x0: C) -> Result<YRoots, MahlerError> {
    let solver = YSolver::new(p)?;
    Ok(solver.roots_at_x(x0)?)
}

/// Mahler measure of a one-variable (Laurent) polynomial via Jensen's
/// formula: log|leading| + sum of log^+ |roots|. Accepts polynomials of any
/// declared arity as long as at most one variable actually occurs.
pub fn mahler_1d(p: &LaurentPoly) -> Result<Measure, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let (cleared, _) = p.clear_denominators();
    let up = effective_unipoly(&cleared)?;
    mahler_1d_unipoly(&up)
}

/// Project a polynomial that uses at most one variable onto a dense
/// univariate representation.
fn effective_unipoly(p: &LaurentPoly) -> Result<UniPoly, MahlerError> {
    let lo = p.min_exponents();
    let hi = p.max_exponents();
    let active: Vec<usize> = (0..p.arity()).filter(|&i| lo[i] != 0 || hi[i] != 0).collect();
    match active.len() {
        0 => {
            let c = p
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(num_traits::Zero::zero);
            Ok(UniPoly::constant(c))
        }
        1 => {
            let idx = active[0];
            let mut v = vec![crate::rat::rint(0); (hi[idx] + 1) as usize];
            for (e, c) in p.terms() {
                if e[idx] < 0 {
                    return Err(MahlerError::Poly(PolyError::NegativeExponent(
                        p.vars()[idx].clone(),
                    )));
                }
                v[e[idx] as usize] = c.clone();
            }
            Ok(UniPoly::new(v))
        }
        _ => Err(MahlerError::Poly(PolyError::WrongArity {
            expected: 1,
            got: active.len(),
        })),
    }
}

pub fn mahler_1d_unipoly(up: &UniPoly) -> Result<Measure, MahlerError> {
    if up.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    if up.degree() == Some(0) {
        let v = crate::rat::rat_to_f64(&up.leading()).abs().ln();
        return Ok(Measure {
            value: v,
            error: 0.0,
        });
    }
    let cs: Vec<C> = up
        .coeffs()
        .iter()
        .map(|c| C::new(crate::rat::rat_to_f64(c), 0.0))
        .collect();
    let roots = roots::all_roots(&cs)?;
    let lead = cs.last().expect("nonzero").norm();
    let mut value = lead.ln();
    let mut error = 0.0f64;
    for r in &roots {
        let n = r.norm();
        if n > 1.0 {
            value += n.ln();
        }
        // residual-certified error: |p(r)| / |p'(r)| bounds the root shift
        let pr = roots::eval_poly(&cs, *r).norm();
        let dpr = eval_deriv_norm(&cs, *r);
        if dpr > 0.0 && n > 0.5 {
            error += pr / dpr / n.max(1.0);
        }
    }
    Ok(Measure { value, error })
}

fn eval_deriv_norm(cs: &[C], z: C) -> f64 {
    let mut dp = C::new(0.0, 0.0);
    let mut p = C::new(0.0, 0.0);
    for c in cs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    dp.norm()
}

/// Breakpoints in t of Sum log^+|y_k(e^{2 pi i t})|: unit-circle crossings or
/// touches of some root modulus, and zeros of the leading coefficient.
pub fn measure_breakpoints(solver: &YSolver) -> Result<Vec<f64>, MahlerError> {
    let mut bps: Vec<f64> = vec![];

    // sign changes of prod(|y_k| - 1), located at 2048 samples + bisection
    let mut crossing = |t: f64| -> f64 {
        let x = unit_circle(t);
        match solver.roots_at_x(x) {
            Ok(yr) => yr.roots.iter().map(|y| y.norm() - 1.0).product(),
            Err(_) => f64::NAN,
        }
    };
    bps.extend(crate::numeric::scan_sign_changes(
        &mut crossing,
        0.0,
        1.0,
        2048,
        1e-13,
    ));

    // touch points: minima of min_k ||y_k| - 1|
    let mut gap = |t: f64| -> f64 {
        let x = unit_circle(t);
        match solver.roots_at_x(x) {
            Ok(yr) => yr
                .roots
                .iter()
                .map(|y| (y.norm() - 1.0).abs())
                .fold(f64::INFINITY, f64::min),
            Err(_) => f64::NAN,
        }
    };
    for (t, v) in crate::numeric::scan_minima_below(&mut gap, 0.0, 1.0, 2048, 0.05, 1e-12) {
        if v < 1e-6 {
            bps.push(t);
        }
    }

    // leading-coefficient zeros on the unit circle (log singularities)
    let lead = solver.leading();
    if lead.degree().map_or(false, |d| d > 0) {
        let cs: Vec<C> = lead
            .coeffs()
            .iter()
            .map(|c| C::new(crate::rat::rat_to_f64(c), 0.0))
            .collect();
        for r in roots::all_roots(&cs)? {
            if (r.norm() - 1.0).abs() < 1e-9 {
                let mut t = r.arg() / TWO_PI;
                if t < 0.0 {
                    t += 1.0;
                }
                bps.push(t);
            }
        }
    }

    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-11);
    Ok(bps)
}

/// Two-variable Mahler measure by Jensen reduction in y and panel-adaptive
/// Gauss-Legendre quadrature over |x| = 1, panels pre-split where some
/// |y_k| crosses 1 and where the leading coefficient vanishes.
pub fn mahler_2d(p: &LaurentPoly, tol: f64) -> Result<Measure, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let (cleared, _) = p.clear_denominators();
    // degenerate arities: fall back to the one-variable measure
    let by_y = cleared.coefficients_in("y")?;
    let ydeg = by_y.keys().max().copied().unwrap_or(0);
    if ydeg == 0 {
        let only = by_y.into_values().next().ok_or(MahlerError::ZeroPolynomial)?;
        return mahler_1d(&only);
    }
    let by_x = cleared.coefficients_in("x")?;
    let xdeg = by_x.keys().max().copied().unwrap_or(0);
    let xmin = by_x.keys().min().copied().unwrap_or(0);
    if xdeg == 0 && xmin == 0 {
        // univariate in y
        let only = by_x.into_values().next().ok_or(MahlerError::ZeroPolynomial)?;
        return mahler_1d(&only);
    }

    let solver = YSolver::new(&cleared)?;
    let m_lead = mahler_1d_unipoly(solver.leading())?;
    let bps = measure_breakpoints(&solver)?;
    let quad = quad::adaptive(
        &mut |t| solver.log_plus_sum(t),
        0.0,
        1.0,
        &bps,
        tol,
        60_000,
    )?;
    Ok(Measure {
        value: m_lead.value + quad.value,
        error: m_lead.error + quad.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::cr;
    use crate::polyfam::{family, parse_poly, Family};
    use crate::rat::rint;
    use std::collections::BTreeMap;

    fn parse(s: &str) -> LaurentPoly {
        parse_poly(s, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn roots_in_y_trivial() {
        let p = parse("y^2-1");
        let yr = roots_in_y(&p, cr(0.7)).unwrap();
        assert_eq!(yr.roots.len(), 2);
        let mut mods: Vec<f64> = yr.roots.iter().map(|r| r.re).collect();
        mods.sort_by(f64::total_cmp);
        assert!((mods[0] + 1.0).abs() < 1e-14 && (mods[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn roots_in_y_double_root() {
        // Q_0(x,y) at x = 1: y^2 + 2y + 1
        let q = family(Family::Q, &rint(0));
        let yr = roots_in_y(&q, cr(1.0)).unwrap();
        assert_eq!(yr.roots.len(), 2);
        for r in yr.roots {
            assert!((r + cr(1.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn roots_in_y_vieta_product() {
        // Qshift at k=-1, x0 = e^{0.6 pi i}: product of roots = (x0-1)^4
        let q = family(Family::Qshift, &rint(-1));
        let x0 = C::new(0.0, 0.6 * std::f64::consts::PI).exp();
        let yr = roots_in_y(&q, x0).unwrap();
        let prod: C = yr.roots.iter().product();
        let expect = (x0 - cr(1.0)).powi(4);
        assert!((prod - expect).norm() < 1e-10);
    }

    #[test]
    fn mahler_1d_examples() {
        // m(2x) = log 2
        let m = mahler_1d(&parse("2*x")).unwrap();
        assert!((m.value - 2f64.ln()).abs() < 1e-14);
        // m(x - 1) = 0
        let m = mahler_1d(&parse("x-1")).unwrap();
        assert!(m.value.abs() < 1e-14);
        // m(x^2 - x - 1) = log golden ratio
        let m = mahler_1d(&parse("x^2-x-1")).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((m.value - phi.ln()).abs() < 1e-13);
        // Laurent invariance
        let m2 = mahler_1d(&parse("x^-3*(x^2-x-1)")).unwrap();
        assert!((m2.value - m.value).abs() < 1e-13);
    }

    #[test]
    fn mahler_2d_trivial_cases() {
        let m = mahler_2d(&parse("x+y"), 1e-9).unwrap();
        assert!(m.value.abs() < 1e-8, "m(x+y) = {}", m.value);
        let m = mahler_2d(&parse("y-2"), 1e-9).unwrap();
        assert!((m.value - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn mahler_2d_monomial_and_inversion_invariance() {
        let p = family(Family::R, &rint(-2));
        let m0 = mahler_2d(&p, 1e-9).unwrap();
        let mono = LaurentPoly::monomial(&["x", "y"], vec![2, -1], rint(3));
        let m1 = mahler_2d(&p.mul(&mono), 1e-9).unwrap();
        assert!((m1.value - (m0.value + 3f64.ln())).abs() < 1e-8);
        let inv = p.invert_var("x").unwrap();
        let m2 = mahler_2d(&inv, 1e-9).unwrap();
        assert!((m2.value - m0.value).abs() < 1e-8);
    }

    #[test]
    fn mahler_2d_role_swap() {
        let p = family(Family::Qshift, &rint(-2));
        let tol = 1e-8;
        let m0 = mahler_2d(&p, tol).unwrap();
        let m1 = mahler_2d(&p.swap_vars().unwrap(), tol).unwrap();
        assert!(
            (m0.value - m1.value).abs() <= 2.0 * tol + m0.error + m1.error,
            "swap mismatch: {} vs {}",
            m0.value,
            m1.value
        );
    }

    #[test]
    fn riemann_sum_oracle_r_minus_1() {
        // independent uniform-grid oracle at 1e6 nodes
        let p = family(Family::R, &rint(-1));
        let solver = YSolver::new(&p).unwrap();
        let n = 1_000_000usize;
        let mut sum = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            sum += solver.log_plus_sum(t);
        }
        let oracle = sum / n as f64;
        let m = mahler_2d(&p, 1e-9).unwrap();
        assert!(
            (m.value - oracle).abs() < 1e-6,
            "quadrature {} vs oracle {}",
            m.value,
            oracle
        );
    }

    #[test]
    fn quadrature_refinement_monotonic() {
        let p = family(Family::Qshift, &rint(-3));
        let coarse = mahler_2d(&p, 1e-6).unwrap();
        let fine = mahler_2d(&p, 5e-7).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error + 1e-12);
    }
}
