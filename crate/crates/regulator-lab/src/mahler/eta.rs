//! Path integrals of the real 1-form eta(f, g) = log|f| d(arg g) - log|g| d(arg f)
//! along Deninger paths, with d(arg h) computed as Im(h'/h) under the path
//! parametrization and y' obtained by implicit differentiation on the curve.

use super::path::DeningerPath;
use super::{MahlerError, Measure};
use crate::numeric::quad;
use crate::numeric::{C, TWO_PI};
use crate::polyfam::LaurentPoly;

/// Pair of rational functions in (x, y) with exact rational coefficients,
/// the two slots of a Steinberg symbol {f, g}.
#[derive(Clone)]
pub struct SymbolPair {
    pub f_num: LaurentPoly,
    pub f_den: LaurentPoly,
    pub g_num: LaurentPoly,
    pub g_den: LaurentPoly,
}

impl SymbolPair {
    pub fn new(
        f: (LaurentPoly, LaurentPoly),
        g: (LaurentPoly, LaurentPoly),
    ) -> Result<Self, MahlerError> {
        if f.0.is_zero() || f.1.is_zero() || g.0.is_zero() || g.1.is_zero() {
            return Err(MahlerError::ZeroPolynomial);
        }
        Ok(SymbolPair {
            f_num: f.0,
            f_den: f.1,
            g_num: g.0,
            g_den: g.1,
        })
    }

    /// Polynomial symbol {f, g}.
    pub fn from_polys(f: LaurentPoly, g: LaurentPoly) -> Result<Self, MahlerError> {
        let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
        let one = LaurentPoly::constant(&vars, crate::rat::rint(1));
        Self::new((f, one.clone()), (g, one))
    }

    /// The symbol {x, y}.
    pub fn xy() -> Self {
        let x = LaurentPoly::var(&["x", "y"], 0, 1);
        let y = LaurentPoly::var(&["x", "y"], 1, 1);
        Self::from_polys(x, y).expect("nonzero")
    }

    pub fn swapped(&self) -> Self {
        SymbolPair {
            f_num: self.g_num.clone(),
            f_den: self.g_den.clone(),
            g_num: self.f_num.clone(),
            g_den: self.f_den.clone(),
        }
    }
}

struct PreparedPart {
    num: LaurentPoly,
    num_dx: LaurentPoly,
    num_dy: LaurentPoly,
    den: LaurentPoly,
    den_dx: LaurentPoly,
    den_dy: LaurentPoly,
}

impl PreparedPart {
    fn new(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self, MahlerError> {
        Ok(PreparedPart {
            num: num.clone(),
            num_dx: num.partial_derivative("x")?,
            num_dy: num.partial_derivative("y")?,
            den: den.clone(),
            den_dx: den.partial_derivative("x")?,
            den_dy: den.partial_derivative("y")?,
        })
    }

    /// (log|h|, d arg h / dt) at a path point with velocities (xd, yd).
    fn log_and_darg(&self, x: C, y: C, xd: C, yd: C) -> Option<(f64, f64)> {
        let n = self.num.eval_c(&[x, y]);
        let d = self.den.eval_c(&[x, y]);
        if n.norm() < 1e-280 || d.norm() < 1e-280 {
            return None;
        }
        let nd = self.num_dx.eval_c(&[x, y]) * xd + self.num_dy.eval_c(&[x, y]) * yd;
        let dd = self.den_dx.eval_c(&[x, y]) * xd + self.den_dy.eval_c(&[x, y]) * yd;
        let log_h = n.norm().ln() - d.norm().ln();
        let darg = (nd / n).im - (dd / d).im;
        Some((log_h, darg))
    }
}

/// (1/2 pi) times the integral of eta({f, g}) along the Deninger path,
/// summed over the branch roots with |y| >= 1.
pub fn eta_integral(sym: &SymbolPair, path: &DeningerPath, tol: f64) -> Result<Measure, MahlerError> {
    let fp = PreparedPart::new(&sym.f_num, &sym.f_den)?;
    let gp = PreparedPart::new(&sym.g_num, &sym.g_den)?;
    let poly_dx = path.poly.partial_derivative("x")?;
    let poly_dy = path.poly.partial_derivative("y")?;

    // zero/pole pre-check on the stored samples
    for (i, &t) in path.base.samples.iter().enumerate() {
        let x = path.base.at(t);
        for &y in &path.branch[i] {
            for (part, which) in [(&fp, "f"), (&gp, "g")] {
                let n = part.num.eval_c(&[x, y]).norm();
                let d = part.den.eval_c(&[x, y]).norm();
                if n < 1e-12 || d < 1e-12 {
                    return Err(MahlerError::PoleOnPath { which, t });
                }
            }
        }
    }

    let mut integrand = |t: f64| -> f64 {
        let x = path.base.at(t);
        let xd = path.base.velocity(t);
        let ys = match path.branch_at(t) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let mut acc = 0.0;
        for y in ys {
            let py = poly_dy.eval_c(&[x, y]);
            if py.norm() < 1e-280 {
                return f64::NAN;
            }
            let yd = -poly_dx.eval_c(&[x, y]) * xd / py;
            let (log_f, darg_f) = match fp.log_and_darg(x, y, xd, yd) {
                Some(v) => v,
                None => return f64::NAN,
            };
            let (log_g, darg_g) = match gp.log_and_darg(x, y, xd, yd) {
                Some(v) => v,
                None => return f64::NAN,
            };
            acc += log_f * darg_g - log_g * darg_f;
        }
        acc
    };

    let q = quad::adaptive(
        &mut integrand,
        0.0,
        1.0,
        &path.base.breakpoints,
        tol,
        40_000,
    )?;
    Ok(Measure {
        value: q.value / TWO_PI,
        error: q.error / TWO_PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::path::{deninger_path, CirclePath};
    use crate::mahler::{mahler_2d, mahler_1d};
    use crate::polyfam::{family, Family};
    use crate::rat::rint;

    #[test]
    fn eta_of_f_with_itself_vanishes() {
        let r = family(Family::R, &rint(-1));
        let path = deninger_path(&r, CirclePath::unit()).unwrap();
        let x = LaurentPoly::var(&["x", "y"], 0, 1);
        let sym = SymbolPair::from_polys(x.clone(), x).unwrap();
        let v = eta_integral(&sym, &path, 1e-10).unwrap();
        assert!(v.value.abs() < 1e-9, "eta(f,f) = {}", v.value);
    }

    #[test]
    fn eta_antisymmetry() {
        let r = family(Family::R, &rint(-2));
        let path = deninger_path(&r, CirclePath::unit()).unwrap();
        let sym = SymbolPair::xy();
        let a = eta_integral(&sym, &path, 1e-10).unwrap();
        let b = eta_integral(&sym.swapped(), &path, 1e-10).unwrap();
        assert!((a.value + b.value).abs() < 1e-9);
    }

    #[test]
    fn eta_matches_measure_for_reciprocal_quadratic() {
        // m(P) - m(a0) = -(1/2pi) integral of eta({x,y}) over the path
        let r = family(Family::R, &rint(-1));
        let path = deninger_path(&r, CirclePath::unit()).unwrap();
        let sym = SymbolPair::xy();
        let eta = eta_integral(&sym, &path, 1e-9).unwrap();
        let m = mahler_2d(&r, 1e-9).unwrap();
        // a0 of x*y*R is x, m(a0) = 0
        let a0 = LaurentPoly::var(&["x"], 0, 1);
        let ma0 = mahler_1d(&a0).unwrap();
        assert!(
            ((m.value - ma0.value) + eta.value).abs() < 1e-6,
            "measure {} vs eta {}",
            m.value - ma0.value,
            eta.value
        );
    }
}
