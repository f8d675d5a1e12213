//! Intersections of a curve P(x, y) = 0 with the unit torus |x| = |y| = 1,
//! by an exact resultant against the conjugate-reciprocal partner followed
//! by unit-circle root filtering and y back-substitution.

use super::{MahlerError, YSolver};
use crate::numeric::roots;
use crate::numeric::C;
use crate::polyfam::LaurentPoly;
use crate::rat::Rat;
use crate::unipoly::UniPoly;
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct TorusPoint {
    pub x: C,
    pub y: C,
    /// True when the y-root is a collision (double root) at this x: the
    /// curve touches the torus tangentially rather than crossing it.
    pub tangential: bool,
}

#[derive(Debug)]
pub enum TorusOutcome {
    /// Finitely many intersection points.
    Points(Vec<TorusPoint>),
    /// The resultant vanishes identically: the curve coincides with its
    /// conjugate reciprocal (e.g. every reciprocal polynomial), so the
    /// intersection is not a finite set of algebraic points.
    Degenerate,
}

/// All solutions of p = 0 on the unit torus.
pub fn torus_intersections(p: &LaurentPoly) -> Result<TorusOutcome, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let (m, _) = p.clear_denominators();
    let msolver = YSolver::new(&m)?;

    // conjugate reciprocal: x^degx y^degy p(1/x, 1/y) (real coefficients)
    let mstar = {
        let inv = m.invert_var("x")?.invert_var("y")?;
        inv.clear_denominators().0
    };

    let ma = y_coeffs(&m)?;
    let mb = y_coeffs(&mstar)?;
    let res = resultant_y(&ma, &mb);
    if res.is_zero() {
        return Ok(TorusOutcome::Degenerate);
    }

    // Unit-circle roots of R are roots of gcd(R, reverse(R)).
    let stripped = res.strip_monomial();
    let filter = stripped.gcd(&stripped.reverse());
    let candidates = if filter.degree().map_or(true, |d| d == 0) {
        vec![]
    } else {
        let sf = filter.squarefree_part();
        roots::all_roots(
            &sf.coeffs()
                .iter()
                .map(|c| C::new(crate::rat::rat_to_f64(c), 0.0))
                .collect::<Vec<_>>(),
        )?
    };

    let mut points: Vec<TorusPoint> = vec![];
    for x0 in candidates {
        if (x0.norm() - 1.0).abs() > 1e-9 {
            continue;
        }
        let yr = msolver.roots_at_x(x0)?;
        // near-double roots lose half the working precision; their cluster
        // midpoint (the exact double-root position) restores it
        let mut roots = yr.roots.clone();
        let mut collided = vec![false; roots.len()];
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                if (roots[i] - roots[j]).norm() < 1e-6 * (1.0 + roots[i].norm()) {
                    let mid = 0.5 * (roots[i] + roots[j]);
                    roots[i] = mid;
                    roots[j] = mid;
                    collided[i] = true;
                    collided[j] = true;
                }
            }
        }
        for (i, &y0) in roots.iter().enumerate() {
            if (y0.norm() - 1.0).abs() > 1e-8 {
                continue;
            }
            points.push(TorusPoint {
                x: x0,
                y: y0,
                tangential: collided[i],
            });
        }
    }
    // deduplicate (conjugate-paired candidates can coincide numerically)
    points.sort_by(|a, b| {
        a.x.re
            .total_cmp(&b.x.re)
            .then(a.x.im.total_cmp(&b.x.im))
            .then(a.y.re.total_cmp(&b.y.re))
            .then(a.y.im.total_cmp(&b.y.im))
    });
    points.dedup_by(|a, b| (a.x - b.x).norm() < 1e-7 && (a.y - b.y).norm() < 1e-7);
    Ok(TorusOutcome::Points(points))
}

/// Coefficients in y as exact univariate polynomials in x (dense, 0..=d).
fn y_coeffs(p: &LaurentPoly) -> Result<Vec<UniPoly>, MahlerError> {
    let by_y = p.coefficients_in("y")?;
    let d = by_y.keys().max().copied().unwrap_or(0).max(0) as usize;
    let mut out = vec![UniPoly::zero(); d + 1];
    for (e, c) in by_y {
        out[e as usize] = c.to_unipoly()?;
    }
    Ok(out)
}

/// Resultant in y of two polynomials with coefficients in Q[x], via the
/// Sylvester determinant (Laplace expansion with column-mask memoisation).
pub fn resultant_y(a: &[UniPoly], b: &[UniPoly]) -> UniPoly {
    let da = a.len() - 1;
    let db = b.len() - 1;
    if da == 0 && db == 0 {
        return UniPoly::one();
    }
    let n = da + db;
    let mut mat: Vec<Vec<UniPoly>> = vec![vec![UniPoly::zero(); n]; n];
    for r in 0..db {
        for s in 0..=da {
            mat[r][r + s] = a[da - s].clone();
        }
    }
    for r in 0..da {
        for s in 0..=db {
            mat[db + r][r + s] = b[db - s].clone();
        }
    }
    let mut memo: HashMap<u64, UniPoly> = HashMap::new();
    det_rec(&mat, 0, 0, n, &mut memo)
}

fn det_rec(
    mat: &[Vec<UniPoly>],
    row: usize,
    mask: u64,
    n: usize,
    memo: &mut HashMap<u64, UniPoly>,
) -> UniPoly {
    if row == n {
        return UniPoly::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut acc = UniPoly::zero();
    let mut free_idx = 0usize;
    for col in 0..n {
        let bit = 1u64 << col;
        if mask & bit != 0 {
            continue;
        }
        let entry = &mat[row][col];
        if !entry.is_zero() {
            let sub = det_rec(mat, row + 1, mask | bit, n, memo);
            let term = entry.mul(&sub);
            acc = if free_idx % 2 == 1 {
                acc.sub(&term)
            } else {
                acc.add(&term)
            };
        }
        free_idx += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}

#[allow(dead_code)]
fn rat_is_zero(r: &Rat) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::cr;
    use crate::polyfam::{family, parse_poly, Family};
    use crate::rat::rint;
    use std::collections::BTreeMap;

    #[test]
    fn resultant_of_univariates() {
        // Res_y of (y - u(x)) and (y - v(x)) is v - u ... here with constants:
        // Res_y(y^2 - 1, y - 3) = 9 - 1 = 8
        let a = vec![UniPoly::from_i64(&[-1]), UniPoly::zero(), UniPoly::from_i64(&[1])];
        let b = vec![UniPoly::from_i64(&[-3]), UniPoly::from_i64(&[1])];
        let r = resultant_y(&a, &b);
        assert_eq!(r, UniPoly::from_i64(&[8]));
    }

    #[test]
    fn qshift_single_intersection() {
        for kk in [-3i64, 20] {
            let q = family(Family::Qshift, &rint(kk));
            match torus_intersections(&q).unwrap() {
                TorusOutcome::Points(pts) => {
                    let transversal: Vec<_> = pts.iter().filter(|p| !p.tangential).collect();
                    assert_eq!(transversal.len(), 1, "k = {kk}: {pts:?}");
                    assert!((transversal[0].x - cr(1.0)).norm() < 1e-8);
                    assert!((transversal[0].y - cr(-1.0)).norm() < 1e-8);
                }
                TorusOutcome::Degenerate => panic!("unexpected degenerate for k = {kk}"),
            }
        }
    }

    #[test]
    fn degenerate_component() {
        // x + y contains the torus family y = -x
        let p = parse_poly("x+y", &BTreeMap::new()).unwrap();
        assert!(matches!(
            torus_intersections(&p).unwrap(),
            TorusOutcome::Degenerate
        ));
    }

    #[test]
    fn reciprocal_families_degenerate() {
        // reciprocal polynomials coincide with their conjugate reciprocal
        let r = family(Family::R, &rint(-2));
        assert!(matches!(
            torus_intersections(&r).unwrap(),
            TorusOutcome::Degenerate
        ));
    }

    #[test]
    fn boundary_k_has_tangential_touches() {
        // at k = -1 the curve touches the torus at x = e^{+/- i pi/3}
        let q = family(Family::Qshift, &rint(-1));
        match torus_intersections(&q).unwrap() {
            TorusOutcome::Points(pts) => {
                let transversal: Vec<_> = pts.iter().filter(|p| !p.tangential).collect();
                assert_eq!(transversal.len(), 1);
                assert!((transversal[0].x - cr(1.0)).norm() < 1e-8);
                let touches: Vec<_> = pts.iter().filter(|p| p.tangential).collect();
                assert_eq!(touches.len(), 2, "{pts:?}");
                for t in touches {
                    assert!((t.x.re - 0.5).abs() < 1e-7);
                }
            }
            TorusOutcome::Degenerate => panic!("unexpected degenerate"),
        }
    }
}
