//! Newton polygons of bivariate Laurent polynomials and their face
//! polynomials.

use super::{LaurentPoly, PolyError};

/// One boundary edge of the Newton polygon together with the restriction of
/// the polynomial to the lattice points of that edge.
#[derive(Debug, Clone)]
pub struct NewtonFace {
    /// Edge endpoints (lattice points, counterclockwise orientation).
    pub edge: ((i64, i64), (i64, i64)),
    /// One-variable polynomial in `t` collecting the coefficients along the
    /// edge, ordered from `edge.0` to `edge.1`.
    pub face_poly: LaurentPoly,
}

/// All faces of the Newton polygon, edges traversed counterclockwise.
///
/// Degenerate hulls: a segment yields its two orientations, a single point
/// yields no faces.
pub fn newton_faces(p: &LaurentPoly) -> Result<Vec<NewtonFace>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial("Newton polygon"));
    }
    if p.arity() != 2 {
        return Err(PolyError::WrongArity {
            expected: 2,
            got: p.arity(),
        });
    }
    let pts: Vec<(i64, i64)> = p.terms().map(|(e, _)| (e[0], e[1])).collect();
    let hull = convex_hull(&pts);
    let m = hull.len();
    let mut faces = vec![];
    if m == 1 {
        return Ok(faces);
    }
    if m == 2 {
        faces.push(face_for_edge(p, hull[0], hull[1]));
        faces.push(face_for_edge(p, hull[1], hull[0]));
        return Ok(faces);
    }
    for i in 0..m {
        faces.push(face_for_edge(p, hull[i], hull[(i + 1) % m]));
    }
    Ok(faces)
}

fn face_for_edge(p: &LaurentPoly, a: (i64, i64), b: (i64, i64)) -> NewtonFace {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let g = gcd(dx.unsigned_abs(), dy.unsigned_abs()).max(1) as i64;
    let step = (dx / g, dy / g);
    let mut face = LaurentPoly::zero(&["t"]);
    for j in 0..=g {
        let pt = [a.0 + j * step.0, a.1 + j * step.1];
        let c = p.coeff(&pt);
        face = face.add(&LaurentPoly::monomial(&["t"], vec![j], c));
    }
    NewtonFace {
        edge: (a, b),
        face_poly: face,
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Andrew's monotone chain; returns hull vertices in counterclockwise order.
/// Collinear input collapses to the two extreme points.
fn convex_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = pts.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i128 {
        (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
    };
    let mut lower: Vec<(i64, i64)> = vec![];
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = vec![];
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // all points collinear: monotone chain with <= filter degenerates
        let mut ext = vec![pts[0], pts[n - 1]];
        ext.dedup();
        return ext;
    }
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfam::{family, parse_poly, Family};
    use crate::rat::rint;
    use std::collections::BTreeMap;

    fn parse(s: &str) -> LaurentPoly {
        parse_poly(s, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn triangle_hull_three_binomial_faces() {
        let faces = newton_faces(&parse("x+y+1")).unwrap();
        assert_eq!(faces.len(), 3);
        for f in &faces {
            assert_eq!(f.face_poly.num_terms(), 2, "binomial face");
        }
    }

    #[test]
    fn face_with_root_minus_two() {
        // hull of x+y+2 is the triangle (0,0),(1,0),(0,1); the edges through
        // the constant term carry the face t + 2 (or 2t + 1), with root -2
        // (or -1/2), not a root of unity.
        let faces = newton_faces(&parse("x+y+2")).unwrap();
        assert_eq!(faces.len(), 3);
        let mut saw_bad_root = false;
        for f in &faces {
            let up = f.face_poly.to_unipoly().unwrap();
            if !up.all_roots_of_unity() {
                saw_bad_root = true;
                // root of t+2 is -2; root of 2t+1 is -1/2
                let c0 = up.coeff(0);
                let c1 = up.coeff(1);
                let root = -c0 / c1;
                assert!(root == rint(-2) || root == crate::rat::rfrac(-1, 2));
            }
        }
        assert!(saw_bad_root);
    }

    #[test]
    fn q3_faces_all_roots_of_unity() {
        let q = family(Family::Q, &rint(3));
        for f in newton_faces(&q).unwrap() {
            assert!(f.face_poly.to_unipoly().unwrap().all_roots_of_unity());
        }
    }

    #[test]
    fn faces_invariant_under_monomial() {
        let p = parse("x+y+2");
        let m = LaurentPoly::monomial(&["x", "y"], vec![3, -1], rint(1));
        let shifted = p.mul(&m);
        let f1 = newton_faces(&p).unwrap();
        let f2 = newton_faces(&shifted).unwrap();
        assert_eq!(f1.len(), f2.len());
        // same face polynomials after matching edges by direction
        for a in &f1 {
            let dir = (a.edge.1 .0 - a.edge.0 .0, a.edge.1 .1 - a.edge.0 .1);
            let b = f2
                .iter()
                .find(|b| (b.edge.1 .0 - b.edge.0 .0, b.edge.1 .1 - b.edge.0 .1) == dir)
                .expect("matching edge");
            assert_eq!(a.face_poly, b.face_poly);
        }
    }

    #[test]
    fn segment_hull_two_faces() {
        let p = parse("x*y + 2 + x^-1*y^-1");
        let faces = newton_faces(&p).unwrap();
        assert_eq!(faces.len(), 2);
        for f in &faces {
            assert_eq!(f.face_poly.num_terms(), 3);
        }
    }

    #[test]
    fn zero_poly_rejected() {
        let z = LaurentPoly::zero(&["x", "y"]);
        assert!(newton_faces(&z).is_err());
    }
}
