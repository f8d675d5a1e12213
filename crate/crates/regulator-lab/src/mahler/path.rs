//! Deninger-path geometry: the portion of a curve P(x, y) = 0 lying over a
//! circle in the x-plane with |y| >= 1, its closure test and its torus
//! intersections.

use super::torus::{torus_intersections, TorusOutcome, TorusPoint};
use super::{MahlerError, YSolver};
use crate::numeric::{C, TWO_PI};
use crate::polyfam::LaurentPoly;

/// Circle contour in the x-plane, parametrized by t in [0, 1).
#[derive(Debug, Clone)]
pub struct CirclePath {
    pub center: C,
    pub radius: f64,
    /// Strictly increasing parameter samples in [0, 1).
    pub samples: Vec<f64>,
    /// Sorted parameter values where the integrand loses smoothness.
    pub breakpoints: Vec<f64>,
}

impl CirclePath {
    pub fn new(center: C, radius: f64, n_samples: usize) -> Self {
        assert!(radius > 0.0);
        CirclePath {
            center,
            radius,
            samples: (0..n_samples).map(|i| i as f64 / n_samples as f64).collect(),
            breakpoints: vec![],
        }
    }

    /// Unit circle |x| = 1.
    pub fn unit() -> Self {
        Self::new(C::new(0.0, 0.0), 1.0, 1024)
    }

    /// Circle |x + 1| = 1, i.e. x = e^{2 pi i t} - 1.
    pub fn shifted_unit() -> Self {
        Self::new(C::new(-1.0, 0.0), 1.0, 1024)
    }

    pub fn at(&self, t: f64) -> C {
        self.center + self.radius * C::new(0.0, TWO_PI * t).exp()
    }

    /// dx/dt along the contour.
    pub fn velocity(&self, t: f64) -> C {
        C::new(0.0, TWO_PI) * self.radius * C::new(0.0, TWO_PI * t).exp()
    }
}

/// Branch-tracked Deninger path over a circle contour.
pub struct DeningerPath {
    pub base: CirclePath,
    /// The curve polynomial (cleared of Laurent denominators).
    pub poly: LaurentPoly,
    pub solver: YSolver,
    /// Selected branch roots (|y| >= 1) at each base sample.
    pub branch: Vec<Vec<C>>,
    pub closed: bool,
    /// Intersections with the unit torus (only meaningful for the unit
    /// contour; empty when the torus analysis is degenerate).
    pub torus_intersections: Vec<TorusPoint>,
    /// True when the torus analysis returned the degenerate outcome.
    pub torus_degenerate: bool,
}

impl DeningerPath {
    /// Branch values at an arbitrary parameter (selection by modulus).
    pub fn branch_at(&self, t: f64) -> Result<Vec<C>, MahlerError> {
        let x = self.base.at(t);
        let yr = self.solver.roots_at_x(x)?;
        Ok(select_branch(&yr.roots))
    }

    /// The single outside root for y-quadratics (largest modulus).
    pub fn outer_root(&self, t: f64) -> Result<C, MahlerError> {
        let x = self.base.at(t);
        let yr = self.solver.roots_at_x(x)?;
        yr.roots
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .ok_or(MahlerError::YDegreeZero)
    }
}

fn select_branch(roots: &[C]) -> Vec<C> {
    roots
        .iter()
        .copied()
        .filter(|y| y.norm() >= 1.0 - 1e-9)
        .collect()
}

/// Construct the Deninger path of `p` over `contour`, deciding closure by
/// combining the exact torus analysis with numeric branch continuity
/// (constant branch cardinality along the contour).
pub fn deninger_path(p: &LaurentPoly, contour: CirclePath) -> Result<DeningerPath, MahlerError> {
    let (cleared, _) = p.clear_denominators();
    let solver = YSolver::new(&cleared)?;

    let mut branch = Vec::with_capacity(contour.samples.len());
    let mut counts = vec![];
    for &t in &contour.samples {
        let x = contour.at(t);
        let yr = solver.roots_at_x(x)?;
        let sel = select_branch(&yr.roots);
        counts.push(sel.len());
        branch.push(sel);
    }
    let count0 = counts.first().copied().unwrap_or(0);
    let counts_constant = counts.iter().all(|&c| c == count0);

    // Exact torus information (unit contour only; the analysis is about
    // |x| = |y| = 1, which matches the standard Deninger contour).
    let is_unit_contour = contour.center.norm() < 1e-14 && (contour.radius - 1.0).abs() < 1e-14;
    let (torus_pts, degenerate) = if is_unit_contour {
        match torus_intersections(&cleared)? {
            TorusOutcome::Points(pts) => (pts, false),
            TorusOutcome::Degenerate => (vec![], true),
        }
    } else {
        (vec![], false)
    };

    // Closed iff the branch cardinality never changes along the contour:
    // a transversal torus crossing forces a count change at the crossing,
    // while tangential touches keep it constant.
    let closed = counts_constant && count0 > 0;

    Ok(DeningerPath {
        base: contour,
        poly: cleared,
        solver,
        branch,
        closed,
        torus_intersections: torus_pts,
        torus_degenerate: degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfam::{family, parse_poly, Family};
    use crate::rat::rint;
    use std::collections::BTreeMap;

    #[test]
    fn r_family_closed() {
        let r = family(Family::R, &rint(-1));
        let path = deninger_path(&r, CirclePath::unit()).unwrap();
        assert!(path.closed);
        assert!(path.torus_degenerate); // reciprocal: resultant route degenerates
        // exactly one branch root everywhere, with |y| > 1
        for sel in &path.branch {
            assert_eq!(sel.len(), 1);
            assert!(sel[0].norm() > 1.0);
        }
    }

    #[test]
    fn qshift_closed_in_theorem_range() {
        for kk in [-2i64, 20] {
            let q = family(Family::Qshift, &rint(kk));
            let path = deninger_path(&q, CirclePath::unit()).unwrap();
            assert!(path.closed, "k = {kk}");
            assert!(!path.torus_degenerate);
        }
    }

    #[test]
    fn trivial_branch() {
        // y - 2x: |y| = 2 everywhere on |x| = 1
        let p = parse_poly("y-2*x", &BTreeMap::new()).unwrap();
        let path = deninger_path(&p, CirclePath::unit()).unwrap();
        assert!(path.closed);
        for sel in &path.branch {
            assert_eq!(sel.len(), 1);
            assert!((sel[0].norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn open_path_detected() {
        // x + y + 5/2: root y = -x - 5/2 has |y| crossing 1 on |x|=1
        // (|y| ranges over [3/2, 7/2] ... actually stays > 1; use a case that
        // genuinely crosses: y = -x - 1/2, |y| in [-1/2..]: crosses 1)
        let p = parse_poly("2*y+2*x+1", &BTreeMap::new()).unwrap();
        let path = deninger_path(&p, CirclePath::unit()).unwrap();
        assert!(!path.closed);
    }
}
