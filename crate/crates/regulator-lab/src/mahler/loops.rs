//! Loop integrals of the holomorphic differentials pulled back to the
//! Deninger cycles: integrands of the form N(x) dx / W with
//! W = 2 a(x) y1 + b(x) = +/- sqrt(b^2 - 4ac), where y1 is the outer
//! (|y| >= 1) branch of the y-quadratic a y^2 + b y + c.
//!
//! Tracking W through the curve's own branch keeps the square root
//! continuous along the loop; isolated radicand zeros on the contour
//! (boundary parameter values) are removed by a quadratic substitution
//! which makes the integrand analytic again.

use super::MahlerError;
use crate::numeric::quad::{self, QuadResultC};
use crate::numeric::roots;
use crate::numeric::{C, TWO_PI};
use crate::rat::{rat_to_f64, rint, Rat};
use crate::unipoly::UniPoly;
use num_traits::One;

/// Which loop integral of the path analysis to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    /// Pullback of the first holomorphic differential along the genus-2
    /// Deninger cycle: integrand (x+1)^2 dx / sqrt(B^2 - 4x^4) over
    /// x = e^{2 pi i t} - 1.
    F1PullbackOmega1,
    /// Pullback of the second differential over the same cycle:
    /// (x^2-1)/2 dx / sqrt(B^2 - 4x^4).
    F2PullbackOmega2,
    /// omega_1 over the Deninger cycle of the three-term reciprocal family:
    /// dx / sqrt((x^4+1) - 2k(x^3+x) + (k^2-4k-2)x^2) over x = e^{2 pi i t}.
    PkOmega1,
    /// omega_2 over the Deninger cycle of the four-term reciprocal family:
    /// dx / (2 sqrt((x^2+(k-4)x+1)^2 - 4x^2)) over x = e^{2 pi i t}.
    RkOmega2,
}

struct LoopSpec {
    /// y-quadratic coefficients a(x) y^2 + b(x) y + c(x).
    a: UniPoly,
    b: UniPoly,
    c: UniPoly,
    /// Circle center in the x-plane (radius 1).
    center: C,
    /// Numerator N(x).
    numer: Box<dyn Fn(C) -> C + Sync>,
}

fn spec(kind: LoopKind, k: &Rat) -> LoopSpec {
    let kk = k.clone();
    match kind {
        LoopKind::F1PullbackOmega1 | LoopKind::F2PullbackOmega2 => {
            // Q_k(x, y) = y^2 + B(x) y + x^4, B = x^4 + kx^3 + 2kx^2 + kx + 1
            let b = UniPoly::new(vec![
                Rat::one(),
                kk.clone(),
                kk.clone() * rint(2),
                kk.clone(),
                Rat::one(),
            ]);
            let c = UniPoly::monomial(4, Rat::one());
            let numer: Box<dyn Fn(C) -> C + Sync> = if kind == LoopKind::F1PullbackOmega1 {
                Box::new(|x: C| (x + 1.0) * (x + 1.0))
            } else {
                Box::new(|x: C| (x * x - 1.0) * 0.5)
            };
            LoopSpec {
                a: UniPoly::one(),
                b,
                c,
                center: C::new(-1.0, 0.0),
                numer,
            }
        }
        LoopKind::PkOmega1 => {
            // (x+1) y^2 + ((x+1)^2 - kx) y + x(x+1)
            let a = UniPoly::from_i64(&[1, 1]);
            let b = UniPoly::new(vec![Rat::one(), rint(2) - kk.clone(), Rat::one()]);
            let c = UniPoly::from_i64(&[0, 1, 1]);
            LoopSpec {
                a,
                b,
                c,
                center: C::new(0.0, 0.0),
                numer: Box::new(|_| C::new(1.0, 0.0)),
            }
        }
        LoopKind::RkOmega2 => {
            // x y^2 + (x^2 + (k-4)x + 1) y + x
            let a = UniPoly::from_i64(&[0, 1]);
            let b = UniPoly::new(vec![Rat::one(), kk - rint(4), Rat::one()]);
            let c = UniPoly::from_i64(&[0, 1]);
            LoopSpec {
                a,
                b,
                c,
                center: C::new(0.0, 0.0),
                numer: Box::new(|_| C::new(0.5, 0.0)),
            }
        }
    }
}

impl LoopSpec {
    fn x_at(&self, t: f64) -> C {
        self.center + C::new(0.0, TWO_PI * t).exp()
    }

    fn velocity(&self, t: f64) -> C {
        C::new(0.0, TWO_PI) * C::new(0.0, TWO_PI * t).exp()
    }

    /// W(t) = 2 a y1 + b with y1 the larger-modulus root.
    fn w_at(&self, x: C) -> C {
        let a = self.a.eval_c(x);
        let b = self.b.eval_c(x);
        let c = self.c.eval_c(x);
        if a.norm() < 1e-290 {
            // degree drop: single root y = -c/b; W limits to -b
            return -b;
        }
        let rts = roots::quadratic_roots(a, b, c);
        let y1 = if rts[0].norm() >= rts[1].norm() {
            rts[0]
        } else {
            rts[1]
        };
        2.0 * a * y1 + b
    }

    fn integrand(&self, t: f64) -> C {
        let x = self.x_at(t);
        let w = self.w_at(x);
        (self.numer)(x) * self.velocity(t) / w
    }

    /// Parameter values where the radicand b^2 - 4ac vanishes on the loop.
    fn singular_params(&self) -> Result<Vec<f64>, MahlerError> {
        let disc = self.b.mul(&self.b).sub(&self.a.mul(&self.c).scale(&rint(4)));
        if disc.is_zero() {
            return Err(MahlerError::BranchCollision { t: f64::NAN });
        }
        let sf = disc.squarefree_part();
        let cs: Vec<C> = sf
            .coeffs()
            .iter()
            .map(|c| C::new(rat_to_f64(c), 0.0))
            .collect();
        let mut ts = vec![];
        for r in roots::all_roots(&cs)? {
            let rel = r - self.center;
            if (rel.norm() - 1.0).abs() < 1e-8 {
                let mut t = rel.arg() / TWO_PI;
                if t < 0.0 {
                    t += 1.0;
                }
                ts.push(t);
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
        Ok(ts)
    }
}

/// Loop integral of the selected differential at parameter k, with the
/// square-root branch carried continuously along the cycle. Radicand zeros
/// on the loop are integrable; each adjacent panel is regularised by the
/// substitution t = t_s +/- tau^2.
pub fn loop_differential_integral(
    kind: LoopKind,
    k: &Rat,
    tol: f64,
) -> Result<QuadResultC, MahlerError> {
    let sp = spec(kind, k);
    let sing = sp.singular_params()?;

    // panel edges: singular points, or [0,1] when none
    let mut edges: Vec<f64> = vec![];
    if sing.is_empty() {
        edges.push(0.0);
        edges.push(1.0);
    } else {
        edges.extend(sing.iter().copied());
        edges.push(sing[0] + 1.0);
    }

    let mut total = C::new(0.0, 0.0);
    let mut err = 0.0f64;
    let mut evals = 0usize;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let lo_sing = sing.iter().any(|&s| (s - lo).abs() < 1e-9 || (s + 1.0 - lo).abs() < 1e-9);
        let hi_sing = sing.iter().any(|&s| (s - hi).abs() < 1e-9 || (s + 1.0 - hi).abs() < 1e-9);
        let panel_tol = tol / edges.len() as f64;
        let q = if !lo_sing && !hi_sing {
            quad::adaptive_c(&mut |t| sp.integrand(t), lo, hi, &[], panel_tol, 20_000)?
        } else {
            // split at the midpoint; regularise each singular end
            let mid = 0.5 * (lo + hi);
            let mut acc = C::new(0.0, 0.0);
            let mut e = 0.0;
            let mut ev = 0usize;
            if lo_sing {
                // t = lo + tau^2, dt = 2 tau dtau
                let top = (mid - lo).sqrt();
                let q = quad::adaptive_c(
                    &mut |tau| sp.integrand(lo + tau * tau) * (2.0 * tau),
                    0.0,
                    top,
                    &[],
                    panel_tol / 2.0,
                    20_000,
                )?;
                acc += q.value;
                e += q.error;
                ev += q.evals;
            } else {
                let q = quad::adaptive_c(&mut |t| sp.integrand(t), lo, mid, &[], panel_tol / 2.0, 20_000)?;
                acc += q.value;
                e += q.error;
                ev += q.evals;
            }
            if hi_sing {
                // t = hi - tau^2
                let top = (hi - mid).sqrt();
                let q = quad::adaptive_c(
                    &mut |tau| sp.integrand(hi - tau * tau) * (2.0 * tau),
                    0.0,
                    top,
                    &[],
                    panel_tol / 2.0,
                    20_000,
                )?;
                acc += q.value;
                e += q.error;
                ev += q.evals;
            } else {
                let q = quad::adaptive_c(&mut |t| sp.integrand(t), mid, hi, &[], panel_tol / 2.0, 20_000)?;
                acc += q.value;
                e += q.error;
                ev += q.evals;
            }
            QuadResultC {
                value: acc,
                error: e,
                evals: ev,
            }
        };
        total += q.value;
        err += q.error;
        evals += q.evals;
    }
    Ok(QuadResultC {
        value: total,
        error: err,
        evals,
    })
}

/// Real tanh-sinh evaluation of the segment integral
/// int_{e3}^{1} du / sqrt((1-u)(u+(k-2)/2)(u-e3)(u-e4)), the line-segment
/// representative of the omega_1 loop for k >= 17. Cross-validates the loop
/// route through an entirely different integral representation.
pub fn real_omega1_segment_integral(k: f64, tol: f64) -> f64 {
    assert!(k >= 17.0);
    let s = (k * k - 8.0 * k).sqrt();
    let e3 = (-k + s) / 4.0;
    let e4 = (-k - s) / 4.0;
    let f = move |u: f64| {
        let rad = (1.0 - u) * (u + (k - 2.0) / 2.0) * (u - e3) * (u - e4);
        if rad <= 0.0 {
            return 0.0;
        }
        1.0 / rad.sqrt()
    };
    let q = quad::tanh_sinh(&mut { f }, e3, 1.0, tol);
    q.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;

    #[test]
    fn p1_vanishes_for_negative_k() {
        let q = loop_differential_integral(LoopKind::F1PullbackOmega1, &rint(-5), 1e-10).unwrap();
        assert!(q.value.norm() < 1e-8, "got {:?}", q.value);
    }

    #[test]
    fn omega2_ratio_negative_k() {
        let k = rint(-5);
        let zq = loop_differential_integral(LoopKind::F2PullbackOmega2, &k, 1e-10).unwrap();
        let rq = loop_differential_integral(LoopKind::RkOmega2, &k, 1e-10).unwrap();
        let ratio = zq.value.norm() / rq.value.norm();
        assert!((ratio - 2.0).abs() < 1e-6, "ratio = {ratio}");
    }

    #[test]
    fn omega2_ratio_positive_k() {
        let k = rint(20);
        let zq = loop_differential_integral(LoopKind::F2PullbackOmega2, &k, 1e-10).unwrap();
        let rq = loop_differential_integral(LoopKind::RkOmega2, &k, 1e-10).unwrap();
        let ratio = zq.value.norm() / rq.value.norm();
        assert!((ratio - 1.0).abs() < 1e-6, "ratio = {ratio}");
    }

    #[test]
    fn omega1_matches_real_segment() {
        let k = rint(20);
        let loop_val = loop_differential_integral(LoopKind::F1PullbackOmega1, &k, 1e-10)
            .unwrap()
            .value
            .norm();
        let seg = real_omega1_segment_integral(20.0, 1e-12);
        assert!(
            (loop_val - seg).abs() < 1e-6 * seg.max(1.0),
            "loop {loop_val} vs segment {seg}"
        );
    }

    #[test]
    fn omega1_ratio_positive_k() {
        let k = rint(20);
        let zq = loop_differential_integral(LoopKind::F1PullbackOmega1, &k, 1e-10).unwrap();
        let pq = loop_differential_integral(LoopKind::PkOmega1, &k, 1e-10).unwrap();
        let ratio = zq.value.norm() / pq.value.norm();
        assert!((ratio - 1.0).abs() < 1e-6, "ratio = {ratio}");
    }
}
