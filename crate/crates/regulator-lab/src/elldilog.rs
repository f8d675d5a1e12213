//! The Bloch-Wigner dilogarithm, its elliptic q-series average, and the
//! linear extension to divisor classes.

use crate::ecurve::{DivisorClass, Uniformization};
use crate::numeric::{C, TWO_PI};

const PI2_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Bernoulli numbers B_0, B_2, ..., B_36 (B_1 handled separately).
const BERNOULLI_EVEN: [f64; 19] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
];

/// Complex dilogarithm Li_2 with argument reduction: inversion for |z| > 1,
/// reflection for Re z > 1/2, then either the direct power series (small
/// modulus) or the Bernoulli series in -log(1-z).
pub fn li2(z: C) -> C {
    if z.norm() < 1e-300 {
        return C::new(0.0, 0.0);
    }
    if (z - C::new(1.0, 0.0)).norm() < 1e-300 {
        return C::new(PI2_6, 0.0);
    }
    if z.norm() > 1.0 {
        // Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2
        let l = (-z).ln();
        return -li2(1.0 / z) - C::new(PI2_6, 0.0) - 0.5 * l * l;
    }
    if z.re > 0.5 {
        // Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        let one_minus = C::new(1.0, 0.0) - z;
        return C::new(PI2_6, 0.0) - z.ln() * one_minus.ln() - li2(one_minus);
    }
    if z.norm() <= 0.55 {
        // direct series
        let mut acc = C::new(0.0, 0.0);
        let mut zp = z;
        for n in 1..=90 {
            let term = zp / (n * n) as f64;
            acc += term;
            if term.norm() < 1e-19 {
                break;
            }
            zp *= z;
        }
        return acc;
    }
    // Bernoulli (Debye) series in u = -log(1-z):
    // Li2(z) = sum_{k>=0} B_k u^{k+1} / (k! (k+1))
    let u = -(C::new(1.0, 0.0) - z).ln();
    let mut acc = u - u * u * 0.25; // k = 0 and k = 1 terms (B_1 = -1/2)
    let u2 = u * u;
    let mut upow = u * u2; // u^{2m+1} starting at m = 1
    let mut fact = 2.0f64; // (2m)! starting at m = 1
    for m in 1..=18usize {
        let k = 2 * m;
        let coeff = BERNOULLI_EVEN[m] / (fact * (k + 1) as f64);
        let term = upow * coeff;
        acc += term;
        if term.norm() < 1e-19 {
            break;
        }
        upow *= u2;
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    acc
}

/// Bloch-Wigner dilogarithm: D(z) = Im Li_2(z) + arg(1 - z) log|z|.
/// Real-valued, continuous on C (0 at 0, 1 and infinity), antisymmetric
/// under conjugation.
pub fn bloch_wigner(z: C) -> f64 {
    if !z.re.is_finite() || !z.im.is_finite() {
        return 0.0;
    }
    if z.im == 0.0 {
        return 0.0;
    }
    let n = z.norm();
    if n < 1e-300 || n > 1e300 {
        return 0.0;
    }
    if (z - C::new(1.0, 0.0)).norm() < 1e-300 {
        return 0.0;
    }
    li2(z).im + (C::new(1.0, 0.0) - z).arg() * n.ln()
}

/// Elliptic dilogarithm value and recorded truncation tail bound at the
/// normalized coordinates (alpha, beta): sum over l of D(w q^l) with
/// w = e^{2 pi i (alpha + beta tau)}.
pub fn elliptic_dilog_norm(alpha: f64, beta: f64, unif: &Uniformization) -> (f64, f64) {
    let q = unif.q;
    let qn = q.norm();
    assert!(qn < 1.0, "|q| must be < 1");
    // l-range: |q|^(l-1) below 1e-18 (D(z) ~ |z| log|z| near 0)
    let lmax = (1.0 + 18.0 * std::f64::consts::LN_10 / (-qn.ln())).ceil() as i32 + 2;
    let z = C::new(alpha, 0.0) + C::new(beta, 0.0) * unif.tau;
    let w = (C::new(0.0, TWO_PI) * z).exp();
    let mut acc = bloch_wigner(w);
    let mut ql = C::new(1.0, 0.0);
    for _l in 1..=lmax {
        ql *= q;
        // D(w q^-l) = -D(q^l / w)
        acc += bloch_wigner(ql * w) - bloch_wigner(ql / w);
    }
    let tail = 8.0 * qn.powi(lmax) * (1.0 + (lmax as f64 + 4.0) * (-qn.ln())) / (1.0 - qn);
    (acc, tail)
}

/// Elliptic dilogarithm of a point given by its elliptic logarithm u.
pub fn elliptic_dilog(u: C, unif: &Uniformization) -> f64 {
    let (alpha, beta) = unif.normalize(u);
    elliptic_dilog_norm(alpha, beta, unif).0
}

/// Linear extension of the elliptic dilogarithm to divisor classes.
pub fn dilog_of_class(class: &DivisorClass, unif: &Uniformization) -> f64 {
    class
        .entries
        .iter()
        .map(|(_, coord, m)| *m as f64 * elliptic_dilog_norm(coord.0, coord.1, unif).0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecurve::periods::periods;
    use crate::ecurve::{curve, CurveFamily};
    use crate::numeric::{cr, quad};
    use crate::rat::rint;
    use rand::{Rng, SeedableRng};

    #[test]
    fn li2_known_values() {
        // Li2(1/2) = pi^2/12 - ln(2)^2/2
        let v = li2(cr(0.5));
        let expect = PI2_6 / 2.0 - 0.5 * 2f64.ln().powi(2);
        assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-15);
        // Li2(-1) = -pi^2/12
        let v = li2(cr(-1.0));
        assert!((v.re + PI2_6 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_wigner_vanishes_on_reals() {
        for x in [-3.0, -0.5, 0.0, 0.3, 1.0, 2.0, 117.0] {
            assert_eq!(bloch_wigner(cr(x)), 0.0);
        }
    }

    #[test]
    fn bloch_wigner_antisymmetry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let z = C::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let a = bloch_wigner(z);
            let b = bloch_wigner(z.conj());
            assert!((a + b).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn bloch_wigner_at_i_matches_defining_integral() {
        // D(i) = Catalan: oracle is the quadrature of the defining integral
        // -Im Int_0^i log(1-t) dt/t = Int_0^1 atan(s)/s ds
        let oracle = quad::adaptive(
            &mut |s: f64| {
                if s == 0.0 {
                    1.0
                } else {
                    s.atan() / s
                }
            },
            0.0,
            1.0,
            &[],
            1e-13,
            10_000,
        )
        .unwrap()
        .value;
        let v = bloch_wigner(C::new(0.0, 1.0));
        assert!((v - oracle).abs() < 1e-12, "D(i) = {v}, oracle = {oracle}");
    }

    #[test]
    fn five_term_relation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let x = C::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let y = C::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let one = cr(1.0);
            let xy = x * y;
            if (one - xy).norm() < 1e-3 {
                continue;
            }
            let sum = bloch_wigner(x)
                + bloch_wigner(y)
                + bloch_wigner((one - x) / (one - xy))
                + bloch_wigner(one - xy)
                + bloch_wigner((one - y) / (one - xy));
            assert!(sum.abs() < 1e-12, "five-term residual {sum} at x={x}, y={y}");
        }
    }

    #[test]
    fn elliptic_dilog_oddness_and_periodicity() {
        let e = curve(CurveFamily::Ek, &rint(-1)).unwrap();
        let unif = periods(&e).unwrap();
        let u = unif.from_normalized(0.13, 0.29);
        let d = elliptic_dilog(u, &unif);
        let dneg = elliptic_dilog(-u, &unif);
        assert!((d + dneg).abs() < 1e-12, "odd: {d} vs {dneg}");
        let d1 = elliptic_dilog(u + unif.omega1, &unif);
        let d2 = elliptic_dilog(u + unif.omega2, &unif);
        assert!((d - d1).abs() < 1e-10 && (d - d2).abs() < 1e-10);
        // vanishing at O and at 2-torsion
        assert!(elliptic_dilog(cr(0.0), &unif).abs() < 1e-12);
        let half = unif.from_normalized(0.5, 0.0);
        assert!(elliptic_dilog(half, &unif).abs() < 1e-10);
        let half2 = unif.from_normalized(0.5, 0.5);
        assert!(elliptic_dilog(half2, &unif).abs() < 1e-10);
    }

    #[test]
    fn truncation_tail_honest() {
        let e = curve(CurveFamily::Ek, &rint(-5)).unwrap();
        let unif = periods(&e).unwrap();
        let (v, tail) = elliptic_dilog_norm(0.21, 0.37, &unif);
        // doubling the l-range cannot move the value by more than the tail
        let q = unif.q;
        let lmax = (1.0 + 18.0 * std::f64::consts::LN_10 / (-q.norm().ln())).ceil() as i32 + 2;
        let z = C::new(0.21, 0.0) + C::new(0.37, 0.0) * unif.tau;
        let w = (C::new(0.0, TWO_PI) * z).exp();
        let mut acc = bloch_wigner(w);
        let mut ql = C::new(1.0, 0.0);
        for _l in 1..=(2 * lmax) {
            ql *= q;
            acc += bloch_wigner(ql * w) - bloch_wigner(ql / w);
        }
        assert!((acc - v).abs() <= tail.max(1e-17), "tail bound violated");
    }
}
