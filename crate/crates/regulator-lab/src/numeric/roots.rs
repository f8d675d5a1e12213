//! Complex polynomial roots: closed forms for low degree, Aberth-Ehrlich
//! simultaneous iteration above, with Newton polishing and residual bounds.

use super::C;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootError {
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("root iteration failed to converge after {0} iterations")]
    NonConvergence(usize),
}

/// Roots of a dense complex polynomial, ascending coefficients.
/// Leading zeros are trimmed; returns exactly `deg` roots (with multiplicity).
pub fn all_roots(coeffs: &[C]) -> Result<Vec<C>, RootError> {
    let mut cs: Vec<C> = coeffs.to_vec();
    while cs.last().map_or(false, |c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.is_empty() {
        return Err(RootError::ZeroPolynomial);
    }
    // strip roots at the origin
    let mut zeros_at_origin = 0usize;
    while cs.first().map_or(false, |c| c.norm() == 0.0) {
        cs.remove(0);
        zeros_at_origin += 1;
    }
    let deg = cs.len() - 1;
    let mut roots = match deg {
        0 => vec![],
        1 => vec![-cs[0] / cs[1]],
        2 => quadratic_roots(cs[2], cs[1], cs[0]).to_vec(),
        _ => aberth(&cs)?,
    };
    for r in &mut roots {
        *r = polish(&cs, *r);
    }
    roots.extend(std::iter::repeat(C::new(0.0, 0.0)).take(zeros_at_origin));
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Numerically stable quadratic formula for a z^2 + b z + c.
pub fn quadratic_roots(a: C, b: C, c: C) -> [C; 2] {
    let disc = b * b - 4.0 * a * c;
    let sq = disc.sqrt();
    // q = -(b + sign * sq)/2 with sign chosen to avoid cancellation
    let q = if (b + sq).norm() >= (b - sq).norm() {
        -(b + sq) * 0.5
    } else {
        -(b - sq) * 0.5
    };
    if q.norm() == 0.0 {
        return [C::new(0.0, 0.0), -b / a];
    }
    [q / a, c / q]
}

fn eval_and_deriv(cs: &[C], z: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for c in cs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval_poly(cs: &[C], z: C) -> C {
    let mut p = C::new(0.0, 0.0);
    for c in cs.iter().rev() {
        p = p * z + c;
    }
    p
}

fn polish(cs: &[C], mut z: C) -> C {
    for _ in 0..4 {
        let (p, dp) = eval_and_deriv(cs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        let z2 = z - step;
        if (z2 - z).norm() <= 1e-16 * (1.0 + z.norm()) {
            return z2;
        }
        z = z2;
    }
    z
}

fn aberth(cs: &[C]) -> Result<Vec<C>, RootError> {
    let deg = cs.len() - 1;
    let lead = cs[deg];
    let radius = 1.0
        + cs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0f64, f64::max);
    let mut z: Vec<C> = (0..deg)
        .map(|i| {
            let angle = super::TWO_PI * (i as f64 + 0.35) / deg as f64 + 0.42;
            radius * 0.8 * C::new(0.0, angle).exp()
        })
        .collect();
    let max_iter = 400;
    for it in 0..max_iter {
        let mut max_step = 0.0f64;
        let snapshot = z.clone();
        for i in 0..deg {
            let (p, dp) = eval_and_deriv(cs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { C::new(1e-3, 0.0) };
            let mut sum = C::new(0.0, 0.0);
            for (j, zj) in snapshot.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 1e-300 {
                        sum += 1.0 / d;
                    }
                }
            }
            let denom = C::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-15 {
            return Ok(z);
        }
        // stagnation restart with a different phase
        if it == max_iter / 2 && max_step > 1e-8 {
            for (i, zi) in z.iter_mut().enumerate() {
                let angle = super::TWO_PI * (i as f64 + 0.15) / deg as f64 + 1.234;
                *zi = radius * 1.1 * C::new(0.0, angle).exp();
            }
        }
    }
    // accept if residuals are small relative to coefficient scale
    let scale: f64 = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let ok = z.iter().all(|&r| {
        let growth: f64 = (0..cs.len()).map(|j| r.norm().powi(j as i32)).sum();
        eval_poly(cs, r).norm() <= 1e-9 * scale * growth.max(1.0)
    });
    if ok {
        Ok(z)
    } else {
        Err(RootError::NonConvergence(max_iter))
    }
}
