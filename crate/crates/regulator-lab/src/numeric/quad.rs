//! Quadrature: globally adaptive Gauss-Legendre panels (with pre-split
//! breakpoints) and tanh-sinh rules for endpoint singularities.

use super::C;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("quadrature failed to reach tolerance {tol:e} within {panels} panels (error estimate {err:e})")]
    Budget { tol: f64, err: f64, panels: usize },
    #[error("non-finite integrand value at t = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResultC {
    pub value: C,
    pub error: f64,
    pub evals: usize,
}

const GL_N: usize = 15;

fn gl_nodes() -> &'static ([f64; GL_N], [f64; GL_N]) {
    static NODES: OnceLock<([f64; GL_N], [f64; GL_N])> = OnceLock::new();
    NODES.get_or_init(|| {
        let mut xs = [0.0; GL_N];
        let mut ws = [0.0; GL_N];
        let n = GL_N;
        for i in 0..n {
            // Newton iteration on P_n from the Chebyshev estimate
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

/// P_n(x) and P_n'(x) by recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl_panel(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (xs, ws) = gl_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..GL_N {
        acc += ws[i] * f(mid + half * xs[i]);
    }
    acc * half
}

fn gl_panel_c(f: &mut dyn FnMut(f64) -> C, a: f64, b: f64) -> C {
    let (xs, ws) = gl_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = C::new(0.0, 0.0);
    for i in 0..GL_N {
        acc += ws[i] * f(mid + half * xs[i]);
    }
    acc * half
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V, // refined (two-half) estimate
    err: f64,
}

macro_rules! adaptive_impl {
    ($name:ident, $vty:ty, $panel:ident, $norm:expr, $zero:expr, $resty:ident) => {
        /// Globally adaptive integration of `f` over [a, b], panels pre-split
        /// at `breakpoints`. The worst panel is bisected until the summed
        /// error estimate reaches `tol` or the panel budget is exhausted.
        pub fn $name(
            f: &mut dyn FnMut(f64) -> $vty,
            a: f64,
            b: f64,
            breakpoints: &[f64],
            tol: f64,
            max_panels: usize,
        ) -> Result<$resty, QuadError> {
            let mut evals = 0usize;
            let mut edges: Vec<f64> = vec![a];
            for &t in breakpoints {
                if t > a + 1e-15 && t < b - 1e-15 {
                    edges.push(t);
                }
            }
            edges.push(b);
            edges.sort_by(f64::total_cmp);
            edges.dedup_by(|x, y| (*x - *y).abs() < 1e-14);

            let mut make = |a: f64, b: f64, evals: &mut usize| -> Result<Panel<$vty>, QuadError> {
                let whole = $panel(f, a, b);
                let m = 0.5 * (a + b);
                let split = $panel(f, a, m) + $panel(f, m, b);
                *evals += 3 * GL_N;
                let err = $norm(whole - split);
                if !err.is_finite() {
                    return Err(QuadError::NonFinite(m));
                }
                Ok(Panel {
                    a,
                    b,
                    value: split,
                    err,
                })
            };

            let mut panels: Vec<Panel<$vty>> = vec![];
            for w in edges.windows(2) {
                panels.push(make(w[0], w[1], &mut evals)?);
            }
            loop {
                let total_err: f64 = panels.iter().map(|p| p.err).sum();
                if total_err <= tol {
                    break;
                }
                if panels.len() >= max_panels {
                    return Err(QuadError::Budget {
                        tol,
                        err: total_err,
                        panels: panels.len(),
                    });
                }
                // deterministic worst-panel selection (ties by left edge)
                let mut worst = 0usize;
                for i in 1..panels.len() {
                    if panels[i].err > panels[worst].err
                        || (panels[i].err == panels[worst].err && panels[i].a < panels[worst].a)
                    {
                        worst = i;
                    }
                }
                let Panel { a, b, .. } = panels[worst];
                let m = 0.5 * (a + b);
                if m - a < 1e-15 * (1.0 + a.abs()) {
                    // cannot split further; accept this panel's estimate
                    panels[worst].err = 0.0;
                    continue;
                }
                let left = make(a, m, &mut evals)?;
                let right = make(m, b, &mut evals)?;
                panels[worst] = left;
                panels.push(right);
            }
            let mut value = $zero;
            let mut error = 0.0;
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            for p in &panels {
                value += p.value;
                error += p.err;
            }
            Ok($resty {
                value,
                error,
                evals,
            })
        }
    };
}

adaptive_impl!(adaptive, f64, gl_panel, f64::abs, 0.0f64, QuadResult);
adaptive_impl!(
    adaptive_c,
    C,
    gl_panel_c,
    |v: C| v.norm(),
    C::new(0.0, 0.0),
    QuadResultC
);

/// Node data for one tanh-sinh abscissa: distance from the nearer endpoint
/// (computed without cancellation) and the weight.
#[inline]
fn ts_node(kh: f64) -> (f64, f64) {
    let w = std::f64::consts::FRAC_PI_2 * kh.sinh();
    let em = (-2.0 * w.abs()).exp();
    // 1 - |tanh(w)| = 2 e^{-2|w|} / (1 + e^{-2|w|})
    let one_minus_t = 2.0 * em / (1.0 + em);
    // 1 / cosh(w)^2 = 4 e^{-2|w|} / (1 + e^{-2|w|})^2
    let sech2 = 4.0 * em / ((1.0 + em) * (1.0 + em));
    let weight = std::f64::consts::FRAC_PI_2 * kh.cosh() * sech2;
    (one_minus_t, weight)
}

/// Tanh-sinh quadrature on (a, b): spectrally accurate for analytic
/// integrands and for integrable endpoint singularities (inverse square
/// roots, logarithms). Abscissae are positioned relative to the nearer
/// endpoint so singular tails are sampled accurately; non-finite integrand
/// values in the extreme tails are treated as zero.
pub fn tanh_sinh(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> QuadResult {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut prev = f64::NAN;
    let mut value = 0.0;
    let mut error = f64::INFINITY;
    let mut evals = 0usize;
    for level in 0..=12 {
        let h = 1.0 / (1 << level) as f64;
        let kmax = (6.5 / h).ceil() as i64;
        let mut sum = 0.0;
        for k in -kmax..=kmax {
            let kh = k as f64 * h;
            let (one_minus_t, weight) = ts_node(kh);
            if weight < 1e-290 || one_minus_t * half.abs() < 1e-280 {
                continue;
            }
            let x = if k == 0 {
                mid
            } else if k > 0 {
                b - half * one_minus_t
            } else {
                a + half * one_minus_t
            };
            let v = f(x);
            evals += 1;
            if v.is_finite() {
                sum += weight * v;
            }
        }
        let cur = sum * h * half;
        if level > 0 {
            error = (cur - prev).abs();
            value = cur;
            if error <= tol * (1.0 + cur.abs()) && level >= 3 {
                return QuadResult { value, error, evals };
            }
        }
        prev = cur;
    }
    QuadResult { value, error, evals }
}

/// Complex-valued tanh-sinh on (a, b) with the same node scheme.
pub fn tanh_sinh_c(f: &mut dyn FnMut(f64) -> C, a: f64, b: f64, tol: f64) -> QuadResultC {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut prev = C::new(f64::NAN, f64::NAN);
    let mut value = C::new(0.0, 0.0);
    let mut error = f64::INFINITY;
    let mut evals = 0usize;
    for level in 0..=12 {
        let h = 1.0 / (1 << level) as f64;
        let kmax = (6.5 / h).ceil() as i64;
        let mut sum = C::new(0.0, 0.0);
        for k in -kmax..=kmax {
            let kh = k as f64 * h;
            let (one_minus_t, weight) = ts_node(kh);
            if weight < 1e-290 || one_minus_t * half.abs() < 1e-280 {
                continue;
            }
            let x = if k == 0 {
                mid
            } else if k > 0 {
                b - half * one_minus_t
            } else {
                a + half * one_minus_t
            };
            let v = f(x);
            evals += 1;
            if v.re.is_finite() && v.im.is_finite() {
                sum += weight * v;
            }
        }
        let cur = sum * h * half;
        if level > 0 {
            error = (cur - prev).norm();
            value = cur;
            if error <= tol * (1.0 + cur.norm()) && level >= 3 {
                return QuadResultC { value, error, evals };
            }
        }
        prev = cur;
    }
    QuadResultC { value, error, evals }
}

/// Integral of f over (-inf, a] via the substitution x = a - u/(1-u),
/// u in (0,1), with tanh-sinh absorbing both endpoint behaviours.
pub fn tanh_sinh_to_neg_infinity(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    tol: f64,
) -> QuadResult {
    tanh_sinh(
        &mut |u: f64| {
            let one_minus = 1.0 - u;
            let x = a - u / one_minus;
            f(x) / (one_minus * one_minus)
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_smooth() {
        let r = adaptive(&mut |x: f64| x.sin(), 0.0, std::f64::consts::PI, &[], 1e-12, 1000)
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_kink_exact_value() {
        // integral of max(sin 2 pi t, 0) over [0,1] = 1/pi, kink at t = 1/2
        let f = |t: f64| (std::f64::consts::TAU * t).sin().max(0.0);
        let r = adaptive(&mut f.clone(), 0.0, 1.0, &[0.5], 1e-12, 20000).unwrap();
        assert!((r.value - 1.0 / std::f64::consts::PI).abs() < 1e-11, "got {}", r.value);
    }

    #[test]
    fn adaptive_log_endpoint_singularity() {
        // Jensen: integral over [0,1] of log|e^{2 pi i t} - 1| dt = 0,
        // with log singularities at both endpoints
        let f = |t: f64| (C::new(0.0, std::f64::consts::TAU * t).exp() - C::new(1.0, 0.0)).norm().ln();
        let r = adaptive(&mut f.clone(), 0.0, 1.0, &[], 1e-9, 40000).unwrap();
        assert!(r.value.abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn tanh_sinh_inverse_sqrt() {
        // integral_0^1 dx/sqrt(x) = 2
        let r = tanh_sinh(&mut |x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((r.value - 2.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn tanh_sinh_log_singularity() {
        // integral_0^1 ln(x) dx = -1
        let r = tanh_sinh(&mut |x: f64| x.ln(), 0.0, 1.0, 1e-12);
        assert!((r.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn improper_tail() {
        // integral_{-inf}^{-1} dx/x^2 = 1
        let r = tanh_sinh_to_neg_infinity(&mut |x: f64| 1.0 / (x * x), -1.0, 1e-12);
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn refinement_monotonicity() {
        let f = |t: f64| (3.0 * t).cos() * (t * t + 0.5).ln();
        let coarse = adaptive(&mut f.clone(), 0.0, 2.0, &[], 1e-6, 10000).unwrap();
        let fine = adaptive(&mut f.clone(), 0.0, 2.0, &[], 5e-7, 10000).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error + 1e-15);
    }
}
