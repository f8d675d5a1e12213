//! Floating-point numerical kernels: polynomial root finding, adaptive
//! Gauss-Legendre and tanh-sinh quadrature, and scalar root scans.

pub mod quad;
pub mod roots;

use num_complex::Complex64;

pub type C = Complex64;

pub const TWO_PI: f64 = std::f64::consts::TAU;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn cr(re: f64) -> C {
    C::new(re, 0.0)
}

/// e^{2 pi i t}
pub fn unit_circle(t: f64) -> C {
    C::new(0.0, TWO_PI * t).exp()
}

/// Bisection for a sign change of `f` on [a, b]; refines to `xtol`.
pub fn bisect(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// All sign-change roots of `f` on [a, b] found by an n-point scan plus
/// bisection to `xtol`.
pub fn scan_sign_changes(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
    xtol: f64,
) -> Vec<f64> {
    let mut out = vec![];
    let mut prev_t = a;
    let mut prev_v = f(a);
    for i in 1..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        let v = f(t);
        if prev_v == 0.0 {
            out.push(prev_t);
        } else if v != 0.0 && prev_v.signum() != v.signum() {
            if let Some(r) = bisect(f, prev_t, t, xtol) {
                out.push(r);
            }
        }
        prev_t = t;
        prev_v = v;
    }
    if prev_v == 0.0 {
        out.push(prev_t);
    }
    out.dedup_by(|x, y| (*x - *y).abs() < 10.0 * xtol);
    out
}

/// Local minima of `f` on [a, b] below `threshold`, polished by golden-section
/// search. Catches zeros that touch without a sign change.
pub fn scan_minima_below(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
    threshold: f64,
    xtol: f64,
) -> Vec<(f64, f64)> {
    let h = (b - a) / n as f64;
    let vals: Vec<f64> = (0..=n).map(|i| f(a + h * i as f64)).collect();
    let mut out = vec![];
    for i in 1..n {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && vals[i] < threshold {
            let (t, v) = golden_min(f, a + h * (i - 1) as f64, a + h * (i + 1) as f64, xtol);
            out.push((t, v));
        }
    }
    out
}

fn golden_min(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_cubic() {
        let r = bisect(&mut |x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn scan_finds_all_roots() {
        let roots = scan_sign_changes(&mut |x| (x * x - 1.0) * (x - 0.3), -2.0, 2.0, 512, 1e-13);
        assert_eq!(roots.len(), 3);
        assert!((roots[0] + 1.0).abs() < 1e-11);
        assert!((roots[1] - 0.3).abs() < 1e-11);
        assert!((roots[2] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn minima_scan_finds_touch() {
        let m = scan_minima_below(&mut |x: f64| (x - 0.5).powi(2), 0.0, 1.0, 128, 0.1, 1e-12);
        assert_eq!(m.len(), 1);
        assert!((m[0].0 - 0.5).abs() < 1e-6);
        assert!(m[0].1 < 1e-10);
    }
}
