use std::sync::OnceLock;

pub(crate) const ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub(crate) fn gauss_legendre_16() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(gauss_legendre::<ORDER>)
}

fn gauss_legendre<const N: usize>() -> [(f64, f64); N] {
    let mut rule = [(0.0, 0.0); N];
    let n = N as f64;
    for (i, slot) in rule.iter_mut().enumerate() {
        // Chebyshev guess, then Newton on P_N.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=N {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        *slot = ((1.0 - x) / 2.0, w / 2.0);
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// ∫_{t0}^{t1} f with the 16-point rule.
pub(crate) fn integrate(t0: f64, t1: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = t1 - t0;
    gauss_legendre_16().iter().map(|&(x, w)| w * f(t0 + h * x)).sum::<f64>() * h
}

/// Adaptive 16-point rule: bisects until the halves agree with the whole to
/// `rel·(1 + |value|)` or the depth limit is reached.
pub(crate) fn integrate_adaptive(t0: f64, t1: f64, f: &impl Fn(f64) -> f64, rel: f64) -> f64 {
    fn go(a: f64, b: f64, whole: f64, f: &impl Fn(f64) -> f64, rel: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (integrate(a, m, f), integrate(m, b, f));
        if depth == 0 || (l + r - whole).abs() <= rel * (1.0 + whole.abs()) {
            l + r
        } else {
            go(a, m, l, f, rel, depth - 1) + go(m, b, r, f, rel, depth - 1)
        }
    }
    go(t0, t1, integrate(t0, t1, f), f, rel, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one_and_integrate_polynomials() {
        let s: f64 = gauss_legendre_16().iter().map(|p| p.1).sum();
        assert!((s - 1.0).abs() < 1e-14);
        for k in 0..32 {
            let v = integrate(0.0, 1.0, |t| t.powi(k));
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-13, "degree {k}");
        }
        assert!((integrate(0.0, std::f64::consts::PI, f64::sin) - 2.0).abs() < 1e-13);
        // sqrt has a derivative singularity at 0
        let v = integrate_adaptive(0.0, 1.0, &|t: f64| t.sqrt(), 1e-15);
        assert!((v - 2.0 / 3.0).abs() < 1e-13);
    }
}
