//! Gauss-Legendre rules, generic over the scalar.

use crate::scalar::{real, Real};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    let nf = T::from_usize(n).unwrap();
    for i in 0..n {
        // Tricomi-style initial guess
        let k = T::from_usize(i).unwrap() + real(0.75);
        let mut x = (T::PI() * k / (nf + real(0.5))).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let step = p / d;
            x = x - step;
            if step.abs() <= T::epsilon() * real(4.0) * (T::one() + x.abs()) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = real::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((kf + kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    if n == 1 {
        return (x, T::one());
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Nodes and weights on [a, b].
pub fn gauss_legendre_on<T: Real>(n: usize, a: T, b: T) -> Vec<(T, T)> {
    let half = real::<T>(0.5);
    let mid = (a + b) * half;
    let rad = (b - a) * half;
    gauss_legendre::<T>(n)
        .into_iter()
        .map(|(x, w)| (mid + rad * x, w * rad))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        // 8-point rule is exact through degree 15
        let rule = gauss_legendre::<f64>(8);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(14)).sum();
        assert!((integral - 2.0 / 15.0).abs() < 1e-14);
        let mass: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((mass - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_interval() {
        let rule = gauss_legendre_on::<f64>(16, 0.0, 3.0);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.exp()).sum();
        assert!((integral - (3.0f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn large_rule_stays_accurate() {
        let rule = gauss_legendre::<f64>(128);
        let integral: f64 = rule.iter().map(|&(x, w)| w * (5.0 * x).cos()).sum();
        assert!((integral - 2.0 * (5.0f64).sin() / 5.0).abs() < 1e-13);
    }
}
