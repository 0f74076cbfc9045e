//! Special functions: Legendre polynomials, Gauss-Legendre rules,
//! spherical Bessel functions and the (l1 l2 L; 0 0 0) Wigner 3j symbol.

use crate::Real;

/// Returns `(P_n(x), P_n'(x))` by the three-term recurrence.
///
/// At `x = ±1` the derivative uses the closed form `(±1)^(n+1) n(n+1)/2`.
pub fn legendre_and_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    if n == 0 {
        return (T::one(), T::zero());
    }
    let mut p_prev = T::one();
    let mut p = x;
    for k in 1..n {
        let kf = T::of(k);
        let next = ((T::of(2 * k + 1)) * x * p - kf * p_prev) / (kf + T::one());
        p_prev = p;
        p = next;
    }
    let one = T::one();
    let nf = T::of(n);
    let dp = if x == one || x == -one {
        let sign = if x == one || (n + 1) % 2 == 0 { one } else { -one };
        sign * nf * (nf + one) / T::lit(2.0)
    } else {
        nf * (x * p - p_prev) / (x * x - one)
    };
    (p, dp)
}

pub fn legendre<T: Real>(n: usize, x: T) -> T {
    legendre_and_derivative(n, x).0
}

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let tol = T::epsilon() * T::lit(4.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, refined by Newton.
        let mut x = (T::PI() * (T::of(i) + T::lit(0.75)) / (T::of(n) + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Spherical Bessel function of the first kind `j_l(x)` for `x >= 0`.
pub fn spherical_bessel_j<T: Real>(l: usize, x: T) -> T {
    let lf = T::of(l);
    if x < lf + T::lit(0.5) || x < T::lit(0.5) {
        return spherical_bessel_series(l, x);
    }
    let (s, c) = (x.sin(), x.cos());
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let j1 = s / (x * x) - c / x;
    // Upward recurrence is stable for x > l.
    let (mut jm, mut j) = (j0, j1);
    for k in 1..l {
        let next = T::of(2 * k + 1) / x * j - jm;
        jm = j;
        j = next;
    }
    j
}

fn spherical_bessel_series<T: Real>(l: usize, x: T) -> T {
    // j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    let mut prefactor = T::one();
    for k in 0..l {
        prefactor *= x / T::of(2 * k + 3);
    }
    // prefactor now holds x^l / (2l+1)!! times 1 (the (2l+1)!! built as 3*5*...(2l+1)).
    let half_x2 = x * x / T::lit(2.0);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..60 {
        term = -term * half_x2 / (T::of(k) * T::of(2 * l + 2 * k + 1));
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Wigner 3j symbol `(a b c; 0 0 0)`.
pub fn three_j_zero(a: usize, b: usize, c: usize) -> f64 {
    let j = a + b + c;
    if j % 2 == 1 || c > a + b || a > b + c || b > a + c {
        return 0.0;
    }
    let g = j / 2;
    let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
    let root = (factorial(j - 2 * a) * factorial(j - 2 * b) * factorial(j - 2 * c) / factorial(j + 1)).sqrt();
    sign * root * factorial(g) / (factorial(g - a) * factorial(g - b) * factorial(g - c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_orders() {
        let x = 0.3f64;
        assert!((legendre(2, x) - (3.0 * x * x - 1.0) / 2.0).abs() < 1e-15);
        let (p3, d3) = legendre_and_derivative(3, x);
        assert!((p3 - (5.0 * x.powi(3) - 3.0 * x) / 2.0).abs() < 1e-15);
        assert!((d3 - (15.0 * x * x - 3.0) / 2.0).abs() < 1e-14);
        let (_, d_end) = legendre_and_derivative(4, -1.0f64);
        assert_eq!(d_end, -10.0);
        let (_, d_end) = legendre_and_derivative(5, -1.0f64);
        assert_eq!(d_end, 15.0);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre::<f64>(7);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((integral - 2.0 / 13.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bessel_matches_closed_forms() {
        for &x in &[0.01f64, 0.3, 0.9, 2.0, 7.5, 40.0] {
            let (s, c) = (x.sin(), x.cos());
            let j0 = s / x;
            let j1 = s / (x * x) - c / x;
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            let tol = 1e-12;
            assert!((spherical_bessel_j(0, x) - j0).abs() < tol);
            if x > 0.2 {
                assert!((spherical_bessel_j(1, x) - j1).abs() < tol, "j1({x})");
            }
            if x > 1.0 {
                assert!((spherical_bessel_j(2, x) - j2).abs() < tol, "j2({x})");
            }
        }
        // j_2(x) = x^2/15 (1 - x^2/14 + ...)
        assert!((spherical_bessel_j(2, 1e-3f64) - 1e-6 / 15.0 * (1.0 - 1e-6 / 14.0)).abs() < 1e-20);
        assert_eq!(spherical_bessel_j(0, 0.0f64), 1.0);
        assert_eq!(spherical_bessel_j(1, 0.0f64), 0.0);
    }

    #[test]
    fn bessel_zero_of_j1() {
        assert!(spherical_bessel_j(1, 4.493_409_457_909_064f64).abs() < 1e-14);
    }

    #[test]
    fn three_j_values() {
        assert!((three_j_zero(0, 0, 0) - 1.0).abs() < 1e-15);
        assert!((three_j_zero(1, 1, 0).powi(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((three_j_zero(1, 1, 2).powi(2) - 2.0 / 15.0).abs() < 1e-15);
        assert!((three_j_zero(2, 2, 2).powi(2) - 2.0 / 35.0).abs() < 1e-15);
        assert!((three_j_zero(2, 2, 4).powi(2) - 2.0 / 35.0).abs() < 1e-15);
        assert_eq!(three_j_zero(1, 1, 1), 0.0);
        // sum_L (2L+1) (l l L;000)^2 = 1
        let s: f64 = (0..=4).map(|big_l| (2 * big_l + 1) as f64 * three_j_zero(2, 2, big_l).powi(2)).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }
}
