//! Cardinal sine and its derivatives.

use std::f64::consts::PI;

use crate::C64;

/// Normalized cardinal sine `sin(πx)/(πx)`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    let t = PI * x;
    if x.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// `d`-th derivative of `sinc` at `t`.
///
/// Equivalently `∫_{-1/2}^{1/2} (2πiξ)^d e^{2πitξ} dξ`, which is real.
/// Uses the Taylor series near the origin and upward recursion in `d`
/// (integration by parts) elsewhere.
pub fn sinc_derivative(d: u32, t: f64) -> f64 {
    if d == 0 {
        return sinc(t);
    }
    if t.abs() < f64::max(1.0, d as f64 / 2.0) {
        sinc_derivative_series(d, t)
    } else {
        sinc_derivative_recursion(d, t)
    }
}

fn sinc_derivative_series(d: u32, t: f64) -> f64 {
    // sinc(t) = Σ_k (-1)^k (πt)^{2k} / (2k+1)!
    let d = d as usize;
    let mut sum = 0.0;
    let k0 = d.div_ceil(2);
    for k in k0..k0 + 200 {
        let p = 2 * k;
        // (-1)^k π^{2k} p!/(p-d)! t^{p-d} / (p+1)!
        //   = (-1)^k π^{2k} t^{p-d} / ((p+1) (p-d)!)
        let mut term = PI.powi(p as i32) / (p as f64 + 1.0);
        for j in 1..=(p - d) {
            term *= t / j as f64;
        }
        if k % 2 == 1 {
            term = -term;
        }
        sum += term;
        if k > k0 + 4 && term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn sinc_derivative_recursion(d: u32, t: f64) -> f64 {
    let e_plus = C64::from_polar(1.0, PI * t);
    let e_minus = e_plus.conj();
    let denom = C64::new(0.0, 2.0 * PI * t);
    let mut prev = sinc(t);
    let ipi = C64::new(0.0, PI);
    let mut pow_plus = C64::new(1.0, 0.0);
    let mut pow_minus = C64::new(1.0, 0.0);
    for k in 1..=d {
        pow_plus *= ipi;
        pow_minus *= -ipi;
        let boundary = (pow_plus * e_plus - pow_minus * e_minus) / denom;
        prev = boundary.re - (k as f64 / t) * prev;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Independent oracle: composite midpoint-free trapezoid on a fine grid.
    fn fourier_moment(d: u32, t: f64) -> f64 {
        let n = 200_000;
        let h = 1.0 / n as f64;
        let f = |xi: f64| {
            let y = C64::new(0.0, 2.0 * PI * xi).powu(d);
            (y * C64::from_polar(1.0, 2.0 * PI * t * xi)).re
        };
        let mut s = 0.5 * (f(-0.5) + f(0.5));
        for i in 1..n {
            s += f(-0.5 + i as f64 * h);
        }
        s * h
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(3.0).abs() < 1e-15);
        assert_relative_eq!(sinc(0.5), 2.0 / PI, epsilon = 1e-15);
        assert_relative_eq!(sinc(0.75), 0.300_105_438_719_035_4, epsilon = 1e-12);
        // both branches agree at the switch
        let t = 1e-4;
        let direct = (PI * t).sin() / (PI * t);
        assert_relative_eq!(sinc(t * 0.999_999), direct, epsilon = 1e-13);
    }

    #[test]
    fn derivatives_match_quadrature_oracle() {
        for d in 0..=5u32 {
            for &t in &[0.0, 0.1, 0.7, 1.0, 1.3, 2.5, 4.2, -3.3, 11.7] {
                let got = sinc_derivative(d, t);
                let want = fourier_moment(d, t);
                assert!(
                    (got - want).abs() < 1e-8 * (1.0 + want.abs()),
                    "d={d} t={t}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn first_derivative_closed_form() {
        // sinc'(t) = (cos πt − sinc t)/t; at even integers 2m: 1/(2m)
        for m in 1..6 {
            let t = 2.0 * m as f64;
            assert_relative_eq!(sinc_derivative(1, t), 1.0 / t, epsilon = 1e-13);
        }
        assert!(sinc_derivative(1, 0.0).abs() < 1e-15);
        assert_relative_eq!(sinc_derivative(2, 0.0), -PI * PI / 3.0, epsilon = 1e-13);
    }
}
