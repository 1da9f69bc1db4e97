//! Gauss–Legendre rules and panel-split Fourier integrals.

use std::f64::consts::PI;

use crate::tolerances::{MAX_SPLIT_PANELS, SPLIT_PANEL_ORDER, SPLIT_THRESHOLD};
use crate::C64;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n ≥ 1` nodes, computed by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`, nodes ascending.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> C64>(&self, a: f64, b: f64, mut f: F) -> C64 {
        self.on_interval(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel layout for a Fourier integral over an interval of length `width`
/// with phase `e^{2πi·freq·t}`.
///
/// Small `|freq|` uses the base rule on one panel. Beyond
/// [`SPLIT_THRESHOLD`] the interval is cut into panels spanning at most a
/// quarter period, each with [`SPLIT_PANEL_ORDER`] nodes. Returns
/// `(panels, capped)`.
pub fn panel_count(freq: f64, width: f64) -> (usize, bool) {
    if freq.abs() <= SPLIT_THRESHOLD {
        return (1, false);
    }
    let wanted = (4.0 * freq.abs() * width).ceil() as usize;
    if wanted > MAX_SPLIT_PANELS {
        (MAX_SPLIT_PANELS, true)
    } else {
        (wanted.max(1), false)
    }
}

/// Integrate `f` over `[a, b]` with `panels` equal panels of rule `rule`.
pub fn composite<F: FnMut(f64) -> C64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> C64 {
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        acc += rule.integrate_complex(lo, lo + h, &mut f);
    }
    acc
}

/// Oscillation-aware integral of `f(t)·e^{2πi·freq·t}` over `[a, b]`.
///
/// `base` is used unsplit for moderate frequencies. The second value is an
/// error estimate, nonzero only when the panel cap was hit (difference
/// against half the panels).
pub fn fourier_integral<F: Fn(f64) -> C64>(
    base: &GaussLegendre,
    a: f64,
    b: f64,
    freq: f64,
    f: F,
) -> (C64, f64) {
    let integrand = |t: f64| f(t) * C64::from_polar(1.0, 2.0 * PI * freq * t);
    let (panels, capped) = panel_count(freq, b - a);
    if panels == 1 {
        return (base.integrate_complex(a, b, integrand), 0.0);
    }
    let rule = GaussLegendre::new(SPLIT_PANEL_ORDER);
    let value = composite(&rule, a, b, panels, integrand);
    let err = if capped {
        (value - composite(&rule, a, b, panels / 2, integrand)).norm()
    } else {
        0.0
    };
    (value, err)
}
