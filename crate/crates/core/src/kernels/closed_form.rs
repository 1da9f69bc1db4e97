use std::borrow::Cow;
use std::f64::consts::PI;
use std::sync::Arc;

use super::spectral::dynamical_matrix;
use super::{check_index, transform_all, Kernels, SampleCache, SourceSample};
use crate::criterion::source_interval;
use crate::error::{Error, NoFormulaReason, Result};
use crate::linalg::{poly_from_roots, CMatrix};
use crate::multiplier::{power_family, MultiplierSpec, OperatorFamily};
use crate::quadrature::GaussLegendre;
use crate::special::sinc;
use crate::tolerances::DEFAULT_QUAD_ORDER;
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormKind {
    /// `sinc(x)`.
    Sinc,
    /// Derivatives of orders `0..N` on `Nℤ`.
    Littmann { n: usize },
    /// Translations `f(· + a_n)` on `Nℤ`.
    Shifted { nodes: Vec<f64> },
    /// `f(· + a)` and `f^{(order)}(· + b)` on `2ℤ`.
    TwoNodeDerivative { order: u32, a: f64, b: f64 },
    /// `f(· + a)` and a difference quotient of width `ε` at `· + b` on `2ℤ`.
    DiffQuotient { epsilon: f64, a: f64, b: f64 },
    /// Power family of `base`, built from its explicit last kernel.
    DynamicalLast { base: MultiplierSpec, n: usize },
}

impl ClosedFormKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormKind::Sinc => "sinc",
            ClosedFormKind::Littmann { .. } => "littmann",
            ClosedFormKind::Shifted { .. } => "shifted",
            ClosedFormKind::TwoNodeDerivative { .. } => "twonode",
            ClosedFormKind::DiffQuotient { .. } => "diffquot",
            ClosedFormKind::DynamicalLast { .. } => "dynamical",
        }
    }
}

/// A full kernel set given by explicit formulas.
///
/// Sinc, Littmann and shifted kernels are evaluated directly. The others
/// are integrals over the band and go through spectral quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormKernels {
    kind: ClosedFormKind,
    n: usize,
    /// Littmann coefficients, or per-kernel Lagrange coefficients for shifted nodes (row-major).
    coeffs: Vec<C64>,
    /// Gauss–Legendre order for kernels evaluated by spectral quadrature.
    quad: usize,
    cache: SampleCache,
}

/// One kernel of a [`ClosedFormKernels`] set.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelClosedForm {
    set: ClosedFormKernels,
    index: usize,
}

impl KernelClosedForm {
    pub fn kind(&self) -> &ClosedFormKind {
        &self.set.kind
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        self.set.eval(self.index, x)
    }

    pub fn spectrum(&self, xi: f64) -> Result<C64> {
        self.set.spectrum(self.index, xi)
    }
}

/// Coefficients `C^N_m` of `Π_{j=1}^{N−1} (y + πi − 2πij/N) = Σ_m C^N_m y^{m−1}`.
pub fn littmann_coeffs(n: usize) -> Vec<C64> {
    let nf = n as f64;
    let roots: Vec<C64> = (1..n)
        .map(|j| -I * PI * (1.0 - 2.0 * j as f64 / nf))
        .collect();
    poly_from_roots(&roots)
}

/// Kernel `m` (zero-based) of the order-`N` derivative sampling scheme.
pub fn littmann_kernel(n: usize, m: usize) -> Result<KernelClosedForm> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be >= 1".into()));
    }
    check_index(n, m)?;
    Ok(ClosedFormKernels::littmann(n).kernel(m))
}

/// Kernel `n` (zero-based) for samples `f(Nj + a_s)`, `N = nodes.len()`.
pub fn shifted_kernel(nodes: &[f64], n: usize) -> Result<KernelClosedForm> {
    let set = ClosedFormKernels::shifted(nodes)?;
    check_index(set.n, n)?;
    Ok(set.kernel(n))
}

/// Kernels for `f(2j + a)`, `f^{(order)}(2j + b)`.
pub fn twonode_kernels(order: u32, a: f64, b: f64) -> Result<ClosedFormKernels> {
    let d = a - b;
    if is_integer(d) && (d.round() as i64 - order as i64).rem_euclid(2) == 0 {
        return Err(Error::NoFormula(NoFormulaReason::ParityExclusion));
    }
    Ok(ClosedFormKernels {
        kind: ClosedFormKind::TwoNodeDerivative { order, a, b },
        n: 2,
        coeffs: Vec::new(),
        quad: DEFAULT_QUAD_ORDER,
        cache: SampleCache::default(),
    })
}

/// Kernels for `f(2j + a)` and `(f(2j + b + ε) − f(2j + b − ε)) / (2ε)`.
pub fn diffquot_kernels(epsilon: f64, a: f64, b: f64) -> Result<ClosedFormKernels> {
    if epsilon == 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(
            "difference quotient needs epsilon != 0".into(),
        ));
    }
    let d = a - b;
    if is_integer(d) && d.round().rem_euclid(2.0) == 1.0 {
        return Err(Error::NoFormula(NoFormulaReason::OddOffset));
    }
    if is_integer(epsilon) {
        return Err(Error::NoFormula(NoFormulaReason::IntegerEpsilon));
    }
    if is_integer(d) && epsilon.abs() >= 1.0 {
        return Err(Error::NoFormula(NoFormulaReason::LargeEpsilon));
    }
    Ok(ClosedFormKernels {
        kind: ClosedFormKind::DiffQuotient { epsilon, a, b },
        n: 2,
        coeffs: Vec::new(),
        quad: DEFAULT_QUAD_ORDER,
        cache: SampleCache::default(),
    })
}

fn is_integer(v: f64) -> bool {
    (v - v.round()).abs() < 1e-12
}

impl ClosedFormKernels {
    pub fn sinc() -> Self {
        Self {
            kind: ClosedFormKind::Sinc,
            n: 1,
            coeffs: Vec::new(),
            quad: DEFAULT_QUAD_ORDER,
            cache: SampleCache::default(),
        }
    }

    pub fn littmann(n: usize) -> Self {
        Self {
            kind: ClosedFormKind::Littmann { n },
            n,
            coeffs: littmann_coeffs(n),
            quad: DEFAULT_QUAD_ORDER,
            cache: SampleCache::default(),
        }
    }

    pub fn shifted(nodes: &[f64]) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::InvalidNodes("empty node list".into()));
        }
        let nf = n as f64;
        for s in 0..n {
            for t in s + 1..n {
                if (PI * (nodes[s] - nodes[t]) / nf).sin().abs() < 1e-12 {
                    return Err(Error::InvalidNodes(format!(
                        "a_{} - a_{} = {} lies in {}Z",
                        s + 1,
                        t + 1,
                        nodes[s] - nodes[t],
                        n
                    )));
                }
            }
        }
        // Lagrange basis at z_s = e^{2πi a_s / N}, ascending coefficients per row.
        let z: Vec<C64> = nodes
            .iter()
            .map(|&a| C64::from_polar(1.0, 2.0 * PI * a / nf))
            .collect();
        let mut coeffs = Vec::with_capacity(n * n);
        for k in 0..n {
            let others: Vec<C64> = (0..n).filter(|&s| s != k).map(|s| z[s]).collect();
            let denom: C64 = others.iter().map(|&zs| z[k] - zs).product();
            coeffs.extend(poly_from_roots(&others).into_iter().map(|c| c / denom));
        }
        Ok(Self {
            kind: ClosedFormKind::Shifted {
                nodes: nodes.to_vec(),
            },
            n,
            coeffs,
            quad: DEFAULT_QUAD_ORDER,
            cache: SampleCache::default(),
        })
    }

    pub fn dynamical(base: &MultiplierSpec, n: usize) -> Result<Self> {
        // Shares the injectivity requirement with the sampled version.
        super::dynamical_kernels(base, n, 1)?;
        Ok(Self {
            kind: ClosedFormKind::DynamicalLast {
                base: base.clone(),
                n,
            },
            n,
            coeffs: Vec::new(),
            quad: DEFAULT_QUAD_ORDER,
            cache: SampleCache::default(),
        })
    }

    pub fn kind(&self) -> &ClosedFormKind {
        &self.kind
    }

    /// Use a `q`-node rule on the source interval for quadrature-based kernels.
    pub fn with_quad_order(mut self, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument(
                "quadrature order must be >= 1".into(),
            ));
        }
        self.quad = q;
        self.cache = SampleCache::default();
        Ok(self)
    }

    pub fn kernel(&self, index: usize) -> KernelClosedForm {
        KernelClosedForm {
            set: self.clone(),
            index,
        }
    }

    /// The sampling family these kernels belong to.
    pub fn family(&self) -> Result<OperatorFamily> {
        match &self.kind {
            ClosedFormKind::Sinc => Ok(OperatorFamily::shannon()),
            ClosedFormKind::Littmann { n } => Ok(OperatorFamily::littmann(*n)),
            ClosedFormKind::Shifted { nodes } => OperatorFamily::shifted(nodes),
            ClosedFormKind::TwoNodeDerivative { order, a, b } => {
                Ok(OperatorFamily::twonode(*order, *a, *b))
            }
            ClosedFormKind::DiffQuotient { epsilon, a, b } => {
                OperatorFamily::diffquot(*epsilon, *a, *b)
            }
            ClosedFormKind::DynamicalLast { base, n } => power_family(base, *n),
        }
    }

    fn littmann_value(&self, m: usize, x: f64) -> C64 {
        let n = self.n;
        let mut fact = vec![1.0f64; n + 1];
        for k in 1..=n {
            fact[k] = fact[k - 1] * k as f64;
        }
        let mut poly = C64::new(0.0, 0.0);
        for k in m..n {
            poly += self.coeffs[k] * (fact[k] / fact[n - 1]) * x.powi((n - 1 - k) as i32);
        }
        poly * x.powi(m as i32) / fact[m] * sinc(x / n as f64).powi(n as i32)
    }

    fn shifted_value(&self, nodes: &[f64], k: usize, x: f64) -> f64 {
        let nf = self.n as f64;
        let mut v = sinc((x - nodes[k]) / nf);
        for (s, &a) in nodes.iter().enumerate() {
            if s != k {
                v *= (PI * (x - a) / nf).sin() / (PI * (nodes[k] - a) / nf).sin();
            }
        }
        v
    }

    fn littmann_matrix(&self, x: f64) -> CMatrix {
        let n = self.n;
        let nf = n as f64;
        let mut fact = vec![1.0f64; n + 1];
        for k in 1..=n {
            fact[k] = fact[k - 1] * k as f64;
        }
        let lead = C64::new(nf / (2.0 * PI), 0.0) / I;
        let mut g = CMatrix::zeros(n, n);
        for p in 0..n {
            let roots: Vec<C64> = (0..n)
                .filter(|&j| j != p)
                .map(|j| -I * 2.0 * PI * (x - j as f64) / nf)
                .collect();
            let poly = poly_from_roots(&roots);
            let sign = if (n - 1 - p) % 2 == 0 { 1.0 } else { -1.0 };
            let scale = lead.powu(n as u32 - 1) * (nf * sign / (fact[p] * fact[n - 1 - p]));
            for k in 0..n {
                g[(k, p)] = scale * poly[k];
            }
        }
        g
    }

    fn shifted_matrix(&self, nodes: &[f64], x: f64) -> CMatrix {
        let n = self.n;
        let nf = n as f64;
        CMatrix::from_fn(n, n, |k, m| {
            C64::from_polar(nf, 2.0 * PI * nodes[k] * x / nf) * self.coeffs[k * n + m]
        })
    }

    /// Two-node schemes: `G[r][0] = 2B_r(x)`, `G[r][1] = 2A_r(x)`, where kernel
    /// `r` is `∫_0^1 (A_r(ξ) e^{πix(1−ξ)} + B_r(ξ) e^{−πixξ}) dξ`.
    fn twonode_matrix(&self, x: f64) -> CMatrix {
        let e = |t: f64| C64::from_polar(1.0, PI * t);
        let (ag, bg, ah, bh) = match self.kind {
            ClosedFormKind::TwoNodeDerivative { order, a, b } => {
                let k = order as i32;
                let d = x.powi(k) * e(a - b) - (x - 1.0).powi(k);
                let ed = x.powi(k) - (x - 1.0).powi(k) * e(b - a);
                let c = (-I * PI).powi(-k);
                (
                    x.powi(k) * e(-b) * e(a * x) / d,
                    -(x - 1.0).powi(k) * e(a * x) / d,
                    -c * e(-a) * e(b * x) / ed,
                    c * e(b * x) / ed,
                )
            }
            ClosedFormKind::DiffQuotient { epsilon, a, b } => {
                let s1 = (PI * epsilon * x).sin();
                let s0 = (PI * epsilon * (1.0 - x)).sin();
                let d = s0 + e(a - b) * s1;
                let ed = I
                    * PI
                    * (e(b - a) * (1.0 - x) * sinc(epsilon * (1.0 - x)) + x * sinc(epsilon * x));
                (
                    e(-b) * s1 * e(a * x) / d,
                    s0 * e(a * x) / d,
                    e(-a) * e(b * x) / ed,
                    -e(b * x) / ed,
                )
            }
            _ => unreachable!("two-node matrix for a two-node kind"),
        };
        CMatrix::from_row_slice(2, 2, &[2.0 * bg, 2.0 * ag, 2.0 * bh, 2.0 * ah])
    }
}

impl Kernels for ClosedFormKernels {
    fn order(&self) -> usize {
        self.n
    }

    fn spectrum_matrix(&self, x: f64) -> Result<CMatrix> {
        let (lo, hi) = source_interval(self.n);
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain { x, lo, hi });
        }
        Ok(match &self.kind {
            ClosedFormKind::Sinc => CMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
            ClosedFormKind::Littmann { .. } => self.littmann_matrix(x),
            ClosedFormKind::Shifted { nodes } => self.shifted_matrix(nodes, x),
            ClosedFormKind::TwoNodeDerivative { .. } | ClosedFormKind::DiffQuotient { .. } => {
                self.twonode_matrix(x)
            }
            ClosedFormKind::DynamicalLast { base, n } => dynamical_matrix(base, *n, x),
        })
    }

    fn source_samples(
        &self,
        rule: &GaussLegendre,
        panels: usize,
    ) -> Result<Arc<Vec<SourceSample>>> {
        self.cache.get_or_compute(self, rule, panels)
    }

    fn rule(&self) -> Cow<'_, GaussLegendre> {
        Cow::Owned(GaussLegendre::new(self.quad))
    }

    fn eval_all(&self, x: f64) -> Result<Vec<C64>> {
        match &self.kind {
            ClosedFormKind::Sinc => Ok(vec![C64::new(sinc(x), 0.0)]),
            ClosedFormKind::Littmann { .. } => {
                Ok((0..self.n).map(|m| self.littmann_value(m, x)).collect())
            }
            ClosedFormKind::Shifted { nodes } => Ok((0..self.n)
                .map(|k| C64::new(self.shifted_value(nodes, k, x), 0.0))
                .collect()),
            _ => transform_all(self, &self.rule(), x, None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::build_matrix;
    use crate::kernels::{synthesize_spectral, verify_biorthogonality};
    use crate::linalg::{distance_from_identity, poly_mul};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_inverts(k: &ClosedFormKernels, tol: f64) {
        let fam = k.family().unwrap();
        let (lo, _) = source_interval(k.order());
        for i in 1..50 {
            let x = lo + i as f64 / 50.0;
            let g = k.spectrum_matrix(x).unwrap();
            let m = build_matrix(&fam, x).unwrap();
            let r = distance_from_identity(&(&g * &m)).max(distance_from_identity(&(&m * &g)));
            assert!(r < tol, "{:?} x={x} residual {r}", k.kind());
        }
    }

    #[test]
    fn littmann_coefficient_examples() {
        assert_eq!(littmann_coeffs(1), vec![c(1.0, 0.0)]);
        let c2 = littmann_coeffs(2);
        assert!(c2[0].norm() < 1e-15 && (c2[1] - c(1.0, 0.0)).norm() < 1e-15);
        let c3 = littmann_coeffs(3);
        assert!((c3[0] - c(PI * PI / 9.0, 0.0)).norm() < 1e-14);
        assert!(c3[1].norm() < 1e-14);
        assert!((c3[2] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn littmann_coefficients_expand_the_product() {
        for n in 1..=6 {
            let mut p = vec![c(1.0, 0.0)];
            for j in 1..n {
                p = poly_mul(
                    &p,
                    &[I * PI - I * 2.0 * PI * j as f64 / n as f64, c(1.0, 0.0)],
                );
            }
            let got = littmann_coeffs(n);
            assert_eq!(got.len(), n);
            for (a, b) in got.iter().zip(&p) {
                assert!((a - b).norm() < 1e-12);
            }
            assert_eq!(got[n - 1], c(1.0, 0.0));
        }
    }

    #[test]
    fn littmann_kernel_examples() {
        for &x in &[-3.3, -0.5, 0.0, 0.5, 1.0, 3.7] {
            let g1 = littmann_kernel(1, 0).unwrap().eval(x).unwrap();
            assert!((g1.re - sinc(x)).abs() < 1e-15);
            let g21 = littmann_kernel(2, 0).unwrap().eval(x).unwrap();
            assert!((g21.re - sinc(x / 2.0).powi(2)).abs() < 1e-15);
            let g22 = littmann_kernel(2, 1).unwrap().eval(x).unwrap();
            assert!((g22.re - x * sinc(x / 2.0).powi(2)).abs() < 1e-15);
            // Vaaler's second kernel sin²(πz)/(π²z) at z = x/2, rescaled by 2.
            if x != 0.0 {
                let z = x / 2.0;
                let vaaler = (PI * z).sin().powi(2) / (PI * PI * z);
                assert!((g22.re - 2.0 * vaaler).abs() < 1e-14);
            }
            // N = 3, m = 1: (1 + π²x²/18) sinc(x/3)³.
            let g31 = littmann_kernel(3, 0).unwrap().eval(x).unwrap();
            let want = (1.0 + PI * PI * x * x / 18.0) * sinc(x / 3.0).powi(3);
            assert!((g31.re - want).abs() < 1e-14);
        }
        let g = littmann_kernel(2, 0).unwrap();
        for k in [-3.0, -1.0, 1.0, 4.0] {
            let x = 2.0 * k;
            assert!(g.eval(x).unwrap().norm() < 1e-15);
            let d = (g.eval(x + 1e-6).unwrap() - g.eval(x - 1e-6).unwrap()).norm() / 2e-6;
            assert!(d < 1e-8);
        }
        assert!(littmann_kernel(2, 2).is_err());
    }

    #[test]
    fn closed_spectra_invert_the_matrix() {
        for n in 1..=5 {
            assert_inverts(&ClosedFormKernels::littmann(n), 1e-9);
        }
        assert_inverts(
            &ClosedFormKernels::shifted(&[0.0, 0.7, 1.9]).unwrap(),
            1e-12,
        );
        assert_inverts(&ClosedFormKernels::shifted(&[0.0, 0.5]).unwrap(), 1e-12);
        for (order, a, b) in [
            (1, 0.0, 0.0),
            (1, 0.3, -0.4),
            (2, 1.0, 0.0),
            (3, 0.5, 0.0),
            (2, 0.25, 0.1),
        ] {
            assert_inverts(&twonode_kernels(order, a, b).unwrap(), 1e-10);
        }
        for (eps, a, b) in [
            (0.5, 0.0, 0.0),
            (0.3, 0.2, 0.7),
            (1.5, 0.5, 0.0),
            (-0.8, 2.0, 0.0),
        ] {
            assert_inverts(&diffquot_kernels(eps, a, b).unwrap(), 1e-10);
        }
        for base in [
            MultiplierSpec::derivative(1, 0.0),
            MultiplierSpec::shift(0.5),
        ] {
            for n in 1..=3 {
                assert_inverts(&ClosedFormKernels::dynamical(&base, n).unwrap(), 1e-9);
            }
        }
    }

    #[test]
    fn twonode_first_order_at_zero_is_littmann() {
        let t = twonode_kernels(1, 0.0, 0.0).unwrap();
        let l = ClosedFormKernels::littmann(2);
        for x in [0.1, 0.5, 0.9] {
            assert!((t.spectrum_matrix(x).unwrap() - l.spectrum_matrix(x).unwrap()).norm() < 1e-13);
        }
        let g = t.eval_all(0.0).unwrap();
        assert!((g[0] - c(1.0, 0.0)).norm() < 1e-12 && g[1].norm() < 1e-12);
        for x in [-2.0, 2.0] {
            assert!(t.eval(0, x).unwrap().norm() < 1e-12);
        }
        for x in [-3.1, 0.4, 2.5] {
            let h = t.eval(1, x).unwrap();
            assert!((h.re - x * sinc(x / 2.0).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_exclusions() {
        for order in 1..=3u32 {
            for d in 0..=2i64 {
                let r = twonode_kernels(order, d as f64, 0.0);
                let excluded = (order as i64 - d) % 2 == 0;
                assert_eq!(r.is_err(), excluded, "order={order} d={d}");
                if excluded {
                    assert!(matches!(
                        r,
                        Err(Error::NoFormula(NoFormulaReason::ParityExclusion))
                    ));
                }
            }
        }
        assert!(twonode_kernels(2, 0.5, 0.0).is_ok());
    }

    #[test]
    fn diffquot_cases() {
        let case = |eps, a, b| match diffquot_kernels(eps, a, b) {
            Err(Error::NoFormula(r)) => Some(r),
            Ok(_) => None,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(case(0.5, 1.0, 0.0), Some(NoFormulaReason::OddOffset));
        assert_eq!(case(1.0, 0.0, 0.0), Some(NoFormulaReason::IntegerEpsilon));
        assert_eq!(case(-2.0, 0.3, 0.0), Some(NoFormulaReason::IntegerEpsilon));
        assert_eq!(case(1.5, 0.0, 0.0), Some(NoFormulaReason::LargeEpsilon));
        assert_eq!(case(1.5, 2.0, 0.0), Some(NoFormulaReason::LargeEpsilon));
        assert_eq!(case(1.5, 0.5, 0.0), None);
        assert_eq!(case(0.5, 0.0, 0.0), None);
        assert!(matches!(
            diffquot_kernels(0.0, 0.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn diffquot_kernels_are_biorthogonal() {
        let k = diffquot_kernels(0.5, 0.0, 0.0).unwrap();
        let r = verify_biorthogonality(&k.family().unwrap(), &k, 3).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn shifted_kernel_examples() {
        let g = shifted_kernel(&[0.0], 0).unwrap();
        assert!((g.eval(0.37).unwrap().re - sinc(0.37)).abs() < 1e-15);
        let g = shifted_kernel(&[0.0, 1.0], 0).unwrap();
        for j in -3..=3 {
            let x = j as f64 + 0.25;
            assert!((g.eval(x).unwrap().re - sinc(x)).abs() < 1e-14);
        }
        let nodes = [0.0, 0.5];
        let g = shifted_kernel(&nodes, 1).unwrap();
        assert!((g.eval(0.5).unwrap().re - 1.0).abs() < 1e-15);
        for k in -2..=2 {
            let k2 = 2.0 * k as f64;
            if k != 0 {
                assert!(g.eval(0.5 + k2).unwrap().norm() < 1e-15);
            }
            assert!(g.eval(k2).unwrap().norm() < 1e-15);
        }
        assert!(matches!(
            shifted_kernel(&[0.0, 2.0], 0),
            Err(Error::InvalidNodes(_))
        ));
        assert!(matches!(
            shifted_kernel(&[0.3, 0.3, 1.0], 0),
            Err(Error::InvalidNodes(_))
        ));
    }

    #[test]
    fn shifted_closed_form_agrees_with_its_spectrum() {
        let k = ClosedFormKernels::shifted(&[0.0, 0.7, 1.9]).unwrap();
        for x in [-4.2, -1.0, 0.35, 2.8, 7.1] {
            let direct = k.eval_all(x).unwrap();
            let spectral = transform_all(&k, &k.rule(), x, None).unwrap();
            for (a, b) in direct.iter().zip(&spectral) {
                assert!((a - b).norm() < 1e-12, "x={x}");
            }
        }
    }

    #[test]
    fn littmann_closed_form_agrees_with_synthesis() {
        for n in 1..=4 {
            let closed = ClosedFormKernels::littmann(n);
            let set = synthesize_spectral(&OperatorFamily::littmann(n), 64).unwrap();
            for i in 0..=40 {
                let x = -4.0 + 0.2 * i as f64;
                let a = closed.eval_all(x).unwrap();
                let b = set.eval_all(x).unwrap();
                for (u, v) in a.iter().zip(&b) {
                    assert!((u - v).norm() < 1e-9, "n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn littmann_derivative_relation() {
        // ĝ_{m+1} = −ĝ'_m / (2πim) inside each piece.
        for n in 2..=4 {
            let k = ClosedFormKernels::littmann(n);
            let nf = n as f64;
            for piece in 0..n {
                for t in [0.2, 0.5, 0.8] {
                    let xi = -0.5 + (piece as f64 + t) / nf;
                    let h = 1e-5;
                    for m in 0..n - 1 {
                        let d = (k.spectrum(m, xi + h).unwrap() - k.spectrum(m, xi - h).unwrap())
                            / (2.0 * h);
                        let want = -d / (2.0 * PI * I * (m + 1) as f64);
                        let got = k.spectrum(m + 1, xi).unwrap();
                        assert!(
                            (got - want).norm() < 1e-5 * (1.0 + got.norm()),
                            "n={n} m={m} xi={xi}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn littmann_spectral_jumps() {
        for n in 1..=4 {
            let r = crate::verify::littmann_jump_residual(n).unwrap();
            assert!(r < 1e-8, "n={n} residual {r}");
        }
    }

    #[test]
    fn kernels_of_real_schemes_are_real() {
        let l = ClosedFormKernels::littmann(3);
        let s = ClosedFormKernels::shifted(&[-0.4, 0.0, 0.4]).unwrap();
        for x in [-2.5, -0.3, 1.1, 3.9] {
            for v in transform_all(&l, &l.rule(), x, None).unwrap() {
                assert!(v.im.abs() < 1e-9);
            }
            for v in transform_all(&s, &s.rule(), x, None).unwrap() {
                assert!(v.im.abs() < 1e-9);
            }
        }
    }
}
