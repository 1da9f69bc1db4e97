use std::borrow::Cow;
use std::sync::Arc;

use rayon::prelude::*;

use super::{check_index, transform_all, Kernels, SampleCache, SourceSample};
use crate::criterion::{build_matrix, source_interval};
use crate::error::{Error, NoFormulaReason, Result};
use crate::linalg::{distance_from_identity, lu_summary, CMatrix};
use crate::multiplier::{MultiplierSpec, OperatorFamily};
use crate::quadrature::{fourier_integral, GaussLegendre};
use crate::tolerances::{TOL_DET, TOL_INV, TOL_ROOT};
use crate::C64;

/// How the spectral matrix is produced at a source point.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSource {
    /// `G(x) = M_T(x)^{-1}`.
    Inversion(OperatorFamily),
    /// Power family of `base`: explicit last kernel plus downward recursion.
    Dynamical { base: MultiplierSpec, n: usize },
}

/// Kernel spectra sampled at Gauss–Legendre nodes of the source interval.
#[derive(Debug, Clone)]
pub struct SpectralKernelSet {
    n: usize,
    source: KernelSource,
    rule: GaussLegendre,
    samples: Arc<Vec<SourceSample>>,
    tol_inv: f64,
    cache: SampleCache,
}

/// Invert `M_T` at `grid_per_piece` source nodes.
pub fn synthesize_spectral(
    family: &OperatorFamily,
    grid_per_piece: usize,
) -> Result<SpectralKernelSet> {
    if !family.is_critical_lattice() {
        return Err(Error::InvalidArgument(format!(
            "kernel synthesis needs rho = N = {}, got rho = {}",
            family.n(),
            family.rho()
        )));
    }
    SpectralKernelSet::build(
        KernelSource::Inversion(family.clone()),
        family.n(),
        grid_per_piece,
        TOL_INV,
    )
}

/// Kernels of the power family `(I, T, …, T^{N−1})` of `base`.
///
/// `ĝ_N(ξ_s) = N / Π_{j≠s}(k_s − k_j)` with `k_s = K(ξ_s)`, and
/// `ĝ_{n−1}(ξ) = K(ξ) ĝ_n(ξ) − P_n ĝ_N(ξ)` where `P_n(x) = (1/N) Σ_s ĝ_n(ξ_s) k_s^N`
/// is the periodization of `T^N g_n` on `Nℤ`.
pub fn dynamical_kernels(
    base: &MultiplierSpec,
    n: usize,
    grid_per_piece: usize,
) -> Result<SpectralKernelSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be >= 1".into()));
    }
    check_injective(base, n, 1024)?;
    SpectralKernelSet::build(
        KernelSource::Dynamical {
            base: base.clone(),
            n,
        },
        n,
        grid_per_piece,
        TOL_INV,
    )
}

/// `K` must separate the `N` points `ξ_s(x)` for every `x`, endpoints included.
fn check_injective(base: &MultiplierSpec, n: usize, grid: usize) -> Result<()> {
    let (lo, _) = source_interval(n);
    for i in 0..=grid {
        let x = lo + i as f64 / grid as f64;
        let k = symbol_values(base, n, x);
        let scale = k.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for s in 0..n {
            for t in s + 1..n {
                if (k[s] - k[t]).norm() < TOL_ROOT * scale {
                    return Err(Error::NoFormula(NoFormulaReason::NotInjective));
                }
            }
        }
    }
    Ok(())
}

fn symbol_values(base: &MultiplierSpec, n: usize, x: f64) -> Vec<C64> {
    (0..n)
        .map(|s| base.eval((s as f64 - x) / n as f64))
        .collect()
}

/// Spectral matrix of the power family of `base` at `x`.
pub(crate) fn dynamical_matrix(base: &MultiplierSpec, n: usize, x: f64) -> CMatrix {
    let k = symbol_values(base, n, x);
    let nf = n as f64;
    let mut g = CMatrix::zeros(n, n);
    for s in 0..n {
        let mut w = C64::new(1.0, 0.0);
        for j in 0..n {
            if j != s {
                w *= k[s] - k[j];
            }
        }
        g[(n - 1, s)] = C64::new(nf, 0.0) / w;
    }
    for r in (1..n).rev() {
        let p = periodized_power(&g, &k, r);
        for s in 0..n {
            g[(r - 1, s)] = k[s] * g[(r, s)] - p * g[(n - 1, s)];
        }
    }
    g
}

/// `(1/N) Σ_s G[r][s] k_s^N`.
fn periodized_power(g: &CMatrix, k: &[C64], r: usize) -> C64 {
    let n = k.len();
    (0..n).map(|s| g[(r, s)] * k[s].powu(n as u32)).sum::<C64>() / n as f64
}

impl SpectralKernelSet {
    fn build(source: KernelSource, n: usize, grid_per_piece: usize, tol_inv: f64) -> Result<Self> {
        if grid_per_piece == 0 {
            return Err(Error::InvalidArgument("grid_per_piece must be >= 1".into()));
        }
        let rule = GaussLegendre::new(grid_per_piece);
        let (lo, hi) = source_interval(n);
        let nodes: Vec<(f64, f64)> = rule.on_interval(lo, hi).collect();
        let mut set = Self {
            n,
            source,
            rule,
            samples: Arc::new(Vec::new()),
            tol_inv,
            cache: SampleCache::default(),
        };
        let samples: Result<Vec<SourceSample>> = nodes
            .par_iter()
            .map(|&(x, weight)| {
                Ok(SourceSample {
                    x,
                    weight,
                    g: set.compute(x)?,
                })
            })
            .collect();
        set.samples = Arc::new(samples?);
        Ok(set)
    }

    fn compute(&self, x: f64) -> Result<CMatrix> {
        match &self.source {
            KernelSource::Inversion(family) => {
                let m = build_matrix(family, x)?;
                let s = lu_summary(&m);
                let g = match s.inverse {
                    Some(g) if s.det.norm() >= TOL_DET && s.cond <= 1.0 / TOL_DET => g,
                    _ => {
                        return Err(Error::Synthesis {
                            x,
                            detail: format!("|det| = {:e}, cond = {:e}", s.det.norm(), s.cond),
                        })
                    }
                };
                let left = distance_from_identity(&(&g * &m));
                let right = distance_from_identity(&(&m * &g));
                if left.max(right) > self.tol_inv {
                    return Err(Error::Synthesis {
                        x,
                        detail: format!(
                            "inverse residual {:e} exceeds {:e}",
                            left.max(right),
                            self.tol_inv
                        ),
                    });
                }
                Ok(g)
            }
            KernelSource::Dynamical { base, n } => {
                let (lo, hi) = source_interval(*n);
                if !(x > lo && x < hi) {
                    return Err(Error::Domain { x, lo, hi });
                }
                Ok(dynamical_matrix(base, *n, x))
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &KernelSource {
        &self.source
    }

    pub fn grid_per_piece(&self) -> usize {
        self.rule.len()
    }

    /// The `N+1` breakpoints `−1/2 + j/N`.
    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=self.n)
            .map(|j| -0.5 + j as f64 / self.n as f64)
            .collect()
    }

    pub fn samples(&self) -> &[SourceSample] {
        &self.samples
    }

    /// Stored `(ξ, [ĝ_1(ξ), …, ĝ_N(ξ)])` on piece `m` (zero-based), ascending in `ξ`.
    pub fn piece_values(&self, m: usize) -> Vec<(f64, Vec<C64>)> {
        let nf = self.n as f64;
        let mut out: Vec<(f64, Vec<C64>)> = self
            .samples
            .iter()
            .map(|s| {
                (
                    (m as f64 - s.x) / nf,
                    (0..self.n).map(|k| s.g[(k, m)]).collect(),
                )
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Largest `max(|G·M − I|, |M·G − I|)` over the stored nodes (inversion sets only).
    pub fn inverse_residual(&self) -> Result<f64> {
        let family = match &self.source {
            KernelSource::Inversion(f) => f.clone(),
            KernelSource::Dynamical { base, n } => crate::multiplier::power_family(base, *n)?,
        };
        let mut worst = 0.0f64;
        for s in self.samples.iter() {
            let m = build_matrix(&family, s.x)?;
            worst = worst.max(distance_from_identity(&(&s.g * &m)));
            worst = worst.max(distance_from_identity(&(&m * &s.g)));
        }
        Ok(worst)
    }

    /// Truncated correction coefficients `c_j = T^N(g_n)(Nj)`, `|j| ≤ j_dyn`, of a
    /// power-family set, and the largest deviation of `Σ c_j e^{2πijx}` from the
    /// exact periodization over the stored nodes.
    pub fn dynamical_correction(&self, n: usize, j_dyn: usize) -> Result<(Vec<C64>, f64)> {
        let (base, big_n) = match &self.source {
            KernelSource::Dynamical { base, n } => (base, *n),
            KernelSource::Inversion(_) => {
                return Err(Error::InvalidArgument(
                    "correction series needs a power-family kernel set".into(),
                ))
            }
        };
        check_index(big_n, n)?;
        let p = |x: f64| {
            let k = symbol_values(base, big_n, x);
            periodized_power(&dynamical_matrix(base, big_n, x), &k, n)
        };
        let (lo, hi) = source_interval(big_n);
        let j = j_dyn as i64;
        let coeffs: Vec<C64> = (-j..=j)
            .map(|jj| fourier_integral(&self.rule, lo, hi, -(jj as f64), p).0)
            .collect();
        let tail = self
            .samples
            .iter()
            .map(|s| {
                let series: C64 = (-j..=j)
                    .zip(&coeffs)
                    .map(|(jj, c)| {
                        c * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * jj as f64 * s.x)
                    })
                    .sum();
                (series - p(s.x)).norm()
            })
            .fold(0.0, f64::max);
        Ok((coeffs, tail))
    }
}

impl Kernels for SpectralKernelSet {
    fn order(&self) -> usize {
        self.n
    }

    fn spectrum_matrix(&self, x: f64) -> Result<CMatrix> {
        self.compute(x)
    }

    fn source_samples(
        &self,
        rule: &GaussLegendre,
        panels: usize,
    ) -> Result<Arc<Vec<SourceSample>>> {
        if panels == 1 && *rule == self.rule {
            return Ok(self.samples.clone());
        }
        self.cache.get_or_compute(self, rule, panels)
    }

    fn rule(&self) -> Cow<'_, GaussLegendre> {
        Cow::Borrowed(&self.rule)
    }

    fn eval_all(&self, x: f64) -> Result<Vec<C64>> {
        transform_all(self, &self.rule, x, None)
    }
}

/// `g_n(x)` from a spectral kernel set.
pub fn eval_kernel(kset: &SpectralKernelSet, n: usize, x: f64) -> Result<C64> {
    kset.eval(n, x)
}
