//! Reconstruction kernels `g_n` and their spectra.
//!
//! Every kernel set is described by its spectral matrix
//! `G(x)[n][m] = ĝ_n((m−1−x)/N)` for `x` in the source interval
//! `((N−2)/2, N/2)`; column `m` is the restriction of `ĝ_n` to the `m`-th
//! piece `(−1/2+(m−1)/N, −1/2+m/N)` of the band. Integrals over the band
//! become integrals over `x`:
//! `∫ F(ξ) dξ = (1/N) ∫ Σ_m F((m−1−x)/N) dx`,
//! so quadrature nodes in `x` land on the same relative position in every
//! piece and never straddle a breakpoint.

mod closed_form;
mod spectral;

use std::borrow::Cow;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::criterion::source_interval;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::multiplier::{Multiplier, OperatorFamily};
use crate::quadrature::GaussLegendre;
use crate::tolerances::{DEFAULT_QUAD_ORDER, MAX_SPLIT_PANELS, SPLIT_PANEL_ORDER, SPLIT_THRESHOLD};
use crate::C64;

pub use closed_form::{
    diffquot_kernels, littmann_coeffs, littmann_kernel, shifted_kernel, twonode_kernels,
    ClosedFormKernels, ClosedFormKind, KernelClosedForm,
};
pub use spectral::{
    dynamical_kernels, eval_kernel, synthesize_spectral, KernelSource, SpectralKernelSet,
};

/// Spectral matrix at one source node, with its quadrature weight.
#[derive(Debug, Clone)]
pub struct SourceSample {
    pub x: f64,
    pub weight: f64,
    pub g: CMatrix,
}

/// A complete set of `N` biorthogonal kernels. Indices are zero-based.
pub trait Kernels: Send + Sync {
    fn order(&self) -> usize;

    /// `G(x)[n][m] = ĝ_n((m−1−x)/N)`.
    fn spectrum_matrix(&self, x: f64) -> Result<CMatrix>;

    /// Source samples for a composite rule of `panels` equal panels.
    fn source_samples(
        &self,
        rule: &GaussLegendre,
        panels: usize,
    ) -> Result<Arc<Vec<SourceSample>>> {
        compute_samples(self, rule, panels).map(Arc::new)
    }

    /// Quadrature rule used for kernel evaluation at moderate `|x|`.
    fn rule(&self) -> Cow<'_, GaussLegendre> {
        Cow::Owned(GaussLegendre::new(DEFAULT_QUAD_ORDER))
    }

    /// `(g_1(x), …, g_N(x))`.
    fn eval_all(&self, x: f64) -> Result<Vec<C64>> {
        transform_all(self, &self.rule(), x, None)
    }

    fn eval(&self, n: usize, x: f64) -> Result<C64> {
        check_index(self.order(), n)?;
        Ok(self.eval_all(x)?[n])
    }

    /// `ĝ_n(ξ)`, zero outside the band. At a breakpoint the right-hand piece is used.
    fn spectrum(&self, n: usize, xi: f64) -> Result<C64> {
        let big_n = self.order();
        check_index(big_n, n)?;
        match locate(big_n, xi) {
            Some((m, x)) => Ok(self.spectrum_matrix(x)?[(n, m)]),
            None => Ok(C64::new(0.0, 0.0)),
        }
    }
}

pub(crate) fn compute_samples<K: Kernels + ?Sized>(
    k: &K,
    rule: &GaussLegendre,
    panels: usize,
) -> Result<Vec<SourceSample>> {
    let (lo, hi) = source_interval(k.order());
    let h = (hi - lo) / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            rule.on_interval(lo + p as f64 * h, lo + (p + 1) as f64 * h)
                .collect::<Vec<_>>()
        })
        .collect();
    nodes
        .par_iter()
        .map(|&(x, weight)| {
            Ok(SourceSample {
                x,
                weight,
                g: k.spectrum_matrix(x)?,
            })
        })
        .collect()
}

/// Memo of composite source samples keyed by `(rule order, panels)`.
#[derive(Default)]
pub(crate) struct SampleCache(Mutex<HashMap<(usize, usize), Arc<Vec<SourceSample>>>>);

impl SampleCache {
    pub(crate) fn get_or_compute<K: Kernels + ?Sized>(
        &self,
        k: &K,
        rule: &GaussLegendre,
        panels: usize,
    ) -> Result<Arc<Vec<SourceSample>>> {
        let key = (rule.len(), panels);
        if let Some(hit) = self.0.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let fresh = Arc::new(compute_samples(k, rule, panels)?);
        self.0
            .lock()
            .expect("cache lock")
            .insert(key, fresh.clone());
        Ok(fresh)
    }
}

impl Clone for SampleCache {
    fn clone(&self) -> Self {
        Self::default()
    }
}

impl PartialEq for SampleCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl std::fmt::Debug for SampleCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SampleCache")
    }
}

pub(crate) fn check_index(big_n: usize, n: usize) -> Result<()> {
    if n >= big_n {
        Err(Error::InvalidArgument(format!(
            "kernel index {n} out of range for N = {big_n}"
        )))
    } else {
        Ok(())
    }
}

/// Piece index (zero-based) and source point for `ξ` in the band.
pub(crate) fn locate(big_n: usize, xi: f64) -> Option<(usize, f64)> {
    if !(-0.5..0.5).contains(&xi) {
        return None;
    }
    let nf = big_n as f64;
    let m = (((xi + 0.5) * nf).floor() as usize).min(big_n - 1);
    Some((m, m as f64 - nf * xi))
}

/// `∫ ĝ_n(ξ) W(ξ) e^{2πitξ} dξ` for every `n`, with `W = 1` when `symbol` is `None`.
///
/// Moderate `|t|` uses `rule` on the whole source interval; larger `|t|`
/// switches to panels of at most a quarter period. Hitting the panel cap yields
/// [`Error::Accuracy`] carrying the computed value.
pub fn transform_all<K: Kernels + ?Sized>(
    k: &K,
    rule: &GaussLegendre,
    t: f64,
    symbol: Option<&Multiplier>,
) -> Result<Vec<C64>> {
    let big_n = k.order();
    let freq = t / big_n as f64;
    // Rules coarser than the default resolve fewer oscillations.
    let threshold = if rule.len() >= DEFAULT_QUAD_ORDER {
        SPLIT_THRESHOLD * rule.len() as f64 / DEFAULT_QUAD_ORDER as f64
    } else {
        rule.len() as f64 / 4.0
    };
    if freq.abs() <= threshold {
        return Ok(accumulate(&k.source_samples(rule, 1)?, big_n, t, symbol));
    }
    let wanted = ((4.0 * freq.abs()).ceil() as usize).max(2);
    let capped = wanted > MAX_SPLIT_PANELS;
    // Powers of two let cached samples serve nearby arguments.
    let panels = wanted.next_power_of_two().min(MAX_SPLIT_PANELS);
    let split = GaussLegendre::new(SPLIT_PANEL_ORDER);
    let value = accumulate(&k.source_samples(&split, panels)?, big_n, t, symbol);
    if capped {
        let coarse = accumulate(&k.source_samples(&split, panels / 2)?, big_n, t, symbol);
        let err = value
            .iter()
            .zip(&coarse)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        return Err(Error::Accuracy {
            x: t,
            estimated_error: err,
            value,
        });
    }
    Ok(value)
}

fn accumulate(
    samples: &[SourceSample],
    big_n: usize,
    t: f64,
    symbol: Option<&Multiplier>,
) -> Vec<C64> {
    let nf = big_n as f64;
    let mut out = vec![C64::new(0.0, 0.0); big_n];
    for s in samples {
        for m in 0..big_n {
            let xi = (m as f64 - s.x) / nf;
            let mut phase = C64::from_polar(s.weight / nf, 2.0 * PI * t * xi);
            if let Some(k) = symbol {
                phase *= k.eval(xi);
            }
            for (n, o) in out.iter_mut().enumerate() {
                *o += s.g[(n, m)] * phase;
            }
        }
    }
    out
}

/// `max_{n,m,|j|≤j_range} |T_m(g_n)(Nj) − δ_{nm}δ_{j0}|`, with `T_m(g_n)` computed
/// from the spectra.
pub fn verify_biorthogonality<K: Kernels + ?Sized>(
    family: &OperatorFamily,
    kernels: &K,
    j_range: usize,
) -> Result<f64> {
    let big_n = family.n();
    if kernels.order() != big_n {
        return Err(Error::InvalidArgument(format!(
            "family has N = {big_n} but kernels have N = {}",
            kernels.order()
        )));
    }
    let rule = kernels.rule();
    let j = j_range as i64;
    let mut worst = 0.0f64;
    for (m, op) in family.members().iter().enumerate() {
        for jj in -j..=j {
            let vals = transform_all(kernels, &rule, (big_n as i64 * jj) as f64, Some(op))?;
            for (n, v) in vals.iter().enumerate() {
                let target = if n == m && jj == 0 { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
    }
    Ok(worst)
}
