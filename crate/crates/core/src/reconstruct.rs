//! Truncated reconstruction series and frame-ratio diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Kernels;
use crate::multiplier::OperatorFamily;
use crate::signals::{l2_norm_sq, sample_family, BandlimitedSignal, SampleSet};
use crate::tolerances::TAIL_FACTOR;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub value: C64,
    /// Outermost-ring magnitude times a safety factor; a heuristic, not a bound.
    pub tail: f64,
}

/// `Σ_n Σ_{|m|≤M} T_n(f)(Nm) g_n(x − Nm)`.
pub fn reconstruct<K: Kernels + ?Sized>(
    samples: &SampleSet,
    kernels: &K,
    x: f64,
) -> Result<Reconstruction> {
    let n = kernels.order();
    if samples.n_ops() != n {
        return Err(Error::InvalidArgument(format!(
            "samples have {} operators but kernels have N = {n}",
            samples.n_ops()
        )));
    }
    if (samples.rho() - n as f64).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "samples taken on {}Z, kernels interpolate on {n}Z",
            samples.rho()
        )));
    }
    let m_max = samples.m_max() as i64;
    let mut value = C64::new(0.0, 0.0);
    let mut ring = 0.0;
    for m in -m_max..=m_max {
        let g = kernels.eval_all(x - (n as i64 * m) as f64)?;
        let term: C64 = (0..n).map(|k| samples.get(k, m) * g[k]).sum();
        value += term;
        if m.abs() == m_max {
            ring += term.norm();
        }
    }
    Ok(Reconstruction {
        value,
        tail: TAIL_FACTOR * ring,
    })
}

/// [`reconstruct`] at many points, in parallel.
pub fn reconstruct_many<K: Kernels + ?Sized>(
    samples: &SampleSet,
    kernels: &K,
    xs: &[f64],
) -> Result<Vec<Reconstruction>> {
    xs.par_iter()
        .map(|&x| reconstruct(samples, kernels, x))
        .collect()
}

/// `(sup |f − f_rec|, trapezoid L² norm of f − f_rec)` over `grid`.
pub fn residual_norms<K: Kernels + ?Sized>(
    f: &BandlimitedSignal,
    samples: &SampleSet,
    kernels: &K,
    grid: &[f64],
) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("residual grid is empty".into()));
    }
    let recs = reconstruct_many(samples, kernels, grid)?;
    Ok(error_norms(f, grid, &recs))
}

/// Norms of `f − f_rec` from reconstructions already evaluated on `grid`.
pub fn error_norms(f: &BandlimitedSignal, grid: &[f64], recs: &[Reconstruction]) -> (f64, f64) {
    let errs: Vec<f64> = grid
        .iter()
        .zip(recs)
        .map(|(&x, r)| (f.eval(x) - r.value).norm())
        .collect();
    let sup = errs.iter().copied().fold(0.0, f64::max);
    let l2_sq: f64 = grid
        .windows(2)
        .zip(errs.windows(2))
        .map(|(x, e)| 0.5 * (e[0] * e[0] + e[1] * e[1]) * (x[1] - x[0]).abs())
        .sum();
    (sup, l2_sq.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub ratio: f64,
    /// Share of the sample energy carried by `|m| > M/2`.
    pub tail_fraction: f64,
    #[serde(rename = "M")]
    pub m_max: usize,
}

/// `Σ_n Σ_{|m|≤M} |T_n(f)(ρm)|² / ‖f‖²`.
pub fn frame_ratio(
    family: &OperatorFamily,
    f: &BandlimitedSignal,
    m_max: usize,
) -> Result<FrameReport> {
    let norm = l2_norm_sq(f);
    if norm <= 0.0 {
        return Err(Error::InvalidArgument(
            "frame ratio of the zero signal".into(),
        ));
    }
    let samples = sample_family(family, f, m_max);
    let total = samples.energy();
    let half = (m_max / 2) as i64;
    let outer: f64 = (0..samples.n_ops())
        .flat_map(|n| {
            samples
                .ms()
                .filter(move |m| m.abs() > half)
                .map(move |m| (n, m))
        })
        .map(|(n, m)| samples.get(n, m).norm_sqr())
        .sum();
    let tail_fraction = if total > 0.0 { outer / total } else { 0.0 };
    Ok(FrameReport {
        ratio: total / norm,
        tail_fraction,
        m_max,
    })
}

/// Smallest and largest frame ratio over a probe set.
pub fn frame_ratio_range(
    family: &OperatorFamily,
    probes: &[BandlimitedSignal],
    m_max: usize,
) -> Result<(f64, f64)> {
    let ratios: Result<Vec<f64>> = probes
        .par_iter()
        .map(|f| frame_ratio(family, f, m_max).map(|r| r.ratio))
        .collect();
    let ratios = ratios?;
    Ok((
        ratios.iter().copied().fold(f64::INFINITY, f64::min),
        ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ))
}
