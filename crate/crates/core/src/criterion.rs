//! The matrix field `M_T(x)` and the sampling/interpolation criterion.
//!
//! For `x ∈ ((N−2)/2, N/2)` the matrix has entries
//! `M[m][n] = (1/N)·K_n((m−1−x)/ρ)` (row `m` walks the `N` spectral pieces,
//! column `n` the operators). An interpolation formula exists exactly when
//! `|det M_T|` is bounded away from zero; the determinant's zero set also
//! decides the weaker stable-sampling / interpolation-set questions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lu_summary, CMatrix};
use crate::multiplier::{golden_section_min, OperatorFamily};
use crate::signals::{apply_operator, BandlimitedSignal};
use crate::tolerances::{DEFAULT_INITIAL_GRID, DEFAULT_REFINE_LEVELS, TOL_DET};
use crate::C64;

/// Lower end of the source interval `((N−2)/2, N/2)`.
pub fn source_interval(n: usize) -> (f64, f64) {
    let lo = (n as f64 - 2.0) / 2.0;
    (lo, lo + 1.0)
}

/// `M^ρ_T(x)`; `ρ = N` gives the matrix of the interpolation theorem.
pub fn build_matrix(family: &OperatorFamily, x: f64) -> Result<CMatrix> {
    let (lo, hi) = source_interval(family.n());
    if !(x > lo && x < hi) {
        return Err(Error::Domain { x, lo, hi });
    }
    Ok(build_matrix_unchecked(family, x))
}

/// Same as [`build_matrix`] but also accepts the interval endpoints, where
/// continuous symbols give the one-sided limits.
pub fn build_matrix_unchecked(family: &OperatorFamily, x: f64) -> CMatrix {
    let n = family.n();
    let scale = 1.0 / n as f64;
    CMatrix::from_fn(n, n, |m, k| {
        family.member(k).eval((m as f64 - x) / family.rho()) * scale
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionOptions {
    pub initial_grid: usize,
    pub refine_levels: usize,
    pub tol_det: f64,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        Self {
            initial_grid: DEFAULT_INITIAL_GRID,
            refine_levels: DEFAULT_REFINE_LEVELS,
            tol_det: TOL_DET,
        }
    }
}

impl CriterionOptions {
    /// A zero set covering more than two cells of the coarse grid has positive measure.
    pub fn measure_threshold(&self) -> f64 {
        2.0 / self.initial_grid as f64
    }
}

/// Determinant profile of `M^ρ_T` over the source interval.
#[derive(Debug, Clone)]
pub struct MatrixField {
    pub n: usize,
    pub rho: f64,
    pub grid: Vec<f64>,
    pub matrices: Vec<CMatrix>,
    pub dets: Vec<C64>,
    pub conds: Vec<f64>,
    /// Length of the interval share attributed to each grid point (sums to 1).
    pub weights: Vec<f64>,
    /// Determinants at `x = (N−2)/2` and `x = N/2`.
    pub endpoint_dets: [C64; 2],
    pub options: CriterionOptions,
}

impl MatrixField {
    fn is_zero(&self, i: usize) -> bool {
        self.dets[i].norm() < self.options.tol_det || self.conds[i] > 1.0 / self.options.tol_det
    }

    /// Measure fraction of the interval where the determinant is numerically zero.
    pub fn zero_fraction(&self) -> f64 {
        (0..self.grid.len())
            .filter(|&i| self.is_zero(i))
            .map(|i| self.weights[i])
            .fold(0.0, |acc, w| acc + w)
    }

    /// `(min |det|, location)` over the grid and the interval endpoints.
    pub fn min_abs_det(&self) -> (f64, f64) {
        let (lo, hi) = source_interval(self.n);
        let mut best = (self.endpoint_dets[0].norm(), lo);
        if self.endpoint_dets[1].norm() < best.0 {
            best = (self.endpoint_dets[1].norm(), hi);
        }
        for (d, &x) in self.dets.iter().zip(&self.grid) {
            if d.norm() < best.0 {
                best = (d.norm(), x);
            }
        }
        best
    }

    fn any_singular(&self) -> bool {
        (0..self.grid.len()).any(|i| self.is_zero(i))
    }
}

struct Point {
    x: f64,
    matrix: CMatrix,
    det: C64,
    cond: f64,
}

fn eval_point(family: &OperatorFamily, x: f64) -> Point {
    let matrix = build_matrix_unchecked(family, x);
    let s = lu_summary(&matrix);
    Point {
        x,
        matrix,
        det: s.det,
        cond: s.cond,
    }
}

/// Determinant profile on a uniform grid (half-cell inset from the open
/// interval's ends), bisected `refine_levels` times wherever `|det|` is
/// within a factor 10 of the running minimum. Discrete local minima are
/// then polished by golden-section search so isolated zeros between grid
/// points are found.
pub fn det_profile(
    family: &OperatorFamily,
    initial_grid: usize,
    refine_levels: usize,
) -> Result<MatrixField> {
    det_profile_with(
        family,
        &CriterionOptions {
            initial_grid,
            refine_levels,
            ..CriterionOptions::default()
        },
    )
}

pub fn det_profile_with(
    family: &OperatorFamily,
    options: &CriterionOptions,
) -> Result<MatrixField> {
    if options.initial_grid < 16 {
        return Err(Error::InvalidArgument("initial_grid must be >= 16".into()));
    }
    let n = family.n();
    let (lo, hi) = source_interval(n);
    let g = options.initial_grid;
    let xs: Vec<f64> = (0..g).map(|i| lo + (i as f64 + 0.5) / g as f64).collect();
    let mut points: Vec<Point> = xs.par_iter().map(|&x| eval_point(family, x)).collect();

    for _ in 0..options.refine_levels {
        let min = points
            .iter()
            .map(|p| p.det.norm())
            .fold(f64::INFINITY, f64::min);
        let threshold = 10.0 * min;
        let mids: Vec<f64> = points
            .windows(2)
            .filter(|w| w[0].det.norm() <= threshold || w[1].det.norm() <= threshold)
            .map(|w| 0.5 * (w[0].x + w[1].x))
            .collect();
        if mids.is_empty() {
            break;
        }
        let fresh: Vec<Point> = mids.par_iter().map(|&x| eval_point(family, x)).collect();
        points = merge_sorted(points, fresh);
    }

    let weights_before_polish = cell_weights(&points, lo, hi);
    let mut weights = weights_before_polish;

    // Polish the smallest discrete local minima.
    let abs: Vec<f64> = points.iter().map(|p| p.det.norm()).collect();
    let mut minima: Vec<usize> = (0..points.len())
        .filter(|&i| {
            let l = i == 0 || abs[i] <= abs[i - 1];
            let r = i + 1 == points.len() || abs[i] <= abs[i + 1];
            l && r && abs[i] >= options.tol_det
        })
        .collect();
    minima.sort_by(|&a, &b| abs[a].total_cmp(&abs[b]));
    minima.truncate(32);
    let polished: Vec<Point> = minima
        .par_iter()
        .map(|&i| {
            let a = if i == 0 { lo } else { points[i - 1].x };
            let b = if i + 1 == points.len() {
                hi
            } else {
                points[i + 1].x
            };
            let (x, _) = golden_section_min(a, b, 200, |x| {
                crate::linalg::determinant(&build_matrix_unchecked(family, x)).norm()
            });
            eval_point(family, x.clamp(a, b))
        })
        .filter(|p| p.x > lo && p.x < hi)
        .collect();
    if !polished.is_empty() {
        let mut tagged: Vec<(Point, f64)> = points.into_iter().zip(weights).collect();
        tagged.extend(polished.into_iter().map(|p| (p, 0.0)));
        tagged.sort_by(|a, b| a.0.x.total_cmp(&b.0.x));
        tagged.dedup_by(|a, b| a.0.x == b.0.x);
        let (p, w): (Vec<Point>, Vec<f64>) = tagged.into_iter().unzip();
        points = p;
        weights = w;
    }

    let endpoint_dets = [
        crate::linalg::determinant(&build_matrix_unchecked(family, lo)),
        crate::linalg::determinant(&build_matrix_unchecked(family, hi)),
    ];

    let mut field = MatrixField {
        n,
        rho: family.rho(),
        grid: Vec::with_capacity(points.len()),
        matrices: Vec::with_capacity(points.len()),
        dets: Vec::with_capacity(points.len()),
        conds: Vec::with_capacity(points.len()),
        weights,
        endpoint_dets,
        options: *options,
    };
    for p in points {
        field.grid.push(p.x);
        field.matrices.push(p.matrix);
        field.dets.push(p.det);
        field.conds.push(p.cond);
    }
    Ok(field)
}

fn merge_sorted(a: Vec<Point>, b: Vec<Point>) -> Vec<Point> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(p), Some(q)) => {
                if p.x <= q.x {
                    out.push(ia.next().unwrap());
                } else {
                    out.push(ib.next().unwrap());
                }
            }
            (Some(_), None) => out.push(ia.next().unwrap()),
            (None, Some(_)) => out.push(ib.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

fn cell_weights(points: &[Point], lo: f64, hi: f64) -> Vec<f64> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let left = if i == 0 {
                lo
            } else {
                0.5 * (points[i - 1].x + points[i].x)
            };
            let right = if i + 1 == n {
                hi
            } else {
                0.5 * (points[i].x + points[i + 1].x)
            };
            right - left
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionCase {
    /// `ess inf |det| > 0`: an interpolation formula exists.
    PositiveEssInf,
    /// The determinant vanishes, but only on a null set.
    NullZeroSet,
    /// The determinant vanishes on a set of positive measure.
    PositiveMeasureZeroSet,
}

impl CriterionCase {
    /// CLI exit code contract: 0, 2, 3.
    pub fn exit_code(self) -> i32 {
        match self {
            CriterionCase::PositiveEssInf => 0,
            CriterionCase::NullZeroSet => 2,
            CriterionCase::PositiveMeasureZeroSet => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub essinf_estimate: f64,
    pub zero_fraction: f64,
    pub case: CriterionCase,
    pub min_location: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub rho: f64,
    pub grid_points: usize,
    pub tol_det: f64,
    pub measure_threshold: f64,
}

/// Classify a determinant profile (any `ρ`).
pub fn classify(field: &MatrixField) -> CriterionReport {
    let (min, at) = field.min_abs_det();
    let zero_fraction = field.zero_fraction();
    let threshold = field.options.measure_threshold();
    let case = if zero_fraction > threshold {
        CriterionCase::PositiveMeasureZeroSet
    } else if min < field.options.tol_det || field.any_singular() {
        CriterionCase::NullZeroSet
    } else {
        CriterionCase::PositiveEssInf
    };
    CriterionReport {
        essinf_estimate: min,
        zero_fraction,
        case,
        min_location: at,
        n: field.n,
        rho: field.rho,
        grid_points: field.grid.len(),
        tol_det: field.options.tol_det,
        measure_threshold: threshold,
    }
}

/// Existence of an interpolation formula on `Nℤ`. The field must be built with `ρ = N`.
pub fn classify_theorem1(field: &MatrixField) -> Result<CriterionReport> {
    if (field.rho - field.n as f64).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "interpolation criterion needs rho = N = {}, field has rho = {}",
            field.n, field.rho
        )));
    }
    Ok(classify(field))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingVerdicts {
    pub stable_sampling: Verdict,
    pub interpolation_set: Verdict,
    pub case: CriterionCase,
    pub rho_delta: f64,
}

/// Decision table for `(ρℤ, T)` on `PW_{δπ}` given the determinant case.
pub fn decide_theorem2(case: CriterionCase, rho: f64, delta: f64, n: usize) -> SamplingVerdicts {
    let rd = rho * delta;
    let nf = n as f64;
    let eps = 1e-12 * nf;
    let le = rd <= nf + eps;
    let ge = rd >= nf - eps;
    let yes_no = |b: bool| if b { Verdict::Yes } else { Verdict::No };
    let (stable_sampling, interpolation_set) = match case {
        CriterionCase::PositiveEssInf => (yes_no(le), yes_no(ge)),
        CriterionCase::NullZeroSet => (
            if le { Verdict::Yes } else { Verdict::Unknown },
            if le { Verdict::No } else { Verdict::Unknown },
        ),
        CriterionCase::PositiveMeasureZeroSet => (
            if ge { Verdict::No } else { Verdict::Unknown },
            if le { Verdict::No } else { Verdict::Unknown },
        ),
    };
    SamplingVerdicts {
        stable_sampling,
        interpolation_set,
        case,
        rho_delta: rd,
    }
}

/// Stable-sampling and interpolation-set verdicts for `(ρℤ, T)` on `PW_{δπ}`.
pub fn classify_theorem2(family: &OperatorFamily, delta: f64) -> Result<SamplingVerdicts> {
    classify_theorem2_with(family, delta, &CriterionOptions::default())
}

pub fn classify_theorem2_with(
    family: &OperatorFamily,
    delta: f64,
    options: &CriterionOptions,
) -> Result<SamplingVerdicts> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let report = classify(&det_profile_with(family, options)?);
    Ok(decide_theorem2(
        report.case,
        family.rho(),
        delta,
        family.n(),
    ))
}

/// `|Σ_{|m|≤trunc} T(f)(Nm+a) e^{2πimx} − (1/N) Σ_{m=1}^N f̂(ξ_m) K(ξ_m) e^{2πiaξ_m}|`
/// with `ξ_m = (m−1−x)/N`, for operator `member` of the family.
///
/// The two sides agree in the limit by Poisson summation; the residual is
/// an independent check on the matrix field's construction.
pub fn periodization_check(
    family: &OperatorFamily,
    member: usize,
    f: &BandlimitedSignal,
    a: f64,
    x: f64,
    trunc: usize,
) -> Result<f64> {
    let n = family.n();
    let (lo, hi) = source_interval(n);
    if !(x > lo && x < hi) {
        return Err(Error::Domain { x, lo, hi });
    }
    if member >= n {
        return Err(Error::InvalidArgument(format!(
            "member {member} out of range for N = {n}"
        )));
    }
    let k = family.member(member);
    let nf = n as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let t = trunc as i64;
    let left: C64 = (-t..=t)
        .map(|m| {
            apply_operator(k, f, nf * m as f64 + a) * C64::from_polar(1.0, two_pi * m as f64 * x)
        })
        .sum();
    let right: C64 = (1..=n)
        .map(|m| {
            let xi = (m as f64 - 1.0 - x) / nf;
            f.spectrum(xi) * k.eval(xi) * C64::from_polar(1.0, two_pi * a * xi)
        })
        .sum::<C64>()
        / nf;
    Ok((left - right).norm())
}
