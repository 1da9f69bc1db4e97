//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::DMatrix;

use crate::C64;

pub type CMatrix = DMatrix<C64>;

/// Determinant, inverse (if any) and 1-norm condition number of a square matrix.
#[derive(Debug, Clone)]
pub struct LuSummary {
    pub det: C64,
    pub inverse: Option<CMatrix>,
    pub cond: f64,
}

pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// LU with partial pivoting.
pub fn lu_summary(m: &CMatrix) -> LuSummary {
    let lu = m.clone().lu();
    let det = lu.determinant();
    let inverse = if det.norm() > 0.0 {
        lu.try_inverse()
    } else {
        None
    };
    let cond = match &inverse {
        Some(inv) if inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
            norm1(m) * norm1(inv)
        }
        _ => f64::INFINITY,
    };
    LuSummary { det, inverse, cond }
}

pub fn determinant(m: &CMatrix) -> C64 {
    m.clone().lu().determinant()
}

/// `max_{ij} |A_ij − δ_ij|`.
pub fn distance_from_identity(a: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a[(i, j)] - target).norm());
        }
    }
    worst
}

/// Coefficients (ascending powers) of `Π (y − r_j)`.
pub fn poly_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        coeffs = poly_mul(&coeffs, &[-r, C64::new(1.0, 0.0)]);
    }
    coeffs
}

pub fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_eval(coeffs: &[C64], y: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * y + c)
}
