//! Band-limited test functions and generalized sample sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::{Multiplier, OperatorFamily};
use crate::quadrature::{fourier_integral, GaussLegendre};
use crate::special::{sinc, sinc_derivative};
use crate::tolerances::DEFAULT_QUAD_ORDER;
use crate::C64;

/// `f(x) = Σ_k c_k sinc(x − x_k)`, an element of `PW_π` with spectrum
/// `f̂(ξ) = Σ_k c_k e^{−2πi x_k ξ}` on the band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedSignal {
    terms: Vec<(C64, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalFile {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    c: [f64; 2],
    x0: f64,
}

impl BandlimitedSignal {
    pub fn new(terms: Vec<(C64, f64)>) -> Self {
        Self { terms }
    }

    /// `sinc(· − center)`.
    pub fn sinc_at(center: f64) -> Self {
        Self::new(vec![(C64::new(1.0, 0.0), center)])
    }

    pub fn terms(&self) -> &[(C64, f64)] {
        &self.terms
    }

    pub fn plus(mut self, coeff: C64, center: f64) -> Self {
        self.terms.push((coeff, center));
        self
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self::new(self.terms.iter().map(|&(c, x)| (c * s, x)).collect())
    }

    pub fn translated(&self, by: f64) -> Self {
        Self::new(self.terms.iter().map(|&(c, x)| (c, x + by)).collect())
    }

    pub fn eval(&self, x: f64) -> C64 {
        self.terms.iter().map(|&(c, x0)| c * sinc(x - x0)).sum()
    }

    /// `f̂(ξ)` for `ξ` in the band, zero outside.
    pub fn spectrum(&self, xi: f64) -> C64 {
        if xi.abs() > 0.5 {
            return C64::new(0.0, 0.0);
        }
        self.terms
            .iter()
            .map(|&(c, x0)| c * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * x0 * xi))
            .sum()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: SignalFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self::new(
            file.terms
                .iter()
                .map(|t| (C64::new(t.c[0], t.c[1]), t.x0))
                .collect(),
        ))
    }

    pub fn to_json_string(&self) -> String {
        let file = SignalFile {
            terms: self
                .terms
                .iter()
                .map(|&(c, x0)| TermJson {
                    c: [c.re, c.im],
                    x0,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }
}

/// `T(f)(x)`.
///
/// Symbols that expand into exponential polynomials (translations,
/// derivatives, difference quotients and products of these) are applied in
/// closed form through sinc derivatives; anything else falls back to
/// Gauss–Legendre quadrature over the band.
pub fn apply_operator(k: &Multiplier, f: &BandlimitedSignal, x: f64) -> C64 {
    match k.exp_terms() {
        Some(terms) => f
            .terms
            .iter()
            .map(|&(c, x0)| {
                let s: C64 = terms
                    .iter()
                    .map(|t| t.coeff * sinc_derivative(t.degree, x - x0 + t.shift))
                    .sum();
                c * s
            })
            .sum(),
        None => apply_operator_quadrature(k, f, x, &GaussLegendre::new(DEFAULT_QUAD_ORDER)),
    }
}

/// `T(f)(x)` by quadrature only.
pub fn apply_operator_quadrature(
    k: &Multiplier,
    f: &BandlimitedSignal,
    x: f64,
    rule: &GaussLegendre,
) -> C64 {
    f.terms
        .iter()
        .map(|&(c, x0)| c * fourier_integral(rule, -0.5, 0.5, x - x0, |xi| k.eval(xi)).0)
        .sum()
}

/// `‖f‖²` from the Gram matrix of sinc translates, `⟨sinc(·−x_j), sinc(·−x_k)⟩ = sinc(x_j − x_k)`.
pub fn l2_norm_sq(f: &BandlimitedSignal) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for &(cj, xj) in &f.terms {
        for &(ck, xk) in &f.terms {
            s += cj * ck.conj() * sinc(xj - xk);
        }
    }
    s.re.max(0.0)
}

/// Samples `T_n(f)(ρm)` for `n = 1..N`, `|m| ≤ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    n_ops: usize,
    m_max: usize,
    rho: f64,
    data: Vec<Vec<C64>>,
}

impl SampleSet {
    pub fn new(rho: f64, m_max: usize, data: Vec<Vec<C64>>) -> Result<Self> {
        if data.is_empty() || data.iter().any(|row| row.len() != 2 * m_max + 1) {
            return Err(Error::InvalidArgument(
                "sample data must be N rows of 2M+1 values".into(),
            ));
        }
        Ok(Self {
            n_ops: data.len(),
            m_max,
            rho,
            data,
        })
    }

    pub fn n_ops(&self) -> usize {
        self.n_ops
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `T_n(f)(ρm)`, `n` zero-based.
    pub fn get(&self, n: usize, m: i64) -> C64 {
        self.data[n][(m + self.m_max as i64) as usize]
    }

    pub fn row(&self, n: usize) -> &[C64] {
        &self.data[n]
    }

    pub fn ms(&self) -> impl Iterator<Item = i64> {
        let m = self.m_max as i64;
        -m..=m
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}

pub fn sample_family(family: &OperatorFamily, f: &BandlimitedSignal, m_max: usize) -> SampleSet {
    let m = m_max as i64;
    let data = family
        .members()
        .iter()
        .map(|k| {
            (-m..=m)
                .map(|j| apply_operator(k, f, family.rho() * j as f64))
                .collect()
        })
        .collect();
    SampleSet {
        n_ops: family.n(),
        m_max,
        rho: family.rho(),
        data,
    }
}
