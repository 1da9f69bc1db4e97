//! Fourier multipliers on the band `[-1/2, 1/2]` and operator families.
//!
//! A multiplier operator acts as `T(f)(x) = ∫ f̂(ξ) K(ξ) e^{2πixξ} dξ`. Symbols
//! are drawn from a closed algebra: a polynomial in `2πiξ`, an exponential
//! shift, a product of `sinc(2εξ)` factors, all raised to a positive power.
//! This covers translations, derivatives, difference quotients and their
//! compositions. A tabulated symbol is available for anything else.

use std::f64::consts::PI;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::special::sinc;
use crate::tolerances::TOL_ROOT;
use crate::C64;

/// Closed-form symbol `[P(2πiξ) · e^{2πiaξ} · Π_j sinc(2ε_j ξ)]^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSpec {
    /// `c_0, …, c_d` of `P(y) = Σ c_j y^j`, `y = 2πiξ`.
    pub poly_coeffs: Vec<C64>,
    /// Translation `a`, in sample spacings.
    pub shift: f64,
    /// Nonzero `ε_j`.
    pub sinc_factors: Vec<f64>,
    /// `k ≥ 1`.
    pub power: u32,
}

/// One term `coeff · (2πiξ)^degree · e^{2πi·shift·ξ}` of an exponential polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: C64,
    pub degree: u32,
    pub shift: f64,
}

const MAX_EXP_TERMS: usize = 4096;

impl MultiplierSpec {
    pub fn identity() -> Self {
        Self {
            poly_coeffs: vec![C64::new(1.0, 0.0)],
            shift: 0.0,
            sinc_factors: Vec::new(),
            power: 1,
        }
    }

    /// `f ↦ f(· + a)`.
    pub fn shift(a: f64) -> Self {
        Self {
            shift: a,
            ..Self::identity()
        }
    }

    /// `f ↦ f^{(order)}(· + shift)`.
    pub fn derivative(order: u32, shift: f64) -> Self {
        let mut poly_coeffs = vec![C64::new(0.0, 0.0); order as usize + 1];
        poly_coeffs[order as usize] = C64::new(1.0, 0.0);
        Self {
            poly_coeffs,
            shift,
            sinc_factors: Vec::new(),
            power: 1,
        }
    }

    /// Symmetric difference quotient `f ↦ (f(· + b + ε) − f(· + b − ε)) / (2ε)`,
    /// symbol `2πiξ · sinc(2εξ) · e^{2πibξ}`.
    pub fn diffquot(epsilon: f64, shift: f64) -> Result<Self> {
        if epsilon == 0.0 || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(
                "difference quotient needs epsilon != 0".into(),
            ));
        }
        Ok(Self {
            poly_coeffs: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            shift,
            sinc_factors: vec![epsilon],
            power: 1,
        })
    }

    pub fn poly(coeffs: Vec<C64>, shift: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(Self {
            poly_coeffs: coeffs,
            shift,
            sinc_factors: Vec::new(),
            power: 1,
        })
    }

    /// The symbol raised to the `k`-th power (`k = 0` gives the identity).
    pub fn powered(&self, k: u32) -> Self {
        if k == 0 {
            return Self::identity();
        }
        Self {
            power: self.power * k,
            ..self.clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.poly_coeffs.len() == 1
            && self.poly_coeffs[0] == C64::new(1.0, 0.0)
            && self.shift == 0.0
            && self.sinc_factors.is_empty()
            && self.power == 1
    }

    pub fn eval(&self, xi: f64) -> C64 {
        let y = C64::new(0.0, 2.0 * PI * xi);
        let p = crate::linalg::poly_eval(&self.poly_coeffs, y);
        let e = C64::from_polar(1.0, 2.0 * PI * self.shift * xi);
        let s: f64 = self
            .sinc_factors
            .iter()
            .map(|&eps| sinc(2.0 * eps * xi))
            .product();
        (p * e * s).powu(self.power)
    }

    /// Rewrite the symbol as `Σ coeff · (2πiξ)^d · e^{2πi·s·ξ}` when possible.
    ///
    /// Each `sinc(2εξ)` equals `(e^{2πiεξ} − e^{−2πiεξ}) / (2ε · 2πiξ)`, so the
    /// expansion exists when `P^k` is divisible by `y^{k·#sinc}`.
    pub fn exp_terms(&self) -> Option<Vec<ExpTerm>> {
        let k = self.power as usize;
        let mut poly = vec![C64::new(1.0, 0.0)];
        for _ in 0..k {
            poly = crate::linalg::poly_mul(&poly, &self.poly_coeffs);
        }
        let drop = k * self.sinc_factors.len();
        if poly.len() <= drop || poly[..drop].iter().any(|c| *c != C64::new(0.0, 0.0)) {
            return None;
        }
        let poly = &poly[drop..];

        let mut exps: Vec<(C64, f64)> = vec![(C64::new(1.0, 0.0), self.shift * k as f64)];
        for &eps in &self.sinc_factors {
            for _ in 0..k {
                let half = C64::new(1.0 / (2.0 * eps), 0.0);
                let mut next: Vec<(C64, f64)> = Vec::with_capacity(2 * exps.len());
                for &(c, s) in &exps {
                    push_merged(&mut next, c * half, s + eps);
                    push_merged(&mut next, -c * half, s - eps);
                }
                if next.len() > MAX_EXP_TERMS {
                    return None;
                }
                exps = next;
            }
        }

        let mut terms = Vec::new();
        for (d, &pc) in poly.iter().enumerate() {
            if pc == C64::new(0.0, 0.0) {
                continue;
            }
            for &(c, s) in &exps {
                if c != C64::new(0.0, 0.0) {
                    terms.push(ExpTerm {
                        coeff: pc * c,
                        degree: d as u32,
                        shift: s,
                    });
                }
            }
        }
        if terms.len() > MAX_EXP_TERMS {
            return None;
        }
        Some(terms)
    }
}

fn push_merged(v: &mut Vec<(C64, f64)>, c: C64, s: f64) {
    if let Some(slot) = v.iter_mut().find(|(_, t)| (t - s).abs() < 1e-14) {
        slot.0 += c;
    } else {
        v.push((c, s));
    }
}

/// Samples of a symbol on a uniform grid over `[-1/2, 1/2]`, linearly
/// interpolated. No closed-form cross-checks are available for these.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedMultiplier {
    values: Vec<C64>,
}

impl TabulatedMultiplier {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "tabulated multiplier needs at least two samples".into(),
            ));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidArgument(
                "tabulated multiplier must be finite".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn from_fn<F: Fn(f64) -> C64>(samples: usize, f: F) -> Result<Self> {
        let n = samples.max(2);
        Self::new(
            (0..n)
                .map(|i| f(-0.5 + i as f64 / (n - 1) as f64))
                .collect(),
        )
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn eval(&self, xi: f64) -> C64 {
        let n = self.values.len();
        let t = ((xi + 0.5) * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// A symbol `K(ξ)` on the band.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    Closed(MultiplierSpec),
    Tabulated(TabulatedMultiplier),
}

impl Multiplier {
    pub fn eval(&self, xi: f64) -> C64 {
        match self {
            Multiplier::Closed(s) => s.eval(xi),
            Multiplier::Tabulated(t) => t.eval(xi),
        }
    }

    pub fn as_closed(&self) -> Option<&MultiplierSpec> {
        match self {
            Multiplier::Closed(s) => Some(s),
            Multiplier::Tabulated(_) => None,
        }
    }

    pub fn exp_terms(&self) -> Option<Vec<ExpTerm>> {
        self.as_closed().and_then(MultiplierSpec::exp_terms)
    }

    /// `K^k` (identity for `k = 0`). Tabulated symbols are raised pointwise.
    pub fn powered(&self, k: u32) -> Multiplier {
        match self {
            Multiplier::Closed(s) => Multiplier::Closed(s.powered(k)),
            Multiplier::Tabulated(t) => Multiplier::Tabulated(TabulatedMultiplier {
                values: t.values.iter().map(|v| v.powu(k)).collect(),
            }),
        }
    }
}

impl From<MultiplierSpec> for Multiplier {
    fn from(s: MultiplierSpec) -> Self {
        Multiplier::Closed(s)
    }
}

impl From<TabulatedMultiplier> for Multiplier {
    fn from(t: TabulatedMultiplier) -> Self {
        Multiplier::Tabulated(t)
    }
}

pub fn eval_multiplier(spec: &MultiplierSpec, xi: f64) -> C64 {
    spec.eval(xi)
}

/// The operators `T = (T_1, …, T_N)` sampled on `ρℤ`, queried against `PW_{δπ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFamily {
    members: Vec<Multiplier>,
    rho: f64,
    delta: f64,
}

impl OperatorFamily {
    /// Family with the default lattice `ρ = N` and band `δ = 1`.
    pub fn new<M: Into<Multiplier>>(members: Vec<M>) -> Result<Self> {
        let members: Vec<Multiplier> = members.into_iter().map(Into::into).collect();
        if members.is_empty() {
            return Err(Error::InvalidArgument(
                "operator family needs N >= 1 members".into(),
            ));
        }
        let rho = members.len() as f64;
        Ok(Self {
            members,
            rho,
            delta: 1.0,
        })
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rho must be positive, got {rho}"
            )));
        }
        self.rho = rho;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive, got {delta}"
            )));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn members(&self) -> &[Multiplier] {
        &self.members
    }

    pub fn member(&self, n: usize) -> &Multiplier {
        &self.members[n]
    }

    /// Whether the family samples on the lattice `Nℤ` of the interpolation theorem.
    pub fn is_critical_lattice(&self) -> bool {
        (self.rho - self.n() as f64).abs() < 1e-12
    }

    /// `T = (identity)`, classical sinc interpolation.
    pub fn shannon() -> Self {
        Self::new(vec![MultiplierSpec::identity()]).expect("nonempty")
    }

    /// Values and first derivatives on `2ℤ`.
    pub fn vaaler() -> Self {
        Self::littmann(2)
    }

    /// Derivatives of orders `0, …, N−1` on `Nℤ`.
    pub fn littmann(n: usize) -> Self {
        power_family(&MultiplierSpec::derivative(1, 0.0), n).expect("n >= 1")
    }

    /// Translations `f(· + a_n)` on `Nℤ`, `N = nodes.len()`.
    pub fn shifted(nodes: &[f64]) -> Result<Self> {
        Self::new(nodes.iter().map(|&a| MultiplierSpec::shift(a)).collect())
    }

    /// `f(· + a)` and `f^{(n)}(· + b)` on `2ℤ`.
    pub fn twonode(order: u32, a: f64, b: f64) -> Self {
        Self::new(vec![
            MultiplierSpec::shift(a),
            MultiplierSpec::derivative(order, b),
        ])
        .expect("nonempty")
    }

    /// `f(· + a)` and the difference quotient of width `ε` around `· + b`, on `2ℤ`.
    pub fn diffquot(epsilon: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(vec![
            MultiplierSpec::shift(a),
            MultiplierSpec::diffquot(epsilon, b)?,
        ])
    }

    /// Parse the JSON family format.
    ///
    /// ```json
    /// { "N": 2, "rho": 2.0, "delta": 1.0,
    ///   "operators": [ {"type": "identity"}, {"type": "derivative", "order": 1, "shift": 0.0} ] }
    /// ```
    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(ops) = value.get("operators").and_then(Value::as_array) {
            for op in ops {
                check_operator_types(op)?;
            }
        }
        let file: FamilyFile =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        if file.operators.len() != file.n {
            return Err(Error::Parse(format!(
                "N = {} but {} operators given",
                file.n,
                file.operators.len()
            )));
        }
        let members = file
            .operators
            .iter()
            .map(OperatorJson::to_spec)
            .collect::<Result<Vec<_>>>()?;
        let mut family = Self::new(members)?;
        if let Some(rho) = file.rho {
            family = family.with_rho(rho)?;
        }
        if let Some(delta) = file.delta {
            family = family.with_delta(delta)?;
        }
        Ok(family)
    }
}

const OPERATOR_TYPES: [&str; 6] = [
    "identity",
    "shift",
    "derivative",
    "diffquot",
    "poly",
    "power",
];

fn check_operator_types(op: &Value) -> Result<()> {
    let Some(obj) = op.as_object() else {
        return Err(Error::Parse("operator must be a JSON object".into()));
    };
    match obj.get("type").and_then(Value::as_str) {
        None => Err(Error::Parse("operator is missing a string `type`".into())),
        Some(t) if !OPERATOR_TYPES.contains(&t) => Err(Error::UnknownOperator(t.to_string())),
        Some("power") => match obj.get("base") {
            Some(base) => check_operator_types(base),
            None => Ok(()),
        },
        Some(_) => Ok(()),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    #[serde(rename = "N")]
    n: usize,
    rho: Option<f64>,
    delta: Option<f64>,
    operators: Vec<OperatorJson>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum OperatorJson {
    Identity,
    Shift {
        a: f64,
    },
    Derivative {
        order: u32,
        #[serde(default)]
        shift: f64,
    },
    Diffquot {
        epsilon: f64,
        #[serde(default)]
        shift: f64,
    },
    Poly {
        coeffs: Vec<[f64; 2]>,
        #[serde(default)]
        shift: f64,
    },
    Power {
        base: Box<OperatorJson>,
        k: u32,
    },
}

impl OperatorJson {
    fn to_spec(&self) -> Result<MultiplierSpec> {
        Ok(match self {
            OperatorJson::Identity => MultiplierSpec::identity(),
            OperatorJson::Shift { a } => MultiplierSpec::shift(*a),
            OperatorJson::Derivative { order, shift } => MultiplierSpec::derivative(*order, *shift),
            OperatorJson::Diffquot { epsilon, shift } => {
                MultiplierSpec::diffquot(*epsilon, *shift)?
            }
            OperatorJson::Poly { coeffs, shift } => MultiplierSpec::poly(
                coeffs.iter().map(|c| C64::new(c[0], c[1])).collect(),
                *shift,
            )?,
            OperatorJson::Power { base, k } => {
                if *k == 0 {
                    return Err(Error::Parse("power k must be >= 1".into()));
                }
                base.to_spec()?.powered(*k)
            }
        })
    }
}

/// Family `(1, K, K², …, K^{N−1})` of powers of one operator.
pub fn power_family(base: &MultiplierSpec, n: usize) -> Result<OperatorFamily> {
    if n < 1 {
        return Err(Error::InvalidArgument("power family needs N >= 1".into()));
    }
    OperatorFamily::new((0..n).map(|k| base.powered(k as u32)).collect())
}

/// Points of `[-1/2, 1/2]` where every symbol of the family vanishes.
///
/// Scans a uniform grid, then polishes discrete local minima of
/// `max_n |K_n(ξ)|` by golden-section search so roots between grid points
/// are not missed. Any hit rules out an interpolation formula.
pub fn common_root_scan(family: &OperatorFamily, grid_size: usize) -> Result<Vec<f64>> {
    common_root_scan_with_tol(family, grid_size, TOL_ROOT)
}

pub fn common_root_scan_with_tol(
    family: &OperatorFamily,
    grid_size: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid_size must be >= 2".into()));
    }
    let envelope = |xi: f64| {
        family
            .members()
            .iter()
            .map(|k| k.eval(xi).norm())
            .fold(0.0, f64::max)
    };
    let step = 1.0 / (grid_size - 1) as f64;
    let grid: Vec<f64> = (0..grid_size).map(|i| -0.5 + i as f64 * step).collect();
    let vals: Vec<f64> = grid.iter().map(|&xi| envelope(xi)).collect();

    let mut roots: Vec<f64> = grid
        .iter()
        .zip(&vals)
        .filter(|(_, &v)| v < tol)
        .map(|(&x, _)| x)
        .collect();

    let mut minima: Vec<usize> = (0..grid_size)
        .filter(|&i| {
            let left = i == 0 || vals[i] <= vals[i - 1];
            let right = i + 1 == grid_size || vals[i] <= vals[i + 1];
            left && right && vals[i] >= tol
        })
        .collect();
    minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    minima.truncate(64);
    for i in minima {
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid_size - 1)];
        let (x, v) = golden_section_min(lo, hi, 200, envelope);
        if v < tol && !roots.iter().any(|&r| (r - x).abs() < 0.5 * step) {
            roots.push(x);
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Minimize `f` on `[lo, hi]` by golden-section search; returns `(argmin, min)`.
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    iters: usize,
    f: F,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if hi - lo <= f64::EPSILON * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let candidates = [(lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)];
    candidates
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn identity_evaluates_to_one() {
        let id = MultiplierSpec::identity();
        assert!(id.is_identity());
        assert_eq!(id.eval(0.3), C64::new(1.0, 0.0));
    }

    #[test]
    fn derivative_symbol() {
        let d = MultiplierSpec::derivative(1, 0.0);
        let v = d.eval(0.25);
        assert!(close(v, C64::new(0.0, 2.0 * PI * 0.25), 1e-15));
        assert_relative_eq!(v.im, 1.5708, epsilon = 1e-4);
    }

    #[test]
    fn diffquot_symbol_is_a_difference_of_shifts() {
        // Deterministic pseudo-random points in [-1/2, 1/2].
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..20 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let xi = (state as f64 / u64::MAX as f64) - 0.5;
            for &(eps, b) in &[(0.3, 0.0), (0.5, 1.0), (1.7, -0.4)] {
                let spec = MultiplierSpec::diffquot(eps, b).unwrap();
                let closed = C64::new(0.0, 2.0 * PI * xi)
                    * sinc(2.0 * eps * xi)
                    * C64::from_polar(1.0, 2.0 * PI * b * xi);
                let shifts = (C64::from_polar(1.0, 2.0 * PI * (b + eps) * xi)
                    - C64::from_polar(1.0, 2.0 * PI * (b - eps) * xi))
                    / (2.0 * eps);
                assert!(close(spec.eval(xi), closed, 1e-12));
                assert!(close(spec.eval(xi), shifts, 1e-12));
            }
        }
    }

    #[test]
    fn diffquot_rejects_zero_width() {
        assert!(matches!(
            MultiplierSpec::diffquot(0.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn power_family_members() {
        let fam = power_family(&MultiplierSpec::derivative(1, 0.0), 3).unwrap();
        let xi = 0.17;
        let y = C64::new(0.0, 2.0 * PI * xi);
        assert_eq!(fam.n(), 3);
        assert!(close(fam.member(0).eval(xi), C64::new(1.0, 0.0), 1e-15));
        assert!(close(fam.member(1).eval(xi), y, 1e-15));
        assert!(close(fam.member(2).eval(xi), y * y, 1e-14));

        let fam = power_family(&MultiplierSpec::identity(), 2).unwrap();
        assert_eq!(fam.member(1).eval(0.2), C64::new(1.0, 0.0));

        let fam = power_family(&MultiplierSpec::shift(0.5), 2).unwrap();
        assert!(close(
            fam.member(1).eval(xi),
            C64::from_polar(1.0, PI * xi),
            1e-15
        ));

        assert!(matches!(
            power_family(&MultiplierSpec::identity(), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn common_root_of_pure_derivatives() {
        let fam = OperatorFamily::new(vec![
            MultiplierSpec::derivative(1, 0.0),
            MultiplierSpec::derivative(2, 0.0),
        ])
        .unwrap();
        let roots = common_root_scan(&fam, 1000).unwrap();
        assert!(roots.iter().any(|r| r.abs() < 1e-9), "{roots:?}");
    }

    #[test]
    fn no_common_root_with_identity() {
        let fam = OperatorFamily::littmann(2);
        assert!(common_root_scan(&fam, 1001).unwrap().is_empty());
    }

    #[test]
    fn common_root_with_opposite_shifts() {
        let fam = OperatorFamily::new(vec![
            MultiplierSpec::derivative(1, 1.0),
            MultiplierSpec::derivative(1, -1.0),
        ])
        .unwrap();
        let roots = common_root_scan(&fam, 512).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].abs() < 1e-9);
    }

    #[test]
    fn exp_terms_reproduce_the_symbol() {
        let specs = vec![
            MultiplierSpec::shift(0.7),
            MultiplierSpec::derivative(2, -0.3),
            MultiplierSpec::diffquot(0.4, 1.0).unwrap(),
            MultiplierSpec::diffquot(0.4, 1.0).unwrap().powered(3),
            MultiplierSpec::poly(
                vec![C64::new(1.0, 0.5), C64::new(0.0, 0.0), C64::new(-2.0, 0.0)],
                0.25,
            )
            .unwrap()
            .powered(2),
        ];
        for spec in specs {
            let terms = spec.exp_terms().expect("expansion exists");
            for i in 0..=20 {
                let xi = -0.5 + i as f64 / 20.0;
                let y = C64::new(0.0, 2.0 * PI * xi);
                let v: C64 = terms
                    .iter()
                    .map(|t| {
                        t.coeff * y.powu(t.degree) * C64::from_polar(1.0, 2.0 * PI * t.shift * xi)
                    })
                    .sum();
                assert!(close(v, spec.eval(xi), 1e-11), "{spec:?} at {xi}");
            }
        }
        let pure_sinc = MultiplierSpec {
            sinc_factors: vec![0.3],
            ..MultiplierSpec::identity()
        };
        assert!(pure_sinc.exp_terms().is_none());
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let t = TabulatedMultiplier::from_fn(101, |xi| C64::new(xi, 0.0)).unwrap();
        assert_relative_eq!(t.eval(0.123).re, 0.123, epsilon = 1e-12);
        assert_relative_eq!(t.eval(-0.5).re, -0.5, epsilon = 1e-15);
        assert_relative_eq!(t.eval(0.5).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn parse_family_json() {
        let fam = OperatorFamily::from_json_str(
            r#"{"N": 2, "operators": [{"type":"identity"}, {"type":"derivative","order":1,"shift":0.0}]}"#,
        )
        .unwrap();
        assert_eq!(fam, OperatorFamily::vaaler());
        assert_eq!(fam.rho(), 2.0);
        assert_eq!(fam.delta(), 1.0);

        let fam = OperatorFamily::from_json_str(
            r#"{"N": 3, "rho": 2.5, "delta": 0.5, "operators": [
                {"type":"shift","a":0.5},
                {"type":"poly","coeffs":[[1,0],[0,2]],"shift":0.1},
                {"type":"power","base":{"type":"diffquot","epsilon":0.3,"shift":0},"k":2}]}"#,
        )
        .unwrap();
        assert_eq!(fam.rho(), 2.5);
        assert_eq!(fam.delta(), 0.5);
        assert_eq!(fam.member(2).as_closed().unwrap().power, 2);
    }

    #[test]
    fn parse_errors_are_classified() {
        assert!(matches!(
            OperatorFamily::from_json_str("{not json"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            OperatorFamily::from_json_str(r#"{"N":1,"operators":[{"type":"laplacian"}]}"#),
            Err(Error::UnknownOperator(t)) if t == "laplacian"
        ));
        assert!(matches!(
            OperatorFamily::from_json_str(
                r#"{"N":1,"operators":[{"type":"power","k":2,"base":{"type":"warp"}}]}"#
            ),
            Err(Error::UnknownOperator(_))
        ));
        assert!(matches!(
            OperatorFamily::from_json_str(r#"{"N":1,"extra":0,"operators":[{"type":"identity"}]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            OperatorFamily::from_json_str(r#"{"N":1,"operators":[{"type":"shift","a":1,"b":2}]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            OperatorFamily::from_json_str(r#"{"N":2,"operators":[{"type":"identity"}]}"#),
            Err(Error::Parse(_))
        ));
        assert!(OperatorFamily::from_json_str(
            r#"{"N":1,"rho":-1,"operators":[{"type":"identity"}]}"#
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn power_k_equals_power_one_to_the_k(
            re in -2.0f64..2.0, im in -2.0f64..2.0, c1 in -1.0f64..1.0,
            shift in -3.0f64..3.0, eps in 0.05f64..2.0, k in 1u32..5, xi in -0.5f64..0.5,
        ) {
            let base = MultiplierSpec {
                poly_coeffs: vec![C64::new(re, im), C64::new(c1, 0.0)],
                shift,
                sinc_factors: vec![eps],
                power: 1,
            };
            let lhs = base.powered(k).eval(xi);
            let rhs = base.eval(xi).powu(k);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
