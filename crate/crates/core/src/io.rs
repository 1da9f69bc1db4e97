//! CSV exports.

use std::io::Write;

use crate::criterion::MatrixField;
use crate::error::Result;
use crate::kernels::Kernels;
use crate::reconstruct::Reconstruction;
use crate::signals::{BandlimitedSignal, SampleSet};

/// Columns `x, re_det, im_det, abs_det, cond`.
pub fn write_det_profile<W: Write>(w: W, field: &MatrixField) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "re_det", "im_det", "abs_det", "cond"])?;
    for i in 0..field.grid.len() {
        let d = field.dets[i];
        out.serialize((field.grid[i], d.re, d.im, d.norm(), field.conds[i]))?;
    }
    out.flush()?;
    Ok(())
}

fn per_kernel_header(first: &[&str], prefix: &str, n: usize) -> Vec<String> {
    let mut h: Vec<String> = first.iter().map(|s| s.to_string()).collect();
    for k in 1..=n {
        h.push(format!("re_{prefix}{k}"));
        h.push(format!("im_{prefix}{k}"));
    }
    h
}

/// Columns `piece, xi, re_ghat1, im_ghat1, …` at the kernels' quadrature nodes.
pub fn write_spectra<W: Write, K: Kernels + ?Sized>(w: W, kernels: &K) -> Result<()> {
    let n = kernels.order();
    let samples = kernels.source_samples(&kernels.rule(), 1)?;
    let mut rows: Vec<(usize, f64, Vec<f64>)> = Vec::with_capacity(n * samples.len());
    for m in 0..n {
        for s in samples.iter() {
            let xi = (m as f64 - s.x) / n as f64;
            let vals = (0..n)
                .flat_map(|k| [s.g[(k, m)].re, s.g[(k, m)].im])
                .collect();
            rows.push((m + 1, xi, vals));
        }
    }
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out = csv::Writer::from_writer(w);
    out.write_record(per_kernel_header(&["piece", "xi"], "ghat", n))?;
    for (piece, xi, vals) in rows {
        let mut rec = vec![piece.to_string(), xi.to_string()];
        rec.extend(vals.iter().map(|v| v.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `x, re_g1, im_g1, …`.
pub fn write_kernel_values<W: Write, K: Kernels + ?Sized>(
    w: W,
    kernels: &K,
    xs: &[f64],
) -> Result<()> {
    let n = kernels.order();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(per_kernel_header(&["x"], "g", n))?;
    for &x in xs {
        let g = kernels.eval_all(x)?;
        let mut rec = vec![x.to_string()];
        rec.extend(g.iter().flat_map(|z| [z.re.to_string(), z.im.to_string()]));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `n, m, re, im` with `n` one-based.
pub fn write_samples<W: Write>(w: W, samples: &SampleSet) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "m", "re", "im"])?;
    for n in 0..samples.n_ops() {
        for m in samples.ms() {
            let v = samples.get(n, m);
            out.serialize((n + 1, m, v.re, v.im))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Columns `x, re_f_true, re_f_rec, abs_error`.
pub fn write_reconstruction<W: Write>(
    w: W,
    f: &BandlimitedSignal,
    xs: &[f64],
    recs: &[Reconstruction],
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "re_f_true", "re_f_rec", "abs_error"])?;
    for (&x, r) in xs.iter().zip(recs) {
        let truth = f.eval(x);
        out.serialize((x, truth.re, r.value.re, (truth - r.value).norm()))?;
    }
    out.flush()?;
    Ok(())
}
