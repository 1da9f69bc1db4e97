//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use pwinterp::criterion::{classify, decide_theorem2};
use pwinterp::error::NoFormulaReason;
use pwinterp::kernels::Kernels;
use pwinterp::special::sinc;
use pwinterp::verify::{
    diffquot_rejection, littmann_derivative_residual, littmann_jump_residual,
    nondegenerate_diffquot, product_formula_residual,
};
use pwinterp::{
    classify_theorem1, classify_theorem2, common_root_scan, det_profile, dynamical_kernels,
    frame_ratio, littmann_coeffs, periodization_check, reconstruct, residual_norms, sample_family,
    synthesize_spectral, verify_biorthogonality, BandlimitedSignal, ClosedFormKernels,
    CriterionCase, MultiplierSpec, OperatorFamily, Verdict, C64,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn max_gap<A: Kernels + ?Sized, B: Kernels + ?Sized>(
    a: &A,
    b: &B,
    xs: &[f64],
) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for &x in xs {
        let u = a.eval_all(x).map_err(e)?;
        let v = b.eval_all(x).map_err(e)?;
        for (p, q) in u.iter().zip(&v) {
            worst = worst.max((p - q).norm());
        }
    }
    Ok(worst)
}

/// Independent expansion of `Π_{j=1}^{N−1} (y + πi − 2πij/N)`, lowest degree first.
fn expand_littmann_product(n: usize) -> Vec<C64> {
    let mut p = vec![C64::new(1.0, 0.0)];
    for j in 1..n {
        let root = C64::new(0.0, PI - 2.0 * PI * j as f64 / n as f64);
        let mut next = vec![C64::new(0.0, 0.0); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k] += c * root;
            next[k + 1] += c;
        }
        p = next;
    }
    p
}

fn criterion_1() -> Outcome {
    let fam = OperatorFamily::shannon();
    let k = ClosedFormKernels::sinc();
    let f = BandlimitedSignal::new(vec![
        (C64::new(1.0, 0.0), 0.0),
        (C64::new(0.5, 0.0), 0.3),
        (C64::new(0.0, -0.25), -1.7),
    ]);
    let s = sample_family(&fam, &f, 200);
    let mut at_integers = 0.0f64;
    for m in -10..=10 {
        let r = reconstruct(&s, &k, m as f64).map_err(e)?;
        at_integers = at_integers.max((r.value - f.eval(m as f64)).norm());
    }
    let (sup, _) = residual_norms(&f, &s, &k, &linspace(-2.0, 2.0, 401)).map_err(e)?;
    ensure(
        at_integers < 1e-13,
        format!("integer residual {at_integers:.2e}"),
    )?;
    ensure(sup < 5e-3, format!("sup error {sup:.2e} >= 5e-3"))?;
    Ok(format!(
        "integer residual {at_integers:.1e}, sup error on [-2,2] {sup:.2e} (M=200)"
    ))
}

fn criterion_2() -> Outcome {
    let fam = OperatorFamily::vaaler();
    let field = det_profile(&fam, 4096, 3).map_err(e)?;
    let det_dev = field
        .dets
        .iter()
        .map(|d| (d.norm() - PI / 4.0).abs())
        .fold(0.0, f64::max);
    ensure(
        det_dev < 1e-12,
        format!("|det| deviates from pi/4 by {det_dev:.2e}"),
    )?;

    let k = synthesize_spectral(&fam, 64).map_err(e)?;
    let mut gap = 0.0f64;
    for x in linspace(-4.0, 4.0, 50) {
        let g = k.eval_all(x).map_err(e)?;
        let s2 = sinc(x / 2.0).powi(2);
        gap = gap.max((g[0] - s2).norm()).max((g[1] - x * s2).norm());
    }
    ensure(gap < 1e-6, format!("kernel gap {gap:.2e}"))?;
    let bio = verify_biorthogonality(&fam, &k, 3).map_err(e)?;
    ensure(bio < 1e-6, format!("biorthogonality {bio:.2e}"))?;
    Ok(format!(
        "det deviation {det_dev:.1e}, kernel gap {gap:.1e}, biorthogonality {bio:.1e}"
    ))
}

fn criterion_3() -> Outcome {
    let (mut coeff, mut bio, mut jump, mut deriv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 1..=4 {
        let c = littmann_coeffs(n);
        let oracle = expand_littmann_product(n);
        ensure(
            c.len() == oracle.len(),
            format!("N={n}: {} coefficients", c.len()),
        )?;
        coeff = coeff.max(
            c.iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        );
        let k = ClosedFormKernels::littmann(n);
        bio = bio.max(verify_biorthogonality(&OperatorFamily::littmann(n), &k, 3).map_err(e)?);
        jump = jump.max(littmann_jump_residual(n).map_err(e)?);
        deriv = deriv.max(littmann_derivative_residual(n).map_err(e)?);
    }
    ensure(coeff < 1e-12, format!("coefficients {coeff:.2e}"))?;
    ensure(bio < 1e-8, format!("biorthogonality {bio:.2e}"))?;
    ensure(jump < 1e-8, format!("jumps {jump:.2e}"))?;
    ensure(deriv < 1e-5, format!("derivative relation {deriv:.2e}"))?;
    Ok(format!("coeffs {coeff:.1e}, biorthogonality {bio:.1e}, jumps {jump:.1e}, derivative relation {deriv:.1e}"))
}

fn criterion_4() -> Outcome {
    let nodes = [0.0, 0.7, 1.9];
    let fam = OperatorFamily::shifted(&nodes).map_err(e)?;
    let report = classify_theorem1(&det_profile(&fam, 4096, 3).map_err(e)?).map_err(e)?;
    ensure(
        report.case == CriterionCase::PositiveEssInf,
        format!("classified {:?}", report.case),
    )?;

    let k = ClosedFormKernels::shifted(&nodes).map_err(e)?;
    let mut interp = 0.0f64;
    for n in 0..3 {
        for (m, &a) in nodes.iter().enumerate() {
            for j in -4i32..=4 {
                let want = if n == m && j == 0 { 1.0 } else { 0.0 };
                let v = k.eval(n, 3.0 * j as f64 + a).map_err(e)?;
                interp = interp.max((v - want).norm());
            }
        }
    }
    ensure(interp < 1e-12, format!("interpolation {interp:.2e}"))?;
    let synth = synthesize_spectral(&fam, 64).map_err(e)?;
    let gap = max_gap(&k, &synth, &linspace(-6.0, 6.0, 61))?;
    ensure(gap < 1e-6, format!("closed vs synthesized {gap:.2e}"))?;

    let collide = OperatorFamily::shifted(&[0.0, 2.0]).map_err(e)?;
    let c = classify(&det_profile(&collide, 4096, 3).map_err(e)?);
    ensure(
        c.case == CriterionCase::PositiveMeasureZeroSet,
        format!("collision classified {:?}", c.case),
    )?;
    Ok(format!(
        "case 1 (ess-inf {:.3e}), interpolation {interp:.1e}, closed vs synthesized {gap:.1e}, collision case 3",
        report.essinf_estimate
    ))
}

fn criterion_5() -> Outcome {
    let (mut prod, mut gap) = (0.0f64, 0.0f64);
    let xs = linspace(-4.0, 4.0, 33);
    for base in [
        MultiplierSpec::derivative(1, 0.0),
        MultiplierSpec::shift(0.5),
    ] {
        for n in 2..=3 {
            prod = prod.max(product_formula_residual(&base, n).map_err(e)?);
            let dynk = dynamical_kernels(&base, n, 64).map_err(e)?;
            let fam = pwinterp::power_family(&base, n).map_err(e)?;
            let synth = synthesize_spectral(&fam, 64).map_err(e)?;
            gap = gap.max(max_gap(&dynk, &synth, &xs)?);
        }
    }
    ensure(prod < 1e-10, format!("product formula {prod:.2e}"))?;
    ensure(gap < 1e-5, format!("dynamical vs synthesized {gap:.2e}"))?;
    Ok(format!(
        "product formula rel. {prod:.1e}, dynamical vs synthesized {gap:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    // (a) every member a derivative: all symbols vanish at ξ = 0.
    let fam = OperatorFamily::new(vec![
        MultiplierSpec::derivative(1, 0.0),
        MultiplierSpec::derivative(2, 0.3),
    ])
    .map_err(e)?;
    let roots = common_root_scan(&fam, 4096).map_err(e)?;
    ensure(
        roots.iter().any(|r| r.abs() < 1e-8),
        format!("common roots {roots:?}"),
    )?;

    // (b) parity exclusions.
    for order in 1..=3u32 {
        for d in 0..=2 {
            let excluded = order % 2 == d % 2;
            let rejected = matches!(
                pwinterp::twonode_kernels(order, d as f64, 0.0),
                Err(pwinterp::Error::NoFormula(NoFormulaReason::ParityExclusion))
            );
            ensure(
                excluded == rejected,
                format!("twonode n={order}, a-b={d}: rejected={rejected}"),
            )?;
        }
    }

    // (c) difference-quotient degeneracies, by rule and by determinant.
    let degenerate = [
        ((0.5, 1.0, 0.0), NoFormulaReason::OddOffset),
        ((1.0, 0.0, 0.0), NoFormulaReason::IntegerEpsilon),
        ((-2.0, 0.5, 0.0), NoFormulaReason::IntegerEpsilon),
        ((1.5, 0.0, 0.0), NoFormulaReason::LargeEpsilon),
        ((1.25, 2.0, 0.0), NoFormulaReason::LargeEpsilon),
    ];
    for ((eps, a, b), reason) in degenerate {
        let got = diffquot_rejection(eps, a, b);
        ensure(
            got == Some(reason.clone()),
            format!("({eps},{a},{b}) -> {got:?}"),
        )?;
        let fam = OperatorFamily::diffquot(eps, a, b).map_err(e)?;
        let c = classify(&det_profile(&fam, 1024, 2).map_err(e)?);
        ensure(
            c.case != CriterionCase::PositiveEssInf,
            format!("({eps},{a},{b}) determinant has no zero"),
        )?;
    }
    let mut fired = 0usize;
    let mut smallest = f64::INFINITY;
    for i in 0..100 {
        let (eps, a, b) = nondegenerate_diffquot(i);
        if diffquot_rejection(eps, a, b).is_some() {
            fired += 1;
            continue;
        }
        let fam = OperatorFamily::diffquot(eps, a, b).map_err(e)?;
        let c = classify(&det_profile(&fam, 512, 2).map_err(e)?);
        if c.case != CriterionCase::PositiveEssInf {
            fired += 1;
        }
        smallest = smallest.min(c.essinf_estimate);
    }
    ensure(
        fired == 0,
        format!("{fired} false positives on the nondegenerate sweep"),
    )?;
    Ok(format!(
        "common root at 0, parity table exact, 5 degenerate sets rejected, sweep clean (min ess-inf {smallest:.2e})"
    ))
}

fn criterion_7() -> Outcome {
    let fam = OperatorFamily::vaaler();
    let expected = [
        (0.5, Verdict::Yes, Verdict::No),
        (1.0, Verdict::Yes, Verdict::Yes),
        (1.5, Verdict::No, Verdict::Yes),
    ];
    for (delta, ss, is) in expected {
        let v = classify_theorem2(&fam, delta).map_err(e)?;
        ensure(
            v.case == CriterionCase::PositiveEssInf
                && v.stable_sampling == ss
                && v.interpolation_set == is,
            format!("vaaler delta={delta}: {v:?}"),
        )?;
    }
    let dq = OperatorFamily::diffquot(1.0, 0.0, 0.0).map_err(e)?;
    let mut checked = 0;
    for delta in [0.5, 0.75, 1.0] {
        let v = classify_theorem2(&dq, delta).map_err(e)?;
        ensure(
            v.case == CriterionCase::NullZeroSet
                && v.stable_sampling == Verdict::Yes
                && v.interpolation_set == Verdict::No,
            format!("diffquot eps=1 delta={delta}: {v:?}"),
        )?;
        checked += 1;
    }
    let table = decide_theorem2(CriterionCase::PositiveEssInf, 2.0, 1.0, 2);
    ensure(
        table.stable_sampling == Verdict::Yes && table.interpolation_set == Verdict::Yes,
        "critical density",
    )?;
    Ok(format!("vaaler verdicts match for delta in {{0.5,1,1.5}}; eps=1 family yes/no at {checked} densities"))
}

fn probes() -> Vec<BandlimitedSignal> {
    (0..10)
        .map(|i| {
            let t = i as f64;
            BandlimitedSignal::sinc_at(0.17 * t - 0.6)
                .plus(
                    C64::new(0.3 * (t - 4.5) / 4.5, 0.2 * (i % 3) as f64),
                    1.1 + 0.23 * t,
                )
                .plus(C64::new(-0.4, 0.1 * t), -2.0 + 0.31 * t)
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let mut families: Vec<(String, OperatorFamily)> = vec![
        ("shannon".into(), OperatorFamily::shannon()),
        ("vaaler".into(), OperatorFamily::vaaler()),
        (
            "shifted(0,0.7,1.9)".into(),
            OperatorFamily::shifted(&[0.0, 0.7, 1.9]).map_err(e)?,
        ),
        (
            "twonode(1,0,0)".into(),
            OperatorFamily::twonode(1, 0.0, 0.0),
        ),
        (
            "diffquot(0.5,0,0)".into(),
            OperatorFamily::diffquot(0.5, 0.0, 0.0).map_err(e)?,
        ),
    ];
    for n in 3..=4 {
        families.push((format!("littmann({n})"), OperatorFamily::littmann(n)));
    }
    for n in 2..=3 {
        families.push((
            format!("power(shift 1/2, {n})"),
            pwinterp::power_family(&MultiplierSpec::shift(0.5), n).map_err(e)?,
        ));
    }
    let probes = probes();
    let (mut lo, mut hi, mut drift) = (f64::INFINITY, 0.0f64, 0.0f64);
    for (name, fam) in &families {
        for f in &probes {
            let a = frame_ratio(fam, f, 200).map_err(e)?.ratio;
            let b = frame_ratio(fam, f, 400).map_err(e)?.ratio;
            ensure(a > 1e-3, format!("{name}: ratio {a:.3e}"))?;
            let rel = (b - a).abs() / b;
            ensure(
                rel < 1e-2,
                format!("{name}: ratio moved {rel:.2e} as M doubled"),
            )?;
            lo = lo.min(b);
            hi = hi.max(b);
            drift = drift.max(rel);
        }
    }
    Ok(format!(
        "{} families x 10 probes, ratios in [{lo:.3}, {hi:.3}], max drift {drift:.1e}",
        families.len()
    ))
}

fn criterion_9() -> Outcome {
    let corpus: Vec<(OperatorFamily, usize, BandlimitedSignal)> = vec![
        (
            OperatorFamily::shannon(),
            0,
            BandlimitedSignal::sinc_at(0.4),
        ),
        (OperatorFamily::vaaler(), 1, BandlimitedSignal::sinc_at(0.0)),
        (
            OperatorFamily::vaaler(),
            0,
            BandlimitedSignal::sinc_at(0.25).plus(C64::new(0.5, 0.5), -1.0),
        ),
        (
            OperatorFamily::shifted(&[0.0, 0.5]).map_err(e)?,
            1,
            BandlimitedSignal::sinc_at(0.25),
        ),
        (
            OperatorFamily::littmann(3),
            2,
            BandlimitedSignal::sinc_at(-0.3),
        ),
        (
            OperatorFamily::twonode(1, 0.3, 0.0),
            1,
            BandlimitedSignal::sinc_at(0.6),
        ),
        (
            OperatorFamily::diffquot(0.5, 0.0, 0.0).map_err(e)?,
            1,
            BandlimitedSignal::sinc_at(0.1),
        ),
        (
            pwinterp::power_family(&MultiplierSpec::shift(0.5), 3).map_err(e)?,
            2,
            BandlimitedSignal::sinc_at(1.3),
        ),
    ];
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let (fam, member, f) = &corpus[rng.gen_range(0..corpus.len())];
        let n = fam.n() as f64;
        let a: f64 = rng.gen_range(-1.0..1.0);
        let x = (n - 2.0) / 2.0 + rng.gen_range(0.05..0.95);
        let r = |t: usize| periodization_check(fam, *member, f, a, x, t).map_err(e);
        // Partial sums oscillate; compare the envelope over [T, 2T].
        let envelope = |t: usize| -> Result<f64, String> {
            (0..=16)
                .map(|k| r(t + k * t / 16))
                .try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
        };
        let env = [envelope(125)?, envelope(250)?, envelope(500)?];
        let last = r(1000)?;
        ensure(
            last < 1e-3,
            format!("N={n}, member {member}, a={a:.3}, x={x:.3}: residual {last:.2e}"),
        )?;
        ensure(
            env[0] > env[1] && env[1] > env[2],
            format!("envelope not decreasing: {env:?}"),
        )?;
        worst = worst.max(last);
    }
    Ok(format!("5 tuples, worst residual at trunc=1000 {worst:.2e}, envelope decreasing over [125,250],[250,500],[500,1000]"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 shannon baseline", criterion_1, Duration::from_secs(10)),
        (
            "2 vaaler / littmann N=2",
            criterion_2,
            Duration::from_secs(30),
        ),
        ("3 littmann general", criterion_3, Duration::from_secs(120)),
        ("4 shifted nodes", criterion_4, Duration::from_secs(30)),
        ("5 dynamical sampling", criterion_5, Duration::from_secs(60)),
        (
            "6 degenerate detection",
            criterion_6,
            Duration::from_secs(60),
        ),
        (
            "7 density decision table",
            criterion_7,
            Duration::from_secs(10),
        ),
        ("8 frame ratios", criterion_8, Duration::from_secs(60)),
        (
            "9 periodization oracle",
            criterion_9,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
