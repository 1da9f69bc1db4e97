use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde_json::json;

use pwinterp::criterion::{classify, decide_theorem2, det_profile_with};
use pwinterp::io::{write_det_profile, write_kernel_values, write_reconstruction, write_spectra};
use pwinterp::reconstruct::{error_norms, reconstruct_many};
use pwinterp::verify::Suite;
use pwinterp::{
    diffquot_kernels, frame_ratio, sample_family, synthesize_spectral, twonode_kernels, verify_biorthogonality,
    BandlimitedSignal, ClosedFormKernels, CriterionOptions, CriterionReport, Error, Kernels, MultiplierSpec,
    OperatorFamily,
};

use crate::config::{parse_range, pick, Config};
use crate::{Cli, ClosedForm, Command, CriterionArgs, KernelArgs, SuiteArg};

pub const EXIT_MALFORMED: u8 = 64;
pub const EXIT_UNKNOWN_OPERATOR: u8 = 65;
pub const EXIT_MISMATCH: u8 = 66;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub source: anyhow::Error,
}

impl CliError {
    fn new(code: u8, source: anyhow::Error) -> Self {
        Self { code, source }
    }

    fn mismatch(msg: impl Into<String>) -> Self {
        Self::new(EXIT_MISMATCH, anyhow!(msg.into()))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Json(_) => EXIT_MALFORMED,
            Error::UnknownOperator(_) => EXIT_UNKNOWN_OPERATOR,
            _ => 1,
        };
        Self::new(code, e.into())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        Self::new(1, e)
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult<u8> {
    let config = Config::load(cli.config.as_deref()).map_err(|e| CliError::new(EXIT_MALFORMED, e))?;
    match cli.command {
        Command::Classify { family, profile, criterion } => cmd_classify(&config, &family, profile.as_deref(), &criterion),
        Command::Kernels { family, out_prefix, closed_form, kernel, x_range, j_range, criterion } => {
            let xs = parse_range(&pick(x_range, config.x_range.clone(), "-4:4:81".into()))?;
            let j_range = pick(j_range, config.j_range, 3);
            cmd_kernels(&config, &family, &out_prefix, closed_form, &kernel, &xs, j_range, &criterion)
        }
        Command::Reconstruct { family, signal, m, grid_range, out, closed_form, kernel, criterion } => {
            let grid = parse_range(&pick(grid_range, config.grid_range.clone(), "-2:2:81".into()))?;
            let m = pick(m, config.m, 40);
            cmd_reconstruct(&config, &family, &signal, m, &grid, out.as_deref(), closed_form, &kernel, &criterion)
        }
        Command::Verify { suite, json } => cmd_verify(suite, json),
    }
}

fn read(path: &Path) -> CliResult<String> {
    Ok(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn load_family(path: &Path) -> CliResult<OperatorFamily> {
    OperatorFamily::from_json_str(&read(path)?)
        .map_err(|e| CliError::from(e).with_context(format!("family file {}", path.display())))
}

fn load_signal(path: &Path) -> CliResult<BandlimitedSignal> {
    BandlimitedSignal::from_json_str(&read(path)?)
        .map_err(|e| CliError::from(e).with_context(format!("signal file {}", path.display())))
}

impl CliError {
    fn with_context(self, ctx: String) -> Self {
        Self { code: self.code, source: self.source.context(ctx) }
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn criterion_options(config: &Config, args: &CriterionArgs) -> CliResult<CriterionOptions> {
    let d = CriterionOptions::default();
    let opts = CriterionOptions {
        initial_grid: pick(args.initial_grid, config.initial_grid, d.initial_grid),
        refine_levels: pick(args.refine_levels, config.refine_levels, d.refine_levels),
        tol_det: pick(args.tol_det, config.tol_det, d.tol_det),
    };
    if opts.initial_grid < 2 || !(opts.tol_det > 0.0) {
        return Err(anyhow!("initial_grid must be >= 2 and tol_det > 0").into());
    }
    Ok(opts)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn report_json(report: &CriterionReport, family: &OperatorFamily) -> serde_json::Value {
    let verdicts = decide_theorem2(report.case, family.rho(), family.delta(), family.n());
    let mut v = serde_json::to_value(report).expect("serializable");
    v["exit_code"] = json!(report.case.exit_code());
    v["theorem2"] = json!({
        "delta": family.delta(),
        "stable_sampling": verdicts.stable_sampling,
        "interpolation_set": verdicts.interpolation_set,
        "rho_delta": verdicts.rho_delta,
    });
    v
}

fn cmd_classify(config: &Config, path: &Path, profile: Option<&Path>, args: &CriterionArgs) -> CliResult<u8> {
    let family = load_family(path)?;
    let opts = criterion_options(config, args)?;
    let field = det_profile_with(&family, &opts)?;
    if let Some(p) = profile {
        write_det_profile(create(p)?, &field)?;
    }
    let report = classify(&field);
    print_json(&report_json(&report, &family));
    Ok(report.case.exit_code() as u8)
}

/// Same `N`, `ρ` and symbols on the band.
fn same_family(a: &OperatorFamily, b: &OperatorFamily) -> bool {
    if a.n() != b.n() || (a.rho() - b.rho()).abs() > 1e-12 {
        return false;
    }
    (0..a.n()).all(|n| {
        (0..=64).all(|i| {
            let xi = -0.5 + i as f64 / 64.0;
            let (p, q) = (a.member(n).eval(xi), b.member(n).eval(xi));
            (p - q).norm() <= 1e-10 * (1.0 + p.norm())
        })
    })
}

fn require_critical(family: &OperatorFamily) -> CliResult<()> {
    if family.is_critical_lattice() {
        Ok(())
    } else {
        Err(CliError::mismatch(format!(
            "kernels interpolate on {}Z but the family samples on {}Z",
            family.n(),
            family.rho()
        )))
    }
}

fn closed_spec(family: &OperatorFamily, n: usize) -> CliResult<&MultiplierSpec> {
    family
        .member(n)
        .as_closed()
        .ok_or_else(|| CliError::mismatch(format!("operator {} has a tabulated symbol", n + 1)))
}

fn two_members(family: &OperatorFamily, kind: &str) -> CliResult<()> {
    if family.n() == 2 {
        Ok(())
    } else {
        Err(CliError::mismatch(format!("{kind} kernels need N = 2, family has N = {}", family.n())))
    }
}

fn build_closed_form(kind: ClosedForm, family: &OperatorFamily) -> pwinterp::Result<ClosedFormKernels> {
    // Parameters are read off the family; a wrong guess fails the symbol comparison afterwards.
    let spec = |n: usize| family.member(n).as_closed().cloned().unwrap_or_else(MultiplierSpec::identity);
    let total_shift = |s: &MultiplierSpec| s.shift * s.power as f64;
    match kind {
        ClosedForm::Sinc => Ok(ClosedFormKernels::sinc()),
        ClosedForm::Littmann => Ok(ClosedFormKernels::littmann(family.n())),
        ClosedForm::Shifted => {
            let nodes: Vec<f64> = (0..family.n()).map(|n| total_shift(&spec(n))).collect();
            ClosedFormKernels::shifted(&nodes)
        }
        ClosedForm::Twonode => {
            let d = spec(1);
            let order = (d.poly_coeffs.len() as u32 - 1) * d.power;
            twonode_kernels(order, total_shift(&spec(0)), total_shift(&d))
        }
        ClosedForm::Diffquot => {
            let d = spec(1);
            let eps = d.sinc_factors.first().copied().unwrap_or(0.5);
            diffquot_kernels(eps, total_shift(&spec(0)), total_shift(&d))
        }
        ClosedForm::Dynamical => ClosedFormKernels::dynamical(&spec(1), family.n()),
    }
}

fn closed_form_kernels(
    kind: ClosedForm,
    family: &OperatorFamily,
    quad: usize,
    opts: &CriterionOptions,
) -> CliResult<ClosedFormKernels> {
    require_critical(family)?;
    match kind {
        ClosedForm::Twonode | ClosedForm::Diffquot => two_members(family, &format!("{kind:?}").to_lowercase())?,
        ClosedForm::Dynamical if family.n() < 2 => return Err(CliError::mismatch("dynamical kernels need N >= 2")),
        _ => {}
    }
    let specs = (0..family.n()).map(|n| closed_spec(family, n)).collect::<CliResult<Vec<_>>>()?;
    let pure_shift = |s: &MultiplierSpec| s.poly_coeffs.len() == 1 && s.sinc_factors.is_empty();
    let shape_ok = match kind {
        ClosedForm::Shifted => specs.iter().all(|s| pure_shift(s)),
        ClosedForm::Twonode => pure_shift(specs[0]) && specs[1].sinc_factors.is_empty(),
        ClosedForm::Diffquot => pure_shift(specs[0]) && specs[1].sinc_factors.len() == 1,
        _ => true,
    };
    if !shape_ok {
        return Err(CliError::mismatch(format!("family does not have the shape of {kind:?} kernels")));
    }
    let kernels = match build_closed_form(kind, family) {
        Ok(k) => k,
        Err(e @ (Error::NoFormula(_) | Error::InvalidNodes(_))) => {
            let report = classify(&det_profile_with(family, opts)?);
            let code = match report.case.exit_code() as u8 {
                0 => 1,
                c => c,
            };
            print_json(&report_json(&report, family));
            return Err(CliError::new(code, e.into()));
        }
        Err(e) => return Err(e.into()),
    };
    if !same_family(&kernels.family()?, family) {
        return Err(CliError::mismatch(format!(
            "family does not have the shape of the {} kernels",
            kernels.kind().name()
        )));
    }
    Ok(kernels.with_quad_order(quad)?)
}

/// Spectral kernels, refusing families whose determinant vanishes.
fn spectral_kernels(family: &OperatorFamily, grid: usize, opts: &CriterionOptions) -> CliResult<Box<dyn Kernels>> {
    require_critical(family)?;
    let report = classify(&det_profile_with(family, opts)?);
    if report.case.exit_code() != 0 {
        print_json(&report_json(&report, family));
        return Err(CliError::new(
            report.case.exit_code() as u8,
            anyhow!("no interpolation formula: determinant case {:?}", report.case),
        ));
    }
    Ok(Box::new(synthesize_spectral(family, grid)?))
}

fn choose_kernels(
    config: &Config,
    family: &OperatorFamily,
    closed_form: Option<ClosedForm>,
    args: &KernelArgs,
    opts: &CriterionOptions,
) -> CliResult<(Box<dyn Kernels>, String)> {
    let grid = pick(args.grid, config.grid, 64);
    let quad = pick(args.quad, config.quad, 64);
    if grid == 0 || quad == 0 {
        return Err(anyhow!("grid and quad must be >= 1").into());
    }
    Ok(match closed_form {
        Some(kind) => {
            let k = closed_form_kernels(kind, family, quad, opts)?;
            let name = k.kind().name().to_string();
            (Box::new(k), name)
        }
        None => (spectral_kernels(family, grid, opts)?, "spectral".to_string()),
    })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[allow(clippy::too_many_arguments)]
fn cmd_kernels(
    config: &Config,
    path: &Path,
    prefix: &Path,
    closed_form: Option<ClosedForm>,
    args: &KernelArgs,
    xs: &[f64],
    j_range: usize,
    criterion: &CriterionArgs,
) -> CliResult<u8> {
    let family = load_family(path)?;
    let opts = criterion_options(config, criterion)?;
    let (kernels, name) = choose_kernels(config, &family, closed_form, args, &opts)?;
    let spectra = with_suffix(prefix, "_spectra.csv");
    let values = with_suffix(prefix, "_values.csv");
    write_spectra(create(&spectra)?, kernels.as_ref())?;
    write_kernel_values(create(&values)?, kernels.as_ref(), xs)?;
    let residual = verify_biorthogonality(&family, kernels.as_ref(), j_range)?;
    print_json(&json!({
        "kernels": name,
        "N": family.n(),
        "biorthogonality_residual": residual,
        "j_range": j_range,
        "spectra": spectra,
        "values": values,
    }));
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_reconstruct(
    config: &Config,
    family_path: &Path,
    signal_path: &Path,
    m: usize,
    grid: &[f64],
    out: Option<&Path>,
    closed_form: Option<ClosedForm>,
    args: &KernelArgs,
    criterion: &CriterionArgs,
) -> CliResult<u8> {
    let family = load_family(family_path)?;
    let f = load_signal(signal_path)?;
    let opts = criterion_options(config, criterion)?;
    let (kernels, name) = choose_kernels(config, &family, closed_form, args, &opts)?;
    let samples = sample_family(&family, &f, m);
    let recs = reconstruct_many(&samples, kernels.as_ref(), grid).map_err(|e| match e {
        Error::InvalidArgument(msg) => CliError::mismatch(msg),
        other => other.into(),
    })?;
    if let Some(p) = out {
        write_reconstruction(create(p)?, &f, grid, &recs)?;
    }
    let (sup, l2) = error_norms(&f, grid, &recs);
    let tail = recs.iter().map(|r| r.tail).fold(0.0, f64::max);
    let (ratio, tail_fraction) = match frame_ratio(&family, &f, m) {
        Ok(r) => (Some(r.ratio), Some(r.tail_fraction)),
        Err(Error::InvalidArgument(_)) => (None, None),
        Err(e) => return Err(e.into()),
    };
    print_json(&json!({
        "kernels": name,
        "N": family.n(),
        "M": m,
        "points": grid.len(),
        "sup_err": sup,
        "l2_err": l2,
        "tail_estimate": tail,
        "frame_ratio": ratio,
        "tail_fraction": tail_fraction,
    }));
    Ok(0)
}

fn cmd_verify(suite: SuiteArg, as_json: bool) -> CliResult<u8> {
    let suites: Vec<(&str, Suite)> = match suite {
        SuiteArg::All => Suite::ALL.iter().map(|&s| (suite_name(s), s)).collect(),
        one => {
            let s = match one {
                SuiteArg::Littmann => Suite::Littmann,
                SuiteArg::Shifted => Suite::Shifted,
                SuiteArg::Vaaler => Suite::Vaaler,
                SuiteArg::Dynamical => Suite::Dynamical,
                SuiteArg::Diffquot => Suite::Diffquot,
                SuiteArg::Twonode => Suite::Twonode,
                SuiteArg::All => unreachable!(),
            };
            vec![(suite_name(s), s)]
        }
    };
    let mut rows = Vec::new();
    for (name, s) in suites {
        for check in s.run()? {
            rows.push((name, check));
        }
    }
    let all_pass = rows.iter().all(|(_, c)| c.passed);
    if as_json {
        let v: Vec<_> = rows
            .iter()
            .map(|(s, c)| json!({"suite": s, "check": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed}))
            .collect();
        print_json(&json!(v));
    } else {
        println!("{:<6} {:<10} {:<52} {:>11} {:>11}", "status", "suite", "check", "residual", "tolerance");
        for (s, c) in &rows {
            let status = if c.passed { "PASS" } else { "FAIL" };
            println!("{status:<6} {s:<10} {:<52} {:>11.3e} {:>11.3e}", c.name, c.residual, c.tolerance);
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Littmann => "littmann",
        Suite::Shifted => "shifted",
        Suite::Vaaler => "vaaler",
        Suite::Dynamical => "dynamical",
        Suite::Diffquot => "diffquot",
        Suite::Twonode => "twonode",
    }
}
