use std::fmt;
use std::io;

use hilbert_bergman::hilbert::{apply_coeff, apply_integral, composition_norm_integral, image_norm_pow};
use hilbert_bergman::region::{
    alpha_curve_row, classify, curve_row, dai_condition, grid, region_sanity, sweep, AlphaCurveRow, CurveRow,
    RegionVerdict,
};
use hilbert_bergman::verification::{
    ascend_norm, ladder_estimate, sample_in_region, verify_lemma, AscentOptions, LemmaReport, LowerBound,
    NormEstimate,
};
use hilbert_bergman::{target_norm, PowerSeries, QuadratureScheme, SpaceParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{self, num, opt};
use crate::{CheckCommand, Cli, Command, Format, LemmaArgs, NormArgs, RegionCommand, SweepArgs};

pub enum Outcome {
    Pass,
    /// A mathematical finding (violated bound or check); exit 1.
    Finding,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Finding => 1,
        }
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Finding
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Lib(hilbert_bergman::Error),
    Io(io::Error),
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        use hilbert_bergman::Error as E;
        match self {
            CliError::Lib(E::Domain(_)) | CliError::Lib(E::LinearCase { .. }) => 2,
            CliError::Lib(_) => 1,
            CliError::Io(_) | CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<hilbert_bergman::Error> for CliError {
    fn from(e: hilbert_bergman::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.command {
        Command::Norm(a) => norm(cli, a),
        Command::VerifyLemma(a) => lemma(cli, a),
        Command::Region(r) => region(cli, r),
        Command::Check(c) => check(cli, c),
    }
}

fn emit(cli: &Cli, content: String) -> Res<()> {
    output::write(cli.out.as_deref(), &content)?;
    Ok(())
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

#[derive(Serialize)]
struct NormReport {
    target: f64,
    ladder: Vec<LowerBound>,
    ascent: Option<NormEstimate>,
    best_method: String,
    best_lower_bound: f64,
    best_deficit: f64,
    best_quad_error_budget: f64,
    /// Every estimate stays below the target within its budget.
    consistent: bool,
}

fn norm(cli: &Cli, a: &NormArgs) -> Res<Outcome> {
    let params = SpaceParams::new(a.p, a.alpha)?;
    let target = target_norm(params)?;
    if a.gammas.is_empty() || a.gammas.iter().any(|t| !(*t >= 0.0 && *t < 1.0)) {
        return Err(CliError::Usage("--gammas needs fractions in [0, 1)".into()));
    }
    let (ladder_best, ladder) = ladder_estimate(params, &a.gammas, a.degree)?;
    let ascent = if a.coeffs > 0 {
        let mut opts = AscentOptions::for_problem(params, a.coeffs);
        if let Some(level) = a.level {
            opts.level = level;
            opts.angular_level = level + 1;
        }
        Some(ascend_norm(params, a.coeffs, a.iterations, a.seed, &opts)?)
    } else {
        None
    };
    let mut best = &ladder_best;
    if let Some(e) = &ascent {
        if e.lower_bound > best.lower_bound {
            best = e;
        }
    }
    let consistent = ladder_best.consistent_with_target()
        && ladder.iter().all(|lb| lb.ratio <= lb.target + lb.quad_error_budget)
        && ascent.as_ref().is_none_or(NormEstimate::consistent_with_target);
    let report = NormReport {
        target,
        best_method: best.method.clone(),
        best_lower_bound: best.lower_bound,
        best_deficit: 1.0 - best.lower_bound / target,
        best_quad_error_budget: best.quad_error_budget,
        consistent,
        ladder,
        ascent,
    };
    if !consistent {
        eprintln!("finding: a lower bound exceeds the target beyond its quadrature budget");
    }
    let content = match format_or(cli, Format::Json) {
        Format::Json => output::json(cli, &report)?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = report
                .ladder
                .iter()
                .map(|lb| {
                    vec![
                        "test_function".into(),
                        num(lb.spec.gamma),
                        String::new(),
                        num(lb.ratio),
                        num(lb.target),
                        num(lb.deficit),
                        num(lb.quad_error_budget),
                    ]
                })
                .collect();
            if let Some(e) = &report.ascent {
                rows.push(vec![
                    e.method.clone(),
                    String::new(),
                    a.coeffs.to_string(),
                    num(e.lower_bound),
                    num(e.target),
                    num(1.0 - e.lower_bound / e.target),
                    num(e.quad_error_budget),
                ]);
            }
            output::csv(
                cli,
                &["method", "gamma", "n_coeffs", "lower_bound", "target", "deficit", "quad_error_budget"],
                &rows,
            )?
        }
    };
    emit(cli, content)?;
    Ok(Outcome::from_pass(consistent))
}

fn verdict(r: &LemmaReport) -> &'static str {
    match r.passed {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "out of region: exploratory",
    }
}

#[derive(Serialize)]
struct LemmaOne<'a> {
    verdict: &'static str,
    report: &'a LemmaReport,
}

#[derive(Serialize)]
struct LemmaMany<'a> {
    count: usize,
    failures: usize,
    reports: &'a [LemmaReport],
}

fn lemma_rows(reports: &[LemmaReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                num(r.params.p),
                num(r.params.alpha),
                r.in_region.to_string(),
                num(r.max_f),
                num(r.f_tolerance),
                num(r.min_k),
                num(r.min_g_increment),
                verdict(r).into(),
            ]
        })
        .collect()
}

const LEMMA_HEADER: [&str; 8] = ["p", "alpha", "in_region", "max_f", "f_tolerance", "min_k", "min_g_increment", "verdict"];

fn lemma(cli: &Cli, a: &LemmaArgs) -> Res<Outcome> {
    let reports = match (a.p, a.alpha, a.sample) {
        (Some(p), Some(alpha), None) => vec![verify_lemma(SpaceParams::new(p, alpha)?, a.grid)?],
        (None, None, Some(n)) => sample_in_region(n, a.seed, a.p_min, a.p_max)?
            .into_iter()
            .map(|pr| verify_lemma(pr, a.grid))
            .collect::<hilbert_bergman::Result<_>>()?,
        _ => return Err(CliError::Usage("give either --p and --alpha, or --sample".into())),
    };
    let failures = reports.iter().filter(|r| r.passed == Some(false)).count();
    if a.sample.is_none() {
        let v = verdict(&reports[0]);
        if failures > 0 {
            eprintln!("finding: lemma violated in region");
        } else if v != "pass" {
            eprintln!("{v}");
        }
    } else if failures > 0 {
        eprintln!("finding: {failures} in-region samples violate the lemma");
    }
    let content = match format_or(cli, Format::Json) {
        Format::Json if a.sample.is_none() => output::json(
            cli,
            LemmaOne {
                verdict: verdict(&reports[0]),
                report: &reports[0],
            },
        )?,
        Format::Json => output::json(
            cli,
            LemmaMany {
                count: reports.len(),
                failures,
                reports: &reports,
            },
        )?,
        Format::Csv => output::csv(cli, &LEMMA_HEADER, &lemma_rows(&reports))?,
    };
    emit(cli, content)?;
    Ok(Outcome::from_pass(failures == 0))
}

const SWEEP_HEADER: [&str; 17] = [
    "p",
    "alpha",
    "status",
    "settled_by",
    "alpha_low",
    "alpha_up",
    "p3_as_alpha",
    "alpha0_bound_as_alpha",
    "p1_as_alpha",
    "p1",
    "p3",
    "p4",
    "p_double",
    "alpha0_low",
    "alpha0_high",
    "alpha0",
    "lmw",
];

fn sweep_row(v: &RegionVerdict, band: &AlphaCurveRow, curves: &CurveRow) -> Vec<String> {
    vec![
        num(v.p),
        num(v.alpha),
        v.status.label().into(),
        v.settled_labels().join(";"),
        opt(band.alpha_low),
        opt(band.alpha_up),
        opt(band.p3_as_alpha),
        opt(band.alpha0_bound_as_alpha),
        opt(band.p1_as_alpha),
        num(curves.p1),
        num(curves.p3),
        num(curves.p4),
        num(curves.p_double),
        num(curves.alpha0_low),
        num(curves.alpha0_high),
        opt(curves.alpha0),
        num(curves.lmw),
    ]
}

const CURVE_HEADER: [&str; 9] = ["alpha", "p1", "p3", "p4", "p_double", "alpha0_low", "alpha0_high", "alpha0", "lmw"];

fn curve_rows(rows: &[CurveRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|c| {
            vec![
                num(c.alpha),
                num(c.p1),
                num(c.p3),
                num(c.p4),
                num(c.p_double),
                num(c.alpha0_low),
                num(c.alpha0_high),
                opt(c.alpha0),
                num(c.lmw),
            ]
        })
        .collect()
}

const BAND_HEADER: [&str; 6] = ["p", "alpha_low", "alpha_up", "p3_as_alpha", "alpha0_bound_as_alpha", "p1_as_alpha"];

fn band_rows(rows: &[AlphaCurveRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|b| {
            vec![
                num(b.p),
                opt(b.alpha_low),
                opt(b.alpha_up),
                opt(b.p3_as_alpha),
                opt(b.alpha0_bound_as_alpha),
                opt(b.p1_as_alpha),
            ]
        })
        .collect()
}

fn region(cli: &Cli, r: &RegionCommand) -> Res<Outcome> {
    match r {
        RegionCommand::Classify { p, alpha } => {
            SpaceParams::new(*p, *alpha)?;
            let v = classify(*p, *alpha);
            let content = match format_or(cli, Format::Json) {
                Format::Json => output::json(cli, &v)?,
                Format::Csv => output::csv(
                    cli,
                    &SWEEP_HEADER,
                    &[sweep_row(&v, &alpha_curve_row(*p), &curve_row(*alpha))],
                )?,
            };
            emit(cli, content)?;
            Ok(Outcome::Pass)
        }
        RegionCommand::Sweep(s) => region_sweep(cli, s),
        RegionCommand::Curves {
            alpha_min,
            alpha_max,
            alpha_step,
        } => {
            let rows: Vec<CurveRow> = grid(*alpha_min, *alpha_max, *alpha_step)?
                .into_iter()
                .map(curve_row)
                .collect();
            let content = match format_or(cli, Format::Csv) {
                Format::Json => output::json(cli, &rows)?,
                Format::Csv => output::csv(cli, &CURVE_HEADER, &curve_rows(&rows))?,
            };
            emit(cli, content)?;
            Ok(Outcome::Pass)
        }
        RegionCommand::Band { p_min, p_max, step } => {
            let rows: Vec<AlphaCurveRow> = grid(*p_min, *p_max, *step)?.into_iter().map(alpha_curve_row).collect();
            let content = match format_or(cli, Format::Csv) {
                Format::Json => output::json(cli, &rows)?,
                Format::Csv => output::csv(cli, &BAND_HEADER, &band_rows(&rows))?,
            };
            emit(cli, content)?;
            Ok(Outcome::Pass)
        }
        RegionCommand::Sanity { p_min, p_max, step } => {
            let ps = grid(*p_min, *p_max, *step)?;
            let violations = region_sanity(&ps);
            if !violations.is_empty() {
                eprintln!("finding: {} curve relations violated", violations.len());
            }
            #[derive(Serialize)]
            struct Sanity<'a> {
                grid_points: usize,
                violations: &'a [hilbert_bergman::region::Violation],
            }
            let content = match format_or(cli, Format::Json) {
                Format::Json => output::json(
                    cli,
                    Sanity {
                        grid_points: ps.len(),
                        violations: &violations,
                    },
                )?,
                Format::Csv => output::csv(
                    cli,
                    &["p", "relation", "lhs", "rhs"],
                    &violations
                        .iter()
                        .map(|v| vec![num(v.p), v.relation.clone(), num(v.lhs), num(v.rhs)])
                        .collect::<Vec<_>>(),
                )?,
            };
            emit(cli, content)?;
            Ok(Outcome::from_pass(violations.is_empty()))
        }
    }
}

fn region_sweep(cli: &Cli, s: &SweepArgs) -> Res<Outcome> {
    if s.alpha_min.is_nan() || s.alpha_min <= -1.0 {
        return Err(CliError::Usage("--alpha-min must exceed -1".into()));
    }
    if s.p_min.is_nan() || s.p_min <= 0.0 {
        return Err(CliError::Usage("--p-min must be positive".into()));
    }
    let ps = grid(s.p_min, s.p_max, s.step)?;
    let alphas = grid(s.alpha_min, s.alpha_max, s.alpha_step)?;
    let verdicts = sweep(&ps, &alphas);
    let content = match format_or(cli, Format::Csv) {
        Format::Json => output::json(cli, &verdicts)?,
        Format::Csv => {
            let bands: Vec<AlphaCurveRow> = ps.iter().map(|&p| alpha_curve_row(p)).collect();
            let curves: Vec<CurveRow> = alphas.iter().map(|&a| curve_row(a)).collect();
            let rows: Vec<Vec<String>> = verdicts
                .iter()
                .enumerate()
                .map(|(i, v)| sweep_row(v, &bands[i / alphas.len()], &curves[i % alphas.len()]))
                .collect();
            output::csv(cli, &SWEEP_HEADER, &rows)?
        }
    };
    emit(cli, content)?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct IdentityReport {
    points: usize,
    max_deviation: f64,
    max_truncation_bound: f64,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MinkowskiCase {
    coeffs: Vec<f64>,
    image_norm: f64,
    minkowski_bound: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MinkowskiReport {
    cases: Vec<MinkowskiCase>,
    tol: f64,
    pass: bool,
}

/// `1 + Σ a_k z^k` with `Σ|a_k| ≤ 0.9`, so zero-free on the closed disk.
fn zero_free_poly(rng: &mut ChaCha8Rng, degree: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    let scale = 0.9 / degree.max(1) as f64;
    c.extend((0..degree).map(|_| rng.random_range(-1.0..1.0) * scale));
    c
}

fn check(cli: &Cli, c: &CheckCommand) -> Res<Outcome> {
    match c {
        CheckCommand::Dai { p, alpha } => {
            let d = dai_condition(SpaceParams::new(*p, *alpha)?)?;
            let content = match format_or(cli, Format::Json) {
                Format::Json => output::json(cli, d)?,
                Format::Csv => output::csv(
                    cli,
                    &["p", "alpha", "holds", "lhs", "rhs"],
                    &[vec![num(*p), num(*alpha), d.holds.to_string(), num(d.lhs), num(d.rhs)]],
                )?,
            };
            emit(cli, content)?;
            Ok(Outcome::Pass)
        }
        CheckCommand::Identity {
            degree,
            points,
            seed,
            tol,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut max_dev: f64 = 0.0;
            let mut max_tail: f64 = 0.0;
            for _ in 0..*points {
                let f = PowerSeries::new(
                    (0..=*degree)
                        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                        .collect(),
                );
                let r = 0.9 * rng.random_range(0.0..1.0f64).sqrt();
                let z = Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU));
                let image = apply_coeff(&f, degree + 400);
                let coeff = image.series.eval(z)?;
                let integral = apply_integral(&f, z)?;
                max_dev = max_dev.max((coeff - integral).norm());
                max_tail = max_tail.max(image.truncation_error(z));
            }
            let report = IdentityReport {
                points: *points,
                max_deviation: max_dev,
                max_truncation_bound: max_tail,
                tol: *tol,
                pass: max_dev <= *tol,
            };
            let pass = report.pass;
            let content = match format_or(cli, Format::Json) {
                Format::Json => output::json(cli, &report)?,
                Format::Csv => output::csv(
                    cli,
                    &["points", "max_deviation", "max_truncation_bound", "tol", "pass"],
                    &[vec![
                        points.to_string(),
                        num(max_dev),
                        num(max_tail),
                        num(*tol),
                        pass.to_string(),
                    ]],
                )?,
            };
            emit(cli, content)?;
            Ok(Outcome::from_pass(pass))
        }
        CheckCommand::Minkowski {
            p,
            alpha,
            samples,
            degree,
            seed,
            tol,
        } => {
            let params = SpaceParams::new(*p, *alpha)?;
            target_norm(params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let scheme = QuadratureScheme::new(*alpha, 6, 128)?.with_rel_tol(1e-8);
            let mut cases = Vec::with_capacity(*samples);
            for _ in 0..*samples {
                let coeffs = zero_free_poly(&mut rng, *degree);
                let f = PowerSeries::from_real(&coeffs);
                let image_norm = image_norm_pow(&f, params, 1e-10)?.value.powf(1.0 / p);
                let minkowski_bound = composition_norm_integral(&f, params, &scheme, 1e-9)?.value;
                cases.push(MinkowskiCase {
                    pass: image_norm <= minkowski_bound + tol,
                    coeffs,
                    image_norm,
                    minkowski_bound,
                });
            }
            let pass = cases.iter().all(|c| c.pass);
            if !pass {
                eprintln!("finding: Minkowski bound violated");
            }
            let content = match format_or(cli, Format::Json) {
                Format::Json => output::json(
                    cli,
                    MinkowskiReport {
                        cases,
                        tol: *tol,
                        pass,
                    },
                )?,
                Format::Csv => output::csv(
                    cli,
                    &["case", "image_norm", "minkowski_bound", "pass"],
                    &cases
                        .iter()
                        .enumerate()
                        .map(|(i, c)| vec![i.to_string(), num(c.image_norm), num(c.minkowski_bound), c.pass.to_string()])
                        .collect::<Vec<_>>(),
                )?,
            };
            emit(cli, content)?;
            Ok(Outcome::from_pass(pass))
        }
    }
}
