use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use opcalc::dynamics::{divergence_experiment, DivergenceSample, DivergenceSummary};
use opcalc::gridrep::{
    bj_kernel_quantize, tau_kernel_quantize, weyl_kernel_quantize, GridSpec, OperatorMatrix,
};
use opcalc::phasespace::{
    apply_fafb, cross_wigner, dequantization_witness, theta, weak_value, weak_value_phase_space, witness_at,
    witness_at_steps, CsvPart, DequantizationWitness, PhaseSpaceRule,
};
use opcalc::quantrules::{bj_weyl_gap, quantize_polynomial, suite, ClassicalPolynomial, Rule};
use opcalc::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Format, RunConfig, StateSpec};
use crate::expr::Symbol;

pub enum Status {
    Passed,
    Failed,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum Part {
    Real,
    Imag,
    Abs,
}

impl From<Part> for CsvPart {
    fn from(p: Part) -> Self {
        match p {
            Part::Real => CsvPart::Real,
            Part::Imag => CsvPart::Imag,
            Part::Abs => CsvPart::Abs,
        }
    }
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs `f` against `--out` or stdout and flushes.
fn emit<F>(path: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let mut w = open(path)?;
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    emit(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn symbol_text(cfg: &RunConfig) -> Result<&str> {
    cfg.symbol
        .as_deref()
        .ok_or_else(|| Error::Invalid("no symbol given (pass one or set \"symbol\" in the config)".into()))
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.10}{:+.10}i", z.re, z.im)
}

#[derive(Serialize)]
struct QuantizeReport<'a> {
    symbol: String,
    rule: &'a str,
    result: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bj_minus_weyl: Option<String>,
}

pub fn quantize(cfg: &RunConfig, show_diff: bool) -> Result<Status> {
    let poly = ClassicalPolynomial::parse(symbol_text(cfg)?)?;
    let rule = cfg.rule.as_deref().unwrap_or("bj");
    let result = if rule.trim().eq_ignore_ascii_case("diff") {
        bj_weyl_gap(&poly)
    } else {
        quantize_polynomial(&poly, &rule.parse::<Rule>()?)
    };
    let report = QuantizeReport {
        symbol: poly.to_string(),
        rule,
        result: result.to_string(),
        bj_minus_weyl: show_diff.then(|| bj_weyl_gap(&poly).to_string()),
    };
    match cfg.format_or(Format::Text) {
        Format::Json => emit_json(cfg.out.as_deref(), &report)?,
        _ => emit(cfg.out.as_deref(), |w| {
            writeln!(w, "{}", report.result)?;
            if let Some(d) = &report.bj_minus_weyl {
                writeln!(w, "bj - weyl = {d}")?;
            }
            Ok(())
        })?,
    }
    Ok(Status::Passed)
}

enum KernelRule {
    Single(Rule),
    Both,
}

fn kernel_rule(text: &str) -> Result<KernelRule> {
    if text.trim().eq_ignore_ascii_case("both") {
        Ok(KernelRule::Both)
    } else {
        text.parse().map(KernelRule::Single)
    }
}

fn build_kernel(symbol: &Symbol, rule: &Rule, grid: &GridSpec, order: usize) -> Result<OperatorMatrix> {
    match rule {
        Rule::BornJordan => bj_kernel_quantize(&symbol.sampled, grid, order),
        Rule::Weyl => weyl_kernel_quantize(&symbol.sampled, grid),
        Rule::Tau(t) => tau_kernel_quantize(&symbol.sampled, t.to_f64(), grid),
    }
}

/// `dir/stem.ext` becomes `dir/stem_<tag>.ext`.
fn suffixed(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

pub fn kernel(cfg: &RunConfig) -> Result<Status> {
    let grid = cfg.grid.spec()?;
    let symbol = Symbol::parse(symbol_text(cfg)?, grid.hbar())?;
    let format = match cfg.format_or(Format::Json) {
        Format::Text => return Err(Error::Invalid("matrices are written as json or csv".into())),
        f => f,
    };
    let rules = match kernel_rule(cfg.rule.as_deref().unwrap_or("both"))? {
        KernelRule::Single(r) => vec![r],
        KernelRule::Both => vec![Rule::BornJordan, Rule::Weyl],
    };
    let mut built = Vec::new();
    for rule in &rules {
        built.push((rule, build_kernel(&symbol, rule, &grid, cfg.order)?));
    }

    if let Some(out) = &cfg.out {
        for (rule, m) in &built {
            let path = if built.len() > 1 { suffixed(out, &rule.to_string()) } else { out.clone() };
            emit(Some(&path), |w| match format {
                Format::Csv => m.to_csv_writer(w),
                _ => m.to_json_writer(w),
            })?;
        }
    }

    let mut stdout = io::stdout().lock();
    writeln!(stdout, "symbol      {}", symbol.text)?;
    writeln!(stdout, "grid        {grid}")?;
    for (rule, m) in &built {
        writeln!(
            stdout,
            "{:<11} hermiticity residual {:.3e}, frobenius norm {:.6e}",
            rule.to_string(),
            m.hermiticity_residual(),
            m.frobenius_norm()
        )?;
    }
    if let [(_, bj), (_, weyl)] = built.as_slice() {
        writeln!(
            stdout,
            "relative frobenius gap |bj - weyl|_F / |weyl|_F = {:.6e}",
            bj.relative_frobenius_gap(weyl)?
        )?;
        writeln!(
            stdout,
            "max entry gap          max |bj - weyl|           = {:.6e}",
            bj.max_abs_diff(weyl)?
        )?;
    }
    Ok(Status::Passed)
}

pub fn wigner(cfg: &RunConfig, bj: bool, part: Part) -> Result<Status> {
    let grid = cfg.grid.spec()?;
    let pre = cfg.pre.build(grid)?;
    let post = cfg.post.build(grid)?;
    let mut w = cross_wigner(&pre, &post)?;
    if bj {
        w = apply_fafb(&w);
    }
    match cfg.format_or(Format::Json) {
        Format::Csv => emit(cfg.out.as_deref(), |out| w.to_csv_writer(out, part.into()))?,
        _ => emit(cfg.out.as_deref(), |out| {
            w.to_json_writer(&mut *out)?;
            writeln!(out)?;
            Ok(())
        })?,
    }
    Ok(Status::Passed)
}

#[derive(Serialize)]
struct Pipeline {
    weyl: Complex64,
    bj: Complex64,
    bj_minus_weyl: Complex64,
}

impl Pipeline {
    fn new(weyl: Complex64, bj: Complex64) -> Self {
        Self { weyl, bj, bj_minus_weyl: bj - weyl }
    }
}

#[derive(Serialize)]
struct PairReport {
    pre: StateSpec,
    post: StateSpec,
    operator: Pipeline,
    phase_space: Pipeline,
    /// Largest disagreement between the two pipelines.
    agreement: f64,
}

#[derive(Serialize)]
struct WeakValueReport {
    symbol: String,
    grid: GridSpec,
    order: usize,
    pairs: Vec<PairReport>,
}

fn random_pairs(seed: u64, count: usize) -> Vec<(StateSpec, StateSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || StateSpec {
        q0: rng.gen_range(-0.5..0.5),
        p0: rng.gen_range(-1.0..1.0),
        sigma: rng.gen_range(0.6..0.8),
    };
    (0..count).map(|_| (draw(), draw())).collect()
}

pub fn weakvalue(cfg: &RunConfig, random: Option<usize>) -> Result<Status> {
    let grid = cfg.grid.spec()?;
    let symbol = Symbol::parse(symbol_text(cfg)?, grid.hbar())?;
    let pairs = match random {
        Some(0) => return Err(Error::Invalid("--random-pairs needs at least one pair".into())),
        Some(k) => random_pairs(cfg.seed, k),
        None => vec![(cfg.pre, cfg.post)],
    };
    let weyl = weyl_kernel_quantize(&symbol.sampled, &grid)?;
    let bj = bj_kernel_quantize(&symbol.sampled, &grid, cfg.order)?;
    let table = symbol.sampled.sample(&grid)?;

    let mut reports = Vec::with_capacity(pairs.len());
    for (pre_spec, post_spec) in pairs {
        let psi = pre_spec.build(grid)?;
        let phi = post_spec.build(grid)?;
        let operator = Pipeline::new(weak_value(&weyl, &phi, &psi)?, weak_value(&bj, &phi, &psi)?);
        let phase_space = Pipeline::new(
            weak_value_phase_space(&table, &phi, &psi, PhaseSpaceRule::Weyl)?,
            weak_value_phase_space(&table, &phi, &psi, PhaseSpaceRule::BornJordan)?,
        );
        let agreement = (operator.weyl - phase_space.weyl).norm().max((operator.bj - phase_space.bj).norm());
        reports.push(PairReport { pre: pre_spec, post: post_spec, operator, phase_space, agreement });
    }
    let report = WeakValueReport { symbol: symbol.text.clone(), grid, order: cfg.order, pairs: reports };

    match cfg.format_or(Format::Text) {
        Format::Json => emit_json(cfg.out.as_deref(), &report)?,
        _ => emit(cfg.out.as_deref(), |w| {
            writeln!(w, "symbol  {}", report.symbol)?;
            writeln!(w, "grid    {grid}")?;
            for pair in &report.pairs {
                writeln!(w)?;
                writeln!(w, "pre {}  post {}", pair.pre, pair.post)?;
                writeln!(w, "{:<12} {:<32} {:<32} bj - weyl", "pipeline", "weyl", "bj")?;
                for (name, p) in [("operator", &pair.operator), ("phase-space", &pair.phase_space)] {
                    writeln!(
                        w,
                        "{:<12} {:<32} {:<32} {}",
                        name,
                        fmt_c(p.weyl),
                        fmt_c(p.bj),
                        fmt_c(p.bj_minus_weyl)
                    )?;
                }
                writeln!(w, "pipelines agree to {:.3e}", pair.agreement)?;
            }
            Ok(())
        })?,
    }
    Ok(Status::Passed)
}

#[derive(Serialize)]
struct EvolveFile<'a> {
    summary: &'a DivergenceSummary,
    samples: &'a [DivergenceSample],
}

pub fn evolve(cfg: &RunConfig) -> Result<Status> {
    let grid = cfg.grid.spec()?;
    let symbol = Symbol::parse(symbol_text(cfg)?, grid.hbar())?;
    let poly = symbol.require_polynomial()?;
    let psi0 = cfg.pre.build(grid)?;
    let report = divergence_experiment(poly, &psi0, cfg.horizon, cfg.samples)?;
    for warning in &report.summary.warnings {
        eprintln!("warning: {warning}");
    }
    match cfg.format_or(Format::Csv) {
        Format::Json => {
            emit_json(cfg.out.as_deref(), &EvolveFile { summary: &report.summary, samples: &report.samples })?
        }
        _ => emit(cfg.out.as_deref(), |w| report.to_csv_writer(w))?,
    }
    if cfg.out.is_some() {
        let s = &report.summary;
        println!("gap         {} ({:?}, residual {:.3e})", s.gap.symbolic, s.gap.kind, s.gap.residual);
        println!("max |<q>_bj - <q>_weyl|  {:.6e}", s.max_abs_gap);
        println!("min fidelity             {:.12}", s.min_fidelity);
        if let Some(e) = s.phase_error {
            println!("phase error              {e:.3e}");
        }
    }
    Ok(Status::Passed)
}

#[derive(Serialize)]
struct DemoReport {
    grid: GridSpec,
    q0: f64,
    p0: f64,
    steps: (i64, i64),
    /// `q0·p0 / 2πħ`; the Born–Jordan factor vanishes at nonzero integers.
    winding: f64,
    theta: f64,
    weyl_norm: f64,
    bj_norm: f64,
    ratio: f64,
}

impl DemoReport {
    fn new(grid: GridSpec, w: &DequantizationWitness) -> Self {
        let hbar = grid.hbar();
        Self {
            grid,
            q0: w.q0,
            p0: w.p0,
            steps: (w.n, w.m),
            winding: w.q0 * w.p0 / (2.0 * std::f64::consts::PI * hbar),
            theta: w.theta,
            weyl_norm: w.weyl_norm,
            bj_norm: w.bj_norm,
            ratio: w.ratio,
        }
    }
}

pub fn demo_dequantization(cfg: &RunConfig, off_zero_set: bool, point: Option<(f64, f64)>) -> Result<Status> {
    let grid = cfg.grid.spec()?;
    let witness = match point {
        Some((q0, p0)) => witness_at(&grid, q0, p0)?,
        None if off_zero_set => {
            let zero = dequantization_witness(&grid)?;
            let (n, m) = (zero.n, zero.m);
            if m % 2 == 0 {
                witness_at_steps(&grid, n, m / 2)?
            } else if n % 2 == 0 {
                witness_at_steps(&grid, n / 2, m)?
            } else {
                return Err(Error::OffGrid(format!("no point with q0*p0 = pi*hbar on {grid}")));
            }
        }
        None => dequantization_witness(&grid)?,
    };
    let report = DemoReport::new(grid, &witness);
    match cfg.format_or(Format::Text) {
        Format::Json => emit_json(cfg.out.as_deref(), &report)?,
        _ => emit(cfg.out.as_deref(), |w| {
            writeln!(w, "symbol        cos((p0 q - q0 p)/hbar)")?;
            writeln!(w, "grid          {grid}")?;
            writeln!(
                w,
                "point         q0 = {:.12}, p0 = {:.12} ({} x {} grid steps)",
                report.q0, report.p0, report.steps.0, report.steps.1
            )?;
            writeln!(w, "q0 p0 / 2 pi hbar = {:.12}", report.winding)?;
            writeln!(w, "theta         {:.12}", report.theta)?;
            writeln!(w, "theta (cont.) {:.12}", theta(report.q0, report.p0, grid.hbar()))?;
            writeln!(w, "|A_weyl|_F    {:.12e}", report.weyl_norm)?;
            writeln!(w, "|A_bj|_F      {:.12e}", report.bj_norm)?;
            writeln!(w, "ratio         {:.6e}", report.ratio)?;
            Ok(())
        })?,
    }
    Ok(Status::Passed)
}

#[derive(Serialize)]
struct CheckRow {
    name: &'static str,
    passed: usize,
    total: usize,
    failures: Vec<String>,
}

pub fn check_identities(cfg: &RunConfig) -> Result<Status> {
    let outcomes = suite::run_all();
    let ok = outcomes.iter().all(|o| o.ok());
    match cfg.format_or(Format::Text) {
        Format::Json => {
            let rows: Vec<CheckRow> = outcomes
                .iter()
                .map(|o| CheckRow {
                    name: o.name,
                    passed: o.passed,
                    total: o.total,
                    failures: o.failures.clone(),
                })
                .collect();
            emit_json(cfg.out.as_deref(), &rows)?
        }
        _ => emit(cfg.out.as_deref(), |w| {
            for o in &outcomes {
                writeln!(w, "{o}")?;
            }
            let passed = outcomes.iter().filter(|o| o.ok()).count();
            writeln!(w, "{passed}/{} families passed", outcomes.len())?;
            Ok(())
        })?,
    }
    Ok(if ok { Status::Passed } else { Status::Failed })
}
