use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use pseudospec_core::analytic::{self, LevelRecord, Picture};
use pseudospec_core::exact::{derive_rm1_exact, derive_rm2_exact, display, ExactDerived};
use pseudospec_core::operators::{eigen_residual, potential_v_special, GridSpec};
use pseudospec_core::params::{check_constraints, derive, Constraint, ConstraintFlags, DerivedParams, SwansonParams};
use pseudospec_core::superpotential::{Family, Superpotential};
use pseudospec_core::tables::{audit_tables, CellStatus, PRINTED_ROWS};
use pseudospec_core::verify::{run_full_verification, verified_levels, Model};

use crate::config::{FileConfig, Format, GridArgs, ModelArgs, ModelKind, OutputArgs, RunConfig, Sources, ToleranceArgs};
use crate::error::CliError;
use crate::output::{self, csv_header, envelope, float, json_text, Curve};

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl RunArgs {
    fn resolve(&self, file: &FileConfig, default_format: Format) -> Result<RunConfig, CliError> {
        let cfg = RunConfig::resolve(
            &Sources {
                file,
                model: &self.model,
                grid: &self.grid,
                tol: &self.tol,
                out: &self.out,
            },
            default_format,
        )?;
        for w in &cfg.warnings {
            eprintln!("warning: {w}");
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Also list levels past the first non-normalizable one.
    #[arg(long)]
    pub all_levels: bool,
    /// Write an SVG of the potential and the lowest wavefunctions.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_max: Option<f64>,
    /// Points per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn fail_constraints(flags: &ConstraintFlags) -> Result<(), CliError> {
    let failed = flags.failed();
    if failed.is_empty() {
        return Ok(());
    }
    let names: Vec<&str> = failed.iter().map(|c| c.name()).collect();
    Err(CliError::Constraint(format!("constraint violated: {}", names.join(", "))))
}

fn exact_derived(cfg: &RunConfig) -> Option<ExactDerived> {
    let (a, b, p1, p2) = cfg.exact_inputs()?;
    match cfg.model {
        ModelKind::Rm1 | ModelKind::Rm1Pt => derive_rm1_exact(a, b, p1, p2).ok(),
        ModelKind::Rm2 | ModelKind::Rm2Pt => derive_rm2_exact(a, b, p1, p2).ok(),
        ModelKind::Harmonic => None,
    }
}

fn level_records(d: &DerivedParams, count: usize, marginal: f64, all: bool) -> Result<Vec<LevelRecord>, CliError> {
    if !all {
        return Ok(verified_levels(d, count, marginal)?);
    }
    let recs = analytic::levels(d, count)?;
    if d.family != Family::Rm2Hyp {
        return Ok(recs);
    }
    Ok(recs.iter().map(|r| analytic::rm2_energy_with(d, r.n, marginal)).collect::<Result<_, _>>()?)
}

fn names(family: Family) -> (&'static str, &'static str, &'static str) {
    match family {
        Family::Rm1Trig => ("sigma", "A", "B"),
        Family::Rm2Hyp => ("chi", "a", "b"),
        Family::Harmonic => ("omega_tilde^2", "-", "-"),
    }
}

pub fn derive_cmd(args: &RunArgs, file: &FileConfig) -> Result<(), CliError> {
    let cfg = args.resolve(file, Format::Text)?;
    let (p, sp) = (cfg.params(), cfg.superpotential()?);
    let flags = check_constraints(&p, &sp);
    let d = match derive(&p, &sp) {
        Ok(d) => d,
        Err(e) => {
            for (c, ok) in &flags.0 {
                eprintln!("  [{}] {}", if *ok { "ok" } else { "FAIL" }, c.name());
            }
            return Err(e.into());
        }
    };
    let exact = exact_derived(&cfg);
    let levels = analytic::levels(&d, cfg.levels)?;

    let text = match cfg.format {
        Format::Json => json_text(&envelope(
            "derive",
            &cfg,
            &flags,
            json!({"derived": d, "exact": exact, "levels": levels}),
        )?)?,
        Format::Csv => {
            let mut s = csv_header("derive", &cfg, &flags, &[])?;
            s += "quantity,value,exact\n";
            for (name, v, e) in derived_rows(&d, exact.as_ref()) {
                let _ = writeln!(s, "{name},{},{}", float(v), e.unwrap_or_default());
            }
            s += "#\nn,eps,E,valid,index_below_a,marginal\n";
            for l in &levels {
                let _ = writeln!(s, "{},{},{},{},{},{}", l.n, float(l.eps), float(l.energy), l.valid, l.index_below_a, l.marginal);
            }
            s
        }
        Format::Text => derive_text(&cfg, &flags, &d, exact.as_ref(), &levels),
    };
    output::write(cfg.output.as_deref(), &text)?;
    fail_constraints(&flags)
}

fn derived_rows(d: &DerivedParams, e: Option<&ExactDerived>) -> Vec<(&'static str, f64, Option<String>)> {
    let (strength, a, b) = names(d.family);
    let ex = |f: fn(&ExactDerived) -> String| e.map(f);
    let mut rows = vec![
        ("alpha+beta", d.alpha + d.beta, ex(|e| display(&e.sum))),
        ("4alphabeta", 4.0 * d.alpha * d.beta, ex(|e| display(&e.product4))),
        ("s", d.scale, ex(|e| display(&e.scale))),
        ("mu", d.mu, ex(|e| display(&e.mu))),
        ("k", d.coupling, None),
        (strength, d.strength, ex(|e| display(&e.strength))),
        ("offset", d.offset, None),
    ];
    if d.family != Family::Harmonic {
        rows.insert(4, ("mu1", d.mu1, ex(|e| display(&e.mu1))));
        rows.insert(5, ("mu2", d.mu2, ex(|e| display(&e.mu2))));
        rows.push((a, d.cap_a, e.and_then(|e| e.cap_a_exact.map(|r| display(&r)))));
        rows.push((b, d.cap_b, ex(|e| display(&e.cap_b))));
    }
    rows
}

fn derive_text(cfg: &RunConfig, flags: &ConstraintFlags, d: &DerivedParams, e: Option<&ExactDerived>, levels: &[LevelRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model      {}", clap::ValueEnum::to_possible_value(&cfg.model).map_or_else(String::new, |v| v.get_name().to_string()));
    let _ = writeln!(s, "alpha      {}", cfg.alpha);
    let _ = writeln!(s, "beta       {}", cfg.beta);
    for (name, v) in [("A1", &cfg.a1), ("B1", &cfg.b1), ("A2", &cfg.a2), ("B2", &cfg.b2)] {
        if let Some(v) = v {
            let _ = writeln!(s, "{name:<10} {v}");
        }
    }
    s += "\nconstraints\n";
    for (c, ok) in &flags.0 {
        let _ = writeln!(s, "  [{}] {}", if *ok { "ok" } else { "FAIL" }, c.name());
    }
    let _ = writeln!(s, "  admissible: {}", flags.admissible());
    s += "\nderived\n";
    for (name, v, ex) in derived_rows(d, e) {
        let _ = writeln!(s, "  {name:<14} {:>24}  {}", float(v), ex.unwrap_or_default());
    }
    s += "\nlevels\n  n  eps                      E                        valid  marginal\n";
    for l in levels {
        let _ = writeln!(s, "  {:<2} {:>24} {:>24} {:<6} {}", l.n, float(l.eps), float(l.energy), l.valid, l.marginal);
    }
    s
}

#[derive(Serialize)]
struct SpectrumRow {
    n: usize,
    eps_analytic: f64,
    e_analytic: f64,
    eps_numeric: f64,
    abs_dev: f64,
    eigen_residual: f64,
    valid: bool,
    marginal: bool,
}

pub fn spectrum_cmd(args: &SpectrumArgs, file: &FileConfig) -> Result<(), CliError> {
    let mut cfg = args.run.resolve(file, Format::Csv)?;
    let m = cfg.model()?;
    m.check_admissible()?;
    let g = cfg.grid(&m)?;
    if m.family() != Family::Rm1Trig {
        cfg.half_width = Some(g.x_max);
    }
    let records = level_records(&m.derived, cfg.levels, cfg.tolerances.marginal, args.all_levels)?;
    let eig = if records.is_empty() { None } else { Some(m.numeric_spectrum(&g, records.len())?) };
    let swanson = m.swanson(&g)?;
    let nodes = g.nodes();
    let mut rows = Vec::with_capacity(records.len());
    for (j, r) in records.iter().enumerate() {
        let eps_numeric = eig.as_ref().map_or(f64::NAN, |e| e.eigenvalues[j]);
        let residual = analytic::WavefunctionSampler::new(&m.derived, &m.superpotential, r.n, Picture::NonHermitian)
            .and_then(|w| w.sample(&nodes))
            .and_then(|psi| eigen_residual(&swanson, &psi, r.energy))
            .unwrap_or(f64::NAN);
        rows.push(SpectrumRow {
            n: r.n,
            eps_analytic: r.eps,
            e_analytic: r.energy,
            eps_numeric,
            abs_dev: (eps_numeric - r.eps).abs(),
            eigen_residual: residual,
            valid: r.valid,
            marginal: r.marginal,
        });
    }
    let flags = &m.derived.constraint_flags;
    let mut notes = Vec::new();
    if m.params.is_hermitian() {
        notes.push("alpha = beta: the Swanson operator is Hermitian and eta is the identity".to_string());
    }
    if rows.is_empty() {
        notes.push("no normalizable levels".to_string());
    }
    let text = match cfg.format {
        Format::Json => json_text(&envelope("spectrum", &cfg, flags, json!({"grid": g, "notes": notes, "rows": rows}))?)?,
        Format::Csv | Format::Text => {
            let mut s = csv_header("spectrum", &cfg, flags, &notes)?;
            let _ = writeln!(s, "# grid: {}", serde_json::to_string(&g)?);
            s += "n,eps_analytic,E_analytic,eps_numeric,abs_dev,eigen_residual,valid,marginal\n";
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    float(r.eps_analytic),
                    float(r.e_analytic),
                    float(r.eps_numeric),
                    float(r.abs_dev),
                    float(r.eigen_residual),
                    r.valid,
                    r.marginal
                );
            }
            s
        }
    };
    output::write(cfg.output.as_deref(), &text)?;
    if let Some(path) = &args.plot {
        output::write(Some(path), &plot(&m, &g, &records)?)?;
    }
    Ok(())
}

/// V(x) with the lowest φ_n drawn at their energies.
fn plot(m: &Model, g: &GridSpec, records: &[LevelRecord]) -> Result<String, CliError> {
    const MAX_POINTS: usize = 600;
    let nodes = g.nodes();
    let stride = nodes.len().div_ceil(MAX_POINTS).max(1);
    let xs: Vec<f64> = nodes.iter().copied().step_by(stride).collect();
    let v: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| Ok((x, potential_v_special(&m.derived, &m.superpotential, x)?)))
        .collect::<Result<_, CliError>>()?;
    let shown: Vec<&LevelRecord> = records.iter().take(4).collect();
    let v_min = v.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let lo = shown.first().map_or(v_min, |r| r.eps.min(v_min));
    let top = shown.last().map_or(lo + 1.0, |r| r.eps);
    let span = (top - lo).max(1.0);
    let y_range = (lo - 0.1 * span, top + 0.5 * span);
    let amplitude = 0.4 * span / (shown.len().max(1) as f64);

    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let mut curves = vec![Curve {
        points: v,
        color: "black",
        label: "V(x)".into(),
    }];
    for (i, r) in shown.iter().enumerate() {
        let phi = m.wavefunction(r.n, Picture::Hermitian, g)?;
        let peak = phi.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
        let points = nodes
            .iter()
            .zip(&phi)
            .step_by(stride)
            .map(|(&x, &p)| (x, r.eps + amplitude * p / peak))
            .collect();
        curves.push(Curve {
            points,
            color: colors[i % colors.len()],
            label: format!("phi_{} at eps = {:.4}", r.n, r.eps),
        });
    }
    let title = format!("{} partner potential, alpha = {}, beta = {}", m.family().name(), m.params.alpha, m.params.beta);
    Ok(output::svg_plot(&title, &curves, (g.x_min, g.x_max), y_range))
}

pub fn verify_cmd(args: &RunArgs, file: &FileConfig) -> Result<(), CliError> {
    let mut cfg = args.resolve(file, Format::Json)?;
    let m = cfg.model()?;
    let g = cfg.grid(&m)?;
    if m.family() != Family::Rm1Trig {
        cfg.half_width = Some(g.x_max);
    }
    let report = run_full_verification(&m, &g, cfg.levels, &cfg.tolerances)?;
    let mut notes = Vec::new();
    if report.hermitian_limit {
        notes.push("alpha = beta: eta is the identity and the conjugation check is exact".to_string());
    }
    for l in report.levels.iter().filter(|l| !l.gated) {
        notes.push(format!("level {} sits at the continuum edge and is reported but not gated", l.level.n));
    }
    let flags = &m.derived.constraint_flags;
    let text = match cfg.format {
        Format::Json | Format::Csv => json_text(&envelope("verify", &cfg, flags, json!({"notes": notes, "report": report}))?)?,
        Format::Text => {
            let mut s = String::new();
            for (k, ok) in &report.pass {
                let value = report.residuals.get(k).map_or_else(String::new, |v| format!(": {}", float(*v)));
                let _ = writeln!(s, "[{}] {k}{value}", if *ok { "PASS" } else { "FAIL" });
            }
            for n in &notes {
                let _ = writeln!(s, "note: {n}");
            }
            let _ = writeln!(s, "all_pass: {}", report.all_pass);
            s
        }
    };
    output::write(cfg.output.as_deref(), &text)?;
    if report.all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.pass.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.as_str()).collect();
        Err(CliError::Verification(format!("verification failed: {}", failed.join(", "))))
    }
}

pub fn table_audit_cmd(out: &OutputArgs, file: &FileConfig) -> Result<(), CliError> {
    let format = out.format.or(file.format).unwrap_or(Format::Text);
    let path = out.output.clone().or_else(|| file.output.clone());
    let report = audit_tables();
    let mismatches = report.mismatches().count();
    let config = json!({"source": "printed table rows", "rows": PRINTED_ROWS.len()});
    let constraints: BTreeMap<String, ConstraintFlags> = PRINTED_ROWS
        .iter()
        .map(|r| {
            let p = SwansonParams::new(exact_f64(r.alpha), exact_f64(r.beta));
            let sp = match r.family {
                Family::Rm1Trig => Superpotential::Rm1Trig { a1: exact_f64(r.p1), b1: exact_f64(r.p2) },
                _ => Superpotential::Rm2Hyp { a2: exact_f64(r.p1), b2: exact_f64(r.p2) },
            };
            (format!("table{}_row{}", r.table(), r.row), check_constraints(&p, &sp))
        })
        .collect();
    let text = match format {
        Format::Json => json_text(&envelope(
            "table-audit",
            &config,
            &constraints,
            json!({"cells": report.cells, "mismatches": mismatches}),
        )?)?,
        Format::Csv => {
            let mut s = csv_header("table-audit", &config, &constraints, &[])?;
            s += "table,row,column,printed,formula,formula_value,status\n";
            for c in &report.cells {
                let _ = writeln!(s, "{},{},{},{},\"{}\",{},{}", c.table, c.row, c.column, c.printed, c.formula, float(c.formula_value), status(c.status));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:<6}{:<5}{:<12}{:<10}{:<24}{}\n", "table", "row", "column", "printed", "formula", "status");
            for c in &report.cells {
                let _ = writeln!(s, "{:<6}{:<5}{:<12}{:<10}{:<24}{}", c.table, c.row, c.column, c.printed, c.formula, status(c.status));
            }
            let _ = writeln!(s, "\n{mismatches} of {} cells mismatch", report.cells.len());
            s
        }
    };
    output::write(path.as_deref(), &text)
}

fn status(s: CellStatus) -> &'static str {
    match s {
        CellStatus::Match => "MATCH",
        CellStatus::Mismatch => "MISMATCH",
    }
}

fn exact_f64(r: pseudospec_core::exact::Rational) -> f64 {
    pseudospec_core::exact::to_f64(&r)
}

#[derive(Serialize)]
struct ScanConfig<'a> {
    model: &'a RunConfig,
    alpha_min: f64,
    alpha_max: f64,
    beta_min: f64,
    beta_max: f64,
    resolution: usize,
}

#[derive(Serialize)]
struct ScanCell {
    index: usize,
    alpha: f64,
    beta: f64,
    pass_mask: u32,
    admissible: bool,
    eps0: f64,
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

fn ground_energy(p: &SwansonParams, sp: &Superpotential) -> f64 {
    derive(p, sp)
        .and_then(|d| analytic::energy(&d, 0))
        .ok()
        .filter(|r| r.valid)
        .map_or(f64::NAN, |r| r.eps)
}

/// Worker count from PSEUDOSPEC_THREADS; rayon's default when unset.
fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PSEUDOSPEC_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Parse(format!("PSEUDOSPEC_THREADS = '{v}' is not a positive integer")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Solver(e.to_string()))
}

pub fn scan_cmd(args: &ScanArgs, file: &FileConfig) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(
        &Sources {
            file,
            model: &args.model,
            grid: &GridArgs::default(),
            tol: &ToleranceArgs::default(),
            out: &args.out,
        },
        Format::Csv,
    )?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    let fs = &file.scan;
    let sc = ScanConfig {
        model: &cfg,
        alpha_min: args.alpha_min.or(fs.alpha_min).unwrap_or(0.0),
        alpha_max: args.alpha_max.or(fs.alpha_max).unwrap_or(1.0),
        beta_min: args.beta_min.or(fs.beta_min).unwrap_or(0.0),
        beta_max: args.beta_max.or(fs.beta_max).unwrap_or(1.0),
        resolution: args.resolution.or(fs.resolution).unwrap_or(101),
    };
    let n = sc.resolution;
    if n == 0 || n > 4096 {
        return Err(CliError::Parse(format!("resolution = {n} must be in 1..=4096")));
    }
    for (lo, hi) in [(sc.alpha_min, sc.alpha_max), (sc.beta_min, sc.beta_max)] {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(CliError::Parse(format!("bad scan range [{lo}, {hi}]")));
        }
    }
    let sp = cfg.superpotential()?;
    let cells: Vec<ScanCell> = thread_pool()?.install(|| {
        (0..n * n)
            .into_par_iter()
            .map(|index| {
                let (alpha, beta) = (axis(sc.alpha_min, sc.alpha_max, n, index / n), axis(sc.beta_min, sc.beta_max, n, index % n));
                let p = SwansonParams::new(alpha, beta);
                let flags = check_constraints(&p, &sp);
                let admissible = flags.admissible();
                ScanCell {
                    index,
                    alpha,
                    beta,
                    pass_mask: flags.pass_mask(),
                    admissible,
                    eps0: if admissible { ground_energy(&p, &sp) } else { f64::NAN },
                }
            })
            .collect()
    });
    let count = cells.iter().filter(|c| c.admissible).count();
    let mut notes = vec![format!("{count} of {} cells admissible", cells.len())];
    if count == 0 {
        notes.push("the admissible region is empty for this superpotential and range".into());
    }
    let bits: BTreeMap<&str, u32> = Constraint::ALL
        .iter()
        .filter(|c| c.applies_to(sp.family()))
        .map(|c| (c.name(), c.bit()))
        .collect();
    let text = match cfg.format {
        Format::Json => json_text(&envelope("scan", &sc, &bits, json!({"notes": notes, "cells": cells}))?)?,
        Format::Csv | Format::Text => {
            let mut s = csv_header("scan", &sc, &bits, &notes)?;
            s += "index,alpha,beta,pass_mask,admissible,eps0\n";
            for c in &cells {
                let _ = writeln!(s, "{},{},{},{},{},{}", c.index, float(c.alpha), float(c.beta), c.pass_mask, c.admissible, float(c.eps0));
            }
            s
        }
    };
    output::write(cfg.output.as_deref(), &text)
}
