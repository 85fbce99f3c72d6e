//! The four subcommands. Each writes its report to `out` and returns an
//! [`Outcome`]; I/O and configuration problems come back as errors.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use tritoep::presets::reference_sets;
use tritoep::proof::{build_proof_trace_with, Check};
use tritoep::{check_hypotheses, spectral_report, theorem_bound, Error, MatrixSpec, Rational};

use crate::config::RunConfig;
use crate::output::{fmt_f64, scan_svg, write_csv, write_scan_csv, write_text, ScanRow};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    HypothesisViolated,
    NotConverged,
    CheckFailed,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::HypothesisViolated => 2,
            Outcome::NotConverged => 3,
            Outcome::CheckFailed => 4,
        }
    }
}

fn describe(mu: &Rational, a: &[Rational]) -> String {
    let a: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("i = {}, mu = {mu}, a = ({})", a.len(), a.join(", "))
}

fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

pub fn cmd_bound(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let spec = cfg.spec(cfg.max_n())?;
    let verdict = check_hypotheses(&spec);
    writeln!(out, "{}", describe(&cfg.mu, &cfg.a))?;
    let bound = if verdict.passes() {
        writeln!(out, "hypotheses: hold")?;
        Some(theorem_bound(&spec)?)
    } else {
        writeln!(out, "hypotheses: violated")?;
        for v in &verdict.violations {
            writeln!(out, "  - {v}")?;
        }
        None
    };
    let exponent = tritoep::bounds::exponent_exact(&spec);
    writeln!(out, "E = {exponent}")?;
    if let Some(b) = bound {
        writeln!(out, "theta = {}", fmt_f64(b.theta))?;
        writeln!(out, "omega = {}", fmt_f64(b.omega))?;
    }

    ensure_dir(&cfg.output_dir)?;
    let path = cfg.output_dir.join("bound.csv");
    let a: Vec<String> = cfg.a.iter().map(|x| x.to_string()).collect();
    write_csv(
        &path,
        &[
            "mu",
            "a",
            "period",
            "exponent",
            "hypotheses_hold",
            "theta",
            "omega",
        ],
        [[
            cfg.mu.to_string(),
            a.join(" "),
            cfg.a.len().to_string(),
            exponent.to_string(),
            verdict.passes().to_string(),
            bound.map(|b| fmt_f64(b.theta)).unwrap_or_default(),
            bound.map(|b| fmt_f64(b.omega)).unwrap_or_default(),
        ]],
    )?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(if bound.is_some() {
        Outcome::Ok
    } else {
        Outcome::HypothesisViolated
    })
}

/// Computes one row per `n`, concurrently, in the order of `cfg.n_values`.
pub fn scan_rows(cfg: &RunConfig) -> anyhow::Result<Vec<ScanRow>> {
    let base = cfg.spec(cfg.max_n())?;
    let omega = if check_hypotheses(&base).passes() {
        Some(theorem_bound(&base)?.omega)
    } else {
        None
    };
    let opts = cfg.power_options();
    let limits = cfg.limits();
    cfg.n_values
        .par_iter()
        .map(|&n| {
            let spec = base.with_dim(n)?;
            let rep =
                spectral_report(&spec, &opts, &limits).with_context(|| format!("at n = {n}"))?;
            Ok(ScanRow {
                n,
                sigma_n: rep.sigma_min,
                frob_inv_reciprocal: rep.frob_inv_reciprocal,
                omega,
                iterations: rep.iterations,
                converged: rep.converged,
            })
        })
        .collect()
}

fn report_scan(rows: &[ScanRow], out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let stalled: Vec<usize> = rows.iter().filter(|r| !r.converged).map(|r| r.n).collect();
    if stalled.is_empty() {
        Ok(Outcome::Ok)
    } else {
        writeln!(out, "not converged at n = {stalled:?}")?;
        Ok(Outcome::NotConverged)
    }
}

pub fn cmd_scan(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    writeln!(out, "{}", describe(&cfg.mu, &cfg.a))?;
    let rows = scan_rows(cfg)?;
    if rows.first().is_some_and(|r| r.omega.is_none()) {
        writeln!(out, "hypotheses violated; omega column left empty")?;
    }
    ensure_dir(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("scan.csv");
    write_scan_csv(&csv_path, &rows)?;
    writeln!(out, "wrote {} ({} rows)", csv_path.display(), rows.len())?;
    if cfg.emit_svg {
        let svg_path = cfg.output_dir.join("scan.svg");
        write_text(&svg_path, &scan_svg(&describe(&cfg.mu, &cfg.a), &rows))?;
        writeln!(out, "wrote {}", svg_path.display())?;
    }
    report_scan(&rows, out)
}

/// Scans every reference set over `cfg.n_values`. The parameters in `cfg`
/// are ignored; the numerical settings are used as given.
pub fn cmd_figures(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    ensure_dir(&cfg.output_dir)?;
    let mut outcome = Outcome::Ok;
    for preset in reference_sets() {
        let mut run = cfg.clone();
        let period = preset.period();
        run.use_preset(preset);
        let rows = scan_rows(&run)?;
        let stem = format!("fig_i{period}");
        let csv_path = cfg.output_dir.join(format!("{stem}.csv"));
        let svg_path = cfg.output_dir.join(format!("{stem}.svg"));
        write_scan_csv(&csv_path, &rows)?;
        write_text(&svg_path, &scan_svg(&describe(&run.mu, &run.a), &rows))?;
        writeln!(
            out,
            "wrote {} and {}",
            csv_path.display(),
            svg_path.display()
        )?;
        if report_scan(&rows, out)? != Outcome::Ok {
            outcome = Outcome::NotConverged;
        }
    }
    Ok(outcome)
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let spec: MatrixSpec = cfg.spec(cfg.max_n())?;
    writeln!(out, "{}, n = {}", describe(&cfg.mu, &cfg.a), spec.n())?;
    let trace = match build_proof_trace_with(&spec, &cfg.limits()) {
        Ok(t) => t,
        Err(Error::HypothesisViolated(v)) => {
            writeln!(out, "hypotheses: violated")?;
            for line in v {
                writeln!(out, "  - {line}")?;
            }
            return Ok(Outcome::HypothesisViolated);
        }
        Err(e) => return Err(e.into()),
    };

    let mut records = Vec::new();
    for which in Check::ALL {
        let c = trace.check(which);
        let at = c.at.map(|k| k.to_string()).unwrap_or_default();
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{:<7} lhs = {:<24} rhs = {:<24} tol = {:<6} at = {:<6} {verdict}",
            which.name(),
            fmt_f64(c.lhs),
            fmt_f64(c.rhs),
            fmt_f64(c.tol),
            at,
        )?;
        records.push([
            which.name().to_string(),
            fmt_f64(c.lhs),
            fmt_f64(c.rhs),
            fmt_f64(c.tol),
            at,
            c.instances.to_string(),
            c.pass.to_string(),
        ]);
    }
    writeln!(out, "nu = {}", fmt_f64(trace.nu))?;
    writeln!(out, "theta = {}", fmt_f64(trace.theta))?;
    writeln!(out, "E = {}", fmt_f64(trace.exponent))?;
    writeln!(out, "r = {}", fmt_f64(trace.r))?;
    writeln!(out, "x_hat = {}", fmt_f64(trace.x_hat))?;
    writeln!(out, "y_hat = {}", fmt_f64(trace.y_hat))?;

    ensure_dir(&cfg.output_dir)?;
    let path = cfg.output_dir.join("verify.csv");
    write_csv(
        &path,
        &["check", "lhs", "rhs", "tol", "at", "instances", "pass"],
        records,
    )?;
    writeln!(out, "wrote {}", path.display())?;

    Ok(if trace.all_pass() {
        Outcome::Ok
    } else {
        let names: Vec<&str> = trace.failures().iter().map(|c| c.name()).collect();
        writeln!(out, "failed: {}", names.join(", "))?;
        Outcome::CheckFailed
    })
}
