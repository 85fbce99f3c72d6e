//! Numerical instantiation of the decay argument behind `omega`.
//!
//! For a hypothesis-satisfying spec the trace evaluates every intermediate
//! quantity on the concrete `n x n` instance and checks each inequality of
//! the chain:
//!
//! | check    | inequality                                                     |
//! |----------|----------------------------------------------------------------|
//! | `EE13`   | `|c_2k|, |c_2k+1| <= phi_k |c_2|`                              |
//! | `INEQ16` | `(mu+2k+3-i-a_i + a_1 psi_{k+1} + a_2+..+a_{i-1})/(mu+2k+3) <= psi_{k+1}` |
//! | `ZBOUND` | `z_m <= (mu/2+2)^(E/2) (mu/2+m)^(-E/2) z_1`                    |
//! | `ZNORM`  | `||z||^2 <= theta / (2 (mu+1)^2)`                              |
//! | `CNORM`  | `||c||^2 <= (1+theta) / (mu+1)^2`                              |
//! | `FROB`   | `||A^{-1}||_F^2 <= (1+theta) / (mu+1)`                         |
//!
//! Per-index checks report their worst instance (largest `lhs / rhs`).
//!
//! `EE13` (and `ZBOUND`, which follows from it) do not hold for every
//! admissible spec. When `E > 2` the first inverse column decays per period
//! `i` rather than per two indices; small `mu` breaks it as well. `ZNORM` and
//! `CNORM` inherit the failure on some specs. `FROB` has held on every
//! instance tried.

use std::collections::BTreeMap;
use std::fmt;

use crate::bounds::{
    check_hypotheses, exponent_exact, inverse_first_column, psi_phi, theorem_bound, BoundSequence,
    InverseColumn,
};
use crate::error::{Error, Result};
use crate::matrix::{Limits, MatrixSpec};
use crate::spectral::frobenius_inverse_norm_with;

/// Multiplicative slack on the per-index induction bound.
pub const EE13_TOL: f64 = 1e-9;
/// Multiplicative slack on every other check.
pub const CHECK_TOL: f64 = 1e-8;
/// Largest `k` at which `INEQ16` is sampled.
pub const INEQ16_K_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Ee13,
    Ineq16,
    ZBound,
    ZNorm,
    CNorm,
    Frob,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Ee13,
        Check::Ineq16,
        Check::ZBound,
        Check::ZNorm,
        Check::CNorm,
        Check::Frob,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Ee13 => "EE13",
            Check::Ineq16 => "INEQ16",
            Check::ZBound => "ZBOUND",
            Check::ZNorm => "ZNORM",
            Check::CNorm => "CNORM",
            Check::Frob => "FROB",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub pass: bool,
    /// Index (k or m) of the reported instance for per-index checks.
    pub at: Option<usize>,
    /// Number of instances evaluated.
    pub instances: usize,
}

impl CheckRecord {
    fn scalar(lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckRecord {
            lhs,
            rhs,
            tol,
            pass: holds(lhs, rhs, tol),
            at: None,
            instances: 1,
        }
    }
}

fn holds(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs * (1.0 + tol)
}

/// Tracks the worst `(lhs, rhs)` pair of a per-index check.
struct Worst {
    tol: f64,
    best: Option<(f64, f64, usize)>,
    badness: f64,
    all_pass: bool,
    instances: usize,
}

impl Worst {
    fn new(tol: f64) -> Self {
        Worst {
            tol,
            best: None,
            badness: f64::NEG_INFINITY,
            all_pass: true,
            instances: 0,
        }
    }

    fn push(&mut self, lhs: f64, rhs: f64, at: usize) {
        self.instances += 1;
        let ok = holds(lhs, rhs, self.tol);
        self.all_pass &= ok;
        let badness = if rhs > 0.0 {
            lhs / rhs
        } else if ok {
            0.0
        } else {
            f64::INFINITY
        };
        if badness > self.badness || self.best.is_none() {
            self.badness = badness;
            self.best = Some((lhs, rhs, at));
        }
    }

    fn finish(self) -> CheckRecord {
        let (lhs, rhs, at) = self.best.unwrap_or((0.0, 0.0, 0));
        CheckRecord {
            lhs,
            rhs,
            tol: self.tol,
            pass: self.all_pass,
            at: self.best.map(|_| at),
            instances: self.instances,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofTrace {
    pub n: usize,
    pub c: InverseColumn,
    pub sequence: BoundSequence,
    /// `z[0] = |c_2|`, `z[m-1] = max(|c_2m|, |c_2m+1|)` for `2 <= m <= n/2`.
    pub z: Vec<f64>,
    pub theta: f64,
    pub exponent: f64,
    pub nu: f64,
    pub r: f64,
    pub x_hat: f64,
    pub y_hat: f64,
    pub z_norm_sq: f64,
    pub c_norm_sq: f64,
    pub frob_inv_sq: f64,
    pub checks: BTreeMap<Check, CheckRecord>,
}

impl ProofTrace {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<Check> {
        self.checks
            .iter()
            .filter(|(_, r)| !r.pass)
            .map(|(c, _)| *c)
            .collect()
    }

    pub fn check(&self, which: Check) -> &CheckRecord {
        &self.checks[&which]
    }

    /// Whether `r` lands in `[0, 1]`, the range Gautschi's inequality needs.
    /// This holds exactly when `E <= 2`.
    pub fn r_in_unit_interval(&self) -> bool {
        (0.0..=1.0).contains(&self.r)
    }
}

pub fn build_proof_trace(spec: &MatrixSpec) -> Result<ProofTrace> {
    build_proof_trace_with(spec, &Limits::default())
}

pub fn build_proof_trace_with(spec: &MatrixSpec, limits: &Limits) -> Result<ProofTrace> {
    let verdict = check_hypotheses(spec);
    if !verdict.passes() {
        return Err(Error::HypothesisViolated(verdict.violations));
    }
    let n = spec.n();
    let i = spec.period();
    let mu = spec.mu_f64();
    let a = spec.a_f64();
    let a1 = a[0];
    let bound = theorem_bound(spec)?;
    let theta = bound.theta;
    let e = bound.exponent;
    // S - a_i - i, exactly, then rounded
    let neg_e = -exponent_exact(spec).to_f64();

    let c = inverse_first_column(spec)?;
    let half = n / 2;
    // phi up to n/2 and psi up to n/2 + 1
    let sequence = psi_phi(spec, half + 1)?;

    let abs_c = |m: usize| -> Option<f64> { (m <= n).then(|| c.get(m).abs()) };
    let c2 = abs_c(2).unwrap_or(0.0);

    let mut z = Vec::with_capacity(half);
    if half >= 1 {
        z.push(c2);
    }
    for m in 2..=half {
        let even = abs_c(2 * m).unwrap_or(0.0);
        let odd = abs_c(2 * m + 1).unwrap_or(0.0);
        z.push(even.max(odd));
    }

    let mut checks = BTreeMap::new();

    let mut ee13 = Worst::new(EE13_TOL);
    for k in 1..=half {
        let rhs = sequence.phi(k) * c2;
        for idx in [2 * k, 2 * k + 1] {
            if let Some(v) = abs_c(idx) {
                ee13.push(v, rhs, idx);
            }
        }
    }
    checks.insert(Check::Ee13, ee13.finish());

    let mut ineq16 = Worst::new(CHECK_TOL);
    let middle: f64 = a[1..i - 1].iter().sum();
    let a_last = a[i - 1];
    for k in i.div_ceil(2)..=half.min(INEQ16_K_CAP) {
        let psi_next = sequence.psi(k + 1);
        let base = mu + (2 * k + 3) as f64;
        let lhs = (base - i as f64 - a_last + a1 * psi_next + middle) / base;
        ineq16.push(lhs, psi_next, k);
    }
    checks.insert(Check::Ineq16, ineq16.finish());

    let y_hat = mu / 2.0 + 2.0;
    let mut zbound = Worst::new(CHECK_TOL);
    if let Some(&z1) = z.first() {
        for (idx, &zm) in z.iter().enumerate() {
            let m = idx + 1;
            let rhs = z1 * (0.5 * e * (y_hat.ln() - (mu / 2.0 + m as f64).ln())).exp();
            zbound.push(zm, rhs, m);
        }
    }
    checks.insert(Check::ZBound, zbound.finish());

    let z_norm_sq: f64 = z.iter().rev().map(|v| v * v).sum();
    let mu1_sq = (mu + 1.0) * (mu + 1.0);
    checks.insert(
        Check::ZNorm,
        CheckRecord::scalar(z_norm_sq, theta / (2.0 * mu1_sq), CHECK_TOL),
    );

    let c_norm_sq = c.norm_sq();
    checks.insert(
        Check::CNorm,
        CheckRecord::scalar(c_norm_sq, (1.0 + theta) / mu1_sq, CHECK_TOL),
    );

    let frob = frobenius_inverse_norm_with(spec, limits)?;
    let frob_inv_sq = frob * frob;
    checks.insert(
        Check::Frob,
        CheckRecord::scalar(frob_inv_sq, (1.0 + theta) / (mu + 1.0), CHECK_TOL),
    );

    let nu = y_hat.powf(e) * a1 * a1 / (mu1_sq * (mu + 2.0) * (mu + 2.0));
    let x_hat = (mu + neg_e) / 2.0 + 2.0;
    let r = x_hat - y_hat + 1.0;

    Ok(ProofTrace {
        n,
        c,
        sequence,
        z,
        theta,
        exponent: e,
        nu,
        r,
        x_hat,
        y_hat,
        z_norm_sq,
        c_norm_sq,
        frob_inv_sq,
        checks,
    })
}
