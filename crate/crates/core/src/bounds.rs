//! Hypothesis predicates, the closed-form lower bound `omega`, the contraction
//! sequences `psi`/`phi`, and the first column of the inverse.
//!
//! Throughout, with `S = a_1 + ... + a_{i-1}`:
//!
//! ```text
//! E     = i + a_i - S            (exponent)
//! G     = i - 1 + a_i - S        (denominator gap, E - 1)
//! theta = a_1^2 mu (1 + 4/mu)^E / (G (mu + 2)^2)
//! omega = sqrt((mu + 1) / (1 + theta))
//! psi_k = (mu + 2k - E) / (mu + 2k),   phi_k = psi_2 ... psi_k,  phi_1 = 1
//! ```

use crate::error::{Error, Result};
use crate::matrix::{MatrixSpec, Params};
use crate::rational::Rational;

/// Outcome of the exact hypothesis check. Every comparison is done on
/// rationals; nothing here goes through floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisVerdict {
    /// `0 <= a_2, ..., a_i <= a_1 <= mu + 3`, `a_1 >= 1`, `mu >= 0`.
    pub satisfies_eq2: bool,
    /// `a_1 + ... + a_{i-1} - a_i < i - 1` (strict).
    pub satisfies_eq3: bool,
    pub i_at_least_2: bool,
    /// `mu > 0`; needed because `theta` divides by `mu`.
    pub mu_strictly_positive: bool,
    pub violations: Vec<String>,
}

impl HypothesisVerdict {
    pub fn passes(&self) -> bool {
        self.satisfies_eq2 && self.satisfies_eq3 && self.i_at_least_2 && self.mu_strictly_positive
    }
}

pub fn check_hypotheses(spec: &MatrixSpec) -> HypothesisVerdict {
    let mu = spec.mu();
    let a = spec.a();
    let i = a.len();
    let a1 = &a[0];
    let mut violations = Vec::new();

    let mut eq2 = true;
    for (j, aj) in a.iter().enumerate().skip(1) {
        if aj.is_negative() {
            eq2 = false;
            violations.push(format!("a_{} = {} is negative", j + 1, aj));
        }
        if aj > a1 {
            eq2 = false;
            violations.push(format!("a_{} = {} exceeds a_1 = {}", j + 1, aj, a1));
        }
    }
    let mu_plus_3 = mu + &Rational::from_integer(3);
    if a1 > &mu_plus_3 {
        eq2 = false;
        violations.push(format!("a_1 = {a1} exceeds mu + 3 = {mu_plus_3}"));
    }
    if *a1 < 1 {
        eq2 = false;
        violations.push(format!("a_1 = {a1} is below 1"));
    }
    if mu.is_negative() {
        eq2 = false;
        violations.push(format!("mu = {mu} is negative"));
    }

    let lhs = head_sum(spec) - &a[i - 1];
    let rhs = Rational::from_integer(i as i64 - 1);
    let eq3 = lhs < rhs;
    if !eq3 {
        violations.push(format!(
            "a_1 + ... + a_{{i-1}} - a_i = {lhs} is not below i - 1 = {rhs}"
        ));
    }

    let i_at_least_2 = i >= 2;
    if !i_at_least_2 {
        violations.push(format!("period i = {i} is below 2"));
    }
    let mu_strictly_positive = mu.is_positive();
    if !mu_strictly_positive {
        violations.push(format!("mu = {mu} is not strictly positive"));
    }

    HypothesisVerdict {
        satisfies_eq2: eq2,
        satisfies_eq3: eq3,
        i_at_least_2,
        mu_strictly_positive,
        violations,
    }
}

/// `a_1 + ... + a_{i-1}`.
fn head_sum(spec: &MatrixSpec) -> Rational {
    let a = spec.a();
    a[..a.len() - 1].iter().sum()
}

/// `E = i + a_i - (a_1 + ... + a_{i-1})`, exactly.
pub fn exponent_exact(spec: &MatrixSpec) -> Rational {
    let i = spec.period() as i64;
    Rational::from_integer(i) + &spec.a()[spec.a().len() - 1] - &head_sum(spec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremBound {
    pub theta: f64,
    pub omega: f64,
    pub exponent: f64,
    pub denom_gap: f64,
}

pub fn theorem_bound(spec: &MatrixSpec) -> Result<TheoremBound> {
    if !spec.mu().is_positive() {
        return Err(Error::Domain(format!(
            "theta needs mu > 0, got mu = {}",
            spec.mu()
        )));
    }
    let e = exponent_exact(spec);
    let g = &e - &Rational::one();
    if !g.is_positive() {
        return Err(Error::Domain(format!(
            "theta needs i - 1 + a_i - (a_1 + ... + a_(i-1)) > 0, got {g}"
        )));
    }
    let mu = spec.mu_f64();
    let a1 = spec.a_f64()[0];
    let exponent = e.to_f64();
    let denom_gap = g.to_f64();
    // (1 + 4/mu)^E; repeated products are exact for small integer E
    let growth = if e.denom() == &1.into() && exponent.abs() <= 64.0 {
        let base = (spec.mu() + &Rational::from_integer(4)) / spec.mu().clone();
        base.to_f64().powi(exponent as i32)
    } else {
        (exponent * (4.0 / mu).ln_1p()).exp()
    };
    let theta = a1 * a1 * mu * growth / (denom_gap * (mu + 2.0) * (mu + 2.0));
    let omega = ((mu + 1.0) / (1.0 + theta)).sqrt();
    Ok(TheoremBound {
        theta,
        omega,
        exponent,
        denom_gap,
    })
}

pub fn theta(spec: &MatrixSpec) -> Result<f64> {
    theorem_bound(spec).map(|b| b.theta)
}

pub fn omega(spec: &MatrixSpec) -> Result<f64> {
    theorem_bound(spec).map(|b| b.omega)
}

/// `psi_k` for `k = 2..=k_max` and `phi_k` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSequence {
    /// `psi[0]` is `psi_2`.
    pub psi: Vec<f64>,
    /// `phi[0]` is `phi_1 = 1`.
    pub phi: Vec<f64>,
}

impl BoundSequence {
    pub fn k_max(&self) -> usize {
        self.phi.len()
    }

    /// `psi_k`, `k >= 2`.
    pub fn psi(&self, k: usize) -> f64 {
        assert!(k >= 2, "psi is defined from k = 2");
        self.psi[k - 2]
    }

    /// `phi_k`, `k >= 1`.
    pub fn phi(&self, k: usize) -> f64 {
        assert!(k >= 1, "phi is defined from k = 1");
        self.phi[k - 1]
    }
}

/// The `psi` formula is evaluated for every `k >= 2` since the running product
/// `phi` starts there.
pub fn psi_phi(spec: &MatrixSpec, k_max: usize) -> Result<BoundSequence> {
    if !spec.mu().is_positive() {
        return Err(Error::Domain(format!(
            "psi needs mu > 0, got mu = {}",
            spec.mu()
        )));
    }
    let k_max = k_max.max(1);
    let mu = spec.mu_f64();
    // numerator offset: S - a_i - i = -E
    let offset = -exponent_exact(spec).to_f64();
    let mut psi = Vec::with_capacity(k_max.saturating_sub(1));
    let mut phi = Vec::with_capacity(k_max);
    phi.push(1.0);
    for k in 2..=k_max {
        let two_k = 2.0 * k as f64;
        let p = (mu + two_k + offset) / (mu + two_k);
        psi.push(p);
        phi.push(phi[k - 2] * p);
    }
    Ok(BoundSequence { psi, phi })
}

/// First column `c` of `A^{-1}` (so `A c = e_1`).
#[derive(Debug, Clone, PartialEq)]
pub struct InverseColumn {
    pub c: Vec<f64>,
}

impl InverseColumn {
    /// 1-based access, `c_m`.
    pub fn get(&self, m: usize) -> f64 {
        self.c[m - 1]
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.c.iter().rev().map(|v| v * v).sum()
    }
}

/// `c_1 = 1/(mu+1)`, plain substitution up to `m = i+1`, then the banded
/// recurrence
///
/// ```text
/// c_m = (-a_1 c_{m-1} - ... - a_{i-1} c_{m-i+1} + (mu + m - i - a_i) c_{m-i}) / (mu + m)
/// ```
///
/// for `m >= i+2`. The right-hand side `e_1` is untouched by the row
/// differencing because `i + 2 > 1`.
pub fn inverse_first_column(spec: &MatrixSpec) -> Result<InverseColumn> {
    let params = spec.params();
    params.check_pivots(spec.n(), crate::matrix::Limits::default().pivot_floor)?;
    Ok(InverseColumn {
        c: first_column_kernel(params, spec.n()),
    })
}

pub(crate) fn first_column_kernel(p: Params<'_>, n: usize) -> Vec<f64> {
    let a = p.a;
    let i = a.len();
    let mut c = vec![0.0; n];
    c[0] = 1.0 / (p.mu + 1.0);
    for m in 2..=n.min(i + 1) {
        let s: f64 = (1..m).map(|k| a[m - k - 1] * c[k - 1]).sum();
        c[m - 1] = -s / (p.mu + m as f64);
    }
    for m in i + 2..=n {
        let mut s = (p.mu + (m - i) as f64 - a[i - 1]) * c[m - i - 1];
        for j in 1..i {
            s -= a[j - 1] * c[m - j - 1];
        }
        c[m - 1] = s / (p.mu + m as f64);
    }
    c
}
