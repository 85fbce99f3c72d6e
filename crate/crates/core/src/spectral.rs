//! Smallest singular value and Frobenius norm of the inverse, computed with
//! the structured solves only.
//!
//! `sigma_n = 1 / sqrt(lambda_max(A^{-T} A^{-1}))`. The dominant eigenvalue is
//! found by power iteration where each step is one forward solve followed by
//! one transposed solve, `O(n*i)` per step.
//!
//! The start vector is drawn from a 64-bit linear congruential generator so
//! runs are reproducible from the seed alone:
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! v_k    = 2 * (state >> 11) * 2^-53 - 1
//! ```
//!
//! seeded with `state = seed`, one draw per component.

use rayon::prelude::*;

use crate::bounds::first_column_kernel;
use crate::error::{Error, Result};
use crate::matrix::{forward_kernel, transpose_kernel, DenseMatrix, Limits, MatrixSpec};

/// Largest dimension accepted by [`dense_gram_eigen_oracle`].
pub const ORACLE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Relative change of successive Rayleigh quotients that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-12,
            max_iter: 50_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularValueEstimate {
    pub sigma_min: f64,
    pub iterations: usize,
    /// `||B v - lambda v|| / lambda` at the last iterate, `B = A^{-T} A^{-1}`.
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralReport {
    pub n: usize,
    pub sigma_min: f64,
    pub frob_inv: f64,
    pub frob_inv_reciprocal: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// The start-vector generator documented at module level.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    /// Uniform on `[-1, 1)`.
    pub fn next_signed(&mut self) -> f64 {
        self.state = self
            .state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        2.0 * ((self.state >> 11) as f64 * (1.0 / (1u64 << 53) as f64)) - 1.0
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration on `A^{-T} A^{-1}`. Non-convergence is not an error: the
/// estimate comes back with `converged == false`.
pub fn smallest_singular_value(
    spec: &MatrixSpec,
    opts: &PowerOptions,
) -> Result<SingularValueEstimate> {
    let n = spec.n();
    let params = spec.params();
    params.check_pivots(n, Limits::default().pivot_floor)?;
    if opts.max_iter == 0 {
        return Err(Error::Domain("max_iter must be at least 1".into()));
    }

    let mut rng = Lcg64::new(opts.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_signed()).collect();
    let nv = norm(&v);
    if nv == 0.0 {
        v.iter_mut().for_each(|x| *x = 1.0);
    }
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut w = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut lambda = f64::NAN;
    let mut residual = f64::NAN;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=opts.max_iter {
        iterations = it;
        forward_kernel(params, &v, &mut w);
        let next = w.iter().map(|x| x * x).sum::<f64>();
        transpose_kernel(params, &w, &mut u);
        residual = v
            .iter()
            .zip(&u)
            .map(|(vi, ui)| (ui - next * vi).powi(2))
            .sum::<f64>()
            .sqrt()
            / next;
        let done = it > 1 && (next - lambda).abs() <= opts.tol * next;
        lambda = next;
        let nu = norm(&u);
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::Domain(format!(
                "power iteration broke down at step {it} (|A^-T A^-1 v| = {nu})"
            )));
        }
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui / nu;
        }
        if done {
            converged = true;
            break;
        }
    }

    Ok(SingularValueEstimate {
        sigma_min: 1.0 / lambda.sqrt(),
        iterations,
        residual,
        converged,
    })
}

pub fn frobenius_inverse_norm(spec: &MatrixSpec) -> Result<f64> {
    frobenius_inverse_norm_with(spec, &Limits::default())
}

/// `||A^{-1}||_F` from the `n` columns of the inverse. Column `j` solves
/// `A x = e_j`; its nonzero part is the first inverse column of the trailing
/// block, which is the same matrix family with `mu + j - 1`.
///
/// Columns are solved in parallel; their squared norms are reduced in a fixed
/// order so the result does not depend on scheduling.
pub fn frobenius_inverse_norm_with(spec: &MatrixSpec, limits: &Limits) -> Result<f64> {
    let n = spec.n();
    if n > limits.exact_cap {
        return Err(Error::DimensionTooLarge {
            n,
            cap: limits.exact_cap,
        });
    }
    let params = spec.params();
    params.check_pivots(n, limits.pivot_floor)?;
    let col_sq: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            first_column_kernel(params.shifted(j), n - j)
                .iter()
                .rev()
                .map(|v| v * v)
                .sum::<f64>()
        })
        .collect();
    // later columns are smaller; add them first
    Ok(col_sq.iter().rev().sum::<f64>().sqrt())
}

pub fn spectral_report(
    spec: &MatrixSpec,
    opts: &PowerOptions,
    limits: &Limits,
) -> Result<SpectralReport> {
    let est = smallest_singular_value(spec, opts)?;
    let frob_inv = frobenius_inverse_norm_with(spec, limits)?;
    Ok(SpectralReport {
        n: spec.n(),
        sigma_min: est.sigma_min,
        frob_inv,
        frob_inv_reciprocal: 1.0 / frob_inv,
        iterations: est.iterations,
        residual: est.residual,
        converged: est.converged,
    })
}

/// Eigenvalues of `A^T A`, ascending, by cyclic one-sided Jacobi rotations
/// applied to the columns of `A`. Each rotation is the two-sided Jacobi
/// rotation of the Gram matrix, but the Gram matrix is never formed, so small
/// eigenvalues keep their relative accuracy.
///
/// A sweep rotates every pair `p < q` whose normalized off-diagonal Gram entry
/// `|g_pq| / sqrt(g_pp g_qq)` exceeds `1e-15`; iteration stops after a sweep
/// with no rotations.
pub fn dense_gram_eigen_oracle(dense: &DenseMatrix) -> Result<Vec<f64>> {
    let n = dense.n();
    if n > ORACLE_CAP {
        return Err(Error::DimensionTooLarge { n, cap: ORACLE_CAP });
    }
    const TOL: f64 = 1e-15;
    const MAX_SWEEPS: usize = 100;

    // column-major copy
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|c| (0..n).map(|r| dense.get(r, c)).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (head, tail) = cols.split_at_mut(q);
                let (up, uq) = (&mut head[p], &mut tail[0]);
                let alpha: f64 = up.iter().map(|x| x * x).sum();
                let beta: f64 = uq.iter().map(|x| x * x).sum();
                let gamma: f64 = up.iter().zip(uq.iter()).map(|(x, y)| x * y).sum();
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in up.iter_mut().zip(uq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut eig: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum()).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
