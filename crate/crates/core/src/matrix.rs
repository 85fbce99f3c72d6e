//! Periodic lower-triangular Toeplitz matrices with a linearly growing diagonal.
//!
//! Row `r`, column `c` (1-based) of the `n x n` matrix is
//!
//! ```text
//! A[r][c] = mu + r                      if r == c
//!         = a[((r - c - 1) mod i) + 1]  if r >  c
//!         = 0                           if r <  c
//! ```
//!
//! so the first column reads `(mu+1, a1, ..., ai, a1, ..., ai, ...)`.
//!
//! All products and solves here run in `O(n*i)` time without forming the
//! matrix. Subtracting row `m-i` from row `m` (for `m >= i+2`) cancels the
//! periodic tail and leaves a matrix of bandwidth `i` whose `m`-th row is
//!
//! ```text
//! [.. 0, a_i - (mu + m - i), a_{i-1}, ..., a_1, mu + m]
//! ```
//!
//! which is what [`forward_solve`] substitutes against. [`transpose_solve`]
//! back-substitutes on `A^T` directly, keeping one running sum per residue
//! class of the row index as [`matvec`] does. [`DenseMatrix`] exists only as
//! a small-`n` reference for testing.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Size caps and the pivot floor used by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Largest `n` for which a dense `n x n` matrix may be materialized.
    pub dense_cap: usize,
    /// Largest `n` for which the exact Frobenius norm of the inverse is computed.
    pub exact_cap: usize,
    /// A diagonal entry with `|mu + m|` below this is treated as singular.
    pub pivot_floor: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dense_cap: 4096,
            exact_cap: 4096,
            pivot_floor: 1e-300,
        }
    }
}

/// Multiply-add counter for the structured kernels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub mul_adds: u64,
}

/// The parameters `(mu, a_1..a_i, n)` of one matrix. Parameters are exact
/// rationals; their nearest `f64` values are cached for the kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSpec {
    mu: Rational,
    a: Vec<Rational>,
    n: usize,
    mu_f: f64,
    a_f: Vec<f64>,
}

impl MatrixSpec {
    pub fn new(mu: Rational, a: Vec<Rational>, n: usize) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidSpec("period i must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("dimension n must be at least 1".into()));
        }
        let mu_f = mu.to_f64();
        let a_f: Vec<f64> = a.iter().map(Rational::to_f64).collect();
        if !mu_f.is_finite() || a_f.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec("parameters overflow binary64".into()));
        }
        Ok(MatrixSpec {
            mu,
            a,
            n,
            mu_f,
            a_f,
        })
    }

    /// Same parameters, different dimension.
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        MatrixSpec::new(self.mu.clone(), self.a.clone(), n)
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    /// The period `i`.
    pub fn period(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu_f64(&self) -> f64 {
        self.mu_f
    }

    pub fn a_f64(&self) -> &[f64] {
        &self.a_f
    }

    /// Entry at 1-based `(r, c)`, using the cached `f64` parameters.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        assert!(
            r >= 1 && c >= 1 && r <= self.n && c <= self.n,
            "index out of range"
        );
        match r.cmp(&c) {
            std::cmp::Ordering::Equal => self.mu_f + r as f64,
            std::cmp::Ordering::Greater => self.a_f[(r - c - 1) % self.period()],
            std::cmp::Ordering::Less => 0.0,
        }
    }

    pub(crate) fn params(&self) -> Params<'_> {
        Params {
            mu: self.mu_f,
            a: &self.a_f,
        }
    }
}

/// Borrowed `f64` view of the parameters. The diagonal shift can differ from
/// the `MatrixSpec` value of `mu`: the trailing block of `A` starting at row `j` is the
/// same family with `mu + j - 1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Params<'a> {
    pub mu: f64,
    pub a: &'a [f64],
}

impl<'a> Params<'a> {
    pub fn shifted(self, by: usize) -> Params<'a> {
        Params {
            mu: self.mu + by as f64,
            a: self.a,
        }
    }

    pub fn check_pivots(&self, n: usize, floor: f64) -> Result<()> {
        for m in 1..=n {
            let d = self.mu + m as f64;
            if d.abs() < floor || d.is_nan() {
                return Err(Error::SingularDiagonal { row: m, value: d });
            }
        }
        Ok(())
    }
}

/// Running sum with error-free transformations (TwoSum, FMA TwoProduct).
struct Dot2 {
    sum: f64,
    err: f64,
}

impl Dot2 {
    fn new(start: f64) -> Self {
        Dot2 {
            sum: start,
            err: 0.0,
        }
    }

    /// Adds `-a * b`.
    fn sub_product(&mut self, a: f64, b: f64) {
        let p = -a * b;
        let ep = (-a).mul_add(b, -p);
        let s = self.sum + p;
        let bb = s - self.sum;
        let es = (self.sum - (s - bb)) + (p - bb);
        self.sum = s;
        self.err += es + ep;
    }

    fn value(&self) -> f64 {
        self.sum + self.err
    }
}

/// Row-major dense `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = DenseMatrix::zeros(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            m.data[r * n..(r + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// 0-based access.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let v = self.get(r, k);
                if v == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += v * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        Ok((0..self.n)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self.get(r, c) == 0.0))
    }

    /// Forward substitution for a lower-triangular matrix. Each row's inner
    /// product is accumulated in doubled precision, so the result is close
    /// to the exactly rounded recurrence and serves as a reference.
    pub fn forward_substitute(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, b.len())?;
        let mut x = b.to_vec();
        for r in 0..self.n {
            let mut acc = Dot2::new(x[r]);
            for (c, xc) in x[..r].iter().enumerate() {
                acc.sub_product(self.get(r, c), *xc);
            }
            x[r] = acc.value() / self.get(r, r);
        }
        Ok(x)
    }

    /// Solves `L^T x = b` for lower-triangular `L` (backward substitution),
    /// with the same doubled-precision inner products.
    pub fn transpose_back_substitute(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, b.len())?;
        let mut x = b.to_vec();
        for r in (0..self.n).rev() {
            let mut acc = Dot2::new(x[r]);
            for (c, xc) in x.iter().enumerate().skip(r + 1) {
                acc.sub_product(self.get(c, r), *xc);
            }
            x[r] = acc.value() / self.get(r, r);
        }
        Ok(x)
    }

    /// Explicit inverse of a lower-triangular matrix, one column at a time.
    pub fn lower_inverse(&self) -> Result<DenseMatrix> {
        let n = self.n;
        let mut inv = DenseMatrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.forward_substitute(&e)?;
            for (r, v) in col.into_iter().enumerate() {
                inv.set(r, j, v);
            }
        }
        Ok(inv)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub fn materialize_dense(spec: &MatrixSpec) -> Result<DenseMatrix> {
    materialize_dense_with(spec, &Limits::default())
}

pub fn materialize_dense_with(spec: &MatrixSpec, limits: &Limits) -> Result<DenseMatrix> {
    let n = spec.n();
    if n > limits.dense_cap {
        return Err(Error::DimensionTooLarge {
            n,
            cap: limits.dense_cap,
        });
    }
    let mut m = DenseMatrix::zeros(n);
    for r in 1..=n {
        for c in 1..=r {
            m.set(r - 1, c - 1, spec.entry(r, c));
        }
    }
    Ok(m)
}

/// `A x` in `O(n*i)` time using one running sum per residue class of the
/// column index modulo `i`.
pub fn matvec(spec: &MatrixSpec, x: &[f64]) -> Result<Vec<f64>> {
    matvec_counted(spec, x, None)
}

pub fn matvec_counted(
    spec: &MatrixSpec,
    x: &[f64],
    counter: Option<&mut OpCounter>,
) -> Result<Vec<f64>> {
    check_len(spec.n(), x.len())?;
    let Params { mu, a } = spec.params();
    let i = a.len();
    // class[q] = sum of x_k over k < m with k = q (mod i)
    let mut class = vec![0.0; i];
    let mut y = vec![0.0; x.len()];
    for m in 1..=x.len() {
        let mut s = (mu + m as f64) * x[m - 1];
        for (r, ar) in a.iter().enumerate() {
            // a_{r+1} multiplies the columns k with k = m - r - 1 (mod i)
            let q = (m + i - (r + 1) % i) % i;
            s += ar * class[q];
        }
        y[m - 1] = s;
        class[m % i] += x[m - 1];
    }
    if let Some(c) = counter {
        c.mul_adds += (x.len() * (i + 1)) as u64;
    }
    Ok(y)
}

/// `A^T x` in `O(n*i)` time.
pub fn transpose_matvec(spec: &MatrixSpec, x: &[f64]) -> Result<Vec<f64>> {
    check_len(spec.n(), x.len())?;
    let Params { mu, a } = spec.params();
    let i = a.len();
    // class[q] = sum of x_r over r > c with r = q (mod i)
    let mut class = vec![0.0; i];
    let mut y = vec![0.0; x.len()];
    for c in (1..=x.len()).rev() {
        let mut s = (mu + c as f64) * x[c - 1];
        for (j, aj) in a.iter().enumerate() {
            s += aj * class[(c + j + 1) % i];
        }
        y[c - 1] = s;
        class[c % i] += x[c - 1];
    }
    Ok(y)
}

/// Solves `A x = b` by banded substitution on the row-differenced system.
pub fn forward_solve(spec: &MatrixSpec, b: &[f64]) -> Result<Vec<f64>> {
    forward_solve_with(spec, b, &Limits::default(), None)
}

pub fn forward_solve_with(
    spec: &MatrixSpec,
    b: &[f64],
    limits: &Limits,
    counter: Option<&mut OpCounter>,
) -> Result<Vec<f64>> {
    check_len(spec.n(), b.len())?;
    let params = spec.params();
    params.check_pivots(spec.n(), limits.pivot_floor)?;
    let mut x = vec![0.0; b.len()];
    let ops = forward_kernel(params, b, &mut x);
    if let Some(c) = counter {
        c.mul_adds += ops;
    }
    Ok(x)
}

/// Solves `A^T x = b` by back-substitution with `i` residue-class sums.
///
/// The transpose also factors as `Ã^T R^{-T}`, but recovering `x_c` as
/// `y_c - y_{c+i}` from the banded solve cancels badly: `Ã^T` has
/// off-diagonal entries nearly as large as its diagonal, so errors in `y`
/// do not decay.
pub fn transpose_solve(spec: &MatrixSpec, b: &[f64]) -> Result<Vec<f64>> {
    transpose_solve_with(spec, b, &Limits::default(), None)
}

pub fn transpose_solve_with(
    spec: &MatrixSpec,
    b: &[f64],
    limits: &Limits,
    counter: Option<&mut OpCounter>,
) -> Result<Vec<f64>> {
    check_len(spec.n(), b.len())?;
    let params = spec.params();
    params.check_pivots(spec.n(), limits.pivot_floor)?;
    let mut x = vec![0.0; b.len()];
    let ops = transpose_kernel(params, b, &mut x);
    if let Some(c) = counter {
        c.mul_adds += ops;
    }
    Ok(x)
}

/// Forward kernel. Pivots must already be checked. Returns the multiply-add
/// count.
pub(crate) fn forward_kernel(p: Params<'_>, b: &[f64], x: &mut [f64]) -> u64 {
    let n = b.len();
    let i = p.a.len();
    let a_last = p.a[i - 1];
    let mut ops = 0u64;
    for m in 1..=n {
        let s = if m >= i + 2 {
            let mut s = b[m - 1] - b[m - 1 - i];
            for j in 1..i {
                s -= p.a[j - 1] * x[m - 1 - j];
            }
            // Ã[m][m-i] = a_i - (mu + m - i)
            s + (p.mu + (m - i) as f64 - a_last) * x[m - 1 - i]
        } else {
            let mut s = b[m - 1];
            for c in 1..m {
                s -= p.a[m - c - 1] * x[c - 1];
            }
            s
        };
        ops += (m - 1).min(i) as u64 + 1;
        x[m - 1] = s / (p.mu + m as f64);
    }
    ops
}

pub(crate) fn transpose_kernel(p: Params<'_>, b: &[f64], x: &mut [f64]) -> u64 {
    let n = b.len();
    let i = p.a.len();
    // Row c of A^T holds a_{((r-c-1) mod i)+1} at column r > c, so it only
    // sees x_r through the sums t[r mod i].
    let mut t = vec![0.0; i];
    for c in (1..=n).rev() {
        let mut s = b[c - 1];
        for (q, tq) in t.iter().enumerate() {
            s -= p.a[(q + 2 * i - 1 - c % i) % i] * tq;
        }
        let v = s / (p.mu + c as f64);
        x[c - 1] = v;
        t[c % i] += v;
    }
    (n * (i + 1)) as u64
}
