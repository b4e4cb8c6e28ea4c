//! Dense real-symmetric linear algebra.
//!
//! Eigendecomposition is Householder reduction to tridiagonal form followed by
//! the implicit-shift QL iteration (the EISPACK `tred2`/`tql2` pair). Spectral
//! function calculus `f(A) = U f(Λ) Uᵀ` is built on top of it.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum QL sweeps spent on a single eigenvalue.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 50;

/// Dense real symmetric matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    /// Validates and wraps a row-major `n×n` buffer.
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::validation(
                "matrix",
                format!("expected {} entries for n = {n}, got {}", n * n, entries.len()),
            ));
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::validation(
                "matrix",
                format!("non-finite entry at ({}, {})", pos / n, pos % n),
            ));
        }
        let tol = T::lit(T::SYMMETRY_TOL);
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                if (a - b).abs() > tol * T::one().max(a.abs()) {
                    return Err(Error::validation(
                        "matrix",
                        format!("not symmetric at ({i}, {j}): {a} vs {b}"),
                    ));
                }
            }
        }
        Ok(SymMatrix { n, entries })
    }

    /// Builds a matrix from the upper triangle of `f(i, j)`, `i <= j`, mirrored below.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        SymMatrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { T::zero() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    /// Largest absolute off-diagonal entry.
    pub fn max_abs_off_diagonal(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    m = m.max(self.get(i, j).abs());
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        self.entries
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[T]) -> T {
        self.mul_vec(x).iter().zip(x).map(|(&a, &b)| a * b).sum()
    }

    /// Dense product `self · other`, row-major. The result is not symmetric in general.
    pub fn matmul(&self, other: &SymMatrix<T>) -> Vec<T> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// `alpha·self + beta·other`.
    pub fn lin_comb(&self, alpha: T, other: &SymMatrix<T>, beta: T) -> SymMatrix<T> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        }
    }

    /// Leading `k×k` principal submatrix.
    pub fn leading(&self, k: usize) -> SymMatrix<T> {
        assert!(k <= self.n);
        SymMatrix::from_fn(k, |i, j| self.get(i, j))
    }
}

impl<T: Real> Add for &SymMatrix<T> {
    type Output = SymMatrix<T>;
    fn add(self, rhs: &SymMatrix<T>) -> SymMatrix<T> {
        self.lin_comb(T::one(), rhs, T::one())
    }
}

impl<T: Real> Sub for &SymMatrix<T> {
    type Output = SymMatrix<T>;
    fn sub(self, rhs: &SymMatrix<T>) -> SymMatrix<T> {
        self.lin_comb(T::one(), rhs, -T::one())
    }
}

impl<T: Real> Mul<T> for &SymMatrix<T> {
    type Output = SymMatrix<T>;
    fn mul(self, rhs: T) -> SymMatrix<T> {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&a| a * rhs).collect(),
        }
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    n: usize,
    eigenvalues: Vec<T>,
    /// Row-major; column `k` is the eigenvector of `eigenvalues[k]`.
    vectors: Vec<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Component `i` of eigenvector `k`.
    #[inline]
    pub fn component(&self, i: usize, k: usize) -> T {
        self.vectors[i * self.n + k]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        (0..self.n).map(|i| self.component(i, k)).collect()
    }

    /// Applies `f` to the spectrum: `U·diag(f(λ))·Uᵀ`.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<SymMatrix<T>> {
        let values = self
            .eigenvalues
            .iter()
            .map(|&lam| {
                let v = f(lam);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteFunction {
                        eigenvalue: lam.as_f64(),
                    })
                }
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(self.compose(&values))
    }

    /// `U·diag(values)·Uᵀ` for caller-supplied diagonal values.
    pub fn compose(&self, values: &[T]) -> SymMatrix<T> {
        assert_eq!(values.len(), self.n);
        let n = self.n;
        // Scaled copy U·diag(values) so each entry is a plain dot product.
        let scaled: Vec<T> = self
            .vectors
            .iter()
            .enumerate()
            .map(|(idx, &u)| u * values[idx % n])
            .collect();
        SymMatrix::from_fn(n, |i, j| {
            let ri = &scaled[i * n..(i + 1) * n];
            let rj = &self.vectors[j * n..(j + 1) * n];
            ri.iter().zip(rj).map(|(&a, &b)| a * b).sum()
        })
    }

    /// `U Λ Uᵀ`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        self.compose(&self.eigenvalues)
    }

    /// `‖UᵀU − I‖_max`.
    pub fn orthonormality_error(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for a in 0..n {
            for b in a..n {
                let dot: T = (0..n)
                    .map(|i| self.component(i, a) * self.component(i, b))
                    .sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `‖AU − UΛ‖_max`.
    pub fn residual(&self, a: &SymMatrix<T>) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for k in 0..n {
            let v = self.eigenvector(k);
            let av = a.mul_vec(&v);
            for i in 0..n {
                worst = worst.max((av[i] - self.eigenvalues[k] * v[i]).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eigh<T: Real>(a: &SymMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = a.dim();
    let mut z = a.entries.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    if n == 0 {
        return Ok(SpectralDecomposition {
            n,
            eigenvalues: d,
            vectors: z,
        });
    }
    tridiagonalize(n, &mut z, &mut d, &mut e, true);
    tridiagonal_ql(n, &mut d, &mut e, Some(&mut z))?;
    let order = ascending_order(&d);
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_col] = z[i * n + old_col];
        }
    }
    Ok(SpectralDecomposition {
        n,
        eigenvalues,
        vectors,
    })
}

/// Ascending eigenvalues only; skips eigenvector accumulation.
pub fn eigvalsh<T: Real>(a: &SymMatrix<T>) -> Result<Vec<T>> {
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut z = a.entries.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(n, &mut z, &mut d, &mut e, false);
    tridiagonal_ql(n, &mut d, &mut e, None)?;
    Ok(ascending_order(&d).into_iter().map(|k| d[k]).collect())
}

/// `U·f(Λ)·Uᵀ` for a symmetric `a`.
pub fn apply_spectral_function<T: Real>(
    a: &SymMatrix<T>,
    f: impl Fn(T) -> T,
) -> Result<SymMatrix<T>> {
    eigh(a)?.map(f)
}

pub fn min_eigenvalue<T: Real>(a: &SymMatrix<T>) -> Result<T> {
    Ok(eigvalsh(a)?.first().copied().unwrap_or_else(T::zero))
}

/// Stable ascending permutation; exact ties keep index order.
fn ascending_order<T: Real>(d: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    order
}

/// Householder reduction of the symmetric matrix in `z` (row-major, lower
/// triangle referenced) to tridiagonal form. On return `d` holds the diagonal,
/// `e[1..]` the sub-diagonal, and, when `accumulate` is set, `z` holds the
/// orthogonal transformation.
fn tridiagonalize<T: Real>(n: usize, z: &mut [T], d: &mut [T], e: &mut [T], accumulate: bool) {
    let idx = |i: usize, j: usize| i * n + j;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale: T = (0..=l).map(|k| z[idx(i, k)].abs()).sum();
            if scale == T::zero() {
                e[i] = z[idx(i, l)];
            } else {
                for k in 0..=l {
                    z[idx(i, k)] /= scale;
                    h += z[idx(i, k)] * z[idx(i, k)];
                }
                let f = z[idx(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[idx(i, l)] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    if accumulate {
                        z[idx(j, i)] = z[idx(i, j)] / h;
                    }
                    let mut g = T::zero();
                    for k in 0..=j {
                        g += z[idx(j, k)] * z[idx(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += z[idx(k, j)] * z[idx(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * z[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = z[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[idx(j, k)] -= f * e[k] + g * z[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = z[idx(i, l)];
        }
        d[i] = h;
    }
    d[0] = T::zero();
    e[0] = T::zero();
    for i in 0..n {
        if accumulate {
            if d[i] != T::zero() {
                for j in 0..i {
                    let mut g = T::zero();
                    for k in 0..i {
                        g += z[idx(i, k)] * z[idx(k, j)];
                    }
                    for k in 0..i {
                        z[idx(k, j)] -= g * z[idx(k, i)];
                    }
                }
            }
            d[i] = z[idx(i, i)];
            z[idx(i, i)] = T::one();
            for j in 0..i {
                z[idx(j, i)] = T::zero();
                z[idx(i, j)] = T::zero();
            }
        } else {
            d[i] = z[idx(i, i)];
        }
    }
}

/// Implicit-shift QL on the tridiagonal (`d`, `e[1..]`), optionally rotating
/// the columns of `z`.
fn tridiagonal_ql<T: Real>(
    n: usize,
    d: &mut [T],
    e: &mut [T],
    mut z: Option<&mut [T]>,
) -> Result<()> {
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::NonConvergence { size: n, index: l });
            }
            sweeps += 1;
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
