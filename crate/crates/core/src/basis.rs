//! Truncated radial harmonic-oscillator basis at fixed orbital angular momentum.
//!
//! With oscillator length `b` and `α = l + 1/2`, the position-squared and
//! momentum-squared operators are tridiagonal:
//!
//! ```text
//! ⟨n|r²|n⟩   =  b² (2n + l + 3/2)      ⟨n−1|r²|n⟩ = −b² √(n (n + α))
//! ⟨n|p²|n⟩   = b⁻² (2n + l + 3/2)      ⟨n−1|p²|n⟩ = +b⁻² √(n (n + α))
//! ```
//!
//! Arbitrary `V(r)` and `T(p²)` are represented by spectral function calculus
//! on these two matrices. Power laws `r^p` also have exact matrix elements
//! through [`RadialBasis::power_matrix`]. The centrifugal barrier is carried by the basis
//! functions themselves, so `p²` is the full momentum magnitude squared.

use crate::error::{Error, Result};
use crate::linalg::{eigh, SpectralDecomposition, SymMatrix};
use crate::scalar::Real;
use std::sync::{Arc, Mutex};

/// Orbital angular momentum, basis size and oscillator length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec<T> {
    l: usize,
    size: usize,
    b: T,
}

impl<T: Real> BasisSpec<T> {
    pub fn new(l: usize, size: usize, b: T) -> Result<Self> {
        if size < 2 {
            return Err(Error::validation("basis size", format!("need N >= 2, got {size}")));
        }
        if !(b > T::zero() && b.is_finite()) {
            return Err(Error::validation(
                "oscillator length",
                format!("need finite b > 0, got {b}"),
            ));
        }
        Ok(BasisSpec { l, size, b })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Same `l` and `N`, different oscillator length.
    pub fn with_b(&self, b: T) -> Result<Self> {
        Self::new(self.l, self.size, b)
    }

    pub fn with_l(&self, l: usize) -> Self {
        BasisSpec { l, ..*self }
    }

    pub fn with_size(&self, size: usize) -> Result<Self> {
        Self::new(self.l, size, self.b)
    }
}

/// `2n + l + 3/2`
fn ho_quantum<T: Real>(n: usize, l: usize) -> T {
    T::from_usize_lossy(2 * n + l) + T::lit(1.5)
}

/// `√(n (n + l + 1/2))`, coupling between states `n−1` and `n`.
fn ho_coupling<T: Real>(n: usize, l: usize) -> T {
    let n_t = T::from_usize_lossy(n);
    (n_t * (n_t + T::from_usize_lossy(l) + T::lit(0.5))).sqrt()
}

fn tridiagonal<T: Real>(size: usize, l: usize, scale: T, off_sign: T) -> SymMatrix<T> {
    SymMatrix::from_fn(size, |i, j| {
        if i == j {
            scale * ho_quantum(i, l)
        } else if j == i + 1 {
            off_sign * scale * ho_coupling(j, l)
        } else {
            T::zero()
        }
    })
}

/// Matrix of `r²` in the basis.
pub fn r2_matrix<T: Real>(basis: &BasisSpec<T>) -> SymMatrix<T> {
    tridiagonal(basis.size, basis.l, basis.b * basis.b, -T::one())
}

/// Matrix of `p²` in the basis.
pub fn p2_matrix<T: Real>(basis: &BasisSpec<T>) -> SymMatrix<T> {
    tridiagonal(basis.size, basis.l, (basis.b * basis.b).recip(), T::one())
}

/// `V(r)` via function calculus on the `r²` matrix.
pub fn potential_matrix<T: Real>(
    basis: &BasisSpec<T>,
    v: impl Fn(T) -> T,
) -> Result<SymMatrix<T>> {
    RadialBasis::new(basis.l, basis.size)?.potential_matrix(basis.b, v)
}

/// `T(p²)` via function calculus on the `p²` matrix.
pub fn kinetic_matrix<T: Real>(
    basis: &BasisSpec<T>,
    t: impl Fn(T) -> T,
) -> Result<SymMatrix<T>> {
    RadialBasis::new(basis.l, basis.size)?.kinetic_matrix(basis.b, t)
}

/// Cached spectral data for one `(l, N)` block, reusable across oscillator lengths.
///
/// `r²(b) = b²·r²(1)` and `p²(b) = b⁻²·p²(1)`, so the eigenvectors do not
/// depend on `b`. Moreover `p²(1) = S·r²(1)·S` with `S = diag((−1)ⁿ)`, so a
/// single decomposition serves both operators.
#[derive(Debug)]
pub struct RadialBasis<T> {
    l: usize,
    size: usize,
    unit_r2: SpectralDecomposition<T>,
    powers: Mutex<Vec<(T, Arc<SymMatrix<T>>)>>,
}

impl<T: Real> Clone for RadialBasis<T> {
    fn clone(&self) -> Self {
        let powers = self.powers.lock().map(|p| p.clone()).unwrap_or_default();
        RadialBasis {
            l: self.l,
            size: self.size,
            unit_r2: self.unit_r2.clone(),
            powers: Mutex::new(powers),
        }
    }
}

impl<T: Real> RadialBasis<T> {
    pub fn new(l: usize, size: usize) -> Result<Self> {
        let unit = BasisSpec::new(l, size, T::one())?;
        let unit_r2 = eigh(&r2_matrix(&unit))?;
        if let Some(&bad) = unit_r2.eigenvalues().iter().find(|&&x| x <= T::zero()) {
            return Err(Error::NonPositiveMesh { value: bad.as_f64() });
        }
        Ok(RadialBasis {
            l,
            size,
            unit_r2,
            powers: Mutex::new(Vec::new()),
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spec(&self, b: T) -> Result<BasisSpec<T>> {
        BasisSpec::new(self.l, self.size, b)
    }

    /// Radial mesh points `rᵢ = √λᵢ(r²)`, ascending.
    pub fn radial_mesh(&self, b: T) -> Vec<T> {
        self.unit_r2
            .eigenvalues()
            .iter()
            .map(|&lam| b * lam.sqrt())
            .collect()
    }

    /// Eigenvalues of the `p²` matrix, ascending.
    pub fn momentum_squared_spectrum(&self, b: T) -> Vec<T> {
        let inv_b2 = (b * b).recip();
        self.unit_r2
            .eigenvalues()
            .iter()
            .map(|&lam| lam * inv_b2)
            .collect()
    }

    pub fn potential_matrix(&self, b: T, v: impl Fn(T) -> T) -> Result<SymMatrix<T>> {
        self.spec(b)?;
        let values = self
            .radial_mesh(b)
            .into_iter()
            .map(|r| {
                let x = v(r);
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(Error::NonFiniteAtRadius {
                        what: "potential",
                        r: r.as_f64(),
                    })
                }
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(self.unit_r2.compose(&values))
    }

    pub fn kinetic_matrix(&self, b: T, t: impl Fn(T) -> T) -> Result<SymMatrix<T>> {
        self.spec(b)?;
        let values = self
            .momentum_squared_spectrum(b)
            .into_iter()
            .map(|p2| {
                let x = t(p2);
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(Error::NonFiniteFunction {
                        eigenvalue: p2.as_f64(),
                    })
                }
            })
            .collect::<Result<Vec<T>>>()?;
        let in_r2_frame = self.unit_r2.compose(&values);
        let n = self.size;
        Ok(SymMatrix::from_fn(n, |i, j| {
            let x = in_r2_frame.get(i, j);
            if (i + j) % 2 == 1 {
                -x
            } else {
                x
            }
        }))
    }

    /// Exact matrix of `r^p`, defined for `p > −(2l + 3)`.
    ///
    /// With `x = r²/b²` the integrand is `x^(α + p/2) e^(−x)` times a polynomial
    /// of degree `2N − 2`, so an `N`-point Gauss–Laguerre rule with parameter
    /// `β = α + p/2` integrates every entry exactly.
    pub fn power_matrix(&self, b: T, p: T) -> Result<SymMatrix<T>> {
        self.spec(b)?;
        let unit = self.unit_power_matrix(p)?;
        Ok(unit.as_ref() * b.powf(p))
    }

    fn unit_power_matrix(&self, p: T) -> Result<Arc<SymMatrix<T>>> {
        if let Ok(cache) = self.powers.lock() {
            if let Some((_, m)) = cache.iter().find(|(q, _)| *q == p) {
                return Ok(Arc::clone(m));
            }
        }
        let m = Arc::new(exact_power_matrix(self.l, self.size, p)?);
        if let Ok(mut cache) = self.powers.lock() {
            cache.push((p, Arc::clone(&m)));
        }
        Ok(m)
    }
}

fn exact_power_matrix<T: Real>(l: usize, size: usize, p: T) -> Result<SymMatrix<T>> {
    let alpha = T::from_usize_lossy(l) + T::lit(0.5);
    let beta = alpha + p / T::lit(2.0);
    if !(p.is_finite() && beta > -T::one()) {
        return Err(Error::validation(
            "power exponent",
            format!("r^{p} is not normalizable against the l = {l} basis"),
        ));
    }
    let jacobi = SymMatrix::from_fn(size, |i, j| {
        if i == j {
            T::from_usize_lossy(2 * i) + beta + T::one()
        } else if j == i + 1 {
            let k = T::from_usize_lossy(j);
            -(k * (k + beta)).sqrt()
        } else {
            T::zero()
        }
    });
    let rule = eigh(&jacobi)?;
    let ratio = T::lit((libm::lgamma(beta.as_f64() + 1.0) - libm::lgamma(alpha.as_f64() + 1.0)).exp());

    // s[n][k] = v₀ₖ·q̂ₙ(xₖ), q̂ the α-orthonormal recurrence started at q̂₀ = 1;
    // the Gauss weights are Γ(β+1)·v₀ₖ².
    let mut s = vec![T::zero(); size * size];
    for k in 0..size {
        let x = rule.eigenvalues()[k];
        let mut prev = T::zero();
        let mut cur = rule.component(0, k);
        s[k] = cur;
        for n in 0..size - 1 {
            let nt = T::from_usize_lossy(n);
            let back = (nt * (nt + alpha)).sqrt();
            let fwd = ((nt + T::one()) * (nt + T::one() + alpha)).sqrt();
            let next = ((T::from_usize_lossy(2 * n) + alpha + T::one() - x) * cur - back * prev) / fwd;
            prev = cur;
            cur = next;
            s[(n + 1) * size + k] = cur;
        }
    }
    Ok(SymMatrix::from_fn(size, |i, j| {
        let dot: T = (0..size).map(|k| s[i * size + k] * s[j * size + k]).sum();
        ratio * dot
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigvalsh;

    fn basis(l: usize, n: usize, b: f64) -> BasisSpec<f64> {
        BasisSpec::new(l, n, b).unwrap()
    }

    #[test]
    fn r2_entries() {
        assert_eq!(r2_matrix(&basis(0, 5, 1.0)).get(0, 0), 1.5);
        assert_eq!(r2_matrix(&basis(2, 5, 1.0)).get(1, 1), 5.5);
        for l in 0..4 {
            assert_eq!(r2_matrix(&basis(l, 5, 1.3)).get(0, 2), 0.0);
        }
        let r2 = r2_matrix(&basis(0, 4, 1.0));
        assert!((r2.get(0, 1) + 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn p2_entries() {
        assert_eq!(p2_matrix(&basis(0, 5, 1.0)).get(0, 0), 1.5);
        assert_eq!(p2_matrix(&basis(0, 5, 2.0)).get(0, 0), 0.375);
        let p2 = p2_matrix(&basis(0, 4, 1.0));
        assert!((p2.get(0, 1) - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn harmonic_oscillator_is_diagonal_at_matched_length() {
        // μ = 1, λ = 1/2 ⇒ b⁴ = 1/(2μλ) = 1.
        let bs = basis(0, 6, 1.0);
        let h = &(&p2_matrix(&bs) * 0.5) + &(&r2_matrix(&bs) * 0.5);
        assert!(h.max_abs_off_diagonal() < 1e-14);
        assert_eq!(h.diagonal()[..3], [1.5, 3.5, 5.5]);
    }

    #[test]
    fn basis_validation() {
        assert!(BasisSpec::new(0, 1, 1.0).is_err());
        assert!(BasisSpec::new(0, 4, 0.0).is_err());
        assert!(BasisSpec::new(0, 4, -1.0).is_err());
        assert!(BasisSpec::new(0, 4, f64::INFINITY).is_err());
    }

    #[test]
    fn identity_and_constant_potentials() {
        let bs = basis(1, 12, 0.7);
        let r2 = r2_matrix(&bs);
        let via_calculus = potential_matrix(&bs, |r| r * r).unwrap();
        assert!((&via_calculus - &r2).max_abs() < 1e-10);
        let c = potential_matrix(&bs, |_| 2.5).unwrap();
        assert!((&c - &SymMatrix::from_diagonal(&[2.5; 12])).max_abs() < 1e-12);
    }

    #[test]
    fn kinetic_examples() {
        let bs = basis(0, 10, 1.2);
        let p2 = p2_matrix(&bs);
        let mu = 0.8;
        let t = kinetic_matrix(&bs, |x| x / (2.0 * mu)).unwrap();
        assert!((&t - &(&p2 * (1.0 / (2.0 * mu)))).max_abs() < 1e-12);
        let two_body = kinetic_matrix(&bs, |x| 2.0 + x).unwrap();
        let expected = &p2 + &(&SymMatrix::identity(10) * 2.0);
        assert!((&two_body - &expected).max_abs() < 1e-12);
        let salpeter = kinetic_matrix(&bs, |x| 2.0 * (x + 1.0).sqrt()).unwrap();
        assert!(eigvalsh(&salpeter).unwrap().iter().all(|&e| e >= 2.0));
    }

    #[test]
    fn non_finite_potential_names_radius() {
        let bs = basis(0, 4, 1.0);
        let err = potential_matrix(&bs, |r| if r > 2.0 { f64::NAN } else { r }).unwrap_err();
        assert!(matches!(err, Error::NonFiniteAtRadius { r, .. } if r > 2.0));
    }

    #[test]
    fn non_finite_kinetic_is_reported() {
        let bs = basis(0, 4, 1.0);
        let err = kinetic_matrix(&bs, |x| (1.0 - x).sqrt()).unwrap_err();
        assert!(matches!(err, Error::NonFiniteFunction { .. }));
    }

    #[test]
    fn exact_powers() {
        let rb = RadialBasis::<f64>::new(0, 10).unwrap();
        let r2 = r2_matrix(&basis(0, 10, 0.8));
        assert!((&rb.power_matrix(0.8, 2.0).unwrap() - &r2).max_abs() < 1e-12);
        let one = rb.power_matrix(0.8, 0.0).unwrap();
        assert!((&one - &SymMatrix::identity(10)).max_abs() < 1e-13);
        // ⟨0|1/r|0⟩ = Γ(1)/Γ(3/2)/b for l = 0.
        let inv = rb.power_matrix(2.0, -1.0).unwrap();
        assert!((inv.get(0, 0) - 1.0 / (0.5 * std::f64::consts::PI.sqrt()) / 2.0).abs() < 1e-13);
        assert!(rb.power_matrix(1.0, -3.0).is_err());
    }

    #[test]
    fn exact_coulomb_beats_mesh() {
        let rb = RadialBasis::<f64>::new(0, 30).unwrap();
        let t = &p2_matrix(&basis(0, 30, 1.0)) * 0.5;
        let mesh = &t - &rb.potential_matrix(1.0, |r| 1.0 / r).unwrap();
        let exact = &t - &rb.power_matrix(1.0, -1.0).unwrap();
        let e_mesh = eigvalsh(&mesh).unwrap()[0];
        let e_exact = eigvalsh(&exact).unwrap()[0];
        assert!(e_exact > -0.5 && e_exact < e_mesh);
    }
}
