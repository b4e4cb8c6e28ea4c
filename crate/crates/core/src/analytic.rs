//! Closed-form spectra used as ground truth.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `2n + l + 3/2`
pub fn ho_quantum<T: Real>(n: usize, l: usize) -> T {
    T::from_usize_lossy(2 * n + l) + T::lit(1.5)
}

/// `n + l + 1`
pub fn coulomb_quantum<T: Real>(n: usize, l: usize) -> T {
    T::from_usize_lossy(n + l + 1)
}

/// Levels of `p²/(2μ) + λr²`: `√(2λ/μ)(2n + l + 3/2)`.
pub fn ho_energy<T: Real>(mu: T, lambda: T, n: usize, l: usize) -> T {
    (T::lit(2.0) * lambda / mu).sqrt() * ho_quantum::<T>(n, l)
}

/// Levels of `p²/(2μ) − κ/r`: `−μκ²/(2(n + l + 1)²)`.
pub fn coulomb_energy<T: Real>(mu: T, kappa: T, n: usize, l: usize) -> T {
    let q = coulomb_quantum::<T>(n, l);
    -mu * kappa * kappa / (T::lit(2.0) * q * q)
}

/// Tangent harmonic minus Coulomb, in factored form:
/// `(κ/(2r))(r/r₀ − 1)²(r/r₀ + 2)`.
pub fn tangent_harmonic_difference<T: Real>(kappa: T, r0: T, r: T) -> T {
    let s = r / r0;
    kappa / (T::lit(2.0) * r) * (s - T::one()).powi(2) * (s + T::lit(2.0))
}

/// `x³ − 3Q_c²x + 2Q_ho Q_c²`
pub fn bracket_polynomial<T: Real>(x: T, n: usize, l: usize) -> T {
    let qc2 = coulomb_quantum::<T>(n, l).powi(2);
    let qho = ho_quantum::<T>(n, l);
    x.powi(3) - T::lit(3.0) * qc2 * x + T::lit(2.0) * qho * qc2
}

/// Minimum of [`bracket_polynomial`] over `x > 0`: at `x* = Q_c`, value
/// `2Q_c²(Q_ho − Q_c)`, which is positive for every `(n, l)`.
pub fn bracket_polynomial_min<T: Real>(n: usize, l: usize) -> (T, T) {
    let qc = coulomb_quantum::<T>(n, l);
    let qho = ho_quantum::<T>(n, l);
    (qc, T::lit(2.0) * qc * qc * (qho - qc))
}

/// Tangent-harmonic level minus Coulomb level at the same `(n, l)`.
pub fn level_difference<T: Real>(kappa: T, mu: T, r0: T, n: usize, l: usize) -> T {
    let x = (kappa * mu * r0).sqrt();
    let qc2 = coulomb_quantum::<T>(n, l).powi(2);
    kappa.sqrt() * bracket_polynomial(x, n, l) / (T::lit(2.0) * r0 * (mu * r0).sqrt() * qc2)
}

/// Variational upper bound on a Salpeter–Coulomb level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SalpeterBound<T> {
    pub energy: T,
    /// Set when `κ = 2(n + l + 1)`, where the bound collapses to zero.
    pub at_boundary: bool,
}

/// Upper bound `2m√(1 − κ²/(4Q_c²))` on levels of `2√(p² + m²) − κ/r`.
/// Requires `κ ≤ 2Q_c`.
pub fn salpeter_coulomb_bound<T: Real>(m: T, kappa: T, n: usize, l: usize) -> Result<SalpeterBound<T>> {
    let qc = coulomb_quantum::<T>(n, l);
    let radicand = T::one() - kappa * kappa / (T::lit(4.0) * qc * qc);
    if kappa == T::lit(2.0) * qc {
        return Ok(SalpeterBound {
            energy: T::zero(),
            at_boundary: true,
        });
    }
    if radicand < T::zero() {
        return Err(Error::Domain(format!(
            "kappa = {kappa} exceeds 2(n + l + 1) = {}",
            T::lit(2.0) * qc
        )));
    }
    Ok(SalpeterBound {
        energy: T::lit(2.0) * m * radicand.sqrt(),
        at_boundary: false,
    })
}

/// Levels of `2m + p²/m − κ/r`: `2m − mκ²/(4Q_c²)`.
pub fn nonrel_rest_coulomb<T: Real>(m: T, kappa: T, n: usize, l: usize) -> T {
    let qc = coulomb_quantum::<T>(n, l);
    T::lit(2.0) * m - m * kappa * kappa / (T::lit(4.0) * qc * qc)
}

/// `m²κ⁴/(16 Q_c⁴)`, which equals `E₂² − Ẽ₁²` for the two expressions above.
pub fn salpeter_squared_gap<T: Real>(m: T, kappa: T, n: usize, l: usize) -> T {
    let qc = coulomb_quantum::<T>(n, l);
    (m * kappa * kappa).powi(2) / (T::lit(16.0) * qc.powi(4))
}

/// Parameter set for the closed-form scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticInputs<T> {
    pub mu: T,
    pub m: T,
    pub kappa: T,
    pub lambda: T,
    pub r0: T,
    pub n: usize,
    pub l: usize,
}

impl<T: Real> AnalyticInputs<T> {
    pub fn new(mu: T, m: T, kappa: T, lambda: T, r0: T, n: usize, l: usize) -> Result<Self> {
        for (name, v) in [("mu", mu), ("m", m), ("kappa", kappa), ("lambda", lambda), ("r0", r0)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(AnalyticInputs { mu, m, kappa, lambda, r0, n, l })
    }

    /// `√(κμr₀)`
    pub fn x(&self) -> T {
        (self.kappa * self.mu * self.r0).sqrt()
    }

    pub fn ho_energy(&self) -> T {
        ho_energy(self.mu, self.lambda, self.n, self.l)
    }

    pub fn coulomb_energy(&self) -> T {
        coulomb_energy(self.mu, self.kappa, self.n, self.l)
    }

    pub fn level_difference(&self) -> T {
        level_difference(self.kappa, self.mu, self.r0, self.n, self.l)
    }

    pub fn salpeter_coulomb_bound(&self) -> Result<SalpeterBound<T>> {
        salpeter_coulomb_bound(self.m, self.kappa, self.n, self.l)
    }

    pub fn nonrel_rest_coulomb(&self) -> T {
        nonrel_rest_coulomb(self.m, self.kappa, self.n, self.l)
    }
}
