//! Kinetic and potential operator descriptions, Hamiltonian assembly and
//! bound-state extraction in the radial oscillator basis.

use std::fmt;
use std::sync::Arc;

use crate::basis::{BasisSpec, RadialBasis};
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, SpectralDecomposition, SymMatrix};
use crate::scalar::Real;

/// Shared scalar function used by the `Custom` variants.
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Kinetic operator as a function of `p²`.
#[derive(Clone)]
pub enum KineticSpec<T> {
    /// `p²/(2μ)`
    NonRel { mu: T },
    /// `2m + p²/m`, the nonrelativistic limit of the two-body Salpeter operator.
    NonRelTwoBody { m: T },
    /// `2√(p² + m²)`; `m = 0` is the ultrarelativistic case.
    Salpeter { m: T },
    Custom { label: String, f: ScalarFn<T> },
}

impl<T: Real> KineticSpec<T> {
    pub fn custom(label: impl Into<String>, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        KineticSpec::Custom {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KineticSpec::NonRel { mu } => positive("reduced mass", mu),
            KineticSpec::NonRelTwoBody { m } => positive("particle mass", m),
            KineticSpec::Salpeter { m } => {
                if m >= T::zero() && m.is_finite() {
                    Ok(())
                } else {
                    Err(Error::validation("particle mass", format!("need m >= 0, got {m}")))
                }
            }
            KineticSpec::Custom { .. } => Ok(()),
        }
    }

    pub fn is_ultrarelativistic(&self) -> bool {
        matches!(*self, KineticSpec::Salpeter { m } if m == T::zero())
    }

    /// Evaluates the kinetic energy at momentum-squared `p2`.
    pub fn eval(&self, p2: T) -> T {
        match self {
            KineticSpec::NonRel { mu } => p2 / (T::lit(2.0) * *mu),
            KineticSpec::NonRelTwoBody { m } => T::lit(2.0) * *m + p2 / *m,
            KineticSpec::Salpeter { m } => T::lit(2.0) * (p2 + *m * *m).sqrt(),
            KineticSpec::Custom { f, .. } => f(p2),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for KineticSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KineticSpec::NonRel { mu } => write!(f, "NonRel {{ mu: {mu:?} }}"),
            KineticSpec::NonRelTwoBody { m } => write!(f, "NonRelTwoBody {{ m: {m:?} }}"),
            KineticSpec::Salpeter { m } => write!(f, "Salpeter {{ m: {m:?} }}"),
            KineticSpec::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

/// Central potential `V(r)`.
#[derive(Clone)]
pub enum PotentialSpec<T> {
    /// `−κ/r`
    Coulomb { kappa: T },
    /// `λ r²`
    Harmonic { lambda: T },
    /// `κ r²/(2 r₀³) − 3κ/(2 r₀)`, tangent to `−κ/r` at `r = r₀`.
    TangentHarmonic { kappa: T, r0: T },
    /// `Σ g·r^η` over `(g, η)` pairs.
    PowerSum { terms: Vec<(T, T)> },
    Custom { label: String, v: ScalarFn<T> },
    /// `g·v(r)`
    Scaled { g: T, inner: Box<PotentialSpec<T>> },
}

impl<T: Real> PotentialSpec<T> {
    pub fn custom(label: impl Into<String>, v: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        PotentialSpec::Custom {
            label: label.into(),
            v: Arc::new(v),
        }
    }

    pub fn scaled(g: T, inner: PotentialSpec<T>) -> Self {
        PotentialSpec::Scaled {
            g,
            inner: Box::new(inner),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Coulomb { kappa } => positive("coulomb coupling", *kappa),
            PotentialSpec::Harmonic { lambda } => positive("harmonic coupling", *lambda),
            PotentialSpec::TangentHarmonic { kappa, r0 } => {
                positive("coulomb coupling", *kappa)?;
                positive("tangency radius", *r0)
            }
            PotentialSpec::PowerSum { terms } => {
                if terms.iter().all(|(g, eta)| g.is_finite() && eta.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::validation("power sum", "non-finite coupling or exponent"))
                }
            }
            PotentialSpec::Custom { .. } => Ok(()),
            PotentialSpec::Scaled { g, inner } => {
                if !g.is_finite() {
                    return Err(Error::validation("coupling", "non-finite scale factor"));
                }
                inner.validate()
            }
        }
    }

    /// `(g, p)` pairs with `V(r) = Σ g·r^p`, or `None` for a custom potential.
    pub fn power_terms(&self) -> Option<Vec<(T, T)>> {
        let two = T::lit(2.0);
        match self {
            PotentialSpec::Coulomb { kappa } => Some(vec![(-*kappa, -T::one())]),
            PotentialSpec::Harmonic { lambda } => Some(vec![(*lambda, two)]),
            PotentialSpec::TangentHarmonic { kappa, r0 } => Some(vec![
                (*kappa / (two * r0.powi(3)), two),
                (-T::lit(3.0) * *kappa / (two * *r0), T::zero()),
            ]),
            PotentialSpec::PowerSum { terms } => Some(terms.clone()),
            PotentialSpec::Custom { .. } => None,
            PotentialSpec::Scaled { g, inner } => inner
                .power_terms()
                .map(|t| t.into_iter().map(|(c, p)| (*g * c, p)).collect()),
        }
    }

    pub fn eval(&self, r: T) -> T {
        match self {
            PotentialSpec::Coulomb { kappa } => -*kappa / r,
            PotentialSpec::Harmonic { lambda } => *lambda * r * r,
            PotentialSpec::TangentHarmonic { kappa, r0 } => {
                let two = T::lit(2.0);
                *kappa / (two * r0.powi(3)) * r * r - T::lit(3.0) * *kappa / (two * *r0)
            }
            PotentialSpec::PowerSum { terms } => {
                terms.iter().map(|&(g, eta)| g * r.powf(eta)).sum()
            }
            PotentialSpec::Custom { v, .. } => v(r),
            PotentialSpec::Scaled { g, inner } => *g * inner.eval(r),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for PotentialSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Coulomb { kappa } => write!(f, "Coulomb {{ kappa: {kappa:?} }}"),
            PotentialSpec::Harmonic { lambda } => write!(f, "Harmonic {{ lambda: {lambda:?} }}"),
            PotentialSpec::TangentHarmonic { kappa, r0 } => {
                write!(f, "TangentHarmonic {{ kappa: {kappa:?}, r0: {r0:?} }}")
            }
            PotentialSpec::PowerSum { terms } => write!(f, "PowerSum {terms:?}"),
            PotentialSpec::Custom { label, .. } => write!(f, "Custom({label})"),
            PotentialSpec::Scaled { g, inner } => write!(f, "Scaled {{ g: {g:?}, inner: {inner:?} }}"),
        }
    }
}

fn positive<T: Real>(what: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(what, format!("must be finite and > 0, got {x}")))
    }
}

/// `T + V`.
#[derive(Debug, Clone)]
pub struct Hamiltonian<T> {
    pub kinetic: KineticSpec<T>,
    pub potential: PotentialSpec<T>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(kinetic: KineticSpec<T>, potential: PotentialSpec<T>) -> Result<Self> {
        kinetic.validate()?;
        potential.validate()?;
        Ok(Hamiltonian { kinetic, potential })
    }

    /// Matrix in a cached basis block at oscillator length `b`.
    ///
    /// Power-law potentials use exact matrix elements; custom ones go through
    /// function calculus on `r²`.
    pub fn matrix(&self, basis: &RadialBasis<T>, b: T) -> Result<SymMatrix<T>> {
        let t = basis.kinetic_matrix(b, |p2| self.kinetic.eval(p2))?;
        Ok(&t + &self.potential_matrix(basis, b)?)
    }

    pub fn potential_matrix(&self, basis: &RadialBasis<T>, b: T) -> Result<SymMatrix<T>> {
        match self.potential.power_terms() {
            Some(terms) => {
                let mut v = SymMatrix::zeros(basis.size());
                for (g, p) in terms {
                    if g != T::zero() {
                        v = v.lin_comb(T::one(), &basis.power_matrix(b, p)?, g);
                    }
                }
                Ok(v)
            }
            None => basis.potential_matrix(b, |r| self.potential.eval(r)),
        }
    }
}

/// One bound state: radial quantum number `n`, orbital `l`, energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level<T> {
    pub n: usize,
    pub l: usize,
    pub energy: T,
}

/// Matrix of `T + V` in `basis`.
pub fn assemble<T: Real>(
    kinetic: &KineticSpec<T>,
    potential: &PotentialSpec<T>,
    basis: &BasisSpec<T>,
) -> Result<SymMatrix<T>> {
    kinetic.validate()?;
    potential.validate()?;
    let block = RadialBasis::new(basis.l(), basis.size())?;
    let h = Hamiltonian {
        kinetic: kinetic.clone(),
        potential: potential.clone(),
    };
    h.matrix(&block, basis.b())
}

/// Full eigensystem of the assembled matrix.
pub fn solve_spectrum<T: Real>(
    kinetic: &KineticSpec<T>,
    potential: &PotentialSpec<T>,
    basis: &BasisSpec<T>,
) -> Result<SpectralDecomposition<T>> {
    eigh(&assemble(kinetic, potential, basis)?)
}

/// Lowest `count` levels of `T + V` at the basis' `l`; `n` is the sorted index.
pub fn solve_levels<T: Real>(
    kinetic: &KineticSpec<T>,
    potential: &PotentialSpec<T>,
    basis: &BasisSpec<T>,
    count: usize,
) -> Result<Vec<Level<T>>> {
    if count > basis.size() {
        return Err(Error::validation(
            "level count",
            format!("requested {count} levels from a basis of size {}", basis.size()),
        ));
    }
    let values = eigvalsh(&assemble(kinetic, potential, basis)?)?;
    Ok(levels_from_values(&values, basis.l(), count))
}

pub(crate) fn levels_from_values<T: Real>(values: &[T], l: usize, count: usize) -> Vec<Level<T>> {
    values
        .iter()
        .take(count)
        .enumerate()
        .map(|(n, &energy)| Level { n, l, energy })
        .collect()
}

/// Search interval for the oscillator length, natural units.
pub const SCALE_BRACKET: (f64, f64) = (1e-3, 1e3);
/// Golden-section iterations on `ln b`.
pub const SCALE_ITERATIONS: usize = 60;

/// Outcome of the oscillator-length search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSearch<T> {
    /// Best probed oscillator length.
    pub b: T,
    /// Target eigenvalue at `b`; no probed `b` gave a lower value.
    pub energy: T,
    /// False when the minimum sits on an edge of the search interval.
    pub bracketed: bool,
    pub evaluations: usize,
}

/// Minimizes eigenvalue `target` over `b ∈ SCALE_BRACKET` by golden-section
/// search on `ln b`. Only `l` and `N` of `template` are used.
pub fn optimize_basis_scale<T: Real>(
    kinetic: &KineticSpec<T>,
    potential: &PotentialSpec<T>,
    template: &BasisSpec<T>,
    target: usize,
) -> Result<ScaleSearch<T>> {
    let h = Hamiltonian::new(kinetic.clone(), potential.clone())?;
    let block = RadialBasis::new(template.l(), template.size())?;
    optimize_scale_in(&h, &block, target)
}

/// As [`optimize_basis_scale`] but reusing a cached basis block.
pub fn optimize_scale_in<T: Real>(
    h: &Hamiltonian<T>,
    block: &RadialBasis<T>,
    target: usize,
) -> Result<ScaleSearch<T>> {
    if target >= block.size() {
        return Err(Error::validation(
            "target level",
            format!("level {target} outside a basis of size {}", block.size()),
        ));
    }
    let mut evaluations = 0;
    let mut energy_at = |log_b: T| -> Result<T> {
        evaluations += 1;
        let values = eigvalsh(&h.matrix(block, log_b.exp())?)?;
        Ok(values[target])
    };
    let lo = T::lit(SCALE_BRACKET.0.ln());
    let hi = T::lit(SCALE_BRACKET.1.ln());
    let mut best = (lo, energy_at(lo)?);
    let consider = |x: T, e: T, best: &mut (T, T)| {
        if e < best.1 {
            *best = (x, e);
        }
    };
    let e_hi = energy_at(hi)?;
    consider(hi, e_hi, &mut best);

    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = energy_at(c)?;
    let mut fd = energy_at(d)?;
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    for _ in 0..SCALE_ITERATIONS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = energy_at(c)?;
            consider(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = energy_at(d)?;
            consider(d, fd, &mut best);
        }
    }
    // Within one final bracket width of an edge counts as unbracketed.
    let width = (b - a).abs().max(T::lit(1e-9));
    let bracketed = (best.0 - lo) > width && (hi - best.0) > width;
    Ok(ScaleSearch {
        b: best.0.exp(),
        energy: best.1,
        bracketed,
        evaluations,
    })
}
