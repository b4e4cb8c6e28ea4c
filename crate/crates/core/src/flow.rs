//! Interpolation between two Hamiltonians, `H(a) = (1−a)·H₁ + a·H₂`, and the
//! checks that certify spectral ordering along it.
//!
//! For every tracked level the flow records `E(a)`, the Hellmann–Feynman
//! expectation `ψ(a)ᵀ(H₂ − H₁)ψ(a)` (exactly `dE/da` for a non-degenerate
//! level) and a finite-difference estimate of `dE/da` from the sampled
//! energies. When `H₂ − H₁` is positive semidefinite the expectation is
//! non-negative, hence `E(a)` is non-decreasing and `E₁ ≤ E₂`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::basis::{BasisSpec, RadialBasis};
use crate::error::{Error, Result};
use crate::hamiltonian::{optimize_scale_in, Hamiltonian};
use crate::linalg::{eigh, eigvalsh, min_eigenvalue, SymMatrix};
use crate::scalar::Real;

/// Absolute tolerance on ordering verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Default number of interpolation samples.
pub const DEFAULT_GRID_POINTS: usize = 101;
/// Neighbor gap below which a tracked level is flagged degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// How the shared oscillator length is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OscillatorLength<T> {
    Fixed(T),
    /// Minimize the lowest tracked level of the first endpoint, per `l`.
    Optimized,
}

/// How `dE/da` is estimated from sampled energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    /// Three-point stencils on the grid itself; second order in the step.
    Grid,
    /// Extra off-grid samples at steps `h, h/2, …, h/2^(levels−1)` around each
    /// grid point, combined by Richardson extrapolation.
    Richardson { levels: usize },
}

/// Direction a difference stencil may reach from its base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

/// Richardson-extrapolated derivative of `f` at `a` from step `h` halved
/// `levels − 1` times.
///
/// Central differences carry only even error powers; the one-sided
/// three-point formulas carry every power from `h²` up.
pub fn richardson_derivative<T: Real>(
    f: impl Fn(T) -> Result<T>,
    a: T,
    h: T,
    stencil: Stencil,
    levels: usize,
) -> Result<T> {
    let levels = levels.max(1);
    let two = T::lit(2.0);
    let mut prev: Vec<T> = Vec::new();
    let mut step = h;
    for k in 0..levels {
        let d = match stencil {
            Stencil::Central => (f(a + step)? - f(a - step)?) / (two * step),
            Stencil::Forward => {
                (-T::lit(3.0) * f(a)? + T::lit(4.0) * f(a + step)? - f(a + two * step)?) / (two * step)
            }
            Stencil::Backward => {
                (T::lit(3.0) * f(a)? - T::lit(4.0) * f(a - step)? + f(a - two * step)?) / (two * step)
            }
        };
        let mut row = vec![d];
        for j in 1..=k {
            let power = match stencil {
                Stencil::Central => 2 * j,
                _ => j + 1,
            };
            let factor = T::lit(2f64.powi(power as i32)) - T::one();
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / factor;
            row.push(next);
        }
        prev = row;
        step /= two;
    }
    Ok(prev[prev.len() - 1])
}

/// Both endpoint matrices for one `l` block, in one shared basis.
#[derive(Debug, Clone)]
pub struct FlowBlock<T> {
    pub basis: BasisSpec<T>,
    pub first: SymMatrix<T>,
    pub second: SymMatrix<T>,
    /// `H₂ − H₁`
    pub difference: SymMatrix<T>,
}

/// Two endpoints, a shared basis, an interpolation grid and tracked `(n, l)` levels.
#[derive(Debug, Clone)]
pub struct FlowSpec<T> {
    first: Hamiltonian<T>,
    second: Hamiltonian<T>,
    a_grid: Vec<T>,
    levels: Vec<(usize, usize)>,
    blocks: BTreeMap<usize, FlowBlock<T>>,
    derivative: Derivative,
}

/// `points` uniform samples of `[0, 1]` with exact endpoints.
pub fn uniform_grid<T: Real>(points: usize) -> Vec<T> {
    let last = points.saturating_sub(1).max(1);
    (0..points)
        .map(|k| {
            if k == last {
                T::one()
            } else {
                T::from_usize_lossy(k) / T::from_usize_lossy(last)
            }
        })
        .collect()
}

impl<T: Real> FlowSpec<T> {
    pub fn new(
        first: Hamiltonian<T>,
        second: Hamiltonian<T>,
        size: usize,
        length: OscillatorLength<T>,
        a_grid: Vec<T>,
        levels: Vec<(usize, usize)>,
    ) -> Result<Self> {
        validate_grid(&a_grid)?;
        if levels.is_empty() {
            return Err(Error::validation("levels", "no levels to track"));
        }
        if let Some(&(n, l)) = levels.iter().find(|&&(n, _)| n >= size) {
            return Err(Error::validation(
                "levels",
                format!("level ({n}, {l}) outside a basis of size {size}"),
            ));
        }
        let mut lowest: BTreeMap<usize, usize> = BTreeMap::new();
        for &(n, l) in &levels {
            let e = lowest.entry(l).or_insert(n);
            *e = (*e).min(n);
        }
        let mut blocks = BTreeMap::new();
        for (&l, &target) in &lowest {
            let block = RadialBasis::new(l, size)?;
            let b = match length {
                OscillatorLength::Fixed(b) => b,
                OscillatorLength::Optimized => optimize_scale_in(&first, &block, target)?.b,
            };
            let basis = block.spec(b)?;
            let h1 = first.matrix(&block, b)?;
            let h2 = second.matrix(&block, b)?;
            let difference = &h2 - &h1;
            blocks.insert(
                l,
                FlowBlock {
                    basis,
                    first: h1,
                    second: h2,
                    difference,
                },
            );
        }
        Ok(FlowSpec {
            first,
            second,
            a_grid,
            levels,
            blocks,
            derivative: Derivative::Grid,
        })
    }

    pub fn first(&self) -> &Hamiltonian<T> {
        &self.first
    }

    pub fn second(&self) -> &Hamiltonian<T> {
        &self.second
    }

    pub fn a_grid(&self) -> &[T] {
        &self.a_grid
    }

    pub fn levels(&self) -> &[(usize, usize)] {
        &self.levels
    }

    pub fn block(&self, l: usize) -> Option<&FlowBlock<T>> {
        self.blocks.get(&l)
    }

    pub fn blocks(&self) -> impl Iterator<Item = &FlowBlock<T>> {
        self.blocks.values()
    }

    /// Same endpoints and levels on a different grid; matrices are reused.
    pub fn with_grid(&self, a_grid: Vec<T>) -> Result<Self> {
        validate_grid(&a_grid)?;
        Ok(FlowSpec {
            a_grid,
            ..self.clone()
        })
    }

    pub fn derivative(&self) -> Derivative {
        self.derivative
    }

    pub fn with_derivative(&self, derivative: Derivative) -> Result<Self> {
        if let Derivative::Richardson { levels: 0 } = derivative {
            return Err(Error::validation("derivative", "Richardson needs at least one level"));
        }
        Ok(FlowSpec {
            derivative,
            ..self.clone()
        })
    }

    fn block_or_err(&self, l: usize) -> Result<&FlowBlock<T>> {
        self.blocks
            .get(&l)
            .ok_or_else(|| Error::validation("orbital angular momentum", format!("l = {l} is not tracked")))
    }

    /// `(1−a)·H₁ + a·H₂` in the block's shared basis. The endpoints are returned
    /// unchanged so `a = 0` and `a = 1` reproduce the endpoint matrices exactly.
    pub fn interpolated_hamiltonian(&self, l: usize, a: T) -> Result<SymMatrix<T>> {
        if !(a >= T::zero() && a <= T::one()) {
            return Err(Error::validation("interpolation parameter", format!("a = {a} outside [0, 1]")));
        }
        let block = self.block_or_err(l)?;
        Ok(if a == T::zero() {
            block.first.clone()
        } else if a == T::one() {
            block.second.clone()
        } else {
            block.first.lin_comb(T::one() - a, &block.second, a)
        })
    }

    /// Smallest eigenvalue of `H₂ − H₁` over all tracked blocks.
    pub fn psd_gap(&self) -> Result<T> {
        let mut gap: Option<T> = None;
        for (_, g) in self.psd_gaps()? {
            gap = Some(gap.map_or(g, |x: T| x.min(g)));
        }
        Ok(gap.unwrap_or_else(T::zero))
    }

    /// Smallest eigenvalue of `H₂ − H₁` per `l`.
    pub fn psd_gaps(&self) -> Result<Vec<(usize, T)>> {
        self.blocks
            .iter()
            .map(|(&l, b)| Ok((l, min_eigenvalue(&b.difference)?)))
            .collect()
    }
}

fn validate_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::validation("interpolation grid", "need at least the points 0 and 1"));
    }
    if grid[0] != T::zero() || grid[grid.len() - 1] != T::one() {
        return Err(Error::validation("interpolation grid", "must start at 0 and end at 1"));
    }
    // Written negated so NaN samples are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let unordered = grid.windows(2).any(|w| !(w[1] > w[0]));
    if unordered {
        return Err(Error::validation("interpolation grid", "must be strictly ascending"));
    }
    Ok(())
}

/// Samples of one tracked level along the path.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTrack<T> {
    pub n: usize,
    pub l: usize,
    pub energy: Vec<T>,
    pub hf_expectation: Vec<T>,
    pub fd_derivative: Vec<T>,
    /// Sample lies within [`DEGENERACY_GAP`] of a neighboring eigenvalue.
    pub degenerate: Vec<bool>,
}

impl<T: Real> LevelTrack<T> {
    /// `|fd − hf|` per sample.
    pub fn residuals(&self) -> Vec<T> {
        self.fd_derivative
            .iter()
            .zip(&self.hf_expectation)
            .map(|(&fd, &hf)| (fd - hf).abs())
            .collect()
    }

    /// Largest residual over samples not flagged degenerate.
    pub fn max_residual(&self) -> T {
        self.residuals()
            .into_iter()
            .zip(&self.degenerate)
            .filter(|(_, &d)| !d)
            .fold(T::zero(), |acc, (r, _)| acc.max(r))
    }

    pub fn is_monotone(&self, tol: T) -> bool {
        self.energy.windows(2).all(|w| w[1] >= w[0] - tol)
    }

    pub fn min_hf_expectation(&self) -> T {
        self.hf_expectation
            .iter()
            .fold(T::infinity(), |acc, &x| acc.min(x))
    }

    pub fn endpoint_difference(&self) -> T {
        self.energy[self.energy.len() - 1] - self.energy[0]
    }

    pub fn has_degeneracy(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

/// Result of [`flow_levels`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult<T> {
    pub a_grid: Vec<T>,
    pub tracks: Vec<LevelTrack<T>>,
    pub psd_gap: T,
}

impl<T: Real> FlowResult<T> {
    pub fn max_residual(&self) -> T {
        self.tracks
            .iter()
            .fold(T::zero(), |acc, t| acc.max(t.max_residual()))
    }

    pub fn is_monotone(&self, tol: T) -> bool {
        self.tracks.iter().all(|t| t.is_monotone(tol))
    }

    pub fn endpoints_ordered(&self, tol: T) -> bool {
        self.tracks.iter().all(|t| t.endpoint_difference() >= -tol)
    }

    pub fn min_hf_expectation(&self) -> T {
        self.tracks
            .iter()
            .fold(T::infinity(), |acc, t| acc.min(t.min_hf_expectation()))
    }
}

struct Sample<T> {
    energy: T,
    hf: T,
    degenerate: bool,
}

/// Evaluates every tracked level at every grid point.
pub fn flow_levels<T: Real>(spec: &FlowSpec<T>) -> Result<FlowResult<T>> {
    let mut tracks = Vec::with_capacity(spec.levels.len());
    for (&l, block) in &spec.blocks {
        let tracked: Vec<usize> = spec
            .levels
            .iter()
            .filter(|&&(_, ll)| ll == l)
            .map(|&(n, _)| n)
            .collect();
        let path = Path {
            first: &block.first,
            second: &block.second,
            difference: &block.difference,
        };
        tracks.extend(path.tracks(&spec.a_grid, l, &tracked, spec.derivative)?);
    }
    // Report in the caller's level order.
    tracks.sort_by_key(|t| {
        spec.levels
            .iter()
            .position(|&(n, l)| n == t.n && l == t.l)
            .unwrap_or(usize::MAX)
    });
    tracks.dedup_by(|a, b| a.n == b.n && a.l == b.l);
    Ok(FlowResult {
        a_grid: spec.a_grid.clone(),
        tracks,
        psd_gap: spec.psd_gap()?,
    })
}

/// Flow between two bare matrices of equal size, tracking sorted eigenvalue
/// indices `tracked`. Tracks are reported with `l = 0`.
pub fn flow_matrices<T: Real>(
    first: &SymMatrix<T>,
    second: &SymMatrix<T>,
    a_grid: &[T],
    tracked: &[usize],
    derivative: Derivative,
) -> Result<FlowResult<T>> {
    validate_grid(a_grid)?;
    if first.dim() != second.dim() {
        return Err(Error::validation("flow endpoints", "matrix sizes differ"));
    }
    if let Some(&n) = tracked.iter().find(|&&n| n >= first.dim()) {
        return Err(Error::validation("levels", format!("index {n} outside size {}", first.dim())));
    }
    let difference = second - first;
    let path = Path {
        first,
        second,
        difference: &difference,
    };
    Ok(FlowResult {
        a_grid: a_grid.to_vec(),
        tracks: path.tracks(a_grid, 0, tracked, derivative)?,
        psd_gap: min_eigenvalue(&difference)?,
    })
}

struct Path<'a, T> {
    first: &'a SymMatrix<T>,
    second: &'a SymMatrix<T>,
    difference: &'a SymMatrix<T>,
}

impl<T: Real> Path<'_, T> {
    fn at(&self, a: T) -> SymMatrix<T> {
        if a <= T::zero() {
            self.first.clone()
        } else if a >= T::one() {
            self.second.clone()
        } else {
            self.first.lin_comb(T::one() - a, self.second, a)
        }
    }

    fn tracks(&self, grid: &[T], l: usize, tracked: &[usize], derivative: Derivative) -> Result<Vec<LevelTrack<T>>> {
        let gap_tol = T::lit(DEGENERACY_GAP);
        let per_a: Vec<Vec<Sample<T>>> = grid
            .par_iter()
            .map(|&a| {
                let dec = eigh(&self.at(a))?;
                let values = dec.eigenvalues();
                Ok(tracked
                    .iter()
                    .map(|&n| {
                        let psi = dec.eigenvector(n);
                        let below = n > 0 && values[n] - values[n - 1] < gap_tol;
                        let above = n + 1 < values.len() && values[n + 1] - values[n] < gap_tol;
                        Sample {
                            energy: values[n],
                            hf: self.difference.quadratic_form(&psi),
                            degenerate: below || above,
                        }
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        let refined = match derivative {
            Derivative::Grid => None,
            Derivative::Richardson { levels } => Some(self.refined_derivatives(grid, tracked, levels)?),
        };
        Ok(tracked
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let energy: Vec<T> = per_a.iter().map(|s| s[k].energy).collect();
                let fd_derivative = match &refined {
                    None => finite_difference(grid, &energy),
                    Some(per_point) => per_point.iter().map(|d| d[k]).collect(),
                };
                LevelTrack {
                    n,
                    l,
                    hf_expectation: per_a.iter().map(|s| s[k].hf).collect(),
                    degenerate: per_a.iter().map(|s| s[k].degenerate).collect(),
                    energy,
                    fd_derivative,
                }
            })
            .collect())
    }

    /// Richardson derivative of each tracked level at every grid point, as
    /// `[grid index][tracked index]`. Sub-steps stay inside the neighboring
    /// grid intervals, so `a` never leaves `[0, 1]`.
    fn refined_derivatives(&self, grid: &[T], tracked: &[usize], levels: usize) -> Result<Vec<Vec<T>>> {
        let last = grid.len() - 1;
        (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let (h, stencil) = if i == 0 {
                    ((grid[1] - grid[0]) / T::lit(2.0), Stencil::Forward)
                } else if i == last {
                    ((grid[last] - grid[last - 1]) / T::lit(2.0), Stencil::Backward)
                } else {
                    ((grid[i] - grid[i - 1]).min(grid[i + 1] - grid[i]), Stencil::Central)
                };
                tracked
                    .iter()
                    .map(|&n| {
                        let energy = |a: T| -> Result<T> { Ok(eigvalsh(&self.at(a))?[n]) };
                        richardson_derivative(energy, grid[i], h, stencil, levels)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Second-order derivative estimate on a possibly non-uniform grid: central
/// three-point stencils inside, one-sided three-point stencils at the ends.
pub fn finite_difference<T: Real>(grid: &[T], values: &[T]) -> Vec<T> {
    assert_eq!(grid.len(), values.len());
    let n = grid.len();
    if n < 2 {
        return vec![T::zero(); n];
    }
    if n == 2 {
        let d = (values[1] - values[0]) / (grid[1] - grid[0]);
        return vec![d, d];
    }
    let mut out = Vec::with_capacity(n);
    // Derivative at x0 of the quadratic through (x0,f0), (x1,f1), (x2,f2).
    let one_sided = |x0: T, x1: T, x2: T, f0: T, f1: T, f2: T| {
        let h1 = x1 - x0;
        let h2 = x2 - x0;
        -(h1 + h2) / (h1 * h2) * f0 + h2 / (h1 * (h2 - h1)) * f1 - h1 / (h2 * (h2 - h1)) * f2
    };
    out.push(one_sided(grid[0], grid[1], grid[2], values[0], values[1], values[2]));
    for i in 1..n - 1 {
        let h1 = grid[i] - grid[i - 1];
        let h2 = grid[i + 1] - grid[i];
        out.push(
            -h2 / (h1 * (h1 + h2)) * values[i - 1]
                + (h2 - h1) / (h1 * h2) * values[i]
                + h1 / (h2 * (h1 + h2)) * values[i + 1],
        );
    }
    out.push(one_sided(
        grid[n - 1],
        grid[n - 2],
        grid[n - 3],
        values[n - 1],
        values[n - 2],
        values[n - 3],
    ));
    out
}

/// Per-level ordering verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelVerdict<T> {
    pub n: usize,
    pub l: usize,
    pub first_energy: T,
    pub second_energy: T,
    /// `E₁ ≤ E₂ + tol`
    pub endpoints_ordered: bool,
    /// `E(a)` non-decreasing within `tol`
    pub monotone: bool,
    /// `hf_expectation ≥ −tol` everywhere
    pub hf_nonnegative: bool,
}

impl<T: Real> LevelVerdict<T> {
    pub fn all_hold(&self) -> bool {
        self.endpoints_ordered && self.monotone && self.hf_nonnegative
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport<T> {
    pub psd_gap: T,
    pub tolerance: T,
    pub levels: Vec<LevelVerdict<T>>,
}

impl<T: Real> OrderingReport<T> {
    /// Whether `H₂ − H₁` is positive semidefinite within tolerance.
    pub fn hypothesis_holds(&self) -> bool {
        self.psd_gap >= -self.tolerance
    }

    pub fn all_ordered(&self) -> bool {
        self.levels.iter().all(LevelVerdict::all_hold)
    }
}

/// Runs the flow and condenses it into verdicts.
pub fn ordering_report<T: Real>(spec: &FlowSpec<T>, tol: T) -> Result<OrderingReport<T>> {
    let flow = flow_levels(spec)?;
    Ok(OrderingReport {
        psd_gap: flow.psd_gap,
        tolerance: tol,
        levels: flow
            .tracks
            .iter()
            .map(|t| LevelVerdict {
                n: t.n,
                l: t.l,
                first_energy: t.energy[0],
                second_energy: t.energy[t.energy.len() - 1],
                endpoints_ordered: t.endpoint_difference() >= -tol,
                monotone: t.is_monotone(tol),
                hf_nonnegative: t.min_hf_expectation() >= -tol,
            })
            .collect(),
    })
}

/// Largest `λ₁ₖ − λ₂ₖ` over sorted eigenvalue pairs; non-positive means every
/// pair is ordered.
pub fn worst_spectral_violation<T: Real>(first: &SymMatrix<T>, second: &SymMatrix<T>) -> Result<T> {
    let e1 = eigvalsh(first)?;
    let e2 = eigvalsh(second)?;
    Ok(e1
        .iter()
        .zip(&e2)
        .fold(T::neg_infinity(), |acc, (&a, &b)| acc.max(a - b)))
}

/// Sampled comparison of two scalar functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseVerdict<T> {
    /// `min (f₂ − f₁)` over the grid.
    pub min_difference: T,
    /// Grid point attaining the minimum.
    pub at: T,
    /// `f₂ ≥ f₁ − tol` at every sample.
    pub ordered: bool,
}

/// Checks `f₂ ≥ f₁` on a grid of non-negative sample points.
pub fn pointwise_ordering<T: Real>(
    f1: impl Fn(T) -> T,
    f2: impl Fn(T) -> T,
    grid: &[T],
    tol: T,
) -> Result<PointwiseVerdict<T>> {
    if grid.is_empty() {
        return Err(Error::validation("sample grid", "empty"));
    }
    let mut worst = (T::infinity(), grid[0]);
    for &x in grid {
        if !(x >= T::zero() && x.is_finite()) {
            return Err(Error::validation("sample grid", format!("bad sample point {x}")));
        }
        let d = f2(x) - f1(x);
        if !d.is_finite() {
            return Err(Error::NonFiniteAtRadius {
                what: "compared function",
                r: x.as_f64(),
            });
        }
        if d < worst.0 {
            worst = (d, x);
        }
    }
    Ok(PointwiseVerdict {
        min_difference: worst.0,
        at: worst.1,
        ordered: worst.0 >= -tol,
    })
}

/// `points` log-spaced samples of `[lo, hi]`, `0 < lo < hi`.
pub fn log_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = T::from_usize_lossy(points.saturating_sub(1).max(1));
    (0..points)
        .map(|k| (a + (b - a) * T::from_usize_lossy(k) / last).exp())
        .collect()
}

/// `points` evenly spaced samples of `[lo, hi]`.
pub fn linear_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    let last = T::from_usize_lossy(points.saturating_sub(1).max(1));
    (0..points)
        .map(|k| lo + (hi - lo) * T::from_usize_lossy(k) / last)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{KineticSpec, PotentialSpec};

    fn coulomb_pair() -> (Hamiltonian<f64>, Hamiltonian<f64>) {
        let t = KineticSpec::NonRel { mu: 1.0 };
        (
            Hamiltonian::new(t.clone(), PotentialSpec::Coulomb { kappa: 1.0 }).unwrap(),
            Hamiltonian::new(t, PotentialSpec::TangentHarmonic { kappa: 1.0, r0: 1.0 }).unwrap(),
        )
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid::<f64>(&[0.0, 1.0]).is_ok());
        assert!(validate_grid::<f64>(&[0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(validate_grid::<f64>(&[0.1, 1.0]).is_err());
        assert!(validate_grid::<f64>(&[0.0]).is_err());
        let g = uniform_grid::<f64>(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[100], 1.0);
        assert!(validate_grid(&g).is_ok());
    }

    #[test]
    fn interpolation_endpoints_and_midpoint() {
        let (h1, h2) = coulomb_pair();
        let spec = FlowSpec::new(h1, h2, 12, OscillatorLength::Fixed(1.0), uniform_grid(5), vec![(0, 0)]).unwrap();
        let block = spec.block(0).unwrap();
        assert_eq!(spec.interpolated_hamiltonian(0, 0.0).unwrap(), block.first);
        assert_eq!(spec.interpolated_hamiltonian(0, 1.0).unwrap(), block.second);
        let mid = spec.interpolated_hamiltonian(0, 0.5).unwrap();
        let mean = &(&block.first + &block.second) * 0.5;
        assert!((&mid - &mean).max_abs() < 1e-15);
        assert!(spec.interpolated_hamiltonian(0, 1.5).is_err());
        assert!(spec.interpolated_hamiltonian(3, 0.5).is_err());
    }

    #[test]
    fn finite_difference_exact_on_quadratics() {
        let grid = [0.0, 0.1, 0.25, 0.6, 1.0];
        let f: Vec<f64> = grid.iter().map(|&x| 3.0 * x * x - x + 2.0).collect();
        for (d, &x) in finite_difference(&grid, &f).iter().zip(&grid) {
            assert!((d - (6.0 * x - 1.0)).abs() < 1e-12, "{d} at {x}");
        }
    }

    #[test]
    fn identical_endpoints_flow_is_flat() {
        let (h1, _) = coulomb_pair();
        let spec = FlowSpec::new(h1.clone(), h1, 10, OscillatorLength::Fixed(1.0), uniform_grid(11), vec![(0, 0), (1, 0)]).unwrap();
        let flow = flow_levels(&spec).unwrap();
        assert_eq!(flow.psd_gap, 0.0);
        for t in &flow.tracks {
            assert!(t.energy.iter().all(|&e| (e - t.energy[0]).abs() < 1e-13));
            assert!(t.hf_expectation.iter().all(|&h| h == 0.0));
            assert!(t.max_residual() < 1e-11);
        }
        let report = ordering_report(&spec, DEFAULT_TOLERANCE).unwrap();
        assert!(report.all_ordered());
    }

    #[test]
    fn pointwise_examples() {
        let grid = log_grid(1e-3, 50.0, 200);
        let same = pointwise_ordering(|r: f64| r.sin(), |r: f64| r.sin(), &grid, 0.0).unwrap();
        assert_eq!(same.min_difference, 0.0);
        let bad = pointwise_ordering(|_| 0.0, |r: f64| 1.0 / (r - r), &grid, 0.0);
        assert!(bad.is_err());
        assert!(pointwise_ordering(|x: f64| x, |x| x, &[-1.0], 0.0).is_err());
    }

    #[test]
    fn degenerate_levels_are_flagged() {
        let t = KineticSpec::custom("zero", |_| 0.0);
        let v = PotentialSpec::custom("zero", |_| 0.0);
        let h = Hamiltonian::new(t, v).unwrap();
        let spec = FlowSpec::new(h.clone(), h, 4, OscillatorLength::Fixed(1.0), uniform_grid(3), vec![(1, 0)]).unwrap();
        let flow = flow_levels(&spec).unwrap();
        assert!(flow.tracks[0].has_degeneracy());
    }

    #[test]
    fn richardson_orders() {
        let f = |x: f64| Ok(x.sin());
        let exact = 0.3f64.cos();
        let plain = richardson_derivative(f, 0.3, 0.1, Stencil::Central, 1).unwrap();
        let refined = richardson_derivative(f, 0.3, 0.1, Stencil::Central, 4).unwrap();
        assert!((plain - exact).abs() > 1e-4);
        assert!((refined - exact).abs() < 1e-12);
        for stencil in [Stencil::Forward, Stencil::Backward] {
            let d = richardson_derivative(f, 0.3, 0.1, stencil, 5).unwrap();
            assert!((d - exact).abs() < 1e-8, "{stencil:?}");
        }
        let cubic = |x: f64| Ok(x * x * x);
        let d = richardson_derivative(cubic, 1.0, 0.5, Stencil::Forward, 2).unwrap();
        assert!((d - 3.0).abs() < 1e-12);
    }
}
