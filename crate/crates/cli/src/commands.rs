use serde::{Deserialize, Serialize};

use radcomp::flow::{linear_grid, log_grid, uniform_grid};
use radcomp::hamiltonian::optimize_scale_in;
use radcomp::{
    eigvalsh, flow_levels, ordering_report, pointwise_ordering, FlowSpec, Hamiltonian, OscillatorLength,
    RadialBasis,
};

use crate::config::{Length, Problem, RunConfig};
use crate::error::CliError;
use crate::output::{Document, Meta, Record};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRow {
    pub n: usize,
    pub l: usize,
    pub energy: f64,
    pub basis_size: usize,
    pub b: f64,
}

impl Record for SolveRow {
    const COLUMNS: &'static [&'static str] = &["n", "l", "energy", "basis_size", "b"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub lowest: f64,
}

fn hamiltonian(p: &Problem) -> Result<Hamiltonian<f64>, CliError> {
    Ok(Hamiltonian::new(p.kinetic.clone(), p.potential.clone())?)
}

fn length(cfg: &RunConfig) -> OscillatorLength<f64> {
    match cfg.length {
        Length::Auto => OscillatorLength::Optimized,
        Length::Fixed(b) => OscillatorLength::Fixed(b),
    }
}

fn tracked_levels(p: &Problem) -> Vec<(usize, usize)> {
    p.ls.iter()
        .flat_map(|&l| (0..p.levels).map(move |n| (n, l)))
        .collect()
}

/// Levels of the first problem. With `b = auto` every level gets its own
/// optimized oscillator length.
pub fn solve(cfg: &RunConfig) -> Result<Document<SolveRow, SolveSummary>, CliError> {
    let p = cfg.first();
    let h = hamiltonian(p)?;
    let mut rows = Vec::new();
    for &l in &p.ls {
        let block = RadialBasis::new(l, cfg.basis_size)?;
        match cfg.length {
            Length::Fixed(b) => {
                let values = eigvalsh(&h.matrix(&block, b)?)?;
                rows.extend(values.iter().take(p.levels).enumerate().map(|(n, &energy)| SolveRow {
                    n,
                    l,
                    energy,
                    basis_size: cfg.basis_size,
                    b,
                }));
            }
            Length::Auto => {
                for n in 0..p.levels {
                    let search = optimize_scale_in(&h, &block, n)?;
                    rows.push(SolveRow {
                        n,
                        l,
                        energy: search.energy,
                        basis_size: cfg.basis_size,
                        b: search.b,
                    });
                }
            }
        }
    }
    let lowest = rows.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
    Ok(Document::new(Meta::new("solve", cfg.entries.clone()), rows, SolveSummary { lowest }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub l: usize,
    pub e1: f64,
    pub e2: f64,
    pub delta: f64,
    pub ordered: bool,
}

impl Record for CompareRow {
    const COLUMNS: &'static [&'static str] = &["n", "l", "e1", "e2", "delta", "ordered"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pointwise {
    pub min_difference: f64,
    pub at: f64,
    pub ordered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    /// Smallest eigenvalue of `H₂ − H₁` in the shared basis.
    pub psd_gap: f64,
    pub hypothesis_holds: bool,
    pub all_ordered: bool,
    /// `V₂(r) − V₁(r)` on a log grid in r.
    pub potential: Pointwise,
    /// `T₂(p²) − T₁(p²)` on a linear grid in p.
    pub kinetic: Pointwise,
}

fn pointwise(v: radcomp::PointwiseVerdict<f64>) -> Pointwise {
    Pointwise {
        min_difference: v.min_difference,
        at: v.at,
        ordered: v.ordered,
    }
}

fn flow_spec(cfg: &RunConfig) -> Result<FlowSpec<f64>, CliError> {
    let (p1, p2) = cfg.pair()?;
    let spec = FlowSpec::new(
        hamiltonian(p1)?,
        hamiltonian(p2)?,
        cfg.basis_size,
        length(cfg),
        uniform_grid(cfg.grid),
        tracked_levels(p1),
    )?;
    Ok(spec.with_derivative(cfg.derivative)?)
}

/// Both problems in one shared basis per `l`, with `b` fitted to problem 1.
pub fn compare(cfg: &RunConfig) -> Result<Document<CompareRow, CompareSummary>, CliError> {
    let (p1, p2) = cfg.pair()?;
    let spec = flow_spec(cfg)?;
    let report = ordering_report(&spec, cfg.tolerance)?;
    let rows = report
        .levels
        .iter()
        .map(|v| CompareRow {
            n: v.n,
            l: v.l,
            e1: v.first_energy,
            e2: v.second_energy,
            delta: v.second_energy - v.first_energy,
            ordered: v.endpoints_ordered,
        })
        .collect();
    let (v1, v2) = (&p1.potential, &p2.potential);
    let potential = pointwise_ordering(|r| v1.eval(r), |r| v2.eval(r), &log_grid(1e-3, 50.0, 400), cfg.tolerance)?;
    let (t1, t2) = (&p1.kinetic, &p2.kinetic);
    let kinetic = pointwise_ordering(
        |p: f64| t1.eval(p * p),
        |p: f64| t2.eval(p * p),
        &linear_grid(0.0, 50.0, 501),
        cfg.tolerance,
    )?;
    let summary = CompareSummary {
        psd_gap: report.psd_gap,
        hypothesis_holds: report.hypothesis_holds(),
        all_ordered: report.all_ordered(),
        potential: pointwise(potential),
        kinetic: pointwise(kinetic),
    };
    Ok(Document::new(Meta::new("compare", cfg.entries.clone()), rows, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRow {
    pub a: f64,
    pub n: usize,
    pub l: usize,
    pub energy: f64,
    pub hf: f64,
    pub fd: f64,
    pub residual: f64,
    pub degenerate: bool,
}

impl Record for FlowRow {
    const COLUMNS: &'static [&'static str] = &["a", "n", "l", "energy", "hf", "fd", "residual", "degenerate"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSummary {
    pub psd_gap: f64,
    pub max_residual: f64,
    pub min_hf: f64,
    pub monotone: bool,
}

/// `H(a) = (1−a)·H₁ + a·H₂` sampled on the configured grid.
pub fn flow(cfg: &RunConfig) -> Result<Document<FlowRow, FlowSummary>, CliError> {
    let spec = flow_spec(cfg)?;
    let result = flow_levels(&spec)?;
    let mut rows = Vec::new();
    for t in &result.tracks {
        let residuals = t.residuals();
        for (k, &a) in result.a_grid.iter().enumerate() {
            rows.push(FlowRow {
                a,
                n: t.n,
                l: t.l,
                energy: t.energy[k],
                hf: t.hf_expectation[k],
                fd: t.fd_derivative[k],
                residual: residuals[k],
                degenerate: t.degenerate[k],
            });
        }
    }
    let summary = FlowSummary {
        psd_gap: result.psd_gap,
        max_residual: result.max_residual(),
        min_hf: result.min_hf_expectation(),
        monotone: result.is_monotone(cfg.tolerance),
    };
    Ok(Document::new(Meta::new("flow", cfg.entries.clone()), rows, summary))
}
