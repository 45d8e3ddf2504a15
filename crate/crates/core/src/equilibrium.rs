//! The logarithmic equilibrium problem on a finite union of intervals.
//!
//! With `Y` the monic polynomial vanishing at all interval endpoints, the
//! equilibrium density on the union is `|Z(s)|/(π√|Y(s)|)` where `Z` is the
//! monic polynomial with one root in each gap, fixed by the vanishing of the
//! gap integrals `∫ Z/√|Y|`.  The solver discretizes each gap integral with a
//! Chebyshev–Gauss rule (which absorbs the inverse square-root endpoint
//! factors) and relaxes one root at a time: solving the `i`-th discretized
//! equation for its own root, with the others frozen, is a weighted average
//! of the gap nodes, and the system's Jacobian is strongly diagonally
//! dominant, so the sweep converges quickly.
//!
//! All polynomial products are accumulated as sign plus log magnitude; direct
//! products over thousands of factors overflow or underflow long before the
//! ratios of interest leave the representable range.

use serde::Serialize;

use crate::ifs::{DiscreteMeasure, IntervalUnion};
use crate::quadrature::{chebyshev_rule, map_to_interval};
use crate::{Error, Result};

/// Relative margin by which updated roots are kept away from gap endpoints.
const GAP_MARGIN: f64 = 1e-12;

/// Gap quadrature order selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapRule {
    /// The same order for every gap.
    Fixed(usize),
    /// Per-gap order from the distance of the nearest external endpoint:
    /// a branch point at scaled distance `ε` past a gap endpoint limits the
    /// rule's convergence rate to `exp(-2G·asinh√(ε(2+ε)/2)...)`, so the
    /// order is chosen to push that factor below 1e-15, clamped to
    /// `[floor, ceil]`.
    Adaptive { floor: usize, ceil: usize },
}

/// Tolerances and budgets of the gap-root sweep.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub gap_rule: GapRule,
    /// Sweep displacement tolerance; `None` means `1e-13 ×` hull width.
    pub step_tol: Option<f64>,
    /// Residual tolerance on the discretized gap integrals.
    pub resid_tol: f64,
    pub max_iter: usize,
    /// Warm start, one root per gap, each strictly inside its gap.
    pub initial_roots: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            gap_rule: GapRule::Adaptive {
                floor: 24,
                ceil: 4096,
            },
            step_tol: None,
            resid_tol: 1e-10,
            max_iter: 500,
            initial_roots: None,
        }
    }
}

/// Solved gap roots of an interval union, with solver diagnostics.
#[derive(Debug, Clone)]
pub struct GapRootSystem {
    intervals: IntervalUnion,
    roots: Vec<f64>,
    gap_orders: Vec<usize>,
    residuals: Vec<f64>,
    iterations: usize,
    converged: bool,
    step_tol: f64,
    resid_tol: f64,
}

impl GapRootSystem {
    pub fn intervals(&self) -> &IntervalUnion {
        &self.intervals
    }

    /// One root per gap, ascending.
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn gap_orders(&self) -> &[usize] {
        &self.gap_orders
    }

    /// Discretized gap integrals at the returned roots.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Shadow<'a> {
            intervals: &'a [(f64, f64)],
            roots: &'a [f64],
            gap_orders: &'a [usize],
            residuals: &'a [f64],
            iterations: usize,
            converged: bool,
            step_tol: f64,
            resid_tol: f64,
        }
        crate::serial::to_json_g17(&Shadow {
            intervals: self.intervals.intervals(),
            roots: &self.roots,
            gap_orders: &self.gap_orders,
            residuals: &self.residuals,
            iterations: self.iterations,
            converged: self.converged,
            step_tol: self.step_tol,
            resid_tol: self.resid_tol,
        })
    }
}

/// Quadrature data of one gap: mapped nodes and, per node, the fixed half-log
/// of the endpoint polynomial with the gap's own endpoints removed.
struct GapNodes {
    nodes: Vec<f64>,
    base_log: Vec<f64>,
}

fn gap_order(intervals: &IntervalUnion, gap_index: usize, rule: GapRule) -> usize {
    match rule {
        GapRule::Fixed(g) => g.max(1),
        GapRule::Adaptive { floor, ceil } => {
            let (lo, hi) = nth_gap(intervals, gap_index);
            let half = 0.5 * (hi - lo);
            let mut eps = f64::INFINITY;
            for &(a, b) in intervals.intervals() {
                for e in [a, b] {
                    if e > hi {
                        eps = eps.min((e - hi) / half);
                    } else if e < lo {
                        eps = eps.min((lo - e) / half);
                    }
                }
            }
            if !eps.is_finite() {
                return floor;
            }
            // log of the Bernstein parameter of a real singularity at 1+eps
            let u = (eps + (eps * (2.0 + eps)).sqrt()).ln_1p();
            let needed = (17.0 / u).ceil() as usize;
            needed.clamp(floor, ceil)
        }
    }
}

fn nth_gap(intervals: &IntervalUnion, i: usize) -> (f64, f64) {
    let ivs = intervals.intervals();
    (ivs[i].1, ivs[i + 1].0)
}

fn gap_nodes(intervals: &IntervalUnion, gap_index: usize, order: usize) -> Result<GapNodes> {
    let (lo, hi) = nth_gap(intervals, gap_index);
    let rule = chebyshev_rule(order)?;
    let nodes: Vec<f64> = rule
        .nodes()
        .iter()
        .map(|&t| map_to_interval(t, (lo, hi)))
        .collect();
    let mut base_log = Vec::with_capacity(nodes.len());
    for &x in &nodes {
        let mut acc = 0.0;
        for &(a, b) in intervals.intervals() {
            for e in [a, b] {
                if e != lo && e != hi {
                    acc += (x - e).abs().ln();
                }
            }
        }
        base_log.push(-0.5 * acc);
    }
    Ok(GapNodes { nodes, base_log })
}

/// Signed log magnitude of `Π_{j≠skip} (x - roots[j])`; `skip = usize::MAX`
/// keeps every factor.
fn signed_log_product(x: f64, roots: &[f64], skip: usize) -> (f64, f64) {
    let mut log_mag = 0.0;
    let mut sign = 1.0;
    for (j, &root) in roots.iter().enumerate() {
        if j == skip {
            continue;
        }
        let factor = x - root;
        if factor < 0.0 {
            sign = -sign;
        }
        log_mag += factor.abs().ln();
    }
    (sign, log_mag)
}

/// Weighted-average relaxation of one root: the exact zero of the
/// `i`-th discretized gap equation in its own variable.
fn relaxed_root(gap: &GapNodes, roots: &[f64], i: usize, bounds: (f64, f64)) -> f64 {
    let mut logs = Vec::with_capacity(gap.nodes.len());
    let mut max_log = f64::NEG_INFINITY;
    for (l, &x) in gap.nodes.iter().enumerate() {
        let (sign, log_mag) = signed_log_product(x, roots, i);
        let total = log_mag + gap.base_log[l];
        logs.push((sign, total));
        max_log = max_log.max(total);
    }
    let (mut s0, mut s1) = (0.0, 0.0);
    for ((sign, log_mag), &x) in logs.iter().zip(&gap.nodes) {
        let q = sign * (log_mag - max_log).exp();
        s0 += q;
        s1 += q * x;
    }
    let (lo, hi) = bounds;
    let margin = GAP_MARGIN * (hi - lo);
    let update = s1 / s0;
    update.clamp(lo + margin, hi - margin)
}

/// Gaussian-sum estimate of the `i`-th gap integral at the current roots.
///
/// The rule's uniform weight is `1/G` while the arcsine kernel on the gap
/// carries total mass π, hence the π prefactor.
fn residual_at(gap: &GapNodes, roots: &[f64], i: usize) -> f64 {
    let mut max_log = f64::NEG_INFINITY;
    let mut parts = Vec::with_capacity(gap.nodes.len());
    for (l, &x) in gap.nodes.iter().enumerate() {
        let (sign, log_mag) = signed_log_product(x, roots, i);
        let total = log_mag + gap.base_log[l];
        parts.push((sign * (x - roots[i]), total));
        max_log = max_log.max(total);
    }
    let sum: f64 = parts
        .iter()
        .map(|&(front, log_mag)| front * (log_mag - max_log).exp())
        .sum();
    sum * max_log.exp() * std::f64::consts::PI / gap.nodes.len() as f64
}

/// Solves the coupled gap equations by cyclic relaxation.
///
/// Convergence requires both the sweep displacement and every residual to
/// fall below their tolerances; a union with a single interval has no gaps
/// and converges immediately.
pub fn solve_gap_roots(intervals: &IntervalUnion, options: &SolverOptions) -> Result<GapRootSystem> {
    let n_gaps = intervals.len() - 1;
    let step_tol = options
        .step_tol
        .unwrap_or(1e-13 * intervals.hull_width());
    if !(step_tol > 0.0) || !(options.resid_tol > 0.0) {
        return Err(Error::Parameter("tolerances must be positive".into()));
    }
    if n_gaps == 0 {
        return Ok(GapRootSystem {
            intervals: intervals.clone(),
            roots: Vec::new(),
            gap_orders: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
            converged: true,
            step_tol,
            resid_tol: options.resid_tol,
        });
    }

    let gap_orders: Vec<usize> = (0..n_gaps)
        .map(|i| gap_order(intervals, i, options.gap_rule))
        .collect();
    let gaps: Vec<GapNodes> = (0..n_gaps)
        .map(|i| gap_nodes(intervals, i, gap_orders[i]))
        .collect::<Result<_>>()?;
    let bounds: Vec<(f64, f64)> = (0..n_gaps).map(|i| nth_gap(intervals, i)).collect();

    let mut roots: Vec<f64> = match &options.initial_roots {
        Some(init) => {
            if init.len() != n_gaps {
                return Err(Error::Parameter(format!(
                    "{} initial roots for {} gaps",
                    init.len(),
                    n_gaps
                )));
            }
            for (z, &(lo, hi)) in init.iter().zip(&bounds) {
                if !(lo < *z && *z < hi) {
                    return Err(Error::Parameter(format!(
                        "initial root {z} outside its gap ({lo}, {hi})"
                    )));
                }
            }
            init.clone()
        }
        None => bounds.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect(),
    };

    let mut residuals = vec![f64::NAN; n_gaps];
    let mut last_step = f64::INFINITY;
    for sweep in 1..=options.max_iter {
        let mut max_step = 0.0f64;
        for i in 0..n_gaps {
            let updated = relaxed_root(&gaps[i], &roots, i, bounds[i]);
            max_step = max_step.max((updated - roots[i]).abs());
            roots[i] = updated;
        }
        last_step = max_step;
        if max_step <= step_tol {
            for i in 0..n_gaps {
                residuals[i] = residual_at(&gaps[i], &roots, i);
            }
            if residuals.iter().any(|r| !r.is_finite()) {
                return Err(Error::Numeric(
                    "non-finite gap residual (interval scale too large?)".into(),
                ));
            }
            let max_resid = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            if max_resid <= options.resid_tol {
                return Ok(GapRootSystem {
                    intervals: intervals.clone(),
                    roots,
                    gap_orders,
                    residuals,
                    iterations: sweep,
                    converged: true,
                    step_tol,
                    resid_tol: options.resid_tol,
                });
            }
        }
    }

    for i in 0..n_gaps {
        residuals[i] = residual_at(&gaps[i], &roots, i);
    }
    Err(Error::Convergence {
        iterations: options.max_iter,
        max_residual: residuals.iter().fold(0.0f64, |m, r| m.max(r.abs())),
        last_step,
        residuals,
    })
}

/// Gaussian-sum estimate of the gap integral over gap `gap_index` (counting
/// from zero) at the system's roots.
pub fn gap_residual(sys: &GapRootSystem, gap_index: usize) -> Result<f64> {
    let n_gaps = sys.intervals.len() - 1;
    if n_gaps == 0 {
        return Err(Error::Parameter(
            "a single interval has no gaps to integrate over".into(),
        ));
    }
    if gap_index >= n_gaps {
        return Err(Error::Parameter(format!(
            "gap index {gap_index} out of range (gaps: {n_gaps})"
        )));
    }
    let gap = gap_nodes(&sys.intervals, gap_index, sys.gap_orders[gap_index])?;
    let value = residual_at(&gap, &sys.roots, gap_index);
    if !value.is_finite() {
        return Err(Error::Numeric("non-finite gap residual".into()));
    }
    Ok(value)
}

/// Atoms of the discretized equilibrium measure: a Chebyshev–Gauss rule of
/// order `order` on every interval, each node weighted by the equilibrium
/// density relative to the interval's own Chebyshev measure.
///
/// With a single interval, the density factor is one and the atoms are the
/// plain mapped rule with equal weights.
pub fn equilibrium_atoms(sys: &GapRootSystem, order: usize) -> Result<DiscreteMeasure> {
    if !sys.converged {
        return Err(Error::State(
            "equilibrium atoms need converged gap roots".into(),
        ));
    }
    let rule = chebyshev_rule(order)?;
    let weight = rule.weight();
    let mut atoms = Vec::with_capacity(sys.intervals.len() * order);
    for (i, &(a, b)) in sys.intervals.intervals().iter().enumerate() {
        for &t in rule.nodes() {
            let x = map_to_interval(t, (a, b));
            let (_, z_log) = signed_log_product(x, &sys.roots, usize::MAX);
            let mut tilde_log = 0.0;
            for (k, &(c, d)) in sys.intervals.intervals().iter().enumerate() {
                if k == i {
                    continue;
                }
                tilde_log += (x - c).abs().ln() + (x - d).abs().ln();
            }
            atoms.push((x, weight * (z_log - 0.5 * tilde_log).exp()));
        }
    }
    DiscreteMeasure::new(atoms)
}

/// Equilibrium density at a point strictly inside one of the intervals.
pub fn equilibrium_density(sys: &GapRootSystem, s: f64) -> Result<f64> {
    if !sys.converged {
        return Err(Error::State(
            "equilibrium density needs converged gap roots".into(),
        ));
    }
    if sys.intervals.interval_containing(s).is_none() {
        return Err(Error::Domain(format!(
            "{s} is not strictly inside any interval"
        )));
    }
    let (_, z_log) = signed_log_product(s, &sys.roots, usize::MAX);
    let mut y_log = 0.0;
    for &(a, b) in sys.intervals.intervals() {
        y_log += (s - a).abs().ln() + (s - b).abs().ln();
    }
    Ok((z_log - 0.5 * y_log).exp() / std::f64::consts::PI)
}
