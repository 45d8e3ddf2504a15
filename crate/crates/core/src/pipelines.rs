//! Convergence drivers: they tie the gap-root solver, the discretized
//! equilibrium measures and the streaming matrix construction into loops that
//! track how many leading Jacobi rows are trustworthy.
//!
//! The central bookkeeping device is the coincidence range of two matrices at
//! a tolerance ε.  Comparing a run against the same run with slightly fewer
//! quadrature points estimates the quadrature-converged rank; comparing
//! consecutive refinement levels estimates the attractor-converged rank; both
//! grow as the controlling parameter grows, and the drivers raise parameters
//! until the requested agreement is reached or a budget runs out.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::equilibrium::{equilibrium_atoms, solve_gap_roots, GapRootSystem, SolverOptions};
use crate::ifs::{DiscreteMeasure, IfsSystem, IntervalUnion};
use crate::jacobi::{
    averaged_coincidence_range, coincidence_range, golub_welsch, rkpw_jacobi, JacobiMatrix,
};
use crate::serial::g17;
use crate::{Error, Result};

/// Work limit for the escalating drivers, counted in quadrature atoms.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_total_atoms: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_total_atoms: 100_000_000,
        }
    }
}

/// One driver step, in execution order.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    /// Refinement level `n`.
    pub level: u32,
    /// Quadrature order per interval (0 where not applicable).
    pub gauss_order: usize,
    /// Effective rank of the coarser companion run, where one exists.
    pub coarse_rank: Option<usize>,
    /// Effective rank `N_ε` of this step's run.
    pub fine_rank: Option<usize>,
    /// Cross-level coincidence `H_ε`, where one was computed.
    pub coincidence: Option<usize>,
    /// Coincidence against a supplied reference matrix, where one was given.
    pub reference_rank: Option<usize>,
    pub seconds: f64,
    pub solver_iterations: usize,
    pub atoms: usize,
    pub rank_capped: bool,
}

/// Execution record of one driver run.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub algorithm: &'static str,
    pub epsilon: f64,
    pub parameters: BTreeMap<String, f64>,
    pub steps: Vec<StepRecord>,
    pub effective_rank: usize,
    /// Fitted scalars (slopes, exponents), keyed by name.
    pub fits: BTreeMap<String, f64>,
    /// Set when a budget stopped the run early; steps up to that point stand.
    pub aborted: Option<String>,
    /// Final matrix, truncated to the effective rank where meaningful.
    pub matrix: Option<JacobiMatrix>,
}

impl ConvergenceReport {
    fn new(algorithm: &'static str, epsilon: f64) -> Self {
        ConvergenceReport {
            algorithm,
            epsilon,
            parameters: BTreeMap::new(),
            steps: Vec::new(),
            effective_rank: 0,
            fits: BTreeMap::new(),
            aborted: None,
            matrix: None,
        }
    }

    /// Clears wall-clock fields so that serialized output is reproducible.
    pub fn zero_timings(&mut self) {
        for step in &mut self.steps {
            step.seconds = 0.0;
        }
    }

    /// Table form, one row per step: `n,G,N_eps,H_eps,Y_eps,seconds`.
    pub fn to_csv(&self) -> String {
        let cell = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("n,G,N_eps,H_eps,Y_eps,seconds\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.level,
                s.gauss_order,
                cell(&s.fine_rank),
                cell(&s.coincidence),
                cell(&s.reference_rank),
                g17(s.seconds)
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        crate::serial::to_json_g17(self)
    }
}

/// A Jacobi matrix produced with an effective-rank estimate attached.
#[derive(Debug, Clone)]
pub struct EffectiveJacobi {
    /// The higher-order run's matrix, at the truncation rank.
    pub matrix: JacobiMatrix,
    /// Leading rows on which the two companion runs agree within ε.
    pub effective_rank: usize,
    /// The coincidence reached the full compared range: the estimate is a
    /// lower bound imposed by the truncation or the atom count, not a
    /// measured disagreement.
    pub rank_capped: bool,
    /// Truncation rank of the streaming construction.
    pub truncation_rank: usize,
    pub solver_iterations: usize,
    /// Atoms consumed by both runs together.
    pub atoms_used: usize,
    /// Atom set of the higher-order run.
    pub atoms: DiscreteMeasure,
    /// Solved gap roots (reusable as a warm start).
    pub roots: GapRootSystem,
}

fn truncation_bound(hint: usize, limit: usize) -> usize {
    (4 * hint + 64).min(limit).max(1)
}

/// Jacobi matrix of the equilibrium measure on a finite interval union,
/// discretized with `gauss_order` points per interval, together with the
/// rank on which it agrees with the `gauss_order - decrement` run within
/// `epsilon`.
///
/// Works for any interval union, not only refinement levels of an attractor.
/// The truncation rank starts at `4·rank_hint + 64` and is grown fourfold
/// whenever the coincidence saturates it, so an unknown effective rank costs
/// at most a constant factor of extra streaming.
pub fn equilibrium_jacobi(
    intervals: &IntervalUnion,
    gauss_order: usize,
    decrement: usize,
    epsilon: f64,
    solver: &SolverOptions,
    rank_hint: usize,
) -> Result<EffectiveJacobi> {
    if decrement == 0 || gauss_order <= decrement {
        return Err(Error::Parameter(format!(
            "need gauss_order > decrement ≥ 1, got {gauss_order} and {decrement}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    let roots = solve_gap_roots(intervals, solver)?;
    let atoms_hi = equilibrium_atoms(&roots, gauss_order)?;
    let atoms_lo = equilibrium_atoms(&roots, gauss_order - decrement)?;
    let atoms_used = atoms_hi.len() + atoms_lo.len();
    let limit = atoms_lo.len();
    let mut nbar = truncation_bound(rank_hint, limit);
    loop {
        let j_hi = rkpw_jacobi(&atoms_hi, nbar)?;
        let j_lo = rkpw_jacobi(&atoms_lo, nbar)?;
        let effective = coincidence_range(&j_hi, &j_lo, epsilon);
        let capped = effective + 1 >= j_hi.rank().min(j_lo.rank());
        if capped && nbar < limit {
            nbar = truncation_bound(nbar, limit);
            continue;
        }
        return Ok(EffectiveJacobi {
            matrix: j_hi,
            effective_rank: effective,
            rank_capped: capped,
            truncation_rank: nbar,
            solver_iterations: roots.iterations(),
            atoms_used,
            atoms: atoms_hi,
            roots,
        });
    }
}

/// Result of the refinement-limit driver.
#[derive(Debug, Clone)]
pub struct LimitOutcome {
    /// Final matrix truncated at the cross-level coincidence rank.
    pub matrix: JacobiMatrix,
    pub effective_rank: usize,
    pub report: ConvergenceReport,
}

/// Jacobi matrix of the equilibrium measure on the attractor itself, by
/// alternating refinement level and quadrature order.
///
/// At each level `n` the driver compares the level-`(n-1)` matrix built with
/// `M·G` points per interval against the level-`n` matrix built with `G`:
/// while the cross-level coincidence exhausts the smaller of the two
/// effective ranks, the quadrature is the bottleneck and `G` is raised by the
/// factor `eta`; otherwise the level advances.  The final matrix is an
/// ε-approximation of the attractor's matrix through the returned rank.
///
/// A supplied `reference` matrix is compared against every level (its
/// coincidence lands in the report's reference column).  If the atom budget
/// runs out after at least one completed step, the partial report is returned
/// with `aborted` set; running out before any step is an error.
#[allow(clippy::too_many_arguments)]
pub fn attractor_jacobi(
    ifs: &IfsSystem,
    max_level: u32,
    g0: usize,
    epsilon: f64,
    eta: f64,
    decrement: usize,
    solver: &SolverOptions,
    reference: Option<&JacobiMatrix>,
    budget: &Budget,
) -> Result<LimitOutcome> {
    if max_level < 2 {
        return Err(Error::Parameter("max_level must be at least 2".into()));
    }
    if g0 <= decrement {
        return Err(Error::Parameter(format!(
            "initial order {g0} must exceed the decrement {decrement}"
        )));
    }
    if !(eta > 1.0) {
        return Err(Error::Parameter("eta must exceed 1".into()));
    }
    let mut report = ConvergenceReport::new("attractor-limit", epsilon);
    report.parameters.insert("g0".into(), g0 as f64);
    report.parameters.insert("eta".into(), eta);
    report.parameters.insert("decrement".into(), decrement as f64);
    report
        .parameters
        .insert("max_level".into(), max_level as f64);

    let m = ifs.map_count();
    let mut level = 2u32;
    let mut order = g0;
    let mut hint = 0usize;
    let mut spent: u64 = 0;
    let mut warm: HashMap<u32, Vec<f64>> = HashMap::new();
    let mut last: Option<(JacobiMatrix, usize)> = None;

    loop {
        let coarse_intervals = ifs.level(level - 1)?;
        let fine_intervals = ifs.level(level)?;
        let projected = (coarse_intervals.len() * (2 * m * order - decrement)
            + fine_intervals.len() * (2 * order - decrement)) as u64;
        if spent + projected > budget.max_total_atoms {
            let message = format!(
                "atom budget {} exhausted at level {level}, order {order}",
                budget.max_total_atoms
            );
            return match last {
                Some((matrix, rank)) => {
                    report.aborted = Some(message);
                    report.effective_rank = rank;
                    let truncated = matrix.truncated(rank);
                    report.matrix = Some(truncated.clone());
                    Ok(LimitOutcome {
                        matrix: truncated,
                        effective_rank: rank,
                        report,
                    })
                }
                None => Err(Error::Budget(message)),
            };
        }
        spent += projected;

        let t0 = Instant::now();
        let coarse = equilibrium_jacobi(
            &coarse_intervals,
            m * order,
            decrement,
            epsilon,
            &with_warm_start(solver, warm.get(&(level - 1))),
            hint,
        )?;
        warm.insert(level - 1, coarse.roots.roots().to_vec());
        hint = hint.max(coarse.effective_rank);
        let fine = equilibrium_jacobi(
            &fine_intervals,
            order,
            decrement,
            epsilon,
            &with_warm_start(solver, warm.get(&level)),
            hint,
        )?;
        warm.insert(level, fine.roots.roots().to_vec());
        hint = hint.max(fine.effective_rank);

        let floor = coarse.effective_rank.min(fine.effective_rank);
        let matched = coincidence_range(&coarse.matrix, &fine.matrix, epsilon);
        let against_reference =
            reference.map(|r| coincidence_range(&fine.matrix, r, epsilon));
        report.steps.push(StepRecord {
            level,
            gauss_order: order,
            coarse_rank: Some(coarse.effective_rank),
            fine_rank: Some(fine.effective_rank),
            coincidence: Some(matched),
            reference_rank: against_reference,
            seconds: t0.elapsed().as_secs_f64(),
            solver_iterations: coarse.solver_iterations + fine.solver_iterations,
            atoms: coarse.atoms_used + fine.atoms_used,
            rank_capped: coarse.rank_capped || fine.rank_capped,
        });
        last = Some((fine.matrix, matched));

        if matched == floor {
            // quadrature-limited: more points, same level
            order = ((eta * order as f64).ceil() as usize).max(order + 1);
            continue;
        }
        if level < max_level {
            level += 1;
            continue;
        }
        break;
    }

    let (matrix, rank) = last.expect("loop ran at least once");
    let truncated = matrix.truncated(rank);
    report.effective_rank = rank;
    report.matrix = Some(truncated.clone());
    Ok(LimitOutcome {
        matrix: truncated,
        effective_rank: rank,
        report,
    })
}

fn with_warm_start(solver: &SolverOptions, roots: Option<&Vec<f64>>) -> SolverOptions {
    SolverOptions {
        initial_roots: roots.cloned(),
        ..solver.clone()
    }
}

/// Result of the balanced-measure rank scan.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    /// `(level, rank)` pairs, in scan order.
    pub ranks: Vec<(u32, usize)>,
    /// Fitted exponent of rank against atom count in log-log space; absent
    /// when fewer than two scanned levels produced a nonzero rank.
    pub exponent: Option<f64>,
    pub report: ConvergenceReport,
}

/// Rank up to which the level-`n` balanced-measure matrices agree with a
/// high-level proxy of the limit matrix, for each requested level, plus the
/// fitted power-law exponent of that rank against the atom count `M^n`.
///
/// Agreement is measured by the averaged coincidence range: the balanced
/// sequence converges with strong row-to-row oscillations around a power-law
/// envelope, and the running-mean crossing tracks that envelope.  The
/// reference level must exceed every scanned level by more than 4: the
/// proxy's own error at the ranks under scan is then negligible against ε.
pub fn balanced_rank_scan(
    ifs: &IfsSystem,
    epsilon: f64,
    reference_level: u32,
    levels: &[u32],
    rank_bound: usize,
) -> Result<ScanOutcome> {
    if levels.is_empty() {
        return Err(Error::Parameter("no levels to scan".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    let highest = *levels.iter().max().expect("nonempty");
    if reference_level <= highest + 4 {
        return Err(Error::Parameter(format!(
            "reference level {reference_level} must exceed max scanned level {highest} by more than 4"
        )));
    }
    let mut report = ConvergenceReport::new("balanced-scan", epsilon);
    report
        .parameters
        .insert("reference_level".into(), reference_level as f64);
    report
        .parameters
        .insert("rank_bound".into(), rank_bound as f64);

    let t0 = Instant::now();
    let reference = rkpw_jacobi(&ifs.balanced_atoms(reference_level)?, rank_bound)?;
    report.steps.push(StepRecord {
        level: reference_level,
        gauss_order: 0,
        coarse_rank: None,
        fine_rank: None,
        coincidence: None,
        reference_rank: None,
        seconds: t0.elapsed().as_secs_f64(),
        solver_iterations: 0,
        atoms: ifs.map_count().pow(reference_level) as usize,
        rank_capped: false,
    });

    let mut ranks = Vec::with_capacity(levels.len());
    for &n in levels {
        let t0 = Instant::now();
        let atoms = ifs.balanced_atoms(n)?;
        let jn = rkpw_jacobi(&atoms, rank_bound)?;
        let rank = averaged_coincidence_range(&reference, &jn, epsilon);
        report.steps.push(StepRecord {
            level: n,
            gauss_order: 0,
            coarse_rank: None,
            fine_rank: Some(rank),
            coincidence: None,
            reference_rank: None,
            seconds: t0.elapsed().as_secs_f64(),
            solver_iterations: 0,
            atoms: atoms.len(),
            rank_capped: rank + 1 >= reference.rank().min(jn.rank()),
        });
        ranks.push((n, rank));
    }

    let positive: Vec<(f64, f64)> = ranks
        .iter()
        .filter(|&&(_, r)| r > 0)
        .map(|&(n, r)| ((ifs.map_count() as f64).powi(n as i32), r as f64))
        .collect();
    let exponent = if positive.len() >= 2 {
        let xs: Vec<f64> = positive.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = positive.iter().map(|p| p.1).collect();
        Some(fit_power_law(&xs, &ys)?.0)
    } else {
        None
    };
    if let Some(beta) = exponent {
        report.fits.insert("beta".into(), beta);
    }
    report.effective_rank = ranks.iter().map(|&(_, r)| r).max().unwrap_or(0);
    Ok(ScanOutcome {
        ranks,
        exponent,
        report,
    })
}

/// One row of a quadrature-growth sweep at fixed intervals.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub gauss_order: usize,
    /// Total atoms of the higher-order run (`order × intervals`).
    pub total_atoms: usize,
    /// Effective ranks, one per requested tolerance.
    pub ranks: Vec<usize>,
}

/// Effective ranks over a grid of quadrature orders, shared across several
/// tolerances.  The gap roots are solved once; each order builds one matrix
/// pair, compared at every tolerance.
pub fn rank_growth_sweep(
    intervals: &IntervalUnion,
    orders: &[usize],
    decrement: usize,
    epsilons: &[f64],
    solver: &SolverOptions,
) -> Result<Vec<SweepRow>> {
    if orders.is_empty() || epsilons.is_empty() {
        return Err(Error::Parameter("empty sweep grid".into()));
    }
    for &eps in epsilons {
        if !(eps > 0.0) {
            return Err(Error::Parameter("tolerances must be positive".into()));
        }
    }
    let roots = solve_gap_roots(intervals, solver)?;
    let mut rows = Vec::with_capacity(orders.len());
    let mut hint = 0usize;
    for &order in orders {
        if order <= decrement {
            return Err(Error::Parameter(format!(
                "order {order} must exceed the decrement {decrement}"
            )));
        }
        let atoms_hi = equilibrium_atoms(&roots, order)?;
        let atoms_lo = equilibrium_atoms(&roots, order - decrement)?;
        let limit = atoms_lo.len();
        let mut nbar = truncation_bound(hint, limit);
        let ranks = loop {
            let j_hi = rkpw_jacobi(&atoms_hi, nbar)?;
            let j_lo = rkpw_jacobi(&atoms_lo, nbar)?;
            let compared = j_hi.rank().min(j_lo.rank());
            let ranks: Vec<usize> = epsilons
                .iter()
                .map(|&eps| coincidence_range(&j_hi, &j_lo, eps))
                .collect();
            if ranks.iter().any(|&r| r + 1 >= compared) && nbar < limit {
                nbar = truncation_bound(nbar, limit);
                continue;
            }
            break ranks;
        };
        hint = ranks.iter().copied().max().unwrap_or(0);
        rows.push(SweepRow {
            gauss_order: order,
            total_atoms: atoms_hi.len(),
            ranks,
        });
    }
    Ok(rows)
}

/// Plateau value of one probe tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeResult {
    pub epsilon: f64,
    /// Largest effective rank the quadrature can certify at this tolerance.
    pub plateau_rank: usize,
    /// First quadrature order attaining the plateau.
    pub gauss_order: usize,
}

/// Feeds escalating values through a running maximum and reports the plateau
/// once two consecutive values fail to improve it: `(index of first maximum,
/// value)`.
fn detect_plateau(values: &[usize]) -> Option<(usize, usize)> {
    let mut best = 0usize;
    let mut best_at = 0usize;
    let mut stale = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if i == 0 || v > best {
            best = v;
            best_at = i;
            stale = 0;
        } else {
            stale += 1;
            if stale == 2 {
                return Some((best_at, best));
            }
        }
    }
    None
}

/// Maximum certified rank per tolerance: raises the quadrature order by the
/// factor `eta` until the effective rank stops increasing over two
/// consecutive raises, separately for every tolerance (matrix pairs are
/// shared across tolerances).
#[allow(clippy::too_many_arguments)]
pub fn max_rank_probe(
    intervals: &IntervalUnion,
    epsilons: &[f64],
    g0: usize,
    eta: f64,
    decrement: usize,
    solver: &SolverOptions,
    budget: &Budget,
) -> Result<Vec<ProbeResult>> {
    if epsilons.is_empty() {
        return Err(Error::Parameter("no tolerances to probe".into()));
    }
    for &eps in epsilons {
        if !(eps > 0.0) {
            return Err(Error::Parameter("tolerances must be positive".into()));
        }
    }
    if g0 <= decrement || !(eta > 1.0) {
        return Err(Error::Parameter(
            "need g0 > decrement and eta > 1 for the probe".into(),
        ));
    }
    let roots = solve_gap_roots(intervals, solver)?;
    let mut atom_cache: BTreeMap<usize, (DiscreteMeasure, DiscreteMeasure)> = BTreeMap::new();
    let mut pair_cache: BTreeMap<(usize, usize), (JacobiMatrix, JacobiMatrix)> = BTreeMap::new();
    let mut spent: u64 = 0;
    let mut hint = 0usize;
    let mut results = Vec::with_capacity(epsilons.len());

    for &eps in epsilons {
        let mut orders = Vec::new();
        let mut ranks = Vec::new();
        let mut order = g0;
        let plateau = loop {
            if let Some(found) = detect_plateau(&ranks) {
                break found;
            }
            if !atom_cache.contains_key(&order) {
                let projected = (intervals.len() * (2 * order - decrement)) as u64;
                if spent + projected > budget.max_total_atoms {
                    return Err(Error::Budget(format!(
                        "atom budget {} exhausted probing epsilon {eps:.1e} at order {order}",
                        budget.max_total_atoms
                    )));
                }
                spent += projected;
                let hi = equilibrium_atoms(&roots, order)?;
                let lo = equilibrium_atoms(&roots, order - decrement)?;
                atom_cache.insert(order, (hi, lo));
            }
            let (atoms_hi, atoms_lo) = &atom_cache[&order];
            let limit = atoms_lo.len();
            let mut nbar = truncation_bound(hint, limit);
            let rank = loop {
                let (j_hi, j_lo) = pair_cache
                    .entry((order, nbar))
                    .or_insert_with(|| {
                        (
                            rkpw_jacobi(atoms_hi, nbar).expect("validated atoms"),
                            rkpw_jacobi(atoms_lo, nbar).expect("validated atoms"),
                        )
                    })
                    .clone();
                let rank = coincidence_range(&j_hi, &j_lo, eps);
                if rank + 1 >= j_hi.rank().min(j_lo.rank()) && nbar < limit {
                    nbar = truncation_bound(nbar, limit);
                    continue;
                }
                break rank;
            };
            hint = hint.max(rank);
            orders.push(order);
            ranks.push(rank);
            order = ((eta * order as f64).ceil() as usize).max(order + 1);
        };
        results.push(ProbeResult {
            epsilon: eps,
            plateau_rank: plateau.1,
            gauss_order: orders[plateau.0],
        });
    }
    Ok(results)
}

/// Rank extrapolation from two consecutive coincidence values:
/// `h_n² / h_{n-1}`.
pub fn extrapolated_rank(h_n: usize, h_prev: usize) -> Result<f64> {
    if h_prev == 0 {
        return Err(Error::Parameter(
            "extrapolation needs a nonzero previous value".into(),
        ));
    }
    Ok((h_n as f64) * (h_n as f64) / h_prev as f64)
}

/// Mean absolute reconstruction errors of a measure pushed through the
/// matrix construction and back through the Gauss-atom recovery.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RoundTripError {
    pub positions: f64,
    pub weights: f64,
}

/// Full-rank round trip: measure → Jacobi matrix → Gauss atoms, with L¹
/// errors averaged over the atoms.
pub fn reconstruction_roundtrip(measure: &DiscreteMeasure) -> Result<RoundTripError> {
    let n = measure.len();
    let matrix = rkpw_jacobi(measure, n)?;
    let recovered = golub_welsch(&matrix, n)?;
    if recovered.len() != n {
        return Err(Error::Numeric(format!(
            "round trip changed the atom count from {n} to {}",
            recovered.len()
        )));
    }
    let mut dx = 0.0;
    let mut dw = 0.0;
    for (got, want) in recovered.atoms().iter().zip(measure.atoms()) {
        dx += (got.0 - want.0).abs();
        dw += (got.1 - want.1).abs();
    }
    Ok(RoundTripError {
        positions: dx / n as f64,
        weights: dw / n as f64,
    })
}

/// Ordinary least squares of `y` against `x`: `(slope, intercept)`.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Parameter(
            "linear fit needs at least two paired points".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Parameter("degenerate abscissa in fit".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Least squares in log-log space: `(exponent, amplitude)` of `y ≈ A·x^p`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Parameter(
            "power-law fit needs strictly positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (slope, intercept) = fit_linear(&lx, &ly)?;
    Ok((slope, intercept.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn unit_interval_run_matches_arcsine() {
        let e = IntervalUnion::single(0.0, 1.0).unwrap();
        let run = equilibrium_jacobi(&e, 100, 10, 1e-12, &SolverOptions::default(), 0).unwrap();
        assert!(run.effective_rank >= 40, "rank {}", run.effective_rank);
        for j in 0..run.effective_rank.min(run.matrix.rank()) {
            assert_close(run.matrix.diag()[j], 0.5, 1e-12);
        }
        assert_close(run.matrix.offdiag(1), 0.25 * std::f64::consts::SQRT_2, 1e-12);
        for j in 2..run.effective_rank {
            assert_close(run.matrix.offdiag(j), 0.25, 1e-12);
        }
        // both runs are exact Gauss rules, so agreement runs to the full
        // compared range and is flagged as capped
        assert!(run.rank_capped);
        assert_eq!(run.effective_rank, 89);
    }

    #[test]
    fn parameter_validation() {
        let e = IntervalUnion::single(0.0, 1.0).unwrap();
        assert!(equilibrium_jacobi(&e, 10, 10, 1e-10, &SolverOptions::default(), 0).is_err());
        assert!(equilibrium_jacobi(&e, 10, 0, 1e-10, &SolverOptions::default(), 0).is_err());
        assert!(equilibrium_jacobi(&e, 10, 1, 0.0, &SolverOptions::default(), 0).is_err());
        assert!(extrapolated_rank(5, 0).is_err());
        assert_close(extrapolated_rank(7, 3).unwrap(), 49.0 / 3.0, 1e-15);
        assert_close(extrapolated_rank(4, 4).unwrap(), 4.0, 1e-15);
    }

    #[test]
    fn plateau_detector_on_synthetic_data() {
        assert_eq!(detect_plateau(&[5, 5, 5]), Some((0, 5)));
        assert_eq!(detect_plateau(&[3, 7, 7, 7]), Some((1, 7)));
        assert_eq!(detect_plateau(&[3, 7, 9]), None);
        assert_eq!(detect_plateau(&[3, 7, 9, 9, 8]), Some((2, 9)));
        assert_eq!(detect_plateau(&[]), None);
    }

    #[test]
    fn fits_recover_known_laws() {
        let xs: Vec<f64> = (1..=6).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        let (slope, intercept) = fit_linear(&xs, &ys).unwrap();
        assert_close(slope, 3.0, 1e-12);
        assert_close(intercept, 1.0, 1e-12);

        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x.powf(0.9)).collect();
        let (exponent, amplitude) = fit_power_law(&xs, &ys).unwrap();
        assert_close(exponent, 0.9, 1e-12);
        assert_close(amplitude, 2.5, 1e-12);

        assert!(fit_power_law(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(fit_linear(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn balanced_scan_enforces_reference_margin() {
        let ifs = IfsSystem::cantor();
        assert!(balanced_rank_scan(&ifs, 1e-8, 10, &[6, 7], 64).is_err());
        let scan = balanced_rank_scan(&ifs, 1e-8, 15, &[8, 9, 10], 128).unwrap();
        assert_eq!(scan.ranks.len(), 3);
        // deeper levels agree with the proxy on more rows
        assert!(scan.ranks[0].1 <= scan.ranks[1].1);
        assert!(scan.ranks[1].1 <= scan.ranks[2].1);
        assert!(scan.exponent.is_some());
    }

    #[test]
    fn roundtrip_error_is_small_for_balanced_atoms() {
        let atoms = IfsSystem::cantor().balanced_atoms(6).unwrap();
        let err = reconstruction_roundtrip(&atoms).unwrap();
        assert!(err.weights < 1e-10, "weights {}", err.weights);
        assert!(err.positions <= err.weights);
    }

    #[test]
    fn report_csv_layout() {
        let mut report = ConvergenceReport::new("attractor-limit", 1e-10);
        report.steps.push(StepRecord {
            level: 2,
            gauss_order: 13,
            coarse_rank: Some(11),
            fine_rank: Some(7),
            coincidence: Some(1),
            reference_rank: Some(3),
            seconds: 0.125,
            solver_iterations: 9,
            atoms: 150,
            rank_capped: false,
        });
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,G,N_eps,H_eps,Y_eps,seconds");
        assert_eq!(
            lines.next().unwrap(),
            "2,13,7,1,3,1.2500000000000000e-1"
        );
        report.zero_timings();
        assert!(report.to_csv().contains(",0.0000000000000000e0"));
        let json = report.to_json().unwrap();
        assert!(json.contains("\"algorithm\":\"attractor-limit\""));
    }

    #[test]
    fn budget_abort_before_first_step_is_an_error() {
        let ifs = IfsSystem::julia(2.1).unwrap();
        let tiny = Budget {
            max_total_atoms: 10,
        };
        let out = attractor_jacobi(
            &ifs,
            3,
            13,
            1e-10,
            1.5,
            1,
            &SolverOptions::default(),
            None,
            &tiny,
        );
        assert!(matches!(out, Err(Error::Budget(_))));
    }
}
