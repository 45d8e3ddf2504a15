//! Complex logarithmic potential, capacity, Green's function and root
//! asymptotics.
//!
//! The complex log integral `L(z) = ∫ log(z-s) dν(s)` is evaluated either by
//! direct atom summation over a discrete measure (principal branch per atom)
//! or from a Jacobi matrix through the monic polynomial ratio recurrence,
//! whose running averages converge to `L` with `O(1/j)` fluctuations that a
//! moving Cesàro window smooths out.  Conventions: the electrostatic
//! potential is `V = -Re L`, the Green's function `g = -V - log cap`, and the
//! rotation number `Im L`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ifs::{DiscreteMeasure, IntervalUnion};
use crate::jacobi::JacobiMatrix;
use crate::quadrature::map_to_interval;
use crate::{Error, Result};

/// Two atoms closer to an evaluation point than this are a collision.
const SINGULARITY_DISTANCE: f64 = 1e-300;

/// How a potential value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PotentialMethod {
    Quadrature,
    RootAsymptotics,
}

/// One evaluation of the complex logarithmic potential.
#[derive(Debug, Clone, Copy)]
pub struct PotentialSample {
    pub z: Complex64,
    /// `L = ∫ log(z-s) dν(s)`.
    pub log_integral: Complex64,
    /// Electrostatic potential `V = -Re L`.
    pub potential: f64,
    /// Rotation number `Im L`.
    pub rotation: f64,
    /// Green's function, filled once a capacity is supplied.
    pub green: Option<f64>,
    pub method: PotentialMethod,
    /// First averaged index, for the asymptotics route.
    pub j_used: Option<usize>,
    /// Averaging window length, for the asymptotics route.
    pub window: Option<usize>,
}

impl PotentialSample {
    fn from_log_integral(z: Complex64, l: Complex64, method: PotentialMethod) -> Self {
        PotentialSample {
            z,
            log_integral: l,
            potential: -l.re,
            rotation: l.im,
            green: None,
            method,
            j_used: None,
            window: None,
        }
    }

    /// Fills the Green's function from a capacity.
    pub fn with_capacity(mut self, cap: f64) -> Self {
        self.green = Some(greens_function(&self, cap));
        self
    }
}

/// `g = -V - log cap`.
pub fn greens_function(sample: &PotentialSample, cap: f64) -> f64 {
    assert!(cap > 0.0, "capacity must be positive");
    -sample.potential - cap.ln()
}

/// Atom-sum evaluation of the complex log integral, principal branch per
/// atom.  For real `z` to the right of the support the result is real.
pub fn log_transform(measure: &DiscreteMeasure, z: Complex64) -> Result<PotentialSample> {
    let mut l = Complex64::new(0.0, 0.0);
    for &(x, w) in measure.atoms() {
        let d = z - x;
        if d.re.abs() < SINGULARITY_DISTANCE && d.im.abs() < SINGULARITY_DISTANCE {
            return Err(Error::Singularity(format!(
                "evaluation point {z} collides with the atom at {x}"
            )));
        }
        l += w * d.ln();
    }
    Ok(PotentialSample::from_log_integral(
        z,
        l,
        PotentialMethod::Quadrature,
    ))
}

/// `exp(-V(z₀))` at a single interior probe.
pub fn capacity_at(measure: &DiscreteMeasure, z0: f64) -> Result<f64> {
    let sample = log_transform(measure, Complex64::new(z0, 0.0))?;
    Ok((-sample.potential).exp())
}

/// Capacity estimate from interior probes, with their spread.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityEstimate {
    pub mean: f64,
    pub spread: f64,
    pub probes: Vec<(f64, f64)>,
}

/// Number of capacity probes per interval.
const CAPACITY_PROBES: usize = 5;

/// Capacity of the support from the potential on it: `exp(-V)` averaged over
/// a few interior probes per interval, where the equilibrium potential is
/// constant at `-log cap`.
///
/// Probe placement: spread like a coarse Chebyshev set but snapped to angles
/// `(m + 1/3)·π/G` of the atom grid's order `G`.  At those angles the local
/// node polynomial of the interval's Chebyshev-type atoms has magnitude near
/// its geometric mean, which cancels the `O(1/G)` logarithmic bias that probes
/// at node or extremum angles would pick up; the snapped angles also never
/// collide with the atoms themselves.
pub fn capacity(measure: &DiscreteMeasure, support: &IntervalUnion) -> Result<CapacityEstimate> {
    let per_interval = measure.len() / support.len();
    if per_interval < 2 * CAPACITY_PROBES {
        return Err(Error::Parameter(format!(
            "need at least {} atoms per interval for capacity probes",
            2 * CAPACITY_PROBES
        )));
    }
    let g = per_interval as f64;
    let mut probes = Vec::with_capacity(CAPACITY_PROBES * support.len());
    for &(a, b) in support.intervals() {
        for k in 1..=CAPACITY_PROBES {
            let spread_angle = (2 * k - 1) as f64 * std::f64::consts::PI
                / (2 * CAPACITY_PROBES) as f64;
            let m = (spread_angle * g / std::f64::consts::PI - 1.0 / 3.0).round();
            let m = m.clamp(1.0, g - 1.0);
            let angle = (m + 1.0 / 3.0) * std::f64::consts::PI / g;
            let z0 = map_to_interval(angle.cos(), (a, b));
            probes.push((z0, capacity_at(measure, z0)?));
        }
    }
    let mean = probes.iter().map(|&(_, c)| c).sum::<f64>() / probes.len() as f64;
    let spread = probes
        .iter()
        .map(|&(_, c)| (c - mean).abs())
        .fold(0.0f64, f64::max);
    Ok(CapacityEstimate {
        mean,
        spread,
        probes,
    })
}

/// Logarithmic energy of the support, `-log cap`, through the capacity probe.
///
/// The literal double-sum energy of a discrete measure diverges on its own
/// atoms, so the energy is defined through the potential's constant value on
/// the support instead.
pub fn energy(measure: &DiscreteMeasure, support: &IntervalUnion) -> Result<f64> {
    Ok(-capacity(measure, support)?.mean.ln())
}

/// Monic-polynomial ratios and their running averages along the recurrence.
#[derive(Debug, Clone)]
pub struct RatioSequence {
    ratios: Vec<Complex64>,
    running_log_abs: Vec<f64>,
    running_arg: Vec<f64>,
}

impl RatioSequence {
    /// Ratios `P_j/P_{j-1}` for `j = 1..=len`.
    pub fn ratios(&self) -> &[Complex64] {
        &self.ratios
    }

    /// `(1/j)·Σ_{i≤j} log|ρ_i|`, indexed by `j-1`; converges to `Re L`.
    pub fn running_log_abs(&self) -> &[f64] {
        &self.running_log_abs
    }

    /// `(1/j)·Σ_{i≤j} arg ρ_i` with arguments in `[0, 2π)`; converges to
    /// `Im L` for `z` in the upper half-plane.
    pub fn running_arg(&self) -> &[f64] {
        &self.running_arg
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    /// Mean of the running averages over indices `[j_lo, j_lo+window)`,
    /// returned as a complex log-integral estimate.
    fn window_mean(&self, j_lo: usize, window: usize) -> Complex64 {
        let lo = j_lo - 1; // running arrays are indexed by j-1
        let re: f64 = self.running_log_abs[lo..lo + window].iter().sum();
        let im: f64 = self.running_arg[lo..lo + window].iter().sum();
        Complex64::new(re, im) / window as f64
    }
}

/// Ratios of consecutive monic orthogonal polynomials at `z`:
/// `ρ_1 = z - a_0`, `ρ_{j+1} = (z - a_j) - b_j²/ρ_j`.
pub fn ratio_sequence(matrix: &JacobiMatrix, z: Complex64, j_max: usize) -> Result<RatioSequence> {
    if j_max == 0 || j_max > matrix.rank() {
        return Err(Error::Parameter(format!(
            "ratio count {j_max} out of range for rank {}",
            matrix.rank()
        )));
    }
    let mut ratios = Vec::with_capacity(j_max);
    let mut running_log_abs = Vec::with_capacity(j_max);
    let mut running_arg = Vec::with_capacity(j_max);
    let mut rho = z - matrix.diag()[0];
    let mut log_abs_sum = 0.0;
    let mut arg_sum = 0.0;
    for j in 1..=j_max {
        let norm = rho.norm();
        if norm < SINGULARITY_DISTANCE {
            return Err(Error::Pole {
                index: j,
                message: format!("polynomial ratio vanished at {z}"),
            });
        }
        ratios.push(rho);
        log_abs_sum += norm.ln();
        let mut arg = rho.arg();
        if arg < 0.0 {
            arg += 2.0 * std::f64::consts::PI;
        }
        arg_sum += arg;
        running_log_abs.push(log_abs_sum / j as f64);
        running_arg.push(arg_sum / j as f64);
        if j < j_max {
            let b = matrix.offdiag(j);
            rho = (z - matrix.diag()[j]) - b * b / rho;
        }
    }
    Ok(RatioSequence {
        ratios,
        running_log_abs,
        running_arg,
    })
}

/// Log-integral estimate by root asymptotics: the moving Cesàro average of
/// the ratio-recurrence running sums over indices `[j_lo, j_lo + window)`.
pub fn root_asymptotics(
    matrix: &JacobiMatrix,
    z: Complex64,
    j_lo: usize,
    window: usize,
) -> Result<PotentialSample> {
    if j_lo == 0 || window == 0 {
        return Err(Error::Parameter(
            "asymptotics need a positive start index and window".into(),
        ));
    }
    if j_lo + window - 1 > matrix.rank() {
        return Err(Error::Parameter(format!(
            "window [{j_lo}, {}) exceeds rank {}",
            j_lo + window,
            matrix.rank()
        )));
    }
    let seq = ratio_sequence(matrix, z, j_lo + window - 1)?;
    let l = seq.window_mean(j_lo, window);
    let mut sample = PotentialSample::from_log_integral(z, l, PotentialMethod::RootAsymptotics);
    sample.j_used = Some(j_lo);
    sample.window = Some(window);
    Ok(sample)
}

/// Asymptotics-vs-quadrature errors at one polynomial index.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoticsErrorRow {
    pub j: usize,
    /// Raw running-average error at `j`.
    pub raw: f64,
    /// Moving-window Cesàro error over `[j, j+window)`.
    pub moving: f64,
    /// Full Cesàro error over `[1, j]`.
    pub full: f64,
}

/// Distance of the root-asymptotics running averages from the quadrature
/// value of `Re L`, sampled at the given indices.
///
/// `raw` uses the running average itself, `moving` smooths it over a window,
/// and `full` averages every running value up to `j` (a double average).
pub fn asymptotics_error_profile(
    matrix: &JacobiMatrix,
    measure: &DiscreteMeasure,
    z: Complex64,
    j_samples: &[usize],
    window: usize,
) -> Result<Vec<AsymptoticsErrorRow>> {
    if j_samples.is_empty() || window == 0 {
        return Err(Error::Parameter("empty profile request".into()));
    }
    let j_top = *j_samples.iter().max().expect("nonempty");
    if j_samples.iter().any(|&j| j == 0) {
        return Err(Error::Parameter("indices start at 1".into()));
    }
    if j_top + window - 1 > matrix.rank() {
        return Err(Error::Parameter(format!(
            "profile needs rank {} but the matrix has {}",
            j_top + window - 1,
            matrix.rank()
        )));
    }
    let target = log_transform(measure, z)?.log_integral.re;
    let seq = ratio_sequence(matrix, z, j_top + window - 1)?;
    let running = seq.running_log_abs();
    // prefix sums of the running averages for the full Cesàro column
    let mut prefix = Vec::with_capacity(running.len() + 1);
    prefix.push(0.0);
    for (i, &s) in running.iter().enumerate() {
        prefix.push(prefix[i] + s);
    }
    Ok(j_samples
        .iter()
        .map(|&j| {
            let moving = (prefix[j + window - 1] - prefix[j - 1]) / window as f64;
            let full = prefix[j] / j as f64;
            AsymptoticsErrorRow {
                j,
                raw: (running[j - 1] - target).abs(),
                moving: (moving - target).abs(),
                full: (full - target).abs(),
            }
        })
        .collect())
}

/// A source for the complex log potential: direct atom sums over a measure,
/// or root asymptotics of a Jacobi matrix with a fixed averaging window.
#[derive(Debug, Clone, Copy)]
pub enum PotentialSource<'a> {
    Measure(&'a DiscreteMeasure),
    Matrix {
        matrix: &'a JacobiMatrix,
        j_lo: usize,
        window: usize,
    },
}

impl PotentialSource<'_> {
    /// A matrix source averaging over the trailing few percent of the rank
    /// (at least 50 indices).
    pub fn matrix_tail(matrix: &JacobiMatrix) -> PotentialSource<'_> {
        let rank = matrix.rank();
        let window = ((rank * 4) / 100).max(50).min(rank);
        PotentialSource::Matrix {
            matrix,
            j_lo: rank - window + 1,
            window,
        }
    }

    pub fn sample(&self, z: Complex64) -> Result<PotentialSample> {
        match *self {
            PotentialSource::Measure(m) => log_transform(m, z),
            PotentialSource::Matrix {
                matrix,
                j_lo,
                window,
            } => root_asymptotics(matrix, z, j_lo, window),
        }
    }

    /// Samples many points; evaluation is pointwise-parallel and the output
    /// order follows the input order.
    pub fn sample_batch(&self, points: &[Complex64]) -> Result<Vec<PotentialSample>> {
        points.par_iter().map(|&z| self.sample(z)).collect()
    }
}
