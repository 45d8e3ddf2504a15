//! Conversions between discrete measures and Jacobi matrices.
//!
//! The workhorse is a streaming, truncated variant of the rotation-based
//! reconstruction of a Jacobi matrix from spectral data: atoms are absorbed
//! one at a time into the current matrix, and the recurrence is never run past
//! a fixed truncation rank, so a rank-`n̄` matrix costs `O(n̄)` per atom and
//! `O(n̄)` memory no matter how many atoms stream through.  A classical
//! discrete Stieltjes procedure (stable only at small rank) serves as an
//! independent cross-check, and a first-row-only tridiagonal eigensolver
//! recovers Gauss atoms from a truncated matrix.

use serde::{Deserialize, Serialize};

use crate::ifs::DiscreteMeasure;
use crate::serial::{g17, parse_f64};
use crate::{Error, Result};

/// Recurrence coefficients of the orthonormal polynomials of a measure:
/// diagonal entries `a_j`, positive off-diagonal entries `b_j`, and the total
/// mass of the measure (the square of the conventional `b_0` slot).
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    mass: f64,
}

impl JacobiMatrix {
    /// The rank-0 matrix of the zero measure, usable as a streaming seed.
    pub fn empty() -> Self {
        JacobiMatrix {
            diag: Vec::new(),
            offdiag: Vec::new(),
            mass: 0.0,
        }
    }

    /// Builds a matrix from raw coefficient arrays.
    ///
    /// `offdiag` holds `b_1..b_{rank-1}` and must be one shorter than `diag`;
    /// every stored `b_j` must be positive, and the mass positive for any
    /// nonzero rank.
    pub fn from_parts(diag: Vec<f64>, offdiag: Vec<f64>, mass: f64) -> Result<Self> {
        if diag.is_empty() {
            if offdiag.is_empty() && mass == 0.0 {
                return Ok(JacobiMatrix::empty());
            }
            return Err(Error::Parameter(
                "rank-0 matrix must have no off-diagonal and zero mass".into(),
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Parameter(format!(
                "off-diagonal length {} does not match rank {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Parameter(format!("mass {mass} must be positive")));
        }
        if let Some(j) = diag.iter().position(|a| !a.is_finite()) {
            return Err(Error::Numeric(format!("non-finite diagonal entry a_{j}")));
        }
        if let Some(j) = offdiag.iter().position(|b| !(*b > 0.0) || !b.is_finite()) {
            return Err(Error::Numeric(format!(
                "off-diagonal entry b_{} = {} is not positive",
                j + 1,
                offdiag[j]
            )));
        }
        Ok(JacobiMatrix {
            diag,
            offdiag,
            mass,
        })
    }

    /// Number of stored rows.
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Total mass of the underlying measure.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Square root of the mass, the conventional zeroth off-diagonal slot.
    pub fn b0(&self) -> f64 {
        self.mass.sqrt()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries `b_1..b_{rank-1}` as a slice.
    pub fn offdiags(&self) -> &[f64] {
        &self.offdiag
    }

    /// Off-diagonal entry `b_j`, `1 ≤ j < rank`.
    pub fn offdiag(&self, j: usize) -> f64 {
        assert!(j >= 1 && j < self.rank(), "b_{j} out of range");
        self.offdiag[j - 1]
    }

    /// Leading `rank` rows as a new matrix.
    pub fn truncated(&self, rank: usize) -> JacobiMatrix {
        if rank >= self.rank() {
            return self.clone();
        }
        JacobiMatrix {
            diag: self.diag[..rank].to_vec(),
            offdiag: self.offdiag[..rank.saturating_sub(1)].to_vec(),
            mass: if rank == 0 { 0.0 } else { self.mass },
        }
    }

    /// CSV form: a `# mass=` comment, a `j,a,b` header, then one row per
    /// index with the off-diagonal column empty for `j = 0`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# mass={}\nj,a,b\n", g17(self.mass));
        for (j, &a) in self.diag.iter().enumerate() {
            if j == 0 {
                out.push_str(&format!("0,{},\n", g17(a)));
            } else {
                out.push_str(&format!("{j},{},{}\n", g17(a), g17(self.offdiag[j - 1])));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut mass = None;
        let mut diag = Vec::new();
        let mut offdiag = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line == "j,a,b" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.trim().strip_prefix("mass=") {
                    mass = Some(parse_f64("mass", value)?);
                }
                continue;
            }
            let mut parts = line.split(',');
            let j: usize = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Format(format!("bad row index in {line:?}")))?;
            let a = parse_f64("a", parts.next().unwrap_or(""))?;
            if j != diag.len() {
                return Err(Error::Format(format!(
                    "rows out of order: expected index {}, found {j}",
                    diag.len()
                )));
            }
            diag.push(a);
            let b_field = parts.next().unwrap_or("").trim();
            if j == 0 {
                if !b_field.is_empty() {
                    return Err(Error::Format("row 0 must leave the b column empty".into()));
                }
            } else {
                offdiag.push(parse_f64("b", b_field)?);
            }
        }
        let mass = mass.ok_or_else(|| Error::Format("missing # mass= line".into()))?;
        JacobiMatrix::from_parts(diag, offdiag, mass)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::serial::to_json_g17(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct JacobiJson {
    mass: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Serialize for JacobiMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        JacobiJson {
            mass: self.mass,
            a: self.diag.clone(),
            b: self.offdiag.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JacobiMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = JacobiJson::deserialize(deserializer)?;
        JacobiMatrix::from_parts(raw.a, raw.b, raw.mass).map_err(serde::de::Error::custom)
    }
}

/// Streaming state of the truncated rotation recurrence.
///
/// Atoms may be pushed in any order; the resulting matrix is independent of
/// the order up to roundoff.  The accumulator never allocates beyond the
/// truncation rank fixed at construction.
#[derive(Debug, Clone)]
pub struct RkpwAccumulator {
    diag: Vec<f64>,
    offdiag_sq: Vec<f64>, // slot 0 holds the running mass
    filled: usize,
    cap: usize,
}

impl RkpwAccumulator {
    /// Empty accumulator with truncation rank `cap ≥ 1`.
    pub fn new(cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Parameter("truncation rank must be at least 1".into()));
        }
        Ok(RkpwAccumulator {
            diag: vec![0.0; cap],
            offdiag_sq: vec![0.0; cap],
            filled: 0,
            cap,
        })
    }

    /// Continues streaming from an existing matrix; `cap` must not cut it.
    pub fn from_matrix(matrix: &JacobiMatrix, cap: usize) -> Result<Self> {
        if cap == 0 || cap < matrix.rank() {
            return Err(Error::Parameter(format!(
                "truncation rank {cap} below the existing rank {}",
                matrix.rank()
            )));
        }
        let mut acc = RkpwAccumulator::new(cap)?;
        acc.diag[..matrix.rank()].copy_from_slice(matrix.diag());
        if matrix.rank() > 0 {
            acc.offdiag_sq[0] = matrix.mass();
            for (slot, b) in acc.offdiag_sq[1..matrix.rank()]
                .iter_mut()
                .zip(matrix.offdiags())
            {
                *slot = b * b;
            }
        }
        acc.filled = matrix.rank();
        Ok(acc)
    }

    /// Rows produced so far (`min(atoms absorbed, cap)`).
    pub fn rank(&self) -> usize {
        self.filled
    }

    /// Absorbs one atom of positive weight.
    ///
    /// One pass of the plane-rotation recurrence over the stored rows; the
    /// scalar state `(π², γ, σ, τ)` threads through the rows exactly as the
    /// corresponding auxiliary vectors would in a pipelined run.
    pub fn push(&mut self, position: f64, weight: f64) {
        debug_assert!(position.is_finite() && weight > 0.0);
        let lam = position;
        let mut pi = weight; // π²: squared norm entering the next row
        let mut gam = 1.0; // γ: rotation cosine squared
        let mut sig = 0.0; // σ: rotation sine squared
        let mut t = 0.0; // τ: diagonal correction carried downward
        for k in 0..self.filled {
            let rho = self.offdiag_sq[k] + pi;
            let next_offdiag = gam * rho;
            let prev_sig = sig;
            if rho <= 0.0 {
                gam = 1.0;
                sig = 0.0;
            } else {
                gam = self.offdiag_sq[k] / rho;
                sig = pi / rho;
            }
            let tk = sig * (self.diag[k] - lam) - gam * t;
            self.diag[k] -= tk - t;
            t = tk;
            pi = if sig <= 0.0 {
                prev_sig * self.offdiag_sq[k]
            } else {
                t * t / sig
            };
            self.offdiag_sq[k] = next_offdiag;
        }
        // Growth slot: with an empty row the recurrence degenerates to a
        // closed form, so the textbook pre-assignment of the new diagonal
        // entry is unnecessary.  `pi == 0` means the atom coincided with the
        // existing support and no new row appears.
        if self.filled < self.cap && pi > 0.0 {
            self.diag[self.filled] = lam + t;
            self.offdiag_sq[self.filled] = gam * pi;
            self.filled += 1;
        }
    }

    /// Converts the squared off-diagonal slots into a matrix.
    pub fn finish(self) -> Result<JacobiMatrix> {
        if self.filled == 0 {
            return Err(Error::Parameter("no atoms were absorbed".into()));
        }
        let mass = self.offdiag_sq[0];
        let mut offdiag = Vec::with_capacity(self.filled - 1);
        for (k, &b2) in self.offdiag_sq[1..self.filled].iter().enumerate() {
            if !(b2 > 0.0) || !b2.is_finite() {
                return Err(Error::Numeric(format!(
                    "squared off-diagonal entry {} at row {} (measure has fewer \
                     points of support than the requested rank?)",
                    b2,
                    k + 1
                )));
            }
            offdiag.push(b2.sqrt());
        }
        JacobiMatrix::from_parts(self.diag[..self.filled].to_vec(), offdiag, mass)
    }
}

/// Deterministic streaming order: bit reversal of the index range.
///
/// Feeding sorted atoms directly makes every new atom a close neighbor of
/// the previous one, and the recurrence's roundoff then grows with a visibly
/// larger constant; the bit-reversed interleaving keeps consecutive atoms
/// well separated and raises the rank at which accumulated noise reaches a
/// given tolerance by tens of percent.
fn bit_reversed_order(n: usize) -> Vec<usize> {
    if n <= 2 {
        return (0..n).collect();
    }
    let bits = usize::BITS - (n - 1).leading_zeros();
    let mut keyed: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let mut r = 0usize;
            for b in 0..bits {
                if i >> b & 1 == 1 {
                    r |= 1 << (bits - 1 - b);
                }
            }
            (r, i)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Jacobi matrix of a discrete measure, truncated at rank `nbar`.
///
/// Atoms are streamed in the bit-reversed interleaving of their ascending
/// order (deterministic, and numerically flatter than sorted streaming); the
/// returned rank is `min(nbar, number of atoms)` and the mass is the
/// measure's mass.
pub fn rkpw_jacobi(measure: &DiscreteMeasure, nbar: usize) -> Result<JacobiMatrix> {
    if measure.is_empty() {
        return Err(Error::Parameter("empty measure".into()));
    }
    let mut acc = RkpwAccumulator::new(nbar)?;
    let atoms = measure.atoms();
    for i in bit_reversed_order(atoms.len()) {
        acc.push(atoms[i].0, atoms[i].1);
    }
    acc.finish()
}

/// Adds finitely many atoms to the matrix of an arbitrary measure by
/// continuing the same streaming recurrence; `nbar` bounds the output rank.
///
/// Adding no atoms returns the input unchanged (up to re-truncation).
pub fn rkpw_add_atoms(
    matrix: &JacobiMatrix,
    atoms: &[(f64, f64)],
    nbar: usize,
) -> Result<JacobiMatrix> {
    for &(x, w) in atoms {
        if !x.is_finite() || !(w > 0.0) {
            return Err(Error::Parameter(format!(
                "atom ({x}, {w}) must have finite position and positive weight"
            )));
        }
    }
    if atoms.is_empty() && matrix.rank() == 0 {
        return Err(Error::Parameter("no atoms were absorbed".into()));
    }
    let mut acc = RkpwAccumulator::from_matrix(matrix, nbar.max(matrix.rank()))?;
    let mut sorted = atoms.to_vec();
    sorted.sort_by(|p, q| p.0.total_cmp(&q.0));
    for i in bit_reversed_order(sorted.len()) {
        acc.push(sorted[i].0, sorted[i].1);
    }
    acc.finish()
}

/// Rank beyond which the discrete Stieltjes procedure is refused.
///
/// The procedure is known to lose orthogonality rapidly on clustered
/// support; it is kept as a small-rank cross-check oracle only.
pub const STIELTJES_MAX_RANK: usize = 64;

/// Classical discrete Stieltjes procedure (small-rank oracle).
///
/// Orthonormal polynomials are carried on the atom grid:
/// `a_j = Σ w x p_j(x)²` and `b_{j+1}` normalizes `(x-a_j)p_j - b_j p_{j-1}`.
pub fn stieltjes_jacobi(measure: &DiscreteMeasure, nbar: usize) -> Result<JacobiMatrix> {
    if measure.is_empty() {
        return Err(Error::Parameter("empty measure".into()));
    }
    if nbar == 0 {
        return Err(Error::Parameter("rank must be at least 1".into()));
    }
    if nbar > STIELTJES_MAX_RANK {
        return Err(Error::Parameter(format!(
            "Stieltjes oracle is capped at rank {STIELTJES_MAX_RANK} (requested {nbar})"
        )));
    }
    let atoms = measure.atoms();
    let mass = measure.mass();
    let (lo, hi) = measure.support_bounds();
    let scale = (hi - lo).max(lo.abs().max(hi.abs())).max(1.0);
    let floor = mass * scale * scale * 1e-28;

    let mut p_prev = vec![0.0f64; atoms.len()];
    let mut p_cur = vec![1.0 / mass.sqrt(); atoms.len()];
    let mut diag = Vec::with_capacity(nbar);
    let mut offdiag = Vec::with_capacity(nbar.saturating_sub(1));
    let mut b_cur = 0.0f64;
    for j in 0..nbar {
        let a_j: f64 = atoms
            .iter()
            .zip(&p_cur)
            .map(|(&(x, w), &p)| w * x * p * p)
            .sum();
        diag.push(a_j);
        if j + 1 == nbar {
            break;
        }
        let mut norm_sq = 0.0;
        let mut q = vec![0.0f64; atoms.len()];
        for (i, &(x, w)) in atoms.iter().enumerate() {
            let v = (x - a_j) * p_cur[i] - b_cur * p_prev[i];
            q[i] = v;
            norm_sq += w * v * v;
        }
        if !(norm_sq > floor) || !norm_sq.is_finite() {
            return Err(Error::Instability(format!(
                "lost positivity at row {} (squared norm {norm_sq:.3e})",
                j + 1
            )));
        }
        let b_next = norm_sq.sqrt();
        offdiag.push(b_next);
        for v in q.iter_mut() {
            *v /= b_next;
        }
        p_prev = std::mem::replace(&mut p_cur, q);
        b_cur = b_next;
    }
    JacobiMatrix::from_parts(diag, offdiag, mass)
}

/// Gauss atoms of the leading `n×n` truncation: eigenvalues paired with
/// mass-scaled squared first eigenvector components.
///
/// Implicit-shift QL iteration on the tridiagonal, accumulating only the
/// first row of the eigenvector matrix; atoms are returned sorted ascending.
pub fn golub_welsch(matrix: &JacobiMatrix, n: usize) -> Result<DiscreteMeasure> {
    if n == 0 || n > matrix.rank() {
        return Err(Error::Parameter(format!(
            "requested {n} atoms from a rank-{} matrix",
            matrix.rank()
        )));
    }
    let mut d: Vec<f64> = matrix.diag()[..n].to_vec();
    // e[i] couples d[i] and d[i+1]; the last slot is scratch.
    let mut e = vec![0.0f64; n];
    for i in 0..n - 1 {
        e[i] = matrix.offdiag(i + 1);
    }
    let mut first = vec![0.0f64; n];
    first[0] = 1.0;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 30 {
                return Err(Error::Numeric(format!(
                    "eigenvalue {l} did not converge within 30 sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let signed = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + signed);
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = first[i + 1];
                first[i + 1] = s * first[i] + c * f;
                first[i] = c * first[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let atoms: Vec<(f64, f64)> = d
        .into_iter()
        .zip(first)
        .map(|(x, z)| (x, matrix.mass() * z * z))
        .collect();
    for &(x, w) in &atoms {
        if !(w > 0.0) {
            return Err(Error::Numeric(format!(
                "reconstructed weight {w} at node {x} is not positive"
            )));
        }
    }
    DiscreteMeasure::new(atoms)
}

/// Coincidence range of two matrices at tolerance `eps`: the largest row
/// index `l` such that rows `0..=l` agree entrywise within `eps`, or 0 when
/// even row 0 disagrees.
///
/// Row 0 compares the diagonal entry and the masses; row `j ≥ 1` compares
/// `a_j` and `b_j`.  The result never exceeds `min rank - 1`, the last row
/// both matrices carry.
pub fn coincidence_range(a: &JacobiMatrix, b: &JacobiMatrix, eps: f64) -> usize {
    assert!(eps > 0.0, "coincidence tolerance must be positive");
    let rmax = a.rank().min(b.rank());
    if rmax == 0 {
        return 0;
    }
    if (a.diag()[0] - b.diag()[0]).abs() > eps || (a.mass() - b.mass()).abs() > eps {
        return 0;
    }
    for j in 1..rmax {
        if (a.diag()[j] - b.diag()[j]).abs() > eps
            || (a.offdiag(j) - b.offdiag(j)).abs() > eps
        {
            return j - 1;
        }
    }
    rmax - 1
}

/// Averaged coincidence range: the largest row `l` such that the running
/// mean of the absolute off-diagonal differences over rows `0..=l` stays
/// within `eps` (the zeroth slot reads as `√mass`), or 0 when even row 0
/// exceeds it.
///
/// The running mean washes out the isolated row-wise spikes that the
/// pointwise [`coincidence_range`] stops at; it is the right notion when the
/// entry errors oscillate around a smooth envelope rather than exploding at
/// a sharp transition.
pub fn averaged_coincidence_range(a: &JacobiMatrix, b: &JacobiMatrix, eps: f64) -> usize {
    assert!(eps > 0.0, "coincidence tolerance must be positive");
    let rmax = a.rank().min(b.rank());
    if rmax == 0 {
        return 0;
    }
    let mut total = (a.b0() - b.b0()).abs();
    if total > eps {
        return 0;
    }
    for j in 1..rmax {
        total += (a.offdiag(j) - b.offdiag(j)).abs();
        if total > eps * (j + 1) as f64 {
            return j - 1;
        }
    }
    rmax - 1
}

/// Average absolute off-diagonal difference over rows `0..=row`, with the
/// zeroth slot read as `√mass`.
pub fn matrix_l1_row_error(a: &JacobiMatrix, b: &JacobiMatrix, row: usize) -> f64 {
    assert!(
        row < a.rank() && row < b.rank(),
        "row {row} out of range for ranks {} and {}",
        a.rank(),
        b.rank()
    );
    let mut total = (a.b0() - b.b0()).abs();
    for j in 1..=row {
        total += (a.offdiag(j) - b.offdiag(j)).abs();
    }
    total / (row + 1) as f64
}
