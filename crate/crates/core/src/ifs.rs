//! Iterated function systems, their interval approximations and the discrete
//! measures they generate.
//!
//! Two families are supported: affine contractions `x ↦ δ(x-γ)+γ` and the
//! two square-root branches `x ↦ ±√(x+λ)` whose attractor is the real Julia
//! set of `x ↦ x²-λ` for `λ ≥ 2`.  Applying the map family to the convex hull
//! produces a nested sequence of interval unions converging to the attractor;
//! applying the weighted transfer operator to a point mass produces atom sets
//! converging to the balanced measure.

use serde::{Deserialize, Serialize};

use crate::jacobi::JacobiMatrix;
use crate::{Error, Result};

/// Hard cap on the number of balanced-measure atoms held in memory.
const MAX_BALANCED_ATOMS: u64 = 1 << 25;

/// One affine contraction `x ↦ delta·(x - gamma) + gamma` with weight `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Contraction ratio, in (0,1).
    pub delta: f64,
    /// Fixed point of the map.
    pub gamma: f64,
    /// Transfer weight, positive; weights sum to one over the family.
    pub pi: f64,
}

impl AffineMap {
    fn apply(&self, x: f64) -> f64 {
        self.delta * (x - self.gamma) + self.gamma
    }
}

/// A weighted family of contractions defining an attractor on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IfsSystem {
    /// Finitely many affine contractions, ordered by increasing fixed point.
    Affine { maps: Vec<AffineMap> },
    /// The two branches `±√(x+λ)`, each with weight 1/2.
    Julia { lambda: f64 },
}

impl IfsSystem {
    /// Validated affine family.
    pub fn affine(maps: Vec<AffineMap>) -> Result<Self> {
        let sys = IfsSystem::Affine { maps };
        sys.validate()?;
        Ok(sys)
    }

    /// Validated Julia-branch family.
    pub fn julia(lambda: f64) -> Result<Self> {
        let sys = IfsSystem::Julia { lambda };
        sys.validate()?;
        Ok(sys)
    }

    /// The middle-third Cantor family: ratios 1/3, fixed points 0 and 1,
    /// equal weights.
    pub fn cantor() -> Self {
        IfsSystem::Affine {
            maps: vec![
                AffineMap {
                    delta: 1.0 / 3.0,
                    gamma: 0.0,
                    pi: 0.5,
                },
                AffineMap {
                    delta: 1.0 / 3.0,
                    gamma: 1.0,
                    pi: 0.5,
                },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IfsSystem::Affine { maps } => {
                if maps.len() < 2 {
                    return Err(Error::Parameter(
                        "affine family needs at least two maps".into(),
                    ));
                }
                let mut total = 0.0;
                for (m, map) in maps.iter().enumerate() {
                    if !(map.delta > 0.0 && map.delta < 1.0) {
                        return Err(Error::Parameter(format!(
                            "map {m}: contraction ratio {} outside (0,1)",
                            map.delta
                        )));
                    }
                    if !(map.pi > 0.0) || !map.pi.is_finite() {
                        return Err(Error::Parameter(format!(
                            "map {m}: weight {} must be positive",
                            map.pi
                        )));
                    }
                    if !map.gamma.is_finite() {
                        return Err(Error::Parameter(format!("map {m}: non-finite fixed point")));
                    }
                    total += map.pi;
                }
                for w in maps.windows(2) {
                    if !(w[0].gamma < w[1].gamma) {
                        return Err(Error::Parameter(
                            "fixed points must be strictly increasing".into(),
                        ));
                    }
                }
                if (total - 1.0).abs() > 1e-15 {
                    return Err(Error::Parameter(format!(
                        "weights sum to {total}, expected 1 within 1e-15"
                    )));
                }
                Ok(())
            }
            IfsSystem::Julia { lambda } => {
                if !(*lambda >= 2.0) {
                    return Err(Error::Parameter(format!(
                        "Julia parameter {lambda} must be at least 2"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Number of maps in the family.
    pub fn map_count(&self) -> usize {
        match self {
            IfsSystem::Affine { maps } => maps.len(),
            IfsSystem::Julia { .. } => 2,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sys: IfsSystem =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::serial::to_json_g17(self)
    }

    /// Convex hull of the attractor, as the generation-0 interval union.
    ///
    /// For an affine family this is the span of the extreme fixed points; for
    /// the Julia branches it is `[-β, β]` with `β` the positive fixed point of
    /// the increasing branch, `β² - β - λ = 0`.
    pub fn convex_hull(&self) -> IntervalUnion {
        let (lo, hi) = match self {
            IfsSystem::Affine { maps } => (maps[0].gamma, maps[maps.len() - 1].gamma),
            IfsSystem::Julia { lambda } => {
                let beta = 0.5 * (1.0 + (1.0 + 4.0 * lambda).sqrt());
                (-beta, beta)
            }
        };
        IntervalUnion {
            generation: 0,
            intervals: vec![(lo, hi)],
        }
    }

    /// One application of the map family to an interval union: the images of
    /// every interval under every branch, merged where they touch or overlap
    /// (exact endpoint comparison) and sorted ascending.
    pub fn refine(&self, e: &IntervalUnion) -> Result<IntervalUnion> {
        let mut images: Vec<(f64, f64)> = Vec::with_capacity(self.map_count() * e.len());
        match self {
            IfsSystem::Affine { maps } => {
                for &(a, b) in e.intervals() {
                    for map in maps {
                        images.push((map.apply(a), map.apply(b)));
                    }
                }
            }
            IfsSystem::Julia { lambda } => {
                for &(a, b) in e.intervals() {
                    if a + lambda < 0.0 {
                        return Err(Error::Domain(format!(
                            "interval [{a}, {b}] extends below -λ = {}; square-root \
                             branches are undefined there",
                            -lambda
                        )));
                    }
                    let (ra, rb) = ((a + lambda).sqrt(), (b + lambda).sqrt());
                    images.push((ra, rb));
                    images.push((-rb, -ra));
                }
            }
        }
        images.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(images.len());
        for (a, b) in images {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        IntervalUnion::new(e.generation() + 1, merged)
    }

    /// The generation-`n` interval union, i.e. `n` refinements of the hull.
    pub fn level(&self, n: u32) -> Result<IntervalUnion> {
        let mut e = self.convex_hull();
        for _ in 0..n {
            e = self.refine(&e)?;
        }
        Ok(e)
    }

    /// Atoms of the `n`-fold transfer-operator image of the point mass at the
    /// hull midpoint: `M^n` atoms at the map compositions of the seed, each
    /// weighted by the product of the branch weights along the composition.
    pub fn balanced_atoms(&self, n: u32) -> Result<DiscreteMeasure> {
        let count = (self.map_count() as u64)
            .checked_pow(n)
            .filter(|&c| c <= MAX_BALANCED_ATOMS)
            .ok_or_else(|| {
                Error::Size(format!(
                    "balanced measure at generation {n} needs more than {MAX_BALANCED_ATOMS} atoms"
                ))
            })?;
        let (lo, hi) = self.convex_hull().hull();
        let mut atoms = vec![(0.5 * (lo + hi), 1.0)];
        atoms.reserve(count as usize);
        for _ in 0..n {
            let mut next = Vec::with_capacity(atoms.len() * self.map_count());
            match self {
                IfsSystem::Affine { maps } => {
                    for &(x, w) in &atoms {
                        for map in maps {
                            next.push((map.apply(x), w * map.pi));
                        }
                    }
                }
                IfsSystem::Julia { lambda } => {
                    for &(x, w) in &atoms {
                        if x + lambda < 0.0 {
                            return Err(Error::Domain(format!(
                                "atom {x} escaped below -λ during iteration"
                            )));
                        }
                        let r = (x + lambda).sqrt();
                        next.push((r, 0.5 * w));
                        next.push((-r, 0.5 * w));
                    }
                }
            }
            atoms = next;
        }
        DiscreteMeasure::new(atoms)
    }
}

/// Exact Jacobi matrix of the equilibrium (= balanced) measure of the real
/// Julia set of `x ↦ x²-λ`, from the squared-entry recursion
/// `B₁ = λ`, `B₂ⱼ = Bⱼ/B₂ⱼ₋₁`, `B₂ⱼ₊₁ = λ - B₂ⱼ`, with `bⱼ = √Bⱼ` and all
/// diagonal entries zero.
pub fn julia_exact_jacobi(lambda: f64, rank: usize) -> Result<JacobiMatrix> {
    if !(lambda >= 2.0) {
        return Err(Error::Parameter(format!(
            "Julia parameter {lambda} must be at least 2"
        )));
    }
    if rank == 0 {
        return Err(Error::Parameter("rank must be at least 1".into()));
    }
    // squared[j] holds B_j for j = 1..rank-1
    let mut squared = vec![0.0f64; rank.max(2)];
    if rank > 1 {
        squared[1] = lambda;
    }
    for j in 2..rank {
        squared[j] = if j % 2 == 0 {
            let denom = squared[j - 1];
            if denom.abs() < 1e-300 {
                return Err(Error::Numeric(format!(
                    "zero pivot in Julia recursion at index {j}"
                )));
            }
            squared[j / 2] / denom
        } else {
            lambda - squared[j - 1]
        };
    }
    let offdiag = squared[1..rank].iter().map(|b2| b2.sqrt()).collect();
    JacobiMatrix::from_parts(vec![0.0; rank], offdiag, 1.0)
}

/// An ordered union of disjoint closed intervals, one generation of the
/// nested approximation of an attractor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    generation: u32,
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Validates ordering and pairwise disjointness.
    pub fn new(generation: u32, intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Parameter("interval union cannot be empty".into()));
        }
        for &(a, b) in &intervals {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::Parameter(format!("degenerate interval [{a}, {b}]")));
            }
        }
        for w in intervals.windows(2) {
            if !(w[0].1 < w[1].0) {
                return Err(Error::Parameter(format!(
                    "intervals [{}, {}] and [{}, {}] are not disjoint ascending",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(IntervalUnion {
            generation,
            intervals,
        })
    }

    /// A single interval, generation 0.
    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        IntervalUnion::new(0, vec![(lo, hi)])
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Spanning interval (first left endpoint, last right endpoint).
    pub fn hull(&self) -> (f64, f64) {
        (
            self.intervals[0].0,
            self.intervals[self.intervals.len() - 1].1,
        )
    }

    pub fn hull_width(&self) -> f64 {
        let (lo, hi) = self.hull();
        hi - lo
    }

    /// The open gaps between consecutive intervals.
    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.intervals.windows(2).map(|w| (w[0].1, w[1].0))
    }

    /// Index of the interval whose open interior contains `s`, if any.
    pub fn interval_containing(&self, s: f64) -> Option<usize> {
        self.intervals
            .iter()
            .position(|&(a, b)| a < s && s < b)
    }

    /// All interval endpoints in ascending order.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut e = Vec::with_capacity(2 * self.len());
        for &(a, b) in &self.intervals {
            e.push(a);
            e.push(b);
        }
        e
    }
}

/// A finite positive measure: atoms sorted ascending by position, positive
/// weights, atoms at identical positions merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
    mass: f64,
}

impl DiscreteMeasure {
    /// Canonicalizes the atom list: sort by position, merge exact duplicates
    /// by adding weights, reject non-finite positions and non-positive
    /// weights.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Parameter("measure needs at least one atom".into()));
        }
        for &(x, w) in &atoms {
            if !x.is_finite() {
                return Err(Error::Parameter(format!("non-finite atom position {x}")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Parameter(format!(
                    "atom at {x} has non-positive weight {w}"
                )));
            }
        }
        atoms.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let mass = merged.iter().map(|&(_, w)| w).sum();
        Ok(DiscreteMeasure {
            atoms: merged,
            mass,
        })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total mass (cached sum of the weights).
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Smallest and largest atom position.
    pub fn support_bounds(&self) -> (f64, f64) {
        (self.atoms[0].0, self.atoms[self.atoms.len() - 1].0)
    }

    /// Disjoint union with another measure (atoms merged and re-sorted).
    pub fn merged_with(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        DiscreteMeasure::new(atoms).expect("union of valid measures is valid")
    }

    /// CSV form: header `x,w`, one atom per row, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,w\n");
        for &(x, w) in &self.atoms {
            out.push_str(&crate::serial::g17(x));
            out.push(',');
            out.push_str(&crate::serial::g17(w));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("x,")) {
                continue;
            }
            let mut parts = line.split(',');
            let x = crate::serial::parse_f64("x", parts.next().unwrap_or(""))?;
            let w = crate::serial::parse_f64("w", parts.next().unwrap_or(""))?;
            atoms.push((x, w));
        }
        DiscreteMeasure::new(atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn cantor_hull_is_unit_interval() {
        let e = IfsSystem::cantor().convex_hull();
        assert_eq!(e.intervals(), &[(0.0, 1.0)]);
    }

    #[test]
    fn julia_hulls() {
        let e2 = IfsSystem::julia(2.0).unwrap().convex_hull();
        assert_eq!(e2.intervals(), &[(-2.0, 2.0)]);

        let e21 = IfsSystem::julia(2.1).unwrap().convex_hull();
        let beta = 0.5 * (1.0 + 9.4f64.sqrt());
        assert_close(e21.intervals()[0].0, -beta, 1e-15);
        assert_close(e21.intervals()[0].1, beta, 1e-15);
        // positive root of β² - β - λ = 0 at λ = 2.1
        assert_close(beta, 2.0329709716755895, 1e-15);
        assert_close(beta * beta - beta - 2.1, 0.0, 1e-14);
    }

    #[test]
    fn cantor_refinement_levels() {
        let ifs = IfsSystem::cantor();
        let e1 = ifs.refine(&ifs.convex_hull()).unwrap();
        assert_eq!(e1.len(), 2);
        assert_close(e1.intervals()[0].1, 1.0 / 3.0, 1e-15);
        assert_close(e1.intervals()[1].0, 2.0 / 3.0, 1e-15);

        let e2 = ifs.refine(&e1).unwrap();
        let expected = [
            (0.0, 1.0 / 9.0),
            (2.0 / 9.0, 1.0 / 3.0),
            (2.0 / 3.0, 7.0 / 9.0),
            (8.0 / 9.0, 1.0),
        ];
        assert_eq!(e2.len(), 4);
        for (got, want) in e2.intervals().iter().zip(expected.iter()) {
            assert_close(got.0, want.0, 1e-15);
            assert_close(got.1, want.1, 1e-15);
        }
        assert_eq!(e2.generation(), 2);
    }

    #[test]
    fn julia_two_branch_refinement() {
        let ifs = IfsSystem::julia(2.1).unwrap();
        let e1 = ifs.refine(&ifs.convex_hull()).unwrap();
        assert_eq!(e1.len(), 2);
        let beta = 0.5 * (1.0 + 9.4f64.sqrt());
        let inner = (2.1 - beta).sqrt();
        assert_close(e1.intervals()[0].0, -beta, 1e-15);
        assert_close(e1.intervals()[0].1, -inner, 1e-15);
        assert_close(e1.intervals()[1].0, inner, 1e-15);
        assert_close(inner, 0.2588996491392188, 1e-15);
    }

    #[test]
    fn julia_connected_case_stays_one_interval() {
        let ifs = IfsSystem::julia(2.0).unwrap();
        let e3 = ifs.level(3).unwrap();
        assert_eq!(e3.len(), 1);
        assert_eq!(e3.intervals(), &[(-2.0, 2.0)]);
    }

    #[test]
    fn refine_rejects_interval_below_branch_domain() {
        let ifs = IfsSystem::julia(2.0).unwrap();
        let bad = IntervalUnion::single(-5.0, 0.0).unwrap();
        assert!(matches!(ifs.refine(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn refinement_is_nested() {
        for ifs in [IfsSystem::cantor(), IfsSystem::julia(2.1).unwrap()] {
            let mut outer = ifs.convex_hull();
            for _ in 0..6 {
                let inner = ifs.refine(&outer).unwrap();
                for &(a, b) in inner.intervals() {
                    assert!(
                        outer
                            .intervals()
                            .iter()
                            .any(|&(oa, ob)| oa <= a + 1e-15 && b <= ob + 1e-15),
                        "[{a},{b}] not inside generation {}",
                        outer.generation()
                    );
                }
                outer = inner;
            }
        }
    }

    #[test]
    fn balanced_atoms_first_levels() {
        let ifs = IfsSystem::cantor();
        let m0 = ifs.balanced_atoms(0).unwrap();
        assert_eq!(m0.atoms(), &[(0.5, 1.0)]);

        let m1 = ifs.balanced_atoms(1).unwrap();
        assert_eq!(m1.len(), 2);
        assert_close(m1.atoms()[0].0, 1.0 / 6.0, 1e-16);
        assert_close(m1.atoms()[1].0, 5.0 / 6.0, 1e-16);
        assert_eq!(m1.atoms()[0].1, 0.5);

        let m2 = ifs.balanced_atoms(2).unwrap();
        let expected = [1.0 / 18.0, 5.0 / 18.0, 13.0 / 18.0, 17.0 / 18.0];
        assert_eq!(m2.len(), 4);
        for (atom, want) in m2.atoms().iter().zip(expected.iter()) {
            assert_close(atom.0, *want, 1e-15);
            assert_eq!(atom.1, 0.25);
        }
    }

    #[test]
    fn balanced_atoms_mass_and_symmetry() {
        let ifs = IfsSystem::cantor();
        for n in [3u32, 6, 9] {
            let m = ifs.balanced_atoms(n).unwrap();
            assert_eq!(m.len(), 1usize << n);
            assert!((m.mass() - 1.0).abs() < 1e-14);
            // symmetric about 1/2: every (x,w) has a partner (1-x,w)
            let atoms = m.atoms();
            for (i, &(x, w)) in atoms.iter().enumerate() {
                let (y, v) = atoms[atoms.len() - 1 - i];
                assert_close(x + y, 1.0, 1e-14);
                assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn balanced_atoms_size_guard() {
        assert!(matches!(
            IfsSystem::cantor().balanced_atoms(60),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn julia_recursion_values() {
        let j = julia_exact_jacobi(2.0, 8).unwrap();
        assert_close(j.offdiag(1), std::f64::consts::SQRT_2, 1e-15);
        for l in 2..8 {
            assert_close(j.offdiag(l), 1.0, 1e-15);
        }
        assert!(j.diag().iter().all(|&a| a == 0.0));
        assert_eq!(j.mass(), 1.0);

        let j21 = julia_exact_jacobi(2.1, 8).unwrap();
        let expected_squared = [
            2.1,
            1.0,
            1.1,
            0.9090909090909091,
            1.1909090909090909,
            0.9236641221374047,
            1.1763358778625953,
        ];
        for (l, want) in (1..8).zip(expected_squared.iter()) {
            assert_close(j21.offdiag(l) * j21.offdiag(l), *want, 1e-14);
        }
    }

    #[test]
    fn julia_recursion_rejects_bad_parameters() {
        assert!(julia_exact_jacobi(1.9, 4).is_err());
        assert!(julia_exact_jacobi(2.0, 0).is_err());
    }

    #[test]
    fn measure_canonicalization() {
        let m = DiscreteMeasure::new(vec![(0.5, 0.25), (0.25, 0.5), (0.5, 0.25)]).unwrap();
        assert_eq!(m.atoms(), &[(0.25, 0.5), (0.5, 0.5)]);
        assert_eq!(m.mass(), 1.0);

        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![(0.0, 0.0)]).is_err());
        assert!(DiscreteMeasure::new(vec![(f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn measure_csv_round_trip() {
        let m = DiscreteMeasure::new(vec![(1.0 / 3.0, 0.5), (0.9, 0.5)]).unwrap();
        let back = DiscreteMeasure::from_csv(&m.to_csv()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn ifs_json_round_trip() {
        let cantor = IfsSystem::cantor();
        let text = cantor.to_json().unwrap();
        assert!(text.contains("\"kind\":\"affine\""));
        assert_eq!(IfsSystem::from_json(&text).unwrap(), cantor);

        let julia = IfsSystem::julia(2.1).unwrap();
        let text = julia.to_json().unwrap();
        assert!(text.contains("\"kind\":\"julia\""));
        assert_eq!(IfsSystem::from_json(&text).unwrap(), julia);

        assert!(IfsSystem::from_json("{\"kind\":\"julia\",\"lambda\":1.0}").is_err());
    }

    #[test]
    fn interval_union_validation() {
        assert!(IntervalUnion::new(0, vec![(0.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(IntervalUnion::new(0, vec![(1.0, 1.0)]).is_err());
        let e = IntervalUnion::new(1, vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(e.gaps().collect::<Vec<_>>(), vec![(1.0, 2.0)]);
        assert_eq!(e.interval_containing(0.5), Some(0));
        assert_eq!(e.interval_containing(1.5), None);
        assert_eq!(e.interval_containing(1.0), None);
    }
}
