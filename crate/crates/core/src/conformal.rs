//! Conformal map of the upper half-plane minus the set onto the exterior of
//! the unit disk, and its Joukowsky composition.
//!
//! The map is `F(z) = exp(L(z) - log cap)` with `L` the complex log integral
//! of the equilibrium measure: then `|F| = e^g ≥ 1` off the set and
//! `F(z) ~ z/cap` at infinity.  Composing with `w ↦ (w + 1/w)/2` sends the
//! image back to a half-plane minus slits, one per gap of the set.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::potential::PotentialSource;
use crate::serial::g17;
use crate::{Error, Result};

/// Exterior map value at `z`: `exp(L(z))/cap`.
pub fn conformal_map(source: &PotentialSource<'_>, cap: f64, z: Complex64) -> Result<Complex64> {
    if !(cap > 0.0) {
        return Err(Error::Parameter(format!("capacity {cap} must be positive")));
    }
    let sample = source.sample(z)?;
    Ok((sample.log_integral - cap.ln()).exp())
}

/// `w ↦ (w + 1/w)/2`; collapses the unit circle onto `[-1,1]`.
pub fn joukowsky(w: Complex64) -> Result<Complex64> {
    if w.norm_sqr() == 0.0 {
        return Err(Error::Domain("Joukowsky map is undefined at 0".into()));
    }
    Ok(0.5 * (w + w.inv()))
}

/// A straight sample segment in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "lowercase")]
pub enum SegmentSpec {
    /// Fixed ordinate, abscissa swept over `x` in `count` uniform steps.
    Horizontal { y: f64, x: (f64, f64), count: usize },
    /// Fixed abscissa, ordinate swept over `y` in `count` uniform steps.
    Vertical { x: f64, y: (f64, f64), count: usize },
}

impl SegmentSpec {
    fn count(&self) -> usize {
        match *self {
            SegmentSpec::Horizontal { count, .. } | SegmentSpec::Vertical { count, .. } => count,
        }
    }

    fn min_ordinate(&self) -> f64 {
        match *self {
            SegmentSpec::Horizontal { y, .. } => y,
            SegmentSpec::Vertical { y, .. } => y.0.min(y.1),
        }
    }

    /// Uniformly spaced sample points, in parameter order.
    pub fn points(&self) -> Vec<Complex64> {
        let count = self.count();
        let step = |lo: f64, hi: f64, k: usize| {
            if count == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            }
        };
        (0..count)
            .map(|k| match *self {
                SegmentSpec::Horizontal { y, x, .. } => Complex64::new(step(x.0, x.1, k), y),
                SegmentSpec::Vertical { x, y, .. } => Complex64::new(x, step(y.0, y.1, k)),
            })
            .collect()
    }
}

/// One mapped sample: the source point, its image, and optionally the
/// Joukowsky composition of the image.
#[derive(Debug, Clone, Copy)]
pub struct MappedPoint {
    pub z: Complex64,
    pub f: Complex64,
    pub jf: Option<Complex64>,
}

/// The image of one sample segment, in input order.
#[derive(Debug, Clone)]
pub struct MappedPolyline {
    pub label: String,
    pub spec: SegmentSpec,
    pub points: Vec<MappedPoint>,
}

impl MappedPolyline {
    /// CSV form: `re_z,im_z,re_F,im_F,re_JF,im_JF`, composition columns left
    /// empty when it was not requested.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_z,im_z,re_F,im_F,re_JF,im_JF\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}",
                g17(p.z.re),
                g17(p.z.im),
                g17(p.f.re),
                g17(p.f.im)
            ));
            match p.jf {
                Some(jf) => out.push_str(&format!(",{},{}\n", g17(jf.re), g17(jf.im))),
                None => out.push_str(",,\n"),
            }
        }
        out
    }
}

/// Maps a family of segments; evaluation is pointwise-parallel but output
/// order follows input order.
pub fn map_segments(
    source: &PotentialSource<'_>,
    cap: f64,
    segments: &[(String, SegmentSpec)],
    compose_joukowsky: bool,
) -> Result<Vec<MappedPolyline>> {
    if !(cap > 0.0) {
        return Err(Error::Parameter(format!("capacity {cap} must be positive")));
    }
    for (label, spec) in segments {
        if spec.count() == 0 {
            return Err(Error::Parameter(format!("segment {label} has no points")));
        }
        if !(spec.min_ordinate() > 0.0) {
            return Err(Error::Parameter(format!(
                "segment {label} leaves the open upper half-plane"
            )));
        }
    }
    segments
        .iter()
        .map(|(label, spec)| {
            let points = spec
                .points()
                .par_iter()
                .map(|&z| -> Result<MappedPoint> {
                    let f = conformal_map(source, cap, z)?;
                    let jf = if compose_joukowsky {
                        Some(joukowsky(f)?)
                    } else {
                        None
                    };
                    Ok(MappedPoint { z, f, jf })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MappedPolyline {
                label: label.clone(),
                spec: *spec,
                points,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{equilibrium_atoms, solve_gap_roots, SolverOptions};
    use crate::ifs::{DiscreteMeasure, IntervalUnion};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn interval_atoms(lo: f64, hi: f64, order: usize) -> DiscreteMeasure {
        let e = IntervalUnion::single(lo, hi).unwrap();
        let sys = solve_gap_roots(&e, &SolverOptions::default()).unwrap();
        equilibrium_atoms(&sys, order).unwrap()
    }

    #[test]
    fn joukowsky_values() {
        assert_eq!(joukowsky(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        let theta = 0.7f64;
        let w = Complex64::from_polar(1.0, theta);
        let j = joukowsky(w).unwrap();
        assert_close(j.re, theta.cos(), 1e-15);
        assert_close(j.im, 0.0, 1e-15);
        let j = joukowsky(Complex64::new(2.0 + 3f64.sqrt(), 0.0)).unwrap();
        assert_close(j.re, 2.0, 1e-15);
        assert!(joukowsky(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn interval_map_closed_forms() {
        let m = interval_atoms(-1.0, 1.0, 2000);
        let source = PotentialSource::Measure(&m);

        let f = conformal_map(&source, 0.5, Complex64::new(2.0, 0.0)).unwrap();
        assert_close(f.re, 2.0 + 3f64.sqrt(), 1e-6);
        assert_close(f.im, 0.0, 1e-9);

        let f = conformal_map(&source, 0.5, Complex64::new(0.0, 1.0)).unwrap();
        assert_close(f.norm(), 1.0 + std::f64::consts::SQRT_2, 1e-6);
        assert_close(f.re, 0.0, 1e-9);

        let z = Complex64::new(0.0, 1e8);
        let f = conformal_map(&source, 0.5, z).unwrap();
        assert!((f - z / 0.5).norm() / z.norm() < 1e-6);
    }

    #[test]
    fn joukowsky_inverts_interval_map() {
        let m = interval_atoms(-1.0, 1.0, 4000);
        let source = PotentialSource::Measure(&m);
        let segments = vec![(
            "level".to_string(),
            SegmentSpec::Horizontal {
                y: 0.1,
                x: (-1.4, 1.4),
                count: 57,
            },
        )];
        let lines = map_segments(&source, 0.5, &segments, true).unwrap();
        for p in &lines[0].points {
            let jf = p.jf.unwrap();
            assert!((jf - p.z).norm() < 1e-8, "{} maps back to {}", p.z, jf);
            assert!(p.f.norm() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn level_line_argument_is_monotone() {
        let m = interval_atoms(-1.0, 1.0, 2000);
        let source = PotentialSource::Measure(&m);
        let spec = SegmentSpec::Horizontal {
            y: 0.05,
            x: (-2.0, 2.0),
            count: 200,
        };
        let lines = map_segments(&source, 0.5, &[("l".into(), spec)], false).unwrap();
        let args: Vec<f64> = lines[0].points.iter().map(|p| p.f.arg()).collect();
        let mut unwrapped = vec![args[0]];
        for w in args.windows(2) {
            let mut d = w[1] - w[0];
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            unwrapped.push(unwrapped.last().unwrap() + d);
        }
        for w in unwrapped.windows(2) {
            assert!(w[1] < w[0], "argument not monotone: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn discrete_cauchy_riemann_residual_shrinks_with_spacing() {
        // one-sided differences on a 2×2 grid: residual is O(h), so halving
        // the spacing should roughly halve it (factor-3 band)
        let m = interval_atoms(-1.0, 1.0, 500);
        let source = PotentialSource::Measure(&m);
        let z0 = Complex64::new(0.4, 0.8);
        let f = |z: Complex64| conformal_map(&source, 0.5, z).unwrap();
        let residual = |h: f64| {
            let dx = (f(z0 + h) - f(z0)) / h;
            let dy = (f(z0 + Complex64::new(0.0, h)) - f(z0)) / Complex64::new(0.0, h);
            (dx - dy).norm()
        };
        let (r1, r2) = (residual(1e-5), residual(5e-6));
        assert!(r2 < r1, "residuals {r1} {r2}");
        assert!(r1 / r2 < 3.0 * 2.0 && r1 / r2 > 2.0 / 3.0, "ratio {}", r1 / r2);
    }

    #[test]
    fn segment_validation() {
        let m = interval_atoms(-1.0, 1.0, 100);
        let source = PotentialSource::Measure(&m);
        let bad = SegmentSpec::Horizontal {
            y: -0.1,
            x: (0.0, 1.0),
            count: 5,
        };
        assert!(map_segments(&source, 0.5, &[("bad".into(), bad)], false).is_err());
        let empty = SegmentSpec::Vertical {
            x: 0.0,
            y: (0.1, 0.2),
            count: 0,
        };
        assert!(map_segments(&source, 0.5, &[("empty".into(), empty)], false).is_err());
    }

    #[test]
    fn polyline_csv_shape() {
        let m = interval_atoms(-1.0, 1.0, 100);
        let source = PotentialSource::Measure(&m);
        let spec = SegmentSpec::Vertical {
            x: 1.5,
            y: (0.5, 1.0),
            count: 3,
        };
        let lines = map_segments(&source, 0.5, &[("v".into(), spec)], false).unwrap();
        let csv = lines[0].to_csv();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "re_z,im_z,re_F,im_F,re_JF,im_JF");
        assert_eq!(rows.len(), 4);
        assert!(rows[1].ends_with(",,"));
    }
}
