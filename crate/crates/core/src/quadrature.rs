//! Chebyshev–Gauss quadrature and affine interval maps.
//!
//! The `G`-point rule for the Chebyshev (arcsine) probability measure on
//! `[-1,1]` has nodes `cos((2l-1)π/(2G))` and the uniform weight `1/G`.
//! It is the shared substrate for the equilibrium-measure atoms and for the
//! gap integrals of the root solver.

use crate::{Error, Result};

/// Nodes and (uniform) weight of the Chebyshev–Gauss rule of a given order.
#[derive(Debug, Clone)]
pub struct ChebyshevRule {
    order: usize,
    nodes: Vec<f64>,
}

impl ChebyshevRule {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Nodes, strictly decreasing in the index (closed-form ordering).
    /// Consumers must not assume ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// The uniform weight `1/G` carried by every node.
    pub fn weight(&self) -> f64 {
        1.0 / self.order as f64
    }
}

/// Builds the Chebyshev–Gauss rule of order `order`.
pub fn chebyshev_rule(order: usize) -> Result<ChebyshevRule> {
    if order == 0 {
        return Err(Error::Parameter(
            "quadrature order must be at least 1".into(),
        ));
    }
    let g = order as f64;
    let nodes = (1..=order)
        .map(|l| ((2 * l - 1) as f64 * std::f64::consts::PI / (2.0 * g)).cos())
        .collect();
    Ok(ChebyshevRule { order, nodes })
}

/// Affine image of `t ∈ [-1,1]` in the interval `(lo, hi)`; order preserving.
pub fn map_to_interval(t: f64, interval: (f64, f64)) -> f64 {
    let (lo, hi) = interval;
    0.5 * (lo + hi) + 0.5 * t * (hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_order_is_rejected() {
        assert!(matches!(chebyshev_rule(0), Err(Error::Parameter(_))));
    }

    #[test]
    fn small_rules_match_closed_forms() {
        let r1 = chebyshev_rule(1).unwrap();
        assert!(r1.nodes()[0].abs() < 1e-16);
        assert_eq!(r1.weight(), 1.0);

        let r2 = chebyshev_rule(2).unwrap();
        let s = 0.5 * std::f64::consts::SQRT_2;
        assert!((r2.nodes()[0] - s).abs() < 1e-15);
        assert!((r2.nodes()[1] + s).abs() < 1e-15);
        assert_eq!(r2.weight(), 0.5);

        let r3 = chebyshev_rule(3).unwrap();
        let h = 0.75f64.sqrt();
        assert!((r3.nodes()[0] - h).abs() < 1e-15);
        assert!(r3.nodes()[1].abs() < 1e-15);
        assert!((r3.nodes()[2] + h).abs() < 1e-15);
    }

    #[test]
    fn nodes_strictly_decreasing() {
        let r = chebyshev_rule(41).unwrap();
        for w in r.nodes().windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!((r.weight() * 41.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interval_map_values() {
        assert_eq!(map_to_interval(0.0, (0.0, 1.0)), 0.5);
        assert_eq!(map_to_interval(1.0, (-3.0, 7.0)), 7.0);
        assert_eq!(map_to_interval(-1.0, (-3.0, 7.0)), -3.0);
        let t = 0.5 * std::f64::consts::SQRT_2;
        assert!((map_to_interval(t, (0.0, 1.0)) - 0.8535533905932737).abs() < 1e-16);
    }

    /// Arcsine even moments are binom(2k,k)/4^k; odd moments vanish.
    fn arcsine_moment(p: u32) -> f64 {
        if p % 2 == 1 {
            return 0.0;
        }
        let k = p / 2;
        let mut binom = 1.0f64;
        for i in 0..k {
            binom *= (2 * k - i) as f64 / (i + 1) as f64;
        }
        binom / 4f64.powi(k as i32)
    }

    #[test]
    fn exact_for_polynomials_below_twice_order() {
        for order in [1usize, 2, 3, 5, 8, 13] {
            let rule = chebyshev_rule(order).unwrap();
            for p in 0..(2 * order as u32) {
                let q: f64 = rule
                    .nodes()
                    .iter()
                    .map(|&t| rule.weight() * t.powi(p as i32))
                    .sum();
                assert!(
                    (q - arcsine_moment(p)).abs() < 1e-13,
                    "order {order} degree {p}: {q} vs {}",
                    arcsine_moment(p)
                );
            }
        }
    }
}
