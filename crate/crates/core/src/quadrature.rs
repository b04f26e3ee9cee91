//! Gauss–Legendre rules and composite helpers.

use std::f64::consts::PI;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `panels` equal subintervals of `[a, b]`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive Gauss–Kronrod-free integration: composite Gauss–Legendre with
/// panel doubling until successive estimates agree to `rel_tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    rel_tol: f64,
    mut f: F,
) -> Option<f64> {
    let rule = GaussLegendre::new(20);
    let mut panels = 4;
    let mut prev = rule.integrate_composite(a, b, panels, &mut f);
    for _ in 0..14 {
        panels *= 2;
        let cur = rule.integrate_composite(a, b, panels, &mut f);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1e-300) {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let g = GaussLegendre::new(10);
        // degree 19
        let v = g.integrate(0.0, 1.0, |x| x.powi(19));
        assert!((v - 0.05).abs() < 1e-15);
        let s: f64 = g.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_rules_have_center_node() {
        let g = GaussLegendre::new(7);
        assert_eq!(g.nodes[3], 0.0);
        let v = g.integrate(-1.0, 1.0, |x| x.powi(12));
        assert!((v - 2.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_smooth_integrand() {
        let v = integrate_adaptive(0.0, PI, 1e-12, f64::sin).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }
}
