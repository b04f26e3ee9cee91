//! Finite-type convex domains and their pointwise geometry.
//!
//! The domain family is the superellipse `|x₁/a|^ω + |x₂/b|^ω ≤ 1` with even
//! `ω ≥ 2`, optionally rotated. Everything a rotated domain reports derives
//! from the base domain through `Rᵗ_θ`: the Gauss point is `R_θ x(R_θᵗ ξ)`,
//! the curvature is `K_{R_θᵗ ξ}` and the support function is `H(R_θᵗ ξ)`.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::jet::Jet2;
use crate::linalg::{Rotation, Sym2, Vec2};
use crate::quadrature::GaussLegendre;

/// Axis directions closer than this are treated as exact flat normals.
pub const FLAT_NORMAL_TOLERANCE: f64 = 1e-14;

/// Superellipse `{|x₁/a|^ω + |x₂/b|^ω ≤ 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superellipse {
    omega: u32,
    a: f64,
    b: f64,
}

impl Superellipse {
    pub fn new(omega: u32, a: f64, b: f64) -> Result<Self> {
        if omega < 2 || !omega.is_multiple_of(2) {
            return invalid(format!("omega must be an even integer >= 2, got {omega}"));
        }
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return invalid(format!("semi-axes must be positive, got ({a}, {b})"));
        }
        Ok(Self { omega, a, b })
    }

    /// Unit superellipse `|x₁|^ω + |x₂|^ω ≤ 1`.
    pub fn unit(omega: u32) -> Result<Self> {
        Self::new(omega, 1.0, 1.0)
    }

    pub fn disk() -> Self {
        Self { omega: 2, a: 1.0, b: 1.0 }
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn is_unit(&self) -> bool {
        self.a == 1.0 && self.b == 1.0
    }

    /// Exponent of the dual norm, `ω/(ω−1)`.
    fn dual_exponent(&self) -> f64 {
        let w = self.omega as f64;
        w / (w - 1.0)
    }

    /// `|x₁/a|^ω + |x₂/b|^ω`; the domain is the sublevel set `≤ 1`.
    pub fn gauge_power(&self, x: Vec2) -> f64 {
        let n = self.omega as i32;
        (x.x / self.a).powi(n) + (x.y / self.b).powi(n)
    }

    pub fn contains(&self, x: Vec2) -> bool {
        self.gauge_power(x) <= 1.0
    }

    /// Boundary point with exterior normal along `u` (closed form).
    pub fn gauss_point(&self, u: Vec2) -> Vec2 {
        let p = 1.0 / (self.omega as f64 - 1.0);
        let ua = (u.x * self.a).abs();
        let ub = (u.y * self.b).abs();
        let q = self.dual_exponent();
        let denom = (ua.powf(q) + ub.powf(q)).powf(1.0 / self.omega as f64);
        Vec2::new(
            self.a * u.x.signum() * ua.powf(p) / denom,
            self.b * u.y.signum() * ub.powf(p) / denom,
        )
    }

    /// Curvature of the boundary at the point with exterior normal `u`,
    /// from the implicit-curve formula for `|x₁/a|^ω + |x₂/b|^ω`.
    pub fn curvature_at_normal(&self, u: Vec2) -> f64 {
        let n = u.normalized();
        if self.omega >= 4
            && (n.x.abs() <= FLAT_NORMAL_TOLERANCE || n.y.abs() <= FLAT_NORMAL_TOLERANCE)
        {
            return 0.0;
        }
        let x = self.gauss_point(n);
        self.implicit_curvature(x)
    }

    /// Curvature at a boundary point `x` via
    /// `κ = (F_xx F_y² − 2F_xy F_x F_y + F_yy F_x²)/|∇F|³` (here `F_xy = 0`).
    pub fn implicit_curvature(&self, x: Vec2) -> f64 {
        let w = self.omega as i32;
        let wf = self.omega as f64;
        let an = self.a.powi(w);
        let bn = self.b.powi(w);
        let fx = wf * x.x.powi(w - 1) / an;
        let fy = wf * x.y.powi(w - 1) / bn;
        let fxx = wf * (wf - 1.0) * x.x.powi(w - 2) / an;
        let fyy = wf * (wf - 1.0) * x.y.powi(w - 2) / bn;
        let g2 = fx * fx + fy * fy;
        (fxx * fy * fy + fyy * fx * fx) / (g2 * g2.sqrt())
    }

    /// Support function as the dual norm `(|aξ₁|^p + |bξ₂|^p)^{1/p}`, `p = ω/(ω−1)`.
    pub fn support_dual_norm(&self, xi: Vec2) -> f64 {
        let p = self.dual_exponent();
        ((self.a * xi.x).abs().powf(p) + (self.b * xi.y).abs().powf(p)).powf(1.0 / p)
    }

    /// Support function evaluated on jets. Both arguments must have nonzero
    /// base values unless `ω = 2`.
    pub fn support_jet(&self, x: &Jet2, y: &Jet2) -> Jet2 {
        if self.omega == 2 {
            let xa = x.scale(self.a);
            let yb = y.scale(self.b);
            return (&xa * &xa + &yb * &yb).sqrt();
        }
        let p = self.dual_exponent();
        let ax = x.scale(self.a).abs().powf(p);
        let by = y.scale(self.b).abs().powf(p);
        (&ax + &by).powf(1.0 / p)
    }

    /// `4ab Γ(1+1/ω)² / Γ(1+2/ω)`.
    pub fn area(&self) -> f64 {
        use statrs::function::gamma::gamma;
        let w = self.omega as f64;
        4.0 * self.a * self.b * gamma(1.0 + 1.0 / w).powi(2) / gamma(1.0 + 2.0 / w)
    }

    /// Flat points: the four axis intersections for `ω ≥ 4`, none for `ω = 2`.
    pub fn flat_points(&self) -> Vec<FlatPoint> {
        if self.omega == 2 {
            return Vec::new();
        }
        [
            (Vec2::new(self.a, 0.0), Vec2::new(1.0, 0.0)),
            (Vec2::new(0.0, self.b), Vec2::new(0.0, 1.0)),
            (Vec2::new(-self.a, 0.0), Vec2::new(-1.0, 0.0)),
            (Vec2::new(0.0, -self.b), Vec2::new(0.0, -1.0)),
        ]
        .into_iter()
        .map(|(position, normal)| FlatPoint {
            position,
            normal,
            omega: self.omega,
        })
        .collect()
    }

    /// Quadrature nodes on the closed boundary (counterclockwise).
    ///
    /// The boundary is split into four graph arcs meeting where
    /// `|x₁/a| = |x₂/b|`: the right arc is `x₁ = a(1 − (x₂/b)^ω)^{1/ω}`, the top
    /// arc `x₂ = b(1 − (x₁/a)^ω)^{1/ω}`, and the other two follow by central
    /// symmetry. Each node carries the vector measure `n ds = (dx₂, −dx₁)`.
    pub fn boundary_nodes(&self, panels_per_arc: usize, rule: &GaussLegendre) -> BoundaryNodes {
        let s = 0.5f64.powf(1.0 / self.omega as f64);
        let cap = 4 * panels_per_arc * rule.len();
        let mut pos = Vec::with_capacity(cap);
        let mut nds = Vec::with_capacity(cap);
        let w = self.omega as i32;
        let inv = 1.0 / self.omega as f64;

        let mut push_arc = |span: f64, scale_dep: f64, scale_indep: f64, right: bool| {
            // dependent coordinate = scale_dep·(1 − (τ/scale_indep)^ω)^{1/ω}
            let h = 2.0 * span / panels_per_arc as f64;
            for p in 0..panels_per_arc {
                let lo = -span + h * p as f64;
                for (tau, wt) in rule.mapped(lo, lo + h) {
                    let r = (tau / scale_indep).powi(w);
                    let one_minus = 1.0 - r;
                    let g = scale_dep * one_minus.powf(inv);
                    let dg = -scale_dep * one_minus.powf(inv - 1.0) * tau.powi(w - 1)
                        / scale_indep.powi(w);
                    if right {
                        pos.push(Vec2::new(g, tau));
                        nds.push(Vec2::new(wt, -dg * wt));
                    } else {
                        pos.push(Vec2::new(tau, g));
                        nds.push(Vec2::new(-dg * wt, wt));
                    }
                }
            }
        };
        push_arc(self.b * s, self.a, self.b, true);
        push_arc(self.a * s, self.b, self.a, false);
        let n = pos.len();
        for i in 0..n {
            pos.push(-pos[i]);
            nds.push(-nds[i]);
        }
        BoundaryNodes { pos, nds }
    }

    /// Parameter spans of the right and top arcs and an upper bound on their
    /// arc lengths.
    pub fn arc_length_bounds(&self) -> (f64, f64) {
        let s = 0.5f64.powf(1.0 / self.omega as f64);
        let right = 2.0 * self.b * s * (1.0 + (self.a / self.b).powi(2)).sqrt();
        let top = 2.0 * self.a * s * (1.0 + (self.b / self.a).powi(2)).sqrt();
        (right, top)
    }

    pub fn perimeter(&self) -> f64 {
        let rule = GaussLegendre::new(20);
        let nodes = self.boundary_nodes(64, &rule);
        nodes.nds.iter().map(|v| v.norm()).sum()
    }
}

impl fmt::Display for Superellipse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "superellipse:omega={},a={},b={}", self.omega, self.a, self.b)
    }
}

/// Boundary quadrature nodes: positions and vector weights `n ds`.
#[derive(Debug, Clone)]
pub struct BoundaryNodes {
    pub pos: Vec<Vec2>,
    pub nds: Vec<Vec2>,
}

impl BoundaryNodes {
    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }
}

/// A point of `∂B_θ` together with its frame and curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub position: Vec2,
    /// Unit exterior normal.
    pub normal: Vec2,
    /// Unit tangent; `{tangent, −normal}` is positively oriented.
    pub tangent: Vec2,
    pub curvature: f64,
}

/// A boundary point of vanishing curvature and its type `ω_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatPoint {
    pub position: Vec2,
    pub normal: Vec2,
    pub omega: u32,
}

/// Frequency-direction classes used when splitting the Poisson sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Both antipodal curvatures exceed `δ`.
    D1,
    /// Some antipodal curvature is at most `δ`.
    D2,
}

/// A superellipse rotated by `θ`: `B_θ = R_θ B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedDomain {
    base: Superellipse,
    theta: f64,
    rot: Rotation,
}

impl RotatedDomain {
    pub fn new(base: Superellipse, theta: f64) -> Self {
        Self {
            base,
            theta,
            rot: Rotation::new(theta),
        }
    }

    pub fn base(&self) -> &Superellipse {
        &self.base
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rot
    }

    pub fn omega(&self) -> u32 {
        self.base.omega
    }

    /// Same domain rotated by a different angle.
    pub fn with_theta(&self, theta: f64) -> Self {
        Self::new(self.base, theta)
    }

    /// Image under `(x₁, x₂) ↦ (x₂, x₁)`: `S R_θ B = R_{−θ} (S B)`.
    pub fn transposed(&self) -> Self {
        let (a, b) = self.base.semi_axes();
        let base = Superellipse {
            omega: self.base.omega,
            a: b,
            b: a,
        };
        Self::new(base, -self.theta)
    }

    fn unit_base_direction(&self, xi: Vec2) -> Result<Vec2> {
        if xi.is_zero() || !xi.is_finite() {
            return invalid("direction must be a finite nonzero vector");
        }
        Ok(self.rot.apply_inverse(xi).normalized())
    }

    /// Gauge power of `R_θᵗ x`; `x ∈ tB_θ` iff this is `≤ t^ω`.
    pub fn gauge_power(&self, x: Vec2) -> f64 {
        self.base.gauge_power(self.rot.apply_inverse(x))
    }

    /// `x^θ(ξ) = R_θ x(R_θᵗ ξ)` with its normal, tangent and curvature.
    pub fn gauss_point(&self, xi: Vec2) -> Result<BoundaryPoint> {
        let u = self.unit_base_direction(xi)?;
        let position = self.rot.apply(self.base.gauss_point(u));
        let normal = xi.normalized();
        Ok(BoundaryPoint {
            position,
            normal,
            tangent: normal.perp(),
            curvature: self.base.curvature_at_normal(u),
        })
    }

    /// `K^θ_ξ = K_{R_θᵗ ξ}`; positively homogeneous of degree 0.
    pub fn curvature(&self, xi: Vec2) -> Result<f64> {
        let u = self.unit_base_direction(xi)?;
        Ok(self.base.curvature_at_normal(u))
    }

    /// `H_θ(ξ) = ⟨ξ, x^θ(ξ)⟩`.
    pub fn support(&self, xi: Vec2) -> Result<f64> {
        let u = self.unit_base_direction(xi)?;
        let x = self.rot.apply(self.base.gauss_point(u));
        Ok(xi.dot(x))
    }

    /// `H_θ` on jets: `H(R_θᵗ (x, y))`.
    pub fn support_jet(&self, x: &Jet2, y: &Jet2) -> Jet2 {
        let (c, s) = (self.rot.cos, self.rot.sin);
        let bx = &x.scale(c) + &y.scale(s);
        let by = &y.scale(c) - &x.scale(s);
        self.base.support_jet(&bx, &by)
    }

    /// Central-difference Hessian of `H_θ` at `xi`.
    ///
    /// `step = None` uses `h = 1e−4·max(K_ξ, 0.1)·|ξ|`. Directions with
    /// curvature below `k_floor` are rejected since the Hessian blows up at
    /// flat normals.
    pub fn support_hessian(&self, xi: Vec2, step: Option<f64>, k_floor: f64) -> Result<Sym2> {
        let k = self.curvature(xi)?;
        if k <= k_floor {
            return Err(Error::OutOfRange(format!(
                "curvature {k:e} at direction is below floor {k_floor:e}"
            )));
        }
        let r = xi.norm();
        let h = step.unwrap_or(1e-4 * k.max(0.1) * r);
        // The truncation error scales like h²·K⁻⁵ and rounding like ε/h².
        if !(h > 1e-7 * r && h < 0.05 * k * k * r) {
            return Err(Error::PrecisionFailure(format!(
                "step {h:e} unsuitable for curvature scale {k:e}"
            )));
        }
        let f = |dx: f64, dy: f64| self.support(xi + Vec2::new(dx, dy));
        let c = f(0.0, 0.0)?;
        let xx = (f(h, 0.0)? - 2.0 * c + f(-h, 0.0)?) / (h * h);
        let yy = (f(0.0, h)? - 2.0 * c + f(0.0, -h)?) / (h * h);
        let xy = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
        Ok(Sym2 { xx, xy, yy })
    }

    /// Flat points of `∂B_θ` (rotated axis points of the base).
    pub fn flat_points(&self) -> Vec<FlatPoint> {
        self.base
            .flat_points()
            .into_iter()
            .map(|fp| FlatPoint {
                position: self.rot.apply(fp.position),
                normal: self.rot.apply(fp.normal),
                omega: fp.omega,
            })
            .collect()
    }

    /// Largest curvature over all normal directions.
    pub fn max_curvature(&self) -> f64 {
        let n = 2048;
        let (mut best, mut best_phi) = (0.0, 0.0);
        for i in 0..n {
            let phi = std::f64::consts::TAU * i as f64 / n as f64;
            let k = self.base.curvature_at_normal(Vec2::from_angle(phi));
            if k > best {
                best = k;
                best_phi = phi;
            }
        }
        let h = std::f64::consts::TAU / n as f64;
        let f = |phi: f64| -self.base.curvature_at_normal(Vec2::from_angle(phi));
        let phi = golden_min(f, best_phi - h, best_phi + h, 1e-12);
        best.max(self.base.curvature_at_normal(Vec2::from_angle(phi)))
    }

    /// Half-width of the normal-angle neighborhood of a flat point: the arc on
    /// which `K ≤ K_max / 2`.
    pub fn flat_neighborhood(&self, flat: &FlatPoint) -> Result<f64> {
        if self.base.omega == 2 {
            return invalid("disk-type domain has no flat points");
        }
        let half = 0.5 * self.max_curvature();
        let n0 = flat.normal.angle();
        let k_at = |phi: f64| self.curvature(Vec2::from_angle(n0 + phi)).unwrap_or(0.0);
        let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_4);
        if k_at(hi) < half {
            // non-unit axes shift the maximum; fall back to the first crossing on a grid
            let mut step = hi;
            while k_at(step) < half && step < std::f64::consts::FRAC_PI_2 {
                step += 0.01;
            }
            hi = step;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if k_at(mid) <= half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// `𝔄 / K^{(ω−1)/(ω−2)}` at the boundary point whose normal makes angle
    /// `phi` with the normal of `flat`.
    pub fn angle_curvature_ratio(&self, flat: &FlatPoint, phi: f64) -> Result<f64> {
        let phi_max = self.flat_neighborhood(flat)?;
        if !(phi > 0.0 && phi < phi_max) {
            return Err(Error::OutOfRange(format!(
                "phi = {phi} outside (0, {phi_max})"
            )));
        }
        let w = flat.omega as f64;
        let k = self.curvature(Vec2::from_angle(flat.normal.angle() + phi))?;
        Ok(phi / k.powf((w - 1.0) / (w - 2.0)))
    }

    /// `δ_ξ = min(K_ξ, K_{−ξ})`.
    pub fn delta_xi(&self, xi: Vec2) -> Result<f64> {
        Ok(self.curvature(xi)?.min(self.curvature(-xi)?))
    }

    pub fn region_classify(&self, k: Vec2, delta: f64) -> Result<Region> {
        if !(delta > 0.0) {
            return invalid("delta must be positive");
        }
        Ok(if self.delta_xi(k)? <= delta {
            Region::D2
        } else {
            Region::D1
        })
    }

    /// Largest `r` with `B(0, r) ⊂ B_θ`: the minimum of `H` over unit directions.
    pub fn inradius(&self) -> f64 {
        let (a, b) = self.base.semi_axes();
        // the minimum of the dual norm over the unit circle sits on an axis
        // for ω ≥ 2 (the ℓ^p norm with p ≤ 2 dominates the Euclidean one)
        a.min(b)
    }

    /// Half-height of `B_θ`: `H_θ(e₂)`.
    pub fn vertical_extent(&self) -> f64 {
        self.base
            .support_dual_norm(self.rot.apply_inverse(Vec2::new(0.0, 1.0)))
    }

    /// Half-width of `B_θ`: `H_θ(e₁)`.
    pub fn horizontal_extent(&self) -> f64 {
        self.base
            .support_dual_norm(self.rot.apply_inverse(Vec2::new(1.0, 0.0)))
    }
}

impl fmt::Display for RotatedDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},theta={}", self.base, self.theta)
    }
}

/// Golden-section minimization on `[a, b]`.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn dom(omega: u32, theta: f64) -> RotatedDomain {
        RotatedDomain::new(Superellipse::unit(omega).unwrap(), theta)
    }

    #[test]
    fn rejects_bad_omega() {
        assert!(Superellipse::unit(3).is_err());
        assert!(Superellipse::unit(0).is_err());
        assert!(Superellipse::new(4, -1.0, 1.0).is_err());
    }

    #[test]
    fn disk_gauss_point() {
        let p = dom(2, 0.0).gauss_point(Vec2::new(1.0, 0.0)).unwrap();
        assert!((p.position - Vec2::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.normal - Vec2::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.curvature - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quartic_gauss_point_on_diagonal() {
        let p = dom(4, 0.0)
            .gauss_point(Vec2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2))
            .unwrap();
        let want = 2f64.powf(-0.25);
        assert!((p.position.x - want).abs() < 1e-14);
        assert!((p.position.y - want).abs() < 1e-14);
    }

    #[test]
    fn quartic_curvature_values() {
        let d = dom(4, 0.0);
        assert_eq!(d.curvature(Vec2::new(1.0, 0.0)).unwrap(), 0.0);
        let k = d.curvature(Vec2::new(1.0, 1.0)).unwrap();
        assert!((k - 1.5 * 2f64.powf(0.75)).abs() < 1e-13, "{k}");
    }

    #[test]
    fn zero_direction_rejected() {
        let d = dom(4, 0.3);
        assert!(d.gauss_point(Vec2::default()).is_err());
        assert!(d.support(Vec2::default()).is_err());
        assert!(d.curvature(Vec2::default()).is_err());
    }

    #[test]
    fn support_values() {
        let d = dom(4, 0.0);
        assert!((d.support(Vec2::new(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((d.support(Vec2::new(1.0, 1.0)).unwrap() - 2f64.powf(0.75)).abs() < 1e-14);
        let disk = dom(2, 1.1);
        let xi = Vec2::new(0.3, -2.0);
        assert!((disk.support(xi).unwrap() - xi.norm()).abs() < 1e-14);
    }

    #[test]
    fn support_matches_dual_norm() {
        let b = Superellipse::new(6, 1.3, 0.7).unwrap();
        let d = RotatedDomain::new(b, 0.4);
        for i in 0..50 {
            let xi = Vec2::from_angle(0.13 * i as f64) * 1.7;
            let direct = d.support(xi).unwrap();
            let dual = b.support_dual_norm(d.rotation().apply_inverse(xi));
            assert!((direct - dual).abs() < 1e-13 * dual);
        }
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let d0 = dom(4, 0.0);
        let d1 = dom(4, FRAC_PI_2);
        let r = Rotation::new(FRAC_PI_2);
        let xi = Vec2::new(0.6, 0.8);
        let p1 = d1.gauss_point(xi).unwrap().position;
        let p0 = r.apply(d0.gauss_point(r.apply_inverse(xi)).unwrap().position);
        assert!((p1 - p0).norm() < 1e-14);
    }

    #[test]
    fn flat_point_lists() {
        assert!(Superellipse::unit(2).unwrap().flat_points().is_empty());
        let fp = Superellipse::unit(6).unwrap().flat_points();
        assert_eq!(fp.len(), 4);
        assert!(fp.iter().all(|p| p.omega == 6));
        let d = dom(4, 0.0);
        for p in Superellipse::unit(4).unwrap().flat_points() {
            assert_eq!(d.curvature(p.normal).unwrap(), 0.0);
            assert!((d.gauge_power(p.position) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_and_regions() {
        let d = dom(4, 0.0);
        assert_eq!(d.delta_xi(Vec2::new(1.0, 0.0)).unwrap(), 0.0);
        let dd = d.delta_xi(Vec2::new(1.0, 1.0)).unwrap();
        assert!((dd - 2.5227).abs() < 1e-4);
        assert_eq!(d.region_classify(Vec2::new(1.0, 0.0), 0.3).unwrap(), Region::D2);
        assert_eq!(d.region_classify(Vec2::new(1.0, 1.0), 1.0).unwrap(), Region::D1);
        assert_eq!(d.region_classify(Vec2::new(2.0, 2.0), 1.0).unwrap(), Region::D1);
        let disk = dom(2, 0.0);
        assert_eq!(disk.region_classify(Vec2::new(3.0, -1.0), 0.5).unwrap(), Region::D1);
        assert!(disk.region_classify(Vec2::new(3.0, -1.0), 0.0).is_err());
    }

    #[test]
    fn angle_curvature_rejected_without_flat_points() {
        let disk = dom(2, 0.0);
        let fake = FlatPoint {
            position: Vec2::new(1.0, 0.0),
            normal: Vec2::new(1.0, 0.0),
            omega: 2,
        };
        assert!(disk.angle_curvature_ratio(&fake, 0.01).is_err());
        let d = dom(4, 0.0);
        let fp = d.flat_points()[0];
        assert!(d.angle_curvature_ratio(&fp, 1.0).is_err());
        assert!(d.angle_curvature_ratio(&fp, 0.01).is_ok());
    }

    #[test]
    fn boundary_nodes_give_area_and_perimeter() {
        let rule = GaussLegendre::new(20);
        for omega in [2, 4, 8] {
            let b = Superellipse::new(omega, 1.2, 0.9).unwrap();
            let nodes = b.boundary_nodes(16, &rule);
            // Green: area = ½∮⟨x, n⟩ds
            let area: f64 = 0.5 * nodes.pos.iter().zip(&nodes.nds).map(|(p, w)| p.dot(*w)).sum::<f64>();
            assert!((area - b.area()).abs() < 1e-12, "omega {omega}: {area} vs {}", b.area());
            for p in &nodes.pos {
                assert!((b.gauge_power(*p) - 1.0).abs() < 1e-13);
            }
        }
        let disk = Superellipse::disk();
        assert!((disk.perimeter() - std::f64::consts::TAU).abs() < 1e-12);
    }
}
