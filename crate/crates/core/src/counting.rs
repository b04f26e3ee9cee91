//! Exact lattice counts of `tB_θ` and the remainder `P(t) = #(tB_θ ∩ ℤ²) − area·t²`.
//!
//! `tB_θ` is closed. A lattice point `k` is inside iff `g(R_θᵗ k) ≤ t^ω`,
//! where `g` is the gauge power of the base superellipse. Floating-point
//! classifications are certified by a margin: every lattice point adjacent to
//! a chord endpoint must satisfy `|g(k) − t^ω| ≥ η·t^{ω−1}` with
//! [`MARGIN_THRESHOLD`] as `η`; otherwise the result is flagged ambiguous.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::{golden_min, RotatedDomain};
use crate::linalg::Vec2;

/// Certification threshold `η` on the normalized margin `|g(k) − t^ω| / t^{ω−1}`.
pub const MARGIN_THRESHOLD: f64 = 1e-9;

/// Size of the perturbation applied to `t` when a count is ambiguous.
pub const RETRY_PERTURBATION: f64 = 1e-7;

/// Largest `t` accepted by the quadratic-cost brute-force counter.
pub const BRUTE_FORCE_LIMIT: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountResult {
    pub t: f64,
    pub count: u64,
    /// `area(B)·t²`
    pub area_term: f64,
    /// `count − area_term`
    pub remainder: f64,
    /// Smallest normalized margin among certified lattice points
    /// (`+∞` on the exact integer path).
    pub min_margin: f64,
    pub ambiguous: bool,
}

impl CountResult {
    fn new(domain: &RotatedDomain, t: f64, count: u64, min_margin: f64) -> Self {
        let area_term = domain.base().area() * t * t;
        Self {
            t,
            count,
            area_term,
            remainder: count as f64 - area_term,
            min_margin,
            ambiguous: min_margin < MARGIN_THRESHOLD,
        }
    }

    /// CSV row `omega,theta,t,count,area_term,remainder,ambiguous`.
    pub fn csv_row(&self, domain: &RotatedDomain) -> String {
        format!(
            "{},{:.16e},{:.16e},{},{:.16e},{:.16e},{}",
            domain.omega(),
            domain.theta(),
            self.t,
            self.count,
            self.area_term,
            self.remainder,
            self.ambiguous
        )
    }
}

pub const CSV_HEADER: &str = "omega,theta,t,count,area_term,remainder,ambiguous";

/// Rotation angle reduced by the symmetries of the base domain. Central
/// symmetry gives period π; equal semi-axes give π/2; the disk ignores θ.
fn canonical(domain: &RotatedDomain) -> RotatedDomain {
    let (a, b) = domain.base().semi_axes();
    let period = if a == b {
        if domain.omega() == 2 {
            return domain.with_theta(0.0);
        }
        FRAC_PI_2
    } else {
        PI
    };
    let th = domain.theta().rem_euclid(period);
    domain.with_theta(if th == period { 0.0 } else { th })
}

/// Exact integer count for `θ = 0`, unit axes, integer `t`:
/// `#{n : |n₁|^ω + |n₂|^ω ≤ t^ω}`. `None` if the path does not apply.
fn count_integer_path(domain: &RotatedDomain, t: f64) -> Option<u64> {
    if domain.theta() != 0.0 || !domain.base().is_unit() || t.fract() != 0.0 || t > 1e9 {
        return None;
    }
    let n = t as u64;
    let w = domain.omega();
    let total = (n as u128).checked_pow(w)?;
    let mut count: u64 = 0;
    for n2 in 0..=n {
        let rest = total - (n2 as u128).pow(w);
        let r = integer_root(rest, w);
        let row = 2 * r + 1;
        count += if n2 == 0 { row } else { 2 * row };
    }
    Some(count)
}

/// `⌊x^{1/w}⌋` for a wide integer.
fn integer_root(x: u128, w: u32) -> u64 {
    let mut r = (x as f64).powf(1.0 / w as f64) as u64;
    while r > 0 && (r as u128).checked_pow(w).is_none_or(|p| p > x) {
        r -= 1;
    }
    while ((r + 1) as u128).checked_pow(w).is_some_and(|p| p <= x) {
        r += 1;
    }
    r
}

/// Chord solver for the rows of a rotated domain.
struct RowSolver {
    domain: RotatedDomain,
    /// `argmin_X g(R_θᵗ(X, 1))`; the row minimizer is `slope·Y`.
    slope: f64,
    x_max: f64,
    axis_aligned: bool,
}

impl RowSolver {
    fn new(domain: RotatedDomain) -> Self {
        let x_max = domain.horizontal_extent();
        let axis_aligned = domain.theta() == 0.0;
        let slope = if axis_aligned {
            0.0
        } else {
            let f = |x: f64| domain.gauge_power(Vec2::new(x, 1.0));
            let span = 4.0 * x_max / domain.vertical_extent();
            golden_min(f, -span, span, 1e-14)
        };
        Self {
            domain,
            slope,
            x_max,
            axis_aligned,
        }
    }

    /// Right end `X` of the chord `{X : g(R_θᵗ(X, Y)) ≤ 1}` (unit scale).
    fn right_end(&self, y: f64) -> f64 {
        let w = self.domain.omega() as i32;
        if self.axis_aligned {
            let (a, b) = self.domain.base().semi_axes();
            let r = 1.0 - (y / b).abs().powi(w);
            return if r <= 0.0 { 0.0 } else { a * r.powf(1.0 / w as f64) };
        }
        let rot = *self.domain.rotation();
        let (a, b) = self.domain.base().semi_axes();
        let wf = w as f64;
        // φ(X) = g(R_θᵗ(X, Y)) − 1 and its derivative along X
        let phi = |x: f64| {
            let u = rot.apply_inverse(Vec2::new(x, y));
            let (ua, ub) = (u.x / a, u.y / b);
            let val = ua.powi(w) + ub.powi(w) - 1.0;
            let der = wf * (ua.powi(w - 1) * rot.cos / a - ub.powi(w - 1) * rot.sin / b);
            (val, der)
        };
        let mut lo = self.slope * y;
        let mut hi = self.x_max * (1.0 + 1e-12) + 1e-12;
        if phi(lo).0 > 0.0 {
            return lo;
        }
        let mut x = hi;
        for _ in 0..200 {
            let (v, d) = phi(x);
            if v > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = if d > 0.0 { x - v / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-15 * x.abs().max(1.0) || hi - lo <= 1e-15 * hi.abs().max(1.0)
            {
                return next;
            }
            x = next;
        }
        x
    }
}

/// Exact lattice count of the closed dilate `tB_θ` with a certified margin.
pub fn count_exact(domain: &RotatedDomain, t: f64) -> Result<CountResult> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be >= 1, got {t}")));
    }
    let dom = canonical(domain);
    if let Some(c) = count_integer_path(&dom, t) {
        return Ok(CountResult::new(domain, t, c, f64::INFINITY));
    }
    // scan the shorter axis
    let scan = if dom.horizontal_extent() < dom.vertical_extent() {
        dom.transposed()
    } else {
        dom
    };
    let solver = RowSolver::new(scan);
    let w = scan.omega() as i32;
    let level = t.powi(w);
    let norm = t.powi(w - 1);
    let n_top = (t * scan.vertical_extent()).floor() as i64;

    // right[i] = largest lattice abscissa inside row n₂ = i − n_top
    let mut right = Vec::with_capacity((2 * n_top + 1) as usize);
    let mut min_margin = f64::INFINITY;
    for n2 in -n_top..=n_top {
        let y = n2 as f64;
        let guess = (t * solver.right_end(y / t)).floor();
        let g = |x: f64| scan.gauge_power(Vec2::new(x, y));
        // g increases along the row to the right of the row minimizer, so
        // c = ⌊right end⌋ iff c + 1 is outside there and c is inside or left of it
        let x_min = t * solver.slope * (y / t);
        let mut c = guess;
        while c + 1.0 <= x_min || g(c + 1.0) <= level {
            c += 1.0;
        }
        while c >= x_min && g(c) > level {
            c -= 1.0;
        }
        for x in [c, c + 1.0] {
            if x >= x_min {
                min_margin = min_margin.min((g(x) - level).abs() / norm);
            }
        }
        right.push(c as i64);
    }
    let mut count: i64 = 0;
    let len = right.len();
    for i in 0..len {
        // left end of row n₂ is minus the right end of row −n₂
        let row = right[i] + right[len - 1 - i] + 1;
        count += row.max(0);
    }
    Ok(CountResult::new(domain, t, count as u64, min_margin))
}

/// `count_exact` with retries: an ambiguous `t` is perturbed by
/// `RETRY_PERTURBATION` up to `max_retries` times.
pub fn count_certified(domain: &RotatedDomain, t: f64, max_retries: usize) -> Result<CountResult> {
    let mut tt = t;
    for _ in 0..=max_retries {
        let r = count_exact(domain, tt)?;
        if !r.ambiguous {
            return Ok(r);
        }
        tt += RETRY_PERTURBATION;
    }
    Err(Error::AmbiguousBoundary {
        t,
        margin: count_exact(domain, tt)?.min_margin,
    })
}

/// Quadratic-cost oracle: scans the bounding box with the same membership
/// rule and margin policy as [`count_exact`].
pub fn count_brute(domain: &RotatedDomain, t: f64) -> Result<CountResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if t > BRUTE_FORCE_LIMIT {
        return Err(Error::Refused(format!(
            "brute force limited to t <= {BRUTE_FORCE_LIMIT}, got {t}"
        )));
    }
    let dom = canonical(domain);
    let w = dom.omega();
    let exact = dom.theta() == 0.0 && dom.base().is_unit() && t.fract() == 0.0;
    let nx = (t * dom.horizontal_extent()).ceil() as i64 + 1;
    let ny = (t * dom.vertical_extent()).ceil() as i64 + 1;
    let level = t.powi(w as i32);
    let norm = t.powi(w as i32 - 1);
    let mut count = 0u64;
    let mut min_margin = f64::INFINITY;
    for n2 in -ny..=ny {
        for n1 in -nx..=nx {
            if exact {
                let lhs = (n1.unsigned_abs() as u128).pow(w) + (n2.unsigned_abs() as u128).pow(w);
                if lhs <= (t as u128).pow(w) {
                    count += 1;
                }
                continue;
            }
            let g = dom.gauge_power(Vec2::new(n1 as f64, n2 as f64));
            if g <= level {
                count += 1;
            }
            min_margin = min_margin.min((g - level).abs() / norm);
        }
    }
    Ok(CountResult::new(domain, t, count, min_margin))
}

/// Remainder `P_{B_θ}(t)`; identical to [`count_exact`], which already
/// carries the area term.
pub fn remainder(domain: &RotatedDomain, t: f64) -> Result<CountResult> {
    count_exact(domain, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Superellipse;

    fn dom(omega: u32, theta: f64) -> RotatedDomain {
        RotatedDomain::new(Superellipse::unit(omega).unwrap(), theta)
    }

    #[test]
    fn disk_small_counts() {
        assert_eq!(count_brute(&dom(2, 0.0), 1.0).unwrap().count, 5);
        assert_eq!(count_exact(&dom(2, 0.0), 1.0).unwrap().count, 5);
        assert_eq!(count_exact(&dom(4, 0.0), 1.0).unwrap().count, 5);
        assert_eq!(count_brute(&dom(4, 0.0), 1.0).unwrap().count, 5);
    }

    #[test]
    fn disk_radius_ten() {
        // independent enumeration of n₁² + n₂² ≤ 100
        let mut want = 0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if a * a + b * b <= 100 {
                    want += 1;
                }
            }
        }
        assert_eq!(want, 317);
        let r = count_exact(&dom(2, 0.0), 10.0).unwrap();
        assert_eq!(r.count, 317);
        assert!((r.remainder - (317.0 - 100.0 * PI)).abs() < 1e-10);
        // rotating the disk changes nothing
        assert_eq!(count_exact(&dom(2, 0.77), 10.0).unwrap().count, 317);
    }

    #[test]
    fn integer_root_edges() {
        assert_eq!(integer_root(16, 4), 2);
        assert_eq!(integer_root(15, 4), 1);
        assert_eq!(integer_root(0, 6), 0);
        assert_eq!(integer_root(u64::MAX as u128, 2), 4294967295);
    }

    #[test]
    fn axis_points_counted_for_integer_t() {
        let d = dom(4, 0.0);
        let r = count_exact(&d, 7.0).unwrap();
        let r_minus = count_exact(&d, 7.0 - 1e-9).unwrap();
        assert!(r.count >= r_minus.count + 4);
        assert!(!r.ambiguous);
    }

    #[test]
    fn rejects_small_t_and_brute_guard() {
        assert!(count_exact(&dom(4, 0.0), 0.5).is_err());
        assert!(matches!(
            count_brute(&dom(4, 0.0), 2500.0),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn agrees_with_brute_on_sample() {
        for omega in [2, 4, 6] {
            for theta in [0.0, 0.3, 1.0, 2.399] {
                let d = dom(omega, theta);
                for t in [1.5, 3.0, 7.25, 19.5] {
                    let e = count_certified(&d, t, 5).unwrap();
                    let b = count_brute(&d, e.t).unwrap();
                    assert_eq!(e.count, b.count, "omega {omega} theta {theta} t {t}");
                }
            }
        }
    }

    #[test]
    fn quarter_turn_symmetry() {
        let d0 = dom(4, 0.41);
        let d1 = dom(4, 0.41 + FRAC_PI_2);
        for t in [5.3, 17.9, 40.1] {
            assert_eq!(
                count_exact(&d0, t).unwrap().count,
                count_exact(&d1, t).unwrap().count
            );
        }
    }

    #[test]
    fn non_unit_axes_match_brute() {
        let b = Superellipse::new(4, 1.3, 0.6).unwrap();
        for theta in [0.0, 0.5, 2.0] {
            let d = RotatedDomain::new(b, theta);
            for t in [2.5, 11.1, 30.7] {
                let e = count_certified(&d, t, 5).unwrap();
                assert_eq!(e.count, count_brute(&d, e.t).unwrap().count);
            }
        }
    }

    #[test]
    fn csv_row_shape() {
        let d = dom(4, 0.0);
        let r = count_exact(&d, 3.5).unwrap();
        let row = r.csv_row(&d);
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("4,"));
    }
}
