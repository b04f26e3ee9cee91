//! Mollified lattice counts by truncated Poisson summation.
//!
//! `N_{ε,θ}(t) = Σ_k (χ_{tB_θ} ∗ ρ_ε)(k) = t²Σ_k χ̂_{B_θ}(tk) ρ̂(εk)`, where
//! `ρ_ε(y) = ε^{−2}ρ(y/ε)` and `ρ` is the normalized bump
//! `exp(−1/(1 − |y|²))` on the unit disk. Since `ρ_ε` is supported in
//! `B(0, ε) ⊂ C₁εB_θ`, the mollified counts at `t ∓ C₁ε` bracket the exact
//! count.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::counting::count_certified;
use crate::error::{invalid, Error, Result};
use crate::fourier::{ft_asymptotic, LatticeTransform};
use crate::geometry::{golden_min, RotatedDomain};
use crate::linalg::Vec2;
use crate::quadrature::GaussLegendre;
use crate::stats::least_squares;

/// Spacing of the radial `ρ̂` table.
const TABLE_STEP: f64 = 0.01;
/// End of the radial table; beyond it a fitted `A·exp(−c√s)` envelope is used.
const TABLE_END: f64 = 80.0;

/// Required accuracy of the truncated sum: `tail_bound ≤ TAIL_FACTOR·t^{1/2}`.
pub const TAIL_FACTOR: f64 = 1e-6;

/// Largest admissible truncation radius.
pub const K_MAX_CAP: usize = 2000;

/// Curvature threshold for the asymptotic `χ̂` path.
pub const ASYMPTOTIC_DELTA: f64 = 0.5;
/// Smallest `t|k|` for the asymptotic `χ̂` path.
pub const ASYMPTOTIC_MIN_FREQUENCY: f64 = 50.0;

fn bump_profile(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

/// The radial mollifier with its tabulated Fourier transform.
#[derive(Debug, Clone)]
pub struct Mollifier {
    /// `1/∫exp(−1/(1−|y|²))dy`
    norm: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    /// Decreasing envelope `sup_{s′ ≥ s}|ρ̂(s′)|` on the table grid.
    envelope: Vec<f64>,
    tail_a: f64,
    tail_c: f64,
}

impl Mollifier {
    /// The shared instance (built once, then read-only).
    pub fn standard() -> &'static Mollifier {
        static CELL: OnceLock<Mollifier> = OnceLock::new();
        CELL.get_or_init(Mollifier::build)
    }

    fn build() -> Self {
        // Abel projection P(x) = ∫ρ(x, y)dy, then ρ̂(s) = 2∫₀¹ P(x)cos(2πsx)dx
        let rule = GaussLegendre::new(20);
        let mut xs = Vec::new();
        let mut px = Vec::new();
        let panels = 64;
        for p in 0..panels {
            let lo = p as f64 / panels as f64;
            for (x, w) in rule.mapped(lo, lo + 1.0 / panels as f64) {
                let ymax = (1.0 - x * x).sqrt();
                let proj = 2.0
                    * rule.integrate_composite(0.0, ymax, 32, |y| bump_profile(x * x + y * y));
                xs.push(x);
                px.push(2.0 * w * proj);
            }
        }
        let mass: f64 = px.iter().sum();
        let norm = 1.0 / mass;
        let n = (TABLE_END / TABLE_STEP).round() as usize + 1;
        let mut values = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for i in 0..n {
            let s = i as f64 * TABLE_STEP;
            let (mut v, mut d) = (0.0, 0.0);
            for (x, w) in xs.iter().zip(&px) {
                let (sn, cs) = (TAU * s * x).sin_cos();
                v += w * cs;
                d -= w * TAU * x * sn;
            }
            values.push(v * norm);
            slopes.push(d * norm);
        }
        let mut envelope = vec![0.0; n];
        let mut run = 0.0f64;
        for i in (0..n).rev() {
            run = run.max(values[i].abs());
            envelope[i] = run;
        }
        // fit log env = ln A − c√s on [40, 80], then raise A to dominate the fit range
        let (mut fx, mut fy) = (Vec::new(), Vec::new());
        for i in (4000..n).step_by(50) {
            fx.push((i as f64 * TABLE_STEP).sqrt());
            fy.push(envelope[i].ln());
        }
        let fit = least_squares(&fx, &fy).expect("envelope fit");
        let tail_c = -fit.slope;
        let tail_a = (4000..n)
            .map(|i| envelope[i] * (tail_c * (i as f64 * TABLE_STEP).sqrt()).exp())
            .fold(0.0, f64::max);
        Self {
            norm,
            values,
            slopes,
            envelope,
            tail_a,
            tail_c,
        }
    }

    /// `ρ(y)`
    pub fn rho(&self, y: Vec2) -> f64 {
        self.norm * bump_profile(y.dot(y))
    }

    /// `ρ̂(s)` for the radius `s = |ξ|`, by cubic Hermite interpolation of the
    /// table (values and derivatives); zero beyond the table.
    pub fn rho_hat(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= TABLE_END {
            return 0.0;
        }
        let u = s / TABLE_STEP;
        let i = (u.floor() as usize).min(self.values.len() - 2);
        let tau = u - i as f64;
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * TABLE_STEP, self.slopes[i + 1] * TABLE_STEP);
        let t2 = tau * tau;
        let t3 = t2 * tau;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0
            + (t3 - 2.0 * t2 + tau) * m0
            + (-2.0 * t3 + 3.0 * t2) * p1
            + (t3 - t2) * m1
    }

    /// Nonincreasing majorant of `|ρ̂|` at radius `s`.
    pub fn envelope(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= TABLE_END {
            return self.tail_a * (-self.tail_c * s.sqrt()).exp();
        }
        self.envelope[(s / TABLE_STEP).floor() as usize]
    }

    /// `t·perimeter/(2π)·Σ_{n ≥ k} π(1+√2)(2n+1)·env(εn)/n`, a bound on the
    /// terms with `|k| > k` of `t²Σ χ̂(tk)ρ̂(εk)`: an annulus `n < |k| ≤ n+1`
    /// holds at most `π(1+√2)(2n+1)` lattice points and
    /// `|χ̂(ζ)| ≤ perimeter/(2π|ζ|)`.
    pub fn tail_bound(&self, t: f64, epsilon: f64, perimeter: f64, k: usize) -> f64 {
        let mut sum = 0.0;
        let mut n = k.max(1);
        loop {
            let term = PI * (1.0 + 2f64.sqrt()) * (2.0 * n as f64 + 1.0) * self.envelope(epsilon * n as f64)
                / n as f64;
            sum += term;
            if term < 1e-40 || n > 10_000_000 {
                break;
            }
            n += 1;
        }
        t * perimeter / TAU * sum
    }
}

/// `α(ω) = (426ω − 832)/(1277ω − 2496)`
pub fn alpha(omega: u32) -> f64 {
    let w = omega as f64;
    (426.0 * w - 832.0) / (1277.0 * w - 2496.0)
}

/// `β(ω) = (ω − 2)/(1277ω − 2496)`
pub fn beta(omega: u32) -> f64 {
    let w = omega as f64;
    (w - 2.0) / (1277.0 * w - 2496.0)
}

/// `ζ = 1/3831`
pub const ZETA: f64 = 1.0 / 3831.0;

/// `σ(ω) = 832/(1277(1277ω − 2496))`
pub fn sigma(omega: u32) -> f64 {
    832.0 / (1277.0 * (1277.0 * omega as f64 - 2496.0))
}

/// `(ε, δ) = (2^{−jα(ω)}, 2^{−jβ(ω)})`; the disk has no flat normals and
/// gets `δ = 0` (empty `D₂`).
pub fn schedule(j: u32, omega: u32) -> Result<(f64, f64)> {
    if j < 1 {
        return invalid("dyadic index must be >= 1");
    }
    if omega < 2 || !omega.is_multiple_of(2) {
        return invalid("omega must be even and >= 2");
    }
    let eps = 2f64.powf(-(j as f64) * alpha(omega));
    let delta = if omega == 2 {
        0.0
    } else {
        2f64.powf(-(j as f64) * beta(omega))
    };
    Ok((eps, delta))
}

/// Partition of the main sum by the curvature class of `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSums {
    pub sum_d1: Complex64,
    pub sum_d2: Complex64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCount {
    pub t: f64,
    pub theta: f64,
    pub epsilon: f64,
    /// `area·t² + t²·Re Σ_{0<|k|≤k_max} χ̂(tk)ρ̂(εk)`
    pub value: f64,
    pub k_max: usize,
    pub tail_bound: f64,
    /// `t²·|Im Σ|`
    pub imag_residue: f64,
    pub split: SplitSums,
    pub numeric_terms: usize,
    pub asymptotic_terms: usize,
}

/// Options for [`mollified_count_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PoissonOptions {
    /// Use this truncation radius instead of the tail rule.
    pub k_max: Option<usize>,
    /// Threshold of the `D₁/D₂` split (default: `ASYMPTOTIC_DELTA`).
    pub delta: Option<f64>,
}

/// Smallest `K` with `tail_bound(K) ≤ TAIL_FACTOR·t^{1/2}`.
pub fn choose_k_max(domain: &RotatedDomain, t: f64, epsilon: f64) -> Result<(usize, f64)> {
    let moll = Mollifier::standard();
    let perimeter = domain.base().perimeter();
    let target = TAIL_FACTOR * t.sqrt();
    // the tail is nonincreasing in K: bisect on [1, cap]
    let tail = |k: usize| moll.tail_bound(t, epsilon, perimeter, k);
    if tail(K_MAX_CAP) > target {
        return Err(Error::Refused(format!(
            "truncation radius above {K_MAX_CAP} needed (epsilon = {epsilon} too small for t = {t})"
        )));
    }
    let (mut lo, mut hi) = (1usize, K_MAX_CAP);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if tail(mid) <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((lo, tail(lo)))
}

pub fn mollified_count(domain: &RotatedDomain, t: f64, epsilon: f64) -> Result<PoissonCount> {
    mollified_count_with(domain, t, epsilon, PoissonOptions::default())
}

/// Truncated Poisson sum. Terms with `δ_k ≥ 0.5` and `t|k| ≥ 50` use the
/// asymptotic `χ̂`; the rest are evaluated numerically on a shared boundary
/// quadrature. Only `k` in the upper half-plane are evaluated; `χ̂(−ζ)` is
/// the conjugate of `χ̂(ζ)` for a real indicator.
pub fn mollified_count_with(
    domain: &RotatedDomain,
    t: f64,
    epsilon: f64,
    opts: PoissonOptions,
) -> Result<PoissonCount> {
    if !(t >= 2.0 && t.is_finite()) {
        return invalid("t must be >= 2");
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid("epsilon must lie in (0, 1)");
    }
    let moll = Mollifier::standard();
    let perimeter = domain.base().perimeter();
    let (k_max, tail_bound) = match opts.k_max {
        Some(k) => {
            if k > K_MAX_CAP {
                return Err(Error::Refused(format!("k_max above {K_MAX_CAP}")));
            }
            (k, moll.tail_bound(t, epsilon, perimeter, k))
        }
        None => choose_k_max(domain, t, epsilon)?,
    };
    let delta = opts.delta.unwrap_or(ASYMPTOTIC_DELTA);
    let kk = k_max as i64;
    let k2max = kk * kk;

    let mut asym_d1 = Complex64::new(0.0, 0.0);
    let mut asym_d2 = Complex64::new(0.0, 0.0);
    let mut asymptotic_terms = 0;
    let mut rows: Vec<(i64, Vec<i64>)> = Vec::new();
    let mut numeric_classes: Vec<Vec<(bool, f64)>> = Vec::new();
    for k2 in 0..=kk {
        let mut row = Vec::new();
        let mut class = Vec::new();
        for k1 in -kk..=kk {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let n2 = k1 * k1 + k2 * k2;
            if n2 > k2max {
                continue;
            }
            let k = Vec2::new(k1 as f64, k2 as f64);
            let norm = k.norm();
            let weight = moll.rho_hat(epsilon * norm);
            if weight == 0.0 {
                continue;
            }
            let u = k * (1.0 / norm);
            let dk = domain.delta_xi(u)?;
            let in_d2 = dk <= delta;
            if dk >= ASYMPTOTIC_DELTA && t * norm >= ASYMPTOTIC_MIN_FREQUENCY {
                let a = ft_asymptotic(domain, u, t * norm)?.value;
                // k and −k together contribute 2·Re
                let v = Complex64::new(2.0 * a.re * weight, 0.0);
                if in_d2 {
                    asym_d2 += v;
                } else {
                    asym_d1 += v;
                }
                asymptotic_terms += 2;
            } else {
                row.push(k1);
                class.push((in_d2, weight));
            }
        }
        if !row.is_empty() {
            rows.push((k2, row));
            numeric_classes.push(class);
        }
    }
    let mut num_d1 = Complex64::new(0.0, 0.0);
    let mut num_d2 = Complex64::new(0.0, 0.0);
    let mut numeric_terms = 0;
    if !rows.is_empty() {
        let lt = LatticeTransform::new(domain, t, k_max as f64);
        let vals = lt.eval_rows(&rows)?;
        for (vs, cls) in vals.iter().zip(&numeric_classes) {
            for (v, (in_d2, w)) in vs.iter().zip(cls) {
                // v + conj(v) for the pair ±k; the imaginary parts cancel exactly
                // only in exact arithmetic, so they are carried separately
                let pair = (v + v.conj()) * *w;
                if *in_d2 {
                    num_d2 += pair;
                } else {
                    num_d1 += pair;
                }
                numeric_terms += 2;
            }
        }
    }
    let sum_d1 = asym_d1 + num_d1;
    let sum_d2 = asym_d2 + num_d2;
    let total = sum_d1 + sum_d2;
    let area = domain.base().area();
    Ok(PoissonCount {
        t,
        theta: domain.theta(),
        epsilon,
        value: t * t * (area + total.re),
        k_max,
        tail_bound,
        imag_residue: t * t * total.im.abs(),
        split: SplitSums {
            sum_d1,
            sum_d2,
            delta,
        },
        numeric_terms,
        asymptotic_terms,
    })
}

/// `sum_D1` and `sum_D2` of the truncated main sum for threshold `delta`.
pub fn split_sums(domain: &RotatedDomain, t: f64, epsilon: f64, delta: f64) -> Result<SplitSums> {
    Ok(mollified_count_with(
        domain,
        t,
        epsilon,
        PoissonOptions {
            delta: Some(delta),
            ..PoissonOptions::default()
        },
    )?
    .split)
}

/// `C₁ = 1.01/inradius`, so that `B(0, 1/C₁) ⊂ B_θ`.
pub fn c1(domain: &RotatedDomain) -> f64 {
    1.01 / domain.inradius()
}

/// One evaluation of the bracketing chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    /// `t` actually used (perturbed if the count at the requested `t` was ambiguous).
    pub t: f64,
    pub epsilon: f64,
    pub count_exact: u64,
    /// `N_ε(t − C₁ε) − tail_bound`
    pub lower: f64,
    /// `N_ε(t + C₁ε) + tail_bound`
    pub upper: f64,
    pub holds: bool,
    pub sum_d1_abs: f64,
    pub sum_d2_abs: f64,
    pub delta: f64,
}

pub const SANDWICH_CSV_HEADER: &str =
    "t,theta,epsilon,value,count_exact,lower,upper,sum_D1_abs,sum_D2_abs,delta";

impl SandwichReport {
    pub fn csv_row(&self, theta: f64, value: f64) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.t,
            theta,
            self.epsilon,
            value,
            self.count_exact,
            self.lower,
            self.upper,
            self.sum_d1_abs,
            self.sum_d2_abs,
            self.delta
        )
    }
}

/// Certified count at `t` (perturbed if ambiguous) with `N_ε(t − C₁ε) − tail`
/// and `N_ε(t + C₁ε) + tail`.
fn bracket(domain: &RotatedDomain, t: f64, epsilon: f64) -> Result<(f64, u64, f64, f64)> {
    let exact = count_certified(domain, t, 8)?;
    let t = exact.t;
    let c = c1(domain);
    let lo = mollified_count(domain, t - c * epsilon, epsilon)?;
    let hi = mollified_count(domain, t + c * epsilon, epsilon)?;
    Ok((t, exact.count, lo.value - lo.tail_bound, hi.value + hi.tail_bound))
}

/// Checks `N_ε(t − C₁ε) − tail ≤ #(tB_θ ∩ ℤ²) ≤ N_ε(t + C₁ε) + tail` and
/// records the split diagnostics of `N_ε(t)`.
pub fn sandwich_report(domain: &RotatedDomain, t: f64, epsilon: f64) -> Result<(SandwichReport, PoissonCount)> {
    let (t, count, lower, upper) = bracket(domain, t, epsilon)?;
    let mid = mollified_count(domain, t, epsilon)?;
    let n = count as f64;
    Ok((
        SandwichReport {
            t,
            epsilon,
            count_exact: count,
            lower,
            upper,
            holds: lower <= n && n <= upper,
            sum_d1_abs: mid.split.sum_d1.norm(),
            sum_d2_abs: mid.split.sum_d2.norm(),
            delta: mid.split.delta,
        },
        mid,
    ))
}

pub fn sandwich_check(domain: &RotatedDomain, t: f64, epsilon: f64) -> Result<bool> {
    let (_, count, lower, upper) = bracket(domain, t, epsilon)?;
    let n = count as f64;
    Ok(lower <= n && n <= upper)
}

/// `Σ_k (χ_{tB_θ} ∗ ρ_ε)(k)` computed in physical space. Lattice points
/// farther than `ε` from `∂(tB_θ)` contribute 0 or 1; for the others the
/// convolution is integrated in polar coordinates around `k`. Along each of
/// `rays` directions the set of radii inside `tB_θ` is an interval (the gauge
/// is convex), located by golden-section search and bisection, and the
/// radial integral over it uses 20-point Gauss–Legendre.
pub fn mollified_count_direct(domain: &RotatedDomain, t: f64, epsilon: f64, rays: usize) -> Result<f64> {
    if !(t > 0.0 && epsilon > 0.0) {
        return invalid("t and epsilon must be positive");
    }
    let moll = Mollifier::standard();
    let rule = GaussLegendre::new(20);
    let w = domain.omega() as i32;
    let level = t.powi(w);
    let reach = t * domain.horizontal_extent().max(domain.vertical_extent()) + epsilon + 1.0;
    let r = reach.ceil() as i64;
    // g^{1/ω} is a norm with unit ball B_θ; its Lipschitz constant is 1/inradius
    let lip = 1.0 / domain.inradius();
    let mut total = 0.0;
    for k2 in -r..=r {
        for k1 in -r..=r {
            let k = Vec2::new(k1 as f64, k2 as f64);
            let gauge = domain.gauge_power(k).powf(1.0 / w as f64);
            if gauge > t + lip * epsilon {
                continue;
            }
            if gauge < t - lip * epsilon {
                total += 1.0;
                continue;
            }
            let mut acc = 0.0;
            for a in 0..rays {
                let u = Vec2::from_angle(TAU * (a as f64 + 0.5) / rays as f64) * epsilon;
                let h = |s: f64| domain.gauge_power(k - u * s) - level;
                let s_min = golden_min(h, 0.0, 1.0, 1e-13);
                if h(s_min) > 0.0 {
                    continue;
                }
                let root = |mut lo: f64, mut hi: f64, rising: bool| {
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if (h(mid) > 0.0) == rising {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    0.5 * (lo + hi)
                };
                let s_lo = if h(0.0) <= 0.0 { 0.0 } else { root(0.0, s_min, false) };
                let s_hi = if h(1.0) <= 0.0 { 1.0 } else { root(s_min, 1.0, true) };
                acc += rule.integrate(s_lo, s_hi, |s| s * moll.rho(Vec2::new(s, 0.0)));
            }
            total += acc * TAU / rays as f64;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Region, Superellipse};

    fn disk() -> RotatedDomain {
        RotatedDomain::new(Superellipse::disk(), 0.0)
    }

    #[test]
    fn mollifier_mass_and_normalization() {
        let m = Mollifier::standard();
        assert!((m.rho_hat(0.0) - 1.0).abs() < 1e-13);
        // polar mass of ρ
        let mass = 2.0 * PI
            * crate::quadrature::integrate_adaptive(0.0, 1.0, 1e-13, |r| r * m.rho(Vec2::new(r, 0.0)))
                .unwrap();
        assert!((mass - 1.0).abs() < 1e-10, "{mass}");
        for s in [0.3, 1.7, 5.0, 12.0, 33.3] {
            assert!(m.rho_hat(s).abs() <= 1.0);
            assert!(m.envelope(s) >= m.rho_hat(s).abs());
        }
    }

    #[test]
    fn rho_hat_matches_radial_quadrature() {
        // ρ̂(s) = 2π∫₀¹ ρ(r) J₀(2πsr) r dr with J₀ from its integral form
        let m = Mollifier::standard();
        let j0 = |x: f64| {
            let n = 400;
            (0..n)
                .map(|i| (x * (PI * (i as f64 + 0.5) / n as f64).sin()).cos())
                .sum::<f64>()
                / n as f64
        };
        for s in [0.5, 2.25, 7.0] {
            let want = TAU
                * crate::quadrature::integrate_adaptive(0.0, 1.0, 1e-12, |r| {
                    m.rho(Vec2::new(r, 0.0)) * j0(TAU * s * r) * r
                })
                .unwrap();
            assert!((m.rho_hat(s) - want).abs() < 1e-8, "{s}: {} vs {want}", m.rho_hat(s));
        }
    }

    #[test]
    fn schedule_values() {
        assert!((alpha(4) - 872.0 / 2612.0).abs() < 1e-15);
        assert!((beta(4) - 2.0 / 2612.0).abs() < 1e-15);
        assert!((alpha(1_000_000) - 426.0 / 1277.0).abs() < 1e-6);
        assert!((sigma(4) - 832.0 / (1277.0 * 2612.0)).abs() < 1e-18);
        let (e, d) = schedule(10, 4).unwrap();
        assert!((e - 2f64.powf(-10.0 * alpha(4))).abs() < 1e-15);
        assert!(d < 1.0 && d > 0.99);
        assert_eq!(schedule(5, 2).unwrap().1, 0.0);
        assert!(schedule(0, 4).is_err());
    }

    #[test]
    fn disk_value_matches_physical_space() {
        // twelve lattice points lie on the circle of radius 10 and each counts
        // about one half after mollification, so the value sits near 317 − 6
        let pc = mollified_count(&disk(), 10.0, 0.05).unwrap();
        let direct = mollified_count_direct(&disk(), 10.0, 0.05, 512).unwrap();
        assert!((pc.value - direct).abs() < 0.02, "{} vs {direct}", pc.value);
        assert!((pc.value - 311.0).abs() < 0.05);
        assert!(pc.imag_residue <= 1e-8 * pc.value);
    }

    #[test]
    fn disk_has_empty_d2_at_half() {
        let s = split_sums(&disk(), 12.0, 0.3, 0.5).unwrap();
        assert_eq!(s.sum_d2, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn axes_fall_in_d2() {
        let d = RotatedDomain::new(Superellipse::unit(4).unwrap(), 0.0);
        for k in [Vec2::new(1.0, 0.0), Vec2::new(0.0, -3.0)] {
            assert_eq!(d.region_classify(k, 0.01).unwrap(), Region::D2);
        }
    }

    #[test]
    fn physical_space_oracle_agrees() {
        let d = RotatedDomain::new(Superellipse::unit(4).unwrap(), 0.4);
        let (t, eps) = (6.3, 0.4);
        let pc = mollified_count(&d, t, eps).unwrap();
        let direct = mollified_count_direct(&d, t, eps, 2048).unwrap();
        assert!((pc.value - direct).abs() < 1e-4, "{} vs {direct}", pc.value);
    }

    #[test]
    fn refuses_tiny_epsilon() {
        assert!(matches!(
            mollified_count(&disk(), 100.0, 1e-4),
            Err(Error::Refused(_))
        ));
    }
}
