//! One-dimensional oscillatory integrals: a reference integrator, the
//! stationary-phase expansion with its explicit error constant, the
//! nonstationary-phase decay check, a two-dimensional nondegenerate-phase
//! estimate and the radii of the quantitative inverse function theorem.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::jet::{factorial, Jet2};
use crate::linalg::Vec2;
use crate::quadrature::{integrate_adaptive, GaussLegendre};
use crate::stats::least_squares;

/// A smooth function of one variable with analytic derivatives up to a
/// declared order.
pub trait SmoothFunction1D {
    /// Interval outside of which the function vanishes (or is negligible).
    fn support(&self) -> (f64, f64);

    /// Highest derivative order available.
    fn max_order(&self) -> usize;

    /// Derivatives `u(x), u′(x), …, u^{(order)}(x)`.
    fn derivatives(&self, x: f64, order: usize) -> Vec<f64>;

    fn value(&self, x: f64) -> f64 {
        self.derivatives(x, 0)[0]
    }

    fn derivative(&self, order: usize, x: f64) -> f64 {
        self.derivatives(x, order)[order]
    }
}

/// Function defined by a jet expression; derivatives come from Taylor
/// arithmetic and are exact up to rounding.
pub struct JetFunction<F> {
    support: (f64, f64),
    max_order: usize,
    f: F,
}

impl<F: Fn(&Jet2) -> Jet2> JetFunction<F> {
    pub fn new(support: (f64, f64), max_order: usize, f: F) -> Self {
        Self {
            support,
            max_order,
            f,
        }
    }
}

impl<F: Fn(&Jet2) -> Jet2> SmoothFunction1D for JetFunction<F> {
    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        let j = (self.f)(&Jet2::var_s(x, order));
        (0..=order).map(|n| j.partial(n, 0)).collect()
    }
}

/// `exp(−1/(1 − s²))` on jets with `s = (x − center)/width`, zero outside.
pub fn bump_jet(x: &Jet2, center: f64, width: f64) -> Jet2 {
    let s = x.add_const(-center).scale(1.0 / width);
    let one_minus = (&s * &s).scale(-1.0).add_const(1.0);
    // below e^{-700} the bump and all its derivatives underflow
    if one_minus.value() <= 1.0 / 700.0 {
        return Jet2::constant(0.0, x.degree());
    }
    one_minus.recip().scale(-1.0).exp()
}

/// Standard bump `exp(−1/(1 − ((x−c)/w)²))` supported on `[c − w, c + w]`.
pub fn bump(center: f64, width: f64, max_order: usize) -> JetFunction<impl Fn(&Jet2) -> Jet2> {
    JetFunction::new((center - width, center + width), max_order, move |x: &Jet2| {
        bump_jet(x, center, width)
    })
}

/// Linear phase `slope·x` (support is irrelevant for phases).
pub fn linear_phase(slope: f64) -> JetFunction<impl Fn(&Jet2) -> Jet2> {
    JetFunction::new((f64::NEG_INFINITY, f64::INFINITY), usize::MAX, move |x: &Jet2| {
        x.scale(slope)
    })
}

/// The zero function on a given support.
pub struct Zero(pub (f64, f64));

impl SmoothFunction1D for Zero {
    fn support(&self) -> (f64, f64) {
        self.0
    }
    fn max_order(&self) -> usize {
        usize::MAX
    }
    fn derivatives(&self, _x: f64, order: usize) -> Vec<f64> {
        vec![0.0; order + 1]
    }
}

/// Options for [`osc_quad`].
#[derive(Debug, Clone, Copy)]
pub struct OscQuadOptions {
    /// Relative tolerance, measured against `∫|u|`.
    pub rel_tol: f64,
    /// Minimum nodes per oscillation period of `λ·phase`.
    pub nodes_per_period: f64,
    pub max_doublings: usize,
}

impl Default for OscQuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            nodes_per_period: 20.0,
            max_doublings: 24,
        }
    }
}

/// `∫ u(x) e^{iλ·phase(x)} dx` over the support of `u` by the trapezoid rule
/// with node doubling until two successive values agree to
/// `rel_tol·∫|u|`. The integrand is smooth and vanishes to all orders at the
/// ends of the support, so the trapezoid rule converges super-algebraically.
pub fn osc_quad<U, P>(u: &U, phase: P, lambda: f64, opts: OscQuadOptions) -> Result<Complex64>
where
    U: SmoothFunction1D + ?Sized,
    P: Fn(f64) -> f64,
{
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return invalid("lambda must be finite and nonnegative");
    }
    let (a, b) = u.support();
    if !(a.is_finite() && b.is_finite() && b > a) {
        return invalid("support must be a finite nonempty interval");
    }
    // total variation of λ·phase over the support, sampled coarsely
    let probe = 4096;
    let mut tv = 0.0;
    let mut prev = phase(a);
    for i in 1..=probe {
        let p = phase(a + (b - a) * i as f64 / probe as f64);
        tv += (p - prev).abs();
        prev = p;
    }
    let periods = lambda * tv / TAU;
    let mut n = ((opts.nodes_per_period * periods).ceil() as usize).max(64);
    // sums over the interior nodes a + (b − a)·i/n, i = 1, 1 + step, …
    let nodes = |n: usize, step: usize| {
        let h = (b - a) / n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for i in (1..n).step_by(step) {
            let x = a + h * i as f64;
            let v = u.value(x);
            if v != 0.0 {
                sum += Complex64::from_polar(v, lambda * phase(x));
                abs += v.abs();
            }
        }
        (sum, abs)
    };
    let (mut sum, mut abs) = nodes(n, 1);
    let mut prev_val = sum * ((b - a) / n as f64);
    let mut prev_diff = f64::INFINITY;
    for _ in 0..opts.max_doublings {
        n *= 2;
        let (s_odd, a_odd) = nodes(n, 2);
        sum += s_odd;
        abs += a_odd;
        let h = (b - a) / n as f64;
        let (val, scale) = (sum * h, (abs * h).max(f64::MIN_POSITIVE));
        let diff = (val - prev_val).norm();
        if diff <= opts.rel_tol * scale {
            return Ok(val);
        }
        // rounding floor: differences no longer shrink
        if diff < 1e-11 * scale && diff > 0.5 * prev_diff {
            break;
        }
        prev_val = val;
        prev_diff = diff;
    }
    Err(Error::PrecisionFailure(format!(
        "oscillatory quadrature did not converge at lambda = {lambda}"
    )))
}

/// Integral, expansion and certified error bound for
/// `∫ u(x) e^{−iλx²/2} dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseReport {
    pub integral_value: Complex64,
    pub approximation: Complex64,
    pub certified_bound: f64,
    pub observed_error: f64,
}

impl PhaseReport {
    pub fn within_bound(&self) -> bool {
        self.observed_error <= self.certified_bound
    }
}

/// `(2π)^{1/2} e^{−πi/4} λ^{−1/2} Σ_{j<k} (2iλ)^{−j} u^{(2j)}(0)/j!`
pub fn stationary_phase_expansion<U: SmoothFunction1D + ?Sized>(
    u: &U,
    lambda: f64,
    k: usize,
) -> Complex64 {
    let d = u.derivatives(0.0, 2 * (k - 1));
    let lead = TAU.sqrt() * Complex64::from_polar(1.0, -PI / 4.0) / lambda.sqrt();
    let two_i_lambda = Complex64::new(0.0, 2.0 * lambda);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for j in 0..k {
        sum += pow * d[2 * j] / factorial(j);
        pow /= two_i_lambda;
    }
    lead * sum
}

/// `(2^{1−k}√π/k!) λ^{−k−1/2}` — the constant multiplying the L² norms.
pub fn stationary_phase_constant(lambda: f64, k: usize) -> f64 {
    2f64.powi(1 - k as i32) * PI.sqrt() / factorial(k) * lambda.powf(-(k as f64) - 0.5)
}

/// `‖u^{(order)}‖_{L²}` by adaptive quadrature to 1e−8 relative.
pub fn l2_norm_of_derivative<U: SmoothFunction1D + ?Sized>(u: &U, order: usize) -> Result<f64> {
    let (a, b) = u.support();
    let sq = integrate_adaptive(a, b, 1e-8, |x| u.derivative(order, x).powi(2))
        .ok_or_else(|| Error::PrecisionFailure("L2 norm quadrature did not converge".into()))?;
    Ok(sq.sqrt())
}

/// Stationary-phase expansion of order `k` against the reference integral,
/// with the certified error bound.
pub fn stationary_phase_1d<U: SmoothFunction1D + ?Sized>(
    u: &U,
    lambda: f64,
    k: usize,
) -> Result<PhaseReport> {
    if k < 1 {
        return invalid("expansion order k must be >= 1");
    }
    if !(lambda > 0.0) {
        return invalid("lambda must be positive");
    }
    if u.max_order() < 2 * k + 1 {
        return invalid(format!(
            "order-{k} expansion needs {} derivatives, function provides {}",
            2 * k + 1,
            u.max_order()
        ));
    }
    let approximation = stationary_phase_expansion(u, lambda, k);
    let norms = l2_norm_of_derivative(u, 2 * k)? + l2_norm_of_derivative(u, 2 * k + 1)?;
    let certified_bound = stationary_phase_constant(lambda, k) * norms;
    let opts = OscQuadOptions {
        rel_tol: 1e-15,
        ..OscQuadOptions::default()
    };
    let integral_value = match osc_quad(u, |x| -0.5 * x * x, lambda, opts) {
        Ok(v) => v,
        // rounding floor reached before 1e-15; retry at a looser tolerance
        Err(_) => osc_quad(
            u,
            |x| -0.5 * x * x,
            lambda,
            OscQuadOptions {
                rel_tol: 1e-13,
                ..opts
            },
        )?,
    };
    Ok(PhaseReport {
        integral_value,
        approximation,
        certified_bound,
        observed_error: (integral_value - approximation).norm(),
    })
}

/// Fitted constant of the integration-by-parts bound
/// `|∫u e^{iλf}| ≤ C |K| λ^{−k} Σ_{ν≤k} sup |u^{(ν)}| |f′|^{ν−2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonstationaryFit {
    /// Smallest `C` that makes the right-hand side an upper bound on the grid.
    pub constant: f64,
    /// Log-log slope of `|∫u e^{iλf}|` against `λ` (NaN if undefined).
    pub decay_slope: f64,
    pub lambdas: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

pub fn nonstationary_bound_check<U, F>(
    u: &U,
    f: &F,
    lambda_grid: &[f64],
    k: usize,
) -> Result<NonstationaryFit>
where
    U: SmoothFunction1D + ?Sized,
    F: SmoothFunction1D + ?Sized,
{
    let (a, b) = u.support();
    let samples = 2001;
    let xs: Vec<f64> = (0..samples)
        .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
        .collect();
    let grad: Vec<f64> = xs.iter().map(|&x| f.derivative(1, x).abs()).collect();
    let gmin = grad.iter().copied().fold(f64::INFINITY, f64::min);
    if !(gmin > 0.0) {
        return invalid("phase gradient must stay away from zero on the support");
    }
    // Σ_ν sup_x |u^{(ν)}(x)| |f′(x)|^{ν−2k}
    let mut sups = vec![0.0f64; k + 1];
    for (x, g) in xs.iter().zip(&grad) {
        let d = u.derivatives(*x, k);
        for nu in 0..=k {
            sups[nu] = sups[nu].max(d[nu].abs() * g.powi(nu as i32 - 2 * k as i32));
        }
    }
    let sum_sup: f64 = sups.iter().sum();
    let measure = b - a;
    let mut constant = 0.0f64;
    let mut magnitudes = Vec::with_capacity(lambda_grid.len());
    for &lam in lambda_grid {
        let val = osc_quad(u, |x| f.value(x), lam, OscQuadOptions {
            rel_tol: 1e-14,
            ..OscQuadOptions::default()
        })
        .or_else(|_| osc_quad(u, |x| f.value(x), lam, OscQuadOptions::default()))?
        .norm();
        magnitudes.push(val);
        let rhs = measure * lam.powi(-(k as i32)) * sum_sup;
        if rhs > 0.0 {
            constant = constant.max(val / rhs);
        }
    }
    let pts: Vec<(f64, f64)> = lambda_grid
        .iter()
        .zip(&magnitudes)
        .filter(|(_, m)| **m > 0.0)
        .map(|(l, m)| (l.ln(), m.ln()))
        .collect();
    let decay_slope = if pts.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        least_squares(&x, &y).map(|f| f.slope).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    Ok(NonstationaryFit {
        constant,
        decay_slope,
        lambdas: lambda_grid.to_vec(),
        magnitudes,
    })
}

/// Radii of the quantitative inverse function theorem:
/// `r₁ = min{c/(2d^{7/2}(d−1)! C^d), r₀}` and
/// `r₂ = c·r₁/(4d^{3/2}(d−1)! C^{d−1})`.
pub fn ift_radii(c: f64, big_c: f64, d: usize, r0: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && big_c > 0.0 && r0 > 0.0 && d >= 1) {
        return invalid("ift_radii needs positive c, C, r0 and d >= 1");
    }
    let df = d as f64;
    let fact = factorial(d - 1);
    let r1 = (c / (2.0 * df.powf(3.5) * fact * big_c.powi(d as i32))).min(r0);
    let r2 = c * r1 / (4.0 * df.powf(1.5) * fact * big_c.powi(d as i32 - 1));
    Ok((r1, r2))
}

/// Empirical bijectivity check for a planar map on `B(a, r₁)`: images of a
/// sample are pairwise distinct, and every sampled target in `B(f(a), r₂)`
/// has a Newton preimage inside `B(a, r₁)`.
pub fn ift_bijectivity_check<F>(f: F, a: Vec2, r1: f64, r2: f64, samples: usize) -> bool
where
    F: Fn(Vec2) -> Vec2,
{
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let pts: Vec<Vec2> = (0..samples)
        .map(|i| {
            let rr = r1 * ((i as f64 + 0.5) / samples as f64).sqrt();
            a + Vec2::from_angle(TAU * golden * i as f64) * rr
        })
        .collect();
    let imgs: Vec<Vec2> = pts.iter().map(|&p| f(p)).collect();
    for i in 0..samples {
        for j in (i + 1)..samples {
            if (imgs[i] - imgs[j]).norm() <= 1e-14 * (pts[i] - pts[j]).norm() {
                return false;
            }
        }
    }
    let b = f(a);
    let jac = |x: Vec2| {
        let h = 1e-7 * r1.max(1e-3);
        let dx = (f(x + Vec2::new(h, 0.0)) - f(x - Vec2::new(h, 0.0))) * (0.5 / h);
        let dy = (f(x + Vec2::new(0.0, h)) - f(x - Vec2::new(0.0, h))) * (0.5 / h);
        (dx, dy)
    };
    for i in 0..samples {
        let rr = r2 * ((i as f64 + 0.5) / samples as f64).sqrt();
        let target = b + Vec2::from_angle(TAU * golden * i as f64 + 1.0) * rr;
        let mut x = a;
        let mut ok = false;
        for _ in 0..50 {
            let res = f(x) - target;
            if res.norm() < 1e-13 {
                ok = true;
                break;
            }
            let (c1, c2) = jac(x);
            let det = c1.x * c2.y - c2.x * c1.y;
            if det == 0.0 {
                break;
            }
            let step = Vec2::new(
                (c2.y * res.x - c2.x * res.y) / det,
                (-c1.y * res.x + c1.x * res.y) / det,
            );
            x = x - step;
        }
        if !ok || (x - a).norm() >= r1 {
            return false;
        }
    }
    true
}

/// Nondegenerate two-dimensional stationary phase.
///
/// Phase `φ(x) = ½(x₁² + δx₂²) + x₁³/6` with `|det ∇²φ(0)| = δ` and amplitude
/// `ψ(x) = bump(|x|/(c₁δ))` supported in `B(0, c₁δ)`. Returns the fitted
/// constant `max_λ |∫ψe^{iλφ}|·λ·δ^{1/2}` computed with `nodes` Gauss–Legendre
/// points per axis.
pub fn nondegenerate_phase_fit(delta: f64, c1: f64, lambdas: &[f64], nodes: usize) -> Result<f64> {
    if !(delta > 0.0 && c1 > 0.0) {
        return invalid("delta and c1 must be positive");
    }
    let r = c1 * delta;
    let rule = GaussLegendre::new(nodes);
    let pts: Vec<(f64, f64)> = rule.mapped(-r, r).collect();
    let mut fit = 0.0f64;
    for &lam in lambdas {
        let mut sum = Complex64::new(0.0, 0.0);
        for &(x1, w1) in &pts {
            for &(x2, w2) in &pts {
                let rho2 = (x1 * x1 + x2 * x2) / (r * r);
                if rho2 >= 1.0 {
                    continue;
                }
                let psi = (-1.0 / (1.0 - rho2)).exp();
                let phi = 0.5 * (x1 * x1 + delta * x2 * x2) + x1.powi(3) / 6.0;
                sum += Complex64::from_polar(psi * w1 * w2, lam * phi);
            }
        }
        fit = fit.max(sum.norm() * lam * delta.sqrt());
    }
    Ok(fit)
}
