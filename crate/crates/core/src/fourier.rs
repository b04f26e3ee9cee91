//! Fourier transform of the indicator of `B_θ`.
//!
//! Convention: `χ̂(ζ) = ∫_B e(⟨x, ζ⟩) dx` with `e(f) = exp(−2πif)`.
//!
//! The numeric path uses the vector Gauss–Green identity
//! `2πiλξ_l χ̂(λξ) = −∮ n_l(x) e(λ⟨x, ξ⟩) ds`; the boundary is covered by
//! Gauss–Legendre panels with at least 20 nodes per oscillation period and
//! the panel count is doubled until two passes agree. The asymptotic path is
//! the two-term stationary-phase expression in `K_{±ξ}` and `H(±ξ)`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::rc::Rc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::{BoundaryNodes, RotatedDomain};
use crate::linalg::Vec2;
use crate::quadrature::GaussLegendre;
use crate::stats::{least_squares, log_space};

/// Gauss–Legendre points per panel; one panel spans at most one period.
pub const NODES_PER_PANEL: usize = 20;

/// Relative agreement required between successive panel doublings.
pub const NUMERIC_REL_TOL: f64 = 1e-10;

const MAX_DOUBLINGS: usize = 10;

thread_local! {
    static RULE: GaussLegendre = GaussLegendre::new(NODES_PER_PANEL);
    static NODE_CACHE: RefCell<HashMap<(u32, u64, u64, usize), Rc<BoundaryNodes>>> =
        RefCell::new(HashMap::new());
}

/// Smallest panel count of the form `m·2^e` (`m ∈ {4,…,7}`) that is `≥ n`,
/// so that doubling stays on the ladder and cached node sets get reused.
fn panel_ladder(n: usize) -> usize {
    let mut base = 4usize;
    loop {
        for m in 4..8 {
            if m * base / 4 >= n {
                return m * base / 4;
            }
        }
        base *= 2;
    }
}

fn cached_nodes(domain: &RotatedDomain, panels: usize) -> Rc<BoundaryNodes> {
    let base = domain.base();
    let (a, b) = base.semi_axes();
    let key = (base.omega(), a.to_bits(), b.to_bits(), panels);
    NODE_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some(n) = cache.get(&key) {
            return n.clone();
        }
        if cache.len() >= 48 {
            cache.clear();
        }
        let nodes = Rc::new(RULE.with(|rule| base.boundary_nodes(panels, rule)));
        cache.insert(key, nodes.clone());
        nodes
    })
}

/// `Σ nds_l·(e(⟨pos, ζ'⟩) − 1)` in the base frame, with `nds_l` the
/// world-frame component `l` of the rotated normal measure.
fn boundary_sum(nodes: &BoundaryNodes, zeta_base: Vec2, world_row: Vec2) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (p, w) in nodes.pos.iter().zip(&nodes.nds) {
        let weight = world_row.dot(*w);
        let phi = TAU * p.dot(zeta_base);
        let (s, c) = (0.5 * phi).sin_cos();
        // e^{−iφ} − 1 = −2 sin²(φ/2) − 2i sin(φ/2) cos(φ/2)
        re -= 2.0 * s * s * weight;
        im -= 2.0 * s * c * weight;
    }
    Complex64::new(re, im)
}

/// `∮ n_l(x) e(λ⟨x, ξ⟩) ds` over `∂B_θ` together with the number of panels
/// per arc used. `l ∈ {1, 2}` indexes world coordinates.
pub fn nlds_numeric(domain: &RotatedDomain, xi: Vec2, lambda: f64, l: usize) -> Result<Complex64> {
    nlds_numeric_inner(domain, xi, lambda, l).map(|(v, _)| v)
}

fn nlds_numeric_inner(
    domain: &RotatedDomain,
    xi: Vec2,
    lambda: f64,
    l: usize,
) -> Result<(Complex64, f64)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return invalid("lambda must be positive and finite");
    }
    if !(l == 1 || l == 2) || !xi.is_finite() || xi.is_zero() {
        return invalid("need l in {1, 2} and a nonzero finite direction");
    }
    let rot = domain.rotation();
    let zeta_base = rot.apply_inverse(xi * lambda);
    // row l of R_θ applied to a base-frame vector gives its world component l
    let world_row = if l == 1 {
        Vec2::new(rot.cos, -rot.sin)
    } else {
        Vec2::new(rot.sin, rot.cos)
    };
    let (right, top) = domain.base().arc_length_bounds();
    let periods = lambda * xi.norm() * right.max(top);
    let mut panels = panel_ladder((periods.ceil() as usize).max(2));
    let mut prev = boundary_sum(&cached_nodes(domain, panels), zeta_base, world_row);
    let perimeter_scale: f64 = 2.0 * (right + top);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let cur = boundary_sum(&cached_nodes(domain, panels), zeta_base, world_row);
        let floor = 1e-15 * perimeter_scale * (1.0 + periods.sqrt());
        if (cur - prev).norm() <= NUMERIC_REL_TOL * cur.norm() + floor {
            return Ok((cur, floor));
        }
        prev = cur;
    }
    Err(Error::PrecisionFailure(format!(
        "boundary quadrature did not stabilize at lambda = {lambda}"
    )))
}

/// `χ̂_{B_θ}(λξ)` through the boundary integral with a chosen component `l`.
pub fn ft_numeric_branch(domain: &RotatedDomain, xi: Vec2, lambda: f64, l: usize) -> Result<Complex64> {
    if !(l == 1 || l == 2) {
        return invalid("branch index must be 1 or 2");
    }
    let xl = xi.get(l - 1);
    if xl == 0.0 {
        return invalid(format!("component {l} of the direction vanishes"));
    }
    let (s, _) = nlds_numeric_inner(domain, xi, lambda, l)?;
    Ok(-s / Complex64::new(0.0, TAU * lambda * xl))
}

/// `χ̂_{B_θ}(λξ)` with `l = argmax |ξ_l|`.
pub fn ft_numeric(domain: &RotatedDomain, xi: Vec2, lambda: f64) -> Result<Complex64> {
    let l = if xi.x.abs() >= xi.y.abs() { 1 } else { 2 };
    ft_numeric_branch(domain, xi, lambda, l)
}

/// Leading asymptotic term and the shape of its error term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTerm {
    pub value: Complex64,
    /// `λ^{−5/2}δ^{−7/2} + λ^{−2}δ^{−4}`; multiply by a fitted constant.
    pub budget_shape: f64,
    pub delta_xi: f64,
}

fn antipodal_data(domain: &RotatedDomain, xi: Vec2) -> Result<(f64, f64, f64, f64)> {
    let u = xi.normalized();
    let kp = domain.curvature(u)?;
    let km = domain.curvature(-u)?;
    if kp <= 0.0 || km <= 0.0 {
        return Err(Error::OutOfRange(
            "flat normal: the asymptotic expansion is undefined, use ft_numeric".into(),
        ));
    }
    Ok((kp, km, domain.support(u)?, domain.support(-u)?))
}

/// `K_ξ^{−1/2}e^{−2πiλH(ξ)}` and `K_{−ξ}^{−1/2}e^{2πiλH(−ξ)}`.
fn oscillating_factors(kp: f64, km: f64, hp: f64, hm: f64, lambda: f64) -> (Complex64, Complex64) {
    (
        Complex64::from_polar(kp.powf(-0.5), -TAU * lambda * hp),
        Complex64::from_polar(km.powf(-0.5), TAU * lambda * hm),
    )
}

/// `(2π)^{−1}λ^{−3/2}[e^{3πi/4}K_ξ^{−1/2}e^{−2πiλH(ξ)} + e^{−3πi/4}K_{−ξ}^{−1/2}e^{2πiλH(−ξ)}]`
/// for a unit direction `ξ`.
pub fn ft_asymptotic(domain: &RotatedDomain, xi: Vec2, lambda: f64) -> Result<AsymptoticTerm> {
    if !(lambda > 0.0) {
        return invalid("lambda must be positive");
    }
    let (kp, km, hp, hm) = antipodal_data(domain, xi)?;
    let (ep, em) = oscillating_factors(kp, km, hp, hm, lambda);
    let plus = ep * Complex64::from_polar(1.0, 0.75 * PI);
    let minus = em * Complex64::from_polar(1.0, -0.75 * PI);
    let delta = kp.min(km);
    Ok(AsymptoticTerm {
        value: (plus + minus) * (lambda.powf(-1.5) / TAU),
        budget_shape: lambda.powf(-2.5) * delta.powf(-3.5) + lambda.powi(-2) * delta.powi(-4),
        delta_xi: delta,
    })
}

/// `λ^{−1/2}ξ_l[e^{πi/4}K_ξ^{−1/2}e^{−2πiλH(ξ)} + e^{3πi/4}K_{−ξ}^{−1/2}e^{2πiλH(−ξ)}]`,
/// the leading term of `∮ n_l e(λ⟨x, ξ⟩) ds`.
pub fn nlds_asymptotic(domain: &RotatedDomain, xi: Vec2, lambda: f64, l: usize) -> Result<Complex64> {
    if !(l == 1 || l == 2) {
        return invalid("l must be 1 or 2");
    }
    if !(lambda > 0.0) {
        return invalid("lambda must be positive");
    }
    let (kp, km, hp, hm) = antipodal_data(domain, xi)?;
    let (ep, em) = oscillating_factors(kp, km, hp, hm, lambda);
    let plus = ep * Complex64::from_polar(1.0, 0.25 * PI);
    let minus = em * Complex64::from_polar(1.0, 0.75 * PI);
    Ok((plus + minus) * (xi.normalized().get(l - 1) / lambda.sqrt()))
}

/// One evaluation of both paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierEval {
    pub xi: Vec2,
    pub lambda: f64,
    pub numeric: Complex64,
    pub asymptotic: Complex64,
    pub error_budget: f64,
    pub delta_xi: f64,
}

impl FourierEval {
    pub fn error(&self) -> f64 {
        (self.numeric - self.asymptotic).norm()
    }
}

/// Asymptotic model of one domain with its calibrated error constant.
#[derive(Debug, Clone)]
pub struct FourierModel {
    domain: RotatedDomain,
    c_fit: f64,
    /// `(angle, λ, ratio)` triples of the calibration grid.
    calibration: Vec<(f64, f64, f64)>,
}

/// Inflation applied to the largest observed ratio on the calibration grid.
pub const CALIBRATION_SAFETY: f64 = 2.0;

impl FourierModel {
    /// Fit `C_fit = 2·max |numeric − asymptotic| / budget_shape` over 32
    /// directions (those with `δ_ξ ≥ 0.5`) and 14 log-spaced `λ ∈ [50, 1000]`.
    pub fn calibrate(domain: &RotatedDomain) -> Result<Self> {
        let mut calibration = Vec::new();
        let mut worst = 0.0f64;
        for i in 0..32 {
            let angle = TAU * (i as f64 + 0.5) / 32.0;
            let xi = Vec2::from_angle(angle);
            if domain.delta_xi(xi)? < 0.5 {
                continue;
            }
            for lambda in log_space(50.0, 1000.0, 14) {
                let asym = ft_asymptotic(domain, xi, lambda)?;
                let num = ft_numeric(domain, xi, lambda)?;
                let ratio = (num - asym.value).norm() / asym.budget_shape;
                worst = worst.max(ratio);
                calibration.push((angle, lambda, ratio));
            }
        }
        if calibration.is_empty() {
            return Err(Error::OutOfRange(
                "no calibration direction with delta_xi >= 0.5".into(),
            ));
        }
        Ok(Self {
            domain: *domain,
            c_fit: CALIBRATION_SAFETY * worst,
            calibration,
        })
    }

    pub fn domain(&self) -> &RotatedDomain {
        &self.domain
    }

    pub fn c_fit(&self) -> f64 {
        self.c_fit
    }

    pub fn calibration(&self) -> &[(f64, f64, f64)] {
        &self.calibration
    }

    pub fn asymptotic(&self, xi: Vec2, lambda: f64) -> Result<(Complex64, f64)> {
        let a = ft_asymptotic(&self.domain, xi, lambda)?;
        Ok((a.value, self.c_fit * a.budget_shape))
    }

    pub fn eval(&self, xi: Vec2, lambda: f64) -> Result<FourierEval> {
        let a = ft_asymptotic(&self.domain, xi, lambda)?;
        Ok(FourierEval {
            xi,
            lambda,
            numeric: ft_numeric(&self.domain, xi, lambda)?,
            asymptotic: a.value,
            error_budget: self.c_fit * a.budget_shape,
            delta_xi: a.delta_xi,
        })
    }
}

/// Log lattice `10^{k/p}`, `k ≥ 0`, with `p = n_grid/4` points per decade.
fn profile_lattice(n_grid: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let p = n_grid as f64 / 4.0;
    let k0 = (lo.log10() * p).ceil().max(0.0) as i64;
    (k0..).map(move |k| 10f64.powf(k as f64 / p)).take_while(move |&r| r <= hi)
}

/// `max r^{3/2}|χ̂(rξ)|` over a log lattice in `[1, r_max]` with `n_grid/4`
/// points per decade. The lattice does not depend on `r_max`, so the result
/// is nondecreasing in `r_max`.
pub fn phi_profile(domain: &RotatedDomain, xi: Vec2, r_max: f64, n_grid: usize) -> Result<f64> {
    profile_between(domain, xi, n_grid, 1.0, r_max)
}

fn profile_between(domain: &RotatedDomain, xi: Vec2, n_grid: usize, lo: f64, hi: f64) -> Result<f64> {
    if n_grid < 200 {
        return invalid("n_grid must be at least 200");
    }
    let u = xi.normalized();
    let mut best = 0.0f64;
    for r in profile_lattice(n_grid, lo, hi) {
        best = best.max(r.powf(1.5) * ft_numeric(domain, u, r)?.norm());
    }
    Ok(best)
}

/// Profile measurements off a flat normal and the fitted log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct RandolFit {
    pub slope: f64,
    pub slope_se: f64,
    pub angles: Vec<f64>,
    pub profiles: Vec<f64>,
    pub r_max: Vec<f64>,
}

/// Regression slope of `log Φ(ξ_φ)` against `log φ` for `φ` log-spaced in
/// `[1e−3, 1e−1]` off the first flat normal. The search radius starts at
/// `4·φ^{−ω/(ω−1)}/(ω−1)`, beyond the onset of the stationary-phase
/// regime, and is doubled while the profile still grows by more than 2%.
pub fn randol_slope(domain: &RotatedDomain, n_angles: usize) -> Result<RandolFit> {
    let flats = domain.flat_points();
    let flat = match flats.first() {
        Some(f) => *f,
        None => return invalid("domain has no flat normal"),
    };
    if n_angles < 3 {
        return invalid("need at least three angles");
    }
    let w = domain.omega() as f64;
    let n_grid = 200;
    let angles = log_space(1e-3, 1e-1, n_angles);
    let mut profiles = Vec::with_capacity(n_angles);
    let mut radii = Vec::with_capacity(n_angles);
    for &phi in &angles {
        let xi = Vec2::from_angle(flat.normal.angle() + phi);
        let mut r_max = (4.0 * phi.powf(-w / (w - 1.0)) / (w - 1.0)).max(100.0);
        let mut prof = profile_between(domain, xi, n_grid, 1.0, r_max)?;
        for _ in 0..4 {
            let ext = profile_between(domain, xi, n_grid, r_max * 1.000001, 2.0 * r_max)?;
            r_max *= 2.0;
            let grown = ext > 1.02 * prof;
            prof = prof.max(ext);
            if !grown {
                break;
            }
        }
        profiles.push(prof);
        radii.push(r_max);
    }
    let x: Vec<f64> = angles.iter().map(|p| p.ln()).collect();
    let y: Vec<f64> = profiles.iter().map(|p| p.ln()).collect();
    let fit = least_squares(&x, &y)?;
    Ok(RandolFit {
        slope: fit.slope,
        slope_se: fit.slope_se,
        angles,
        profiles,
        r_max: radii,
    })
}

/// Boundary quadrature shared by many evaluations of `χ̂_{B_θ}(tk)`, `k ∈ ℤ²`.
///
/// Nodes are sized for the largest frequency `t·k_norm_max` (24-point
/// Gauss–Legendre panels spanning at most five periods) and the phase
/// factors `e(t⟨x, k⟩)` are advanced multiplicatively along lattice rows.
/// Arrays are stored component-wise so the inner loops vectorize.
pub struct LatticeTransform {
    t: f64,
    nds_x: Vec<f64>,
    nds_y: Vec<f64>,
    /// `e(t x₁)^{2^m}` per node, `m = 0, 1, …`
    pow1: Vec<(Vec<f64>, Vec<f64>)>,
    /// `e(t x₂)^{2^m}` per node
    pow2: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Multiplies `(ar, ai)` in place by `(br, bi)` (or its conjugate).
fn cmul_assign(ar: &mut [f64], ai: &mut [f64], br: &[f64], bi: &[f64], conj: bool) {
    let sign = if conj { -1.0 } else { 1.0 };
    for (((xr, xi), yr), yi) in ar.iter_mut().zip(ai.iter_mut()).zip(br).zip(bi) {
        let yi = sign * yi;
        let r = *xr * yr - *xi * yi;
        *xi = *xr * yi + *xi * yr;
        *xr = r;
    }
}

/// `Σ w_j (zr_j + i zi_j)` with four-lane partial sums.
fn weighted_sum(zr: &[f64], zi: &[f64], w: &[f64]) -> Complex64 {
    let (mut ar, mut ai) = ([0.0f64; 4], [0.0f64; 4]);
    let n4 = zr.len() / 4 * 4;
    for c in (0..n4).step_by(4) {
        for l in 0..4 {
            ar[l] += zr[c + l] * w[c + l];
            ai[l] += zi[c + l] * w[c + l];
        }
    }
    let mut re = ar.iter().sum::<f64>();
    let mut im = ai.iter().sum::<f64>();
    for j in n4..zr.len() {
        re += zr[j] * w[j];
        im += zi[j] * w[j];
    }
    Complex64::new(re, im)
}

impl LatticeTransform {
    pub fn new(domain: &RotatedDomain, t: f64, k_norm_max: f64) -> Self {
        let (right, top) = domain.base().arc_length_bounds();
        let periods = t * k_norm_max * right.max(top);
        let panels = ((periods / 5.0).ceil() as usize).max(4);
        let nodes = domain.base().boundary_nodes(panels, &GaussLegendre::new(24));
        let rot = domain.rotation();
        let n = nodes.len();
        let (mut nds_x, mut nds_y) = (Vec::with_capacity(n), Vec::with_capacity(n));
        let (mut r1, mut i1, mut r2, mut i2) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (p, w) in nodes.pos.iter().zip(&nodes.nds) {
            let p = rot.apply(*p);
            let w = rot.apply(*w);
            nds_x.push(w.x);
            nds_y.push(w.y);
            let (s, c) = (-TAU * t * p.x).sin_cos();
            r1.push(c);
            i1.push(s);
            let (s, c) = (-TAU * t * p.y).sin_cos();
            r2.push(c);
            i2.push(s);
        }
        let levels = (64 - (2 * k_norm_max.ceil() as u64 + 2).leading_zeros()) as usize;
        let ladder = |r: Vec<f64>, i: Vec<f64>| {
            let mut out = vec![(r, i)];
            for _ in 1..levels {
                let (mut r, mut i) = out.last().unwrap().clone();
                let (sr, si) = (r.clone(), i.clone());
                cmul_assign(&mut r, &mut i, &sr, &si, false);
                out.push((r, i));
            }
            out
        };
        Self {
            t,
            nds_x,
            nds_y,
            pow1: ladder(r1, i1),
            pow2: ladder(r2, i2),
        }
    }

    pub fn len(&self) -> usize {
        self.nds_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nds_x.is_empty()
    }

    /// Multiplies `(zr, zi)` by `e(t x_l)^n` using the binary power table.
    fn apply_power(&self, zr: &mut [f64], zi: &mut [f64], l: usize, n: i64) -> Result<()> {
        let table = if l == 1 { &self.pow1 } else { &self.pow2 };
        let mut e = n.unsigned_abs();
        let mut m = 0;
        while e > 0 {
            if m >= table.len() {
                return invalid("lattice frequency beyond the declared k_norm_max");
            }
            if e & 1 == 1 {
                cmul_assign(zr, zi, &table[m].0, &table[m].1, n < 0);
            }
            e >>= 1;
            m += 1;
        }
        Ok(())
    }

    /// `χ̂(tk)` for every `k = (k₁, k₂)` listed, with rows given as
    /// `(k₂, ascending k₁ values)` in ascending `k₂ ≥ 0`. Zero frequencies
    /// are not allowed.
    pub fn eval_rows(&self, rows: &[(i64, Vec<i64>)]) -> Result<Vec<Vec<Complex64>>> {
        let n = self.len();
        let mut out = Vec::with_capacity(rows.len());
        let (mut base_r, mut base_i) = (vec![1.0; n], vec![0.0; n]);
        let mut row_k2 = 0i64;
        let (mut cur_r, mut cur_i) = (vec![0.0; n], vec![0.0; n]);
        for (k2, k1s) in rows {
            if *k2 < row_k2 {
                return invalid("rows must be sorted by ascending k2 >= 0");
            }
            if *k2 > row_k2 {
                self.apply_power(&mut base_r, &mut base_i, 2, *k2 - row_k2)?;
                row_k2 = *k2;
            }
            let mut vals = Vec::with_capacity(k1s.len());
            let mut at: Option<i64> = None;
            for &k1 in k1s {
                if k1 == 0 && *k2 == 0 {
                    return invalid("zero frequency");
                }
                match at {
                    Some(prev) if k1 > prev && k1 - prev <= 2 => {
                        for _ in prev..k1 {
                            cmul_assign(&mut cur_r, &mut cur_i, &self.pow1[0].0, &self.pow1[0].1, false);
                        }
                    }
                    Some(prev) if k1 > prev => {
                        self.apply_power(&mut cur_r, &mut cur_i, 1, k1 - prev)?;
                    }
                    _ => {
                        cur_r.copy_from_slice(&base_r);
                        cur_i.copy_from_slice(&base_i);
                        self.apply_power(&mut cur_r, &mut cur_i, 1, k1)?;
                    }
                }
                at = Some(k1);
                let (s, kl) = if k1.abs() >= k2.abs() {
                    (weighted_sum(&cur_r, &cur_i, &self.nds_x), k1 as f64)
                } else {
                    (weighted_sum(&cur_r, &cur_i, &self.nds_y), *k2 as f64)
                };
                vals.push(-s / Complex64::new(0.0, TAU * self.t * kl));
            }
            out.push(vals);
        }
        Ok(out)
    }
}

/// CSV header for profile dumps.
pub const PROFILE_CSV_HEADER: &str = "omega,theta,xi_angle,lambda,re_num,im_num,re_asym,im_asym,delta_xi";

/// One profile row; the asymptotic columns are `nan` at flat normals.
pub fn profile_csv_row(domain: &RotatedDomain, xi_angle: f64, lambda: f64) -> Result<String> {
    let xi = Vec2::from_angle(xi_angle);
    let num = ft_numeric(domain, xi, lambda)?;
    let delta = domain.delta_xi(xi)?;
    let asym = if delta > 0.0 {
        ft_asymptotic(domain, xi, lambda)?.value
    } else {
        Complex64::new(f64::NAN, f64::NAN)
    };
    Ok(format!(
        "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
        domain.omega(),
        domain.theta(),
        xi_angle,
        lambda,
        num.re,
        num.im,
        asym.re,
        asym.im,
        delta
    ))
}

/// Rigorous bound `|χ̂(ζ)| ≤ perimeter/(2π|ζ|)` from the boundary identity.
pub fn tail_envelope(perimeter: f64, zeta_norm: f64) -> f64 {
    perimeter / (TAU * zeta_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Superellipse;

    fn disk() -> RotatedDomain {
        RotatedDomain::new(Superellipse::disk(), 0.0)
    }

    fn quartic(theta: f64) -> RotatedDomain {
        RotatedDomain::new(Superellipse::unit(4).unwrap(), theta)
    }

    #[test]
    fn small_lambda_gives_area() {
        for d in [disk(), quartic(0.4)] {
            let v = ft_numeric(&d, Vec2::from_angle(0.3), 1e-3).unwrap();
            let area = d.base().area();
            assert!((v.re - area).abs() < 1e-4 * area, "{v} vs {area}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let d = quartic(0.7);
        let xi = Vec2::from_angle(1.1);
        let a = ft_numeric(&d, xi, 37.3).unwrap();
        let b = ft_numeric(&d, -xi, 37.3).unwrap();
        assert!((a - b.conj()).norm() < 1e-10 * a.norm().max(1e-6));
    }

    #[test]
    fn branches_agree() {
        let d = RotatedDomain::new(Superellipse::new(6, 1.0, 0.7).unwrap(), 0.3);
        let xi = Vec2::from_angle(0.9);
        for lam in [3.0, 40.0, 300.0] {
            let a = ft_numeric_branch(&d, xi, lam, 1).unwrap();
            let b = ft_numeric_branch(&d, xi, lam, 2).unwrap();
            assert!((a - b).norm() < 1e-9 * a.norm() + 1e-13, "{lam}: {a} {b}");
        }
    }

    #[test]
    fn nlds_consistency_with_ft_asymptotic() {
        let d = quartic(0.2);
        let xi = Vec2::from_angle(0.8);
        for l in [1, 2] {
            let n = nlds_asymptotic(&d, xi, 123.0, l).unwrap();
            let f = ft_asymptotic(&d, xi, 123.0).unwrap().value;
            let back = -n / Complex64::new(0.0, TAU * 123.0 * xi.get(l - 1));
            assert!((back - f).norm() <= 1e-14 * f.norm());
        }
    }

    #[test]
    fn flat_normal_rejected() {
        let d = quartic(0.0);
        assert!(ft_asymptotic(&d, Vec2::new(1.0, 0.0), 100.0).is_err());
    }

    #[test]
    fn asymptotic_is_real_for_symmetric_domain() {
        let d = quartic(0.0);
        let v = ft_asymptotic(&d, Vec2::from_angle(0.6), 77.0).unwrap().value;
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn disk_profile_close_to_inverse_pi() {
        let p = phi_profile(&disk(), Vec2::new(0.0, 1.0), 100.0, 800).unwrap();
        assert!((p * PI - 1.0).abs() < 0.05, "{}", p * PI);
    }

    #[test]
    fn profile_monotone_in_r_max() {
        let d = quartic(0.0);
        let xi = Vec2::from_angle(0.05);
        let a = phi_profile(&d, xi, 30.0, 200).unwrap();
        let b = phi_profile(&d, xi, 60.0, 200).unwrap();
        assert!(b >= a);
    }

    #[test]
    fn tail_envelope_bounds_numeric() {
        let d = quartic(1.0);
        let per = d.base().perimeter();
        for lam in [0.5, 5.0, 50.0] {
            let v = ft_numeric(&d, Vec2::from_angle(0.2), lam).unwrap();
            assert!(v.norm() <= tail_envelope(per, lam));
        }
    }

    #[test]
    fn lattice_transform_matches_ft_numeric() {
        let d = RotatedDomain::new(Superellipse::new(4, 1.0, 0.8).unwrap(), 0.37);
        let t = 13.7;
        let lt = LatticeTransform::new(&d, t, 30.0);
        let rows = vec![
            (0, vec![1, 2, 17]),
            (3, vec![-20, -19, -18, 0, 5]),
            (21, vec![-7, 20]),
        ];
        let vals = lt.eval_rows(&rows).unwrap();
        for ((k2, k1s), vs) in rows.iter().zip(&vals) {
            for (k1, v) in k1s.iter().zip(vs) {
                let k = Vec2::new(*k1 as f64, *k2 as f64);
                let want = ft_numeric(&d, k.normalized(), t * k.norm()).unwrap();
                assert!((v - want).norm() < 1e-9 * want.norm() + 1e-14, "{k:?}: {v} {want}");
            }
        }
    }

    #[test]
    fn ladder_is_closed_under_doubling() {
        for n in 1..500 {
            let p = panel_ladder(n);
            assert!(p >= n);
            assert_eq!(panel_ladder(2 * p), 2 * p);
        }
    }
}
