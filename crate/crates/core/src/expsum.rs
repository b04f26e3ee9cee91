//! Two-dimensional exponential sums `S(T, M*; G, F) = Σ_m G(m/M*) e(T F(m/M*))`,
//! their Weyl–van der Corput differencing, and the integer direction vectors
//! and derivative determinants attached to the support function.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::RotatedDomain;
use crate::jet::{factorial, Jet2};
use crate::linalg::Vec2;
use crate::quadrature::GaussLegendre;

/// Largest `M*` accepted by direct summation (cost `O(M*²)`).
pub const MSTAR_LIMIT: f64 = 1e4;

/// Curvature floor for [`hq_determinant`].
pub const HQ_CURVATURE_FLOOR: f64 = 1e-4;

/// Smooth compactly supported amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    /// `height·exp(−1/(1 − |x − center|²/radius²))`
    Bump { center: Vec2, radius: f64, height: f64 },
    Zero,
}

impl Amplitude {
    pub fn value(&self, x: Vec2) -> f64 {
        match self {
            Amplitude::Bump {
                center,
                radius,
                height,
            } => {
                let d = x - *center;
                let r2 = d.dot(d) / (radius * radius);
                if r2 >= 1.0 {
                    0.0
                } else {
                    height * (-1.0 / (1.0 - r2)).exp()
                }
            }
            Amplitude::Zero => 0.0,
        }
    }

    /// Declared bound on `|G|`.
    pub fn bound(&self) -> f64 {
        match self {
            Amplitude::Bump { height, .. } => height.abs() * (-1f64).exp(),
            Amplitude::Zero => 0.0,
        }
    }

    fn support_ball(&self) -> Option<(Vec2, f64)> {
        match self {
            Amplitude::Bump { center, radius, .. } => Some((*center, *radius)),
            Amplitude::Zero => None,
        }
    }
}

/// Smooth phases, evaluated on jets so that derivatives of any order are exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    /// `Σ c·x₁^i·x₂^j` over `(i, j, c)`
    Polynomial(Vec<(u32, u32, f64)>),
    /// `Σ c·sin(⟨w, x⟩ + φ)` over `(c, w, φ)`
    Trig(Vec<(f64, Vec2, f64)>),
    /// `H_θ(x + shift)`, smooth away from `x = −shift`
    Support { domain: RotatedDomain, shift: Vec2 },
}

impl Phase {
    pub fn jet(&self, x: &Jet2, y: &Jet2) -> Jet2 {
        let d = x.degree();
        match self {
            Phase::Polynomial(terms) => {
                let mut acc = Jet2::constant(0.0, d);
                for &(i, j, c) in terms {
                    acc = &acc + &(&x.powi(i) * &y.powi(j)).scale(c);
                }
                acc
            }
            Phase::Trig(terms) => {
                let mut acc = Jet2::constant(0.0, d);
                for &(c, w, phi) in terms {
                    let arg = (&x.scale(w.x) + &y.scale(w.y)).add_const(phi);
                    acc = &acc + &arg.sin().scale(c);
                }
                acc
            }
            Phase::Support { domain, shift } => {
                domain.support_jet(&x.add_const(shift.x), &y.add_const(shift.y))
            }
        }
    }

    pub fn value(&self, p: Vec2) -> f64 {
        match self {
            Phase::Polynomial(terms) => terms
                .iter()
                .map(|&(i, j, c)| c * p.x.powi(i as i32) * p.y.powi(j as i32))
                .sum(),
            Phase::Trig(terms) => terms.iter().map(|&(c, w, phi)| c * (w.dot(p) + phi).sin()).sum(),
            Phase::Support { domain, shift } => {
                let v = p + *shift;
                if v.is_zero() {
                    0.0
                } else {
                    domain.support(v).unwrap_or(f64::NAN)
                }
            }
        }
    }

    /// All partials `∂₁^i∂₂^{n−i}F(p)`, `i = 0..=n`.
    pub fn partials(&self, p: Vec2, n: usize) -> Vec<f64> {
        let j = self.jet(&Jet2::affine(p.x, 1.0, 0.0, n), &Jet2::affine(p.y, 0.0, 1.0, n));
        (0..=n).map(|i| j.partial(i, n - i)).collect()
    }
}

/// Open disk `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec2,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, x: Vec2) -> bool {
        (x - self.center).norm() < self.radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSumInstance {
    pub t: f64,
    pub m_star: f64,
    pub g: Amplitude,
    pub f: Phase,
    pub omega: Ball,
}

impl ExpSumInstance {
    /// Validates `T > 0`, `M* > 1`, `supp G ⊂ Ω` (exactly for the disk
    /// support, then on a 64×64 sample grid).
    pub fn new(t: f64, m_star: f64, g: Amplitude, f: Phase, omega: Ball) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return invalid("T must be positive");
        }
        if !(m_star > 1.0 && m_star.is_finite()) {
            return invalid("M* must exceed 1");
        }
        if !(omega.radius > 0.0) {
            return invalid("Omega must have positive radius");
        }
        if let Some((c, r)) = g.support_ball() {
            if (c - omega.center).norm() + r >= omega.radius {
                return invalid("supp G must lie inside Omega");
            }
            for i in 0..64 {
                for j in 0..64 {
                    let x = c + Vec2::new(
                        r * (2.0 * (i as f64 + 0.5) / 64.0 - 1.0),
                        r * (2.0 * (j as f64 + 0.5) / 64.0 - 1.0),
                    );
                    if g.value(x) != 0.0 && !omega.contains(x) {
                        return invalid("supp G must lie inside Omega");
                    }
                }
            }
        }
        Ok(Self {
            t,
            m_star,
            g,
            f,
            omega,
        })
    }

    /// Smallest `c₀` with `Ω ⊆ c₀B(0, 1)`.
    pub fn c0(&self) -> f64 {
        self.omega.center.norm() + self.omega.radius
    }
}

/// `Σ_m G(m/M*) e(T·F(m/M*))` over lattice points with `G(m/M*) ≠ 0`, and
/// `Σ|G(m/M*)|`.
fn lattice_sum<G, F>(m_star: f64, t: f64, support: Option<(Vec2, f64)>, g: G, f: F) -> Result<(Complex64, f64)>
where
    G: Fn(Vec2) -> f64,
    F: Fn(Vec2) -> f64,
{
    if m_star > MSTAR_LIMIT {
        return Err(Error::Refused(format!("M* = {m_star} exceeds {MSTAR_LIMIT}")));
    }
    let (c, r) = match support {
        Some(s) => s,
        None => return Ok((Complex64::new(0.0, 0.0), 0.0)),
    };
    let lo1 = ((c.x - r) * m_star).floor() as i64;
    let hi1 = ((c.x + r) * m_star).ceil() as i64;
    let lo2 = ((c.y - r) * m_star).floor() as i64;
    let hi2 = ((c.y + r) * m_star).ceil() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for m2 in lo2..=hi2 {
        for m1 in lo1..=hi1 {
            let x = Vec2::new(m1 as f64 / m_star, m2 as f64 / m_star);
            let gv = g(x);
            if gv == 0.0 {
                continue;
            }
            sum += Complex64::from_polar(gv, -TAU * t * f(x));
            abs += gv.abs();
        }
    }
    Ok((sum, abs))
}

fn check_triangle(sum: Complex64, abs: f64) -> Result<Complex64> {
    if sum.norm() > abs * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::PrecisionFailure(format!(
            "|S| = {} exceeds sum of |G| = {abs}",
            sum.norm()
        )));
    }
    Ok(sum)
}

/// `S(T, M*; G, F)` by direct summation.
pub fn eval_sum(inst: &ExpSumInstance) -> Result<Complex64> {
    let (s, a) = lattice_sum(
        inst.m_star,
        inst.t,
        inst.g.support_ball(),
        |x| inst.g.value(x),
        |x| inst.f.value(x),
    )?;
    check_triangle(s, a)
}

/// Differenced instance: amplitude `G_q`, phase `F_q` and domain `Ω_q`.
#[derive(Debug, Clone)]
pub struct DifferencedInstance {
    pub base: ExpSumInstance,
    pub q: usize,
    pub shifts: Vec<(i64, i64)>,
    pub h: Vec<u64>,
    /// `v_l = h_l r_l / M*`
    offsets: Vec<Vec2>,
    /// Coefficients of `Π_l (r_l,₁X + r_l,₂Y)` at `X^i Y^{q−i}`.
    form: Vec<f64>,
    rule: Vec<(f64, f64)>,
}

/// Gauss–Legendre points per dimension for `F_q`.
pub const FQ_NODES: usize = 12;

/// Builds `G_q`, `F_q` and `Ω_q` for shifts `r_l` and steps `h_l`.
pub fn difference_transform(
    inst: &ExpSumInstance,
    q: usize,
    shifts: &[(i64, i64)],
    h: &[u64],
) -> Result<DifferencedInstance> {
    if q < 1 || shifts.len() != q || h.len() != q {
        return invalid("need q >= 1 with q shifts and q steps");
    }
    if shifts.iter().any(|&(a, b)| a == 0 && b == 0) {
        return invalid("shifts must be nonzero");
    }
    if h.contains(&0) {
        return invalid("steps must be positive");
    }
    if q > 6 {
        return invalid("q above 6 is not supported");
    }
    let offsets: Vec<Vec2> = shifts
        .iter()
        .zip(h)
        .map(|(&(a, b), &hl)| Vec2::new(a as f64, b as f64) * (hl as f64 / inst.m_star))
        .collect();
    let mut form = vec![1.0];
    for &(a, b) in shifts {
        let mut next = vec![0.0; form.len() + 1];
        for (i, c) in form.iter().enumerate() {
            next[i + 1] += c * a as f64;
            next[i] += c * b as f64;
        }
        form = next;
    }
    let rule = GaussLegendre::new(FQ_NODES).mapped(0.0, 1.0).collect();
    Ok(DifferencedInstance {
        base: inst.clone(),
        q,
        shifts: shifts.to_vec(),
        h: h.to_vec(),
        offsets,
        form,
        rule,
    })
}

impl DifferencedInstance {
    pub fn offsets(&self) -> &[Vec2] {
        &self.offsets
    }

    /// `Q = 2^q`
    pub fn big_q(&self) -> u32 {
        1 << self.q
    }

    /// `𝓗 = h₁⋯h_q`
    pub fn script_h(&self) -> f64 {
        self.h.iter().map(|&v| v as f64).product()
    }

    fn vertices(&self, x: Vec2) -> impl Iterator<Item = Vec2> + '_ {
        (0..1usize << self.q).map(move |mask| {
            let mut p = x;
            for (l, v) in self.offsets.iter().enumerate() {
                if mask >> l & 1 == 1 {
                    p = p + *v;
                }
            }
            p
        })
    }

    /// `x ∈ Ω_q` iff `x + Σu_l v_l ∈ Ω` for every `u ∈ {0,1}^q` (the zonotope
    /// spanned by the shifts then lies in the convex `Ω`).
    pub fn in_omega_q(&self, x: Vec2) -> bool {
        self.vertices(x).all(|p| self.base.omega.contains(p))
    }

    /// `G_q(x) = Π_{u∈{0,1}^q} G(x + Σu_l v_l)` on `Ω_q`, zero elsewhere.
    pub fn g_q(&self, x: Vec2) -> f64 {
        if !self.in_omega_q(x) {
            return 0.0;
        }
        self.vertices(x).map(|p| self.base.g.value(p)).product()
    }

    /// `⟨r₁,∇⟩⋯⟨r_q,∇⟩F(p)`
    pub fn directional_derivative(&self, p: Vec2) -> f64 {
        let d = self.base.f.partials(p, self.q);
        self.form.iter().zip(&d).map(|(c, v)| c * v).sum()
    }

    /// `F_q(x) = ∫_{(0,1)^q} ⟨r₁,∇⟩⋯⟨r_q,∇⟩F(x + Σu_l v_l) du` by tensor
    /// Gauss–Legendre quadrature.
    pub fn f_q(&self, x: Vec2) -> f64 {
        let n = self.rule.len();
        let total = n.pow(self.q as u32);
        let mut acc = 0.0;
        for idx in 0..total {
            let mut rem = idx;
            let mut p = x;
            let mut w = 1.0;
            for v in &self.offsets {
                let (u, wu) = self.rule[rem % n];
                rem /= n;
                p = p + *v * u;
                w *= wu;
            }
            acc += w * self.directional_derivative(p);
        }
        acc
    }

    /// `(Δ_{v_q} ∘ ⋯ ∘ Δ_{v₁} F)(x)` with `Δ_v F(x) = F(x + v) − F(x)`.
    pub fn forward_difference(&self, x: Vec2) -> f64 {
        (0..1usize << self.q)
            .map(|mask| {
                let sign = if (self.q - mask.count_ones() as usize).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                let mut p = x;
                for (l, v) in self.offsets.iter().enumerate() {
                    if mask >> l & 1 == 1 {
                        p = p + *v;
                    }
                }
                sign * self.base.f.value(p)
            })
            .sum()
    }

    /// `Π h_l/M*`, the factor relating `F_q` to the forward difference.
    pub fn difference_scale(&self) -> f64 {
        self.script_h() / self.base.m_star.powi(self.q as i32)
    }

    /// `S(𝓗TM*^{−q}, M*; G_q, F_q)`.
    pub fn eval_sum(&self) -> Result<Complex64> {
        let t = self.script_h() * self.base.t / self.base.m_star.powi(self.q as i32);
        let (s, a) = lattice_sum(
            self.base.m_star,
            t,
            self.base.g.support_ball(),
            |x| self.g_q(x),
            |x| self.f_q(x),
        )?;
        check_triangle(s, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdcReport {
    pub q: usize,
    pub t: f64,
    pub m_star: f64,
    pub big_h: f64,
    /// `|S|^Q`
    pub lhs: f64,
    /// `M*^{2Q}/H + M*^{2(Q−1)}/(H₁⋯H_q)·Σ|S(𝓗TM*^{−q}, M*; G_q, F_q)|`
    pub rhs: f64,
    pub ratio: f64,
    pub inner_sums: usize,
}

pub const VDC_CSV_HEADER: &str = "q,T,Mstar,H,lhs,rhs,ratio";

impl VdcReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.q, self.t, self.m_star, self.big_h, self.lhs, self.rhs, self.ratio
        )
    }
}

/// Both sides of the differencing inequality with `H_l = H^{2^{l−q}}` and
/// the inner sums over `1 ≤ h_l < H_l` evaluated directly.
pub fn vdc_inequality_report(
    inst: &ExpSumInstance,
    q: usize,
    shifts: &[(i64, i64)],
    big_h: f64,
) -> Result<VdcReport> {
    if !(big_h > 1.0 && big_h <= inst.m_star) {
        return invalid("need 1 < H <= M*");
    }
    if q < 1 || shifts.len() != q {
        return invalid("need q >= 1 with q shifts");
    }
    let big_q = 1i32 << q;
    let hl: Vec<f64> = (1..=q)
        .map(|l| big_h.powf(2f64.powi(l as i32 - q as i32)))
        .collect();
    let ranges: Vec<u64> = hl.iter().map(|&x| (x.ceil() as u64).saturating_sub(1)).collect();
    let s = eval_sum(inst)?;
    let lhs = s.norm().powi(big_q);
    let mut inner = 0.0;
    let mut inner_sums = 0;
    let total: u64 = ranges.iter().product();
    for idx in 0..total {
        let mut rem = idx;
        let mut h = Vec::with_capacity(q);
        for &r in &ranges {
            h.push(rem % r + 1);
            rem /= r;
        }
        let d = difference_transform(inst, q, shifts, &h)?;
        inner += d.eval_sum()?.norm();
        inner_sums += 1;
    }
    let m = inst.m_star;
    let rhs = m.powi(2 * big_q) / big_h + m.powi(2 * (big_q - 1)) / hl.iter().product::<f64>() * inner;
    Ok(VdcReport {
        q,
        t: inst.t,
        m_star: m,
        big_h,
        lhs,
        rhs,
        ratio: lhs / rhs,
        inner_sums,
    })
}

/// Integer vectors `v₁* = (−N₂, N₁)`, `v₂* = (N₁, N₂)` with `L = N₁² + N₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VStar {
    pub n: i64,
    pub n1: i64,
    pub n2: i64,
    pub v1: (i64, i64),
    pub v2: (i64, i64),
    pub l: i128,
}

/// `N_l = round(ξ_l N)` so that `|ξ_l − N_l/N| ≤ 1/N`; the default
/// `N = ⌈K^{−4q}⌉`.
pub fn construct_vstar(xi: Vec2, q: u32, k: f64, n_override: Option<i64>) -> Result<VStar> {
    if !(k > 0.0 && k < 1.0) {
        return invalid("K must lie in (0, 1)");
    }
    if !xi.is_finite() || (xi.norm() - 1.0).abs() > 1e-9 {
        return invalid("xi must be a unit vector");
    }
    let n = match n_override {
        Some(n) => {
            if (n as f64) < 2.0 * 2f64.sqrt() {
                return invalid("N must be at least 2*sqrt(2)");
            }
            n
        }
        None => {
            let v = k.powf(-4.0 * q as f64).ceil();
            if !(v < 1e15) {
                return Err(Error::OutOfRange(format!("N = {v:e} overflows the integer range")));
            }
            (v as i64).max(3)
        }
    };
    let n1 = (xi.x * n as f64).round() as i64;
    let n2 = (xi.y * n as f64).round() as i64;
    Ok(VStar {
        n,
        n1,
        n2,
        v1: (-n2, n1),
        v2: (n1, n2),
        l: n1 as i128 * n1 as i128 + n2 as i128 * n2 as i128,
    })
}

/// `h_q(y, v₁, v₂) = det(g_ij)` with
/// `g_ij = ∂^{q+2}F/∂u₁∂u_i∂u_j∂u₂^{q−1}(0)` and `F(u) = H_θ(y + u₁v₁ + u₂v₂)`.
/// Derivatives come from Taylor arithmetic on jets.
pub fn hq_determinant(domain: &RotatedDomain, y: Vec2, v1: Vec2, v2: Vec2, q: usize) -> Result<f64> {
    if q < 1 {
        return invalid("q must be >= 1");
    }
    if y.is_zero() || !y.is_finite() {
        return invalid("y must be a nonzero vector");
    }
    let k = domain.curvature(y)?;
    if k < HQ_CURVATURE_FLOOR {
        return Err(Error::OutOfRange(format!(
            "curvature {k:e} at y is below the floor {HQ_CURVATURE_FLOOR:e}"
        )));
    }
    let deg = q + 2;
    let x = Jet2::affine(y.x, v1.x, v2.x, deg);
    let z = Jet2::affine(y.y, v1.y, v2.y, deg);
    let f = domain.support_jet(&x, &z);
    let g11 = f.partial(3, q - 1);
    let g12 = f.partial(2, q);
    let g22 = f.partial(1, q + 1);
    Ok(g11 * g22 - g12 * g12)
}

/// `−q!²K^{−2}`, the value of `h_q` for the tangent/normal pair at a point of
/// curvature `K`.
pub fn hq_tangent_normal(q: usize, k: f64) -> f64 {
    -factorial(q).powi(2) / (k * k)
}

/// `constant·(K^{−12q−1}·T·M*^{6Q−q−6})^{1/(3Q−2)} + remainder` with `Q = 2^q`.
pub fn exponential_sum_bound(k: f64, t: f64, m_star: f64, q: u32, constant: f64, remainder: f64) -> f64 {
    let qf = q as f64;
    let big_q = 2f64.powi(q as i32);
    let inner = k.powf(-12.0 * qf - 1.0) * t * m_star.powf(6.0 * big_q - qf - 6.0);
    constant * inner.powf(1.0 / (3.0 * big_q - 2.0)) + remainder
}
