//! Acceptance suite. Runs every criterion in sequence, prints one
//! `PASS`/`FAIL` line each and exits nonzero if any fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latdisc::counting::{count_brute, count_exact};
use latdisc::experiments::scaling_for_theta;
use latdisc::expsum::{difference_transform, DifferencedInstance, hq_determinant, Amplitude, Ball, ExpSumInstance, Phase};
use latdisc::fourier::{ft_asymptotic, ft_numeric, randol_slope};
use latdisc::jet::Jet2;
use latdisc::oscillatory::{bump_jet, stationary_phase_1d, JetFunction};
use latdisc::poisson::sandwich_check;
use latdisc::quadrature::GaussLegendre;
use latdisc::stats::{kendall_tau, log_space};
use latdisc::{RotatedDomain, Superellipse, Vec2};

const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(120);
const DISK_COUNT_T10: u64 = 317;
const DISK_EXPONENT_MAX: f64 = 0.68;
const RANDOL_WINDOW_4: (f64, f64) = (0.70, 0.80);
const RANDOL_WINDOW_6: (f64, f64) = (0.78, 0.88);
const GENERIC_EXPONENT_MAX: f64 = 0.70;
const GENERIC_FRACTION: f64 = 0.8;
const TAU_MAX: f64 = 0.1;
const BESSEL_TOL: f64 = 1e-8;
const PROFILE_SLOPE_TOL: f64 = 0.05;
const DIFFERENCE_TOL: f64 = 1e-10;
/// Smallest `|Δ^q F| / Σ|F(vertex)|` at which the difference oracle is
/// accurate to about 1e-11.
const ORACLE_CONDITIONING: f64 = 1e-4;
const HQ_TOL: f64 = 1e-6;
const HESSIAN_TOL: f64 = 1e-4;
const HESSIAN_K_MIN: f64 = 0.2;

fn unit(omega: u32, theta: f64) -> RotatedDomain {
    RotatedDomain::new(Superellipse::unit(omega).unwrap(), theta)
}

/// `J₁(x) = (1/π)∫₀^π cos(τ − x sin τ) dτ` by composite Gauss–Legendre.
fn bessel_j1(x: f64) -> f64 {
    let gl = GaussLegendre::new(20);
    let panels = (x.abs() as usize / 2).max(8) * 2;
    gl.integrate_composite(0.0, PI, panels, |s| (s - x * s.sin()).cos()) / PI
}

fn oracle_equivalence() -> (bool, String) {
    let start = Instant::now();
    let mut cases = 0;
    let mut mismatches = 0;
    for omega in [2, 4, 6] {
        for theta in [0.0, 0.3, 1.0, 2.399] {
            let d = unit(omega, theta);
            for i in 2..=128 {
                let t = i as f64 * 0.5;
                let e = count_exact(&d, t).unwrap();
                let b = count_brute(&d, t).unwrap();
                cases += 1;
                if e.count != b.count {
                    mismatches += 1;
                }
            }
        }
    }
    let el = start.elapsed();
    (
        mismatches == 0 && el < ORACLE_TIME_LIMIT,
        format!("{cases} cases, {mismatches} mismatches, {:.1}s", el.as_secs_f64()),
    )
}

fn disk_sanity() -> (bool, String) {
    let c = count_exact(&unit(2, 0.0), 10.0).unwrap().count;
    let rows = scaling_for_theta(&unit(2, 0.0), 6, 14, 64).unwrap();
    let e = rows[0].fitted_exponent;
    (
        c == DISK_COUNT_T10 && e <= DISK_EXPONENT_MAX,
        format!("count(10) = {c}, fitted exponent {e:.4}"),
    )
}

fn randol_sharpness() -> (bool, String) {
    let start = Instant::now();
    let e4 = scaling_for_theta(&unit(4, 0.0), 6, 14, 64).unwrap()[0].fitted_exponent;
    let e6 = scaling_for_theta(&unit(6, 0.0), 6, 14, 64).unwrap()[0].fitted_exponent;
    let inside = |e: f64, w: (f64, f64)| e >= w.0 && e <= w.1;
    (
        inside(e4, RANDOL_WINDOW_4) && inside(e6, RANDOL_WINDOW_6),
        format!(
            "omega=4 exponent {e4:.4}, omega=6 exponent {e6:.4}, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn generic_rotations() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut below = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let theta = rng.gen_range(0.0..PI);
        let e = scaling_for_theta(&unit(4, theta), 6, 14, 64).unwrap()[0].fitted_exponent;
        worst = worst.max(e);
        if e <= GENERIC_EXPONENT_MAX {
            below += 1;
        }
    }
    (
        below as f64 >= GENERIC_FRACTION * 20.0,
        format!("{below}/20 exponents <= {GENERIC_EXPONENT_MAX}, largest {worst:.4}"),
    )
}

fn fourier_asymptotics() -> (bool, String) {
    let n = (40.0 * (1000f64 / 50.0).log10()).round() as usize + 1;
    let lambdas = log_space(50.0, 1000.0, n);
    // One rank correlation per domain over the pooled (λ, error) pairs: at a
    // fixed ξ the scaled error is a bounded beat of two oscillations whose
    // phase alone sets the sign of a short-sample τ.
    let mut worst_tau = f64::NEG_INFINITY;
    let mut directions = 0;
    for d in [unit(4, 0.3), unit(6, 1.1), unit(2, 0.0)] {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for i in 0..32 {
            let xi = Vec2::from_angle((i as f64 + 0.37) * PI / 16.0);
            if d.delta_xi(xi).unwrap() < 0.5 {
                continue;
            }
            directions += 1;
            for &l in &lambdas {
                let num = ft_numeric(&d, xi, l).unwrap();
                let asym = ft_asymptotic(&d, xi, l).unwrap().value;
                xs.push(l);
                ys.push((num - asym).norm() * l.powf(2.5));
            }
        }
        worst_tau = worst_tau.max(kendall_tau(&xs, &ys));
    }
    let disk = unit(2, 0.0);
    let mut worst_rel: f64 = 0.0;
    // λ = m + 3/8 sits at a crest of J₁(2πλ), away from its zeros
    for m in log_space(1.0, 700.0, 20) {
        let l = m.round() + 0.375;
        let want = bessel_j1(TAU * l) / l;
        let got: Complex64 = ft_numeric(&disk, Vec2::new(0.6, 0.8), l).unwrap();
        worst_rel = worst_rel.max((got - want).norm() / want.abs());
    }
    (
        worst_tau <= TAU_MAX && worst_rel <= BESSEL_TOL,
        format!("{directions} directions, largest Kendall tau {worst_tau:.4}, Bessel relative error {worst_rel:.2e}"),
    )
}

fn randol_profile() -> (bool, String) {
    let s4 = randol_slope(&unit(4, 0.0), 12).unwrap().slope;
    let s6 = randol_slope(&unit(6, 0.0), 12).unwrap().slope;
    let ok = (s4 + 1.0 / 3.0).abs() <= PROFILE_SLOPE_TOL && (s6 + 0.4).abs() <= PROFILE_SLOPE_TOL;
    (ok, format!("omega=4 slope {s4:.4}, omega=6 slope {s6:.4}"))
}

fn certified_stationary_phase() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    let mut violations = 0;
    let mut tightest: f64 = 0.0;
    for _ in 0..50 {
        let c: f64 = rng.gen_range(-0.5..0.5);
        let w: f64 = rng.gen_range(0.8..2.0);
        let (a0, a1, a2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let u = JetFunction::new((c - w, c + w), 7, move |x: &Jet2| {
            let poly = (&x.scale(a1) + &(x * x).scale(a2)).add_const(a0);
            &poly * &bump_jet(x, c, w)
        });
        for lambda in [10.0, 100.0, 1000.0] {
            for k in 1..=3 {
                let r = stationary_phase_1d(&u, lambda, k).unwrap();
                runs += 1;
                if !r.within_bound() {
                    violations += 1;
                }
                tightest = tightest.max(r.observed_error / r.certified_bound);
            }
        }
    }
    (
        violations == 0,
        format!("{runs} runs, {violations} violations, largest error/bound {tightest:.3}"),
    )
}

fn poisson_sandwich() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut violations = 0;
    for _ in 0..20 {
        let t: f64 = rng.gen_range(16.0..48.0);
        let theta: f64 = rng.gen_range(0.0..PI);
        if !sandwich_check(&unit(4, theta), t, t.powf(-1.0 / 3.0)).unwrap() {
            violations += 1;
        }
    }
    (violations == 0, format!("20 cases, {violations} violations"))
}

fn random_phase(rng: &mut ChaCha8Rng, i: usize) -> Phase {
    match i % 3 {
        0 => Phase::Trig(
            (0..3)
                .map(|_| {
                    (
                        rng.gen_range(-1.0..1.0),
                        Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                        rng.gen_range(0.0..TAU),
                    )
                })
                .collect(),
        ),
        1 => {
            // one term of degree 5 keeps the q-th difference away from zero
            let mut terms: Vec<(u32, u32, f64)> = (0..5)
                .map(|_| (rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(-1.0..1.0)))
                .collect();
            let i = rng.gen_range(0..=5);
            terms.push((i, 5 - i, rng.gen_range(0.5..1.0)));
            Phase::Polynomial(terms)
        }
        _ => Phase::Support {
            // ellipses: the support function of a flat-pointed domain is not smooth
            domain: RotatedDomain::new(
                Superellipse::new(2, rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5)).unwrap(),
                rng.gen_range(0.0..PI),
            ),
            shift: Vec2::from_angle(rng.gen_range(0.0..TAU)) * 2.0,
        },
    }
}

/// Sum of `|F|` over the `2^q` points entering the forward difference; the
/// difference itself cannot be trusted below about `ε` times this.
fn difference_magnitude(d: &DifferencedInstance, x: Vec2) -> f64 {
    (0..1usize << d.q)
        .map(|mask| {
            let p = d
                .offsets()
                .iter()
                .enumerate()
                .filter(|(l, _)| mask >> l & 1 == 1)
                .fold(x, |p, (_, v)| p + *v);
            d.base.f.value(p).abs()
        })
        .sum()
}

fn differencing_identity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for q in 1..=3 {
        let mut accepted = 0;
        let mut i = 0;
        while accepted < 100 {
            i += 1;
            let inst = ExpSumInstance::new(
                rng.gen_range(1.0..100.0),
                rng.gen_range(20.0..100.0),
                Amplitude::Bump {
                    center: Vec2::new(0.0, 0.0),
                    radius: 0.5,
                    height: 1.0,
                },
                random_phase(&mut rng, i),
                Ball {
                    center: Vec2::new(0.0, 0.0),
                    radius: 0.9,
                },
            )
            .unwrap();
            let shifts: Vec<(i64, i64)> = (0..q)
                .map(|_| loop {
                    let r = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                    if r != (0, 0) {
                        break r;
                    }
                })
                .collect();
            let h: Vec<u64> = (0..q).map(|_| rng.gen_range(1..=2)).collect();
            let d = difference_transform(&inst, q, &shifts, &h).unwrap();
            // the identity is claimed on Ω_q only
            let x = loop {
                let x = Vec2::from_angle(rng.gen_range(0.0..TAU)) * rng.gen_range(0.0..0.9);
                if d.in_omega_q(x) {
                    break x;
                }
            };
            let rhs = d.forward_difference(x);
            if rhs.abs() < ORACLE_CONDITIONING * difference_magnitude(&d, x) {
                skipped += 1;
                continue;
            }
            let lhs = d.f_q(x) * d.difference_scale();
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
            accepted += 1;
        }
    }
    (
        worst <= DIFFERENCE_TOL,
        format!("300 samples ({skipped} ill-conditioned draws redrawn), largest relative error {worst:.2e}"),
    )
}

fn determinant_identity() -> (bool, String) {
    let disk = unit(2, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_disk: f64 = 0.0;
    let mut worst_scale: f64 = 0.0;
    for q in 1..=3usize {
        let want = -(1..=q).map(|v| v as f64).product::<f64>().powi(2);
        for _ in 0..10 {
            let xi = Vec2::from_angle(rng.gen_range(0.0..TAU));
            let h = hq_determinant(&disk, xi, xi.perp(), xi, q).unwrap();
            worst_disk = worst_disk.max((h - want).abs() / want.abs());
        }
        for omega in [2, 4, 6] {
            let d = unit(omega, rng.gen_range(0.0..PI));
            let y = loop {
                let y = Vec2::from_angle(rng.gen_range(0.0..TAU));
                if d.curvature(y).unwrap() > 0.2 {
                    break y;
                }
            };
            let v1 = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let v2 = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let base = hq_determinant(&d, y, v1, v2, q).unwrap();
            for n in [2.0, 3.0, 5.0] {
                let scaled = hq_determinant(&d, y, v1 * n, v2 * n, q).unwrap();
                let expect = base * f64::powi(n, 2 * q as i32 + 4);
                worst_scale = worst_scale.max((scaled - expect).abs() / expect.abs());
            }
        }
    }
    (
        worst_disk <= HQ_TOL && worst_scale <= HQ_TOL,
        format!("disk identity error {worst_disk:.2e}, scaling error {worst_scale:.2e}"),
    )
}

fn hessian_spectrum() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 50 {
        let omega = [2, 4, 6, 8][rng.gen_range(0..4)];
        let base = Superellipse::new(omega, rng.gen_range(0.6..1.6), rng.gen_range(0.6..1.6)).unwrap();
        let d = RotatedDomain::new(base, rng.gen_range(0.0..PI));
        let xi = Vec2::from_angle(rng.gen_range(0.0..TAU)) * rng.gen_range(0.5..3.0);
        let k = d.curvature(xi).unwrap();
        if k < HESSIAN_K_MIN {
            continue;
        }
        cases += 1;
        let [lo, hi] = d.support_hessian(xi, None, 0.0).unwrap().eigenvalues();
        let want = 1.0 / (xi.norm() * k);
        let err = lo.abs().min(hi.abs()) / want + (lo.abs().max(hi.abs()) - want).abs() / want;
        worst = worst.max(err);
    }
    (worst <= HESSIAN_TOL, format!("50 cases, largest relative error {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> (bool, String)); 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("disk sanity", disk_sanity),
        ("flat-point sharpness", randol_sharpness),
        ("generic rotations", generic_rotations),
        ("Fourier asymptotics", fourier_asymptotics),
        ("flat-point profile", randol_profile),
        ("certified stationary phase", certified_stationary_phase),
        ("Poisson sandwich", poisson_sandwich),
        ("differencing identity", differencing_identity),
        ("determinant identity", determinant_identity),
        ("Hessian spectrum", hessian_spectrum),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = run();
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
