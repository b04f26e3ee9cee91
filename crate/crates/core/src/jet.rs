//! Truncated bivariate Taylor polynomials ("jets").
//!
//! A [`Jet2`] holds the Taylor coefficients `c[i][j]` of a function of two
//! variables `(s, u)` about a base point, truncated at total degree `degree`.
//! Arithmetic propagates the coefficients exactly (up to rounding), which gives
//! high-order partial derivatives of closed-form expressions without
//! finite-difference noise. Univariate use just ignores the second variable.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    degree: usize,
    coef: Vec<f64>,
}

impl Jet2 {
    fn zeros(degree: usize) -> Self {
        Self {
            degree,
            coef: vec![0.0; (degree + 1) * (degree + 1)],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.degree + 1) + j
    }

    pub fn constant(value: f64, degree: usize) -> Self {
        let mut j = Self::zeros(degree);
        j.coef[0] = value;
        j
    }

    /// The first independent variable, with value `value` at the base point.
    pub fn var_s(value: f64, degree: usize) -> Self {
        let mut j = Self::constant(value, degree);
        if degree >= 1 {
            let k = j.idx(1, 0);
            j.coef[k] = 1.0;
        }
        j
    }

    /// The second independent variable.
    pub fn var_u(value: f64, degree: usize) -> Self {
        let mut j = Self::constant(value, degree);
        if degree >= 1 {
            let k = j.idx(0, 1);
            j.coef[k] = 1.0;
        }
        j
    }

    /// Affine jet `value + ds·s + du·u`.
    pub fn affine(value: f64, ds: f64, du: f64, degree: usize) -> Self {
        let mut j = Self::constant(value, degree);
        if degree >= 1 {
            let a = j.idx(1, 0);
            let b = j.idx(0, 1);
            j.coef[a] = ds;
            j.coef[b] = du;
        }
        j
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self) -> f64 {
        self.coef[0]
    }

    /// Taylor coefficient of `s^i u^j`.
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coef[self.idx(i, j)]
        }
    }

    /// Partial derivative `∂_s^i ∂_u^j` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        self.coefficient(i, j) * factorial(i) * factorial(j)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            degree: self.degree,
            coef: self.coef.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add_const(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.coef[0] += k;
        out
    }

    /// `f(self)` for a univariate `f` given its derivatives `f^{(n)}(a)`,
    /// `n = 0..=degree`, at the constant term `a` of `self`.
    pub fn compose(&self, derivs: &[f64]) -> Self {
        debug_assert!(derivs.len() > self.degree);
        let mut h = self.clone();
        h.coef[0] = 0.0;
        let d = self.degree;
        let mut acc = Self::constant(derivs[d] / factorial(d), d);
        for n in (0..d).rev() {
            acc = &acc * &h;
            acc.coef[0] += derivs[n] / factorial(n);
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.degree + 1])
    }

    pub fn ln(&self) -> Self {
        let a = self.value();
        let mut d = Vec::with_capacity(self.degree + 1);
        d.push(a.ln());
        // d^n/dx^n ln x = (-1)^{n-1} (n-1)! x^{-n}
        for n in 1..=self.degree {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            d.push(sign * factorial(n - 1) * a.powi(-(n as i32)));
        }
        self.compose(&d)
    }

    /// `self^p` for a positive base value.
    pub fn powf(&self, p: f64) -> Self {
        let a = self.value();
        let mut d = Vec::with_capacity(self.degree + 1);
        let mut falling = 1.0;
        for n in 0..=self.degree {
            d.push(falling * a.powf(p - n as f64));
            falling *= p - n as f64;
        }
        self.compose(&d)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0, self.degree);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn recip(&self) -> Self {
        self.powf(-1.0)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// `|self|`, valid when the base value is nonzero.
    pub fn abs(&self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let d: Vec<f64> = (0..=self.degree).map(|n| cycle[n % 4]).collect();
        self.compose(&d)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let d: Vec<f64> = (0..=self.degree).map(|n| cycle[n % 4]).collect();
        self.compose(&d)
    }
}

impl<'a> Mul<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn mul(self, o: &Jet2) -> Jet2 {
        let d = self.degree;
        let mut out = Jet2::zeros(d);
        for i1 in 0..=d {
            for j1 in 0..=(d - i1) {
                let a = self.coef[self.idx(i1, j1)];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..=(d - i1 - j1) {
                    for j2 in 0..=(d - i1 - j1 - i2) {
                        let k = out.idx(i1 + i2, j1 + j2);
                        out.coef[k] += a * o.coef[o.idx(i2, j2)];
                    }
                }
            }
        }
        out
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        &self * &o
    }
}

impl<'a> Add<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn add(self, o: &Jet2) -> Jet2 {
        Jet2 {
            degree: self.degree,
            coef: self.coef.iter().zip(&o.coef).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        &self + &o
    }
}

impl<'a> Sub<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn sub(self, o: &Jet2) -> Jet2 {
        Jet2 {
            degree: self.degree,
            coef: self.coef.iter().zip(&o.coef).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        &self - &o
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
