//! Forward-mode differentiation of scalar fields on a two-dimensional chart.
//!
//! A [`Jet3`] holds the truncated bivariate Taylor expansion of a field about a
//! point: the value and every partial derivative up to third order, stored as
//! ten Taylor coefficients in graded order
//!
//! ```text
//! [c00 | c10 c01 | c20 c11 c02 | c30 c21 c12 c03]
//! ```
//!
//! where `cij = ∂₁ⁱ∂₂ʲ f / (i! j!)`. Mixed-partial symmetry is structural since
//! only one coefficient exists per multi-index.
//!
//! Each jet also carries the order through which its coefficients are exact.
//! Seeded coordinates are exact through order 3; taking a partial derivative
//! drops one order, and arithmetic keeps the minimum of its operands. The
//! curvature pipeline needs order 3 in the map fields: the coframe holds first
//! derivatives of the fields, the connection first derivatives of the coframe,
//! and the curvature one more.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// Highest differentiation order carried by a jet.
pub const MAX_ORDER: u8 = 3;

const NCOEF: usize = 10;

/// Chart coordinates of a point of the two-dimensional base space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn coord(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X1 => self.x1,
            Axis::X2 => self.x2,
        }
    }

    pub fn offset(&self, d1: f64, d2: f64) -> Self {
        Self::new(self.x1 + d1, self.x2 + d2)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// One of the two chart axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::X1 => Axis::X2,
            Axis::X2 => Axis::X1,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        if i == 0 {
            Axis::X1
        } else {
            Axis::X2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("{op} is undefined at value {value}")]
    OutOfDomain { op: &'static str, value: f64 },
}

const fn idx(i: usize, j: usize) -> usize {
    let k = i + j;
    k * (k + 1) / 2 + j
}

const fn exponents(n: usize) -> (usize, usize) {
    let mut k = 0;
    while (k + 1) * (k + 2) / 2 <= n {
        k += 1;
    }
    let j = n - k * (k + 1) / 2;
    (k - j, j)
}

const fn grade(n: usize) -> u8 {
    let (i, j) = exponents(n);
    (i + j) as u8
}

const NTRIPLES: usize = 35;

/// (out, a, b) index triples of the truncated Cauchy product.
const MUL_TABLE: [(usize, usize, usize); NTRIPLES] = {
    let mut t = [(0usize, 0usize, 0usize); NTRIPLES];
    let mut n = 0;
    let mut out = 0;
    while out < NCOEF {
        let (i, j) = exponents(out);
        let mut k = 0;
        while k <= i {
            let mut l = 0;
            while l <= j {
                t[n] = (out, idx(k, l), idx(i - k, j - l));
                n += 1;
                l += 1;
            }
            k += 1;
        }
        out += 1;
    }
    t
};

/// Value and partial derivatives through third order of a scalar field at a
/// point of a two-dimensional chart.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet3 {
    c: [f64; NCOEF],
    order: u8,
}

impl fmt::Debug for Jet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet3")
            .field("v", &self.value())
            .field("d1", &self.d1())
            .field("d2", &self.d2())
            .field("d3", &self.d3())
            .field("order", &self.order)
            .finish()
    }
}

impl Default for Jet3 {
    fn default() -> Self {
        Self::constant(0.0)
    }
}

impl Jet3 {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; NCOEF];
        c[0] = v;
        Self { c, order: MAX_ORDER }
    }

    /// The coordinate function `x_axis` expanded about `v`.
    pub fn var(axis: Axis, v: f64) -> Self {
        let mut j = Self::constant(v);
        j.c[1 + axis.index()] = 1.0;
        j
    }

    /// Seeded coordinate jets `(x1, x2)` at `p`.
    pub fn coordinates(p: Point2) -> (Self, Self) {
        (Self::var(Axis::X1, p.x1), Self::var(Axis::X2, p.x2))
    }

    /// Builds a jet from partial derivatives. `d2 = [∂₁₁, ∂₁₂, ∂₂₂]`,
    /// `d3 = [∂₁₁₁, ∂₁₁₂, ∂₁₂₂, ∂₂₂₂]`.
    pub fn from_derivatives(v: f64, d1: [f64; 2], d2: [f64; 3], d3: [f64; 4]) -> Self {
        Self {
            c: [
                v,
                d1[0],
                d1[1],
                d2[0] / 2.0,
                d2[1],
                d2[2] / 2.0,
                d3[0] / 6.0,
                d3[1] / 2.0,
                d3[2] / 2.0,
                d3[3] / 6.0,
            ],
            order: MAX_ORDER,
        }
    }

    /// Builds a jet from its ten Taylor coefficients in graded order.
    pub fn from_taylor(c: [f64; 10], order: u8) -> Self {
        let mut j = Self { c, order: order.min(MAX_ORDER) };
        j.truncate();
        j
    }

    pub fn taylor(&self) -> &[f64; 10] {
        &self.c
    }

    /// Order through which the stored derivatives are exact.
    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `[∂₁, ∂₂]`
    pub fn d1(&self) -> [f64; 2] {
        [self.c[1], self.c[2]]
    }

    /// `[∂₁₁, ∂₁₂, ∂₂₂]`
    pub fn d2(&self) -> [f64; 3] {
        [2.0 * self.c[3], self.c[4], 2.0 * self.c[5]]
    }

    /// `[∂₁₁₁, ∂₁₁₂, ∂₁₂₂, ∂₂₂₂]`
    pub fn d3(&self) -> [f64; 4] {
        [6.0 * self.c[6], 2.0 * self.c[7], 2.0 * self.c[8], 6.0 * self.c[9]]
    }

    /// All ten derivatives in the order `v, d1, d2, d3`.
    pub fn derivatives(&self) -> [f64; 10] {
        let (d1, d2, d3) = (self.d1(), self.d2(), self.d3());
        [
            self.value(),
            d1[0],
            d1[1],
            d2[0],
            d2[1],
            d2[2],
            d3[0],
            d3[1],
            d3[2],
            d3[3],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    fn truncate(&mut self) {
        for (n, c) in self.c.iter_mut().enumerate() {
            if grade(n) > self.order {
                *c = 0.0;
            }
        }
    }

    fn with_order(mut self, order: u8) -> Self {
        self.order = order.min(self.order);
        self.truncate();
        self
    }

    /// Partial derivative along `axis`; exact through one order less.
    ///
    /// Panics on a jet that only carries a value.
    pub fn partial(&self, axis: Axis) -> Self {
        assert!(self.order > 0, "partial derivative of an order-0 jet");
        let mut c = [0.0; NCOEF];
        for (n, out) in c.iter_mut().enumerate().take(6) {
            let (i, j) = exponents(n);
            *out = match axis {
                Axis::X1 => (i + 1) as f64 * self.c[idx(i + 1, j)],
                Axis::X2 => (j + 1) as f64 * self.c[idx(i, j + 1)],
            };
        }
        Self::from_taylor(c, self.order - 1)
    }

    /// Gradient `[∂₁f, ∂₂f]` as jets.
    pub fn gradient(&self) -> [Self; 2] {
        [self.partial(Axis::X1), self.partial(Axis::X2)]
    }

    /// Composition `f ∘ self` for a univariate `f`, given `[f, f', f'', f''']`
    /// at the value of `self`.
    pub fn compose(&self, f: [f64; 4]) -> Self {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = d3 * (f[3] / 6.0) + d2 * (f[2] / 2.0) + delta * f[1];
        out.c[0] = f[0];
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose([e, e, e, e])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose([c, s, c, s])
    }

    pub fn tanh(&self) -> Self {
        let t = self.value().tanh();
        let s2 = 1.0 - t * t;
        self.compose([t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0)])
    }

    pub fn atan(&self) -> Self {
        let x = self.value();
        let q = 1.0 / (1.0 + x * x);
        self.compose([
            x.atan(),
            q,
            -2.0 * x * q * q,
            (6.0 * x * x - 2.0) * q * q * q,
        ])
    }

    pub fn asinh(&self) -> Self {
        let x = self.value();
        let s = 1.0 / (1.0 + x * x).sqrt();
        let s3 = s * s * s;
        self.compose([x.asinh(), s, -x * s3, (2.0 * x * x - 1.0) * s3 * s * s])
    }

    pub fn ln(&self) -> std::result::Result<Self, JetError> {
        let x = self.value();
        if !(x > 0.0) {
            return Err(JetError::OutOfDomain { op: "ln", value: x });
        }
        // ln(x(1 + w)) with w = (self - x)/x, so that ratios of coefficients
        // are formed before any cancellation
        let mut w = *self;
        for c in w.c.iter_mut() {
            *c /= x;
        }
        Ok(w.compose([x.ln(), 1.0, -1.0, 2.0]))
    }

    pub fn sqrt(&self) -> std::result::Result<Self, JetError> {
        let x = self.value();
        if !(x > 0.0) {
            return Err(JetError::OutOfDomain { op: "sqrt", value: x });
        }
        let s = x.sqrt();
        Ok(self.compose([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)]))
    }

    pub fn recip(&self) -> std::result::Result<Self, JetError> {
        let x = self.value();
        if x == 0.0 || !x.is_finite() {
            return Err(JetError::DivisionByZero);
        }
        let r = 1.0 / x;
        Ok(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    pub fn checked_div(&self, rhs: &Self) -> std::result::Result<Self, JetError> {
        Ok(*self * rhs.recip()?)
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn powi(&self, n: i32) -> std::result::Result<Self, JetError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut acc = Self::constant(1.0).with_order(self.order);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Real power `self^a`; requires a positive value unless `a` is an integer.
    pub fn powf(&self, a: f64) -> std::result::Result<Self, JetError> {
        if a.fract() == 0.0 && a.abs() <= i32::MAX as f64 {
            return self.powi(a as i32);
        }
        let x = self.value();
        if !(x > 0.0) {
            return Err(JetError::OutOfDomain { op: "pow", value: x });
        }
        Ok(self.compose([
            x.powf(a),
            a * x.powf(a - 1.0),
            a * (a - 1.0) * x.powf(a - 2.0),
            a * (a - 1.0) * (a - 2.0) * x.powf(a - 3.0),
        ]))
    }

    /// Two-argument arctangent `atan2(self, x)` with the principal value of
    /// `f64::atan2` and derivatives of `atan(y/x)`.
    pub fn atan2(&self, x: &Self) -> std::result::Result<Self, JetError> {
        let (yv, xv) = (self.value(), x.value());
        if yv == 0.0 && xv == 0.0 {
            return Err(JetError::OutOfDomain { op: "atan2", value: 0.0 });
        }
        let branch = if xv.abs() >= yv.abs() {
            self.checked_div(x)?.atan()
        } else {
            -(x.checked_div(self)?.atan())
        };
        Ok(branch + (yv.atan2(xv) - branch.value()))
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let mut c = [0.0; NCOEF];
        for (n, out) in c.iter_mut().enumerate() {
            *out = self.c[n] + rhs.c[n];
        }
        Jet3::from_taylor(c, self.order.min(rhs.order))
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        self + (-rhs)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(mut self) -> Jet3 {
        for c in self.c.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let order = self.order.min(rhs.order);
        let mut c = [0.0; NCOEF];
        for &(out, a, b) in MUL_TABLE.iter() {
            if grade(out) <= order {
                c[out] += self.c[a] * rhs.c[b];
            }
        }
        Jet3 { c, order }
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(mut self, rhs: f64) -> Jet3 {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet3 {
    type Output = Jet3;
    fn sub(mut self, rhs: f64) -> Jet3 {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(mut self, rhs: f64) -> Jet3 {
        for c in self.c.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Add<Jet3> for f64 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        rhs + self
    }
}

impl Sub<Jet3> for f64 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        -rhs + self
    }
}

impl Mul<Jet3> for f64 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        rhs * self
    }
}

impl AddAssign for Jet3 {
    fn add_assign(&mut self, rhs: Jet3) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet3 {
    fn sub_assign(&mut self, rhs: Jet3) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Jet3 {
    fn sum<I: Iterator<Item = Jet3>>(iter: I) -> Jet3 {
        iter.fold(Jet3::constant(0.0), |a, b| a + b)
    }
}

/// Closed coordinate rectangle `[x1_lo, x1_hi] × [x2_lo, x2_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

impl Rect {
    pub fn new(x1: [f64; 2], x2: [f64; 2]) -> Self {
        Self { x1, x2 }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x1 >= self.x1[0] && p.x1 <= self.x1[1] && p.x2 >= self.x2[0] && p.x2 <= self.x2[1]
    }
}

/// A scalar field on the chart, evaluated to third-order jets.
pub trait ScalarField2: Send + Sync {
    fn eval(&self, p: Point2) -> Result<Jet3>;

    /// Rectangle on which the field is analytic, when restricted.
    fn domain(&self) -> Option<Rect> {
        None
    }
}

/// A field given by a jet expression in the seeded coordinates.
pub struct FnField<F> {
    f: F,
    domain: Option<Rect>,
}

impl<F> FnField<F>
where
    F: Fn(Jet3, Jet3) -> std::result::Result<Jet3, JetError> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, domain: None }
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }
}

impl<F> ScalarField2 for FnField<F>
where
    F: Fn(Jet3, Jet3) -> std::result::Result<Jet3, JetError> + Send + Sync,
{
    fn eval(&self, p: Point2) -> Result<Jet3> {
        let (x1, x2) = Jet3::coordinates(p);
        (self.f)(x1, x2).map_err(|source| Error::Domain { point: p, source })
    }

    fn domain(&self) -> Option<Rect> {
        self.domain
    }
}

/// Central finite-difference estimate of every partial derivative through third
/// order, using only field values. Truncation error is O(h²) at every order.
pub fn fd_oracle(field: &dyn ScalarField2, p: Point2, h: f64) -> Result<Jet3> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("finite-difference step must be positive, got {h}")));
    }
    if let Some(dom) = field.domain() {
        let reach = 2.0 * h;
        let corners = [p.offset(-reach, -reach), p.offset(reach, reach)];
        if !corners.iter().all(|c| dom.contains(*c)) {
            return Err(Error::StencilOutsideDomain { point: p, h });
        }
    }
    let f = |i: i32, j: i32| -> Result<f64> {
        Ok(field.eval(p.offset(i as f64 * h, j as f64 * h))?.value())
    };
    let f00 = f(0, 0)?;
    let (fp0, fm0, f0p, f0m) = (f(1, 0)?, f(-1, 0)?, f(0, 1)?, f(0, -1)?);
    let (fpp, fpm, fmp, fmm) = (f(1, 1)?, f(1, -1)?, f(-1, 1)?, f(-1, -1)?);
    let (f2p, f2m, f02p, f02m) = (f(2, 0)?, f(-2, 0)?, f(0, 2)?, f(0, -2)?);

    let h2 = h * h;
    let h3 = h2 * h;
    let d1 = [(fp0 - fm0) / (2.0 * h), (f0p - f0m) / (2.0 * h)];
    let d2 = [
        (fp0 - 2.0 * f00 + fm0) / h2,
        (fpp - fpm - fmp + fmm) / (4.0 * h2),
        (f0p - 2.0 * f00 + f0m) / h2,
    ];
    let d3 = [
        (f2p - 2.0 * fp0 + 2.0 * fm0 - f2m) / (2.0 * h3),
        (fpp - 2.0 * f0p + fmp - fpm + 2.0 * f0m - fmm) / (2.0 * h3),
        (fpp - 2.0 * fp0 + fpm - fmp + 2.0 * fm0 - fmm) / (2.0 * h3),
        (f02p - 2.0 * f0p + 2.0 * f0m - f02m) / (2.0 * h3),
    ];
    Ok(Jet3::from_derivatives(f00, d1, d2, d3))
}
