use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const EPS: f64 = f64::EPSILON;

/// A complex number with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64, err: f64) -> Self {
        Self { re, im, err }
    }

    pub fn exact(z: Complex64) -> Self {
        Self { re: z.re, im: z.im, err: 0.0 }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Whether the exact value of `other` may coincide with this one.
    pub fn overlaps(&self, other: &ComplexApprox) -> bool {
        (self.value() - other.value()).norm() <= self.err + other.err
    }
}

impl Add for ComplexApprox {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let v = self.value() + o.value();
        Self { re: v.re, im: v.im, err: self.err + o.err + EPS * v.norm() }
    }
}

impl Sub for ComplexApprox {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ComplexApprox {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im, err: self.err }
    }
}

impl Mul for ComplexApprox {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let v = self.value() * o.value();
        let err = self.abs() * o.err + o.abs() * self.err + self.err * o.err + 2.0 * EPS * v.norm();
        Self { re: v.re, im: v.im, err }
    }
}
