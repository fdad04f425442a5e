//! Double-precision complex numbers carrying an absolute error bound.

use serde::{Deserialize, Serialize};
use std::fmt;

use super::{Field, Rational};

const ULP: f64 = f64::EPSILON;

/// `re + i·im` with `|true value − (re + i·im)| ≤ err`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexBall {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexBall {
    pub fn new(re: f64, im: f64, err: f64) -> Self {
        ComplexBall { re, im, err: err.abs() }
    }

    pub fn exact(re: f64, im: f64) -> Self {
        ComplexBall { re, im, err: 0.0 }
    }

    pub fn real(re: f64) -> Self {
        Self::exact(re, 0.0)
    }

    /// i^k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::exact(1.0, 0.0),
            1 => Self::exact(0.0, 1.0),
            2 => Self::exact(-1.0, 0.0),
            _ => Self::exact(0.0, -1.0),
        }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    fn rounding(&self) -> f64 {
        2.0 * ULP * self.abs()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut z = Self::exact(self.re + o.re, self.im + o.im);
        z.err = self.err + o.err + z.rounding();
        z
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: -self.re, im: -self.im, err: self.err }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut z = Self::exact(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re);
        z.err = self.abs() * o.err + o.abs() * self.err + self.err * o.err + 2.0 * z.rounding();
        z
    }

    pub fn scale(&self, x: f64) -> Self {
        let mut z = Self::exact(self.re * x, self.im * x);
        z.err = self.err * x.abs() + z.rounding();
        z
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re, im: -self.im, err: self.err }
    }

    /// Reciprocal; `None` when the ball contains zero.
    pub fn inv(&self) -> Option<Self> {
        let r = self.abs();
        if r <= self.err || r == 0.0 {
            return None;
        }
        let d = self.re * self.re + self.im * self.im;
        let mut z = Self::exact(self.re / d, -self.im / d);
        z.err = self.err / (r * (r - self.err)) + 2.0 * z.rounding();
        Some(z)
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|x| self.mul(&x))
    }

    /// Distance between centers.
    pub fn dist(&self, o: &Self) -> f64 {
        (self.re - o.re).hypot(self.im - o.im)
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{re: {:.12e}, im: {:.12e}, err: {:.3e}}}", self.re, self.im, self.err)
    }
}

impl Field for ComplexBall {
    type Ctx = ();
    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        Self::exact(0.0, 0.0)
    }
    fn from_rational_in(_: &(), r: &Rational) -> Self {
        let x = super::to_f64(r);
        ComplexBall::new(x, 0.0, ULP * x.abs())
    }
    fn is_zero_elt(&self) -> bool {
        self.abs() <= self.err
    }
    fn fadd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn fsub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn fmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn fneg(&self) -> Self {
        self.neg()
    }
    fn finv(&self) -> Option<Self> {
        self.inv()
    }
    fn fscale(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational_in(&(), r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn error_bounds_never_shrink(a in -10.0f64..10.0, b in -10.0f64..10.0, e1 in 0.0f64..1e-3, e2 in 0.0f64..1e-3) {
            let x = ComplexBall::new(a, b, e1);
            let y = ComplexBall::new(b, a, e2);
            prop_assert!(x.add(&y).err >= e1.max(e2));
            prop_assert!(x.mul(&y).err >= 0.0);
            prop_assert!(x.sub(&y).err >= e1 + e2);
        }
    }

    #[test]
    fn inverse() {
        let z = ComplexBall::exact(3.0, 4.0);
        let w = z.inv().unwrap().mul(&z);
        assert!(w.dist(&ComplexBall::real(1.0)) < 1e-15);
        assert!(ComplexBall::new(0.0, 0.0, 1.0).inv().is_none());
    }
}
