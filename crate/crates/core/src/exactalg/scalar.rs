//! Run-time tagged scalar: one type for the exact and numerical paths.

use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

use super::{cyclotomic_field, ComplexBall, Cyclo, CycloField, Field, Rational};

/// Which field a scalar lives in.
#[derive(Clone, Debug)]
pub enum ScalarField {
    Rational,
    Cyclotomic(Arc<CycloField>),
    Complex,
}

impl PartialEq for ScalarField {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (ScalarField::Rational, ScalarField::Rational) => true,
            (ScalarField::Complex, ScalarField::Complex) => true,
            (ScalarField::Cyclotomic(a), ScalarField::Cyclotomic(b)) => a.conductor == b.conductor,
            _ => false,
        }
    }
}

impl ScalarField {
    /// Q(ζ_m), collapsing m ≤ 2 to Q.
    pub fn cyclotomic(m: u64) -> Self {
        if m <= 2 {
            ScalarField::Rational
        } else {
            ScalarField::Cyclotomic(cyclotomic_field(m))
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ScalarField::Complex)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero_in(self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one_in(self)
    }

    /// The smallest field containing both, if any.
    pub fn join(&self, o: &Self) -> Option<Self> {
        use ScalarField::*;
        match (self, o) {
            (Rational, x) | (x, Rational) => Some(x.clone()),
            (Complex, _) | (_, Complex) => Some(Complex),
            (Cyclotomic(a), Cyclotomic(b)) => (a.conductor == b.conductor).then(|| self.clone()),
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rational => write!(f, "Q"),
            ScalarField::Cyclotomic(c) => write!(f, "Q(zeta_{})", c.conductor),
            ScalarField::Complex => write!(f, "C"),
        }
    }
}

/// A rational, cyclotomic, or complex-ball value.
#[derive(Clone)]
pub enum Scalar {
    Rational(Rational),
    Cyclotomic(Cyclo),
    Complex(ComplexBall),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", super::format_rational(r)),
            Scalar::Cyclotomic(c) => write!(f, "{}", c),
            Scalar::Complex(z) => write!(f, "{}", z),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => a == b,
            (Scalar::Complex(a), Scalar::Complex(b)) => a == b,
            (Scalar::Rational(a), Scalar::Cyclotomic(b)) | (Scalar::Cyclotomic(b), Scalar::Rational(a)) => {
                b.as_rational().as_ref() == Some(a)
            }
            _ => false,
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(super::int(n))
    }
}

impl From<ComplexBall> for Scalar {
    fn from(z: ComplexBall) -> Self {
        Scalar::Complex(z)
    }
}

impl From<Cyclo> for Scalar {
    fn from(c: Cyclo) -> Self {
        Scalar::Cyclotomic(c)
    }
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rational(_) => ScalarField::Rational,
            Scalar::Cyclotomic(c) => ScalarField::Cyclotomic(c.field().clone()),
            Scalar::Complex(_) => ScalarField::Complex,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Cyclotomic(c) => c.as_rational(),
            Scalar::Complex(_) => None,
        }
    }

    /// Numerical value as a complex ball.
    pub fn to_complex(&self) -> ComplexBall {
        match self {
            Scalar::Rational(r) => ComplexBall::from_rational_in(&(), r),
            Scalar::Cyclotomic(c) => {
                let (re, im) = c.to_complex();
                ComplexBall::new(re, im, 1e-15 * re.hypot(im))
            }
            Scalar::Complex(z) => *z,
        }
    }

    /// Moves the value into `field`; panics if that is impossible.
    pub fn coerce(&self, field: &ScalarField) -> Scalar {
        match (self, field) {
            (Scalar::Rational(r), ScalarField::Rational) => Scalar::Rational(r.clone()),
            (Scalar::Rational(r), ScalarField::Cyclotomic(f)) => Scalar::Cyclotomic(Cyclo::from_rational(f, r)),
            (Scalar::Cyclotomic(c), ScalarField::Cyclotomic(f)) if c.field().conductor == f.conductor => self.clone(),
            (Scalar::Cyclotomic(c), ScalarField::Rational) => {
                Scalar::Rational(c.as_rational().expect("cyclotomic value is not rational"))
            }
            (_, ScalarField::Complex) => Scalar::Complex(self.to_complex()),
            _ => panic!("cannot coerce {} into {}", self, field),
        }
    }

    fn binary(&self, o: &Self, op: fn(&Scalar, &Scalar) -> Scalar) -> Scalar {
        let f = self.field().join(&o.field()).expect("incompatible scalar fields");
        op(&self.coerce(&f), &o.coerce(&f))
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.conj()),
            Scalar::Complex(z) => Scalar::Complex(z.conj()),
        }
    }
}

impl Field for Scalar {
    type Ctx = ScalarField;

    fn ctx(&self) -> ScalarField {
        self.field()
    }

    fn zero_in(ctx: &ScalarField) -> Self {
        match ctx {
            ScalarField::Rational => Scalar::Rational(Rational::zero()),
            ScalarField::Cyclotomic(f) => Scalar::Cyclotomic(Cyclo::zero(f)),
            ScalarField::Complex => Scalar::Complex(ComplexBall::exact(0.0, 0.0)),
        }
    }

    fn from_rational_in(ctx: &ScalarField, r: &Rational) -> Self {
        Scalar::Rational(r.clone()).coerce(ctx)
    }

    fn one_in(ctx: &ScalarField) -> Self {
        Self::from_rational_in(ctx, &Rational::one())
    }

    fn is_zero_elt(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Cyclotomic(c) => c.is_zero(),
            Scalar::Complex(z) => z.is_zero_elt(),
        }
    }

    fn fadd(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a.add(b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.add(b)),
            _ => self.binary(o, |a, b| a.fadd(b)),
        }
    }

    fn fsub(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a.sub(b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.sub(b)),
            _ => self.binary(o, |a, b| a.fsub(b)),
        }
    }

    fn fmul(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a.mul(b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.mul(b)),
            (Scalar::Rational(a), x) | (x, Scalar::Rational(a)) => x.fscale(a),
            _ => self.binary(o, |a, b| a.fmul(b)),
        }
    }

    fn fneg(&self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Cyclotomic(a) => Scalar::Cyclotomic(a.neg()),
            Scalar::Complex(a) => Scalar::Complex(a.neg()),
        }
    }

    fn finv(&self) -> Option<Self> {
        match self {
            Scalar::Rational(a) => a.finv().map(Scalar::Rational),
            Scalar::Cyclotomic(a) => a.inv().map(Scalar::Cyclotomic),
            Scalar::Complex(a) => a.inv().map(Scalar::Complex),
        }
    }

    fn fscale(&self, r: &Rational) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * r),
            Scalar::Cyclotomic(a) => Scalar::Cyclotomic(a.scale(r)),
            Scalar::Complex(a) => Scalar::Complex(a.fscale(r)),
        }
    }
}

macro_rules! scalar_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
        impl<'a> std::ops::$tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$f(o)
            }
        }
    };
}

scalar_op!(Add, add, fadd);
scalar_op!(Sub, sub, fsub);
scalar_op!(Mul, mul, fmul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.fneg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    #[test]
    fn mixed_promotion() {
        let q = Scalar::from(rat(1, 2));
        let f = cyclotomic_field(3);
        let z = Scalar::from(Cyclo::zeta_pow(&f, 1));
        let s = &q + &z;
        assert!(matches!(s, Scalar::Cyclotomic(_)));
        // ζ3 + ζ3² = −1
        let z2 = Scalar::from(Cyclo::zeta_pow(&f, 2));
        assert_eq!(&z + &z2, Scalar::from(int(-1)));
        let c = Scalar::from(ComplexBall::exact(0.0, 1.0));
        let p = &q * &c;
        assert!(matches!(p, Scalar::Complex(_)));
    }

    #[test]
    fn rational_normal_form() {
        let x = Scalar::from(rat(6, -4));
        if let Scalar::Rational(r) = x {
            assert_eq!(r.numer().to_string(), "-3");
            assert_eq!(r.denom().to_string(), "2");
        }
    }
}
