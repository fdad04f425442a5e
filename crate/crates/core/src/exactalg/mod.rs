//! Exact scalars (rationals, cyclotomic numbers), complex balls, and the
//! dense/sparse linear algebra used by the polynomial spaces.

mod complex;
mod cyclo;
mod echelon;
mod matrix;
mod scalar;

pub use complex::ComplexBall;
pub use cyclo::{cyclotomic_field, Cyclo, CycloField};
pub use echelon::{rref, sparse_kernel, Echelon, SparseRow};
pub use matrix::{bernoulli, eigen_kernel, kernel_basis, DenseMatrix};
pub use scalar::{Scalar, ScalarField};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, dropping `/1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Converts a rational to the nearest double.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // very large numerators: scale down through the bit lengths
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits().max(d.bits()) as i64 - 900;
        let (n2, d2) = if shift > 0 { (n >> shift as usize, d >> shift as usize) } else { (n.clone(), d.clone()) };
        n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
    })
}

/// Arithmetic needed by elimination; `Ctx` carries what `zero`/`one` need
/// to know about the field (nothing for rationals, the modulus for cyclotomics).
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Ctx: Clone + fmt::Debug + Send + Sync;
    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_rational_in(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self {
        Self::from_rational_in(ctx, &Rational::one())
    }
    fn is_zero_elt(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    fn finv(&self) -> Option<Self>;
    fn fscale(&self, r: &Rational) -> Self;
}

impl Field for Rational {
    type Ctx = ();
    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn from_rational_in(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn fscale(&self, r: &Rational) -> Self {
        self * r
    }
}

/// gcd of two machine integers (non-negative result).
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "5/7", "-12/5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn egcd_identity() {
        for a in -20i64..20 {
            for b in -20i64..20 {
                let (g, x, y) = egcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn small_number_theory() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(100), 40);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(binomial(6, 3), int(20));
    }
}
