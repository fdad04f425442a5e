//! Arithmetic in Q(ζ_m) as residues modulo the m-th cyclotomic polynomial.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Field, Rational};

/// The field Q(ζ_m): its conductor and the monic modulus Φ_m (low degree first).
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    pub conductor: u64,
    modulus: Vec<Rational>,
}

impl CycloField {
    /// φ(m), the degree over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by Φ_d for the proper divisors d of m
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in 1..m {
        if m % d == 0 {
            den = poly_mul_int(&den, &cyclotomic_poly(d));
        }
    }
    poly_div_monic(&num, &den)
}

/// Shared handle to Q(ζ_m); fields are cached so equal conductors share one allocation.
pub fn cyclotomic_field(m: u64) -> Arc<CycloField> {
    assert!(m >= 1, "conductor must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| {
            let modulus = cyclotomic_poly(m).into_iter().map(Rational::from_integer).collect();
            Arc::new(CycloField { conductor: m, modulus })
        })
        .clone()
}

/// An element of Q(ζ_m): coefficients of 1, ζ, …, ζ^{φ(m)−1}.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Self) -> bool {
        self.field.conductor == o.field.conductor && self.coeffs == o.coeffs
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(super::format_rational).collect();
        write!(f, "[{}]@{}", parts.join(", "), self.field.conductor)
    }
}

impl Cyclo {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        Cyclo { field: field.clone(), coeffs: vec![Rational::zero(); field.degree()] }
    }

    pub fn from_rational(field: &Arc<CycloField>, r: &Rational) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = r.clone();
        z
    }

    /// Builds from arbitrary-length coefficients, reducing modulo Φ_m.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<Rational>) -> Self {
        Cyclo { field: field.clone(), coeffs: reduce(field, coeffs) }
    }

    /// ζ_m^k.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let m = field.conductor as i64;
        let e = k.rem_euclid(m) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        Self::from_coeffs(field, c)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(r) when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclo { field: self.field.clone(), coeffs: reduce(&self.field, prod) }
    }

    /// Inverse via the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus = self.field.modulus.clone();
        // invariant: s_i * a ≡ r_i (mod Φ)
        let mut r0 = trim(modulus);
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<Rational> = vec![Rational::zero()];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !(r1.len() == 1 && !r1[0].is_zero()) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = trim(r);
            s0 = s1;
            s1 = trim(s2);
        }
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Some(Cyclo { field: self.field.clone(), coeffs: reduce(&self.field, s) })
    }

    /// Complex conjugate, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let m = self.field.conductor as i64;
        let mut acc = Self::zero(&self.field);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&Self::zeta_pow(&self.field, m - j as i64).scale(c));
            }
        }
        acc
    }

    /// Numerical value under ζ ↦ e^{2πi/m}.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let x = super::to_f64(c);
            let t = 2.0 * std::f64::consts::PI * j as f64 / m;
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }

    fn check(&self, o: &Self) {
        assert_eq!(
            self.field.conductor, o.field.conductor,
            "cyclotomic conductors differ"
        );
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Rational::zero());
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect()
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip();
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![Rational::zero()], rem);
    }
    let mut q = vec![Rational::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] * &lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in b.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    rem.truncate(db.max(1));
    (q, rem)
}

fn reduce(field: &CycloField, mut p: Vec<Rational>) -> Vec<Rational> {
    let d = field.degree();
    for i in (d..p.len()).rev() {
        let c = std::mem::replace(&mut p[i], Rational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, m) in field.modulus[..d].iter().enumerate() {
            p[i - d + j] -= &c * m;
        }
    }
    p.resize(d, Rational::zero());
    p
}

impl Field for Cyclo {
    type Ctx = Arc<CycloField>;
    fn ctx(&self) -> Arc<CycloField> {
        self.field.clone()
    }
    fn zero_in(ctx: &Arc<CycloField>) -> Self {
        Cyclo::zero(ctx)
    }
    fn from_rational_in(ctx: &Arc<CycloField>, r: &Rational) -> Self {
        Cyclo::from_rational(ctx, r)
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
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
        self.scale(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i = |m| cyclotomic_field(m).modulus().iter().map(|c| c.to_integer().to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(as_i(1), "-1,1");
        assert_eq!(as_i(4), "1,0,1");
        assert_eq!(as_i(6), "1,-1,1");
        assert_eq!(as_i(12), "1,0,-1,0,1");
        assert_eq!(cyclotomic_field(15).degree(), 8);
    }

    #[test]
    fn roots_of_unity_relations() {
        for m in 1..=24u64 {
            let f = cyclotomic_field(m);
            let z = Cyclo::zeta_pow(&f, 1);
            let mut p = Cyclo::from_rational(&f, &int(1));
            let mut sum = Cyclo::zero(&f);
            for _ in 0..m {
                sum = sum.add(&p);
                p = p.mul(&z);
            }
            assert_eq!(p, Cyclo::from_rational(&f, &int(1)), "zeta^m at m={m}");
            if m > 1 {
                assert!(sum.is_zero(), "sum of powers at m={m}");
            }
        }
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let f = cyclotomic_field(12);
        let x = Cyclo::from_coeffs(&f, vec![int(2), int(-1), int(0), int(3)]);
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), Cyclo::from_rational(&f, &int(1)));
        assert!(Cyclo::zero(&f).inv().is_none());
    }

    #[test]
    fn conjugation_and_embedding() {
        let f = cyclotomic_field(5);
        let z = Cyclo::zeta_pow(&f, 2);
        let (re, im) = z.to_complex();
        let t = 4.0 * std::f64::consts::PI / 5.0;
        assert!((re - t.cos()).abs() < 1e-12 && (im - t.sin()).abs() < 1e-12);
        assert_eq!(z.mul(&z.conj()), Cyclo::from_rational(&f, &int(1)));
    }
}
