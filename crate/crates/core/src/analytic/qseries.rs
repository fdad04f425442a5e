use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{bernoulli, int, Rational};

/// a₀ + a₁q + … + a_order q^order, exact. Coefficients past `order` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub a0: Rational,
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// `coeffs[i]` is a_{i+1}.
    pub fn new(a0: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a q-series needs truncation order at least 1".into()));
        }
        Ok(QSeries { a0, coeffs })
    }

    pub fn from_i64(a0: i64, coeffs: &[i64]) -> Result<Self> {
        Self::new(int(a0), coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// a_n for 0 ≤ n ≤ order.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        match n {
            0 => Some(&self.a0),
            _ => self.coeffs.get(n - 1),
        }
    }

    /// a₁, a₂, …
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_cuspidal(&self) -> bool {
        self.a0.is_zero()
    }

    fn dense(&self) -> Vec<Rational> {
        std::iter::once(self.a0.clone()).chain(self.coeffs.iter().cloned()).collect()
    }

    fn from_dense(mut v: Vec<Rational>) -> Self {
        let a0 = v.remove(0);
        QSeries { a0, coeffs: v }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.clamp(1, self.order());
        QSeries { a0: self.a0.clone(), coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect();
        QSeries { a0: &self.a0 + &o.a0, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSeries { a0: &self.a0 * r, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self::from_dense(mul_trunc(&self.dense(), &o.dense(), n + 1))
    }

    /// f(tz): coefficients move to multiples of t, order becomes t·order.
    pub fn rescale(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Invalid("rescaling factor must be positive".into()));
        }
        let mut coeffs = vec![Rational::zero(); self.order() * t];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + 1) * t - 1] = c.clone();
        }
        Ok(QSeries { a0: self.a0.clone(), coeffs })
    }
}

fn mul_trunc(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
fn inverse_unit(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    out[0] = Rational::one();
    for n in 1..len {
        let mut acc = Rational::zero();
        for k in 1..=n.min(a.len() - 1) {
            acc += &a[k] * &out[n - k];
        }
        out[n] = -acc;
    }
    out
}

fn pow_trunc(a: &[Rational], e: u64, len: usize) -> Vec<Rational> {
    let mut result = vec![Rational::zero(); len];
    result[0] = Rational::one();
    let mut base = a[..a.len().min(len)].to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_trunc(&result, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base, len);
        }
    }
    result
}

/// ∏_{n≥1}(1 − q^{tn}) up to q^{len−1}, from the pentagonal number theorem.
fn euler_product(t: usize, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize * t;
            if e < len {
                out[e] += int(if kk % 2 == 0 { 1 } else { -1 });
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    out
}

/// q^{Σtr/24} ∏ᵢ ∏_n (1 − q^{tᵢn})^{rᵢ} to the given order.
pub fn eta_product(factors: &[(usize, i64)], order: usize) -> Result<QSeries> {
    if order == 0 {
        return Err(Error::Invalid("order must be at least 1".into()));
    }
    if factors.iter().any(|&(t, _)| t == 0) {
        return Err(Error::Invalid("eta multipliers must be positive".into()));
    }
    let weight_sum: i64 = factors.iter().map(|&(t, r)| t as i64 * r).sum();
    if weight_sum <= 0 || weight_sum % 24 != 0 {
        return Err(Error::Invalid(format!(
            "leading exponent {weight_sum}/24 is not a positive integer"
        )));
    }
    let shift = (weight_sum / 24) as usize;
    let mut coeffs = vec![Rational::zero(); order];
    if shift <= order {
        let len = order - shift + 1;
        let mut acc = vec![Rational::zero(); len];
        acc[0] = Rational::one();
        for &(t, r) in factors {
            let e = euler_product(t, len);
            let base = if r < 0 { inverse_unit(&e, len) } else { e };
            acc = mul_trunc(&acc, &pow_trunc(&base, r.unsigned_abs(), len), len);
        }
        for (i, c) in acc.into_iter().enumerate() {
            coeffs[shift + i - 1] = c;
        }
    }
    QSeries::new(Rational::zero(), coeffs)
}

/// σ_j(n) = Σ_{d|n} d^j.
pub fn divisor_sigma(j: u32, n: u64) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            acc += num_bigint::BigInt::from(d).pow(j);
            if d * d != n {
                acc += num_bigint::BigInt::from(n / d).pow(j);
            }
        }
        d += 1;
    }
    acc
}

/// E_k = −B_k/(2k) + Σ σ_{k−1}(n)qⁿ for t = 1; for t > 1 the oldform combination
/// E_k(z) − t^{k−1}E_k(tz), and E₂(z) − tE₂(tz) when k = 2.
pub fn eisenstein_qexp(k: u32, t: usize, order: usize) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Invalid(format!("Eisenstein series need even weight at least 2, got {k}")));
    }
    if t == 0 || order == 0 {
        return Err(Error::Invalid("level multiplier and order must be positive".into()));
    }
    let a0 = -bernoulli(k as usize) / int(2 * k as i64);
    let coeffs = (1..=order as u64).map(|n| Rational::from_integer(divisor_sigma(k - 1, n))).collect();
    let e = QSeries::new(a0, coeffs)?;
    if t == 1 {
        return Ok(e);
    }
    let c = if k == 2 { int(t as i64) } else { int(t as i64).pow(k as i32 - 1) };
    Ok(e.sub(&e.rescale(t)?.truncate(order).scale(&c)))
}

/// a ≡ b mod p for rationals with p-integral difference.
pub fn congruent_mod(a: &Rational, b: &Rational, p: i64) -> bool {
    let d = a - b;
    let p = num_bigint::BigInt::from(p);
    !(d.denom() % &p).is_zero() && (d.numer() % &p).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_eta(factors: &[(usize, i64)], order: usize) -> Vec<i64> {
        // expand ∏(1 − q^{tn})^r by repeated multiplication of binomials
        let shift: i64 = factors.iter().map(|&(t, r)| t as i64 * r).sum::<i64>() / 24;
        let len = order;
        let mut acc = vec![0i128; len];
        acc[0] = 1;
        for &(t, r) in factors {
            for n in 1..len {
                let e = t * n;
                if e >= len {
                    break;
                }
                for _ in 0..r.unsigned_abs() {
                    if r > 0 {
                        for i in (e..len).rev() {
                            acc[i] -= acc[i - e];
                        }
                    } else {
                        for i in e..len {
                            acc[i] += acc[i - e];
                        }
                    }
                }
            }
        }
        let mut out = vec![0i64; order];
        for i in 0..order {
            let j = i as i64 + 1 - shift;
            if j >= 0 && (j as usize) < len {
                out[i] = acc[j as usize] as i64;
            }
        }
        out
    }

    fn ints(q: &QSeries) -> Vec<i64> {
        q.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn level_five_newform() {
        let f = eta_product(&[(1, 4), (5, 4)], 5).unwrap();
        assert_eq!(ints(&f), vec![1, -4, 2, 8, -5]);
    }

    #[test]
    fn eta_against_direct_expansion() {
        for factors in [vec![(1, 24)], vec![(1, 8), (2, 8)], vec![(1, 4), (5, 4)], vec![(1, 2), (11, 2)], vec![(1, -4), (2, 14)]] {
            let got = eta_product(&factors, 60).unwrap();
            assert_eq!(ints(&got), naive_eta(&factors, 60), "{factors:?}");
        }
        assert_eq!(ints(&eta_product(&[(1, 24)], 2).unwrap()), vec![1, -24]);
        assert_eq!(ints(&eta_product(&[(1, 8), (2, 8)], 2).unwrap()), vec![1, -8]);
    }

    #[test]
    fn eta_rejects_fractional_exponent() {
        assert!(eta_product(&[(1, 4)], 5).is_err());
        assert!(eta_product(&[(1, 24)], 0).is_err());
    }

    #[test]
    fn eisenstein_examples() {
        let e = eisenstein_qexp(2, 6, 10).unwrap();
        assert_eq!(e.a0, Rational::new(5.into(), 24.into()));
        assert_eq!(e.coeff(1).unwrap(), &int(1));
        assert_eq!(eisenstein_qexp(4, 1, 5).unwrap().coeff(2).unwrap(), &int(9));
        assert_eq!(eisenstein_qexp(4, 1, 5).unwrap().a0, Rational::new(1.into(), 240.into()));
        assert_eq!(eisenstein_qexp(2, 2, 5).unwrap().coeff(2).unwrap(), &int(1));
        let e12 = eisenstein_qexp(12, 2, 6).unwrap();
        assert_eq!(e12.coeff(2).unwrap(), &(int(1 + 2048) - int(2048)));
        assert!(eisenstein_qexp(3, 1, 5).is_err());
    }

    #[test]
    fn series_algebra() {
        let e4 = eisenstein_qexp(4, 1, 20).unwrap();
        let e8 = eisenstein_qexp(8, 1, 20).unwrap();
        // E₄² = E₈ after matching normalizations: (240 E₄)² = 480 E₈
        let lhs = e4.scale(&int(240)).mul(&e4.scale(&int(240)));
        assert_eq!(lhs, e8.scale(&int(480)));
        let r = e4.rescale(3).unwrap();
        assert_eq!(r.order(), 60);
        assert_eq!(r.coeff(6).unwrap(), &int(9));
        assert!(r.coeff(5).unwrap().is_zero());
    }

    #[test]
    fn sigma_values() {
        assert_eq!(divisor_sigma(1, 12), 28.into());
        assert_eq!(divisor_sigma(3, 2), 9.into());
        assert_eq!(divisor_sigma(0, 36), 9.into());
    }

    #[test]
    fn congruence_helper() {
        assert!(congruent_mod(&int(27), &int(1), 13));
        assert!(!congruent_mod(&int(2), &int(1), 13));
        assert!(congruent_mod(&Rational::new(13.into(), 2.into()), &int(0), 13));
    }
}
