use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exactalg::{bernoulli, int, ComplexBall, Rational};

/// Γ(s, x) for integer s ≥ 1 by Γ(s+1, x) = sΓ(s, x) + x^s e^{−x}.
pub fn incomplete_gamma(s: u32, x: f64) -> f64 {
    assert!(s >= 1 && x > 0.0, "incomplete_gamma needs s >= 1 and x > 0");
    let ex = (-x).exp();
    let mut g = ex;
    let mut xp = 1.0;
    for j in 1..s {
        xp *= x;
        g = j as f64 * g + xp * ex;
    }
    g
}

/// ζ(s) for real s > 1 via the alternating series η(s) with
/// Cohen–Rodriguez Villegas–Zagier acceleration.
pub fn zeta(s: f64) -> Result<f64> {
    if s <= 1.0 {
        return Err(Error::Invalid(format!("zeta series needs s > 1, got {s}")));
    }
    let n = 40;
    let mut d = (3.0 + 8f64.sqrt()).powi(n);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..n {
        c = b - c;
        sum += c / ((k + 1) as f64).powf(s);
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    let eta = sum / d;
    Ok(eta / (1.0 - 2f64.powf(1.0 - s)))
}

/// ζ(−m) = (−1)^m B_{m+1}/(m+1), exact.
pub fn zeta_at_nonpositive(m: u32) -> Rational {
    let b = bernoulli(m as usize + 1) / int(m as i64 + 1);
    if m % 2 == 0 {
        b
    } else {
        -b
    }
}

/// ζ′(−2m) = (−1)^m (2m)! ζ(2m+1) / (2(2π)^{2m}) for m ≥ 1.
pub fn zeta_prime_negative_even(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Invalid("the closed form holds for m >= 1".into()));
    }
    let fact: f64 = (1..=2 * m).map(|j| j as f64).product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * fact * zeta(2.0 * m as f64 + 1.0)? / (2.0 * (2.0 * PI).powi(2 * m as i32)))
}

/// C_k = −(2i)^{k−1}.
pub fn c_k(k: i64) -> ComplexBall {
    ComplexBall::i_pow(k - 1).scale(-(2f64).powi(k as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_gamma_values() {
        assert!((incomplete_gamma(1, 0.7) - (-0.7f64).exp()).abs() < 1e-15);
        assert!((incomplete_gamma(3, 1.0) - 5.0 / std::f64::consts::E).abs() < 1e-12);
        assert!((incomplete_gamma(2, 1e-8) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn incomplete_gamma_against_quadrature() {
        // Simpson on [x, x + 60]
        for (s, x) in [(2u32, 0.5), (4, 2.0), (7, 3.3)] {
            let f = |t: f64| t.powi(s as i32 - 1) * (-t).exp();
            let n = 20000;
            let h = 60.0 / n as f64;
            let mut acc = f(x) + f(x + 60.0);
            for i in 1..n {
                acc += f(x + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let quad = acc * h / 3.0;
            assert!((incomplete_gamma(s, x) - quad).abs() < 1e-9 * quad.max(1.0), "{s} {x}");
        }
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        // direct partial sum with integral tail correction
        let direct: f64 = (1..200000).rev().map(|n| (n as f64).powi(-3)).sum::<f64>() + 0.5 / 200000f64.powi(2);
        assert!((zeta(3.0).unwrap() - direct).abs() < 1e-12);
        assert!(zeta(1.0).is_err());
    }

    #[test]
    fn zeta_nonpositive() {
        assert_eq!(zeta_at_nonpositive(0), Rational::new((-1).into(), 2.into()));
        assert_eq!(zeta_at_nonpositive(1), Rational::new((-1).into(), 12.into()));
        assert_eq!(zeta_at_nonpositive(3), Rational::new(1.into(), 120.into()));
        assert_eq!(zeta_at_nonpositive(2), int(0));
    }

    #[test]
    fn zeta_prime_known_value() {
        // ζ′(−2) = −ζ(3)/(4π²)
        let z3 = zeta(3.0).unwrap();
        assert!((zeta_prime_negative_even(1).unwrap() + z3 / (4.0 * PI * PI)).abs() < 1e-15);
        assert!((zeta_prime_negative_even(1).unwrap() + 0.030448457058393).abs() < 1e-13);
    }

    #[test]
    fn c_k_values() {
        let c4 = c_k(4);
        assert!(c4.re.abs() < 1e-15 && (c4.im - 8.0).abs() < 1e-15);
        let c2 = c_k(2);
        assert!(c2.re.abs() < 1e-15 && (c2.im + 2.0).abs() < 1e-15);
    }
}
