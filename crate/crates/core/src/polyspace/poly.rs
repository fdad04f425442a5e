//! Single polynomials of degree ≤ w: slash action, the pairing ⟨·,·⟩ on V_w,
//! and images of the Laurent monomials X^{−1}, …, X^{w+1} in partial fractions.

use num_traits::{One, Zero};

use crate::cosets::Mat2;
use crate::exactalg::{binomial, int, Field, Rational, Scalar, ScalarField};

/// Coefficients (a₀, …, a_w) of Σ aᵢXⁱ.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyValue(pub Vec<Scalar>);

impl PolyValue {
    pub fn zero(field: &ScalarField, w: usize) -> Self {
        PolyValue(vec![field.zero(); w + 1])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        PolyValue(coeffs.iter().map(|&c| Scalar::from(c)).collect())
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        PolyValue(coeffs.iter().map(|c| Scalar::from(c.clone())).collect())
    }

    pub fn w(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }
}

/// (aX + b)^n expanded, low degree first.
pub(crate) fn linear_pow(a: i64, b: i64, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for _ in 0..n {
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i] += c * int(b);
            next[i + 1] += c * int(a);
        }
        out = next;
    }
    out
}

pub(crate) fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Matrix of P ↦ P|g on V_w: entry [i][j] is the X^i coefficient of X^j|g = (aX+b)^j (cX+d)^{w−j}.
pub fn slash_matrix(g: &Mat2, w: usize) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); w + 1]; w + 1];
    for j in 0..=w {
        let col = poly_mul(&linear_pow(g.a, g.b, j), &linear_pow(g.c, g.d, w - j));
        for (i, c) in col.into_iter().enumerate() {
            m[i][j] = c;
        }
    }
    m
}

/// P(gX)(cX+d)^w.
pub fn slash_poly(p: &PolyValue, g: &Mat2, w: usize) -> PolyValue {
    assert_eq!(p.0.len(), w + 1, "polynomial length must be w+1");
    let field = p.0.iter().fold(ScalarField::Rational, |f, x| f.join(&x.field()).expect("mixed fields"));
    let m = slash_matrix(g, w);
    let out = (0..=w)
        .map(|i| {
            (0..=w).fold(field.zero(), |acc, j| {
                if m[i][j].is_zero() {
                    acc
                } else {
                    acc.fadd(&p.0[j].fscale(&m[i][j]))
                }
            })
        })
        .collect();
    PolyValue(out)
}

/// Weights (−1)^{w−n} C(w,n)^{-1} of the pairing on V_w.
pub(crate) fn pairing_weights(w: usize) -> Vec<Rational> {
    (0..=w)
        .map(|n| {
            let c = binomial(w as u64, n as u64).recip();
            if (w - n) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// ⟨p, q⟩ = Σ (−1)^{w−n} C(w,n)^{-1} aₙ b_{w−n}.
pub fn pair_vw(p: &PolyValue, q: &PolyValue, w: usize) -> Scalar {
    pair_slices(&p.0, &q.0, w)
}

pub(crate) fn pair_slices(p: &[Scalar], q: &[Scalar], w: usize) -> Scalar {
    let wts = pairing_weights(w);
    let mut acc: Option<Scalar> = None;
    for n in 0..=w {
        let (a, b) = (&p[n], &q[w - n]);
        if a.is_zero_elt() || b.is_zero_elt() {
            continue;
        }
        let t = a.fmul(b).fscale(&wts[n]);
        acc = Some(match acc {
            None => t,
            Some(x) => x.fadd(&t),
        });
    }
    acc.unwrap_or_else(|| {
        let f = p.iter().chain(q).fold(ScalarField::Rational, |f, x| f.join(&x.field()).unwrap_or(f));
        f.zero()
    })
}

/// A Laurent-slashed monomial: coefficients of X^{−1}, …, X^{w+1} plus at
/// most one simple pole term `coeff / (X − root)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentImage {
    pub laurent: Vec<Rational>,
    pub pole: Option<(Rational, Rational)>,
}

/// X^e|g for −1 ≤ e ≤ w+1, written in partial fractions.
pub fn laurent_slash_monomial(e: i64, g: &Mat2, w: usize) -> LaurentImage {
    let len = w + 3;
    let mut laurent = vec![Rational::zero(); len];
    let wi = w as i64;
    assert!((-1..=wi + 1).contains(&e));
    if (0..=wi).contains(&e) {
        let p = poly_mul(&linear_pow(g.a, g.b, e as usize), &linear_pow(g.c, g.d, (wi - e) as usize));
        for (i, c) in p.into_iter().enumerate() {
            laurent[i + 1] = c;
        }
        return LaurentImage { laurent, pole: None };
    }
    // numerator of degree w+1 over a linear denominator αX + β
    let (num, alpha, beta) = if e == wi + 1 {
        (linear_pow(g.a, g.b, w + 1), g.c, g.d)
    } else {
        (linear_pow(g.c, g.d, w + 1), g.a, g.b)
    };
    if alpha == 0 {
        let inv = Rational::from_integer(beta.into()).recip();
        for (i, c) in num.into_iter().enumerate() {
            laurent[i + 1] = c * &inv;
        }
        return LaurentImage { laurent, pole: None };
    }
    let inv_alpha = Rational::from_integer(alpha.into()).recip();
    if beta == 0 {
        for (i, c) in num.into_iter().enumerate() {
            laurent[i] = c * &inv_alpha;
        }
        return LaurentImage { laurent, pole: None };
    }
    // synthetic division by (X − r), r = −β/α
    let r = Rational::new((-beta).into(), alpha.into());
    let deg = num.len() - 1;
    let mut q = vec![Rational::zero(); deg];
    let mut carry = Rational::zero();
    for i in (0..=deg).rev() {
        let v = &num[i] + &carry * &r;
        if i == 0 {
            carry = v;
        } else {
            q[i - 1] = v.clone();
            carry = v;
        }
    }
    for (i, c) in q.into_iter().enumerate() {
        laurent[i + 1] = c * &inv_alpha;
    }
    LaurentImage { laurent, pole: Some((r, carry * inv_alpha)) }
}
