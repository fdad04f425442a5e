use num_traits::Zero;
use rayon::prelude::*;

use super::poly::{linear_pow, pair_slices};
use super::spaces::duality_constant;
use super::subspace::Subspace;
use super::vector::{same_space, sign_pow, ExtPolyVector, PolyVector};
use crate::cosets::Mat2;
use crate::error::{Error, Result};
use crate::exactalg::{DenseMatrix, Field, Rational, Scalar, ScalarField};

fn check(p: &PolyVector, q: &PolyVector) -> Result<()> {
    if !same_space(p.space(), q.space()) {
        return Err(Error::Invalid("pairing of vectors on different coset spaces".into()));
    }
    p.field().join(q.field()).ok_or_else(|| Error::FieldMismatch(format!("{} and {}", p.field(), q.field())))?;
    Ok(())
}

fn zero_of(p: &PolyVector, q: &PolyVector) -> Scalar {
    p.field().join(q.field()).unwrap_or(ScalarField::Complex).zero()
}

/// ⟪P, Q⟫ = (1/[Γ̄₁:Γ̄]) Σ_A ⟨P(A), Q(A)⟩ over the fixed section.
pub fn pair_induced(p: &PolyVector, q: &PolyVector) -> Result<Scalar> {
    check(p, q)?;
    let sp = p.space();
    let w = sp.w();
    let m = w + 1;
    let mut acc = zero_of(p, q);
    for l in 0..sp.index() {
        let x = pair_slices(&p.flat()[l * m..(l + 1) * m], &q.flat()[l * m..(l + 1) * m], w);
        acc = acc.fadd(&x);
    }
    Ok(acc.fscale(&Rational::new(1.into(), (sp.index() as i64).into())))
}

/// {P, Q} = ⟪P|(T − T⁻¹), Q⟫.
pub fn pair_braces_poly(p: &PolyVector, q: &PolyVector) -> Result<Scalar> {
    check(p, q)?;
    let d = p.slash(&Mat2::T)?.sub(&p.slash(&Mat2::T_INV)?)?;
    pair_induced(&d, q)
}

/// P⁰|(T − T⁻¹) for P⁰(A) = c_A X^{w+1}, evaluated through the tables; the
/// X^{w+1} terms must cancel, which is the T-invariance of the constants.
pub fn tail_difference(v: &ExtPolyVector) -> Result<PolyVector> {
    let sp = v.space();
    let w = sp.w();
    let plus = linear_pow(1, 1, w + 1);
    let minus = linear_pow(1, -1, w + 1);
    let field = v.field().clone();
    let mut flat = Vec::with_capacity(sp.index() * (w + 1));
    for l in 0..sp.index() {
        // (P⁰|T)(A) = P⁰(A T⁻¹)|T and (P⁰|T⁻¹)(A) = P⁰(A T)|T⁻¹
        let (a, sa) = sp.tables().t_inv[l];
        let (b, sb) = sp.tables().t[l];
        let ca = v.tails[a].fscale(&sign_pow(sa, w));
        let cb = v.tails[b].fscale(&sign_pow(sb, w));
        let top = ca.fsub(&cb);
        if !top.is_zero_elt() {
            return Err(Error::NotInSpace(format!("cusp constants are not T-invariant at {}", sp.label_name(l))));
        }
        for i in 0..=w {
            let x = ca.fscale(&plus[i]).fsub(&cb.fscale(&minus[i]));
            flat.push(x.coerce(&field));
        }
    }
    PolyVector::from_flat(sp, flat)
}

/// The extended pairing
/// {P̃, Q̃} = ⟪P|T−T⁻¹, Q⟫ + ⟪2P⁰|T−T⁻¹, Q⟫ + ⟪P, 2Q⁰|T⁻¹−T⟫ + I_k(P⁰, Q⁰).
pub fn pair_braces(p: &ExtPolyVector, q: &ExtPolyVector) -> Result<Scalar> {
    check(&p.poly, &q.poly)?;
    let sp = p.space();
    let k = sp.weight();
    let mut acc = pair_braces_poly(&p.poly, &q.poly)?;
    let two = Scalar::from(2);
    let p_zero = p.tails.iter().all(|x| x.is_zero_elt());
    let q_zero = q.tails.iter().all(|x| x.is_zero_elt());
    if !p_zero {
        acc = acc.fadd(&pair_induced(&tail_difference(p)?.scale(&two), &q.poly)?);
    }
    if !q_zero {
        acc = acc.fsub(&pair_induced(&p.poly, &tail_difference(q)?.scale(&two))?);
    }
    if k % 2 == 1 && !p_zero && !q_zero {
        let s = p.tails.iter().zip(&q.tails).fold(zero_of(&p.poly, &q.poly), |a, (x, y)| a.fadd(&x.fmul(y)));
        let c = Rational::new((6 * (k - 1)).into(), (k * sp.index() as i64).into());
        acc = acc.fadd(&s.fscale(&c));
    }
    Ok(acc)
}

/// −(6/[Γ̄₁:Γ̄]) Σ c′_A c_A with c_A = (−1)^w (w+1)·(stored tail of Q̃).
pub fn duality_closed_form(c_prime: &[Rational], q: &ExtPolyVector) -> Scalar {
    let sp = q.space();
    let w = sp.w();
    let mut acc = q.field().zero();
    for (cp, t) in c_prime.iter().zip(&q.tails) {
        if !cp.is_zero() {
            acc = acc.fadd(&duality_constant(t, w).fscale(cp));
        }
    }
    acc.fscale(&Rational::new((-6).into(), (sp.index() as i64).into()))
}

/// Gram matrix of {·,·} on a basis (plain or extended layout).
pub fn gram_braces(sub: &Subspace) -> Result<DenseMatrix> {
    let vs: Vec<ExtPolyVector> = (0..sub.dim()).map(|i| sub.ext_vector(i)).collect();
    let n = vs.len();
    let entries: Vec<Result<Scalar>> =
        (0..n * n).into_par_iter().map(|ij| pair_braces(&vs[ij / n], &vs[ij % n])).collect();
    let data = entries.into_iter().collect::<Result<Vec<_>>>()?;
    DenseMatrix::new(n, n, sub.field().clone(), data)
}

/// ⟪P|g, Q|g⟫ − ⟪P, Q⟫ (zero by Γ₁-invariance), exposed for checks.
pub fn invariance_defect(p: &PolyVector, q: &PolyVector, g: &Mat2) -> Result<Scalar> {
    Ok(pair_induced(&p.slash(g)?, &q.slash(g)?)?.fsub(&pair_induced(p, q)?))
}
