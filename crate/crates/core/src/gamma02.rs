//! Γ₀(2): period polynomials through their value at the identity coset.
//!
//! With cosets I, U, U² the relations reduce to P(U) = −P(I)|S and
//! P(U²) = −P(U)|U − P(I)|U², and P(I) ranges over the kernel U_w of
//! P ↦ P|(ST − ST⁻¹)(1 + S).

use std::sync::Arc;

use num_traits::One;
use serde_json::{json, Value};

use crate::analytic::{c_k, identity_periods, rho_identity, NewformData};
use crate::cosets::{CosetSpace, GroupKind, Mat2};
use crate::error::{Error, Result};
use crate::exactalg::{bernoulli, binomial, int, kernel_basis, to_f64, ComplexBall, DenseMatrix, Field, Rational, Scalar, ScalarField};
use crate::polyspace::{eps_split_vector, pair_braces_poly, pair_vw, slash_poly, PolyValue, PolyVector};

/// The value P(I) of a period polynomial for Γ₀(2).
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalPoly(pub PolyValue);

pub fn gamma02_space(k: i64) -> Result<Arc<CosetSpace>> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Invalid(format!("Γ₀(2) needs even weight, got {k}")));
    }
    Ok(Arc::new(CosetSpace::build(GroupKind::Gamma0, 2, k)?))
}

fn st() -> Mat2 {
    Mat2::S.mul(&Mat2::T)
}

fn st_inv() -> Mat2 {
    Mat2::S.mul(&Mat2::T_INV)
}

fn add(p: &PolyValue, q: &PolyValue) -> PolyValue {
    PolyValue(p.0.iter().zip(&q.0).map(|(a, b)| a.fadd(b)).collect())
}

fn sub(p: &PolyValue, q: &PolyValue) -> PolyValue {
    PolyValue(p.0.iter().zip(&q.0).map(|(a, b)| a.fsub(b)).collect())
}

fn neg(p: &PolyValue) -> PolyValue {
    PolyValue(p.0.iter().map(|a| a.fneg()).collect())
}

/// P|(ST − ST⁻¹)(1 + S).
pub fn principal_relation(p: &PolyValue) -> PolyValue {
    let w = p.w();
    let d = sub(&slash_poly(p, &st(), w), &slash_poly(p, &st_inv(), w));
    add(&d, &slash_poly(&d, &Mat2::S, w))
}

/// P|(T − T⁻¹).
pub fn t_difference(p: &PolyValue) -> PolyValue {
    let w = p.w();
    sub(&slash_poly(p, &Mat2::T, w), &slash_poly(p, &Mat2::T_INV, w))
}

/// Basis of U_w as coefficient columns.
pub fn principal_space(w: usize) -> Result<DenseMatrix> {
    let cols: Vec<Vec<Scalar>> = (0..=w)
        .map(|j| {
            let mut e = vec![Scalar::from(0); w + 1];
            e[j] = Scalar::from(1);
            principal_relation(&PolyValue(e)).0
        })
        .collect();
    kernel_basis(&DenseMatrix::from_columns(&ScalarField::Rational, w + 1, &cols))
}

fn max_abs(p: &PolyValue) -> f64 {
    p.0.iter().map(|x| x.to_complex().abs()).fold(0.0, f64::max)
}

fn vanishes(p: &PolyValue, scale: f64) -> bool {
    if p.0.iter().all(|x| x.field().is_exact()) {
        p.0.iter().all(|x| x.is_zero_elt())
    } else {
        max_abs(p) <= 1e-9 * scale.max(1e-300)
    }
}

/// Rebuilds P on the cosets from P(I).
pub fn from_principal(space: &Arc<CosetSpace>, p: &PrincipalPoly) -> Result<PolyVector> {
    if space.kind() != GroupKind::Gamma0 || space.level() != 2 {
        return Err(Error::Invalid("the principal-part model is specific to Γ₀(2)".into()));
    }
    let w = space.w();
    let pi = &p.0;
    if pi.w() != w {
        return Err(Error::Dimension(format!("principal polynomial of degree bound {} for w = {w}", pi.w())));
    }
    if !vanishes(&principal_relation(pi), max_abs(pi)) {
        return Err(Error::NotInSpace("P(I) does not satisfy P|(ST − ST⁻¹)(1 + S) = 0".into()));
    }
    let pu = neg(&slash_poly(pi, &Mat2::S, w));
    let pu2 = neg(&add(&slash_poly(&pu, &Mat2::U, w), &slash_poly(pi, &Mat2::U2, w)));
    let field = pi.0.iter().fold(ScalarField::Rational, |f, x| f.join(&x.field()).unwrap_or(ScalarField::Complex));
    let mut values = vec![PolyValue::zero(&field, w); space.index()];
    for (a, v) in [(Mat2::IDENTITY, pi), (Mat2::U, &pu), (Mat2::U2, &pu2)] {
        let (l, s) = space.label_of(&a)?;
        let sign = if s < 0 && w % 2 == 1 { -Rational::one() } else { Rational::one() };
        values[l] = PolyValue(v.0.iter().map(|x| x.fscale(&sign)).collect());
    }
    PolyVector::from_values(space, &values)
}

/// P ↦ P(I), rejecting vectors that are not determined by P(I).
pub fn to_principal(p: &PolyVector) -> Result<PrincipalPoly> {
    let pi = PrincipalPoly(p.value_at(&Mat2::IDENTITY)?);
    let back = from_principal(p.space(), &pi)?;
    let scale = p.flat().iter().map(|x| x.to_complex().abs()).fold(0.0, f64::max);
    let diff = PolyValue(back.sub(p)?.into_flat());
    if !vanishes(&diff, scale) {
        return Err(Error::NotInSpace("the vector violates P(U) = −P(I)|S or the U² relation".into()));
    }
    Ok(pi)
}

/// ⟨P(I)|T − T⁻¹, Q(I)⟩.
pub fn reduced_pairing(p: &PrincipalPoly, q: &PrincipalPoly) -> Scalar {
    pair_vw(&t_difference(&p.0), &q.0, p.0.w())
}

/// s_n = Σ_{j ≤ n, n − j odd} C(n, j) r_j.
pub fn s_combinations<F: Field>(r: &[F]) -> Vec<F> {
    (0..r.len())
        .map(|n| {
            let mut acc = r[0].fsub(&r[0]);
            for j in (0..n).rev().step_by(2) {
                acc = acc.fadd(&r[j].fscale(&binomial(n as u64, j as u64)));
            }
            acc
        })
        .collect()
}

/// r_j read back from P = Σ_j (−1)^j C(w,j) r_{w−j} X^j.
pub fn periods_of_principal<F: Field>(p: &[F]) -> Vec<F> {
    let w = p.len() - 1;
    (0..=w)
        .map(|n| {
            let j = w - n;
            let c = binomial(w as u64, j as u64).recip();
            p[j].fscale(&if j % 2 == 0 { c } else { -c })
        })
        .collect()
}

/// −2 Σ (−1)ⁿ C(w,n) s_n X^{w−n}.
pub fn t_difference_closed_form<F: Field>(p: &[F]) -> Vec<F> {
    let w = p.len() - 1;
    let s = s_combinations(&periods_of_principal(p));
    let mut out: Vec<F> = p.iter().map(|x| x.fsub(x)).collect();
    for (n, sn) in s.iter().enumerate() {
        let c = binomial(w as u64, n as u64) * int(if n % 2 == 0 { -2 } else { 2 });
        out[w - n] = sn.fscale(&c);
    }
    out
}

fn check_generator_args(k: i64, n: i64) -> Result<i64> {
    let w = k - 2;
    if k <= 2 || k % 2 != 0 {
        return Err(Error::Invalid(format!("generator periods need even k > 2, got {k}")));
    }
    if n % 2 == 0 || n <= 0 || n >= w {
        return Err(Error::Invalid(format!("generator periods need odd n with 0 < n < w = {w}, got {n}")));
    }
    Ok(w)
}

/// (2/C_k) r₀(R_n) for N = 2.
fn r0_scaled(k: i64, n: i64) -> Result<Rational> {
    let w = check_generator_args(k, n)?;
    let nn = int(2);
    let nt = w - n;
    let bt = bernoulli((nt + 1) as usize) / int(nt + 1);
    let bn = bernoulli((n + 1) as usize) / int(n + 1);
    let alpha = (Rational::one() - nn.pow(-(n as i32) - 1)) / (Rational::one() - nn.pow(-(k as i32)));
    let mut v = -nn.pow(nt as i32) * &bt + int(k) / bernoulli(k as usize) * bn * bt * alpha / nn;
    if w == n + 1 {
        v += Rational::new(1.into(), w.into());
    }
    Ok(v)
}

/// ((2/C_k) r₀(R_n), (2/C_k) r_w(R_n)) with r_w(R_n) = −r₀(R_{w−n})/2ⁿ.
pub fn fy_generator_periods(k: i64, n: i64) -> Result<(Rational, Rational)> {
    let w = check_generator_args(k, n)?;
    let r0 = r0_scaled(k, n)?;
    let rw = -r0_scaled(k, w - n)? / int(2).pow(n as i32);
    Ok((r0, rw))
}

/// One extra relation: r_a(f) against Σ_{n odd} C(w,n) s_{w−n}(f) (2/C_k) r_a(R_n).
#[derive(Clone, Debug)]
pub struct RelationRow {
    pub a: usize,
    pub lhs: ComplexBall,
    pub rhs: ComplexBall,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub weight: i64,
    pub rows: Vec<RelationRow>,
}

impl RelationReport {
    pub fn max_relative(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_residual).fold(0.0, f64::max)
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("k = {}\n{:>3}  {:>40}  {:>40}  {:>10}  {:>10}\n", self.weight, "a", "lhs", "rhs", "abs", "rel");
        for r in &self.rows {
            s += &format!(
                "{:>3}  {:>40}  {:>40}  {:>10.3e}  {:>10.3e}\n",
                r.a,
                format!("{:.12e}{:+.12e}i", r.lhs.re, r.lhs.im),
                format!("{:.12e}{:+.12e}i", r.rhs.re, r.rhs.im),
                r.abs_residual,
                r.rel_residual
            );
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let cz = |z: &ComplexBall| json!({"re": z.re, "im": z.im, "err": z.err});
        json!({
            "weight": self.weight,
            "rows": self.rows.iter().map(|r| json!({
                "a": r.a, "lhs": cz(&r.lhs), "rhs": cz(&r.rhs),
                "abs_residual": r.abs_residual, "rel_residual": r.rel_residual,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Both extra relations (a = 0, w) for given periods r₀, …, r_w.
pub fn extra_relations_from_periods(k: i64, r: &[ComplexBall]) -> Result<RelationReport> {
    let w = (k - 2) as usize;
    if r.len() != w + 1 {
        return Err(Error::Dimension(format!("expected {} periods, got {}", w + 1, r.len())));
    }
    let s = s_combinations(r);
    let mut rows = Vec::new();
    for a in [0, w] {
        let mut rhs = ComplexBall::exact(0.0, 0.0);
        for n in (1..w).step_by(2) {
            let (g0, gw) = fy_generator_periods(k, n as i64)?;
            let g = if a == 0 { g0 } else { gw };
            let c = to_f64(&binomial(w as u64, n as u64)) * to_f64(&g);
            rhs = rhs.add(&s[w - n].scale(c));
        }
        let lhs = r[a];
        let abs_residual = lhs.dist(&rhs);
        rows.push(RelationRow { a, lhs, rhs, abs_residual, rel_residual: abs_residual / lhs.abs().max(f64::MIN_POSITIVE) });
    }
    Ok(RelationReport { weight: k, rows })
}

/// The extra relations for a cusp form on Γ₀(2) from its numerically computed periods.
pub fn extra_relations_check(f: &NewformData, terms: usize) -> Result<RelationReport> {
    if f.level != 2 {
        return Err(Error::Invalid(format!("expected a form on Γ₀(2), got level {}", f.level)));
    }
    if ![8, 10, 14].contains(&f.weight) {
        return Err(Error::Invalid(format!("weight {} is not supported (8, 10, 14)", f.weight)));
    }
    extra_relations_from_periods(f.weight, &identity_periods(f, terms)?)
}

/// 3C_k(f, f) from P_f = ρ_f(I): the reduced value ⟨P_f⁺|T − T⁻¹, conj P_f⁻⟩ and
/// the full-model value {ρ_f⁺, conj ρ_f⁻}.
#[derive(Clone, Debug)]
pub struct ReducedPetersson {
    pub reduced: ComplexBall,
    pub full: ComplexBall,
    /// (f, f) = reduced / 3C_k.
    pub norm: ComplexBall,
}

pub fn reduced_petersson(f: &NewformData, terms: usize) -> Result<ReducedPetersson> {
    let space = gamma02_space(f.weight)?;
    let rho_i: Vec<Scalar> = rho_identity(&identity_periods(f, terms)?).into_iter().map(Scalar::Complex).collect();
    let w = space.w();
    let even: Vec<Scalar> = (0..=w).map(|j| if j % 2 == 0 { rho_i[j].clone() } else { Scalar::Complex(ComplexBall::exact(0.0, 0.0)) }).collect();
    let odd: Vec<Scalar> = (0..=w).map(|j| if j % 2 == 1 { rho_i[j].clone() } else { Scalar::Complex(ComplexBall::exact(0.0, 0.0)) }).collect();
    let conj = |v: &[Scalar]| PolyValue(v.iter().map(|x| x.conj()).collect());
    let reduced = reduced_pairing(&PrincipalPoly(PolyValue(even)), &PrincipalPoly(conj(&odd))).to_complex();
    let rho = from_principal(&space, &PrincipalPoly(PolyValue(rho_i)))?;
    let (plus, minus) = eps_split_vector(&rho);
    let full = pair_braces_poly(&plus, &minus.conj())?.to_complex();
    let norm = reduced.div(&c_k(f.weight).scale(3.0)).ok_or_else(|| Error::Numerical("C_k vanished".into()))?;
    Ok(ReducedPetersson { reduced, full, norm })
}
