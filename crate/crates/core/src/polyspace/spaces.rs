use num_traits::{One, Zero};
use std::sync::Arc;

use super::ops::{group_ring_contributions, LaurentOp, LinOp};
use super::subspace::{Layout, Subspace};
use super::vector::{sign_pow, ExtPolyVector, PolyVector};
use crate::cosets::{cusp_classes, Character, CosetSpace, GroupKind, Mat2};
use crate::error::{Error, Result};
use crate::exactalg::{euler_phi, int, sparse_kernel, Field, Rational, Scalar, ScalarField, SparseRow};

fn one() -> Rational {
    Rational::one()
}

fn relation_ops(space: &CosetSpace) -> Result<[LinOp; 2]> {
    Ok([
        LinOp::group_ring(space, &[(Mat2::IDENTITY, one()), (Mat2::S, one())])?,
        LinOp::group_ring(space, &[(Mat2::IDENTITY, one()), (Mat2::U, one()), (Mat2::U2, one())])?,
    ])
}

fn laurent_relation_ops(space: &CosetSpace) -> Result<[LaurentOp; 2]> {
    let a = group_ring_contributions(space, &[(Mat2::IDENTITY, one()), (Mat2::S, one())])?;
    let b = group_ring_contributions(space, &[(Mat2::IDENTITY, one()), (Mat2::U, one()), (Mat2::U2, one())])?;
    Ok([LaurentOp::from_contributions(space, &a), LaurentOp::from_contributions(space, &b)])
}

fn kernel_subspace(space: &Arc<CosetSpace>, layout: Layout, rows: Vec<SparseRow<Rational>>, ncols: usize) -> Subspace {
    let ker = sparse_kernel(rows, ncols, &());
    let pivots = ker.iter().map(|r| r[0].0).collect();
    let rows = ker.into_iter().map(|r| r.into_iter().map(|(c, x)| (c, Scalar::from(x))).collect()).collect();
    Subspace::from_echelon(space, layout, &ScalarField::Rational, pivots, rows)
}

/// W_w^Γ: solutions of P|(1+S) = P|(1+U+U²) = 0 (P|J = P is built into the labels).
pub fn build_w(space: &Arc<CosetSpace>) -> Result<Subspace> {
    if space.is_degenerate() {
        return Ok(Subspace::zero(space, Layout::Poly, &ScalarField::Rational));
    }
    let ops = relation_ops(space)?;
    let n = Layout::Poly.ambient_dim(space);
    let rows: Vec<SparseRow<Rational>> = ops.into_iter().flat_map(|o| o.rows).filter(|r| !r.is_empty()).collect();
    Ok(kernel_subspace(space, Layout::Poly, rows, n))
}

/// T-invariant constant families, one per cusp (regular cusps only when w is odd):
/// stored value s^w along the T-walk from the representative.
pub fn cusp_constant_families(space: &CosetSpace) -> Vec<Vec<Rational>> {
    if space.is_degenerate() {
        return vec![];
    }
    let w = space.w();
    let cusps = cusp_classes(space);
    let mut out = Vec::new();
    for class in &cusps.classes {
        if w % 2 == 1 && !class.regular {
            continue;
        }
        let mut c = vec![Rational::zero(); space.index()];
        let mut cur = (class.representative, 1i8);
        for _ in 0..class.width {
            c[cur.0] = sign_pow(cur.1, w);
            let (l, s) = space.tables().t[cur.0];
            cur = (l, s * cur.1);
        }
        out.push(c);
    }
    out
}

/// P' ↦ P'|(1−S) for a constant family P'(A) = c_A.
pub fn coboundary_of(space: &Arc<CosetSpace>, consts: &[Rational]) -> Result<PolyVector> {
    let w = space.w();
    let mut flat = vec![Scalar::from(0); space.index() * (w + 1)];
    for (l, c) in consts.iter().enumerate() {
        flat[l * (w + 1)] = Scalar::from(c.clone());
    }
    let p = PolyVector::from_flat(space, flat)?;
    p.sub(&p.slash(&Mat2::S)?)
}

/// C_w^Γ (in V_w^Γ) and D_w^Γ (tails only, in the extended layout).
pub fn build_coboundary_and_d(space: &Arc<CosetSpace>) -> Result<(Subspace, Subspace)> {
    let fams = cusp_constant_families(space);
    let q = ScalarField::Rational;
    let mut cvecs = Vec::new();
    let mut dvecs = Vec::new();
    let np = Layout::Poly.ambient_dim(space);
    for f in &fams {
        cvecs.push(coboundary_of(space, f)?.into_flat());
        let mut d = vec![Scalar::from(0); np];
        d.extend(f.iter().map(|x| Scalar::from(x.clone())));
        dvecs.push(d);
    }
    Ok((Subspace::span(space, Layout::Poly, &q, cvecs)?, Subspace::span(space, Layout::Ext, &q, dvecs)?))
}

/// W̃_w^Γ in (P, c) coordinates: the relations are imposed on the full Laurent
/// data and read off in partial fractions (Laurent part and every residue vanish).
pub fn build_w_extended(space: &Arc<CosetSpace>) -> Result<Subspace> {
    if space.is_degenerate() {
        return Ok(Subspace::zero(space, Layout::Ext, &ScalarField::Rational));
    }
    let ops = laurent_relation_ops(space)?;
    let ncols = ops[0].ncols();
    let rows: Vec<SparseRow<Rational>> = ops.iter().flat_map(|o| o.relation_rows().cloned()).collect();
    let ker = sparse_kernel(rows, ncols, &());
    let mut vecs = Vec::with_capacity(ker.len());
    for r in ker {
        let mut dense = vec![Scalar::from(0); ncols];
        for (c, x) in r {
            dense[c] = Scalar::from(x);
        }
        vecs.push(ExtPolyVector::from_laurent(space, &dense)?.flat());
    }
    Subspace::span(space, Layout::Ext, &ScalarField::Rational, vecs)
}

/// Values of the extended relations P̃|(1+S), P̃|(1+U+U²) (Laurent parts and residues).
pub fn extended_relation_values(v: &ExtPolyVector) -> Result<Vec<Scalar>> {
    let ops = laurent_relation_ops(v.space())?;
    let lau = v.to_laurent();
    let mut out = Vec::new();
    for op in &ops {
        let (l, poles) = op.apply(&lau);
        out.extend(l);
        out.extend(poles.into_iter().map(|(_, x)| x));
    }
    Ok(out)
}

/// Whether P̃ satisfies the extended relations exactly.
pub fn satisfies_extended_relations(v: &ExtPolyVector) -> Result<bool> {
    Ok(v.tails_periodic() && extended_relation_values(v)?.iter().all(|x| x.is_zero_elt()))
}

/// Largest absolute value among the extended relations (for numerical vectors).
pub fn extended_relation_residual(v: &ExtPolyVector) -> Result<f64> {
    Ok(extended_relation_values(v)?.iter().map(|x| x.to_complex().abs()).fold(0.0, f64::max))
}

/// P̃ = P + P⁰|(1−S): returns P and the tail part (zero V-component).
pub fn decompose_extended(v: &ExtPolyVector) -> Result<(PolyVector, ExtPolyVector)> {
    if !satisfies_extended_relations(v)? {
        return Err(Error::NotInSpace("vector does not satisfy the extended period relations".into()));
    }
    let tail = ExtPolyVector::new(PolyVector::zero(v.space(), v.field()), v.tails.clone())?;
    Ok((v.poly.clone(), tail))
}

/// ε on the extended layout: P ↦ P|ε and c_A ↦ (−1)^{w+1} c_{εAε}.
pub fn eps_ext(v: &ExtPolyVector) -> ExtPolyVector {
    let sp = v.space();
    let w = sp.w();
    let par = sign_pow(-1, w + 1);
    let tails = (0..sp.index())
        .map(|l| {
            let (l2, s) = sp.eps_table()[l];
            v.tails[l2].fscale(&(sign_pow(s, w) * &par))
        })
        .collect();
    ExtPolyVector::new(v.poly.eps(), tails).expect("same shape")
}

fn eps_flat(space: &Arc<CosetSpace>, layout: Layout, v: &[Scalar]) -> Vec<Scalar> {
    match layout {
        Layout::Poly => PolyVector::from_flat(space, v.to_vec()).expect("ambient length").eps().into_flat(),
        Layout::Ext => eps_ext(&ExtPolyVector::from_flat(space, v.to_vec()).expect("ambient length")).flat(),
    }
}

/// (P + P|ε)/2 and (P − P|ε)/2.
pub fn eps_split_vector(p: &PolyVector) -> (PolyVector, PolyVector) {
    let e = p.eps();
    let half = Scalar::from(crate::exactalg::rat(1, 2));
    (p.add(&e).unwrap().scale(&half), p.sub(&e).unwrap().scale(&half))
}

/// The ±1 eigenspaces of ε on a subspace stable under ε.
pub fn eps_split(sub: &Subspace) -> Result<(Subspace, Subspace)> {
    let sp = sub.space();
    let half = crate::exactalg::rat(1, 2);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for b in sub.basis() {
        let e = eps_flat(sp, sub.layout(), b);
        plus.push(b.iter().zip(&e).map(|(x, y)| x.fadd(y).fscale(&half)).collect());
        minus.push(b.iter().zip(&e).map(|(x, y)| x.fsub(y).fscale(&half)).collect());
    }
    let p = Subspace::span(sp, sub.layout(), sub.field(), plus)?;
    let m = Subspace::span(sp, sub.layout(), sub.field(), minus)?;
    if p.dim() + m.dim() != sub.dim() || !p.is_subspace_of(sub) || !m.is_subspace_of(sub) {
        return Err(Error::NotStable(0));
    }
    Ok((p, m))
}

/// Diamond operator R_u: (R_u P)(A) = P(B A) with B ∈ Γ₀(N), B ≡ (* *; 0 u).
pub fn diamond_flat(space: &CosetSpace, layout: Layout, u: i64, v: &[Scalar]) -> Vec<Scalar> {
    let w = space.w();
    let m = w + 1;
    let n = space.index();
    let mut out = v.to_vec();
    for l in 0..n {
        let (c, d) = space.labels()[l];
        let (l2, s) = space.lookup_row(u * c, u * d).expect("u is a unit");
        let sg = sign_pow(s, w);
        for i in 0..m {
            out[l * m + i] = v[l2 * m + i].fscale(&sg);
        }
        if layout == Layout::Ext {
            out[n * m + l] = v[n * m + l2].fscale(&sg);
        }
    }
    out
}

/// The χ-isotypic part of a subspace of a Γ₁(N) space, over the field of χ.
pub fn chi_component(sub: &Subspace, chi: &Character) -> Result<Subspace> {
    let sp = sub.space();
    if sp.kind() != GroupKind::Gamma1 || sp.level() != chi.modulus() {
        return Err(Error::Invalid(format!(
            "character mod {} needs a Γ₁({}) space, got {}({})",
            chi.modulus(),
            chi.modulus(),
            sp.kind(),
            sp.level()
        )));
    }
    let field = sub.field().join(&chi.field()).ok_or_else(|| Error::FieldMismatch("character field".into()))?;
    if chi.parity() != sp.parity() {
        eprintln!("warning: chi(-1) != (-1)^k, the chi-component is zero");
        return Ok(Subspace::zero(sp, sub.layout(), &field));
    }
    let n = sp.level();
    let units: Vec<i64> = (0..n).filter(|u| crate::exactalg::gcd(*u, n) == 1).collect();
    let scale = Rational::new(1.into(), (euler_phi(n as u64) as i64).into());
    let inv = chi.conj();
    let mut vecs = Vec::new();
    for b in sub.basis() {
        let mut acc: Vec<Scalar> = vec![field.zero(); b.len()];
        for &u in &units {
            let r = diamond_flat(sp, sub.layout(), u, b);
            let cu = inv.value(u);
            for (a, x) in acc.iter_mut().zip(&r) {
                if !x.is_zero_elt() {
                    *a = a.fadd(&x.fmul(&cu));
                }
            }
        }
        vecs.push(acc.iter().map(|x| x.fscale(&scale)).collect());
    }
    Subspace::span(sp, sub.layout(), &field, vecs)
}

/// Whether (C_w^{Γ₀(N)})⁻ = 0, computed at weight 4.
pub fn cminus_trivial(level: i64) -> Result<bool> {
    let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, level, 4)?);
    let (c, _) = build_coboundary_and_d(&sp)?;
    let (_, minus) = eps_split(&c)?;
    Ok(minus.dim() == 0)
}

/// Stored tail c ↦ the constant used in the duality formula, (−1)^w (w+1) c.
pub fn duality_constant(tail: &Scalar, w: usize) -> Scalar {
    tail.fscale(&(sign_pow(-1, w) * int(w as i64 + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(kind: GroupKind, n: i64, k: i64) -> Arc<CosetSpace> {
        Arc::new(CosetSpace::build(kind, n, k).unwrap())
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(build_w(&sp(GroupKind::Gamma0, 1, 12)).unwrap().dim(), 3);
        let w5 = build_w(&sp(GroupKind::Gamma0, 5, 4)).unwrap();
        let (p, m) = eps_split(&w5).unwrap();
        assert_eq!((w5.dim(), p.dim(), m.dim()), (4, 3, 1));
        assert_eq!(build_w(&sp(GroupKind::Gamma0, 5, 3)).unwrap().dim(), 0);
    }

    #[test]
    fn coboundaries() {
        let (c, d) = build_coboundary_and_d(&sp(GroupKind::Gamma0, 6, 2)).unwrap();
        assert_eq!((c.dim(), d.dim()), (3, 4));
        let (c, _) = build_coboundary_and_d(&sp(GroupKind::Gamma0, 2, 8)).unwrap();
        assert_eq!(c.dim(), 2);
        let (c, d) = build_coboundary_and_d(&sp(GroupKind::Gamma1, 5, 3)).unwrap();
        assert_eq!((c.dim(), d.dim()), (4, 4));
        let (c, d) = build_coboundary_and_d(&sp(GroupKind::Gamma1, 4, 3)).unwrap();
        assert_eq!((c.dim(), d.dim()), (2, 2));
    }

    #[test]
    fn c_inside_w() {
        for (kind, n, k) in [(GroupKind::Gamma0, 6, 2), (GroupKind::Gamma0, 9, 4), (GroupKind::Gamma1, 5, 3), (GroupKind::Gamma1, 4, 4)] {
            let s = sp(kind, n, k);
            let (c, _) = build_coboundary_and_d(&s).unwrap();
            assert!(c.is_subspace_of(&build_w(&s).unwrap()));
        }
    }

    #[test]
    fn extended_dimensions() {
        assert_eq!(build_w_extended(&sp(GroupKind::Gamma0, 5, 4)).unwrap().dim(), 6);
        assert_eq!(build_w_extended(&sp(GroupKind::Gamma0, 1, 12)).unwrap().dim(), 4);
        let s6 = sp(GroupKind::Gamma0, 6, 2);
        let wt = build_w_extended(&s6).unwrap();
        assert_eq!(wt.dim(), 6);
        // k = 2: Σ c_A = 0 emerges from the relations
        for i in 0..wt.dim() {
            let v = wt.ext_vector(i);
            let total = v.tails.iter().fold(Scalar::from(0), |a, x| a.fadd(x));
            assert!(total.is_zero_elt());
            assert!(satisfies_extended_relations(&v).unwrap());
            let (p, t) = decompose_extended(&v).unwrap();
            assert_eq!(ExtPolyVector::new(p, t.tails).unwrap(), v);
        }
    }

    #[test]
    fn eps_split_of_a_vector() {
        let s = sp(GroupKind::Gamma0, 2, 4);
        let vals: Vec<_> = (0..3).map(|_| super::super::PolyValue::from_i64(&[1, 1, 1])).collect();
        let p = PolyVector::from_values(&s, &vals).unwrap();
        let (plus, minus) = eps_split_vector(&p);
        assert_eq!(plus.value(0), super::super::PolyValue::from_i64(&[1, 0, 1]));
        assert_eq!(plus.add(&minus).unwrap(), p);
        assert_eq!(plus.eps(), plus);
    }

    #[test]
    fn chi_components_sum_up() {
        let s = sp(GroupKind::Gamma1, 5, 4);
        let w = build_w(&s).unwrap();
        let chars = Character::all(5);
        let dims: Vec<usize> = chars.iter().map(|c| chi_component(&w, c).unwrap().dim()).collect();
        assert_eq!(dims.iter().sum::<usize>(), w.dim());
        assert_eq!(dims[0], build_w(&sp(GroupKind::Gamma0, 5, 4)).unwrap().dim());
        for c in &chars {
            assert_eq!(chi_component(&w, c).unwrap().dim(), chi_component(&w, &c.conj()).unwrap().dim());
        }
    }

    #[test]
    fn cminus_examples() {
        assert!(cminus_trivial(1).unwrap());
        assert!(cminus_trivial(24).unwrap());
        assert!(!cminus_trivial(9).unwrap());
    }
}
